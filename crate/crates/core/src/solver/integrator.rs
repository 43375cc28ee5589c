//! Integrating-factor (Lawson) RK4 on Fourier coefficients.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;

use crate::spectral::{Grid, LevySymbol};

type Spectrum = Vec<Complex64>;

struct Propagator {
    full: Vec<f64>,
    half: Vec<f64>,
}

/// Exact linear propagators `exp(-h a(xi))`, cached per step size.
pub(crate) struct IntegratingFactor {
    symbol_values: Vec<f64>,
    cache: Mutex<HashMap<u64, Arc<Propagator>>>,
}

impl IntegratingFactor {
    pub(crate) fn new(grid: &Grid, symbol: &LevySymbol) -> Self {
        let symbol_values = grid.wavenumbers().into_iter().map(|xi| symbol.eval(xi)).collect();
        IntegratingFactor { symbol_values, cache: Mutex::new(HashMap::new()) }
    }

    fn propagator(&self, h: f64) -> Arc<Propagator> {
        let mut cache = self.cache.lock().expect("propagator cache poisoned");
        cache
            .entry(h.to_bits())
            .or_insert_with(|| {
                Arc::new(Propagator {
                    full: self.symbol_values.iter().map(|a| (-h * a).exp()).collect(),
                    half: self.symbol_values.iter().map(|a| (-0.5 * h * a).exp()).collect(),
                })
            })
            .clone()
    }

    /// One step of size `h` for `y' = -a(D) y + rhs(y)`.
    pub(crate) fn step(&self, y: &[Complex64], h: f64, rhs: impl Fn(&[Complex64]) -> Spectrum) -> Spectrum {
        let p = self.propagator(h);
        let (e, e2) = (&p.full, &p.half);
        let n = y.len();

        let k1 = rhs(y);
        let ya: Spectrum = (0..n).map(|j| e2[j] * (y[j] + 0.5 * h * k1[j])).collect();
        let k2 = rhs(&ya);
        let yb: Spectrum = (0..n).map(|j| e2[j] * y[j] + 0.5 * h * k2[j]).collect();
        let k3 = rhs(&yb);
        let yc: Spectrum = (0..n).map(|j| e[j] * y[j] + h * e2[j] * k3[j]).collect();
        let k4 = rhs(&yc);
        (0..n).map(|j| e[j] * y[j] + h / 6.0 * (e[j] * k1[j] + 2.0 * e2[j] * (k2[j] + k3[j]) + k4[j])).collect()
    }
}

/// Splits `[t, target]` into the fewest equal steps no longer than `dt`.
pub(crate) fn substeps(t: f64, target: f64, dt: f64) -> (usize, f64) {
    let span = target - t;
    if span <= 0.0 {
        return (0, 0.0);
    }
    let count = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (count, span / count as f64)
}
