use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on `[-L, L)` with `N` points.
///
/// Cloning is cheap; the FFT plans are shared behind an `Arc`.
#[derive(Clone)]
pub struct Grid {
    half_length: f64,
    n: usize,
    plans: Arc<Plans>,
}

impl Grid {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::param("half_length", format!("must be positive, got {half_length}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::param("n_points", format!("must be a power of two >= 8, got {n}")));
        }
        let mut planner = FftPlanner::new();
        let plans = Plans { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) };
        Ok(Grid { half_length, n, plans: Arc::new(plans) })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Signed mode number of FFT slot `j` (`-N/2` sits at slot `N/2`).
    pub fn mode(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    pub fn wavenumber(&self, j: usize) -> f64 {
        PI * self.mode(j) as f64 / self.half_length
    }

    /// Wavenumbers in FFT slot order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }

    pub fn nyquist_slot(&self) -> usize {
        self.n / 2
    }

    /// Slots kept by the 2/3 rule: `|k| <= N/3`.
    pub fn dealias_mask(&self) -> Vec<bool> {
        (0..self.n).map(|j| 3 * self.mode(j).unsigned_abs() as usize <= self.n).collect()
    }

    /// Unnormalized forward DFT of real samples.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.n);
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.plans.forward.process(&mut buf);
        buf
    }

    pub fn forward_complex(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        self.plans.forward.process(&mut buf);
        buf
    }

    /// Inverse DFT including the `1/N` factor, complex output.
    pub fn inverse_complex(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(spectrum.len(), self.n);
        let mut buf = spectrum.to_vec();
        self.plans.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Inverse DFT keeping the real part.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<f64> {
        self.inverse_complex(spectrum).into_iter().map(|c| c.re).collect()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("half_length", &self.half_length).field("n", &self.n).finish()
    }
}
