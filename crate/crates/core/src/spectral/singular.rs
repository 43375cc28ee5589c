//! Singular-integral form of the fractional Laplacian,
//!
//! `Lambda^alpha f(x) = -C(alpha) int (f(x+z) - f(x) - f'(x) z) / |z|^{1+alpha} dz`,
//!
//! evaluated by product quadrature on the uniform grid.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{LazyLock, Mutex};

use rayon::prelude::*;

use super::field::Field;
use super::grid::Grid;
use super::ops::{apply_symbol, derivative};
use super::symbol::LevySymbol;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must lie in the open interval (1, 2), got {alpha}")))
    }
}

/// Product-Simpson weights for `int_0^Z phi(z) z^{1-alpha} dz` with
/// `phi(z) = (f(x+z) + f(x-z) - 2 f(x)) / z^2` sampled at `z_m = m h`.
///
/// The weight `z^{1-alpha}` is integrated exactly against the quadratic
/// interpolant of `phi` on each pair of cells, so the singularity at the
/// origin costs no accuracy.
struct ProductWeights {
    h: f64,
    weights: Vec<f64>,
}

impl ProductWeights {
    fn new(alpha: f64, h: f64, intervals: usize) -> Self {
        debug_assert!(intervals.is_multiple_of(2));
        let beta = 1.0 - alpha;
        let gl = GaussLegendre::new(16);
        let mut weights = vec![0.0; intervals + 1];
        let lagrange = |s: f64| [0.5 * (s - 1.0) * (s - 2.0), -s * (s - 2.0), 0.5 * s * (s - 1.0)];
        for panel in 0..intervals / 2 {
            let start = 2.0 * panel as f64;
            let local: [f64; 3] = if panel == 0 {
                // exact moments of s^beta on [0, 2]
                let mu = |j: i32| 2f64.powf(j as f64 + beta + 1.0) / (j as f64 + beta + 1.0);
                let (m0, m1, m2) = (mu(0), mu(1), mu(2));
                [0.5 * (m2 - 3.0 * m1 + 2.0 * m0), -(m2 - 2.0 * m1), 0.5 * (m2 - m1)]
            } else {
                let mut acc = [0.0; 3];
                for (node, w) in gl.nodes.iter().zip(&gl.weights) {
                    let s = 1.0 + node;
                    let base = w * (start + s).powf(beta);
                    let l = lagrange(s);
                    for i in 0..3 {
                        acc[i] += base * l[i];
                    }
                }
                acc
            };
            for i in 0..3 {
                weights[2 * panel + i] += local[i];
            }
        }
        let scale = h.powf(1.0 + beta);
        weights.iter_mut().for_each(|w| *w *= scale);
        ProductWeights { h, weights }
    }

    fn reach(&self) -> f64 {
        self.h * (self.weights.len() - 1) as f64
    }
}

/// Accumulates `int_0^inf (f(x+z)+f(x-z)-2f(x)) z^{-1-alpha} dz` for one point.
///
/// Beyond the reach of the weights the pair sum is frozen at `far_sum`, or at
/// its last sampled value when `far_sum` is `None`.
fn radial_integral(
    w: &ProductWeights,
    alpha: f64,
    center: f64,
    second_derivative: f64,
    far_sum: Option<f64>,
    pair_sum: impl Fn(usize) -> f64,
) -> f64 {
    let mut acc = w.weights[0] * second_derivative;
    let mut last = 2.0 * center;
    for (m, wm) in w.weights.iter().enumerate().skip(1) {
        let z = m as f64 * w.h;
        last = pair_sum(m);
        acc += wm * (last - 2.0 * center) / (z * z);
    }
    let reach = w.reach();
    acc + (far_sum.unwrap_or(last) - 2.0 * center) * reach.powf(-alpha) / alpha
}

/// Singular-integral fractional Laplacian of a periodic field.
///
/// The radial integral runs to `|z| = 2L` over the periodic extension, the
/// cell `|z| < dx` uses the spectral second derivative, and the remaining
/// tail is closed with the field mean.
pub fn apply_fractional_laplacian_integral(f: &Field, alpha: f64, c_alpha: f64) -> Result<Field> {
    check_alpha(alpha)?;
    if !(c_alpha.is_finite() && c_alpha > 0.0) {
        return Err(Error::param("c_alpha", format!("must be positive, got {c_alpha}")));
    }
    let grid = f.grid();
    let n = grid.len();
    let values = f.values();
    let fxx = derivative(f, 2)?;
    let fxx = fxx.values();
    let mean = values.iter().sum::<f64>() / n as f64;
    let weights = ProductWeights::new(alpha, grid.dx(), 2 * n);
    let out: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let integral = radial_integral(&weights, alpha, values[i], fxx[i], Some(2.0 * mean), |m| {
                values[(i + m) % n] + values[(i + n - m % n) % n]
            });
            -c_alpha * integral
        })
        .collect();
    Field::new(grid, out)
}

/// Singular-integral fractional Laplacian of a bounded, non-periodic function
/// sampled on the grid points. `far` holds the limits at `-inf` and `+inf`;
/// the radial integral runs to `reach` and the tail is closed with them (or
/// with the last sampled pair when `far` is `None`).
pub fn fractional_laplacian_of_fn(
    grid: &Grid,
    alpha: f64,
    c_alpha: f64,
    reach: f64,
    f: impl Fn(f64) -> f64 + Sync,
    fxx: impl Fn(f64) -> f64 + Sync,
    far: Option<(f64, f64)>,
) -> Result<Field> {
    check_alpha(alpha)?;
    let h = grid.dx();
    let mut intervals = (reach / h).ceil() as usize;
    intervals += intervals % 2;
    let weights = ProductWeights::new(alpha, h, intervals.max(2));
    let out: Vec<f64> = grid
        .points()
        .into_par_iter()
        .map(|x| {
            let integral = radial_integral(&weights, alpha, f(x), fxx(x), far.map(|(a, b)| a + b), |m| {
                let z = m as f64 * h;
                f(x + z) + f(x - z)
            });
            -c_alpha * integral
        })
        .collect();
    Field::new(grid, out)
}

/// Grid used by [`calibrate_c_alpha`].
pub fn calibration_grid() -> Grid {
    Grid::new(20.0 * PI, 1024).expect("calibration grid is valid")
}

/// Least-squares constant matching the unit-constant integral operator to the
/// spectral `|xi|^alpha` on the Gaussian `exp(-x^2)` sampled on `grid`.
pub fn calibrate_c_alpha_on(grid: &Grid, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let f = Field::from_fn(grid, |x| (-x * x).exp())?;
    let integral = apply_fractional_laplacian_integral(&f, alpha, 1.0)?;
    let spectral = apply_symbol(&f, &LevySymbol::fractional(alpha)?)?;
    let cross: f64 = integral.values().iter().zip(spectral.values()).map(|(a, b)| a * b).sum();
    let norm: f64 = integral.values().iter().map(|a| a * a).sum();
    if norm == 0.0 {
        return Err(Error::Degenerate("calibration operator vanished".into()));
    }
    Ok(cross / norm)
}

static CALIBRATION: LazyLock<Mutex<HashMap<u64, f64>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Calibrated `C(alpha)` on [`calibration_grid`], cached per `alpha`.
pub fn calibrate_c_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let key = alpha.to_bits();
    if let Some(c) = CALIBRATION.lock().expect("calibration cache poisoned").get(&key) {
        return Ok(*c);
    }
    let c = calibrate_c_alpha_on(&calibration_grid(), alpha)?;
    CALIBRATION.lock().expect("calibration cache poisoned").insert(key, c);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn closed_form(alpha: f64) -> f64 {
        alpha * 2f64.powf(alpha - 1.0) * gamma(0.5 * (1.0 + alpha)) / (PI.sqrt() * gamma(1.0 - 0.5 * alpha).abs())
    }

    fn relative_l2(a: &Field, b: &Field) -> f64 {
        let num: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.values().iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    #[test]
    fn rejects_alpha_outside_open_interval() {
        let g = Grid::new(1.0, 16).unwrap();
        let f = Field::zeros(&g);
        assert!(apply_fractional_laplacian_integral(&f, 2.0, 1.0).is_err());
        assert!(apply_fractional_laplacian_integral(&f, 1.0, 1.0).is_err());
        assert!(calibrate_c_alpha(0.9).is_err());
    }

    #[test]
    fn constant_is_annihilated() {
        let g = Grid::new(10.0, 128).unwrap();
        let out = apply_fractional_laplacian_integral(&Field::constant(&g, 2.5), 1.5, 1.0).unwrap();
        assert!(out.max_abs() < 1e-13);
    }

    #[test]
    fn linear_ramp_vanishes_in_the_interior() {
        let g = Grid::new(30.0, 512).unwrap();
        let ramp = |x: f64| x;
        let out = fractional_laplacian_of_fn(&g, 1.5, 1.0, 10.0, ramp, |_| 0.0, None).unwrap();
        for (x, v) in g.points().iter().zip(out.values()) {
            if x.abs() < 10.0 {
                assert!(v.abs() < 1e-6, "x = {x}: {v}");
            }
        }
    }

    #[test]
    fn calibration_matches_closed_form_constant() {
        for alpha in [1.1, 1.5, 1.9] {
            let c = calibrate_c_alpha(alpha).unwrap();
            let exact = closed_form(alpha);
            assert!(((c - exact) / exact).abs() < 1e-3, "alpha {alpha}: {c} vs {exact}");
        }
    }

    #[test]
    fn calibrated_operator_agrees_with_spectral() {
        let g = calibration_grid();
        let f = Field::from_fn(&g, |x| (-x * x).exp()).unwrap();
        for alpha in [1.1, 1.5, 1.9] {
            let c = calibrate_c_alpha(alpha).unwrap();
            let a = apply_fractional_laplacian_integral(&f, alpha, c).unwrap();
            let b = apply_symbol(&f, &LevySymbol::fractional(alpha).unwrap()).unwrap();
            let err = relative_l2(&a, &b);
            assert!(err < 1e-3, "alpha {alpha}: {err}");
        }
    }

    #[test]
    fn calibration_is_refinement_stable() {
        for alpha in [1.1, 1.5] {
            let coarse = calibrate_c_alpha_on(&Grid::new(20.0 * PI, 1024).unwrap(), alpha).unwrap();
            let fine = calibrate_c_alpha_on(&Grid::new(20.0 * PI, 2048).unwrap(), alpha).unwrap();
            assert!(coarse > 0.0 && coarse.is_finite());
            assert!(((coarse - fine) / fine).abs() < 1e-3, "alpha {alpha}: {coarse} vs {fine}");
        }
    }

    #[test]
    fn approaches_laplacian_as_alpha_tends_to_two() {
        let l = 20.0 * PI;
        let g = Grid::new(l, 1024).unwrap();
        let k = PI / l;
        let f = Field::from_fn(&g, |x| (k * x).cos()).unwrap();
        let target = Field::from_fn(&g, |x| k * k * (k * x).cos()).unwrap();
        let mut previous = f64::INFINITY;
        for alpha in [1.9, 1.99, 1.999] {
            let c = calibrate_c_alpha(alpha).unwrap();
            let out = apply_fractional_laplacian_integral(&f, alpha, c).unwrap();
            let err = relative_l2(&out, &target);
            assert!(err < previous, "alpha {alpha}: {err} !< {previous}");
            previous = err;
        }
        assert!(previous < 0.01, "{previous}");
    }
}
