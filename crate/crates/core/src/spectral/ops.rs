use rustfft::num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use super::symbol::LevySymbol;
use crate::error::{Error, Result};

/// Multiplies the spectrum of `f` by a real even function of the wavenumber.
pub fn apply_multiplier(f: &Field, multiplier: impl Fn(f64) -> f64) -> Result<Field> {
    let grid = f.grid();
    let spectrum: Vec<Complex64> =
        f.spectrum().iter().enumerate().map(|(j, c)| c * multiplier(grid.wavenumber(j))).collect();
    Field::from_spectrum(grid, spectrum)
}

/// `a(D) f`: the diffusion operator with symbol `s` applied to `f`.
pub fn apply_symbol(f: &Field, s: &LevySymbol) -> Result<Field> {
    apply_multiplier(f, |xi| s.eval(xi))
}

/// Spectral derivative of order 1 or 2. The Nyquist mode is dropped for the
/// first derivative so the result stays real.
pub fn derivative(f: &Field, order: u32) -> Result<Field> {
    let grid = f.grid();
    let nyquist = grid.nyquist_slot();
    let spectrum: Vec<Complex64> = match order {
        1 => f
            .spectrum()
            .iter()
            .enumerate()
            .map(
                |(j, c)| {
                    if j == nyquist {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c * Complex64::new(0.0, grid.wavenumber(j))
                    }
                },
            )
            .collect(),
        2 => f
            .spectrum()
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let k = grid.wavenumber(j);
                c * (-k * k)
            })
            .collect(),
        _ => return Err(Error::param("order", format!("derivative order must be 1 or 2, got {order}"))),
    };
    Field::from_spectrum(grid, spectrum)
}

/// Discrete quadratic form `sum_k a(xi_k) |f_k|^2`, scaled so it equals
/// `integral f * a(D) f dx` on the grid.
pub fn quadratic_form(f: &Field, s: &LevySymbol) -> f64 {
    let grid = f.grid();
    let scale = grid.dx() / grid.len() as f64;
    f.spectrum().iter().enumerate().map(|(j, c)| s.eval(grid.wavenumber(j)) * c.norm_sqr()).sum::<f64>() * scale
}

/// Zeroes the modes removed by the 2/3 rule, in place.
pub fn dealias_in_place(grid: &Grid, spectrum: &mut [Complex64]) {
    for (c, keep) in spectrum.iter_mut().zip(grid.dealias_mask()) {
        if !keep {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

/// Periodic antiderivative of the zero-mean part of a spectrum:
/// `P_k = f_k / (i xi_k)` for `k != 0`, Nyquist dropped.
pub(crate) fn periodic_antiderivative_spectrum(grid: &Grid, spectrum: &[Complex64]) -> Vec<Complex64> {
    let nyquist = grid.nyquist_slot();
    spectrum
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j == 0 || j == nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                c / Complex64::new(0.0, grid.wavenumber(j))
            }
        })
        .collect()
}

/// Cumulative integral `int_{-L}^{x_j} f dx` of the trigonometric interpolant
/// of `f`, exact for band-limited data.
pub fn cumulative_integral(f: &Field) -> Vec<f64> {
    let grid = f.grid();
    let spectrum = f.spectrum();
    let mean = spectrum[0].re / grid.len() as f64;
    let primitive = grid.inverse(&periodic_antiderivative_spectrum(grid, &spectrum));
    let p0 = primitive[0];
    let dx = grid.dx();
    primitive.iter().enumerate().map(|(j, p)| mean * dx * j as f64 + p - p0).collect()
}
