//! Cross-check formulation: `u = phi + w` around a fixed smooth step `phi`,
//! with `a(D) phi` taken from the singular-integral representation.

use rustfft::num_complex::Complex64;

use super::config::SolverConfig;
use super::integrator::{substeps, IntegratingFactor};
use crate::error::{Error, Result};
use crate::spectral::{calibrate_c_alpha, fractional_laplacian_of_fn, Field};

#[derive(Clone, Debug)]
pub struct BackgroundState {
    pub t: f64,
    /// Deviation `u - phi`, carrying its spectrum.
    pub deviation: Field,
}

pub struct BackgroundSolver {
    config: SolverConfig,
    factor: IntegratingFactor,
    mask: Vec<bool>,
    wavenumbers: Vec<f64>,
    phi: Field,
    phi_x: Vec<f64>,
    /// Spectrum of `-a(D) phi`.
    forcing: Vec<Complex64>,
}

impl BackgroundSolver {
    /// Background `phi = (u_- + u_+)/2 + (u_+ - u_-)/2 tanh(x)`.
    pub fn new(config: SolverConfig, u_minus: f64, u_plus: f64) -> Result<Self> {
        config.validate()?;
        let grid = config.grid.clone();
        let mid = 0.5 * (u_minus + u_plus);
        let half = 0.5 * (u_plus - u_minus);
        let phi_fn = move |x: f64| mid + half * libm::tanh(x);
        let phi_xx_fn = move |x: f64| {
            let s = 1.0 / libm::cosh(x);
            -2.0 * half * s * s * libm::tanh(x)
        };
        let phi = Field::from_fn(&grid, phi_fn)?;
        let phi_x = grid
            .points()
            .into_iter()
            .map(|x| {
                let s = 1.0 / libm::cosh(x);
                half * s * s
            })
            .collect();

        let symbol = &config.symbol;
        let mut operator = Field::from_fn(&grid, |x| -symbol.local_coefficient() * phi_xx_fn(x))?;
        if half != 0.0 {
            for term in symbol.terms() {
                let part = if term.alpha == 2.0 {
                    Field::from_fn(&grid, |x| -phi_xx_fn(x))?
                } else if term.alpha > 1.0 {
                    let c = calibrate_c_alpha(term.alpha)?;
                    let reach = 2.0 * grid.half_length();
                    fractional_laplacian_of_fn(&grid, term.alpha, c, reach, phi_fn, phi_xx_fn, Some((u_minus, u_plus)))?
                } else {
                    return Err(Error::param(
                        "symbol",
                        format!("the background formulation needs every alpha_j in (1, 2], got {}", term.alpha),
                    ));
                };
                operator = operator.combine(1.0, &part, term.weight)?;
            }
        }
        let forcing = grid.forward(operator.values()).into_iter().map(|c| -c).collect();
        let factor = IntegratingFactor::new(&grid, &config.symbol);
        let mask = grid.dealias_mask();
        let wavenumbers = grid.wavenumbers();
        Ok(BackgroundSolver { config, factor, mask, wavenumbers, phi, phi_x, forcing })
    }

    pub fn background(&self) -> &Field {
        &self.phi
    }

    pub fn init(&self, u0: &Field) -> Result<BackgroundState> {
        let deviation = u0.combine(1.0, &self.phi, -1.0)?.with_spectrum();
        Ok(BackgroundState { t: 0.0, deviation })
    }

    pub fn u(&self, state: &BackgroundState) -> Field {
        state.deviation.combine(1.0, &self.phi, 1.0).expect("same grid")
    }

    /// `-a(D) phi - F[f'(u) u_x]`, the product dealiased.
    fn rhs(&self, w_hat: &[Complex64]) -> Vec<Complex64> {
        let grid = &self.config.grid;
        let n = grid.len();
        let zero = Complex64::new(0.0, 0.0);
        if !self.config.nonlinear {
            return self.forcing.clone();
        }
        let nyquist = grid.nyquist_slot();
        // w and w_x share one inverse transform as w + i w_x
        let packed: Vec<Complex64> = (0..n)
            .map(|j| {
                if !self.mask[j] || j == nyquist {
                    return zero;
                }
                let c = w_hat[j];
                c + Complex64::new(0.0, 1.0) * (Complex64::new(0.0, self.wavenumbers[j]) * c)
            })
            .collect();
        let z = grid.inverse_complex(&packed);
        let flux = self.config.flux;
        let product: Vec<Complex64> = z
            .iter()
            .zip(self.phi.values())
            .zip(&self.phi_x)
            .map(|((c, phi), phi_x)| Complex64::new(flux.speed(phi + c.re) * (phi_x + c.im), 0.0))
            .collect();
        let g = grid.forward_complex(product);
        (0..n).map(|j| self.forcing[j] - if self.mask[j] { g[j] } else { zero }).collect()
    }

    fn step_by(&self, state: &mut BackgroundState, h: f64) -> Result<()> {
        let spectrum = state.deviation.spectrum().into_owned();
        let next = self.factor.step(&spectrum, h, |s| self.rhs(s));
        if next.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Blowup { t: state.t + h, detail: "non-finite Fourier coefficient".into() });
        }
        state.deviation = Field::from_spectrum(&self.config.grid, next)?;
        state.t += h;
        Ok(())
    }

    pub fn step(&self, state: &mut BackgroundState) -> Result<()> {
        self.step_by(state, self.config.dt)
    }

    pub fn advance_to(&self, state: &mut BackgroundState, target: f64) -> Result<()> {
        let (count, h) = substeps(state.t, target, self.config.dt);
        for _ in 0..count {
            self.step_by(state, h)?;
        }
        if count > 0 {
            state.t = target;
        }
        Ok(())
    }

    /// Advances the full field `u` by one step of size `dt`.
    pub fn step_field(&self, u: &Field, dt: f64) -> Result<Field> {
        let mut state = self.init(u)?;
        self.step_by(&mut state, dt)?;
        Ok(self.u(&state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, LevySymbol};

    fn config(l: f64, n: usize, dt: f64) -> SolverConfig {
        SolverConfig::new(Grid::new(l, n).unwrap(), LevySymbol::fractional(1.5).unwrap(), dt)
    }

    #[test]
    fn constants_stay_constant() {
        let solver = BackgroundSolver::new(config(20.0, 256, 0.05), 0.7, 0.7).unwrap();
        let u0 = Field::constant(&Grid::new(20.0, 256).unwrap(), 0.7);
        let mut state = solver.init(&u0).unwrap();
        solver.advance_to(&mut state, 1.0).unwrap();
        assert!(solver.u(&state).values().iter().all(|v| (v - 0.7).abs() < 1e-12));
    }

    #[test]
    fn one_step_drift_is_bounded() {
        let dt = 0.01;
        let solver = BackgroundSolver::new(config(40.0, 1024, dt), -1.0, 1.0).unwrap();
        let phi = solver.background().clone();
        let next = solver.step_field(&phi, dt).unwrap();
        let drift = next.sup_distance(&phi).unwrap();
        // |a(D) phi| and |phi phi_x| are both O(1) for the unit tanh
        assert!(drift > 0.0 && drift < 2.0 * dt, "{drift}");
    }

    #[test]
    fn rejects_subcritical_terms() {
        let c = SolverConfig::new(Grid::new(20.0, 64).unwrap(), LevySymbol::fractional(0.8).unwrap(), 0.1);
        assert!(BackgroundSolver::new(c, -1.0, 1.0).is_err());
    }
}
