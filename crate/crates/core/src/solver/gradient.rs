//! The gradient formulation: the unknown is `v = u_x`, which decays, and
//! `u` is recovered as `u_minus + int_{-L}^x v`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{BoxCheck, SolverConfig};
use super::datum::InitialDatum;
use super::integrator::{substeps, IntegratingFactor};
use crate::error::{Error, Result};
use crate::spectral::{cumulative_integral, Field};

/// Time stamp, gradient field and far-field states.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub t: f64,
    /// `v = u_x`, carrying its spectrum.
    pub v: Field,
    pub u_minus: f64,
    pub u_plus: f64,
    /// `||m||_1` of the (mollified) initial measure.
    pub initial_l1: f64,
    pub initial_mass: f64,
}

/// Conservation and shape diagnostics at one sample time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub mass: f64,
    /// `|mass - initial mass| / ||m||_1`.
    pub mass_drift: f64,
    pub min_v: f64,
    pub sup_v: f64,
    pub l1_v: f64,
    pub sup_u: f64,
    /// Fraction of `||v||_1` outside `[-L/2, L/2]`.
    pub escaped_fraction: f64,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub t: f64,
    pub v: Field,
    pub u: Field,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub initial: Diagnostics,
    pub initial_sup_u: f64,
    pub box_check: BoxCheck,
    pub monotone_datum: bool,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }
}

/// Pseudospectral integrator for `v_t + a(D) v + (f'(u) v)_x = 0`.
pub struct Solver {
    config: SolverConfig,
    factor: IntegratingFactor,
    mask: Vec<bool>,
    wavenumbers: Vec<f64>,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let factor = IntegratingFactor::new(&config.grid, &config.symbol);
        let mask = config.grid.dealias_mask();
        let wavenumbers = config.grid.wavenumbers();
        Ok(Solver { config, factor, mask, wavenumbers })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn init(&self, datum: &InitialDatum) -> Result<SolverState> {
        let grid = &self.config.grid;
        let v = datum.sample(grid)?.with_spectrum();
        let u_minus = datum.u_minus();
        let u_plus = datum.u_plus(grid.dx());
        let initial_mass = v.integral();
        let initial_l1 = v.values().iter().map(|x| x.abs()).sum::<f64>() * grid.dx();
        let state = SolverState { t: 0.0, v, u_minus, u_plus, initial_l1, initial_mass };
        let u = self.reconstruct_u(&state);
        let limit = self.config.cfl_limit(u.min(), u.values().iter().fold(f64::MIN, |m, x| m.max(*x)));
        if self.config.dt > limit {
            return Err(Error::Cfl { dt: self.config.dt, limit });
        }
        Ok(state)
    }

    /// `u = u_minus + int_{-L}^x v`.
    pub fn reconstruct_u(&self, state: &SolverState) -> Field {
        let values = cumulative_integral(&state.v).into_iter().map(|c| state.u_minus + c).collect();
        Field::new(&self.config.grid, values).expect("reconstruction of a finite field is finite")
    }

    /// `-i xi F[f'(u) v]` with `v` and the product dealiased.
    fn nonlinear(&self, v_hat: &[Complex64], u_minus: f64) -> Vec<Complex64> {
        let grid = &self.config.grid;
        let n = grid.len();
        let zero = Complex64::new(0.0, 0.0);
        if !self.config.nonlinear {
            return vec![zero; n];
        }
        // v and its periodic primitive P share one inverse transform as v + iP
        let packed: Vec<Complex64> = (0..n)
            .map(|j| {
                if !self.mask[j] {
                    return zero;
                }
                let c = v_hat[j];
                if j == 0 {
                    c
                } else {
                    let p = c / Complex64::new(0.0, self.wavenumbers[j]);
                    c + Complex64::new(0.0, 1.0) * p
                }
            })
            .collect();
        let z = grid.inverse_complex(&packed);
        let mean_slope = v_hat[0].re / n as f64 * grid.dx();
        let p0 = z[0].im;
        let flux = self.config.flux;
        let product: Vec<Complex64> = z
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let u = u_minus + mean_slope * j as f64 + c.im - p0;
                Complex64::new(flux.speed(u) * c.re, 0.0)
            })
            .collect();
        let g = grid.forward_complex(product);
        (0..n).map(|j| if self.mask[j] { Complex64::new(0.0, -self.wavenumbers[j]) * g[j] } else { zero }).collect()
    }

    fn step_by(&self, state: &mut SolverState, h: f64) -> Result<()> {
        let spectrum = state.v.spectrum().into_owned();
        let next = self.factor.step(&spectrum, h, |s| self.nonlinear(s, state.u_minus));
        if next.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Blowup { t: state.t + h, detail: "non-finite Fourier coefficient".into() });
        }
        state.v = Field::from_spectrum(&self.config.grid, next)
            .map_err(|e| Error::Blowup { t: state.t + h, detail: e.to_string() })?;
        state.t += h;
        Ok(())
    }

    /// One step of the configured `dt`.
    pub fn step(&self, state: &mut SolverState) -> Result<()> {
        self.step_by(state, self.config.dt)
    }

    /// Advances to `target` in equal steps no longer than `dt`.
    pub fn advance_to(&self, state: &mut SolverState, target: f64) -> Result<()> {
        let (count, h) = substeps(state.t, target, self.config.dt);
        for _ in 0..count {
            self.step_by(state, h)?;
        }
        if count > 0 {
            state.t = target;
        }
        Ok(())
    }

    pub fn diagnostics(&self, state: &SolverState, u: &Field) -> Diagnostics {
        let grid = &self.config.grid;
        let dx = grid.dx();
        let v = state.v.values();
        let mass = state.v.integral();
        let l1_v = v.iter().map(|x| x.abs()).sum::<f64>() * dx;
        let half = 0.5 * grid.half_length();
        let outside: f64 =
            v.iter().enumerate().filter(|(j, _)| grid.x(*j).abs() > half).map(|(_, x)| x.abs()).sum::<f64>() * dx;
        let scale = if state.initial_l1 > 0.0 { state.initial_l1 } else { 1.0 };
        Diagnostics {
            t: state.t,
            mass,
            mass_drift: (mass - state.initial_mass).abs() / scale,
            min_v: state.v.min(),
            sup_v: state.v.max_abs(),
            l1_v,
            sup_u: u.max_abs(),
            escaped_fraction: if l1_v > 0.0 { outside / l1_v } else { 0.0 },
        }
    }

    pub fn snapshot(&self, state: &SolverState) -> Snapshot {
        let u = self.reconstruct_u(state);
        let diagnostics = self.diagnostics(state, &u);
        Snapshot { t: state.t, v: state.v.clone(), u, diagnostics }
    }

    /// Integrates `datum` through every sample time.
    pub fn run(&self, datum: &InitialDatum) -> Result<Trajectory> {
        let mut state = self.init(datum)?;
        let first = self.snapshot(&state);
        let mut snapshots = Vec::with_capacity(self.config.sample_times.len());
        for &t in &self.config.sample_times {
            self.advance_to(&mut state, t)?;
            snapshots.push(if t == 0.0 { first.clone() } else { self.snapshot(&state) });
        }
        Ok(Trajectory {
            snapshots,
            initial: first.diagnostics,
            initial_sup_u: first.u.max_abs(),
            box_check: self.config.box_check(state.u_minus, state.u_plus),
            monotone_datum: datum.is_monotone(),
        })
    }
}
