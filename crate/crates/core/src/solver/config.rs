use serde::{Deserialize, Serialize};

use super::flux::Flux;
use crate::error::{Error, Result};
use crate::spectral::{Grid, LevySymbol};

/// Numerical setup shared by both solver formulations.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub grid: Grid,
    pub symbol: LevySymbol,
    pub flux: Flux,
    /// Largest allowed time step; sample intervals are split evenly.
    pub dt: f64,
    /// Increasing output times; the last one is `t_end`.
    pub sample_times: Vec<f64>,
    /// Switching this off leaves the exact linear evolution.
    pub nonlinear: bool,
}

/// Outcome of the box-size policy: the rarefaction fan at `t_end`, padded
/// by a quarter of its width on each side, must fit inside `[-L/2, L/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxCheck {
    pub required_half_length: f64,
    pub half_length: f64,
    pub valid: bool,
}

impl SolverConfig {
    pub fn new(grid: Grid, symbol: LevySymbol, dt: f64) -> Self {
        SolverConfig { grid, symbol, flux: Flux::Burgers, dt, sample_times: Vec::new(), nonlinear: true }
    }

    pub fn with_flux(mut self, flux: Flux) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_samples(mut self, times: Vec<f64>) -> Self {
        self.sample_times = times;
        self
    }

    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn t_end(&self) -> f64 {
        self.sample_times.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.sample_times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::param("sample_times", "must be finite and nonnegative"));
        }
        if self.sample_times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("sample_times", "must be strictly increasing"));
        }
        Ok(())
    }

    /// Advective limit `0.5 dx / max |f'(u)|` for states in `[lo, hi]`.
    pub fn cfl_limit(&self, lo: f64, hi: f64) -> f64 {
        let speed = self.flux.max_speed(lo, hi);
        if !self.nonlinear || speed == 0.0 {
            f64::INFINITY
        } else {
            0.5 * self.grid.dx() / speed
        }
    }

    pub fn box_check(&self, u_minus: f64, u_plus: f64) -> BoxCheck {
        let t = self.t_end();
        let (a, b) = (self.flux.speed(u_minus) * t, self.flux.speed(u_plus) * t);
        let (lo, hi) = (a.min(b), a.max(b));
        let pad = 0.25 * (hi - lo);
        let reach = (lo - pad).abs().max((hi + pad).abs());
        let required_half_length = 2.0 * reach;
        let half_length = self.grid.half_length();
        BoxCheck { required_half_length, half_length, valid: required_half_length <= half_length * (1.0 + 1e-9) }
    }
}
