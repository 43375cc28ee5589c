//! Rarefaction waves and their viscous (Cole–Hopf) approximation.

mod erfc;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{fit_decay, lp_norm_values, DecayFit};
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

pub use erfc::{inv_erfcx, ln_erfc};

fn check_states(u_minus: f64, u_plus: f64) -> Result<()> {
    if !(u_minus.is_finite() && u_plus.is_finite()) {
        return Err(Error::param("u_minus/u_plus", "far-field states must be finite"));
    }
    if !(u_minus < u_plus) {
        return Err(Error::param("u_minus/u_plus", format!("need u_minus < u_plus, got {u_minus} >= {u_plus}")));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param("t", format!("waves are evaluated at t > 0, got {t}")))
    }
}

/// The entropy solution of the inviscid Riemann problem, `W(x/t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RarefactionWave {
    u_minus: f64,
    u_plus: f64,
}

impl RarefactionWave {
    pub fn new(u_minus: f64, u_plus: f64) -> Result<Self> {
        check_states(u_minus, u_plus)?;
        Ok(RarefactionWave { u_minus, u_plus })
    }

    pub fn u_minus(&self) -> f64 {
        self.u_minus
    }

    pub fn u_plus(&self) -> f64 {
        self.u_plus
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok((x / t).clamp(self.u_minus, self.u_plus))
    }

    pub fn field(&self, grid: &Grid, t: f64) -> Result<Field> {
        check_time(t)?;
        Field::from_fn(grid, |x| (x / t).clamp(self.u_minus, self.u_plus))
    }
}

/// Value and first two spatial derivatives of the viscous wave at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePoint {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
    /// `w - w^R` evaluated without cancellation against the nearer far state.
    pub deviation: f64,
}

/// Solution of `w_t - w_xx + w w_x = 0` with Riemann data `u_-` / `u_+`
/// jumping at the origin.
///
/// Cole–Hopf gives `w = u_- + (u_+ - u_-) s` with `s = A+ / (A- + A+)`, where
///
/// ```text
/// ln A- = u_-^2 t/4 - u_- x/2 + ln erfc(+(x - u_- t) / 2 sqrt(t))
/// ln A+ = u_+^2 t/4 - u_+ x/2 + ln erfc(-(x - u_+ t) / 2 sqrt(t))
/// ```
///
/// Both weights stay in the log domain so no range of `x` overflows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViscousWave {
    u_minus: f64,
    u_plus: f64,
}

impl ViscousWave {
    pub fn new(u_minus: f64, u_plus: f64) -> Result<Self> {
        check_states(u_minus, u_plus)?;
        Ok(ViscousWave { u_minus, u_plus })
    }

    pub fn u_minus(&self) -> f64 {
        self.u_minus
    }

    pub fn u_plus(&self) -> f64 {
        self.u_plus
    }

    pub fn rarefaction(&self) -> RarefactionWave {
        RarefactionWave { u_minus: self.u_minus, u_plus: self.u_plus }
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.eval_point(x, t)?.w)
    }

    pub fn eval_point(&self, x: f64, t: f64) -> Result<WavePoint> {
        check_time(t)?;
        let (um, up) = (self.u_minus, self.u_plus);
        let jump = up - um;
        let st = t.sqrt();
        let a_minus = (x - um * t) / (2.0 * st);
        let a_plus = (x - up * t) / (2.0 * st);
        let ln_minus = um * um * t / 4.0 - um * x / 2.0 + ln_erfc(a_minus);
        let ln_plus = up * up * t / 4.0 - up * x / 2.0 + ln_erfc(-a_plus);
        let ell = ln_plus - ln_minus;
        if !ell.is_finite() {
            return Err(Error::Degenerate(format!("Cole–Hopf weights lost all precision at x = {x}, t = {t}")));
        }
        // s = A+/(A- + A+) and 1 - s, each formed without subtraction
        let (s, s_c) = if ell >= 0.0 {
            let e = (-ell).exp();
            (1.0 / (1.0 + e), e / (1.0 + e))
        } else {
            let e = ell.exp();
            (e / (1.0 + e), 1.0 / (1.0 + e))
        };
        let q_minus = inv_erfcx(a_minus);
        let q_plus = inv_erfcx(-a_plus);
        let spt = (PI * t).sqrt();
        let ell_x = -jump / 2.0 + (q_plus + q_minus) / spt;
        let dq = |a: f64, q: f64| -2.0 * a * q + 2.0 / PI.sqrt() * q * q;
        let ell_xx = (dq(a_minus, q_minus) - dq(-a_plus, q_plus)) / (2.0 * st * spt);
        let ss = s * s_c;
        let w_x = jump * ss * ell_x;
        let w_xx = jump * (ss * (s_c - s) * ell_x * ell_x + ss * ell_xx);

        let w = if s <= 0.5 { um + jump * s } else { up - jump * s_c };
        let ratio = x / t;
        let deviation = if ratio <= um {
            jump * s
        } else if ratio >= up {
            -jump * s_c
        } else if s <= 0.5 {
            (um - ratio) + jump * s
        } else {
            (up - ratio) - jump * s_c
        };
        Ok(WavePoint { w, w_x, w_xx, deviation })
    }

    pub fn field(&self, grid: &Grid, t: f64) -> Result<Field> {
        check_time(t)?;
        let values = grid.points().into_par_iter().map(|x| self.eval(x, t)).collect::<Result<Vec<_>>>()?;
        Field::new(grid, values)
    }
}

/// Fitted decay exponents of `||w - w^R||_p`, `||w_x||_p` and `||w_xx||_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViscousRateReport {
    pub p: f64,
    pub deviation: DecayFit,
    pub gradient: DecayFit,
    pub curvature: DecayFit,
    pub predicted_deviation: f64,
    pub predicted_gradient: f64,
    pub predicted_curvature: f64,
}

impl ViscousRateReport {
    pub fn predicted(p: f64) -> (f64, f64, f64) {
        let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
        (-(1.0 - inv) / 2.0, -1.0 + inv, -1.5 + inv / 2.0)
    }
}

/// Norms of `w - w^R`, `w_x`, `w_xx` at time `t`, sampled on a line wide
/// enough that the Gaussian-tail remainders are far below roundoff.
pub fn viscous_norms(wave: &ViscousWave, p: f64, t: f64) -> Result<[f64; 3]> {
    check_time(t)?;
    let st = t.sqrt();
    let left = wave.u_minus * t - 40.0 * st;
    let right = wave.u_plus * t + 40.0 * st;
    // the narrowest feature is the boundary layer of width sqrt(t)
    let dx = 0.02 * st;
    let n = ((right - left) / dx).ceil() as usize + 1;
    let dx = (right - left) / (n - 1) as f64;
    let points: Vec<WavePoint> =
        (0..n).into_par_iter().map(|j| wave.eval_point(left + dx * j as f64, t)).collect::<Result<_>>()?;
    let dev: Vec<f64> = points.iter().map(|pt| pt.deviation).collect();
    let wx: Vec<f64> = points.iter().map(|pt| pt.w_x).collect();
    let wxx: Vec<f64> = points.iter().map(|pt| pt.w_xx).collect();
    Ok([lp_norm_values(&dev, dx, p)?, lp_norm_values(&wx, dx, p)?, lp_norm_values(&wxx, dx, p)?])
}

pub fn verify_viscous_rates(wave: &ViscousWave, p: f64, times: &[f64]) -> Result<ViscousRateReport> {
    if let Some(t) = times.iter().find(|t| **t < 1.0) {
        return Err(Error::param("times", format!("rate fits use t >= 1 only, got {t}")));
    }
    let norms = times.iter().map(|&t| viscous_norms(wave, p, t)).collect::<Result<Vec<_>>>()?;
    let column = |k: usize| norms.iter().map(|n| n[k]).collect::<Vec<f64>>();
    let (pd, pg, pc) = ViscousRateReport::predicted(p);
    Ok(ViscousRateReport {
        p,
        deviation: fit_decay(times, &column(0), false)?,
        gradient: fit_decay(times, &column(1), false)?,
        curvature: fit_decay(times, &column(2), false)?,
        predicted_deviation: pd,
        predicted_gradient: pg,
        predicted_curvature: pc,
    })
}
