use serde::{Deserialize, Serialize};

use super::fit::{fit_decay, DecayFit};
use super::norms::lp_distance;
use crate::error::{Error, Result};
use crate::report::{fmt_f64, fmt_p, CsvTable};
use crate::solver::{BoxCheck, InitialDatum, Solver, SolverConfig};
use crate::spectral::LevySymbol;
use crate::waves::{RarefactionWave, ViscousWave};

/// `-[alpha - 1 - (3 - alpha)/p] / 2`, defined for `p > (3 - alpha)/(alpha - 1)`.
pub fn predicted_rate_exponent(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::param("alpha", format!("must lie in (1, 2), got {alpha}")));
    }
    let critical = (3.0 - alpha) / (alpha - 1.0);
    if !(p > critical) {
        return Err(Error::param(
            "p",
            format!("the rate holds for p > (3 - alpha)/(alpha - 1) = {critical}, got {}", fmt_p(p)),
        ));
    }
    let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
    Ok(-(alpha - 1.0 - (3.0 - alpha) * inv) / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub t: f64,
    /// `||u(t) - w^R(t)||_p`.
    pub norm: f64,
    /// `C t^{predicted} log(2 + t)` with `C` matched at the first sample.
    pub predicted_bound: f64,
    /// `||u(t) - w(t)||_p` against the viscous wave.
    pub viscous_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateExperiment {
    pub alpha: f64,
    pub p: f64,
    pub predicted_exponent: f64,
    /// Fit with `log(2 + t)` divided out.
    pub fit: DecayFit,
    pub uncorrected_fit: DecayFit,
    pub rows: Vec<RateRow>,
    pub box_check: BoxCheck,
}

impl RateExperiment {
    /// `measured - predicted`; positive means slower decay than the bound.
    pub fn gap(&self) -> f64 {
        self.fit.exponent - self.predicted_exponent
    }

    pub fn within_bound(&self, margin: f64) -> bool {
        self.gap() <= margin
    }

    pub fn table(&self) -> CsvTable {
        let mut table = CsvTable::new(["t", "norm", "predicted_bound", "viscous_distance"]);
        table.comment(format!("alpha = {}", fmt_f64(self.alpha)));
        table.comment(format!("p = {}", fmt_p(self.p)));
        table.comment(format!("predicted_exponent = {}", fmt_f64(self.predicted_exponent)));
        table.comment(format!("fitted_exponent_log_corrected = {}", fmt_f64(self.fit.exponent)));
        table.comment(format!("fitted_exponent_uncorrected = {}", fmt_f64(self.uncorrected_fit.exponent)));
        table.comment(format!("box_valid = {}", self.box_check.valid));
        for r in &self.rows {
            table.push_numbers(&[r.t, r.norm, r.predicted_bound, r.viscous_distance]);
        }
        table
    }
}

/// Runs the solver with `Lambda^alpha` on `datum` and measures
/// `||u(t) - w^R(t)||_p` at every positive sample time of `config`.
pub fn theorem_main_experiment(
    alpha: f64,
    p: f64,
    datum: &InitialDatum,
    config: &SolverConfig,
) -> Result<RateExperiment> {
    let predicted_exponent = predicted_rate_exponent(alpha, p)?;
    let mut config = config.clone();
    config.symbol = LevySymbol::fractional(alpha)?;
    let grid = config.grid.clone();
    let u_minus = datum.u_minus();
    let u_plus = datum.u_plus(grid.dx());
    let rarefaction = RarefactionWave::new(u_minus, u_plus)?;
    let viscous = ViscousWave::new(u_minus, u_plus)?;
    let solver = Solver::new(config)?;
    let trajectory = solver.run(datum)?;

    let mut measured = Vec::new();
    for snap in trajectory.snapshots.iter().filter(|s| s.t > 0.0) {
        let norm = lp_distance(&snap.u, &rarefaction.field(&grid, snap.t)?, p)?;
        let viscous_distance = lp_distance(&snap.u, &viscous.field(&grid, snap.t)?, p)?;
        measured.push((snap.t, norm, viscous_distance));
    }
    let times: Vec<f64> = measured.iter().map(|m| m.0).collect();
    let norms: Vec<f64> = measured.iter().map(|m| m.1).collect();
    let fit = fit_decay(&times, &norms, true)?;
    let uncorrected_fit = fit_decay(&times, &norms, false)?;
    let (t0, n0, _) = measured[0];
    let shape = |t: f64| t.powf(predicted_exponent) * (2.0 + t).ln();
    let constant = n0 / shape(t0);
    let rows = measured
        .iter()
        .map(|&(t, norm, viscous_distance)| RateRow { t, norm, predicted_bound: constant * shape(t), viscous_distance })
        .collect();
    Ok(RateExperiment { alpha, p, predicted_exponent, fit, uncorrected_fit, rows, box_check: trajectory.box_check })
}
