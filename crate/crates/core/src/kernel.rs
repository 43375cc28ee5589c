//! The alpha-stable fundamental solution `p_alpha(x, t)` of
//! `v_t + Lambda^alpha v = 0`, its self-similar profile, and the linear
//! semigroup.

use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;

use crate::analysis::{fit_decay, lp_norm, DecayFit};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::spectral::{apply_multiplier, derivative, Field, Grid, LevySymbol};

/// Largest tolerated negative value before the profile is declared broken.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-10;

/// Quadrature evaluator of `P_alpha(y) = (1/pi) int_0^inf cos(y xi) exp(-xi^alpha) dxi`.
#[derive(Clone, Debug)]
pub struct StableKernel {
    alpha: f64,
    max_frequency: f64,
    rule: GaussLegendre,
    max_panels: usize,
}

impl StableKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 2], got {alpha}")));
        }
        // exp(-Xi^alpha) < 1e-15
        let max_frequency = (15.0 * std::f64::consts::LN_10).powf(1.0 / alpha);
        Ok(StableKernel { alpha, max_frequency, rule: GaussLegendre::new(16), max_panels: 2_000_000 })
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_frequency(&self) -> f64 {
        self.max_frequency
    }

    /// Panel edges: geometric toward the origin (where `xi^alpha` is not
    /// smooth), then uniform with at most one radian of phase per panel.
    fn panels(&self, y: f64) -> Result<Vec<f64>> {
        let width = (1.0 / y.abs().max(1e-300)).min(0.25);
        let uniform = ((self.max_frequency - width) / width).ceil().max(0.0) as usize;
        if uniform > self.max_panels {
            return Err(Error::Quadrature(format!(
                "|y| = {} needs {uniform} panels, limit is {}",
                y.abs(),
                self.max_panels
            )));
        }
        let mut edges = Vec::with_capacity(uniform + 50);
        edges.push(0.0);
        let mut g = width * 2f64.powi(-40);
        while g < width {
            edges.push(g);
            g *= 2.0;
        }
        edges.push(width);
        let step = (self.max_frequency - width) / uniform.max(1) as f64;
        for k in 1..=uniform {
            edges.push(width + k as f64 * step);
        }
        Ok(edges)
    }

    fn integrate(&self, y: f64, integrand: impl Fn(f64) -> f64) -> Result<f64> {
        let edges = self.panels(y)?;
        let total: f64 = edges.windows(2).map(|w| self.rule.integrate(w[0], w[1], &integrand)).sum();
        Ok(total / PI)
    }

    /// Raw quadrature value of `P_alpha(y)`, without clamping.
    pub fn profile_raw(&self, y: f64) -> Result<f64> {
        let a = self.alpha;
        self.integrate(y, |xi| (y * xi).cos() * (-xi.powf(a)).exp())
    }

    /// `P_alpha(y)`; negative values within [`NEGATIVITY_TOLERANCE`] are
    /// clamped to zero.
    pub fn profile(&self, y: f64) -> Result<f64> {
        let raw = self.profile_raw(y)?;
        if raw >= 0.0 {
            Ok(raw)
        } else if raw >= -NEGATIVITY_TOLERANCE {
            warn!("clamping P_{}({y}) = {raw:e} to zero", self.alpha);
            Ok(0.0)
        } else {
            Err(Error::NegativeDensity { y, value: raw })
        }
    }

    /// `P_alpha'(y) = -(1/pi) int_0^inf xi sin(y xi) exp(-xi^alpha) dxi`.
    pub fn profile_derivative(&self, y: f64) -> Result<f64> {
        let a = self.alpha;
        Ok(-self.integrate(y, |xi| xi * (y * xi).sin() * (-xi.powf(a)).exp())?)
    }

    /// `p_alpha(x, t) = t^{-1/alpha} P_alpha(x t^{-1/alpha})`.
    pub fn density(&self, x: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::param("t", format!("must be positive, got {t}")));
        }
        let s = t.powf(-1.0 / self.alpha);
        Ok(s * self.profile(x * s)?)
    }

    /// Samples `(y, P(y))` at the given points, evaluated concurrently.
    pub fn profile_table(&self, ys: &[f64]) -> Result<Vec<(f64, f64)>> {
        ys.par_iter().map(|&y| Ok((y, self.profile(y)?))).collect()
    }

    /// Leading coefficient of the heavy tail, `P(y) ~ c |y|^{-1-alpha}`.
    pub fn tail_constant(&self) -> f64 {
        statrs::function::gamma::gamma(1.0 + self.alpha) * (0.5 * PI * self.alpha).sin() / PI
    }

    /// `int_{-Y}^{Y} P_alpha dy` by Gauss–Legendre on panels that widen
    /// geometrically with `|y|`.
    pub fn mass_within(&self, half_range: f64) -> Result<f64> {
        let mut edges = vec![0.0];
        let mut e: f64 = 0.0;
        while e < half_range {
            e = if e < 2.0 { e + 0.125 } else { e * 1.05 };
            edges.push(e.min(half_range));
        }
        let rule = GaussLegendre::new(10);
        let panels: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
        let parts: Result<Vec<f64>> = panels
            .par_iter()
            .map(|&(a, b)| {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| Ok(w * half * self.profile_raw(mid + half * x)?))
                    .sum()
            })
            .collect();
        Ok(2.0 * parts?.iter().sum::<f64>())
    }
}

/// Result of [`verify_kernel_bounds`].
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBoundsReport {
    pub alpha: f64,
    /// Smallest `C0` with `P(y) <= C0 (1+|y|)^{-(alpha+1)}` on the grid.
    pub c0: f64,
    /// Smallest `C1` with `|P'(y)| <= C1 (1+|y|)^{-(alpha+2)}` on the grid.
    pub c1: f64,
    pub min_raw: f64,
    pub negative_count: usize,
    /// `P(y) |y|^{alpha+1}` at the largest `|y|` in the grid.
    pub tail_ratio: f64,
    pub y_max: f64,
}

/// Grid-restricted constants of the kernel bounds, plus a nonnegativity audit.
pub fn verify_kernel_bounds(kernel: &StableKernel, ys: &[f64]) -> Result<KernelBoundsReport> {
    if ys.is_empty() {
        return Err(Error::param("ys", "evaluation grid is empty"));
    }
    let alpha = kernel.alpha();
    let samples: Vec<(f64, f64, f64)> = ys
        .par_iter()
        .map(|&y| Ok((y, kernel.profile_raw(y)?, kernel.profile_derivative(y)?)))
        .collect::<Result<_>>()?;
    let mut report = KernelBoundsReport {
        alpha,
        c0: 0.0,
        c1: 0.0,
        min_raw: f64::INFINITY,
        negative_count: 0,
        tail_ratio: 0.0,
        y_max: 0.0,
    };
    for &(y, p, dp) in &samples {
        let w = 1.0 + y.abs();
        report.c0 = report.c0.max(p * w.powf(alpha + 1.0));
        report.c1 = report.c1.max(dp.abs() * w.powf(alpha + 2.0));
        report.min_raw = report.min_raw.min(p);
        if p < -NEGATIVITY_TOLERANCE {
            report.negative_count += 1;
        }
        if y.abs() >= report.y_max {
            report.y_max = y.abs();
            report.tail_ratio = p * y.abs().powf(alpha + 1.0);
        }
    }
    Ok(report)
}

/// `S(t) f`: multiplies the spectrum by `exp(-t a(xi))`.
pub fn semigroup_apply(f: &Field, t: f64, symbol: &LevySymbol) -> Result<Field> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    apply_multiplier(f, |xi| (-t * symbol.eval(xi)).exp())
}

/// Result of [`verify_semigroup_decay`].
#[derive(Clone, Debug)]
pub struct SemigroupDecayReport {
    pub p: f64,
    pub value_fit: DecayFit,
    pub gradient_fit: DecayFit,
    pub predicted_value: f64,
    pub predicted_gradient: f64,
    /// Smallest fraction of mass inside `[-L/2, L/2]` over the sample times.
    pub min_inner_mass: f64,
}

impl SemigroupDecayReport {
    pub fn value_deviation(&self) -> f64 {
        (self.value_fit.exponent - self.predicted_value).abs()
    }

    pub fn gradient_deviation(&self) -> f64 {
        (self.gradient_fit.exponent - self.predicted_gradient).abs()
    }
}

/// Fits the decay of `||S(t) delta||_p` and `||d_x S(t) delta||_p` for a
/// discrete delta at the box center.
pub fn verify_semigroup_decay(grid: &Grid, symbol: &LevySymbol, p: f64, times: &[f64]) -> Result<SemigroupDecayReport> {
    let n = grid.len();
    let mut delta = vec![0.0; n];
    delta[n / 2] = 1.0 / grid.dx();
    let delta = Field::new(grid, delta)?.with_spectrum();
    let quarter = grid.half_length() / 2.0;
    let inner: Vec<bool> = grid.points().iter().map(|x| x.abs() <= quarter).collect();

    let rows: Vec<(f64, f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let field = semigroup_apply(&delta, t, symbol)?;
            let mass: f64 =
                field.values().iter().zip(&inner).filter(|(_, &i)| i).map(|(v, _)| v).sum::<f64>() * grid.dx();
            let grad = derivative(&field, 1)?;
            Ok((lp_norm(&field, p)?, lp_norm(&grad, p)?, mass))
        })
        .collect::<Result<_>>()?;
    let min_inner_mass = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    if min_inner_mass < 0.99 {
        return Err(Error::BoxContamination { fraction: min_inner_mass });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let gradients: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let alpha = symbol.dominant_alpha();
    let q = if p.is_infinite() { 0.0 } else { 1.0 / p };
    Ok(SemigroupDecayReport {
        p,
        value_fit: fit_decay(times, &values, false)?,
        gradient_fit: fit_decay(times, &gradients, false)?,
        predicted_value: -(1.0 - q) / alpha,
        predicted_gradient: -(1.0 - q) / alpha - 1.0 / alpha,
        min_inner_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_cauchy_endpoints() {
        let heat = StableKernel::new(2.0).unwrap();
        assert!((heat.profile(0.0).unwrap() - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-12);
        let cauchy = StableKernel::new(1.0).unwrap();
        assert!((cauchy.profile(1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-12);
        for y in [0.0, 0.3, 2.0, 7.5, 30.0] {
            let exact = 1.0 / (PI * (1.0 + y * y));
            assert!((cauchy.profile(y).unwrap() - exact).abs() < 1e-12, "y = {y}");
            let gauss = (-y * y / 4.0).exp() / (4.0 * PI).sqrt();
            assert!((heat.profile(y).unwrap() - gauss).abs() < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn derivative_matches_cauchy_formula() {
        let k = StableKernel::new(1.0).unwrap();
        for y in [0.5f64, 1.0, 4.0] {
            let exact = -2.0 * y / (PI * (1.0 + y * y).powi(2));
            assert!((k.profile_derivative(y).unwrap() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn density_is_self_similar() {
        let k = StableKernel::new(1.5).unwrap();
        let (x, t) = (1.7f64, 3.2f64);
        let s = t.powf(-1.0 / 1.5);
        let direct = s * k.profile(x * s).unwrap();
        assert!((k.density(x, t).unwrap() - direct).abs() < 1e-10);
        assert!(k.density(1.0, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_alpha_and_enforces_panel_budget() {
        assert!(StableKernel::new(0.0).is_err());
        assert!(StableKernel::new(2.1).is_err());
        let k = StableKernel::new(1.5).unwrap().with_max_panels(100);
        assert!(matches!(k.profile(1e4), Err(Error::Quadrature(_))));
    }

    #[test]
    fn bounds_report_for_cauchy() {
        let k = StableKernel::new(1.0).unwrap();
        let ys: Vec<f64> = (-200..=200).map(|i| i as f64 * 0.25).collect();
        let r = verify_kernel_bounds(&k, &ys).unwrap();
        // sup of (1+|y|)^2 / (pi (1+y^2)) is 2/pi at |y| = 1
        assert!((r.c0 - 2.0 / PI).abs() < 1e-9, "{}", r.c0);
        assert!(r.c0 > 0.0 && r.c0 < 5.0);
        assert_eq!(r.negative_count, 0);
    }

    #[test]
    fn semigroup_identity_and_composition() {
        let g = Grid::new(20.0, 256).unwrap();
        let s = LevySymbol::fractional(1.5).unwrap();
        let f = Field::from_fn(&g, |x| (-x * x).exp() * (1.0 + 0.3 * x)).unwrap();
        let near = semigroup_apply(&f, 1e-12, &s).unwrap();
        assert!(near.sup_distance(&f).unwrap() < 1e-10);
        let two = semigroup_apply(&semigroup_apply(&f, 0.3, &s).unwrap(), 0.5, &s).unwrap();
        let one = semigroup_apply(&f, 0.8, &s).unwrap();
        assert!(two.sup_distance(&one).unwrap() < 1e-12);
        assert!(semigroup_apply(&f, 0.0, &s).is_err());
        assert!(semigroup_apply(&f, -1.0, &s).is_err());
    }

    #[test]
    fn heat_semigroup_of_delta_is_gaussian() {
        let g = Grid::new(32.0, 1024).unwrap();
        let n = g.len();
        let mut d = vec![0.0; n];
        d[n / 2] = 1.0 / g.dx();
        let out = semigroup_apply(&Field::new(&g, d).unwrap(), 1.0, &LevySymbol::fractional(2.0).unwrap()).unwrap();
        let exact = Field::from_fn(&g, |x| (-x * x / 4.0).exp() / (4.0 * PI).sqrt()).unwrap();
        assert!(out.sup_distance(&exact).unwrap() < 1e-8);
    }

    #[test]
    fn box_contamination_is_detected() {
        let g = Grid::new(8.0, 256).unwrap();
        let s = LevySymbol::fractional(1.5).unwrap();
        let times: Vec<f64> = (0..8).map(|i| 10f64.powf(i as f64 * 0.3)).collect();
        assert!(matches!(verify_semigroup_decay(&g, &s, f64::INFINITY, &times), Err(Error::BoxContamination { .. })));
    }
}
