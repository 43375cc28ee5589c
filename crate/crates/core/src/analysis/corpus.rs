//! Randomized test functions for the inequality suite: sums of Gaussian
//! wave packets whose spectra stay inside the inner quarter of the band.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inequalities::{
    check_gagliardo_nirenberg, check_interpolation, check_nash, check_positivity_forms, decays_at_edges,
    InequalityReport,
};
use crate::error::{Error, Result};
use crate::report::fmt_p;
use crate::spectral::{Field, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub carrier: f64,
    pub phase: f64,
}

impl Packet {
    fn eval(&self, x: f64) -> f64 {
        let y = x - self.center;
        self.amplitude * (-(y / self.width).powi(2)).exp() * (self.carrier * y + self.phase).cos()
    }
}

/// One corpus member, independent of the grid it is sampled on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub packets: Vec<Packet>,
    /// Factor making the sup norm 1 on the generating grid.
    pub scale: f64,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.packets.iter().map(|p| p.eval(x)).sum::<f64>()
    }

    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        Field::from_fn(grid, |x| self.eval(x))
    }
}

/// Draws `count` functions for `grid`: one to three packets centred in
/// `[-L/4, L/4]`, each with spectrum below `e^{-36}` of its peak outside
/// `|k| <= N/8`, normalized to `||f||_inf = 1` on `grid`.
///
/// Every fourth function is sign-definite (unmodulated bumps of one sign),
/// where `int Lambda^alpha f sgn f = 0` holds with equality.
pub fn random_corpus(grid: &Grid, count: usize, seed: u64) -> Result<Vec<TestFunction>> {
    let band = grid.wavenumber(grid.len() / 8);
    let min_width = 24.0 / band;
    let quarter = 0.25 * grid.half_length();
    if 22.0 * min_width > 0.6875 * grid.half_length() {
        return Err(Error::param("grid", "box too short for band-limited packets that decay at the edges"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Vec::with_capacity(count);
    while corpus.len() < count {
        let definite = corpus.len() % 4 == 3;
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let packets: Vec<Packet> = (0..rng.random_range(1..=3))
            .map(|_| {
                let width = rng.random_range(min_width..4.0 * min_width);
                let center = rng.random_range(-quarter..quarter);
                if definite {
                    let amplitude = sign * rng.random_range(0.1..1.0);
                    return Packet { amplitude, center, width, carrier: 0.0, phase: 0.0 };
                }
                Packet {
                    amplitude: rng.random_range(-1.0..1.0),
                    center,
                    width,
                    carrier: rng.random_range(0.0..band - 12.0 / width),
                    phase: rng.random_range(0.0..2.0 * PI),
                }
            })
            .collect();
        let mut f = TestFunction { packets, scale: 1.0 };
        let sup = f.sample(grid)?.max_abs();
        if sup < 1e-3 {
            continue;
        }
        f.scale = 1.0 / sup;
        corpus.push(f);
    }
    Ok(corpus)
}

/// Parameters of [`run_inequality_suite`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub alpha: f64,
    pub hyper_p: Vec<f64>,
    pub interpolation_p: Vec<f64>,
    pub gn_p0: f64,
    pub gn_p: f64,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            alpha: 1.5,
            hyper_p: vec![1.5, 2.0, 3.0, 4.0],
            interpolation_p: vec![2.0, 3.0, f64::INFINITY],
            gn_p0: 3.0,
            gn_p: f64::INFINITY,
            tolerance: 1e-8,
        }
    }
}

/// Ratio-type and sign-type inequality reports over `fields`. Fields that
/// do not decay at the box edges are counted as rejected everywhere.
pub fn run_inequality_suite(fields: &[Field], config: &SuiteConfig) -> Result<Vec<InequalityReport>> {
    let alpha = config.alpha;
    crate::spectral::LevySymbol::fractional(alpha)?;
    let admissible: Vec<bool> = fields.iter().map(decays_at_edges).collect();
    let excluded = || Err(Error::Degenerate("field does not decay at the box edges".into()));
    let ratios = |check: &(dyn Fn(&Field) -> Result<f64> + Sync)| -> Vec<Result<f64>> {
        fields.par_iter().zip(&admissible).map(|(f, ok)| if *ok { check(f) } else { excluded() }).collect()
    };

    let mut reports = vec![InequalityReport::from_ratios("nash", &ratios(&|f| check_nash(f, alpha)))];
    for &p in &config.interpolation_p {
        reports.push(InequalityReport::from_ratios(
            format!("interpolation_p{}", fmt_p(p)),
            &ratios(&|f| check_interpolation(f, alpha, p)),
        ));
    }
    reports.push(InequalityReport::from_ratios(
        format!("gagliardo_nirenberg_p0{}_p{}", fmt_p(config.gn_p0), fmt_p(config.gn_p)),
        &ratios(&|f| check_gagliardo_nirenberg(f, config.gn_p0, config.gn_p)),
    ));

    let tol = config.tolerance;
    let mut sign_done = false;
    for &p in &config.hyper_p {
        let forms: Vec<_> = fields
            .par_iter()
            .zip(&admissible)
            .map(|(f, ok)| if *ok { check_positivity_forms(f, alpha, p).ok() } else { None })
            .collect();
        reports.push(InequalityReport::from_margins(
            format!("hyper_p{}", fmt_p(p)),
            &forms.iter().map(|m| m.map(|m| (m.hyper, m.hyper_scale))).collect::<Vec<_>>(),
            tol,
        ));
        if !sign_done {
            sign_done = true;
            let pick = |g: fn(&super::inequalities::PositivityForms) -> (f64, f64)| {
                forms.iter().map(|m| m.as_ref().map(g)).collect::<Vec<_>>()
            };
            reports.push(InequalityReport::from_margins("sgn", &pick(|m| (m.sign, m.sign_scale)), tol));
            reports.push(InequalityReport::from_margins(
                "positive_part",
                &pick(|m| (m.positive_part, m.part_scale)),
                tol,
            ));
            reports.push(InequalityReport::from_margins(
                "negative_part",
                &pick(|m| (m.negative_part, m.part_scale)),
                tol,
            ));
        }
    }
    Ok(reports)
}

/// Empirical constant of one ratio-type inequality on a grid and on its
/// refinement `N -> 2N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub name: String,
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
}

pub fn refinement_stability(corpus: &[TestFunction], grid: &Grid, config: &SuiteConfig) -> Result<Vec<RefinementRow>> {
    let fine_grid = Grid::new(grid.half_length(), 2 * grid.len())?;
    let sample = |g: &Grid| corpus.iter().map(|f| f.sample(g)).collect::<Result<Vec<_>>>();
    let coarse = run_inequality_suite(&sample(grid)?, config)?;
    let fine = run_inequality_suite(&sample(&fine_grid)?, config)?;
    Ok(coarse
        .into_iter()
        .zip(fine)
        .filter(|(c, _)| !c.implied_constant.is_nan())
        .map(|(c, f)| RefinementRow {
            relative_change: (f.implied_constant / c.implied_constant - 1.0).abs(),
            name: c.name,
            coarse: c.implied_constant,
            fine: f.implied_constant,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(64.0, 2048).unwrap()
    }

    #[test]
    fn corpus_is_deterministic_and_normalized() {
        let g = grid();
        let a = random_corpus(&g, 10, 7).unwrap();
        let b = random_corpus(&g, 10, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_corpus(&g, 10, 8).unwrap());
        for f in &a {
            let field = f.sample(&g).unwrap();
            assert!((field.max_abs() - 1.0).abs() < 1e-15);
            assert!(decays_at_edges(&field));
        }
    }

    #[test]
    fn corpus_is_band_limited() {
        let g = grid();
        for f in random_corpus(&g, 5, 3).unwrap() {
            let field = f.sample(&g).unwrap();
            let spectrum = field.spectrum();
            let peak = spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (j, c) in spectrum.iter().enumerate() {
                if 8 * g.mode(j).unsigned_abs() as usize > g.len() {
                    assert!(c.norm() < 1e-13 * peak);
                }
            }
        }
    }

    #[test]
    fn constant_field_is_rejected_not_violated() {
        let g = grid();
        let reports = run_inequality_suite(&[Field::constant(&g, 1.0)], &SuiteConfig::default()).unwrap();
        for r in reports {
            assert_eq!((r.rejected, r.violations), (1, 0), "{}", r.name);
        }
    }

    #[test]
    fn zero_tolerance_is_load_bearing() {
        // at p = 2 the hyper form of a nonnegative function is an identity,
        // so its margin is pure roundoff of either sign
        let g = grid();
        let bumps: Vec<Field> = (0..20)
            .map(|k| Field::from_fn(&g, |x| (-(x - 0.37 * k as f64).powi(2) / (2.0 + 0.1 * k as f64)).exp()).unwrap())
            .collect();
        let config = SuiteConfig { hyper_p: vec![2.0], tolerance: 0.0, ..SuiteConfig::default() };
        let reports = run_inequality_suite(&bumps, &config).unwrap();
        let hyper = reports.iter().find(|r| r.name == "hyper_p2").unwrap();
        assert!(hyper.violations > 0);
        let relaxed = SuiteConfig { tolerance: 1e-8, ..config };
        let reports = run_inequality_suite(&bumps, &relaxed).unwrap();
        assert!(reports.iter().all(|r| r.violations == 0));
    }

    #[test]
    fn every_fourth_member_is_sign_definite() {
        let g = grid();
        let corpus = random_corpus(&g, 12, 9).unwrap();
        for (i, f) in corpus.iter().enumerate() {
            let v = f.sample(&g).unwrap();
            let definite = v.values().iter().all(|x| *x >= 0.0) || v.values().iter().all(|x| *x <= 0.0);
            assert_eq!(definite, i % 4 == 3, "member {i}");
        }
        let fields: Vec<Field> = corpus.iter().map(|f| f.sample(&g).unwrap()).collect();
        let strict = SuiteConfig { tolerance: 0.0, ..SuiteConfig::default() };
        let violations: usize = run_inequality_suite(&fields, &strict).unwrap().iter().map(|r| r.violations).sum();
        assert!(violations > 0);
    }
}
