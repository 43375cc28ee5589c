//! Run configuration, read from TOML with one section per command.
//!
//! Every field has a default, so an empty file is a valid configuration.
//! An exponent `p = inf` is written as the TOML float `inf`.

use std::path::Path;

use fburgers::analysis::{geometric_times, SuiteConfig};
use fburgers::solver::{Atom, Flux, InitialDatum, Measure, SolverConfig};
use fburgers::spectral::{Grid, LevySymbol};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seed of the randomized inequality corpus.
    pub seed: u64,
    pub solver: SolverSection,
    pub datum: DatumSection,
    pub kernel: KernelSection,
    pub verify: VerifySection,
    pub rate: RateSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 2024,
            solver: SolverSection::default(),
            datum: DatumSection::default(),
            kernel: KernelSection::default(),
            verify: VerifySection::default(),
            rate: RateSection::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Geometric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub alpha: f64,
    pub half_length: f64,
    pub points: usize,
    pub dt: f64,
    pub flux: Flux,
    pub t_end: f64,
    /// Number of output times, `t = 0` included.
    pub samples: usize,
    pub spacing: Spacing,
    /// First positive output time for geometric spacing.
    pub t_min: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            alpha: 1.5,
            half_length: 100.0,
            points: 2048,
            dt: 0.02,
            flux: Flux::Burgers,
            t_end: 10.0,
            samples: 11,
            spacing: Spacing::Linear,
            t_min: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatumKind {
    Riemann,
    SmoothStep,
    #[default]
    Atoms,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub location: f64,
    pub weight: f64,
}

/// Initial datum `u_0 = u_minus + H * m`. For `atoms` the right state
/// follows from the weights and `u_plus` is ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatumSection {
    pub kind: DatumKind,
    pub u_minus: f64,
    pub u_plus: f64,
    pub width: f64,
    pub atoms: Vec<AtomSpec>,
}

impl Default for DatumSection {
    fn default() -> Self {
        DatumSection {
            kind: DatumKind::Atoms,
            u_minus: 0.0,
            u_plus: 1.0,
            width: 1.0,
            atoms: vec![AtomSpec { location: 0.0, weight: 1.0 }],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    pub alpha: f64,
    pub y_max: f64,
    pub dy: f64,
    /// Half-width of the interval on which the total mass is measured.
    pub mass_range: f64,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection { alpha: 1.5, y_max: 50.0, dy: 0.1, mass_range: 500.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    #[default]
    Random,
    /// A single constant field, which every inequality must reject.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub alpha: f64,
    pub corpus: CorpusKind,
    pub functions: usize,
    pub half_length: f64,
    pub points: usize,
    pub tolerance: f64,
    pub hyper_p: Vec<f64>,
    pub interpolation_p: Vec<f64>,
    pub gn_p0: f64,
    pub gn_p: f64,
    /// Largest accepted relative change of an implied constant under `N -> 2N`.
    pub refinement_tolerance: f64,
    /// Also run the solver on `[datum]` and check its invariants.
    pub solver_checks: bool,
}

impl Default for VerifySection {
    fn default() -> Self {
        let suite = SuiteConfig::default();
        VerifySection {
            alpha: suite.alpha,
            corpus: CorpusKind::Random,
            functions: 100,
            half_length: 64.0,
            points: 2048,
            tolerance: suite.tolerance,
            hyper_p: suite.hyper_p,
            interpolation_p: suite.interpolation_p,
            gn_p0: suite.gn_p0,
            gn_p: suite.gn_p,
            refinement_tolerance: 0.05,
            solver_checks: true,
        }
    }
}

impl VerifySection {
    pub fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            alpha: self.alpha,
            hyper_p: self.hyper_p.clone(),
            interpolation_p: self.interpolation_p.clone(),
            gn_p0: self.gn_p0,
            gn_p: self.gn_p,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateSection {
    pub alpha: Vec<f64>,
    pub p: Vec<f64>,
    pub half_length: f64,
    pub points: usize,
    pub dt: f64,
    pub t_min: f64,
    pub t_end: f64,
    pub samples: usize,
    /// A fitted exponent above `predicted + margin` counts as a violation.
    pub margin: f64,
}

impl Default for RateSection {
    fn default() -> Self {
        RateSection {
            alpha: vec![1.5],
            p: vec![f64::INFINITY],
            half_length: 200.0,
            points: 2048,
            dt: 0.05,
            t_min: 1.0,
            t_end: 50.0,
            samples: 16,
            margin: 0.05,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// The solver commands need `alpha` in the open interval `(1, 2)`.
pub fn check_solver_alpha(alpha: f64) -> CliResult<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha = {alpha} is outside the admissible range (1, 2)")))
    }
}

fn check_positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| invalid(format!("invalid configuration: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read configuration {}: {e}", path.display())))?;
        RunConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Sample times of the `[solver]` section, starting at zero.
    pub fn sample_times(&self) -> CliResult<Vec<f64>> {
        let s = &self.solver;
        check_positive("solver.t_end", s.t_end)?;
        if s.samples < 2 {
            return Err(invalid("solver.samples must be at least 2"));
        }
        Ok(match s.spacing {
            Spacing::Linear => (0..s.samples).map(|k| s.t_end * k as f64 / (s.samples - 1) as f64).collect(),
            Spacing::Geometric => {
                check_positive("solver.t_min", s.t_min)?;
                if s.t_min >= s.t_end {
                    return Err(invalid("solver.t_min must be below solver.t_end"));
                }
                let mut times = vec![0.0];
                times.extend(geometric_times(s.t_min, s.t_end, s.samples - 1));
                times
            }
        })
    }

    pub fn solver_config(&self) -> CliResult<SolverConfig> {
        let s = &self.solver;
        check_solver_alpha(s.alpha)?;
        check_positive("solver.dt", s.dt)?;
        let grid = Grid::new(s.half_length, s.points)?;
        Ok(SolverConfig::new(grid, LevySymbol::fractional(s.alpha)?, s.dt)
            .with_flux(s.flux)
            .with_samples(self.sample_times()?))
    }

    /// The `[datum]` section translated by `shift`.
    pub fn datum(&self, grid: &Grid, shift: f64) -> CliResult<InitialDatum> {
        let d = &self.datum;
        let atoms = |list: Vec<Atom>| InitialDatum::new(d.u_minus, Measure::Atoms(list));
        let datum = match d.kind {
            DatumKind::Riemann => atoms(vec![Atom { location: shift, weight: d.u_plus - d.u_minus }])?,
            DatumKind::Atoms => {
                atoms(d.atoms.iter().map(|a| Atom { location: a.location + shift, weight: a.weight }).collect())?
            }
            DatumKind::SmoothStep => {
                check_positive("datum.width", d.width)?;
                let half_jump = 0.5 * (d.u_plus - d.u_minus);
                let density = grid
                    .points()
                    .into_iter()
                    .map(|x| half_jump / (((x - shift) / d.width).cosh().powi(2) * d.width))
                    .collect();
                InitialDatum::new(d.u_minus, Measure::Density(density))?
            }
        };
        let u_plus = datum.u_plus(grid.dx());
        if u_plus < d.u_minus {
            return Err(invalid(format!(
                "the datum must satisfy u_minus <= u_plus, got u_minus = {}, u_plus = {u_plus}",
                d.u_minus
            )));
        }
        Ok(datum)
    }
}
