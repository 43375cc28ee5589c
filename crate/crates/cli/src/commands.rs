use std::fs;
use std::path::{Path, PathBuf};

use fburgers::analysis::{
    geometric_times, lp_distance, predicted_rate_exponent, random_corpus, refinement_stability, run_inequality_suite,
    theorem_main_experiment, InequalityReport, RefinementRow,
};
use fburgers::kernel::{verify_kernel_bounds, StableKernel};
use fburgers::report::{fmt_f64, fmt_p, CsvTable};
use fburgers::solver::{Snapshot, Solver, SolverConfig, Trajectory};
use fburgers::spectral::{Field, Grid, LevySymbol};
use fburgers::waves::{RarefactionWave, ViscousWave};
use log::info;
use rayon::prelude::*;

use crate::config::{check_solver_alpha, CorpusKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::plot::trajectory_script;

pub const CONFIG_BEGIN: &str = "--- resolved configuration ---";
pub const CONFIG_END: &str = "--- end configuration ---";

/// Files written by a command, in order.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(CliError::io(format!("creating {}", parent.display())))?;
    }
    fs::write(path, text).map_err(CliError::io(format!("writing {}", path.display())))
}

/// Writes `table` under `dir`, prefixed with the command name and the
/// resolved configuration as `#` comments.
fn write_table(dir: &Path, name: &str, command: &str, config: &RunConfig, table: CsvTable) -> CliResult<PathBuf> {
    let mut full = CsvTable::new(table.columns.clone());
    full.comment(format!("fburgers {command}"));
    full.comment(CONFIG_BEGIN);
    full.comment_block(&config.to_toml());
    full.comment(CONFIG_END);
    full.comments.extend(table.comments);
    full.rows = table.rows;
    let path = dir.join(name);
    write_text(&path, &full.to_string_lossy())?;
    info!("wrote {}", path.display());
    Ok(path)
}

/// Recovers the configuration embedded in a CSV written by this tool.
pub fn embedded_config(csv: &str) -> CliResult<RunConfig> {
    let body: Vec<&str> = csv
        .lines()
        .map_while(|l| l.strip_prefix('#'))
        .map(|l| l.strip_prefix(' ').unwrap_or(l))
        .skip_while(|l| *l != CONFIG_BEGIN)
        .skip(1)
        .take_while(|l| *l != CONFIG_END)
        .collect();
    RunConfig::from_toml(&body.join("\n"))
}

/// Reference wave columns `(w, w^R)`; at `t = 0` both are the step.
fn reference_waves(grid: &Grid, u_minus: f64, u_plus: f64, t: f64) -> CliResult<(Vec<f64>, Vec<f64>)> {
    if u_minus == u_plus {
        let flat = vec![u_minus; grid.len()];
        return Ok((flat.clone(), flat));
    }
    if t == 0.0 {
        let step: Vec<f64> = grid
            .points()
            .iter()
            .map(|&x| {
                if x < 0.0 {
                    u_minus
                } else if x > 0.0 {
                    u_plus
                } else {
                    0.5 * (u_minus + u_plus)
                }
            })
            .collect();
        return Ok((step.clone(), step));
    }
    let viscous = ViscousWave::new(u_minus, u_plus)?.field(grid, t)?.into_values();
    let fan = RarefactionWave::new(u_minus, u_plus)?.field(grid, t)?.into_values();
    Ok((viscous, fan))
}

pub fn cmd_simulate(config: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let solver_config = config.solver_config()?;
    let grid = solver_config.grid.clone();
    let datum = config.datum(&grid, 0.0)?;
    let solver = Solver::new(solver_config)?;
    info!("simulating to t = {}", config.solver.t_end);
    let trajectory = solver.run(&datum)?;
    let (u_minus, u_plus) = (datum.u_minus(), datum.u_plus(grid.dx()));

    let mut states = CsvTable::new(["t", "x", "u", "v", "w_viscous", "w_rarefaction"]);
    states.comment(format!("u_minus = {}", fmt_f64(u_minus)));
    states.comment(format!("u_plus = {}", fmt_f64(u_plus)));
    for snap in &trajectory.snapshots {
        let (w, fan) = reference_waves(&grid, u_minus, u_plus, snap.t)?;
        for (j, x) in grid.points().into_iter().enumerate() {
            states.push_numbers(&[snap.t, x, snap.u.values()[j], snap.v.values()[j], w[j], fan[j]]);
        }
    }
    let mut files = vec![write_table(out, "trajectory.csv", "simulate", config, states)?];
    files.push(write_table(out, "diagnostics.csv", "simulate", config, diagnostics_table(&trajectory))?);

    let script = out.join("plot_trajectory.gp");
    write_text(&script, &trajectory_script("trajectory.csv", &trajectory.times()))?;
    files.push(script);
    Ok(Outcome { files })
}

fn diagnostics_table(trajectory: &Trajectory) -> CsvTable {
    let mut table =
        CsvTable::new(["t", "mass", "mass_drift", "min_v", "sup_v", "l1_v", "l1_ratio", "sup_u", "escaped_fraction"]);
    let b = trajectory.box_check;
    table.comment(format!(
        "box_check: required_half_length = {}, half_length = {}, valid = {}",
        fmt_f64(b.required_half_length),
        fmt_f64(b.half_length),
        b.valid
    ));
    table.comment(format!("monotone_datum = {}", trajectory.monotone_datum));
    let m = trajectory.initial.l1_v;
    for s in &trajectory.snapshots {
        let d = s.diagnostics;
        let ratio = if m > 0.0 { d.l1_v / m } else { 1.0 };
        table.push_numbers(&[d.t, d.mass, d.mass_drift, d.min_v, d.sup_v, d.l1_v, ratio, d.sup_u, d.escaped_fraction]);
    }
    table
}

pub fn cmd_kernel(config: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let k = &config.kernel;
    if !(k.y_max > 0.0 && k.dy > 0.0 && k.dy <= k.y_max) {
        return Err(CliError::Validation(format!(
            "kernel.y_max and kernel.dy must be positive with dy <= y_max, got {} and {}",
            k.y_max, k.dy
        )));
    }
    let kernel = StableKernel::new(k.alpha)?;
    let count = (2.0 * k.y_max / k.dy).round() as usize;
    let ys: Vec<f64> = (0..=count).map(|i| -k.y_max + i as f64 * k.dy).collect();
    let values = kernel.profile_table(&ys)?;
    let mut profile = CsvTable::new(["y", "p_alpha"]);
    for (y, p) in values {
        profile.push_numbers(&[y, p]);
    }
    let report = verify_kernel_bounds(&kernel, &ys)?;
    let mass = kernel.mass_within(k.mass_range)?;
    let mut bounds = CsvTable::new([
        "alpha",
        "c0",
        "c1",
        "min_raw",
        "negative_count",
        "tail_ratio",
        "tail_constant",
        "y_max",
        "mass_range",
        "mass",
    ]);
    bounds.push(vec![
        fmt_f64(report.alpha),
        fmt_f64(report.c0),
        fmt_f64(report.c1),
        fmt_f64(report.min_raw),
        report.negative_count.to_string(),
        fmt_f64(report.tail_ratio),
        fmt_f64(kernel.tail_constant()),
        fmt_f64(report.y_max),
        fmt_f64(k.mass_range),
        fmt_f64(mass),
    ]);
    Ok(Outcome {
        files: vec![
            write_table(out, "kernel_profile.csv", "kernel", config, profile)?,
            write_table(out, "kernel_bounds.csv", "kernel", config, bounds)?,
        ],
    })
}

/// One solver property with its worst observed value.
struct Invariant {
    name: &'static str,
    worst: f64,
    threshold: f64,
    /// Monotonicity and gradient decay only hold for monotone data.
    applies: bool,
}

impl Invariant {
    fn passed(&self) -> Option<bool> {
        self.applies.then_some(!(self.worst > self.threshold))
    }
}

fn solver_invariants(config: &RunConfig) -> CliResult<Vec<Invariant>> {
    let solver_config = config.solver_config()?;
    let grid = solver_config.grid.clone();
    let solver = Solver::new(solver_config)?;
    let base = config.datum(&grid, 0.0)?;
    let shifted = config.datum(&grid, 1.0)?;
    let (a, b) = rayon::join(|| solver.run(&base), || solver.run(&shifted));
    let (a, b) = (a?, b?);

    let worst = |f: &dyn Fn(&Snapshot) -> f64| a.snapshots.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let m = a.initial.l1_v;
    let monotone = a.monotone_datum;
    let distances = a
        .snapshots
        .iter()
        .zip(&b.snapshots)
        .map(|(x, y)| lp_distance(&x.u, &y.u, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    let invariant = |name, worst, threshold, applies| Invariant { name, worst, threshold, applies };
    Ok(vec![
        invariant("mass_drift", worst(&|s| s.diagnostics.mass_drift), 1e-8, true),
        invariant("max_principle", worst(&|s| s.diagnostics.sup_u - a.initial_sup_u), 1e-8, true),
        invariant("l1_gradient", worst(&|s| if m > 0.0 { s.diagnostics.l1_v / m - 1.0 } else { 0.0 }), 1e-8, true),
        invariant(
            "monotonicity",
            worst(&|s| -s.diagnostics.min_v / s.diagnostics.sup_v.max(f64::MIN_POSITIVE)),
            1e-10,
            monotone,
        ),
        invariant(
            "gradient_decay",
            worst(&|s| if s.t >= 1.0 { s.t * s.diagnostics.sup_v } else { f64::NEG_INFINITY }),
            1.1,
            monotone,
        ),
        invariant(
            "l1_contraction",
            distances.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max),
            1e-8,
            true,
        ),
    ])
}

pub fn cmd_verify(config: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let v = &config.verify;
    let suite = v.suite();
    LevySymbol::fractional(suite.alpha)?;
    if !(v.tolerance >= 0.0) {
        return Err(CliError::Validation(format!("verify.tolerance must be nonnegative, got {}", v.tolerance)));
    }
    let grid = Grid::new(v.half_length, v.points)?;
    let (fields, corpus) = match v.corpus {
        CorpusKind::Random => {
            let corpus = random_corpus(&grid, v.functions, config.seed)?;
            let fields = corpus.iter().map(|f| f.sample(&grid)).collect::<Result<Vec<_>, _>>()?;
            (fields, Some(corpus))
        }
        CorpusKind::Constant => (vec![Field::constant(&grid, 1.0)], None),
    };
    info!("checking {} functions", fields.len());
    let reports = run_inequality_suite(&fields, &suite)?;
    let mut table = CsvTable::new(InequalityReport::CSV_HEADER.iter().copied());
    for r in &reports {
        table.push(r.csv_row());
    }
    let mut files = vec![write_table(out, "inequalities.csv", "verify", config, table)?];

    let mut problems: Vec<String> = reports
        .iter()
        .filter(|r| r.violations > 0)
        .map(|r| format!("{}: {} violations, worst function index {:?}", r.name, r.violations, r.worst_index))
        .collect();

    if let Some(corpus) = corpus {
        let rows = refinement_stability(&corpus, &grid, &suite)?;
        let mut table = CsvTable::new(["name", "coarse", "fine", "relative_change"]);
        for RefinementRow { name, coarse, fine, relative_change } in &rows {
            table.push(vec![name.clone(), fmt_f64(*coarse), fmt_f64(*fine), fmt_f64(*relative_change)]);
            if *relative_change > v.refinement_tolerance {
                problems.push(format!("{name}: implied constant changes by {relative_change:.3e} under N -> 2N"));
            }
        }
        files.push(write_table(out, "refinement.csv", "verify", config, table)?);
    }

    if v.solver_checks {
        let invariants = solver_invariants(config)?;
        let mut table = CsvTable::new(["check", "worst", "threshold", "status"]);
        for inv in &invariants {
            let status = match inv.passed() {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "skipped",
            };
            table.push(vec![inv.name.to_string(), fmt_f64(inv.worst), fmt_f64(inv.threshold), status.to_string()]);
            if inv.passed() == Some(false) {
                problems.push(format!("{}: worst {:.3e} exceeds {:.1e}", inv.name, inv.worst, inv.threshold));
            }
        }
        files.push(write_table(out, "invariants.csv", "verify", config, table)?);
    }

    if problems.is_empty() {
        Ok(Outcome { files })
    } else {
        Err(CliError::Violation(format!("property violations:\n  {}", problems.join("\n  "))))
    }
}

pub fn cmd_rate(config: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let r = &config.rate;
    if r.alpha.is_empty() || r.p.is_empty() {
        return Err(CliError::Validation("rate.alpha and rate.p must be non-empty".into()));
    }
    if !(r.t_min > 0.0 && r.t_end > r.t_min && r.samples >= 2) {
        return Err(CliError::Validation("rate needs 0 < t_min < t_end and at least 2 samples".into()));
    }
    let mut runs = Vec::new();
    for &alpha in &r.alpha {
        check_solver_alpha(alpha)?;
        for &p in &r.p {
            predicted_rate_exponent(alpha, p)?;
            runs.push((alpha, p));
        }
    }
    let grid = Grid::new(r.half_length, r.points)?;
    let datum = config.datum(&grid, 0.0)?;
    if !(datum.u_plus(grid.dx()) > datum.u_minus()) {
        return Err(CliError::Validation("the rate experiment needs u_minus < u_plus".into()));
    }
    let mut times = vec![0.0];
    times.extend(geometric_times(r.t_min, r.t_end, r.samples));
    let base = SolverConfig::new(grid, LevySymbol::fractional(r.alpha[0])?, r.dt)
        .with_flux(config.solver.flux)
        .with_samples(times);

    let experiments = runs
        .par_iter()
        .map(|&(alpha, p)| theorem_main_experiment(alpha, p, &datum, &base))
        .collect::<Result<Vec<_>, _>>()?;

    let mut files = Vec::new();
    let mut summary = CsvTable::new([
        "alpha",
        "p",
        "predicted_exponent",
        "fitted_exponent",
        "uncorrected_exponent",
        "gap",
        "within_margin",
        "box_valid",
    ]);
    let mut slow = Vec::new();
    for e in &experiments {
        let dir = out.join("rate").join(format!("alpha{}_p{}", e.alpha, fmt_p(e.p)));
        files.push(write_table(&dir, "table.csv", "rate", config, e.table())?);
        let within = e.within_bound(r.margin);
        if !within {
            slow.push(format!(
                "alpha = {}, p = {}: fitted {:.4} vs predicted {:.4}",
                e.alpha,
                fmt_p(e.p),
                e.fit.exponent,
                e.predicted_exponent
            ));
        }
        summary.push(vec![
            fmt_f64(e.alpha),
            fmt_p(e.p),
            fmt_f64(e.predicted_exponent),
            fmt_f64(e.fit.exponent),
            fmt_f64(e.uncorrected_fit.exponent),
            fmt_f64(e.gap()),
            within.to_string(),
            e.box_check.valid.to_string(),
        ]);
    }
    files.insert(0, write_table(out, "rate_summary.csv", "rate", config, summary)?);
    if slow.is_empty() {
        Ok(Outcome { files })
    } else {
        Err(CliError::Violation(format!("decay slower than the predicted bound:\n  {}", slow.join("\n  "))))
    }
}
