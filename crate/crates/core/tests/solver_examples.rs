use fburgers::analysis::lp_distance;
use fburgers::solver::{Atom, BackgroundSolver, Flux, InitialDatum, Measure, Solver, SolverConfig, Trajectory};
use fburgers::spectral::{Field, Grid, LevySymbol};

fn config(l: f64, n: usize, dt: f64, times: Vec<f64>) -> SolverConfig {
    SolverConfig::new(Grid::new(l, n).unwrap(), LevySymbol::fractional(1.5).unwrap(), dt).with_samples(times)
}

fn unit_atom() -> InitialDatum {
    InitialDatum::new(0.0, Measure::Atoms(vec![Atom { location: 0.0, weight: 1.0 }])).unwrap()
}

fn run(config: SolverConfig, datum: &InitialDatum) -> Trajectory {
    Solver::new(config).unwrap().run(datum).unwrap()
}

#[test]
fn sech_squared_datum_reconstructs_tanh() {
    let grid = Grid::new(40.0, 1024).unwrap();
    let dx = grid.dx();
    let datum = InitialDatum::smooth_step(&grid, -1.0, 1.0, 1.0).unwrap();
    assert!((datum.u_plus(dx) - 1.0).abs() < 1e-12);
    let solver = Solver::new(SolverConfig::new(grid.clone(), LevySymbol::fractional(1.5).unwrap(), 0.01)).unwrap();
    let u = solver.reconstruct_u(&solver.init(&datum).unwrap());
    // cumulative trapezoid rule on the density, accurate to O(dx^2)
    let density: Vec<f64> = grid.points().iter().map(|x| 1.0 / x.cosh().powi(2)).collect();
    let mut trapezoid = vec![-1.0; grid.len()];
    for j in 1..grid.len() {
        trapezoid[j] = trapezoid[j - 1] + 0.5 * dx * (density[j - 1] + density[j]);
    }
    for (j, x) in grid.points().iter().enumerate() {
        assert!((u.values()[j] - x.tanh()).abs() < 1e-10, "x = {x}");
        assert!((u.values()[j] - trapezoid[j]).abs() < dx * dx);
    }
}

fn gradient_vs_background(datum: &InitialDatum, t: f64) -> f64 {
    let cfg = config(400.0, 4096, 0.02, vec![t]);
    let solver = Solver::new(cfg.clone()).unwrap();
    let mut state = solver.init(datum).unwrap();
    let u0 = solver.reconstruct_u(&state);
    let (u_minus, u_plus) = (state.u_minus, state.u_plus);
    solver.advance_to(&mut state, t).unwrap();
    let background = BackgroundSolver::new(cfg, u_minus, u_plus).unwrap();
    let mut other = background.init(&u0).unwrap();
    background.advance_to(&mut other, t).unwrap();
    solver.reconstruct_u(&state).sup_distance(&background.u(&other)).unwrap()
}

#[test]
fn formulations_agree_on_a_unit_atom() {
    let gap = gradient_vs_background(&unit_atom(), 1.0);
    assert!(gap < 1e-4, "{gap:e}");
}

#[test]
fn formulations_agree_on_a_smooth_step() {
    let grid = Grid::new(400.0, 4096).unwrap();
    let gap = gradient_vs_background(&InitialDatum::smooth_step(&grid, -1.0, 1.0, 1.0).unwrap(), 1.0);
    assert!(gap < 1e-4, "{gap:e}");
}

#[test]
fn mass_is_conserved_up_to_late_times() {
    let times: Vec<f64> = (0..=7).map(|k| 2f64.powi(k)).collect();
    let trajectory = run(config(400.0, 4096, 0.05, times), &unit_atom());
    assert!(trajectory.box_check.valid);
    for s in &trajectory.snapshots {
        let d = s.diagnostics;
        assert!(d.mass_drift < 1e-8, "t = {}: {}", d.t, d.mass_drift);
        assert!(d.min_v > -1e-10 * d.sup_v, "t = {}: {}", d.t, d.min_v);
        assert!((d.l1_v / d.mass - 1.0).abs() < 1e-8);
    }
}

#[test]
fn time_step_convergence_is_fourth_order() {
    let grid = Grid::new(16.0, 512).unwrap();
    let step_atom = InitialDatum::new(-1.0, Measure::Atoms(vec![Atom { location: 0.0, weight: 2.0 }])).unwrap();
    let u_at = |dt: f64| {
        let cfg = SolverConfig::new(grid.clone(), LevySymbol::fractional(1.5).unwrap(), dt).with_samples(vec![0.5]);
        run(cfg, &step_atom).snapshots.last().unwrap().v.clone()
    };
    let (a, b, c) = (u_at(0.025), u_at(0.0125), u_at(0.00625));
    let ratio = a.sup_distance(&b).unwrap() / b.sup_distance(&c).unwrap();
    assert!((16.0 * 0.7..16.0 * 1.3).contains(&ratio), "{ratio}");
}

fn l1_gaps(flux: Flux, a: &InitialDatum, b: &InitialDatum) -> Vec<f64> {
    let times: Vec<f64> = (0..=40).map(|k| 0.25 * k as f64).collect();
    let cfg = config(100.0, 2048, 0.02, times).with_flux(flux);
    let (ta, tb) = (run(cfg.clone(), a), run(cfg, b));
    ta.snapshots.iter().zip(&tb.snapshots).map(|(x, y)| lp_distance(&x.u, &y.u, 1.0).unwrap()).collect()
}

fn perturbed_pair(grid: &Grid, amplitude: f64) -> (InitialDatum, InitialDatum) {
    let base = |x: f64| 0.5 / x.cosh().powi(2) / 2.0;
    let bump = |x: f64| (-(x - 1.0).powi(2)).exp() * (-2.0 * (x - 1.0)) / std::f64::consts::PI.sqrt();
    let sample = |f: &dyn Fn(f64) -> f64| Field::from_fn(grid, f).unwrap().into_values();
    let a = InitialDatum::new(0.0, Measure::Density(sample(&base))).unwrap();
    let b = InitialDatum::new(0.0, Measure::Density(sample(&|x| base(x) + amplitude * bump(x)))).unwrap();
    (a, b)
}

#[test]
fn l1_contraction_for_burgers() {
    let grid = Grid::new(100.0, 2048).unwrap();
    let (a, b) = perturbed_pair(&grid, 0.1);
    let gaps = l1_gaps(Flux::Burgers, &a, &b);
    for w in gaps.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{} > {}", w[1], w[0]);
    }
}

#[test]
fn quartic_flux_keeps_monotonicity_and_contraction() {
    let grid = Grid::new(100.0, 2048).unwrap();
    let (a, b) = perturbed_pair(&grid, 0.1);
    let gaps = l1_gaps(Flux::Quartic, &a, &b);
    for w in gaps.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{} > {}", w[1], w[0]);
    }
    let times: Vec<f64> = (1..=10).map(|k| k as f64).collect();
    let trajectory = run(config(100.0, 2048, 0.02, times).with_flux(Flux::Quartic), &a);
    for s in &trajectory.snapshots {
        assert!(s.diagnostics.min_v > -1e-10 * s.diagnostics.sup_v);
        assert!(s.diagnostics.sup_u <= trajectory.initial_sup_u + 1e-9);
    }
}

#[test]
fn oversized_step_is_a_cfl_error() {
    let cfg = config(10.0, 256, 1.0, vec![1.0]);
    let datum = InitialDatum::riemann(-1.0, 1.0).unwrap();
    assert!(Solver::new(cfg).unwrap().run(&datum).is_err());
}
