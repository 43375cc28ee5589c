use std::f64::consts::PI;

use fburgers::analysis::{
    check_gagliardo_nirenberg, check_interpolation, check_nash, check_positivity_forms, fit_decay, geometric_times,
    lp_norm, random_corpus, run_inequality_suite, theorem_main_experiment, SuiteConfig,
};
use fburgers::solver::{InitialDatum, SolverConfig};
use fburgers::spectral::{Field, Grid, LevySymbol};
use proptest::prelude::*;
use statrs::function::gamma::gamma;

fn gaussian(grid: &Grid) -> Field {
    Field::from_fn(grid, |x| (-x * x).exp()).unwrap()
}

/// `int_0^inf xi^s e^{-xi^2/2} d xi`.
fn half_gaussian_moment(s: f64) -> f64 {
    2f64.powf((s - 1.0) / 2.0) * gamma((s + 1.0) / 2.0)
}

#[test]
fn nash_ratio_of_gaussian() {
    let alpha = 1.5;
    // ||f||_2^2 = sqrt(pi/2), ||f||_1 = sqrt(pi), and by Plancherel
    // ||Lambda^{alpha/2} f||_2^2 = int_0^inf xi^alpha e^{-xi^2/2} d xi
    let exact = (PI / 2.0).sqrt().powf(1.0 + alpha) / (half_gaussian_moment(alpha) * PI.sqrt().powf(2.0 * alpha));
    // the Fourier sum has an O((pi/L)^{1+alpha}) cusp error at xi = 0
    let ratio = check_nash(&gaussian(&Grid::new(3200.0, 131072).unwrap()), alpha).unwrap();
    assert!((ratio / exact - 1.0).abs() < 1e-8, "{ratio} vs {exact}");
}

#[test]
fn interpolation_ratio_of_gaussian_at_p2() {
    let alpha = 1.5;
    let lhs = half_gaussian_moment(2.0 * alpha).sqrt();
    let fx = (PI / 2.0).sqrt().sqrt();
    let fxx = (4.5 * PI).sqrt().sqrt();
    let exact = lhs / (fx.powf(2.0 - alpha) * fxx.powf(alpha - 1.0));
    let ratio = check_interpolation(&gaussian(&Grid::new(200.0, 8192).unwrap()), alpha, 2.0).unwrap();
    assert!((ratio / exact - 1.0).abs() < 1e-8, "{ratio} vs {exact}");
}

#[test]
fn gagliardo_nirenberg_ratio_of_gaussian() {
    let grid = Grid::new(20.0, 4096).unwrap();
    // ||f||_inf = 1, ||f_x||_inf = sqrt(2/e), ||f||_3 = (pi/3)^{1/6}, a = 1/4
    let exact = 1.0 / ((2.0 / std::f64::consts::E).sqrt().powf(0.25) * (PI / 3.0).powf(1.0 / 8.0));
    let ratio = check_gagliardo_nirenberg(&gaussian(&grid), 3.0, f64::INFINITY).unwrap();
    assert!((ratio / exact - 1.0).abs() < grid.dx() * grid.dx(), "{ratio} vs {exact}");
}

#[test]
fn sign_forms_hold_on_a_corpus() {
    let grid = Grid::new(64.0, 2048).unwrap();
    let corpus = random_corpus(&grid, 12, 11).unwrap();
    for f in &corpus {
        let field = f.sample(&grid).unwrap();
        for p in [1.5, 2.0, 3.0, 4.0] {
            let forms = check_positivity_forms(&field, 1.5, p).unwrap();
            assert_eq!(forms.violations(1e-8), 0, "{forms:?}");
        }
    }
}

#[test]
fn heat_limit_turns_the_hyper_form_into_an_identity() {
    let grid = Grid::new(64.0, 2048).unwrap();
    for f in random_corpus(&grid, 8, 5).unwrap() {
        let forms = check_positivity_forms(&f.sample(&grid).unwrap(), 2.0, 4.0).unwrap();
        assert!(forms.hyper.abs() <= 1e-8 * forms.hyper_scale, "{forms:?}");
    }
}

#[test]
fn suite_reports_every_inequality() {
    let grid = Grid::new(64.0, 2048).unwrap();
    let fields: Vec<Field> = random_corpus(&grid, 10, 3).unwrap().iter().map(|f| f.sample(&grid).unwrap()).collect();
    let reports = run_inequality_suite(&fields, &SuiteConfig::default()).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    for expected in
        ["nash", "interpolation_p2", "interpolation_pinf", "sgn", "positive_part", "negative_part", "hyper_p4"]
    {
        assert!(names.contains(&expected), "{names:?}");
    }
    assert!(reports.iter().all(|r| r.violations == 0 && r.rejected == 0 && r.functions == 10));
}

#[test]
fn rate_experiment_on_a_short_run() {
    let grid = Grid::new(200.0, 2048).unwrap();
    let datum = InitialDatum::smooth_step(&grid, -1.0, 1.0, 1.0).unwrap();
    let mut times = vec![0.0];
    times.extend(geometric_times(1.0, 50.0, 12));
    let config = SolverConfig::new(grid, LevySymbol::fractional(1.9).unwrap(), 0.05).with_samples(times);
    let experiment = theorem_main_experiment(1.5, f64::INFINITY, &datum, &config).unwrap();
    assert_eq!(experiment.rows.len(), 12);
    assert!((experiment.predicted_exponent + 0.25).abs() < 1e-15);
    let first = experiment.rows[0];
    assert!((first.predicted_bound - first.norm).abs() < 1e-14 * first.norm);
    assert!(experiment.fit.exponent < 0.0);
    assert!(experiment.rows.iter().all(|r| r.norm > 0.0 && r.viscous_distance.is_finite()));
    let table = experiment.table().to_string_lossy();
    assert!(table.starts_with("# alpha = "));
}

proptest! {
    #[test]
    fn lp_norms_of_gaussians(p in 1.0f64..8.0, sigma in 0.5f64..3.0) {
        let grid = Grid::new(40.0, 2048).unwrap();
        let f = Field::from_fn(&grid, |x| (-(x / sigma).powi(2)).exp()).unwrap();
        let exact = (sigma * (PI / p).sqrt()).powf(1.0 / p);
        prop_assert!((lp_norm(&f, p).unwrap() / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fit_recovers_power_laws(exponent in -2.0f64..-0.1, c in 0.1f64..10.0) {
        let times = geometric_times(1.0, 1000.0, 20);
        let values: Vec<f64> = times.iter().map(|t| c * t.powf(exponent) * (2.0 + t).ln()).collect();
        let fit = fit_decay(&times, &values, true).unwrap();
        prop_assert!((fit.exponent - exponent).abs() < 1e-10);
    }
}
