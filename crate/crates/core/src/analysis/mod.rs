//! Norms, power-law fits, the functional-inequality checks and the
//! rarefaction-rate experiment.

mod corpus;
mod experiment;
mod fit;
mod inequalities;
mod norms;

pub use corpus::{
    random_corpus, refinement_stability, run_inequality_suite, Packet, RefinementRow, SuiteConfig, TestFunction,
};
pub use experiment::{predicted_rate_exponent, theorem_main_experiment, RateExperiment, RateRow};
pub use fit::{fit_decay, geometric_times, DecayFit, MIN_DECADES, MIN_SAMPLES};
pub use inequalities::{
    check_gagliardo_nirenberg, check_interpolation, check_nash, check_positivity_forms, decays_at_edges,
    gagliardo_nirenberg_exponent, InequalityReport, PositivityForms,
};
pub use norms::{lp_distance, lp_norm, lp_norm_values};
