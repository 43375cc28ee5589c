//! Grid representation, transforms and diffusion operators.

mod field;
mod grid;
mod ops;
mod singular;
mod symbol;

pub use field::Field;
pub use grid::Grid;
pub use ops::{apply_multiplier, apply_symbol, cumulative_integral, dealias_in_place, derivative, quadratic_form};
pub use singular::{
    apply_fractional_laplacian_integral, calibrate_c_alpha, calibrate_c_alpha_on, calibration_grid,
    fractional_laplacian_of_fn,
};
pub use symbol::{LevySymbol, StableTerm};
