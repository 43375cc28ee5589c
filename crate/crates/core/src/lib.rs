//! Pseudospectral simulation and verification toolkit for the fractal
//! Burgers equation `u_t + Lambda^alpha u + u u_x = 0` with `alpha` in `(1, 2)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod kernel;
pub mod quadrature;
pub mod report;
pub mod solver;
pub mod spectral;
pub mod waves;

pub use error::{Error, Result};
