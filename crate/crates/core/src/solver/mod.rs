//! Time integration of the fractal Burgers equation with step-like data.

mod background;
mod config;
mod datum;
mod flux;
mod gradient;
mod integrator;

pub use background::{BackgroundSolver, BackgroundState};
pub use config::{BoxCheck, SolverConfig};
pub use datum::{Atom, InitialDatum, Measure};
pub use flux::Flux;
pub use gradient::{Diagnostics, Snapshot, Solver, SolverState, Trajectory};
