use thiserror::Error;

/// Errors raised by the simulation and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("time step {dt} violates the advective CFL limit {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("kernel value {value:e} at y = {y} is negative beyond tolerance")]
    NegativeDensity { y: f64, value: f64 },

    #[error("box contamination: only {fraction:.6} of the mass stays inside [-L/2, L/2]")]
    BoxContamination { fraction: f64 },

    #[error("solver blew up at t = {t}: {detail}")]
    Blowup { t: f64, detail: String },

    #[error("decay fit needs {needed}: {detail}")]
    InsufficientSamples { needed: &'static str, detail: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for errors caused by bad user input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::GridMismatch | Error::Cfl { .. } | Error::Degenerate(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
