use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// A point mass of the initial measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// The measure `m = u_0'`.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    /// Density samples on the solver grid.
    Density(Vec<f64>),
    Atoms(Vec<Atom>),
}

/// Step-like datum `u_0(x) = u_minus + m((-inf, x])`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialDatum {
    u_minus: f64,
    measure: Measure,
}

impl InitialDatum {
    pub fn new(u_minus: f64, measure: Measure) -> Result<Self> {
        if !u_minus.is_finite() {
            return Err(Error::param("u_minus", "must be finite"));
        }
        match &measure {
            Measure::Density(samples) => {
                if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { index });
                }
            }
            Measure::Atoms(atoms) => {
                if atoms.iter().any(|a| !(a.location.is_finite() && a.weight.is_finite())) {
                    return Err(Error::param("atoms", "locations and weights must be finite"));
                }
            }
        }
        Ok(InitialDatum { u_minus, measure })
    }

    /// The constant datum `u_0 = c`.
    pub fn constant(c: f64) -> Result<Self> {
        InitialDatum::new(c, Measure::Atoms(Vec::new()))
    }

    /// Riemann datum: a single atom of mass `u_plus - u_minus` at the origin.
    pub fn riemann(u_minus: f64, u_plus: f64) -> Result<Self> {
        InitialDatum::new(u_minus, Measure::Atoms(vec![Atom { location: 0.0, weight: u_plus - u_minus }]))
    }

    /// `u_0 = (u_- + u_+)/2 + (u_+ - u_-)/2 tanh(x / width)` through its density.
    pub fn smooth_step(grid: &Grid, u_minus: f64, u_plus: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::param("width", format!("must be positive, got {width}")));
        }
        let half_jump = 0.5 * (u_plus - u_minus);
        let samples = grid
            .points()
            .into_iter()
            .map(|x| {
                let s = 1.0 / libm::cosh(x / width);
                half_jump * s * s / width
            })
            .collect();
        InitialDatum::new(u_minus, Measure::Density(samples))
    }

    /// Datum whose density is the spectral derivative of `u0` sampled on
    /// the grid; `u0` must be flat near both box edges.
    pub fn from_profile(grid: &Grid, u0: impl Fn(f64) -> f64) -> Result<Self> {
        let field = Field::from_fn(grid, &u0)?;
        let u_minus = field.values()[0];
        let jump = u0(grid.half_length()) - u_minus;
        // remove the jump so the periodic derivative sees a smooth function
        let ramp = |x: f64| jump * (x + grid.half_length()) / (2.0 * grid.half_length());
        let periodic = Field::from_fn(grid, |x| u0(x) - ramp(x))?;
        let slope = jump / (2.0 * grid.half_length());
        let density = crate::spectral::derivative(&periodic, 1)?.values().iter().map(|v| v + slope).collect();
        InitialDatum::new(u_minus, Measure::Density(density))
    }

    pub fn u_minus(&self) -> f64 {
        self.u_minus
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    /// Total mass `m(R)`; density masses use the grid spacing `dx`.
    pub fn total_mass(&self, dx: f64) -> f64 {
        match &self.measure {
            Measure::Density(samples) => samples.iter().sum::<f64>() * dx,
            Measure::Atoms(atoms) => atoms.iter().map(|a| a.weight).sum(),
        }
    }

    pub fn u_plus(&self, dx: f64) -> f64 {
        self.u_minus + self.total_mass(dx)
    }

    /// Whether `m >= 0`.
    pub fn is_monotone(&self) -> bool {
        match &self.measure {
            Measure::Density(samples) => samples.iter().all(|v| *v >= 0.0),
            Measure::Atoms(atoms) => atoms.iter().all(|a| a.weight >= 0.0),
        }
    }

    /// Grid samples of `m`, atoms replaced by Gaussians of standard deviation
    /// `3 dx` normalized to carry their exact weight on the grid.
    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        match &self.measure {
            Measure::Density(samples) => Field::new(grid, samples.clone()),
            Measure::Atoms(atoms) => {
                let half = grid.half_length();
                let dx = grid.dx();
                let sigma = 3.0 * dx;
                let mut values = vec![0.0; grid.len()];
                for atom in atoms {
                    if atom.location.abs() >= 0.5 * half {
                        return Err(Error::param(
                            "atoms",
                            format!(
                                "atom at {} lies outside (-L/2, L/2) = (-{}, {})",
                                atom.location,
                                0.5 * half,
                                0.5 * half
                            ),
                        ));
                    }
                    let bump: Vec<f64> =
                        grid.points().iter().map(|x| (-0.5 * ((x - atom.location) / sigma).powi(2)).exp()).collect();
                    let norm = bump.iter().sum::<f64>() * dx;
                    for (v, b) in values.iter_mut().zip(&bump) {
                        *v += atom.weight * b / norm;
                    }
                }
                Field::new(grid, values)
            }
        }
    }
}
