use std::borrow::Cow;

use rustfft::num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples on a [`Grid`], optionally carrying their DFT.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    spectrum: Option<Vec<Complex64>>,
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param("values", format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        check_finite(&values)?;
        Ok(Field { grid: grid.clone(), values, spectrum: None })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Field { grid: grid.clone(), values: vec![0.0; grid.len()], spectrum: None }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Field { grid: grid.clone(), values: vec![c; grid.len()], spectrum: None }
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Field::new(grid, grid.points().into_iter().map(f).collect())
    }

    /// Builds a field from DFT coefficients; the spectrum is kept as cache.
    ///
    /// The spectrum must be Hermitian for the cache to stay consistent.
    pub fn from_spectrum(grid: &Grid, spectrum: Vec<Complex64>) -> Result<Self> {
        let values = grid.inverse(&spectrum);
        check_finite(&values)?;
        Ok(Field { grid: grid.clone(), values, spectrum: Some(spectrum) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn has_spectrum(&self) -> bool {
        self.spectrum.is_some()
    }

    /// DFT coefficients, borrowed from the cache when present.
    pub fn spectrum(&self) -> Cow<'_, [Complex64]> {
        match &self.spectrum {
            Some(s) => Cow::Borrowed(s),
            None => Cow::Owned(self.grid.forward(&self.values)),
        }
    }

    pub fn with_spectrum(mut self) -> Self {
        if self.spectrum.is_none() {
            self.spectrum = Some(self.grid.forward(&self.values));
        }
        self
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Field, b: f64) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Field::new(&self.grid, values)
    }

    pub fn scaled(&self, a: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| a * v).collect(),
            spectrum: self.spectrum.as_ref().map(|s| s.iter().map(|c| c * a).collect()),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Periodic trapezoid integral `dx * sum(values)`.
    pub fn integral(&self) -> f64 {
        self.grid.dx() * self.values.iter().sum::<f64>()
    }

    /// Sup distance between two fields on the same grid.
    pub fn sup_distance(&self, other: &Field) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_wrong_length() {
        let g = Grid::new(1.0, 8).unwrap();
        assert!(Field::new(&g, vec![0.0; 7]).unwrap_err().is_validation());
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert_eq!(Field::new(&g, v).unwrap_err(), Error::NonFinite { index: 3 });
    }

    #[test]
    fn cached_spectrum_reproduces_values() {
        let g = Grid::new(5.0, 64).unwrap();
        let f = Field::from_fn(&g, |x| (-x * x).exp()).unwrap().with_spectrum();
        let back = Field::from_spectrum(&g, f.spectrum().into_owned()).unwrap();
        let scale = f.max_abs();
        assert!(f.sup_distance(&back).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn combine_checks_grids() {
        let a = Field::zeros(&Grid::new(1.0, 8).unwrap());
        let b = Field::zeros(&Grid::new(2.0, 8).unwrap());
        assert_eq!(a.combine(1.0, &b, 1.0).unwrap_err(), Error::GridMismatch);
    }
}
