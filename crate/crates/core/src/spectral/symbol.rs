use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One fractional term `weight * |xi|^alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableTerm {
    pub weight: f64,
    pub alpha: f64,
}

/// Fourier multiplier `a(xi) = q xi^2 + sum_j a_j |xi|^{alpha_j}` of a
/// multifractal diffusion operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevySymbol {
    local: f64,
    terms: Vec<StableTerm>,
}

impl LevySymbol {
    pub fn new(local: f64, terms: Vec<StableTerm>) -> Result<Self> {
        if !(local.is_finite() && local >= 0.0) {
            return Err(Error::param("local_coefficient", format!("must be >= 0, got {local}")));
        }
        for term in &terms {
            if !(term.weight.is_finite() && term.weight > 0.0) {
                return Err(Error::param("weight", format!("must be > 0, got {}", term.weight)));
            }
            if !(term.alpha > 0.0 && term.alpha <= 2.0) {
                return Err(Error::param("alpha", format!("must lie in (0, 2], got {}", term.alpha)));
            }
        }
        if local == 0.0 && terms.is_empty() {
            return Err(Error::param("terms", "symbol has no diffusion at all"));
        }
        Ok(LevySymbol { local, terms })
    }

    /// The symbol `|xi|^alpha` of the fractional Laplacian.
    pub fn fractional(alpha: f64) -> Result<Self> {
        LevySymbol::new(0.0, vec![StableTerm { weight: 1.0, alpha }])
    }

    /// `xi^2`, i.e. `-d^2/dx^2`.
    pub fn laplacian() -> Self {
        LevySymbol { local: 1.0, terms: Vec::new() }
    }

    pub fn local_coefficient(&self) -> f64 {
        self.local
    }

    pub fn terms(&self) -> &[StableTerm] {
        &self.terms
    }

    /// Smallest order present; governs the large-time behaviour.
    pub fn dominant_alpha(&self) -> f64 {
        let base = if self.local > 0.0 { 2.0 } else { f64::INFINITY };
        self.terms.iter().map(|t| t.alpha).fold(base, f64::min)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a == 0.0 {
            return 0.0;
        }
        self.local * a * a + self.terms.iter().map(|t| t.weight * a.powf(t.alpha)).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_term_is_fractional_laplacian() {
        let s = LevySymbol::fractional(1.5).unwrap();
        assert_eq!(s.eval(4.0), 8.0);
        assert_eq!(s.eval(0.0), 0.0);
        assert_eq!(s.dominant_alpha(), 1.5);
    }

    #[test]
    fn multifractal_dominant_alpha_is_minimum() {
        let s =
            LevySymbol::new(0.5, vec![StableTerm { weight: 1.0, alpha: 1.7 }, StableTerm { weight: 2.0, alpha: 1.2 }])
                .unwrap();
        assert_eq!(s.dominant_alpha(), 1.2);
        assert_eq!(LevySymbol::laplacian().dominant_alpha(), 2.0);
    }

    #[test]
    fn rejects_invalid_terms() {
        assert!(LevySymbol::fractional(0.0).is_err());
        assert!(LevySymbol::fractional(2.5).is_err());
        assert!(LevySymbol::new(-1.0, vec![]).is_err());
        assert!(LevySymbol::new(0.0, vec![]).is_err());
        assert!(LevySymbol::new(0.0, vec![StableTerm { weight: -1.0, alpha: 1.5 }]).is_err());
    }

    proptest! {
        #[test]
        fn symbol_is_even_and_nonnegative(q in 0.0f64..2.0, a in 0.1f64..3.0, al in 0.1f64..2.0, xi in -50.0f64..50.0) {
            let s = LevySymbol::new(q, vec![StableTerm { weight: a, alpha: al }]).unwrap();
            prop_assert!(s.eval(xi) >= 0.0);
            prop_assert_eq!(s.eval(xi), s.eval(-xi));
        }
    }
}
