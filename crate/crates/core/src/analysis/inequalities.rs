use serde::{Deserialize, Serialize};

use super::norms::lp_norm;
use crate::error::{Error, Result};
use crate::report::fmt_f64;
use crate::spectral::{apply_symbol, derivative, quadratic_form, Field, LevySymbol};

fn fractional(alpha: f64) -> Result<LevySymbol> {
    LevySymbol::fractional(alpha)
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn nonzero(value: f64, what: &str) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Degenerate(format!("{what} vanishes")))
    }
}

/// Whether `f` is negligible (below `1e-10 ||f||_inf`) on the outer
/// sixteenth of the box at each end, which the L^p-type checks require.
pub fn decays_at_edges(f: &Field) -> bool {
    let n = f.values().len();
    let band = (n / 16).max(1);
    let sup = f.max_abs();
    if sup == 0.0 {
        return false;
    }
    let v = f.values();
    v[..band].iter().chain(&v[n - band..]).all(|x| x.abs() <= 1e-10 * sup)
}

/// `||f||_2^{2(1+alpha)} / (||Lambda^{alpha/2} f||_2^2 ||f||_1^{2 alpha})`.
pub fn check_nash(f: &Field, alpha: f64) -> Result<f64> {
    let l2 = nonzero(lp_norm(f, 2.0)?, "||f||_2")?;
    let l1 = lp_norm(f, 1.0)?;
    let energy = nonzero(quadratic_form(f, &fractional(alpha)?), "||Lambda^{alpha/2} f||_2")?;
    Ok(l2.powf(2.0 * (1.0 + alpha)) / (energy * l1.powf(2.0 * alpha)))
}

/// `||Lambda^alpha f||_p / (||f_x||_p^{2-alpha} ||f_xx||_p^{alpha-1})`.
pub fn check_interpolation(f: &Field, alpha: f64, p: f64) -> Result<f64> {
    let lhs = lp_norm(&apply_symbol(f, &fractional(alpha)?)?, p)?;
    let fx = nonzero(lp_norm(&derivative(f, 1)?, p)?, "||f_x||_p")?;
    let fxx = nonzero(lp_norm(&derivative(f, 2)?, p)?, "||f_xx||_p")?;
    Ok(lhs / (fx.powf(2.0 - alpha) * fxx.powf(alpha - 1.0)))
}

/// Interpolation exponent `a = (1/p0 - 1/p) / (1 + 1/p0)`.
pub fn gagliardo_nirenberg_exponent(p0: f64, p: f64) -> Result<f64> {
    if !(p0 > 1.0 && p > p0) {
        return Err(Error::param("p0/p", format!("need 1 < p0 < p <= inf, got p0 = {p0}, p = {p}")));
    }
    let inv = |q: f64| if q.is_infinite() { 0.0 } else { 1.0 / q };
    Ok((inv(p0) - inv(p)) / (1.0 + inv(p0)))
}

/// `||f||_p / (||f_x||_inf^a ||f||_{p0}^{1-a})`.
pub fn check_gagliardo_nirenberg(f: &Field, p0: f64, p: f64) -> Result<f64> {
    let a = gagliardo_nirenberg_exponent(p0, p)?;
    let fx = nonzero(lp_norm(&derivative(f, 1)?, f64::INFINITY)?, "||f_x||_inf")?;
    let base = nonzero(lp_norm(f, p0)?, "||f||_p0")?;
    Ok(lp_norm(f, p)? / (fx.powf(a) * base.powf(1.0 - a)))
}

/// Margins of the sign-type inequalities for one function. Each margin
/// should be `>= -tolerance * scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityForms {
    pub p: f64,
    /// `int (Lambda^alpha f)|f|^{p-2} f - 4(p-1)/p^2 int (Lambda^{alpha/2}|f|^{p/2})^2`.
    pub hyper: f64,
    pub hyper_scale: f64,
    /// `int (Lambda^alpha f) sgn f`.
    pub sign: f64,
    pub sign_scale: f64,
    /// `int (Lambda^alpha f) f^+` and `int (Lambda^alpha f) f^-` with
    /// `f^+ = max(f, 0)`, `f^- = min(f, 0)`.
    pub positive_part: f64,
    pub negative_part: f64,
    pub part_scale: f64,
}

impl PositivityForms {
    pub fn violations(&self, tolerance: f64) -> usize {
        [
            (self.hyper, self.hyper_scale),
            (self.sign, self.sign_scale),
            (self.positive_part, self.part_scale),
            (self.negative_part, self.part_scale),
        ]
        .iter()
        .filter(|(margin, scale)| *margin < -tolerance * scale)
        .count()
    }
}

pub fn check_positivity_forms(f: &Field, alpha: f64, p: f64) -> Result<PositivityForms> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::param("p", format!("the hyper form needs 1 < p < inf, got {p}")));
    }
    let symbol = fractional(alpha)?;
    let lf = apply_symbol(f, &symbol)?;
    let dx = f.grid().dx();
    let sum = |g: &dyn Fn(f64, f64) -> f64| -> f64 {
        lf.values().iter().zip(f.values()).map(|(l, v)| g(*l, *v)).sum::<f64>() * dx
    };
    let power = f.map(|v| v.abs().powf(p / 2.0))?;
    let hyper_lhs = sum(&|l, v| l * sgn(v) * v.abs().powf(p - 1.0));
    let hyper_rhs = 4.0 * (p - 1.0) / (p * p) * quadratic_form(&power, &symbol);
    Ok(PositivityForms {
        p,
        hyper: hyper_lhs - hyper_rhs,
        hyper_scale: sum(&|l, v| (l * v.abs().powf(p - 1.0)).abs()),
        sign: sum(&|l, v| l * sgn(v)),
        sign_scale: sum(&|l, _| l.abs()),
        positive_part: sum(&|l, v| l * v.max(0.0)),
        negative_part: sum(&|l, v| l * v.min(0.0)),
        part_scale: sum(&|l, v| (l * v).abs()),
    })
}

/// Outcome of one inequality over a corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub functions: usize,
    /// Inputs excluded by the preconditions.
    pub rejected: usize,
    /// Largest ratio for ratio-type forms; smallest normalized margin for
    /// sign-type forms.
    pub worst_ratio: f64,
    /// Empirical constant: the supremum of the ratio (NaN for sign forms).
    pub implied_constant: f64,
    pub violations: usize,
    /// Index within the corpus of the function giving `worst_ratio`.
    pub worst_index: Option<usize>,
}

impl InequalityReport {
    pub const CSV_HEADER: [&'static str; 7] =
        ["inequality", "functions", "rejected", "worst_ratio", "implied_constant", "violations", "worst_index"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.name.clone(),
            self.functions.to_string(),
            self.rejected.to_string(),
            fmt_f64(self.worst_ratio),
            fmt_f64(self.implied_constant),
            self.violations.to_string(),
            self.worst_index.map(|i| i.to_string()).unwrap_or_default(),
        ]
    }

    /// Aggregates ratio-type results; errors count as rejected inputs and
    /// non-finite ratios as violations.
    pub fn from_ratios(name: impl Into<String>, results: &[Result<f64>]) -> Self {
        let mut report = InequalityReport {
            name: name.into(),
            functions: results.len(),
            rejected: 0,
            worst_ratio: f64::NAN,
            implied_constant: f64::NAN,
            violations: 0,
            worst_index: None,
        };
        for (i, r) in results.iter().enumerate() {
            match r {
                Err(_) => report.rejected += 1,
                Ok(v) if !v.is_finite() => report.violations += 1,
                Ok(v) => {
                    if report.worst_index.is_none() || *v > report.worst_ratio {
                        report.worst_ratio = *v;
                        report.worst_index = Some(i);
                    }
                }
            }
        }
        report.implied_constant = report.worst_ratio;
        report
    }

    /// Aggregates normalized margins `margin / scale` of a sign-type form.
    pub fn from_margins(name: impl Into<String>, margins: &[Option<(f64, f64)>], tolerance: f64) -> Self {
        let mut report = InequalityReport {
            name: name.into(),
            functions: margins.len(),
            rejected: 0,
            worst_ratio: f64::NAN,
            implied_constant: f64::NAN,
            violations: 0,
            worst_index: None,
        };
        for (i, m) in margins.iter().enumerate() {
            let Some((margin, scale)) = m else {
                report.rejected += 1;
                continue;
            };
            if *margin < -tolerance * scale || !margin.is_finite() {
                report.violations += 1;
            }
            let normalized = if *scale > 0.0 { margin / scale } else { 0.0 };
            if report.worst_index.is_none() || normalized < report.worst_ratio {
                report.worst_ratio = normalized;
                report.worst_index = Some(i);
            }
        }
        report
    }
}
