use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples accepted by [`fit_decay`].
pub const MIN_SAMPLES: usize = 6;
/// Minimum span of the sample times, in decades.
pub const MIN_DECADES: f64 = 1.5;

/// Least-squares power law `value ~ e^intercept * t^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Whether `log(2 + t)` was divided out before fitting.
    pub log_corrected: bool,
}

impl DecayFit {
    pub const CSV_HEADER: [&'static str; 7] =
        ["exponent", "intercept", "residual_rms", "t_min", "t_max", "samples", "log_corrected"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            crate::report::fmt_f64(self.exponent),
            crate::report::fmt_f64(self.intercept),
            crate::report::fmt_f64(self.residual_rms),
            crate::report::fmt_f64(self.t_min),
            crate::report::fmt_f64(self.t_max),
            self.samples.to_string(),
            self.log_corrected.to_string(),
        ]
    }
}

/// Fits a line through `(log t, log(value / log(2+t)^flag))`.
pub fn fit_decay(times: &[f64], values: &[f64], log_correct: bool) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::param("values", "times and values differ in length"));
    }
    if times.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: "at least 6 samples",
            detail: format!("got {}", times.len()),
        });
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || !(times[0] > 0.0) {
        return Err(Error::param("times", "must be positive and strictly increasing"));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::param("values", format!("must be positive and finite, got {v}")));
    }
    let (t_min, t_max) = (times[0], times[times.len() - 1]);
    let decades = (t_max / t_min).log10();
    if decades < MIN_DECADES - 1e-12 {
        return Err(Error::InsufficientSamples {
            needed: "a span of at least 1.5 decades",
            detail: format!("[{t_min}, {t_max}] spans {decades:.3}"),
        });
    }
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> =
        times.iter().zip(values).map(|(t, v)| if log_correct { (v / (2.0 + t).ln()).ln() } else { v.ln() }).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual_rms =
        (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DecayFit { exponent, intercept, residual_rms, t_min, t_max, samples: times.len(), log_corrected: log_correct })
}

/// `count` times spaced geometrically over `[t_min, t_max]`.
pub fn geometric_times(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let ratio = (t_max / t_min).ln() / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { t_max } else { t_min * (ratio * i as f64).exp() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let t = geometric_times(1.0, 100.0, 10);
        let v: Vec<f64> = t.iter().map(|t| t.powf(-0.25)).collect();
        let fit = fit_decay(&t, &v, false).unwrap();
        assert!((fit.exponent + 0.25).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn log_correction_removes_factor() {
        let t = geometric_times(1.0, 1000.0, 12);
        let v: Vec<f64> = t.iter().map(|t| t.powf(-0.25) * (2.0 + t).ln()).collect();
        let fit = fit_decay(&t, &v, true).unwrap();
        assert!((fit.exponent + 0.25).abs() < 1e-10);
    }

    #[test]
    fn uncorrected_log_biases_slope_upward() {
        let t = geometric_times(5.0, 500.0, 12);
        let v: Vec<f64> = t.iter().map(|t| t.powf(-0.25) * (2.0 + t).ln()).collect();
        let fit = fit_decay(&t, &v, false).unwrap();
        assert!(fit.exponent > -0.2, "{}", fit.exponent);
    }

    #[test]
    fn rejects_bad_input() {
        let t = geometric_times(1.0, 100.0, 8);
        let mut v = vec![1.0; 8];
        v[2] = 0.0;
        assert!(fit_decay(&t, &v, false).is_err());
        assert!(fit_decay(&t[..5], &[1.0; 5], false).is_err());
        let short = geometric_times(1.0, 10.0, 8);
        assert!(matches!(fit_decay(&short, &[1.0; 8], false), Err(Error::InsufficientSamples { .. })));
    }

    proptest! {
        #[test]
        fn recovers_any_exponent(e in -3.0f64..1.0, c in 0.01f64..100.0) {
            let t = geometric_times(0.5, 300.0, 9);
            let v: Vec<f64> = t.iter().map(|t| c * t.powf(e)).collect();
            let fit = fit_decay(&t, &v, false).unwrap();
            prop_assert!((fit.exponent - e).abs() < 1e-10);
            prop_assert!((fit.intercept - c.ln()).abs() < 1e-9);
        }
    }
}
