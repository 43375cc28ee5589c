use crate::error::{Error, Result};
use crate::spectral::Field;

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("L^p norms need p >= 1, got {p}")))
    }
}

/// `||v||_p` of grid samples with spacing `dx` (periodic trapezoid rule).
pub fn lp_norm_values(values: &[f64], dx: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    // scale out the maximum so large p cannot overflow
    let sum: f64 = values.iter().map(|v| (v.abs() / scale).powf(p)).sum();
    Ok(scale * (sum * dx).powf(1.0 / p))
}

/// `||f||_p` for `p` in `[1, inf]`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    lp_norm_values(f.values(), f.grid().dx(), p)
}

/// `||f - g||_p` for two fields on the same grid.
pub fn lp_distance(f: &Field, g: &Field, p: f64) -> Result<f64> {
    f.ensure_same_grid(g)?;
    let diff: Vec<f64> = f.values().iter().zip(g.values()).map(|(a, b)| a - b).collect();
    lp_norm_values(&diff, f.grid().dx(), p)
}
