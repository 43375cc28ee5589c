//! Logarithmic and scaled complementary error functions built on `libm`.

use std::f64::consts::PI;

const ASYMPTOTIC_FROM: f64 = 25.0;

/// `exp(-a^2)` with the rounding error of `a*a` folded back in.
fn exp_neg_square(a: f64) -> f64 {
    let hi = a * a;
    let lo = a.mul_add(a, -hi);
    (-hi).exp() * (1.0 - lo)
}

/// `1/(a sqrt(pi)) (1 - 1/(2a^2) + 3/(2a^2)^2 - ...)`, accurate for `a >= 25`.
fn erfcx_asymptotic(a: f64) -> f64 {
    let r = 1.0 / (2.0 * a * a);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..8 {
        term *= -((2 * k - 1) as f64) * r;
        sum += term;
    }
    sum / (a * PI.sqrt())
}

/// `q(a) = exp(-a^2) / erfc(a)`, the reciprocal of the scaled function erfcx.
pub fn inv_erfcx(a: f64) -> f64 {
    if a >= ASYMPTOTIC_FROM {
        1.0 / erfcx_asymptotic(a)
    } else {
        exp_neg_square(a) / libm::erfc(a)
    }
}

/// `ln erfc(a)` without underflow.
pub fn ln_erfc(a: f64) -> f64 {
    if a >= ASYMPTOTIC_FROM {
        -a * a + erfcx_asymptotic(a).ln()
    } else {
        libm::erfc(a).ln()
    }
}
