/// Cole-Hopf representation by direct quadrature:
/// `w = int ((x - y) / t) K dy / int K dy`,
/// `K = exp(-(x - y)^2 / (4t) - Phi(y) / 2)`, `Phi` the primitive of the
/// Riemann datum vanishing at zero. Each half-line piece is a Gaussian in
/// `y`, integrated by Simpson's rule after subtracting its peak exponent.
pub fn cole_hopf_quadrature(u_minus: f64, u_plus: f64, x: f64, t: f64) -> f64 {
    let piece = |u: f64, lo: f64, hi: f64| -> (f64, f64, f64) {
        let exponent = |y: f64| -(x - y).powi(2) / (4.0 * t) - 0.5 * u * y;
        // the exponent peaks at y = x - u t
        let peak = (x - u * t).clamp(lo, hi);
        let reach = 30.0 * t.sqrt();
        let (a, b) = ((peak - reach).max(lo), (peak + reach).min(hi));
        let top = exponent(peak);
        let n = 20_000;
        let h = (b - a) / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..=n {
            let y = a + k as f64 * h;
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let kernel = (exponent(y) - top).exp();
            num += w * kernel * (x - y) / t;
            den += w * kernel;
        }
        (top, num * h / 3.0, den * h / 3.0)
    };
    let (tl, nl, dl) = piece(u_minus, f64::NEG_INFINITY, 0.0);
    let (tr, nr, dr) = piece(u_plus, 0.0, f64::INFINITY);
    let top = tl.max(tr);
    let (sl, sr) = ((tl - top).exp(), (tr - top).exp());
    (sl * nl + sr * nr) / (sl * dl + sr * dr)
}
