use serde::{Deserialize, Serialize};

/// Strictly convex flux `f` in `u_t + a(D) u + f(u)_x = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flux {
    /// `f(u) = u^2 / 2`.
    #[default]
    Burgers,
    /// `f(u) = u^4 / 4 + u^2 / 2`, with `f'' >= 1`.
    Quartic,
}

impl Flux {
    pub fn value(self, u: f64) -> f64 {
        match self {
            Flux::Burgers => 0.5 * u * u,
            Flux::Quartic => 0.25 * u.powi(4) + 0.5 * u * u,
        }
    }

    /// Characteristic speed `f'(u)`.
    pub fn speed(self, u: f64) -> f64 {
        match self {
            Flux::Burgers => u,
            Flux::Quartic => u * u * u + u,
        }
    }

    /// Largest `|f'|` over the interval `[lo, hi]` (the speed is monotone).
    pub fn max_speed(self, lo: f64, hi: f64) -> f64 {
        self.speed(lo).abs().max(self.speed(hi).abs())
    }
}
