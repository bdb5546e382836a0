//! Hyperbolic functions in forms that stay finite for arguments from 1e-12
//! up to 1e4, where the textbook expressions overflow or cancel.

use std::f64::consts::LN_2;

/// `coth(θ) − 1 = 2 / (e^{2θ} − 1)`, for θ > 0.
pub fn coth_excess(theta: f64) -> f64 {
    2.0 / (2.0 * theta).exp_m1()
}

/// `ln(coth(θ) − 1)`, finite for every θ > 0 (≈ ln 2 − 2θ for large θ).
pub fn ln_coth_excess(theta: f64) -> f64 {
    LN_2 - 2.0 * theta - (-(-2.0 * theta).exp_m1()).ln()
}

pub fn coth(theta: f64) -> f64 {
    1.0 + coth_excess(theta)
}

/// `csch²(θ) = 4 e^{−2θ} / (1 − e^{−2θ})²`.
pub fn csch_squared(theta: f64) -> f64 {
    let d = (-2.0 * theta).exp_m1();
    4.0 * (-2.0 * theta).exp() / (d * d)
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `arcoth(u) = ½ ln((u + 1)/(u − 1))` for u > 1.
pub fn arcoth(u: f64) -> f64 {
    0.5 * (2.0 / (u - 1.0)).ln_1p()
}

/// `arcoth(1 + e^L)`, the inverse of [`ln_coth_excess`].
pub fn arcoth_from_ln_excess(ln_excess: f64) -> f64 {
    0.5 * softplus(LN_2 - ln_excess)
}
