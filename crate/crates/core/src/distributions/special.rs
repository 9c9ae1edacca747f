//! Digamma and log-gamma for positive real arguments.

use crate::error::{Error, Result};

/// Below this the argument is shifted upward by recurrence.
const DIGAMMA_SHIFT: f64 = 10.0;
const LOG_GAMMA_SHIFT: f64 = 15.0;

/// B_{2k}/(2k), k = 1..7.
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// B_{2k}/(2k(2k−1)), k = 1..7.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "argument must be positive and finite, got {x}"
        )))
    }
}

/// ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Shifts x to at least 10 with ψ(x) = ψ(x+1) − 1/x, then sums the
/// asymptotic expansion in 1/x².
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < DIGAMMA_SHIFT {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    for c in DIGAMMA_ASYMPTOTIC.iter().rev() {
        series = series * inv2 + c;
    }
    Ok(shift + x.ln() - 0.5 / x - series * inv2)
}

/// ln Γ(x) for x > 0, by Stirling's series after shifting x to at least 15.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut z = x;
    let mut product = 1.0;
    while z < LOG_GAMMA_SHIFT {
        product *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    let stirling = (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series * inv;
    Ok(stirling - product.ln())
}
