//! Gamma, digamma, trigamma and friends.

use crate::error::{domain, Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest argument for which Γ(x) is finite in double precision.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN: f64 = 10.0;

// Σ B_{2k}/(2k(2k−1) x^{2k−1}), x ≥ 10
fn stirling_correction(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    (1.0 / 12.0
        - r * (1.0 / 360.0
            - r * (1.0 / 1260.0
                - r * (1.0 / 1680.0
                    - r * (1.0 / 1188.0
                        - r * (691.0 / 360_360.0
                            - r * (1.0 / 156.0 - r * (3617.0 / 122_400.0))))))))
        / x
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return domain(format!("{what} requires x > 0, got {x}"));
    }
    Ok(())
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive(x, "gamma")?;
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x}) exceeds f64 range")));
    }
    if x.fract() == 0.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let mut y = x;
    let mut denom = 1.0;
    while y < STIRLING_MIN {
        denom *= y;
        y += 1.0;
    }
    // √(2π) y^{y−1/2} e^{−y} e^{S(y)}, squared half-power to stay finite
    let half = y.powf(0.5 * (y - 0.5)) * (-0.5 * y).exp();
    let g = (2.0 * std::f64::consts::PI).sqrt() * stirling_correction(y).exp() * half * half;
    Ok(g / denom)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive(x, "ln_gamma")?;
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut y = x;
    let mut denom = 1.0;
    while y < STIRLING_MIN {
        denom *= y;
        y += 1.0;
    }
    Ok((y - 0.5) * y.ln() - y + HALF_LN_2PI + stirling_correction(y) - denom.ln())
}

/// Digamma ψ(x) = d/dx ln Γ(x).
///
/// Shifts upward to x ≥ 8 and then uses the asymptotic series
/// ln x − 1/(2x) − Σ B_{2k}/(2k x^{2k}).
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma")?;
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 8.0 {
        shift += 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                    - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0))))));
    Ok(x.ln() - 0.5 / x - series - shift)
}

/// Trigamma ψ′(x) = Σ_{k≥0} 1/(x+k)².
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x, "trigamma")?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 8.0 {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    // 1/x + 1/(2x²) + Σ B_{2k}/x^{2k+1}
    let series = 1.0 / 6.0
        - r * (1.0 / 30.0
            - r * (1.0 / 42.0
                - r * (1.0 / 30.0 - r * (5.0 / 66.0 - r * (691.0 / 2730.0 - r * (7.0 / 6.0))))));
    Ok(shift + 1.0 / x + 0.5 * r + series * r / x)
}

/// The Euler-Mascheroni constant γ.
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Harmonic number H_k, summed from the smallest term upward. H_0 = 0.
pub fn harmonic(k: u64) -> f64 {
    (1..=k).rev().map(|j| 1.0 / j as f64).sum()
}
