//! Sharp Adams constants, sphere constants and concentration levels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::{digamma, ln_gamma, EULER_GAMMA};

/// Derivative order m and dimension n, with 0 < m < n and n ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdamsParams {
    m: u32,
    n: u32,
}

impl AdamsParams {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if n < 2 {
            return domain(format!("dimension n must be at least 2, got {n}"));
        }
        if m == 0 || m >= n {
            return domain(format!("need 0 < m < n, got m = {m}, n = {n}"));
        }
        Ok(AdamsParams { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_even(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    /// The Lebesgue exponent n/m.
    pub fn ratio(&self) -> f64 {
        self.n as f64 / self.m as f64
    }
}

/// ω_{n−1} (unit sphere area) and ω_n (unit ball volume).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereConstants {
    pub omega_sphere: f64,
    pub omega_ball: f64,
}

impl SphereConstants {
    pub fn new(n: u32) -> Result<Self> {
        if n < 1 {
            return domain("sphere constants need n ≥ 1");
        }
        let ln_s = ln_omega_sphere(n)?;
        let ln_b = ln_s - (n as f64).ln();
        Ok(SphereConstants {
            omega_sphere: ln_s.exp(),
            omega_ball: ln_b.exp(),
        })
    }
}

/// ln ω_{n−1} = ln 2 + (n/2) ln π − ln Γ(n/2)
pub fn ln_omega_sphere(n: u32) -> Result<f64> {
    let h = n as f64 / 2.0;
    Ok(2f64.ln() + h * PI.ln() - ln_gamma(h)?)
}

/// ln β₀(m, n).
pub fn ln_beta0(params: AdamsParams) -> Result<f64> {
    let (m, n) = (params.m as f64, params.n as f64);
    let ln_w = ln_omega_sphere(params.n)?;
    let inner = if params.is_even() {
        // π^{n/2} 2^m Γ(m/2) / Γ((n−m)/2)
        0.5 * n * PI.ln() + m * 2f64.ln() + ln_gamma(m / 2.0)? - ln_gamma((n - m) / 2.0)?
    } else {
        // π^{n/2} 2^m Γ((m+1)/2) / Γ((n−m+1)/2)
        0.5 * n * PI.ln() + m * 2f64.ln() + ln_gamma((m + 1.0) / 2.0)?
            - ln_gamma((n - m + 1.0) / 2.0)?
    };
    Ok(n.ln() - ln_w + n / (n - m) * inner)
}

/// The sharp Adams exponent β₀(m, n).
pub fn beta0(params: AdamsParams) -> Result<f64> {
    Ok(ln_beta0(params)?.exp())
}

/// β₀ through the product re-expression.
///
/// Even m = 2k: [n^{(n−m)/n} ω^{m/n} (n−2) ∏_{j=0}^{k−2}(n−m+2j)(m−2j−2)]^{n/(n−m)}.
/// Odd m = 2k+1: [n^{(n−m)/n} ω^{m/n} ∏_{j=0}^{k−1}(n−m+2j+1)(m−2j−1)]^{n/(n−m)}.
pub fn beta0_product_form(params: AdamsParams) -> Result<f64> {
    let (m, n) = (params.m as f64, params.n as f64);
    let w = SphereConstants::new(params.n)?.omega_sphere;
    let mut ln_base = (n - m) / n * n.ln() + m / n * w.ln();
    if params.is_even() {
        let k = params.m / 2;
        ln_base += (n - 2.0).ln();
        for j in 0..k.saturating_sub(1) {
            let j = j as f64;
            ln_base += ((n - m + 2.0 * j) * (m - 2.0 * j - 2.0)).ln();
        }
    } else {
        let k = params.m / 2;
        for j in 0..k {
            let j = j as f64;
            ln_base += ((n - m + 2.0 * j + 1.0) * (m - 2.0 * j - 1.0)).ln();
        }
    }
    Ok((n / (n - m) * ln_base).exp())
}

/// |Ω|(1 + e^{ψ(n/m)+γ}).
pub fn concentration_level(params: AdamsParams, domain_measure: f64) -> Result<f64> {
    if !(domain_measure > 0.0) || !domain_measure.is_finite() {
        return domain(format!(
            "domain measure must be positive, got {domain_measure}"
        ));
    }
    Ok(domain_measure * level_for_exponent(params.ratio())?)
}

/// 1 + e^{ψ(p)+γ}, the level per unit measure for Lebesgue exponent p.
pub fn level_for_exponent(p: f64) -> Result<f64> {
    Ok(1.0 + (digamma(p)? + EULER_GAMMA).exp())
}

/// η = (1 − ‖·‖^p)^{−1/(p−1)}.
pub fn eta_exponent(grad_norm_p: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return domain(format!("eta exponent needs p > 1, got {p}"));
    }
    if !(0.0..1.0).contains(&grad_norm_p) {
        return domain(format!(
            "eta exponent needs 0 ≤ norm < 1, got {grad_norm_p} (full concentration)"
        ));
    }
    Ok((1.0 - grad_norm_p.powf(p)).powf(-1.0 / (p - 1.0)))
}

/// σ = 1 + 2/√3.
pub fn sigma() -> f64 {
    1.0 + 2.0 / 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TZero {
    pub raw: f64,
    pub integer: u32,
}

impl TZero {
    /// Dimension threshold 2T₀.
    pub fn n_threshold(&self) -> u32 {
        2 * self.integer
    }
}

/// The threshold T₀ of the extremal existence theorem.
pub fn t_zero() -> TZero {
    let s = sigma();
    let d = 17.0 - 24.0 * EULER_GAMMA;
    let a = (1.0 + 36.0 * s) / d;
    let raw = 1.0 + a + (1.0 + a * a + 72.0 * s / d).sqrt();
    TZero {
        raw,
        integer: raw.ceil() as u32,
    }
}
