//! The explicit test function for the m = 2 Adams problem and the gap verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{level_for_exponent, sigma};
use crate::error::{domain, Error, Result};
use crate::moser1d::cc_functional;
use crate::profile::{Piece, PiecewiseProfile, PowerTerm};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::specfun::{digamma, EULER_GAMMA};

/// Smallest dimension for which the analytic verdict is claimed.
pub const VERDICT_MIN_N: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFnParams {
    pub n: u32,
    pub b: f64,
    pub s: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub admissible: bool,
}

/// b = (n/(n−2))^{n/2} − n/(n−2)
pub fn b_choice(n: f64) -> f64 {
    (n / (n - 2.0)).powf(n / 2.0) - n / (n - 2.0)
}

/// s = (n/(n−2))^{n/2}[1 + (4/3)((n+1)/n)^{n/2}/(n−2) − (1 − 4/(n(n−2)))^{n/2}]
pub fn s_choice(n: f64) -> f64 {
    let h = n / 2.0;
    (n / (n - 2.0)).powf(h)
        * (1.0 + 4.0 / 3.0 * ((n + 1.0) / n).powf(h) / (n - 2.0)
            - (1.0 - 4.0 / (n * (n - 2.0))).powf(h))
}

/// Parameters for even n ≥ 4.
pub fn make_params(n: u32) -> Result<TestFnParams> {
    if !n.is_multiple_of(2) {
        return domain(format!(
            "test function needs even n, got {n} (see make_params_extended)"
        ));
    }
    make_params_extended(n)
}

/// Same formulas, odd n allowed.
pub fn make_params_extended(n: u32) -> Result<TestFnParams> {
    if n < 4 {
        return domain(format!("test function needs n ≥ 4, got {n}"));
    }
    let nf = n as f64;
    let b = b_choice(nf);
    let s = s_choice(nf);
    Ok(TestFnParams {
        n,
        b,
        s,
        lambda: 1.0 + (nf - 2.0) / 2.0 * (b - s).exp(),
        sigma: sigma(),
        admissible: 0.0 < s && s < b,
    })
}

fn require_admissible(params: &TestFnParams) -> Result<f64> {
    if !params.admissible {
        return Err(Error::Inadmissible(format!(
            "n = {}: s = {} is not below b = {}",
            params.n, params.s, params.b
        )));
    }
    Ok(params.n as f64)
}

/// w on [0, ∞): linear, then (t−1)^{(n−2)/n}, then an exponential saturation.
pub fn test_function(params: &TestFnParams) -> Result<PiecewiseProfile> {
    let n = require_admissible(params)?;
    let lam = params.lambda;
    let e = (n - 2.0) / n;
    let slope = e * ((n - 2.0) / 2.0).powf(-2.0 / n);
    let tail = Piece::ExpSaturation {
        offset: (lam - 1.0).powf(e),
        coef: (n - 2.0) / 3.0 * (lam - 1.0).powf(-2.0 / n),
        rate: 3.0 / n,
        start: lam,
    };
    PiecewiseProfile::new(
        vec![0.0, n / 2.0, lam],
        vec![
            Piece::linear(0.0, slope),
            Piece::PowerSum {
                shift: 1.0,
                terms: vec![PowerTerm::new(1.0, e)],
                log_coef: 0.0,
            },
        ],
        Some(tail),
    )
}

/// The signed operator (n/(n−2))w″ − w′.
pub fn l_operator(params: &TestFnParams) -> Result<PiecewiseProfile> {
    let n = require_admissible(params)?;
    let lam = params.lambda;
    let first = (n - 2.0) / n * ((n - 2.0) / 2.0).powf(-2.0 / n);
    PiecewiseProfile::with_jumps(
        vec![0.0, n / 2.0, lam],
        vec![
            Piece::constant(-first),
            Piece::PowerSum {
                shift: 1.0,
                terms: vec![
                    PowerTerm::new(-(n - 2.0) / n, -2.0 / n),
                    PowerTerm::new(-2.0 / n, -(n + 2.0) / n),
                ],
                log_coef: 0.0,
            },
        ],
        Some(Piece::ExpDecay {
            coef: -(n + 1.0) / n * (lam - 1.0).powf(-2.0 / n),
            rate: 3.0 / n,
            start: lam,
        }),
    )
}

/// 4/(n(n−2)) + (1 − s((n−2)/n)^{n/2} + (4/3)((n+1)/n)^{n/2}/(n−2))^{2/n}
pub fn norm_chain_display(n: f64, s: f64) -> f64 {
    let h = n / 2.0;
    4.0 / (n * (n - 2.0))
        + (1.0 - s * ((n - 2.0) / n).powf(h) + 4.0 / 3.0 * ((n + 1.0) / n).powf(h) / (n - 2.0))
            .powf(2.0 / n)
}

pub fn norm_chain_bound(params: &TestFnParams) -> Result<f64> {
    let n = require_admissible(params)?;
    Ok(norm_chain_display(n, params.s))
}

/// The Minkowski chain before λ is eliminated.
pub fn norm_chain_bound_lambda(params: &TestFnParams) -> Result<f64> {
    let n = require_admissible(params)?;
    let (h, lm1) = (n / 2.0, params.lambda - 1.0);
    // (2/(n−2))^{n/2} underflows for large n
    let x0 = h - 1.0;
    let ln_inner = (2.0 / n).ln() - h * x0.ln() + (-(x0 / lm1).powf(h)).ln_1p();
    let steep = (2.0 / n * ln_inner).exp();
    let rest = ((n - 2.0) / n).powf(h - 1.0)
        + ((n - 2.0) / n).powf(h) * (2.0 * lm1 / (n - 2.0)).ln()
        + 2.0 / 3.0 * ((n + 1.0) / n).powf(h) / lm1;
    Ok(2.0 / n * steep + rest.powf(2.0 / n))
}

/// ∫|L|^{n/2} split by piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormPieces {
    pub linear: f64,
    pub middle: f64,
    pub tail: f64,
}

impl NormPieces {
    pub fn total(&self) -> f64 {
        self.linear + self.middle + self.tail
    }
}

pub fn norm_pieces(params: &TestFnParams, spec: &QuadratureSpec) -> Result<NormPieces> {
    let n = require_admissible(params)?;
    let h = n / 2.0;
    let (x0, x1) = (h - 1.0, params.lambda - 1.0);
    let linear = ((n - 2.0) / n).powf(h - 1.0);
    let tail = 2.0 / 3.0 * ((n + 1.0) / n).powf(h) / x1;
    // n^{−h} ∫ x^{−1}((n−2) + 2/x)^h dx = ((n−2)/n)^h ∫ x^{−1}(1 + c/x)^h dx
    let c = 2.0 / (n - 2.0);
    let integral = if params.n.is_multiple_of(2) {
        let big_n = params.n / 2;
        let mut sum = (x1 / x0).ln();
        let mut binom = 1.0;
        let mut ck = 1.0;
        let (mut p0, mut p1) = (1.0, 1.0);
        for k in 1..=big_n {
            binom *= (big_n - k + 1) as f64 / k as f64;
            ck *= c;
            p0 /= x0;
            p1 /= x1;
            sum += binom * ck * (p0 - p1) / k as f64;
        }
        sum
    } else {
        integrate(
            |y: f64| (h * (c * (-y).exp()).ln_1p()).exp(),
            x0.ln(),
            x1.ln(),
            spec,
        )?
        .value
    };
    Ok(NormPieces {
        linear,
        middle: ((n - 2.0) / n).powf(h) * integral,
        tail,
    })
}

/// (∫₀^∞ |L|^{n/2} dt)^{2/n}
pub fn norm_quadrature(params: &TestFnParams, spec: &QuadratureSpec) -> Result<f64> {
    let n = params.n as f64;
    Ok(norm_pieces(params, spec)?.total().powf(2.0 / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundParts {
    pub linear: f64,
    pub middle: f64,
    pub tail: f64,
}

pub fn lower_bound_parts(params: &TestFnParams) -> Result<LowerBoundParts> {
    let n = require_admissible(params)?;
    let e_inv = (-1.0f64).exp();
    Ok(LowerBoundParts {
        linear: 1.0 + (n / 2.0 - 1.0) * e_inv - e_inv,
        middle: (params.lambda - n / 2.0) * e_inv,
        tail: e_inv,
    })
}

/// 1 + (n/2 − 1)e^{b−s−1}
pub fn functional_lower_bound(params: &TestFnParams) -> Result<f64> {
    let n = require_admissible(params)?;
    Ok(1.0 + (n / 2.0 - 1.0) * (params.b - params.s - 1.0).exp())
}

/// J(w) = ∫₀^∞ e^{w^{n/(n−2)} − t} dt.
pub fn functional_quadrature(params: &TestFnParams, spec: &QuadratureSpec) -> Result<f64> {
    let n = require_admissible(params)?;
    let w = test_function(params)?;
    cc_functional(&w, n / (n - 2.0), spec)
}

pub fn eta_function(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return domain(format!("η needs t ≥ 2, got {t}"));
    }
    let r = t / (t - 1.0);
    Ok(
        digamma(t)? + EULER_GAMMA + r.powf(t) * (sigma() / (t - 1.0) - 1.0) + r + 1.0
            - (t - 1.0).ln(),
    )
}

/// Smallest integer k ≥ 1 with η(k + 1) < 0.
pub fn first_negative_eta() -> Result<u32> {
    (1u32..100_000)
        .find(|k| eta_function(*k as f64 + 1.0).is_ok_and(|v| v < 0.0))
        .ok_or_else(|| Error::Domain("η stays nonnegative".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub n: u32,
    pub norm_chain_bound: f64,
    pub norm_quadrature: f64,
    pub functional_lower: f64,
    pub functional_quadrature: f64,
    pub level: f64,
    pub gap_analytic: bool,
    pub gap_numeric: bool,
}

fn verdict_for(params: &TestFnParams, spec: &QuadratureSpec) -> Result<VerdictRow> {
    let n = params.n;
    let norm_quadrature = norm_quadrature(params, spec)?;
    let functional_lower = functional_lower_bound(params)?;
    let functional_quadrature = functional_quadrature(params, spec)?;
    let level = level_for_exponent(n as f64 / 2.0)?;
    Ok(VerdictRow {
        n,
        norm_chain_bound: norm_chain_bound(params)?,
        norm_quadrature,
        functional_lower,
        functional_quadrature,
        level,
        gap_analytic: functional_lower > level,
        gap_numeric: functional_quadrature > level && norm_quadrature <= 1.0,
    })
}

/// One row of the gap table; results below 2T₀ are exploratory.
pub fn verdict(n: u32, spec: &QuadratureSpec) -> Result<VerdictRow> {
    if n < VERDICT_MIN_N {
        return domain(format!("verdict needs n ≥ {VERDICT_MIN_N}, got {n}"));
    }
    verdict_for(&make_params(n)?, spec)
}

/// Verdict for odd or even n through the extended parameter path.
pub fn verdict_extended(n: u32, spec: &QuadratureSpec) -> Result<VerdictRow> {
    if n < VERDICT_MIN_N {
        return domain(format!("verdict needs n ≥ {VERDICT_MIN_N}, got {n}"));
    }
    verdict_for(&make_params_extended(n)?, spec)
}

/// Verdicts for several n in parallel, sorted by n.
pub fn sweep(ns: &[u32], spec: &QuadratureSpec, extended: bool) -> Result<Vec<VerdictRow>> {
    let mut rows: Vec<VerdictRow> = ns
        .par_iter()
        .map(|&n| {
            if extended {
                verdict_extended(n, spec)
            } else {
                verdict(n, spec)
            }
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.n);
    rows.dedup_by_key(|r| r.n);
    Ok(rows)
}
