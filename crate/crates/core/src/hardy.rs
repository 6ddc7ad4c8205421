//! Weighted Hardy inequalities with power weights on (0, R).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::AdamsParams;
use crate::error::{domain, Error, Result};
use crate::profile::{Piece, PiecewiseProfile, PowerTerm};
use crate::quadrature::{integrate_with_breaks, GaussLegendre, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// u(0) = 0
    LeftVanishing,
    /// u(R) = 0
    RightVanishing,
}

/// (∫|u|^q r^θ)^{1/q} ≤ C (∫|u′|^p r^α)^{1/p} on (0, R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardySetup {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub theta: f64,
    pub radius: f64,
    pub side: Side,
}

impl HardySetup {
    pub fn new(p: f64, q: f64, alpha: f64, theta: f64, radius: f64, side: Side) -> Result<Self> {
        if !(p > 1.0 && q > 1.0) || !p.is_finite() || !q.is_finite() {
            return domain(format!("need p, q in (1, ∞), got p = {p}, q = {q}"));
        }
        if p > q {
            return domain(format!("need p ≤ q, got p = {p}, q = {q}"));
        }
        if !alpha.is_finite() || !theta.is_finite() {
            return domain("weight powers must be finite");
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("radius must be positive, got {radius}"));
        }
        Ok(HardySetup {
            p,
            q,
            alpha,
            theta,
            radius,
            side,
        })
    }

    /// κ = (p − 1 − α)/(p − 1): exponent of ∫ v^{1/(1−p)}.
    pub fn kappa(&self) -> f64 {
        (self.p - 1.0 - self.alpha) / (self.p - 1.0)
    }

    pub fn is_feasible(&self) -> bool {
        let gap = self.alpha - self.p + 1.0;
        let balance = self.q * gap <= self.p * (self.theta + 1.0);
        match self.side {
            Side::LeftVanishing => gap < 0.0 && balance,
            Side::RightVanishing => gap > 0.0 && balance,
        }
    }

    /// Slope of ln F at x → 0 in the variable ln x.
    fn slope_at_origin(&self) -> f64 {
        let (p, q) = (self.p, self.q);
        let v_part = self.kappa() * (p - 1.0) / p;
        match self.side {
            Side::LeftVanishing => v_part + (self.theta + 1.0).min(0.0) / q,
            Side::RightVanishing => v_part + (self.theta + 1.0) / q,
        }
    }

    /// The adapted coordinate s(r) = ∫ r^{α/(1−p)} from the vanishing end.
    fn adapted(&self, r: f64) -> f64 {
        let k = self.kappa();
        match self.side {
            Side::LeftVanishing => r.powf(k) / k,
            Side::RightVanishing => (self.radius.powf(k) - r.powf(k)) / k,
        }
    }

    fn adapted_inverse(&self, s: f64) -> f64 {
        let k = self.kappa();
        match self.side {
            Side::LeftVanishing => (k * s).powf(1.0 / k),
            Side::RightVanishing => (self.radius.powf(k) - k * s).powf(1.0 / k),
        }
    }
}

/// k(q, p) = (1 + q(p−1)/p)^{1/q} (1 + p/(q(p−1)))^{(p−1)/p}.
pub fn k_factor(q: f64, p: f64) -> Result<f64> {
    if !(p > 1.0 && q > 1.0) {
        return domain(format!("k(q, p) needs p, q > 1, got q = {q}, p = {p}"));
    }
    Ok((1.0 + q * (p - 1.0) / p).powf(1.0 / q) * (1.0 + p / (q * (p - 1.0))).powf((p - 1.0) / p))
}

/// ln ∫_{R e^y}^{R} r^{e−1} dr for y < 0.
fn ln_power_integral(e: f64, ln_r: f64, y: f64) -> f64 {
    if e == 0.0 {
        return (-y).ln();
    }
    let z = e * y;
    let core = if z < 0.0 {
        (-z.exp_m1()).ln() - e.ln()
    } else {
        z + (-(-z).exp_m1()).ln() - (-e).ln()
    };
    e * ln_r + core
}

fn ln_profile(setup: &HardySetup, y: f64) -> f64 {
    let (p, q) = (setup.p, setup.q);
    let ln_r = setup.radius.ln();
    let k = setup.kappa();
    let t1 = setup.theta + 1.0;
    let (ln_w, ln_v) = match setup.side {
        Side::LeftVanishing => (ln_power_integral(t1, ln_r, y), k * (ln_r + y) - k.ln()),
        Side::RightVanishing => (t1 * (ln_r + y) - t1.ln(), ln_power_integral(k, ln_r, y)),
    };
    ln_w / q + (p - 1.0) / p * ln_v
}

/// B_L or B_R, the supremum of (∫ w)^{1/q}(∫ v^{1/(1−p)})^{(p−1)/p}.
pub fn b_constant(setup: &HardySetup) -> Result<f64> {
    if !setup.is_feasible() {
        return Err(Error::Infeasible(format!(
            "Hardy constant is infinite for p = {}, q = {}, α = {}, θ = {}, side {:?}",
            setup.p, setup.q, setup.alpha, setup.theta, setup.side
        )));
    }
    let slope = setup.slope_at_origin();
    let (p, q) = (setup.p, setup.q);
    if slope.abs() <= 1e-14 * (1.0 + setup.alpha.abs() + setup.theta.abs()) {
        // ln F is concave with vanishing slope at −∞, so F decreases and the sup is the limit at 0
        let t1 = setup.theta + 1.0;
        let k = setup.kappa();
        let ln_b = -t1.abs().ln() / q - (p - 1.0) / p * k.abs().ln();
        return Ok(ln_b.exp());
    }
    let phi = |y: f64| ln_profile(setup, y);
    // bracket: φ(2y) < φ(y) puts the maximiser right of 2y
    let mut y = -1.0;
    while phi(2.0 * y) >= phi(y) {
        y *= 2.0;
        if y < -1e15 {
            return Ok(phi(y).exp());
        }
    }
    let (mut lo, mut hi) = (2.0 * y, 0.0f64);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while hi - lo > 1e-12 * (1.0 + lo.abs().min(hi.abs())) {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = phi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = phi(d);
        }
    }
    Ok(fc.max(fd).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    pub b_value: f64,
    pub k_factor: f64,
}

/// B ≤ C ≤ k(q, p) B.
pub fn sandwich(setup: &HardySetup) -> Result<Sandwich> {
    let b = b_constant(setup)?;
    let k = k_factor(setup.q, setup.p)?;
    Ok(Sandwich {
        lower: b,
        upper: k * b,
        b_value: b,
        k_factor: k,
    })
}

/// Piecewise-linear trial in the adapted coordinate.
///
/// LeftVanishing: u(0) = 0 and `values[i] = u(radii[i])`.
/// RightVanishing: u is constant on (0, radii[0]] and the last value is u(R) = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyTrial {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl HardyTrial {
    pub fn new(setup: &HardySetup, radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() != values.len() {
            return domain("trial needs matching, nonempty radii and values");
        }
        if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return domain("trial radii must be positive and increasing");
        }
        let last = *radii.last().unwrap();
        if (last - setup.radius).abs() > 1e-12 * setup.radius {
            return domain("the last trial radius must be R");
        }
        if setup.side == Side::RightVanishing {
            if values.len() < 2 {
                return domain("a right-vanishing trial needs at least two knots");
            }
            if *values.last().unwrap() != 0.0 {
                return Err(Error::BoundaryCondition(
                    "right-vanishing trial needs u(R) = 0".into(),
                ));
            }
        }
        Ok(HardyTrial { radii, values })
    }

    /// (s_i, u_i) nodes in the adapted coordinate, including the vanishing end.
    fn nodes(&self, setup: &HardySetup) -> Vec<(f64, f64, f64)> {
        let mut out: Vec<(f64, f64, f64)> = self
            .radii
            .iter()
            .zip(&self.values)
            .map(|(r, u)| (*r, setup.adapted(*r), *u))
            .collect();
        if setup.side == Side::LeftVanishing {
            out.insert(0, (0.0, 0.0, 0.0));
        }
        out
    }

    pub fn to_profile(&self, setup: &HardySetup) -> Result<PiecewiseProfile> {
        let k = setup.kappa();
        let nodes = self.nodes(setup);
        let mut knots = Vec::new();
        let mut pieces = Vec::new();
        if setup.side == Side::RightVanishing {
            knots.push(0.0);
            pieces.push(Piece::constant(nodes[0].2));
        }
        for w in nodes.windows(2) {
            let (r0, s0, u0) = w[0];
            let (_, s1, u1) = w[1];
            let b = (u1 - u0) / (s1 - s0);
            let a = u0 - b * s0;
            // a + b s(r) as a power sum in r
            let terms = match setup.side {
                Side::LeftVanishing => vec![PowerTerm::new(a, 0.0), PowerTerm::new(b / k, k)],
                Side::RightVanishing => vec![
                    PowerTerm::new(a + b * setup.radius.powf(k) / k, 0.0),
                    PowerTerm::new(-b / k, k),
                ],
            };
            knots.push(r0);
            pieces.push(Piece::PowerSum {
                shift: 0.0,
                terms,
                log_coef: 0.0,
            });
        }
        knots.push(setup.radius);
        PiecewiseProfile::with_jumps(knots, pieces, None)
    }
}

fn log_segment_integral(
    rule: &GaussLegendre,
    setup: &HardySetup,
    r0: f64,
    r1: f64,
    u: impl Fn(f64) -> f64,
) -> f64 {
    let (y0, y1) = (r0.ln(), r1.ln());
    let panels = ((y1 - y0) / 0.25).ceil().max(1.0) as usize;
    let (q, t1) = (setup.q, setup.theta + 1.0);
    rule.integrate(
        |y| u(y.exp()).abs().powf(q) * (t1 * y).exp(),
        y0,
        y1,
        panels,
    )
}

/// (∫|u|^q r^θ)^{1/q} / (∫|u′|^p r^α)^{1/p} for a trial.
pub fn rayleigh_ratio(setup: &HardySetup, trial: &HardyTrial) -> Result<f64> {
    let (p, q) = (setup.p, setup.q);
    let k = setup.kappa();
    let t1 = setup.theta + 1.0;
    let nodes = trial.nodes(setup);
    let rule = GaussLegendre::new(20);
    let mut den = 0.0;
    let mut num = 0.0;
    if setup.side == Side::RightVanishing {
        let (r1, _, u1) = nodes[0];
        num += u1.abs().powf(q) * r1.powf(t1) / t1;
    }
    for (i, w) in nodes.windows(2).enumerate() {
        let (r0, s0, u0) = w[0];
        let (r1, s1, u1) = w[1];
        let ds = s1 - s0;
        den += (u1 - u0).abs().powf(p) / ds.abs().powf(p - 1.0);
        if setup.side == Side::LeftVanishing && i == 0 {
            // u = u1 (r/r1)^κ
            num += u1.abs().powf(q) * r1.powf(t1) / (k * q + t1);
            continue;
        }
        let slope = (u1 - u0) / ds;
        let u = |r: f64| u0 + slope * (setup.adapted(r) - s0);
        if u0 * u1 < 0.0 {
            let rz = setup.adapted_inverse(s0 - u0 / slope).clamp(r0, r1);
            num += log_segment_integral(&rule, setup, r0, rz, u);
            num += log_segment_integral(&rule, setup, rz, r1, u);
        } else {
            num += log_segment_integral(&rule, setup, r0, r1, u);
        }
    }
    if !(den > 0.0) {
        return Err(Error::DegenerateTrial(
            "trial has zero derivative norm".into(),
        ));
    }
    Ok(num.powf(1.0 / q) / den.powf(1.0 / p))
}

fn random_trial(setup: &HardySetup, rng: &mut ChaCha8Rng) -> HardyTrial {
    let count = rng.gen_range(2..=8usize);
    let mut radii: Vec<f64> = (0..count - 1)
        .map(|_| setup.radius * (-8.0 * rng.gen::<f64>()).exp())
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii.retain(|r| *r < setup.radius);
    radii.push(setup.radius);
    let monotone = rng.gen_bool(0.5);
    let mut acc = 0.0;
    let mut values: Vec<f64> = radii
        .iter()
        .map(|_| {
            if monotone {
                acc += rng.gen::<f64>();
                acc
            } else {
                rng.gen_range(-1.0..1.0)
            }
        })
        .collect();
    if setup.side == Side::RightVanishing {
        if monotone {
            values.reverse();
        }
        *values.last_mut().unwrap() = 0.0;
        if radii.len() < 2 {
            radii.insert(0, 0.5 * setup.radius);
            values.insert(0, 1.0);
        }
    }
    HardyTrial { radii, values }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub max_ratio: f64,
    pub witness: PiecewiseProfile,
    pub trial_index: usize,
    pub trials_evaluated: usize,
}

/// Largest Rayleigh quotient over seeded random trials.
pub fn rayleigh_probe(setup: &HardySetup, trial_count: usize, seed: u64) -> Result<ProbeResult> {
    if !setup.is_feasible() {
        return Err(Error::Infeasible("probe needs a feasible setup".into()));
    }
    if trial_count == 0 {
        return Err(Error::DegenerateTrial("no trials requested".into()));
    }
    let results: Vec<(usize, Option<f64>, HardyTrial)> = (0..trial_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let trial = random_trial(setup, &mut rng);
            let ratio = rayleigh_ratio(setup, &trial).ok().filter(|r| r.is_finite());
            (i, ratio, trial)
        })
        .collect();
    let evaluated = results.iter().filter(|r| r.1.is_some()).count();
    let best = results
        .into_iter()
        .filter_map(|(i, r, t)| r.map(|r| (i, r, t)))
        .fold(None::<(usize, f64, HardyTrial)>, |acc, cur| match acc {
            Some(a) if a.1 >= cur.1 => Some(a),
            _ => Some(cur),
        });
    let (trial_index, max_ratio, trial) =
        best.ok_or_else(|| Error::DegenerateTrial("every trial had zero derivative norm".into()))?;
    Ok(ProbeResult {
        max_ratio,
        witness: trial.to_profile(setup)?,
        trial_index,
        trials_evaluated: evaluated,
    })
}

/// Ratio for u = r^{κ+ε}, left-vanishing setups only.
pub fn power_trial_ratio(setup: &HardySetup, eps: f64) -> Result<f64> {
    if setup.side != Side::LeftVanishing || !setup.is_feasible() {
        return domain("power trials need a feasible left-vanishing setup");
    }
    if !(eps > 0.0) {
        return domain(format!("power trial needs ε > 0, got {eps}"));
    }
    let (p, q) = (setup.p, setup.q);
    let e = setup.kappa() + eps;
    let e1 = e * q + setup.theta + 1.0;
    let e2 = (e - 1.0) * p + setup.alpha + 1.0;
    if !(e1 > 0.0 && e2 > 0.0) {
        return domain("power trial integrals diverge");
    }
    let ln_r = setup.radius.ln();
    let ln_num = (e1 * ln_r - e1.ln()) / q;
    let ln_den = e.ln() + (e2 * ln_r - e2.ln()) / p;
    Ok((ln_num - ln_den).exp())
}

/// q²/((q−1) n (n−2q)).
pub fn second_order_constant(n: u32, q: f64) -> Result<f64> {
    let nf = n as f64;
    if !(q > 1.0) {
        return domain(format!("need q > 1, got {q}"));
    }
    if !(nf - 2.0 * q > 0.0) {
        return domain(format!("need n − 2q > 0, got n = {n}, q = {q}"));
    }
    Ok(q * q / ((q - 1.0) * nf * (nf - 2.0 * q)))
}

/// A polynomial radial profile u(r) = Σ c_j r^j with u(R) = u′(R) = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialPolynomial {
    radius: f64,
    coeffs: Vec<f64>,
}

impl RadialPolynomial {
    /// u = (R − r)² P(r) with P given by its coefficients.
    pub fn from_factor(radius: f64, factor: &[f64]) -> Result<Self> {
        if !(radius > 0.0) {
            return domain("radius must be positive");
        }
        let sq = [radius * radius, -2.0 * radius, 1.0];
        let mut coeffs = vec![0.0; factor.len() + 2];
        for (i, a) in factor.iter().enumerate() {
            for (j, b) in sq.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(RadialPolynomial { radius, coeffs })
    }

    /// Checks u(R) = 0 and u′(R) = 0 (so that r^{1−n}(r^{n−1}u)′ vanishes at R).
    pub fn from_coefficients(radius: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(radius > 0.0) {
            return domain("radius must be positive");
        }
        let p = RadialPolynomial { radius, coeffs };
        let scale = p
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.abs() * radius.powi(j as i32))
            .sum::<f64>();
        let (u, du) = (p.eval(radius), p.derivative(radius) * radius);
        if u.abs() > 1e-10 * scale.max(1e-300) || du.abs() > 1e-10 * scale.max(1e-300) {
            return Err(Error::BoundaryCondition(format!(
                "need u(R) = u′(R) = 0, got u(R) = {u}, R u′(R) = {du}"
            )));
        }
        Ok(p)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, c)| acc * r + j as f64 * c)
    }

    /// r^{1−n}(r^{n−1}u′)′ = Σ c_j j(j+n−2) r^{j−2}.
    pub fn laplacian(&self, n: u32, r: f64) -> f64 {
        let nf = n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| {
                let j = j as f64;
                c * j * (j + nf - 2.0) * r.powf(j - 2.0)
            })
            .sum()
    }
}

/// LHS/RHS of the second-order radial inequality for one trial.
pub fn second_order_ratio(n: u32, p: f64, q: f64, trial: &RadialPolynomial) -> Result<f64> {
    second_order_constant(n, q)?;
    if !(p > 1.0) {
        return domain(format!("need p > 1, got {p}"));
    }
    let nf = n as f64;
    let lhs_w = p * (nf - 2.0 * q) / q - 1.0;
    let rhs_w = nf * p / q - 1.0;
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_subdivisions: 20_000,
        truncation_epsilon: 1e-12,
    };
    let r = trial.radius;
    let breaks: Vec<f64> = (0..=8).map(|i| r * i as f64 / 8.0).collect();
    let lhs = integrate_with_breaks(
        |x| trial.eval(x).abs().powf(p) * x.powf(lhs_w),
        &breaks,
        &spec,
    )?
    .value;
    let rhs = integrate_with_breaks(
        |x| trial.laplacian(n, x).abs().powf(p) * x.powf(rhs_w),
        &breaks,
        &spec,
    )?
    .value;
    if !(rhs > 0.0) {
        return Err(Error::DegenerateTrial("trial has zero Laplacian".into()));
    }
    Ok((lhs / rhs).powf(1.0 / p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondOrderProbe {
    pub max_ratio: f64,
    pub constant: f64,
    pub witness: RadialPolynomial,
}

/// Max of the second-order ratio over (R − r)²·(random polynomial) trials.
pub fn second_order_probe(
    n: u32,
    p: f64,
    q: f64,
    radius: f64,
    trial_count: usize,
    seed: u64,
) -> Result<SecondOrderProbe> {
    let constant = second_order_constant(n, q)?;
    if trial_count == 0 {
        return Err(Error::DegenerateTrial("no trials requested".into()));
    }
    let results: Vec<Result<(f64, RadialPolynomial)>> = (0..trial_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let degree = rng.gen_range(0..=4usize);
            let factor: Vec<f64> = (0..=degree)
                .map(|j| rng.gen_range(-1.0..1.0) / radius.powi(j as i32))
                .collect();
            let trial = RadialPolynomial::from_factor(radius, &factor)?;
            Ok((second_order_ratio(n, p, q, &trial)?, trial))
        })
        .collect();
    let mut best: Option<(f64, RadialPolynomial)> = None;
    for r in results {
        let (v, t) = r?;
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, t));
        }
    }
    let (max_ratio, witness) = best.expect("nonzero trial count");
    Ok(SecondOrderProbe {
        max_ratio,
        constant,
        witness,
    })
}

/// Product of the reciprocal Hardy factors collected when iterating the
/// second-order inequality from Δ^k down to u.
pub fn iterated_constant(params: AdamsParams) -> Result<f64> {
    let (m, n) = (params.m(), params.n() as f64);
    if m < 2 {
        return domain(format!("iterated constant needs m ≥ 2, got {m}"));
    }
    let mf = m as f64;
    let k = m / 2;
    let mut prod = 1.0;
    if m % 2 == 0 {
        for j in 0..k.saturating_sub(1) {
            let j = j as f64;
            prod /= (n - mf + 2.0 * j) * (mf - 2.0 * j - 2.0);
        }
    } else {
        for j in 0..k.saturating_sub(1) {
            let j = j as f64;
            prod /= (n - mf + 2.0 * j + 1.0) * (mf - 2.0 * j - 3.0);
        }
        prod /= mf - 1.0;
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_factor_values() {
        assert!((k_factor(2.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        let want = 2.5f64.powf(1.0 / 3.0) * (5.0f64 / 3.0).sqrt();
        assert!((k_factor(3.0, 2.0).unwrap() - want).abs() < 1e-14);
        for p in [2.0f64, 3.0, 5.0] {
            let want = p * (p - 1.0).powf(-(p - 1.0) / p);
            assert!((k_factor(p, p).unwrap() - want).abs() < 1e-13 * want);
        }
        assert!(k_factor(1.0, 2.0).is_err());
    }

    #[test]
    fn closed_form_left() {
        // p = q = α − θ
        for (p, alpha) in [(2.0, -1.0), (3.0, 0.5), (4.0, -2.0)] {
            let theta = alpha - p;
            let want = (p - 1.0f64).powf((p - 1.0) / p) / (p - 1.0 - alpha);
            for r in [0.5, 1.0, 10.0] {
                let s = HardySetup::new(p, p, alpha, theta, r, Side::LeftVanishing).unwrap();
                let b = b_constant(&s).unwrap();
                assert!(((b - want) / want).abs() < 1e-12, "p={p} R={r} {b} {want}");
            }
        }
    }

    #[test]
    fn closed_form_right() {
        for (p, alpha) in [(2.0, 3.0), (3.0, 4.5)] {
            let theta = alpha - p;
            let want = (p - 1.0f64).powf((p - 1.0) / p) / (alpha - p + 1.0);
            let s = HardySetup::new(p, p, alpha, theta, 2.0, Side::RightVanishing).unwrap();
            let b = b_constant(&s).unwrap();
            assert!(((b - want) / want).abs() < 1e-12, "{b} {want}");
        }
    }

    #[test]
    fn interior_maximum_matches_grid() {
        let s = HardySetup::new(2.0, 3.0, 0.2, 1.5, 1.7, Side::LeftVanishing).unwrap();
        let b = b_constant(&s).unwrap();
        let mut best = 0.0f64;
        for i in 1..200_000 {
            let x = 1.7 * i as f64 / 200_000.0;
            let w = (1.7f64.powf(2.5) - x.powf(2.5)) / 2.5;
            let v = x.powf(s.kappa()) / s.kappa();
            best = best.max(w.powf(1.0 / 3.0) * v.sqrt());
        }
        assert!(((b - best) / b).abs() < 1e-8, "{b} {best}");
    }

    #[test]
    fn infeasible_setups() {
        let s = HardySetup::new(2.0, 2.0, 1.5, 0.0, 1.0, Side::LeftVanishing).unwrap();
        assert!(matches!(b_constant(&s), Err(Error::Infeasible(_))));
        let s = HardySetup::new(2.0, 2.0, 0.5, -3.0, 1.0, Side::RightVanishing).unwrap();
        assert!(matches!(b_constant(&s), Err(Error::Infeasible(_))));
        assert!(HardySetup::new(3.0, 2.0, 0.0, 0.0, 1.0, Side::LeftVanishing).is_err());
    }

    #[test]
    fn sandwich_example() {
        let s = HardySetup::new(2.0, 2.0, -1.0, -3.0, 1.0, Side::LeftVanishing).unwrap();
        let w = sandwich(&s).unwrap();
        assert!((w.lower - 0.5).abs() < 1e-14);
        assert!((w.upper - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trial_ratio_matches_power_case() {
        // u = r^κ is piecewise linear in s, ratio = 1/κ
        let s = HardySetup::new(2.0, 2.0, -1.0, -3.0, 1.0, Side::LeftVanishing).unwrap();
        let t = HardyTrial::new(&s, vec![1.0], vec![1.0]).unwrap();
        let r = rayleigh_ratio(&s, &t).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
        let z = HardyTrial::new(&s, vec![0.5, 1.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            rayleigh_ratio(&s, &z),
            Err(Error::DegenerateTrial(_))
        ));
    }

    #[test]
    fn right_trial_numerics() {
        // u = 1 − r on (0, 1) with α = 2, θ = 0, p = q = 2: s = 1/r − 1
        let s = HardySetup::new(2.0, 2.0, 2.0, 0.0, 1.0, Side::RightVanishing).unwrap();
        let radii: Vec<f64> = (1..=400).map(|i| i as f64 / 400.0).collect();
        let values: Vec<f64> = radii.iter().map(|r| 1.0 - r).collect();
        let t = HardyTrial::new(&s, radii, values).unwrap();
        let r = rayleigh_ratio(&s, &t).unwrap();
        // exact for u = 1 − r: (1/3)^{1/2}/(1/3)^{1/2} = 1, up to the piecewise interpolation
        assert!((r - 1.0).abs() < 1e-3, "{r}");
        let bad = HardyTrial::new(&s, vec![0.5, 1.0], vec![1.0, 0.5]);
        assert!(matches!(bad, Err(Error::BoundaryCondition(_))));
    }

    #[test]
    fn second_order_values() {
        assert!((second_order_constant(8, 2.0).unwrap() - 0.125).abs() < 1e-15);
        assert!((second_order_constant(12, 3.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!(second_order_constant(4, 2.0).is_err());
        let u = RadialPolynomial::from_factor(1.0, &[1.0]).unwrap();
        let r = second_order_ratio(8, 2.0, 2.0, &u).unwrap();
        assert!((r - (3.0f64 / 560.0).sqrt()).abs() < 1e-10, "{r}");
        assert!(RadialPolynomial::from_coefficients(1.0, vec![1.0, -1.0]).is_err());
        assert!(RadialPolynomial::from_coefficients(1.0, vec![1.0, -2.0, 1.0]).is_ok());
    }

    #[test]
    fn iterated_values() {
        assert_eq!(
            iterated_constant(AdamsParams::new(2, 6).unwrap()).unwrap(),
            1.0
        );
        assert_eq!(
            iterated_constant(AdamsParams::new(4, 8).unwrap()).unwrap(),
            0.125
        );
        assert_eq!(
            iterated_constant(AdamsParams::new(3, 8).unwrap()).unwrap(),
            0.5
        );
        assert!(iterated_constant(AdamsParams::new(1, 8).unwrap()).is_err());
    }
}
