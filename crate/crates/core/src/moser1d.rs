//! The one-dimensional exponential functional J(g) = ∫₀^∞ e^{g^q − t} dt.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::profile::{Piece, PiecewiseProfile};
use crate::quadrature::{integrate, integrate_to_infinity, integrate_with_breaks, QuadratureSpec};
use crate::specfun::{digamma, EULER_GAMMA};

/// Slack on the unit-energy hypothesis.
pub const ENERGY_SLACK: f64 = 1e-9;

/// ∫_a^b |g′|^p dt. Beyond the end of a finite profile g is taken constant.
pub fn energy(g: &PiecewiseProfile, p: f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 1.0) {
        return domain(format!("energy needs p > 1, got {p}"));
    }
    if !(a <= b) || a.is_nan() {
        return domain(format!("bad energy interval ({a}, {b})"));
    }
    let mut total = 0.0;
    for (sa, sb, piece) in g.segments() {
        let lo = a.max(sa);
        let hi = b.min(sb);
        if lo >= hi {
            continue;
        }
        if let Some(e) = piece.energy_closed_form(p, lo, hi) {
            if e.is_finite() {
                total += e;
                continue;
            }
        }
        let f = |t: f64| piece.jet(t).d1.abs().powf(p);
        let part = if hi.is_infinite() {
            integrate_to_infinity(f, lo, spec)?
        } else {
            integrate(f, lo, hi, spec)?
        };
        total += part.value;
    }
    if !total.is_finite() {
        return Err(Error::Overflow("profile energy is infinite".into()));
    }
    Ok(total)
}

fn check_nonnegative(g: &PiecewiseProfile) -> Result<()> {
    let mut probes = Vec::new();
    for (a, b, _) in g.segments() {
        probes.push(a);
        if b.is_finite() {
            probes.push(0.5 * (a + b));
        } else {
            probes.extend([a + 1.0, a + 10.0, a + 100.0]);
        }
    }
    if g.tail().is_none() {
        probes.push(g.last_knot());
    }
    for t in probes {
        let v = g.value(t)?;
        if v < -1e-12 {
            return domain(format!("profile must be nonnegative, g({t}) = {v}"));
        }
    }
    Ok(())
}

/// J(g) with the unit-energy hypothesis checked.
pub fn cc_functional(g: &PiecewiseProfile, q: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(q > 1.0) {
        return domain(format!("cc functional needs q > 1, got {q}"));
    }
    let p = q / (q - 1.0);
    let e = energy(g, p, 0.0, f64::INFINITY, spec)?;
    if e > 1.0 + ENERGY_SLACK {
        return Err(Error::EnergyViolation { energy: e });
    }
    cc_functional_unchecked(g, q, spec)
}

/// J(g) without the energy hypothesis.
pub fn cc_functional_unchecked(g: &PiecewiseProfile, q: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(q > 1.0) {
        return domain(format!("cc functional needs q > 1, got {q}"));
    }
    if g.start() != 0.0 {
        return domain(format!(
            "profile must start at t = 0, starts at {}",
            g.start()
        ));
    }
    check_nonnegative(g)?;
    exp_functional_from(g, q, 0.0, spec)
}

/// Break points for e^{g^q − t} on [a, b]: geometric toward both ends, panels at most 32 long.
///
/// The integrand varies on a unit scale near knots where g^q − t peaks, so a
/// single Kronrod panel over a long segment can miss it completely.
pub(crate) fn graded_breaks(a: f64, b: f64, out: &mut Vec<f64>) {
    const CAP: f64 = 32.0;
    let len = b - a;
    let mut pts = vec![a];
    let mut h = 0.25;
    while 2.0 * h < len.min(2.0 * CAP) {
        pts.push(a + h);
        pts.push(b - h);
        h *= 2.0;
    }
    let inner_lo = a + h.min(0.5 * len);
    let inner_hi = b - h.min(0.5 * len);
    if inner_hi > inner_lo {
        let k = ((inner_hi - inner_lo) / CAP).ceil() as usize;
        for i in 0..=k {
            pts.push(inner_lo + (inner_hi - inner_lo) * i as f64 / k as f64);
        }
    }
    pts.push(b);
    pts.retain(|x| *x >= a && *x <= b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if out.last() == Some(&a) {
        out.extend_from_slice(&pts[1..]);
    } else {
        out.extend_from_slice(&pts);
    }
}

fn graded_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut br = Vec::new();
    graded_breaks(a, b, &mut br);
    Ok(integrate_with_breaks(f, &br, &spec.with_min_subdivisions(br.len()))?.value)
}

/// ∫_from^∞ e^{g^q(t) − t} dt, truncated with a certified tail bound.
pub fn exp_functional_from(
    g: &PiecewiseProfile,
    q: f64,
    from: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let t1 = g.last_knot();
    let integrand = |t: f64| -> f64 {
        let v = match g.locate(t.min(g.end())) {
            Ok(piece) => piece.value(t).max(0.0),
            Err(_) => g.value_at_last_knot().max(0.0),
        };
        (v.powf(q) - t).exp()
    };
    let mut total = 0.0;
    if from < t1 {
        let mut knots = vec![from];
        knots.extend(g.knots().iter().copied().filter(|k| *k > from && *k < t1));
        knots.push(t1);
        let mut breaks = Vec::new();
        for w in knots.windows(2) {
            graded_breaks(w[0], w[1], &mut breaks);
        }
        total += integrate_with_breaks(
            integrand,
            &breaks,
            &spec.with_min_subdivisions(breaks.len()),
        )?
        .value;
    }
    let start = from.max(t1);
    let eps = spec.truncation_epsilon;
    let tail = match g.tail() {
        None => None,
        Some(piece) if piece.is_constant() => None,
        Some(piece) => Some(piece),
    };
    let tail_part = match tail {
        None => {
            // constant continuation: exact
            let c = g
                .tail()
                .map_or_else(|| g.value_at_last_knot(), |piece| piece.value(t1))
                .max(0.0);
            (c.powf(q) - start).exp()
        }
        Some(piece) => {
            let cut = tail_cutoff(piece, q, t1, eps, spec)?;
            match cut {
                Some(t_cut) if t_cut > start => graded_integral(integrand, start, t_cut, spec)?,
                Some(_) => 0.0,
                None => integrate_to_infinity(integrand, start, spec)?.value,
            }
        }
    };
    let j = total + tail_part;
    if !j.is_finite() {
        return Err(Error::Overflow("exponential functional is infinite".into()));
    }
    Ok(j)
}

/// A point T past which ∫_T^∞ e^{g^q − t} ≤ eps, or None when no certificate is available.
fn tail_cutoff(
    piece: &Piece,
    q: f64,
    t1: f64,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Option<f64>> {
    if let Some(sup) = piece.supremum_from(t1) {
        let s = sup.max(0.0).powf(q);
        return Ok(Some(t1.max(s - eps.ln())));
    }
    let p = q / (q - 1.0);
    let delta = match piece.energy_closed_form(p, t1, f64::INFINITY) {
        Some(e) => e,
        None => {
            let f = |t: f64| piece.jet(t).d1.abs().powf(p);
            integrate_to_infinity(f, t1, spec)?.value
        }
    };
    let d = delta.powf(1.0 / p);
    let dq = d.powf(q);
    if !(dq < 1.0 - 1e-12) {
        return Ok(None);
    }
    let big_g = piece.value(t1).max(0.0);
    // (G + D s^{1/q})^q ≤ (1−θ)^{1−q} G^q + θ^{1−q} D^q s
    let slope = 0.5 * (1.0 + dq);
    let theta = if dq == 0.0 {
        1.0
    } else {
        (slope / dq).powf(1.0 / (1.0 - q))
    };
    let c = if theta >= 1.0 {
        big_g.powf(q)
    } else {
        (1.0 - theta).powf(1.0 - q) * big_g.powf(q)
    };
    let kappa = 1.0 - slope;
    let s0 = (c - t1 - (kappa * eps).ln()) / kappa;
    Ok(Some(t1 + s0.max(0.0)))
}

/// Both sides of the one-dimensional tail certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ln_rhs: f64,
    pub delta: f64,
}

impl LemmaBound {
    pub fn holds(&self) -> bool {
        self.lhs.ln() <= self.ln_rhs
    }
}

/// lhs = ∫_a^∞ e^{w^q − t}, rhs = e^{w^q(a) − a}(1 − δ^{1/(p−1)})^{−1} exp(((p−1)/p)^{p−1} c^p γ_p/p + ψ(p) + γ).
pub fn cc_lemma_bound(
    w: &PiecewiseProfile,
    p: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<LemmaBound> {
    if !(p >= 2.0) {
        return domain(format!("the tail certificate needs p ≥ 2, got {p}"));
    }
    if !(a > 0.0) || a < w.start() || a > w.end() {
        return domain(format!("point a = {a} outside the profile"));
    }
    let q = p / (p - 1.0);
    let delta = energy(w, p, a, f64::INFINITY, spec)?;
    if delta >= 1.0 {
        return domain(format!("tail energy δ = {delta} must be below 1"));
    }
    let wa = w.value(a)?.max(0.0);
    let lhs = exp_functional_from(w, q, a, spec)?;
    let root = delta.powf(1.0 / (p - 1.0));
    let gamma_p = delta * (1.0 - root).powf(1.0 - p);
    let c = q * wa.powf(q - 1.0);
    let ln_rhs = wa.powf(q) - a - (1.0 - root).ln()
        + ((p - 1.0) / p).powf(p - 1.0) * c.powf(p) * gamma_p / p
        + digamma(p)?
        + EULER_GAMMA;
    Ok(LemmaBound {
        lhs,
        rhs: ln_rhs.exp(),
        ln_rhs,
        delta,
    })
}

/// g_a(t) = t a^{−1/p} on [0, a], a^{1/q} afterwards.
pub fn moser_family(a: f64, p: f64) -> Result<PiecewiseProfile> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("moser family needs a > 0, got {a}"));
    }
    if !(p > 1.0) {
        return domain(format!("moser family needs p > 1, got {p}"));
    }
    let slope = a.powf(-1.0 / p);
    PiecewiseProfile::new(
        vec![0.0, a],
        vec![Piece::linear(0.0, slope)],
        Some(Piece::constant(a * slope)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximizerConfig {
    pub p: f64,
    pub big_a: f64,
    pub epsilon: f64,
    pub knot_count: usize,
    pub seed: u64,
    pub starts: usize,
    pub iterations: usize,
}

impl MaximizerConfig {
    pub fn new(p: f64, big_a: f64, epsilon: f64, knot_count: usize, seed: u64) -> Self {
        MaximizerConfig {
            p,
            big_a,
            epsilon,
            knot_count,
            seed,
            starts: 4,
            iterations: 150,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximizerResult {
    pub best: PiecewiseProfile,
    pub value: f64,
    pub seed: u64,
    pub energy_near_origin: f64,
}

struct Layout {
    knots: Vec<f64>,
    widths: Vec<f64>,
    inner: usize,
    p: f64,
    q: f64,
    epsilon: f64,
}

impl Layout {
    fn new(cfg: &MaximizerConfig) -> Self {
        let segs = cfg.knot_count - 1;
        let inner = (segs / 4).max(2);
        let outer = segs - inner;
        let t_max = (100.0 * cfg.big_a).max(1000.0);
        let mut knots: Vec<f64> = (0..=inner)
            .map(|i| cfg.big_a * i as f64 / inner as f64)
            .collect();
        let ratio = t_max / cfg.big_a;
        for j in 1..=outer {
            knots.push(cfg.big_a * ratio.powf(j as f64 / outer as f64));
        }
        let widths = knots.windows(2).map(|w| w[1] - w[0]).collect();
        Layout {
            knots,
            widths,
            inner,
            p: cfg.p,
            q: cfg.p / (cfg.p - 1.0),
            epsilon: cfg.epsilon,
        }
    }

    fn seg_energy(&self, d: &[f64], range: std::ops::Range<usize>) -> f64 {
        range
            .map(|j| d[j].powf(self.p) * self.widths[j].powf(1.0 - self.p))
            .sum()
    }

    /// Projects increments onto {d ≥ 0, E(0,A) ≤ ε, E = 1}.
    fn project(&self, d: &mut [f64]) {
        let m = d.len();
        for x in d.iter_mut() {
            *x = x.max(0.0);
        }
        let e_in = self.seg_energy(d, 0..self.inner);
        if e_in > self.epsilon {
            let s = (self.epsilon / e_in).powf(1.0 / self.p);
            for x in &mut d[..self.inner] {
                *x *= s;
            }
        }
        let e_in = self.seg_energy(d, 0..self.inner).min(self.epsilon);
        let mut e_out = self.seg_energy(d, self.inner..m);
        if e_out <= 0.0 {
            d[self.inner..m].copy_from_slice(&self.widths[self.inner..m]);
            e_out = self.seg_energy(d, self.inner..m);
        }
        let s = ((1.0 - e_in) / e_out).powf(1.0 / self.p);
        for x in &mut d[self.inner..] {
            *x *= s;
        }
    }

    fn values(&self, d: &[f64]) -> Vec<f64> {
        let mut g = Vec::with_capacity(d.len() + 1);
        g.push(0.0);
        for x in d {
            g.push(g.last().unwrap() + x);
        }
        g
    }

    fn profile(&self, d: &[f64]) -> Result<PiecewiseProfile> {
        let g = self.values(d);
        let pieces = (0..d.len())
            .map(|j| {
                let slope = d[j] / self.widths[j];
                Piece::linear(g[j] - slope * self.knots[j], slope)
            })
            .collect();
        PiecewiseProfile::new(
            self.knots.clone(),
            pieces,
            Some(Piece::constant(g[d.len()])),
        )
    }

    /// J and its gradient with respect to the increments.
    fn value_and_gradient(&self, d: &[f64], spec: &QuadratureSpec) -> Result<(f64, Vec<f64>)> {
        let g = self.values(d);
        let q = self.q;
        let m = d.len();
        let mut j_total = 0.0;
        let mut node_grad = vec![0.0; m + 1];
        for k in 0..m {
            let (t0, h) = (self.knots[k], self.widths[k]);
            let (g0, g1) = (g[k], g[k + 1]);
            let val = |t: f64| g0 + (g1 - g0) * (t - t0) / h;
            j_total += graded_integral(|t| (val(t).powf(q) - t).exp(), t0, t0 + h, spec)?;
            let weight = |t: f64| {
                let v = val(t);
                (v.powf(q) - t).exp() * q * v.powf(q - 1.0)
            };
            node_grad[k] += graded_integral(|t| weight(t) * (t0 + h - t) / h, t0, t0 + h, spec)?;
            node_grad[k + 1] += graded_integral(|t| weight(t) * (t - t0) / h, t0, t0 + h, spec)?;
        }
        let last = self.knots[m];
        let gl = g[m];
        j_total += (gl.powf(q) - last).exp();
        node_grad[m] += q * gl.powf(q - 1.0) * (gl.powf(q) - last).exp();
        // d g_k / d d_j = 1 for k > j
        let mut grad = vec![0.0; m];
        let mut acc = 0.0;
        for j in (0..m).rev() {
            acc += node_grad[j + 1];
            grad[j] = acc;
        }
        Ok((j_total, grad))
    }
}

fn ascend(
    layout: &Layout,
    mut d: Vec<f64>,
    iterations: usize,
    spec: &QuadratureSpec,
) -> Result<(f64, Vec<f64>)> {
    layout.project(&mut d);
    let (mut best, mut grad) = layout.value_and_gradient(&d, spec)?;
    let mut step = 0.1;
    for _ in 0..iterations {
        let gmax = grad.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if gmax == 0.0 || step < 1e-9 {
            break;
        }
        let scale = d.iter().fold(0.0f64, |m, x| m.max(*x)).max(1e-3);
        let mut trial: Vec<f64> = d
            .iter()
            .zip(&grad)
            .map(|(x, g)| x + step * scale * g / gmax)
            .collect();
        layout.project(&mut trial);
        let (val, g2) = layout.value_and_gradient(&trial, spec)?;
        if val > best {
            best = val;
            d = trial;
            grad = g2;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    Ok((best, d))
}

/// Projected gradient ascent of J over piecewise-linear g with g(0) = 0,
/// unit energy and energy at most ε on (0, A).
pub fn concentration_maximizer(
    cfg: &MaximizerConfig,
    spec: &QuadratureSpec,
) -> Result<MaximizerResult> {
    if !(cfg.p >= 2.0) {
        return domain(format!("maximizer needs p ≥ 2, got {}", cfg.p));
    }
    if !(cfg.big_a > 0.0) || !cfg.big_a.is_finite() {
        return domain(format!("A must be positive, got {}", cfg.big_a));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.5) {
        return Err(Error::Infeasible(format!(
            "epsilon must lie in (0, 0.5), got {}",
            cfg.epsilon
        )));
    }
    if cfg.knot_count < 8 {
        return domain(format!(
            "knot_count must be at least 8, got {}",
            cfg.knot_count
        ));
    }
    if cfg.starts == 0 {
        return domain("at least one start is required");
    }
    spec.validate()?;
    let layout = Layout::new(cfg);
    let m = layout.widths.len();
    let runs: Vec<Result<(f64, u64, Vec<f64>)>> = (0..cfg.starts)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Moser-like start: noisy linear growth up to one of the last knots
            let end = m - rng.gen_range(0..4.min(m - layout.inner));
            let d: Vec<f64> = (0..m)
                .map(|j| {
                    if j < end {
                        layout.widths[j] * (1.0 + 0.02 * (rng.gen::<f64>() - 0.5))
                    } else {
                        0.0
                    }
                })
                .collect();
            let (val, d) = ascend(&layout, d, cfg.iterations, spec)?;
            Ok((val, seed, d))
        })
        .collect();
    let mut best: Option<(f64, u64, Vec<f64>)> = None;
    for r in runs {
        let r = r?;
        let better = match &best {
            None => true,
            Some((v, s, _)) => r.0 > *v || (r.0 == *v && r.1 > *s),
        };
        if better {
            best = Some(r);
        }
    }
    let (value, seed, d) = best.expect("at least one start");
    let energy_near_origin = layout.seg_energy(&d, 0..layout.inner);
    Ok(MaximizerResult {
        best: layout.profile(&d)?,
        value,
        seed,
        energy_near_origin,
    })
}
