//! Rearrangements of step functions and radial solution formulas.

use serde::{Deserialize, Serialize};

use crate::constants::{ln_beta0, AdamsParams, SphereConstants};
use crate::error::{domain, Error, Result};
use crate::profile::{Piece, PiecewiseProfile, PowerTerm};

/// A simple function given as (measure, value) cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    cells: Vec<(f64, f64)>,
}

impl SampledFunction {
    pub fn new(cells: Vec<(f64, f64)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (mu, v) in &cells {
            if !(*mu > 0.0) || !mu.is_finite() {
                return domain(format!(
                    "cell measures must be positive and finite, got {mu}"
                ));
            }
            if !v.is_finite() {
                return domain(format!("cell values must be finite, got {v}"));
            }
        }
        Ok(SampledFunction { cells })
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn total_measure(&self) -> f64 {
        self.cells.iter().map(|c| c.0).sum()
    }

    /// |{|f| > t}|
    pub fn distribution(&self, t: f64) -> f64 {
        sorted_sum(self.cells.iter().filter(|c| c.1.abs() > t).map(|c| c.0))
    }

    /// Σ μ|v|^p
    pub fn lp_sum(&self, p: f64) -> f64 {
        sorted_sum(self.cells.iter().map(|(mu, v)| mu * v.abs().powf(p)))
    }

    fn is_nonincreasing(&self) -> bool {
        self.cells.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

/// Sum in increasing order, so the result does not depend on the cell order.
fn sorted_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = terms.collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// A radial function on the ball of radius R in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub radius: f64,
    pub dim: u32,
    pub profile: PiecewiseProfile,
}

impl RadialProfile {
    pub fn new(radius: f64, dim: u32, profile: PiecewiseProfile) -> Result<Self> {
        if dim < 2 {
            return domain(format!("radial profiles need n ≥ 2, got {dim}"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("radius must be positive, got {radius}"));
        }
        if profile.start() < 0.0 || profile.tail().is_some() {
            return Err(Error::Profile(
                "radial profile must live on a subset of [0, R]".into(),
            ));
        }
        if (profile.last_knot() - radius).abs() > 1e-12 * radius {
            return Err(Error::Profile(format!(
                "radial profile ends at {} instead of R = {radius}",
                profile.last_knot()
            )));
        }
        Ok(RadialProfile {
            radius,
            dim,
            profile,
        })
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        self.profile.value(r)
    }
}

/// u^#: cells sorted by |value|, largest first. Ties keep their input order.
pub fn decreasing_rearrangement(f: &SampledFunction) -> Result<SampledFunction> {
    if f.cells.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cells: Vec<(f64, f64)> = f.cells.iter().map(|(mu, v)| (*mu, v.abs())).collect();
    cells.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(SampledFunction { cells })
}

fn ball_radius(volume: f64, omega: f64, n: u32) -> f64 {
    (volume / omega).powf(1.0 / n as f64)
}

/// u*(x) = u^#(ω_n|x|ⁿ) as a radial step profile.
pub fn symmetrize(f: &SampledFunction, n: u32) -> Result<RadialProfile> {
    if n < 2 {
        return domain(format!("symmetrization needs n ≥ 2, got {n}"));
    }
    let sharp = decreasing_rearrangement(f)?;
    let omega = SphereConstants::new(n)?.omega_ball;
    let mut knots = vec![0.0];
    let mut pieces = Vec::new();
    let mut volume = 0.0;
    for (mu, v) in &sharp.cells {
        volume += mu;
        let r = ball_radius(volume, omega, n);
        if r <= *knots.last().unwrap() {
            continue;
        }
        knots.push(r);
        pieces.push(Piece::constant(*v));
    }
    let radius = *knots.last().unwrap();
    RadialProfile::new(
        radius,
        n,
        PiecewiseProfile::with_jumps(knots, pieces, None)?,
    )
}

/// Solves −(r^{n−1}v′)′ = r^{n−1}f(ω_n rⁿ) on (0, R) with v(R) = 0, where the
/// cells of f are laid out outward from the origin in the given order.
pub fn radial_poisson_solution(f: &SampledFunction, n: u32, radius: f64) -> Result<RadialProfile> {
    if n < 2 {
        return domain(format!("radial solutions need n ≥ 2, got {n}"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("radius must be positive, got {radius}"));
    }
    let omega = SphereConstants::new(n)?.omega_ball;
    let ball = omega * radius.powi(n as i32);
    let total = f.total_measure();
    if total > ball * (1.0 + 1e-12) {
        return domain(format!(
            "data has measure {total} but the ball has volume {ball}"
        ));
    }
    let mut cells = f.cells.clone();
    if total < ball * (1.0 - 1e-12) {
        cells.push((ball - total, 0.0));
    }
    let nf = n as f64;
    // r^{n−1}v′ = −(A + v·ω rⁿ)/(nω) on each cell
    let mut knots = vec![0.0];
    let mut shapes: Vec<(f64, f64)> = Vec::new();
    let (mut s, mut big_f) = (0.0, 0.0);
    for (i, (mu, v)) in cells.iter().enumerate() {
        let a = big_f - v * s;
        s += mu;
        big_f += v * mu;
        let r = if i + 1 == cells.len() {
            radius
        } else {
            ball_radius(s, omega, n).min(radius)
        };
        if r <= *knots.last().unwrap() {
            continue;
        }
        knots.push(r);
        shapes.push((a, *v));
    }
    let shape = |a: f64, v: f64, c: f64| {
        let mut terms = vec![PowerTerm::new(c, 0.0), PowerTerm::new(-v / (2.0 * nf), 2.0)];
        let mut log_coef = 0.0;
        if n == 2 {
            log_coef = -a / (2.0 * omega);
        } else {
            terms.push(PowerTerm::new(a / (nf * (nf - 2.0) * omega), 2.0 - nf));
        }
        Piece::PowerSum {
            shift: 0.0,
            terms,
            log_coef,
        }
    };
    let mut pieces = vec![Piece::constant(0.0); shapes.len()];
    let mut boundary = 0.0;
    for k in (0..shapes.len()).rev() {
        let (a, v) = shapes[k];
        let bare = shape(a, v, 0.0).value(knots[k + 1]);
        pieces[k] = shape(a, v, boundary - bare);
        boundary = pieces[k].value(knots[k]);
    }
    RadialProfile::new(radius, n, PiecewiseProfile::new(knots, pieces, None)?)
}

/// v(x) = (1/(n²ω_n^{2/n})) ∫_{ω_n|x|ⁿ}^{ω_nRⁿ} s^{2/n−2} ∫₀^s f^#(t) dt ds, in closed form.
pub fn talenti_radial_solution(
    f_sharp: &SampledFunction,
    n: u32,
    radius: f64,
) -> Result<RadialProfile> {
    if !f_sharp.is_nonincreasing() {
        return Err(Error::Monotonicity("f^# must be nonincreasing".into()));
    }
    radial_poisson_solution(f_sharp, n, radius)
}

fn laplacian_piece(piece: &Piece, n: u32) -> Piece {
    let nf = n as f64;
    match piece {
        Piece::PowerSum {
            shift,
            terms,
            log_coef,
        } if *shift == 0.0 => {
            let mut out: Vec<PowerTerm> = terms
                .iter()
                .filter(|t| t.exp != 0.0 && t.exp + nf - 2.0 != 0.0)
                .map(|t| PowerTerm::new(t.coef * t.exp * (t.exp + nf - 2.0), t.exp - 2.0))
                .collect();
            if *log_coef != 0.0 && n != 2 {
                out.push(PowerTerm::new(log_coef * (nf - 2.0), -2.0));
            }
            if out.is_empty() {
                out.push(PowerTerm::new(0.0, 0.0));
            }
            Piece::PowerSum {
                shift: 0.0,
                terms: out,
                log_coef: 0.0,
            }
        }
        other => Piece::RadialLaplacian {
            dim: nf,
            inner: Box::new(other.clone()),
        },
    }
}

/// r ↦ u″ + (n−1)u′/r, piece by piece.
pub fn radial_laplacian(u: &RadialProfile) -> Result<PiecewiseProfile> {
    let pieces = u
        .profile
        .pieces()
        .iter()
        .map(|p| laplacian_piece(p, u.dim))
        .collect();
    PiecewiseProfile::with_jumps(u.profile.knots().to_vec(), pieces, None)
}

/// g(t) = β₀(m,n)^{(n−m)/n} w(R e^{−t/n}) on [0, ∞).
pub fn energy_change_of_variables(w: &RadialProfile, m: u32) -> Result<PiecewiseProfile> {
    let params = AdamsParams::new(m, w.dim)?;
    let nf = w.dim as f64;
    let scale = (ln_beta0(params)? * (nf - m as f64) / nf).exp();
    let big_r = w.radius;
    let to_t = |r: f64| {
        if r >= big_r {
            0.0
        } else {
            nf * (big_r / r).ln()
        }
    };
    let wrap = |p: &Piece| Piece::LogRadial {
        scale,
        radius: big_r,
        dim: nf,
        inner: Box::new(p.clone()),
    };
    let knots_r = w.profile.knots();
    let src = w.profile.pieces();
    let from_origin = knots_r[0] == 0.0;
    let mut knots = Vec::new();
    let mut pieces = Vec::new();
    let first_kept = usize::from(from_origin);
    for i in (first_kept..src.len()).rev() {
        knots.push(to_t(knots_r[i + 1]));
        pieces.push(wrap(&src[i]));
    }
    let tail = if from_origin {
        knots.push(to_t(knots_r[1]));
        Some(wrap(&src[0]))
    } else {
        knots.push(to_t(knots_r[0]));
        None
    };
    let g = PiecewiseProfile::with_jumps(knots, pieces, tail)?;
    if w.profile.is_continuous() && !g.is_continuous() {
        return Err(Error::Profile(
            "change of variables broke continuity".into(),
        ));
    }
    Ok(g)
}
