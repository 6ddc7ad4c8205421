#![allow(dead_code)]

use adams_core::hardy::{HardySetup, Side};
use adams_core::rearrange::RadialProfile;
use adams_core::{Piece, PiecewiseProfile, PowerTerm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Nonnegative piecewise-linear w on [0, a + L] with tail energy δ on (a, ∞) and a constant tail.
pub fn lemma_profile(rng: &mut ChaCha8Rng, p: f64, delta: f64) -> (PiecewiseProfile, f64) {
    let a = rng.gen_range(0.2..5.0);
    let segs = rng.gen_range(1..6usize);
    let mut knots = vec![0.0, a];
    for _ in 0..segs {
        let last = *knots.last().unwrap();
        knots.push(last + rng.gen_range(0.1..8.0));
    }
    let mut inc: Vec<f64> = (0..segs).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
    let e: f64 = inc
        .iter()
        .zip(knots[1..].windows(2))
        .map(|(d, w): (&f64, &[f64])| d.abs().powf(p) / (w[1] - w[0]).powf(p - 1.0))
        .sum();
    let scale = (delta / e).powf(1.0 / p);
    inc.iter_mut().for_each(|d| *d *= scale);
    let mut values = vec![rng.gen_range(0.0..2.0)];
    for d in &inc {
        values.push(values.last().unwrap() + d);
    }
    let low = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if low < 0.0 {
        values.iter_mut().for_each(|v| *v -= low);
    }
    let w0 = values[0];
    let mut pieces = vec![Piece::constant(w0)];
    for (i, w) in knots[1..].windows(2).enumerate() {
        let b = (values[i + 1] - values[i]) / (w[1] - w[0]);
        pieces.push(Piece::linear(values[i] - b * w[0], b));
    }
    let tail = Piece::constant(*values.last().unwrap());
    (PiecewiseProfile::new(knots, pieces, Some(tail)).unwrap(), a)
}

/// A setup satisfying the finiteness conditions for its side.
pub fn feasible_setup(rng: &mut ChaCha8Rng) -> HardySetup {
    let p = rng.gen_range(1.2..4.0);
    let q = p + rng.gen_range(0.0..3.0);
    let side = if rng.gen_bool(0.5) {
        Side::LeftVanishing
    } else {
        Side::RightVanishing
    };
    let gap = rng.gen_range(0.2..3.0);
    let alpha = match side {
        Side::LeftVanishing => p - 1.0 - gap,
        Side::RightVanishing => p - 1.0 + gap,
    };
    let theta = q * (alpha - p + 1.0) / p - 1.0 + rng.gen_range(0.0..2.0);
    let radius = rng.gen_range(-1.0f64..1.0).exp();
    HardySetup::new(p, q, alpha, theta, radius, side).unwrap()
}

/// A smooth radial polynomial Σ c_j r^j on [0, R], split at a random knot.
pub fn smooth_radial(rng: &mut ChaCha8Rng, n: u32, radius: f64) -> RadialProfile {
    let terms: Vec<PowerTerm> = (0..=4)
        .map(|j| PowerTerm::new(rng.gen_range(-1.0..1.0) / radius.powi(j), j as f64))
        .collect();
    let piece = Piece::PowerSum {
        shift: 0.0,
        terms,
        log_coef: 0.0,
    };
    let cut = radius * rng.gen_range(0.2..0.8);
    let profile =
        PiecewiseProfile::new(vec![0.0, cut, radius], vec![piece.clone(), piece], None).unwrap();
    RadialProfile::new(radius, n, profile).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
