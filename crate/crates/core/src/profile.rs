//! Piecewise analytic one-dimensional profiles.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coef: f64,
    pub exp: f64,
}

impl PowerTerm {
    pub fn new(coef: f64, exp: f64) -> Self {
        PowerTerm { coef, exp }
    }
}

/// Analytic building blocks of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "piece_kind", content = "params", rename_all = "snake_case")]
pub enum Piece {
    /// Σ coef·(t − shift)^exp + log_coef·ln(t − shift)
    PowerSum {
        shift: f64,
        terms: Vec<PowerTerm>,
        log_coef: f64,
    },
    /// offset + coef·(1 − e^{rate(start − t)})
    ExpSaturation {
        offset: f64,
        coef: f64,
        rate: f64,
        start: f64,
    },
    /// coef·e^{−rate(t − start)}
    ExpDecay { coef: f64, rate: f64, start: f64 },
    /// cubic Hermite interpolant of (t0, v0, s0) and (t1, v1, s1)
    Hermite {
        t0: f64,
        t1: f64,
        v0: f64,
        v1: f64,
        s0: f64,
        s1: f64,
    },
    /// scale·inner(radius·e^{−t/dim})
    LogRadial {
        scale: f64,
        radius: f64,
        dim: f64,
        inner: Box<Piece>,
    },
    /// inner″(r) + (dim − 1)inner′(r)/r
    RadialLaplacian { dim: f64, inner: Box<Piece> },
}

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

fn pow(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e.fract() == 0.0 && e.abs() < 64.0 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

impl Piece {
    pub fn constant(c: f64) -> Piece {
        Piece::PowerSum {
            shift: 0.0,
            terms: vec![PowerTerm::new(c, 0.0)],
            log_coef: 0.0,
        }
    }

    /// a + b·t
    pub fn linear(a: f64, b: f64) -> Piece {
        Piece::PowerSum {
            shift: 0.0,
            terms: vec![PowerTerm::new(a, 0.0), PowerTerm::new(b, 1.0)],
            log_coef: 0.0,
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        match self {
            Piece::PowerSum {
                shift,
                terms,
                log_coef,
            } => {
                let x = t - shift;
                let mut j = Jet {
                    value: 0.0,
                    d1: 0.0,
                    d2: 0.0,
                };
                for PowerTerm { coef, exp } in terms {
                    let (c, e) = (*coef, *exp);
                    if c == 0.0 {
                        continue;
                    }
                    j.value += c * pow(x, e);
                    if e != 0.0 {
                        j.d1 += c * e * pow(x, e - 1.0);
                        if e != 1.0 {
                            j.d2 += c * e * (e - 1.0) * pow(x, e - 2.0);
                        }
                    }
                }
                if *log_coef != 0.0 {
                    j.value += log_coef * x.ln();
                    j.d1 += log_coef / x;
                    j.d2 -= log_coef / (x * x);
                }
                j
            }
            Piece::ExpSaturation {
                offset,
                coef,
                rate,
                start,
            } => {
                let e = (rate * (start - t)).exp();
                Jet {
                    value: offset + coef * (1.0 - e),
                    d1: coef * rate * e,
                    d2: -coef * rate * rate * e,
                }
            }
            Piece::ExpDecay { coef, rate, start } => {
                let e = coef * (-rate * (t - start)).exp();
                Jet {
                    value: e,
                    d1: -rate * e,
                    d2: rate * rate * e,
                }
            }
            Piece::Hermite {
                t0,
                t1,
                v0,
                v1,
                s0,
                s1,
            } => {
                let h = t1 - t0;
                let u = (t - t0) / h;
                let (u2, u3) = (u * u, u * u * u);
                let value = (2.0 * u3 - 3.0 * u2 + 1.0) * v0
                    + (u3 - 2.0 * u2 + u) * h * s0
                    + (-2.0 * u3 + 3.0 * u2) * v1
                    + (u3 - u2) * h * s1;
                let d1 = ((6.0 * u2 - 6.0 * u) * v0
                    + (3.0 * u2 - 4.0 * u + 1.0) * h * s0
                    + (-6.0 * u2 + 6.0 * u) * v1
                    + (3.0 * u2 - 2.0 * u) * h * s1)
                    / h;
                let d2 = ((12.0 * u - 6.0) * v0
                    + (6.0 * u - 4.0) * h * s0
                    + (-12.0 * u + 6.0) * v1
                    + (6.0 * u - 2.0) * h * s1)
                    / (h * h);
                Jet { value, d1, d2 }
            }
            Piece::LogRadial {
                scale,
                radius,
                dim,
                inner,
            } => {
                let r = if t.is_infinite() {
                    0.0
                } else {
                    radius * (-t / dim).exp()
                };
                let w = inner.jet(r);
                let k = r / dim;
                Jet {
                    value: scale * w.value,
                    d1: -scale * w.d1 * k,
                    d2: scale * (w.d2 * k * k + w.d1 * k / dim),
                }
            }
            Piece::RadialLaplacian { .. } => {
                let h = 1e-4 * (1.0 + t.abs());
                let f0 = self.value(t);
                let fp = self.value(t + h);
                let fm = self.value(t - h);
                Jet {
                    value: f0,
                    d1: (fp - fm) / (2.0 * h),
                    d2: (fp - 2.0 * f0 + fm) / (h * h),
                }
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Piece::RadialLaplacian { dim, inner } => {
                let w = inner.jet(t);
                if t == 0.0 {
                    // regular at the origin only when w′(0) = 0
                    dim * w.d2
                } else {
                    w.d2 + (dim - 1.0) * w.d1 / t
                }
            }
            _ => self.jet(t).value,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.jet(t).d1
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Piece::PowerSum {
                terms, log_coef, ..
            } => *log_coef == 0.0 && terms.iter().all(|t| t.exp == 0.0 || t.coef == 0.0),
            Piece::ExpSaturation { coef, rate, .. } => *coef == 0.0 || *rate == 0.0,
            Piece::ExpDecay { coef, rate, .. } => *coef == 0.0 || *rate == 0.0,
            Piece::Hermite { v0, v1, s0, s1, .. } => v0 == v1 && *s0 == 0.0 && *s1 == 0.0,
            Piece::LogRadial { inner, scale, .. } => *scale == 0.0 || inner.is_constant(),
            Piece::RadialLaplacian { .. } => false,
        }
    }

    /// An upper bound for the piece on [a, ∞), when one is known in closed form.
    pub fn supremum_from(&self, a: f64) -> Option<f64> {
        if self.is_constant() {
            return Some(self.value(a));
        }
        match self {
            Piece::ExpSaturation {
                offset, coef, rate, ..
            } if *rate > 0.0 => Some(self.value(a).max(offset + coef)),
            Piece::ExpDecay { rate, .. } if *rate > 0.0 => Some(self.value(a).max(0.0)),
            _ => None,
        }
    }

    /// ∫_a^b |piece′|^p dt when a closed form is available.
    pub fn energy_closed_form(&self, p: f64, a: f64, b: f64) -> Option<f64> {
        if self.is_constant() {
            return Some(0.0);
        }
        match self {
            Piece::PowerSum {
                shift,
                terms,
                log_coef,
            } => {
                let active: Vec<&PowerTerm> = terms
                    .iter()
                    .filter(|t| t.exp != 0.0 && t.coef != 0.0)
                    .collect();
                // |c x^k|^p with a single effective power
                let (c, k) = match (active.len(), *log_coef != 0.0) {
                    (1, false) => (active[0].coef * active[0].exp, active[0].exp - 1.0),
                    (0, true) => (*log_coef, -1.0),
                    _ => return None,
                };
                let (xa, xb) = (a - shift, b - shift);
                if xa < 0.0 && k.fract() != 0.0 {
                    return None;
                }
                if xa < 0.0 {
                    return None;
                }
                let e = k * p + 1.0;
                let c = c.abs().powf(p);
                if xa > 0.0 && xb.is_finite() {
                    // e can be a rounding residue of zero
                    let l = (xb / xa).ln();
                    let part = if e == 0.0 {
                        l
                    } else {
                        xa.powf(e) * (e * l).exp_m1() / e
                    };
                    return Some(c * part);
                }
                let antider = |x: f64| -> f64 {
                    if e == 0.0 {
                        x.ln()
                    } else if x.is_infinite() {
                        if e < 0.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else if x == 0.0 {
                        if e > 0.0 {
                            0.0
                        } else {
                            f64::NEG_INFINITY
                        }
                    } else {
                        x.powf(e) / e
                    }
                };
                Some(c * (antider(xb) - antider(xa)))
            }
            Piece::ExpSaturation {
                coef, rate, start, ..
            } if *rate > 0.0 => {
                let c = (coef * rate).abs().powf(p);
                let k = p * rate;
                let ea = (k * (start - a)).exp();
                let eb = if b.is_infinite() {
                    0.0
                } else {
                    (k * (start - b)).exp()
                };
                Some(c * (ea - eb) / k)
            }
            Piece::ExpDecay { coef, rate, start } if *rate > 0.0 => {
                let c = (coef * rate).abs().powf(p);
                let k = p * rate;
                let ea = (-k * (a - start)).exp();
                let eb = if b.is_infinite() {
                    0.0
                } else {
                    (-k * (b - start)).exp()
                };
                Some(c * (ea - eb) / k)
            }
            _ => None,
        }
    }
}

/// A function on [knots[0], end) assembled from analytic pieces.
///
/// Piece i lives on [knots[i], knots[i+1]); the optional tail lives on
/// [knots.last(), ∞).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseProfile {
    knots: Vec<f64>,
    pieces: Vec<Piece>,
    tail: Option<Piece>,
    continuous: bool,
}

pub const CONTINUITY_TOL: f64 = 1e-10;

impl PiecewiseProfile {
    /// Builds a profile that must be continuous at every interior knot.
    pub fn new(knots: Vec<f64>, pieces: Vec<Piece>, tail: Option<Piece>) -> Result<Self> {
        let p = Self::with_jumps(knots, pieces, tail)?;
        if let Some((t, gap)) = p.largest_jump() {
            if !p.continuous {
                return Err(Error::Profile(format!(
                    "discontinuity of size {gap:e} at knot {t}"
                )));
            }
        }
        Ok(p)
    }

    /// Builds a profile allowing jumps at knots (step functions, operators).
    pub fn with_jumps(knots: Vec<f64>, pieces: Vec<Piece>, tail: Option<Piece>) -> Result<Self> {
        if knots.len() != pieces.len() + 1 {
            return Err(Error::Profile(format!(
                "{} knots for {} pieces",
                knots.len(),
                pieces.len()
            )));
        }
        if pieces.is_empty() && tail.is_none() {
            return Err(Error::Profile("profile has no pieces".into()));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::Profile("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Profile("knots must be strictly increasing".into()));
        }
        let mut p = PiecewiseProfile {
            knots,
            pieces,
            tail,
            continuous: true,
        };
        p.continuous = match p.largest_jump() {
            Some((_, gap)) => gap <= CONTINUITY_TOL,
            None => true,
        };
        Ok(p)
    }

    /// Largest relative jump across interior knots.
    fn largest_jump(&self) -> Option<(f64, f64)> {
        let segs = self.segments();
        let mut worst: Option<(f64, f64)> = None;
        for w in segs.windows(2) {
            let t = w[1].0;
            let left = w[0].2.value(t);
            let right = w[1].2.value(t);
            let gap = (left - right).abs() / (1.0 + left.abs().max(right.abs()));
            let gap = if gap.is_nan() { f64::INFINITY } else { gap };
            if worst.is_none_or(|(_, g)| gap > g) {
                worst = Some((t, gap));
            }
        }
        worst
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn tail(&self) -> Option<&Piece> {
        self.tail.as_ref()
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    /// Last knot: the end of the domain, or the start of the tail.
    pub fn last_knot(&self) -> f64 {
        *self.knots.last().expect("nonempty knots")
    }

    pub fn end(&self) -> f64 {
        if self.tail.is_some() {
            f64::INFINITY
        } else {
            self.last_knot()
        }
    }

    /// (a, b, piece) triples, with b = ∞ for the tail.
    pub fn segments(&self) -> Vec<(f64, f64, &Piece)> {
        let mut out: Vec<(f64, f64, &Piece)> = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (self.knots[i], self.knots[i + 1], p))
            .collect();
        if let Some(t) = &self.tail {
            out.push((self.last_knot(), f64::INFINITY, t));
        }
        out
    }

    /// The piece governing t (right-continuous at knots; the last piece owns the end point).
    pub fn locate(&self, t: f64) -> Result<&Piece> {
        if t.is_nan() || t < self.start() || t > self.end() {
            return Err(Error::Profile(format!(
                "point {t} outside the profile domain [{}, {}]",
                self.start(),
                self.end()
            )));
        }
        let idx = self.knots.partition_point(|k| *k <= t);
        if idx == self.knots.len() {
            if let Some(tail) = &self.tail {
                return Ok(tail);
            }
        }
        if idx >= self.knots.len() || idx > self.pieces.len() {
            return Ok(self.pieces.last().expect("nonempty pieces"));
        }
        Ok(&self.pieces[idx - 1])
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        Ok(self.locate(t)?.jet(t))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.locate(t)?.value(t))
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        Ok(self.locate(t)?.derivative(t))
    }

    /// Value approached from the left at the last knot.
    pub fn value_at_last_knot(&self) -> f64 {
        let t = self.last_knot();
        match (&self.tail, self.pieces.last()) {
            (_, Some(p)) => p.value(t),
            (Some(tail), None) => tail.value(t),
            (None, None) => unreachable!("validated at construction"),
        }
    }

    fn to_entries(&self) -> Vec<ProfileEntry> {
        let mut out = Vec::new();
        for (a, _, piece) in self.segments() {
            let (kind, params) = split_piece(piece);
            out.push(ProfileEntry {
                knot: a,
                value: piece.value(a),
                piece_kind: kind,
                params,
            });
        }
        if self.tail.is_none() {
            out.push(ProfileEntry {
                knot: self.last_knot(),
                value: self.value_at_last_knot(),
                piece_kind: "end".into(),
                params: serde_json::Value::Null,
            });
        }
        out
    }

    fn from_entries(entries: Vec<ProfileEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut knots = Vec::new();
        let mut pieces = Vec::new();
        let mut tail = None;
        let n = entries.len();
        for (i, e) in entries.into_iter().enumerate() {
            knots.push(e.knot);
            if e.piece_kind == "end" {
                if i + 1 != n {
                    return Err(Error::Profile("\"end\" entry must be last".into()));
                }
                break;
            }
            let piece = join_piece(&e.piece_kind, e.params)?;
            let v = piece.value(e.knot);
            if (v - e.value).abs() > 1e-9 * (1.0 + v.abs()) {
                return Err(Error::Profile(format!(
                    "entry at knot {} records value {} but the piece gives {v}",
                    e.knot, e.value
                )));
            }
            if i + 1 == n {
                tail = Some(piece);
            } else {
                pieces.push(piece);
            }
        }
        if tail.is_some() {
            // the tail's own knot is the last entry in `knots`
        } else if knots.len() != pieces.len() + 1 {
            return Err(Error::Profile("malformed entry list".into()));
        }
        Self::with_jumps(knots, pieces, tail)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("profiles always serialize")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProfileEntry {
    knot: f64,
    value: f64,
    piece_kind: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    params: serde_json::Value,
}

fn split_piece(piece: &Piece) -> (String, serde_json::Value) {
    let mut v = serde_json::to_value(piece).expect("pieces always serialize");
    let obj = v.as_object_mut().expect("adjacently tagged");
    let kind = obj
        .remove("piece_kind")
        .and_then(|k| k.as_str().map(str::to_owned))
        .unwrap_or_default();
    let params = obj.remove("params").unwrap_or(serde_json::Value::Null);
    (kind, params)
}

fn join_piece(kind: &str, params: serde_json::Value) -> Result<Piece> {
    let v = serde_json::json!({ "piece_kind": kind, "params": params });
    serde_json::from_value(v).map_err(|e| Error::Profile(format!("bad piece `{kind}`: {e}")))
}

impl Serialize for PiecewiseProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<ProfileEntry>::deserialize(d)?;
        PiecewiseProfile::from_entries(entries).map_err(D::Error::custom)
    }
}
