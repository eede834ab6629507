//! Generic directions and turn codes.
//!
//! For a unit vector `u`, a *turn* is a parameter where the velocity becomes
//! perpendicular to `u`, i.e. where `f(t) = velocity(t)·u` changes sign. It is
//! labelled `L` when the tangent rotates counterclockwise through the
//! perpendicular and `R` otherwise. Half the difference of the counts is the
//! turning number.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{CurveError, Result};
use crate::geom::Point2;
use crate::rewrite::{CyclicWord, Letter};

/// Samples with `|velocity·u|` below this fraction of the scale count as zero.
pub const EPS_TANG: f64 = 1e-9;

/// Unit vector along the reference line `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Direction {
    pub ux: f64,
    pub uy: f64,
}

impl Direction {
    pub fn new(ux: f64, uy: f64) -> Result<Self> {
        let norm = ux.hypot(uy);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(CurveError::InvalidArgument("direction must be a nonzero vector".into()));
        }
        Ok(Direction {
            ux: ux / norm,
            uy: uy / norm,
        })
    }

    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Direction { ux: c, uy: s }
    }

    pub fn angle(self) -> f64 {
        self.uy.atan2(self.ux)
    }

    pub fn vector(self) -> Point2 {
        Point2::new(self.ux, self.uy)
    }

    /// The direction turned a quarter counterclockwise.
    pub fn normal(self) -> Point2 {
        self.vector().perp()
    }
}

impl From<[f64; 2]> for Direction {
    fn from([ux, uy]: [f64; 2]) -> Self {
        Direction { ux, uy }
    }
}

impl From<Direction> for [f64; 2] {
    fn from(d: Direction) -> Self {
        [d.ux, d.uy]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub dir: Letter,
    /// Parameter of the tangency in [0, 2π).
    pub t: f64,
    /// Projection of the tangency point onto the direction.
    pub x: f64,
}

/// Cyclic sequence of turns relative to a direction, sorted by parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTurnCode")]
pub struct TurnCode {
    pub direction: Direction,
    turns: Vec<Turn>,
}

#[derive(Deserialize)]
struct RawTurnCode {
    direction: Direction,
    turns: Vec<Turn>,
}

impl TryFrom<RawTurnCode> for TurnCode {
    type Error = CurveError;
    fn try_from(raw: RawTurnCode) -> Result<Self> {
        TurnCode::new(raw.direction, raw.turns)
    }
}

impl TurnCode {
    pub fn new(direction: Direction, mut turns: Vec<Turn>) -> Result<Self> {
        if turns.len() < 2 || !turns.len().is_multiple_of(2) {
            return Err(CurveError::InvalidArgument(format!(
                "a turn code needs an even number (>= 2) of turns, got {}",
                turns.len()
            )));
        }
        turns.sort_by(|a, b| a.t.total_cmp(&b.t));
        Ok(TurnCode { direction, turns })
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.turns.iter().map(|t| t.dir).collect()
    }

    pub fn word(&self) -> CyclicWord {
        CyclicWord::new(self.letters()).expect("turn codes have even length >= 2")
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.turns.iter().filter(|t| t.dir == letter).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("turn code serializes")
    }
}

/// Locates the turns of `curve` relative to `l`, rejecting directions whose
/// tangencies are not simple at the sampled resolution.
pub fn extract_turn_code(curve: &SampledCurve, l: Direction) -> Result<TurnCode> {
    let u = l.vector();
    let normal = l.normal();
    let n = curve.len();
    let pts = curve.points();
    let vel = curve.velocities();
    let eps = EPS_TANG * curve.scale();
    let f: Vec<f64> = vel.iter().map(|v| v.dot(u)).collect();
    let sign: Vec<i8> = f
        .iter()
        .map(|&x| {
            if x.abs() < eps {
                0
            } else if x > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let prev = |i: usize| (i + n - 1) % n;
    let next = |i: usize| (i + 1) % n;

    for i in 0..n {
        let (a, b) = (sign[prev(i)], sign[next(i)]);
        let degenerate = if sign[i] == 0 {
            // a zero sample is fine only between samples of opposite sign
            a == 0 || b == 0 || a == b
        } else {
            // a single sample between two sign changes
            a != sign[i] && b != sign[i]
        };
        if degenerate {
            return Err(CurveError::DegenerateTangency { t: curve.param(i) });
        }
    }

    let h = TAU / n as f64;
    let mut turns = Vec::new();
    for i in 0..n {
        let j = next(i);
        // (sign before the crossing, parameter, point, velocity)
        let (before, t, p, v) = if sign[i] == 0 {
            (sign[prev(i)], i as f64 * h, pts[i], vel[i])
        } else if sign[j] != 0 && sign[j] != sign[i] {
            let frac = f[i] / (f[i] - f[j]);
            let p = pts[i].lerp(pts[j], frac);
            let v = vel[i].lerp(vel[j], frac);
            (sign[i], (i as f64 + frac) * h, p, v)
        } else {
            continue;
        };
        let g = v.dot(normal);
        if g == 0.0 {
            return Err(CurveError::DegenerateTangency { t });
        }
        // Leaving the side `before` through +normal is a counterclockwise
        // rotation exactly when `before` is positive.
        let dir = if (before > 0) == (g > 0.0) { Letter::L } else { Letter::R };
        turns.push(Turn {
            dir,
            t: t.rem_euclid(TAU),
            x: p.dot(u),
        });
    }
    if turns.is_empty() {
        return Err(CurveError::DegenerateTangency { t: 0.0 });
    }
    TurnCode::new(l, turns)
}

/// Draws candidate directions from `seed` until one has only simple
/// tangencies. Candidates are tried in a fixed order, so the result depends
/// only on the curve and the seed.
pub fn choose_generic_direction(curve: &SampledCurve, trials: usize, seed: u64) -> Result<Direction> {
    if trials == 0 {
        return Err(CurveError::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let l = Direction::from_angle(rng.gen_range(0.0..PI));
        if extract_turn_code(curve, l).is_ok() {
            return Ok(l);
        }
    }
    Err(CurveError::NoGenericDirection { trials })
}

/// `(#L − #R) / 2`.
pub fn code_turning_number(code: &TurnCode) -> Result<i64> {
    let l = code.count(Letter::L) as i64;
    let r = code.count(Letter::R) as i64;
    if (l - r) % 2 != 0 {
        return Err(CurveError::InternalInconsistency(format!(
            "odd turn balance: L={l} R={r}"
        )));
    }
    Ok((l - r) / 2)
}
