//! Explicit regular homotopies as frame sequences.
//!
//! A curve is first flattened along a generic direction into a
//! [`TurnRunCurve`], opposite adjacent turns are then cancelled one pair at a
//! time, and the remaining curve is deformed into `γ_k`. Every stage is a
//! sample-wise morph between curves whose velocities are never antiparallel
//! at the same parameter, so each intermediate frame is regular; frames are
//! then spaced adaptively until the verifier's continuity bounds hold.

mod morph;
mod pieces;
mod turnrun;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::curve::{make_gamma, CanonicalIndex, SampledCurve};
use crate::error::{CurveError, Result};
use crate::flatten::{choose_generic_direction, extract_turn_code, Direction, TurnCode};
use crate::geom::{Affine, Point2};
use crate::invariant::{turning_number, verify_homotopy, HomotopyPath};
use crate::rewrite::{find_cancellable, Letter};

pub use turnrun::{realize_code, synthetic_code, Cap, TurnRunCurve};

use morph::{morph, refine};

/// Final perpendicular scale factor of the squash stage.
pub const EPS_SQUASH: f64 = 0.1;
/// A curve this close to its own turn-run realization (relative to its
/// scale) counts as already flat and is not squashed.
const FLAT_TOL: f64 = 1e-3;
/// Seed for the directions tried by [`synthesize_homotopy`].
pub const SYNTHESIS_SEED: u64 = 0x5eed;
const DIRECTION_ATTEMPTS: u64 = 16;
const DIRECTION_TRIALS: usize = 64;

/// Frames with optional notes, merged without repeating junction frames.
#[derive(Debug, Default, Clone)]
struct Frames {
    frames: Vec<SampledCurve>,
    notes: Vec<Option<String>>,
}

impl Frames {
    fn extend(&mut self, more: Vec<SampledCurve>) {
        let skip = usize::from(matches!(
            (self.frames.last(), more.first()),
            (Some(a), Some(b)) if a == b
        ));
        for f in more.into_iter().skip(skip) {
            self.frames.push(f);
            self.notes.push(None);
        }
    }

    fn append(&mut self, other: Frames) {
        let skip = usize::from(matches!(
            (self.frames.last(), other.frames.first()),
            (Some(a), Some(b)) if a == b
        ));
        if skip == 1 {
            if let (Some(last), Some(Some(n))) = (self.notes.last_mut(), other.notes.first()) {
                last.get_or_insert_with(|| n.clone());
            }
        }
        self.frames.extend(other.frames.into_iter().skip(skip));
        self.notes.extend(other.notes.into_iter().skip(skip));
    }

    fn note(&mut self, text: impl Into<String>) {
        if let Some(last) = self.notes.last_mut() {
            *last = Some(text.into());
        }
    }

    fn last(&self) -> &SampledCurve {
        self.frames.last().expect("non-empty")
    }

    fn reversed(mut self) -> Frames {
        self.frames.reverse();
        self.notes.reverse();
        self
    }

    fn into_path(mut self) -> Result<HomotopyPath> {
        if self.frames.len() == 1 {
            self.frames.push(self.frames[0].clone());
            self.notes.push(None);
        }
        let mut path = HomotopyPath::new(self.frames)?;
        for (i, n) in self.notes.into_iter().enumerate() {
            if let Some(n) = n {
                path.annotate(i, n);
            }
        }
        Ok(path)
    }

    /// Builds the path and runs the verifier on it.
    fn into_verified(self, stage: &str) -> Result<HomotopyPath> {
        let path = self.into_path()?;
        let report = verify_homotopy(&path)?;
        if !report.pass {
            return Err(CurveError::SynthesisFailure {
                stage: stage.into(),
                report: Box::new(report),
            });
        }
        Ok(path)
    }
}

fn apply(curve: &SampledCurve, map: &Affine) -> Result<SampledCurve> {
    SampledCurve::new_unchecked(
        curve.points().iter().map(|&p| map.apply(p)).collect(),
        curve.velocities().iter().map(|&v| map.apply_linear(v)).collect(),
    )
}

/// Rotates `curve` about its centroid, `frames` evenly spaced angles from 0
/// to `total_angle`.
pub fn rotation_homotopy(curve: &SampledCurve, total_angle: f64, frames: usize) -> Result<HomotopyPath> {
    if frames < 2 {
        return Err(CurveError::InvalidArgument(format!(
            "a homotopy needs at least 2 frames, got {frames}"
        )));
    }
    let center = curve.centroid();
    let mut out = vec![curve.clone()];
    for j in 1..frames {
        let angle = total_angle * j as f64 / (frames - 1) as f64;
        out.push(apply(curve, &Affine::rotation_about(angle, center))?);
    }
    HomotopyPath::new(out)
}

fn rotation_frames(curve: &SampledCurve, total_angle: f64) -> Result<Vec<SampledCurve>> {
    let center = curve.centroid();
    let mut frames = refine(|s| apply(curve, &Affine::rotation_about(s * total_angle, center)))?;
    frames[0] = curve.clone();
    Ok(frames)
}

fn flatten_stage(curve: &SampledCurve, l: Direction) -> Result<(Frames, TurnRunCurve)> {
    let code = extract_turn_code(curve, l)?;
    let center = curve.centroid();
    let target = realize_code(&code, curve.len())?.with_baseline(center.dot(l.normal()));
    let flat = target.to_sampled()?;
    let mut frames = Frames::default();
    frames.extend(vec![curve.clone()]);
    frames.note("input");
    let squashed = if curve.max_deviation(&flat) < FLAT_TOL * curve.scale() {
        curve.clone()
    } else {
        let u = l.vector();
        let mut stage = refine(|s| {
            let factor = 1.0 - (1.0 - EPS_SQUASH) * s;
            apply(curve, &Affine::squash(u, factor, center))
        })?;
        stage[0] = curve.clone();
        let end = stage[stage.len() - 1].clone();
        frames.extend(stage);
        frames.note("squashed");
        end
    };
    frames.extend(morph(&squashed, &flat)?);
    frames.note(format!("flattened {}", code.word()));
    Ok((frames, target))
}

/// Squashes `curve` perpendicular to `l` and morphs it into the turn-run
/// realization of its turn code.
pub fn flatten_homotopy(curve: &SampledCurve, l: Direction) -> Result<HomotopyPath> {
    let (frames, _) = flatten_stage(curve, l)?;
    frames.into_verified("flatten")
}

fn cancellation_stage(curve: &TurnRunCurve, pair: (usize, usize)) -> Result<(Frames, TurnRunCurve)> {
    let start = curve.sample_unchecked()?;
    let pulled = curve.pulled(pair)?;
    let pulled_s = pulled.sample_unchecked()?;
    let step = pulled.straightened(pair)?;
    let step_s = step.to_sampled(curve.samples(), pulled.to_world())?;
    let done = pulled.cancelled(pair)?;
    let done_s = done.sample_unchecked()?;
    let (i, j) = pair;
    let mut frames = Frames::default();
    frames.extend(morph(&start, &pulled_s)?);
    frames.note(format!("pull ({i}, {j}) {}", curve.word()));
    frames.extend(morph(&pulled_s, &step_s)?);
    frames.extend(morph(&step_s, &done_s)?);
    frames.note(format!("cancel ({i}, {j}) {}", done.word()));
    Ok((frames, done))
}

/// Pulls the caps around a cancellable pair apart, then straightens the pair
/// away. The last frame realizes the code without the pair.
pub fn realize_cancellation(curve: &TurnRunCurve, pair: (usize, usize)) -> Result<HomotopyPath> {
    if find_cancellable(&curve.word()).is_none() {
        return Err(CurveError::InvalidArgument(format!(
            "{} has no cancellable pair",
            curve.word()
        )))
    }
    let (frames, _) = cancellation_stage(curve, pair)?;
    frames.into_verified("cancel")
}

fn reduction_stage(curve: &TurnRunCurve) -> Result<(Frames, TurnRunCurve)> {
    let mut frames = Frames::default();
    frames.extend(vec![curve.sample_unchecked()?]);
    frames.note(format!("start {}", curve.word()));
    let mut current = curve.clone();
    while let Some(pair) = find_cancellable(&current.word()) {
        let (stage, next) = cancellation_stage(&current, pair)?;
        frames.append(stage);
        current = next;
    }
    Ok((frames, current))
}

/// Cancels leftmost opposite pairs until the code is terminal. Keyframes are
/// annotated: the start, then a `pull` and a `cancel` frame per step.
pub fn realize_reduction(curve: &TurnRunCurve) -> Result<HomotopyPath> {
    let (frames, _) = reduction_stage(curve)?;
    frames.into_verified("cancel")
}

/// Position and velocity of a canonical curve at parameter `θ`.
fn canonical_at(index: CanonicalIndex, theta: f64) -> (Point2, Point2) {
    match index {
        CanonicalIndex::GammaK(0) => (
            Point2::new((2.0 * theta).sin(), theta.sin()),
            Point2::new(2.0 * (2.0 * theta).cos(), theta.cos()),
        ),
        CanonicalIndex::Gamma0Primed => (
            Point2::new(-(2.0 * theta).sin(), -theta.sin()),
            Point2::new(-2.0 * (2.0 * theta).cos(), -theta.cos()),
        ),
        CanonicalIndex::GammaK(k) => {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            (Point2::new(c, s), Point2::new(-kf * s, kf * c))
        }
    }
}

/// Orientation-preserving piecewise-linear circle map through the knots
/// `(ts[j], thetas[j])`; both lists end one period after they start.
struct Reparam {
    ts: Vec<f64>,
    thetas: Vec<f64>,
}

impl Reparam {
    fn eval(&self, t: f64) -> (f64, f64) {
        let t0 = self.ts[0];
        let lifted = t0 + (t - t0).rem_euclid(TAU);
        let k = self
            .ts
            .windows(2)
            .position(|w| lifted < w[1])
            .unwrap_or(self.ts.len() - 2);
        let (a, b) = (self.ts[k], self.ts[k + 1]);
        let slope = (self.thetas[k + 1] - self.thetas[k]) / (b - a);
        (self.thetas[k] + slope * (lifted - a) - (lifted - t), slope)
    }
}

/// Knots sending cap `j` to tangency `j0 + j` of the target, with the
/// target parameter lifted close to the cap parameter.
fn knots(caps: &[Cap], tangencies: &[f64], j0: usize) -> Reparam {
    let m = caps.len();
    let base = tangencies[j0];
    let t0 = caps[0].t;
    let th0 = base + TAU * ((t0 - base) / TAU).round();
    let mut ts: Vec<f64> = caps.iter().map(|c| c.t).collect();
    ts.push(t0 + TAU);
    let mut thetas: Vec<f64> = (0..m)
        .map(|j| th0 + (tangencies[(j0 + j) % m] - base).rem_euclid(TAU))
        .collect();
    thetas.push(th0 + TAU);
    Reparam { ts, thetas }
}

fn sample_reparam(index: CanonicalIndex, n: usize, theta: impl Fn(f64) -> (f64, f64)) -> Result<SampledCurve> {
    let (points, velocities) = (0..n)
        .map(|i| {
            let (th, d) = theta(TAU * i as f64 / n as f64);
            let (p, v) = canonical_at(index, th);
            (p, v * d)
        })
        .unzip();
    SampledCurve::new_unchecked(points, velocities)
}

fn assemble_stage(curve: &TurnRunCurve) -> Result<(Frames, CanonicalIndex)> {
    let word = curve.word();
    if !word.is_terminal() {
        return Err(CurveError::InvalidArgument(format!(
            "{word} is not terminal; cancel its opposite pairs first"
        )));
    }
    let n = curve.samples();
    let caps = curve.caps();
    let m = caps.len();
    let mut frames = Frames::default();
    let mut start = curve.sample_unchecked()?;
    frames.extend(vec![start.clone()]);

    let (index, tangencies, j0) = if word.count(Letter::L) == word.count(Letter::R) {
        // Turn the direction to (0, 1), where the figure-eight has its two
        // turns at π/2 (L) and 3π/2 (R).
        let index = lr_index(curve);
        let angle = (FRAC_PI_2 - curve.direction().angle() + PI).rem_euclid(TAU) - PI;
        if angle != 0.0 {
            let rot = rotation_frames(&start, angle)?;
            start = rot[rot.len() - 1].clone();
            frames.extend(rot);
            frames.note("aligned");
        }
        let j0 = if caps[0].dir == Letter::L { 0 } else { 1 };
        (index, vec![FRAC_PI_2, 3.0 * FRAC_PI_2], j0)
    } else {
        let k = word.balance();
        let index = CanonicalIndex::GammaK(k);
        let kf = k as f64;
        let u = curve.direction().vector();
        let beta = curve.direction().angle();
        let mut tangencies: Vec<f64> = (0..m)
            .map(|j| ((beta + j as f64 * PI) / kf).rem_euclid(TAU))
            .collect();
        tangencies.sort_by(f64::total_cmp);
        let eps = 1e-6 / kf.abs();
        let sigma0 = curve.sigma_in(0);
        let t0 = caps[0].t;
        let j0 = (0..m)
            .filter(|&j| canonical_at(index, tangencies[j] - eps).1.dot(u).signum() == sigma0)
            .min_by(|&a, &b| {
                let da = (tangencies[a] - t0).rem_euclid(TAU).min((t0 - tangencies[a]).rem_euclid(TAU));
                let db = (tangencies[b] - t0).rem_euclid(TAU).min((t0 - tangencies[b]).rem_euclid(TAU));
                da.total_cmp(&db)
            })
            .ok_or_else(|| CurveError::InternalInconsistency("no tangency with matching side".into()))?;
        (index, tangencies, j0)
    };

    let reparam = knots(caps, &tangencies, j0);
    let warped = sample_reparam(index, n, |t| reparam.eval(t))?;
    frames.extend(morph(&start, &warped)?);
    frames.note(format!("onto {index}"));
    let unwarp = refine(|s| {
        sample_reparam(index, n, |t| {
            let (th, d) = reparam.eval(t);
            ((1.0 - s) * th + s * t, (1.0 - s) * d + s)
        })
    })?;
    frames.extend(unwarp);
    let last = frames.frames.len() - 1;
    frames.frames[last] = make_gamma(index, n)?;
    frames.note(index.to_string());
    Ok((frames, index))
}

/// `γ_0` when the `L` cap of a two-turn curve is entered moving along `+l`.
fn lr_index(curve: &TurnRunCurve) -> CanonicalIndex {
    let l_cap = curve.caps().iter().position(|c| c.dir == Letter::L).expect("LR");
    if curve.sigma_in(l_cap) > 0.0 {
        CanonicalIndex::GammaK(0)
    } else {
        CanonicalIndex::Gamma0Primed
    }
}

/// The canonical curve that realizing `code` and cancelling its leftmost
/// opposite pairs ends at, computed without generating frames. Tells `γ_0`
/// from `γ_0′`, which the letters alone cannot.
pub fn terminal_index(code: &TurnCode) -> Result<CanonicalIndex> {
    let mut current = realize_code(code, 64)?;
    while let Some(pair) = find_cancellable(&current.word()) {
        current = current.pulled(pair)?.cancelled(pair)?;
    }
    let word = current.word();
    Ok(if word.len() == 2 && word.balance() == 0 {
        lr_index(&current)
    } else {
        CanonicalIndex::GammaK(word.balance())
    })
}

/// Deforms a terminal turn-run curve into its canonical curve. For the
/// two-turn `LR` code the traversal sense of the `L` cap decides between
/// `γ_0` and `γ_0′`.
pub fn assemble_canonical(curve: &TurnRunCurve) -> Result<HomotopyPath> {
    let (frames, _) = assemble_stage(curve)?;
    frames.into_verified("assemble")
}

/// Flatten, reduce and assemble along one direction.
fn chain_along(curve: &SampledCurve, l: Direction) -> Result<(Frames, CanonicalIndex)> {
    let (mut frames, flat) = flatten_stage(curve, l)?;
    let (reduction, terminal) = reduction_stage(&flat)?;
    frames.append(reduction);
    let (assembly, index) = assemble_stage(&terminal)?;
    frames.append(assembly);
    Ok((frames, index))
}

/// Path from `curve` to its canonical curve, trying directions drawn from
/// [`SYNTHESIS_SEED`] until one yields a verified path.
fn chain(curve: &SampledCurve) -> Result<(Frames, CanonicalIndex)> {
    let mut last_err = None;
    for attempt in 0..DIRECTION_ATTEMPTS {
        let l = match choose_generic_direction(curve, DIRECTION_TRIALS, SYNTHESIS_SEED + attempt) {
            Ok(l) => l,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        match chain_along(curve, l).and_then(|(frames, index)| {
            let path = frames.clone().into_path()?;
            let report = verify_homotopy(&path)?;
            if report.pass {
                Ok((frames, index))
            } else {
                Err(CurveError::SynthesisFailure {
                    stage: "canonical".into(),
                    report: Box::new(report),
                })
            }
        }) {
            Ok(found) => return Ok(found),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// A verified regular homotopy from `a` to `b`, through the canonical curve
/// of their common turning number. Inputs with different sample counts are
/// brought to the larger count first.
pub fn synthesize_homotopy(a: &SampledCurve, b: &SampledCurve) -> Result<HomotopyPath> {
    let (ra, rb) = (turning_number(a)?, turning_number(b)?);
    if ra != rb {
        return Err(CurveError::ClassMismatch { a: ra, b: rb });
    }
    let n = a.len().max(b.len());
    let a = if a.len() < n { crate::curve::resample(a, n)? } else { a.clone() };
    let b = if b.len() < n { crate::curve::resample(b, n)? } else { b.clone() };
    let scale = a.scale().min(b.scale());

    if a.max_deviation(&b) <= 1e-12 * scale {
        return HomotopyPath::constant(&a, 2);
    }

    let half_turn = apply(&a, &Affine::rotation_about(PI, a.centroid()))?;
    if half_turn.max_deviation(&b) < 1e-9 * scale {
        let mut frames = Frames::default();
        frames.extend(rotation_frames(&a, PI)?);
        let last = frames.frames.len() - 1;
        frames.frames[last] = b.clone();
        return frames.into_verified("rotation");
    }

    let (mut frames, ia) = chain(&a)?;
    let (back, ib) = chain(&b)?;
    if ia != ib {
        let from = frames.last().clone();
        let mut rot = rotation_frames(&from, PI)?;
        let last = rot.len() - 1;
        rot[last] = make_gamma(ib, n)?;
        frames.extend(rot);
        frames.note(ib.to_string());
    }
    frames.append(back.reversed());
    frames.into_verified("synthesis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatten::code_turning_number;

    fn realize(word: &str) -> TurnRunCurve {
        let code = synthetic_code(&word.parse().unwrap(), Direction::new(1.0, 0.0).unwrap());
        realize_code(&code, 256).unwrap()
    }

    #[test]
    fn rotation_of_figure_eight_reverses_it() {
        let g0 = make_gamma(CanonicalIndex::GammaK(0), 256).unwrap();
        let path = rotation_homotopy(&g0, PI, 33).unwrap();
        assert!(verify_homotopy(&path).unwrap().pass);
        let target = make_gamma(CanonicalIndex::Gamma0Primed, 256).unwrap();
        let (_, dev) = path.last().best_shift(&target).unwrap();
        assert!(dev < 1e-9 * g0.scale());
    }

    #[test]
    fn zero_rotation_is_constant() {
        let g = make_gamma(CanonicalIndex::GammaK(2), 64).unwrap();
        let path = rotation_homotopy(&g, 0.0, 5).unwrap();
        assert!(path.frames().iter().all(|f| f.max_deviation(&g) < 1e-12));
        let full = rotation_homotopy(&g, TAU, 9).unwrap();
        assert!(full.last().max_deviation(&g) < 1e-12);
    }

    #[test]
    fn flatten_circle() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 256).unwrap();
        let path = flatten_homotopy(&c, Direction::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(path.first(), &c);
        let code = extract_turn_code(path.last(), Direction::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(code.word().to_string(), "LL");
    }

    #[test]
    fn flat_input_gives_near_constant_path() {
        let t = realize("LLRL");
        let c = t.to_sampled().unwrap();
        let path = flatten_homotopy(&c, t.direction()).unwrap();
        let worst = path
            .frames()
            .iter()
            .map(|f| f.max_deviation(&c))
            .fold(0.0, f64::max);
        assert!(worst < FLAT_TOL * c.scale(), "{worst}");
    }

    #[test]
    fn cancel_lrll() {
        let t = realize("LRLL");
        let path = realize_cancellation(&t, (0, 1)).unwrap();
        let code = extract_turn_code(path.last(), t.direction()).unwrap();
        assert_eq!(code.word().to_string(), "LL");
        // the pull phase leaves the code alone
        let pulled = path
            .notes()
            .iter()
            .position(|n| n.as_deref().is_some_and(|n| n.starts_with("pull")))
            .unwrap();
        let code = extract_turn_code(&path.frames()[pulled], t.direction()).unwrap();
        assert_eq!(code.word(), t.word());
    }

    #[test]
    fn cancel_rejects_terminal_and_bad_pairs() {
        assert!(realize_cancellation(&realize("LLLL"), (0, 1)).is_err());
        assert!(realize_cancellation(&realize("LRLL"), (2, 3)).is_err());
        assert!(realize_cancellation(&realize("LR"), (0, 1)).is_err());
    }

    #[test]
    fn reduction_of_five_and_three() {
        let t = realize("LLRLRLLR");
        let path = realize_reduction(&t).unwrap();
        let keyframes = path.notes().iter().filter(|n| n.is_some()).count();
        assert_eq!(keyframes, 7);
        let code = extract_turn_code(path.last(), t.direction()).unwrap();
        assert_eq!(code.word().to_string(), "LL");
        assert_eq!(code_turning_number(&code).unwrap(), 1);
    }

    #[test]
    fn assemble_terminal_words() {
        for (word, index) in [
            ("LL", CanonicalIndex::GammaK(1)),
            ("LLLL", CanonicalIndex::GammaK(2)),
            ("RRRRRR", CanonicalIndex::GammaK(-3)),
            ("LR", CanonicalIndex::GammaK(0)),
            ("RL", CanonicalIndex::Gamma0Primed),
        ] {
            let path = assemble_canonical(&realize(word)).unwrap();
            assert_eq!(path.last(), &make_gamma(index, 256).unwrap(), "{word}");
        }
        assert!(assemble_canonical(&realize("LRLL")).is_err());
    }

    #[test]
    fn terminal_index_matches_assembled_path() {
        for word in ["LR", "RL", "LRRL", "RLLRLR", "LLRRRL", "LLRLRLLR"] {
            let t = realize(word);
            let (_, reduced) = reduction_stage(&t).unwrap();
            let (_, index) = assemble_stage(&reduced).unwrap();
            assert_eq!(terminal_index(&t.code()).unwrap(), index, "{word}");
        }
    }

    #[test]
    fn synthesize_small_cases() {
        let g1 = make_gamma(CanonicalIndex::GammaK(1), 256).unwrap();
        let g0 = make_gamma(CanonicalIndex::GammaK(0), 256).unwrap();
        let g0p = make_gamma(CanonicalIndex::Gamma0Primed, 256).unwrap();
        assert!(matches!(
            synthesize_homotopy(&g0, &g1),
            Err(CurveError::ClassMismatch { a: 0, b: 1 })
        ));
        let same = synthesize_homotopy(&g1, &g1).unwrap();
        assert_eq!(same.len(), 2);
        let rot = synthesize_homotopy(&g0, &g0p).unwrap();
        assert_eq!(rot.last(), &g0p);
    }
}
