//! Frame generation: sample-wise interpolation and adaptive refinement.

use crate::curve::SampledCurve;
use crate::error::Result;
use crate::invariant::{frame_step, DELTA_ANG, DELTA_POS};

/// Frames are spaced to stay this fraction below the verifier's bounds.
const SAFETY: f64 = 0.9;
/// At most `2^MAX_DEPTH` intervals per stage.
const MAX_DEPTH: u32 = 10;

/// Sample-wise linear interpolation of positions and velocities.
pub(crate) fn lerp(a: &SampledCurve, b: &SampledCurve, s: f64) -> Result<SampledCurve> {
    let points = a
        .points()
        .iter()
        .zip(b.points())
        .map(|(p, q)| p.lerp(*q, s))
        .collect();
    let velocities = a
        .velocities()
        .iter()
        .zip(b.velocities())
        .map(|(p, q)| p.lerp(*q, s))
        .collect();
    SampledCurve::new_unchecked(points, velocities)
}

fn close_enough(a: &SampledCurve, b: &SampledCurve) -> bool {
    let ((_, d), (_, w)) = frame_step(a, b);
    d <= SAFETY * DELTA_POS * a.scale().min(b.scale()) && w <= SAFETY * DELTA_ANG
}

/// Frames of the family `s ↦ f(s)` on `[0, 1]`, bisecting every interval
/// whose endpoints are too far apart for the verifier.
pub(crate) fn refine<F>(f: F) -> Result<Vec<SampledCurve>>
where
    F: Fn(f64) -> Result<SampledCurve>,
{
    let start = f(0.0)?;
    let end = f(1.0)?;
    let mut out = vec![start.clone()];
    bisect(&f, 0.0, &start, 1.0, end, 0, &mut out)?;
    Ok(out)
}

fn bisect<F>(
    f: &F,
    s0: f64,
    c0: &SampledCurve,
    s1: f64,
    c1: SampledCurve,
    depth: u32,
    out: &mut Vec<SampledCurve>,
) -> Result<()>
where
    F: Fn(f64) -> Result<SampledCurve>,
{
    if depth >= MAX_DEPTH || close_enough(c0, &c1) {
        out.push(c1);
        return Ok(());
    }
    let sm = 0.5 * (s0 + s1);
    let cm = f(sm)?;
    bisect(f, s0, c0, sm, cm.clone(), depth + 1, out)?;
    bisect(f, sm, &cm, s1, c1, depth + 1, out)
}

/// Frames of the straight-line morph from `a` to `b`.
pub(crate) fn morph(a: &SampledCurve, b: &SampledCurve) -> Result<Vec<SampledCurve>> {
    if a == b {
        return Ok(vec![a.clone(), b.clone()]);
    }
    let mut frames = refine(|s| lerp(a, b, s))?;
    // keep the endpoints bit-exact
    let last = frames.len() - 1;
    frames[last] = b.clone();
    frames[0] = a.clone();
    Ok(frames)
}
