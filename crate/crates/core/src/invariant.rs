//! Turning number and the discrete regular-homotopy verifier.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveFile, SampledCurve};
use crate::error::{CurveError, Result};
use crate::geom::signed_angle;

/// Tolerance on the distance of the normalized total rotation to an integer.
pub const TOL_INT: f64 = 1e-3;
/// Largest sample displacement between consecutive frames, relative to scale.
pub const DELTA_POS: f64 = 0.05;
/// Largest velocity rotation of a sample between consecutive frames.
pub const DELTA_ANG: f64 = PI / 8.0;

/// Continuous lift of the tangent angle over one traversal.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleLift {
    /// `n + 1` unwrapped angles; the last closes the loop.
    pub theta: Vec<f64>,
    /// `n` increments, each in (−π/2, π/2).
    pub increments: Vec<f64>,
}

impl AngleLift {
    /// Total rotation divided by 2π.
    pub fn turns(&self) -> f64 {
        (self.theta[self.theta.len() - 1] - self.theta[0]) / TAU
    }
}

pub fn angle_lift(curve: &SampledCurve) -> Result<AngleLift> {
    let v = curve.velocities();
    let n = v.len();
    let mut theta = Vec::with_capacity(n + 1);
    let mut increments = Vec::with_capacity(n);
    theta.push(v[0].angle());
    for i in 0..n {
        let inc = signed_angle(v[i], v[(i + 1) % n]);
        if !(inc.abs() < FRAC_PI_2) {
            return Err(CurveError::Undersampled {
                index: i,
                angle: inc.abs(),
            });
        }
        increments.push(inc);
        theta.push(theta[i] + inc);
    }
    Ok(AngleLift { theta, increments })
}

/// Net number of counterclockwise turns of the velocity vector.
pub fn turning_number(curve: &SampledCurve) -> Result<i64> {
    let turns = angle_lift(curve)?.turns();
    let k = turns.round();
    let residue = (turns - k).abs();
    if !(residue < TOL_INT) {
        return Err(CurveError::InconsistentLift { residue });
    }
    Ok(k as i64)
}

/// A discretized regular homotopy: frames of equal sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyPath {
    frames: Vec<SampledCurve>,
    notes: Vec<Option<String>>,
    pub source: String,
    pub target: String,
}

impl HomotopyPath {
    pub fn new(frames: Vec<SampledCurve>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(CurveError::InvalidArgument(format!(
                "a homotopy needs at least 2 frames, got {}",
                frames.len()
            )));
        }
        let n = frames[0].len();
        if let Some(i) = frames.iter().position(|f| f.len() != n) {
            return Err(CurveError::InvalidArgument(format!(
                "frame {i} has {} samples, frame 0 has {n}",
                frames[i].len()
            )));
        }
        let notes = vec![None; frames.len()];
        Ok(HomotopyPath {
            frames,
            notes,
            source: String::new(),
            target: String::new(),
        })
    }

    /// The constant homotopy of `curve` with `count` frames.
    pub fn constant(curve: &SampledCurve, count: usize) -> Result<Self> {
        Self::new(vec![curve.clone(); count.max(2)])
    }

    pub fn frames(&self) -> &[SampledCurve] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn first(&self) -> &SampledCurve {
        &self.frames[0]
    }

    pub fn last(&self) -> &SampledCurve {
        &self.frames[self.frames.len() - 1]
    }

    pub fn notes(&self) -> &[Option<String>] {
        &self.notes
    }

    pub fn annotate(&mut self, frame: usize, note: impl Into<String>) {
        self.notes[frame] = Some(note.into());
    }

    pub fn with_endpoints(mut self, source: impl Into<String>, target: impl Into<String>) -> Self {
        self.source = source.into();
        self.target = target.into();
        self
    }

    /// The same homotopy run backwards.
    pub fn reversed(&self) -> HomotopyPath {
        HomotopyPath {
            frames: self.frames.iter().rev().cloned().collect(),
            notes: self.notes.iter().rev().cloned().collect(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Appends `other`; its first frame is dropped when it equals our last one.
    pub fn concat(&mut self, other: &HomotopyPath) -> Result<()> {
        if other.first().len() != self.last().len() {
            return Err(CurveError::InvalidArgument(
                "cannot join paths with different sample counts".into(),
            ));
        }
        let skip = usize::from(other.first() == self.last());
        self.frames.extend(other.frames[skip..].iter().cloned());
        self.notes.extend(other.notes[skip..].iter().cloned());
        self.target = other.target.clone();
        Ok(())
    }

    pub fn to_files(&self) -> Vec<CurveFile> {
        self.frames
            .iter()
            .zip(&self.notes)
            .map(|(f, note)| CurveFile {
                note: note.clone(),
                ..CurveFile::from_curve(f)
            })
            .collect()
    }

    /// Rebuilds a path from frame files without checking regularity, so that
    /// a broken frame reaches the verifier instead of failing to load.
    pub fn from_files(files: Vec<CurveFile>) -> Result<Self> {
        let notes: Vec<Option<String>> = files.iter().map(|f| f.note.clone()).collect();
        let frames = files
            .into_iter()
            .map(CurveFile::into_curve_unchecked)
            .collect::<Result<Vec<_>>>()?;
        let mut path = Self::new(frames)?;
        path.notes = notes;
        Ok(path)
    }

    /// JSON array of curve objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_files()).expect("finite curves serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let files: Vec<CurveFile> = serde_json::from_str(text)
            .map_err(|e| CurveError::InvalidArgument(format!("malformed path JSON: {e}")))?;
        Self::from_files(files)
    }
}

/// Outcome of one verifier check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl Check {
    fn ok(name: &str) -> Self {
        Check {
            name: name.into(),
            pass: true,
            frame: None,
            sample: None,
            value: None,
        }
    }

    fn fail(name: &str, frame: usize, sample: Option<usize>, value: f64) -> Self {
        Check {
            name: name.into(),
            pass: false,
            frame: Some(frame),
            sample,
            value: Some(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = format!("verify: {}\n", if self.pass { "pass" } else { "FAIL" });
        for c in &self.checks {
            out.push_str(&format!("  {:<20} {}", c.name, if c.pass { "ok" } else { "FAIL" }));
            if let Some(f) = c.frame {
                out.push_str(&format!(" frame={f}"));
            }
            if let Some(s) = c.sample {
                out.push_str(&format!(" sample={s}"));
            }
            if let Some(v) = c.value {
                out.push_str(&format!(" value={v:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

pub const CHECK_REGULARITY: &str = "regularity";
pub const CHECK_ADEQUACY: &str = "adequacy";
pub const CHECK_POSITION: &str = "position-continuity";
pub const CHECK_ANGLE: &str = "velocity-continuity";
pub const CHECK_TURNING: &str = "turning-number";

struct FrameFacts {
    irregular: Option<(usize, f64)>,
    undersampled: Option<(usize, f64)>,
    turning: Option<std::result::Result<i64, f64>>,
}

/// Largest sample displacement and largest velocity rotation between two
/// frames of equal length.
pub fn frame_step(a: &SampledCurve, b: &SampledCurve) -> ((usize, f64), (usize, f64)) {
    let mut pos = (0, 0.0f64);
    let mut ang = (0, 0.0f64);
    for i in 0..a.len() {
        let d = a.points()[i].distance(b.points()[i]);
        if !(d <= pos.1) {
            pos = (i, d);
        }
        let w = signed_angle(a.velocities()[i], b.velocities()[i]).abs();
        if !(w <= ang.1) {
            ang = (i, w);
        }
    }
    (pos, ang)
}

/// Checks that the frames form a discrete regular homotopy.
pub fn verify_homotopy(path: &HomotopyPath) -> Result<VerificationReport> {
    let frames = path.frames();
    let n = frames[0].len();
    if let Some(i) = frames.iter().position(|f| f.len() != n) {
        return Err(CurveError::InvalidArgument(format!(
            "frame {i} has {} samples, frame 0 has {n}",
            frames[i].len()
        )));
    }

    let facts: Vec<FrameFacts> = frames
        .par_iter()
        .map(|f| {
            let irregular = f.first_irregular().map(|i| (i, f.velocities()[i].norm()));
            let undersampled = f.first_undersampled();
            let turning = (irregular.is_none() && undersampled.is_none()).then(|| {
                turning_number(f).map_err(|e| match e {
                    CurveError::InconsistentLift { residue } => residue,
                    _ => f64::NAN,
                })
            });
            FrameFacts {
                irregular,
                undersampled,
                turning,
            }
        })
        .collect();

    let steps: Vec<((usize, f64), (usize, f64))> = frames
        .par_windows(2)
        .map(|w| frame_step(&w[0], &w[1]))
        .collect();

    let mut checks = Vec::new();

    checks.push(
        facts
            .iter()
            .enumerate()
            .find_map(|(fi, f)| {
                f.irregular
                    .map(|(s, speed)| Check::fail(CHECK_REGULARITY, fi, Some(s), speed))
            })
            .unwrap_or_else(|| Check::ok(CHECK_REGULARITY)),
    );

    checks.push(
        facts
            .iter()
            .enumerate()
            .find_map(|(fi, f)| {
                f.undersampled
                    .map(|(s, angle)| Check::fail(CHECK_ADEQUACY, fi, Some(s), angle))
            })
            .unwrap_or_else(|| Check::ok(CHECK_ADEQUACY)),
    );

    checks.push(
        steps
            .iter()
            .enumerate()
            .find_map(|(k, ((s, d), _))| {
                let scale = frames[k].scale().min(frames[k + 1].scale());
                (!(*d <= DELTA_POS * scale))
                    .then(|| Check::fail(CHECK_POSITION, k + 1, Some(*s), d / scale))
            })
            .unwrap_or_else(|| Check::ok(CHECK_POSITION)),
    );

    checks.push(
        steps
            .iter()
            .enumerate()
            .find_map(|(k, (_, (s, w)))| {
                (!(*w <= DELTA_ANG)).then(|| Check::fail(CHECK_ANGLE, k + 1, Some(*s), *w))
            })
            .unwrap_or_else(|| Check::ok(CHECK_ANGLE)),
    );

    // Every frame must carry a well-defined turning number, all equal.
    let mut reference = None;
    let mut turning_check = Check::ok(CHECK_TURNING);
    for (fi, f) in facts.iter().enumerate() {
        match f.turning {
            None => {
                turning_check = Check::fail(CHECK_TURNING, fi, None, f64::NAN);
                break;
            }
            Some(Err(residue)) => {
                turning_check = Check::fail(CHECK_TURNING, fi, None, residue);
                break;
            }
            Some(Ok(k)) => match reference {
                None => reference = Some(k),
                Some(r) if r != k => {
                    turning_check = Check::fail(CHECK_TURNING, fi, None, k as f64);
                    break;
                }
                Some(_) => {}
            },
        }
    }
    checks.push(turning_check);

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport { pass, checks })
}
