//! Sampled closed plane curves and the canonical family `γ_k`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::geom::{diameter, signed_angle, Affine, Point2};

/// Minimum sample count of a curve.
pub const MIN_SAMPLES: usize = 16;

/// Minimum speed, relative to the curve scale.
pub const V_MIN: f64 = 1e-6;

/// A closed curve given by `n` uniform parameter samples `t_i = 2πi/n` of
/// position and velocity.
///
/// Curves built through [`SampledCurve::new`] are regular (no velocity below
/// `V_MIN · scale`) and adequately sampled (consecutive velocities turn by
/// less than a quarter turn).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    points: Vec<Point2>,
    velocities: Vec<Point2>,
    scale: f64,
}

impl SampledCurve {
    /// Builds a curve and checks every invariant.
    pub fn new(points: Vec<Point2>, velocities: Vec<Point2>) -> Result<Self> {
        let curve = Self::new_unchecked(points, velocities)?;
        curve.validate()?;
        Ok(curve)
    }

    /// Builds a curve with centered circular finite-difference velocities.
    pub fn from_points(points: Vec<Point2>) -> Result<Self> {
        let n = points.len();
        if n < MIN_SAMPLES {
            return Err(CurveError::InvalidArgument(format!(
                "need at least {MIN_SAMPLES} samples, got {n}"
            )));
        }
        let h = TAU / n as f64;
        let velocities = (0..n)
            .map(|i| (points[(i + 1) % n] - points[(i + n - 1) % n]) * (0.5 / h))
            .collect();
        Self::new(points, velocities)
    }

    /// Builds a curve checking only shapes and finiteness, not regularity or
    /// sampling adequacy. Used for frames that are about to be verified.
    pub fn new_unchecked(points: Vec<Point2>, velocities: Vec<Point2>) -> Result<Self> {
        let n = points.len();
        if n < MIN_SAMPLES {
            return Err(CurveError::InvalidArgument(format!(
                "need at least {MIN_SAMPLES} samples, got {n}"
            )));
        }
        if velocities.len() != n {
            return Err(CurveError::InvalidArgument(format!(
                "{} velocities for {n} points",
                velocities.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(CurveError::InvalidArgument(format!("non-finite point at sample {i}")));
        }
        if let Some(i) = velocities.iter().position(|p| !p.is_finite()) {
            return Err(CurveError::InvalidArgument(format!(
                "non-finite velocity at sample {i}"
            )));
        }
        let scale = diameter(&points);
        if !(scale > 0.0) {
            return Err(CurveError::InvalidArgument("curve has zero extent".into()));
        }
        Ok(SampledCurve {
            points,
            velocities,
            scale,
        })
    }

    /// Checks regularity and sampling adequacy.
    pub fn validate(&self) -> Result<()> {
        if let Some(index) = self.first_irregular() {
            return Err(CurveError::RegularityViolation {
                index,
                t: self.param(index),
                speed: self.velocities[index].norm(),
            });
        }
        if let Some((index, angle)) = self.first_undersampled() {
            return Err(CurveError::Undersampled { index, angle });
        }
        Ok(())
    }

    pub(crate) fn first_irregular(&self) -> Option<usize> {
        let threshold = V_MIN * self.scale;
        self.velocities.iter().position(|v| !(v.norm() >= threshold))
    }

    pub(crate) fn first_undersampled(&self) -> Option<(usize, f64)> {
        let n = self.len();
        (0..n).find_map(|i| {
            let a = self.velocities[i];
            let b = self.velocities[(i + 1) % n];
            let angle = signed_angle(a, b).abs();
            (!(angle < FRAC_PI_2)).then_some((i, angle))
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn velocities(&self) -> &[Point2] {
        &self.velocities
    }

    /// Diameter of the sample set.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Parameter of sample `i`.
    pub fn param(&self, i: usize) -> f64 {
        TAU * i as f64 / self.len() as f64
    }

    pub fn centroid(&self) -> Point2 {
        let sum = self.points.iter().fold(Point2::ZERO, |acc, &p| acc + p);
        sum * (1.0 / self.len() as f64)
    }

    /// Largest position or velocity deviation from `other` over all samples.
    pub fn max_deviation(&self, other: &SampledCurve) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| a.distance(*b))
            .chain(
                self.velocities
                    .iter()
                    .zip(&other.velocities)
                    .map(|(a, b)| a.distance(*b)),
            )
            .fold(0.0, f64::max)
    }

    /// Cyclic index shift `s` minimising the deviation between `self[i + s]`
    /// and `other[i]`, together with that deviation.
    pub fn best_shift(&self, other: &SampledCurve) -> Option<(usize, f64)> {
        if self.len() != other.len() {
            return None;
        }
        let n = self.len();
        (0..n)
            .map(|s| {
                let dev = (0..n)
                    .map(|i| {
                        let j = (i + s) % n;
                        self.points[j]
                            .distance(other.points[i])
                            .max(self.velocities[j].distance(other.velocities[i]))
                    })
                    .fold(0.0, f64::max);
                (s, dev)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Canonical representatives of the regular homotopy classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonicalIndex {
    /// `γ_k`; for `k = 0` the figure-eight in the reference orientation.
    GammaK(i64),
    /// `γ_0′`, the figure-eight traversed backwards.
    Gamma0Primed,
}

impl CanonicalIndex {
    pub fn turning_number(self) -> i64 {
        match self {
            CanonicalIndex::GammaK(k) => k,
            CanonicalIndex::Gamma0Primed => 0,
        }
    }
}

impl fmt::Display for CanonicalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalIndex::GammaK(k) => write!(f, "gamma({k})"),
            CanonicalIndex::Gamma0Primed => write!(f, "gamma0'"),
        }
    }
}

/// Samples the canonical curve: the `k`-fold circle for `k ≠ 0`, the
/// figure-eight `(sin 2t, sin t)` for `k = 0`, and its reversal for `γ_0′`.
pub fn make_gamma(index: CanonicalIndex, n: usize) -> Result<SampledCurve> {
    if n < MIN_SAMPLES {
        return Err(CurveError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    match index {
        CanonicalIndex::GammaK(0) => {
            let (points, velocities) = (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64;
                    (
                        Point2::new((2.0 * t).sin(), t.sin()),
                        Point2::new(2.0 * (2.0 * t).cos(), t.cos()),
                    )
                })
                .unzip();
            SampledCurve::new(points, velocities)
        }
        CanonicalIndex::GammaK(k) => {
            if k.unsigned_abs() as usize * MIN_SAMPLES > n {
                return Err(CurveError::InvalidArgument(format!(
                    "{n} samples are too few for k = {k} (need |k| <= n/{MIN_SAMPLES})"
                )));
            }
            let kf = k as f64;
            let (points, velocities) = (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64;
                    let (s, c) = (kf * t).sin_cos();
                    (Point2::new(c, s), Point2::new(-kf * s, kf * c))
                })
                .unzip();
            SampledCurve::new(points, velocities)
        }
        CanonicalIndex::Gamma0Primed => Ok(reverse(&make_gamma(CanonicalIndex::GammaK(0), n)?)),
    }
}

/// Traverses the curve backwards: sample `i` becomes sample `(n − i) mod n`
/// and velocities are negated.
pub fn reverse(curve: &SampledCurve) -> SampledCurve {
    let n = curve.len();
    let idx = |i: usize| (n - i) % n;
    SampledCurve {
        points: (0..n).map(|i| curve.points[idx(i)]).collect(),
        velocities: (0..n).map(|i| -curve.velocities[idx(i)]).collect(),
        scale: curve.scale,
    }
}

/// Applies an affine map: positions by the full map, velocities by its
/// linear part.
pub fn transform(curve: &SampledCurve, map: &Affine) -> Result<SampledCurve> {
    let [[a, b], [c, d]] = map.linear;
    let size = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if !(map.determinant().abs() > 1e-12 * size * size) {
        return Err(CurveError::InvalidArgument("degenerate linear part".into()));
    }
    let points = curve.points.iter().map(|&p| map.apply(p)).collect();
    let velocities = curve.velocities.iter().map(|&v| map.apply_linear(v)).collect();
    SampledCurve::new(points, velocities)
}

/// Re-samples through the closed cubic Hermite interpolant of the samples and
/// their velocities.
pub fn resample(curve: &SampledCurve, n: usize) -> Result<SampledCurve> {
    if n < MIN_SAMPLES {
        return Err(CurveError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let m = curve.len();
    let h = TAU / m as f64;
    let (points, velocities) = (0..n)
        .map(|j| {
            // position in units of the source step
            let s = j as f64 * m as f64 / n as f64;
            let i = (s.floor() as usize).min(m - 1);
            let tau = s - i as f64;
            let p0 = curve.points[i];
            let p1 = curve.points[(i + 1) % m];
            let m0 = curve.velocities[i] * h;
            let m1 = curve.velocities[(i + 1) % m] * h;
            hermite(p0, m0, p1, m1, tau, h)
        })
        .unzip();
    SampledCurve::new(points, velocities)
}

/// Cubic Hermite segment on `τ ∈ [0, 1]`; returns the point and the
/// derivative with respect to a parameter with `dt = dτ · step`.
pub(crate) fn hermite(
    p0: Point2,
    m0: Point2,
    p1: Point2,
    m1: Point2,
    tau: f64,
    step: f64,
) -> (Point2, Point2) {
    let t2 = tau * tau;
    let t3 = t2 * tau;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + tau;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let d00 = 6.0 * t2 - 6.0 * tau;
    let d10 = 3.0 * t2 - 4.0 * tau + 1.0;
    let d01 = -6.0 * t2 + 6.0 * tau;
    let d11 = 3.0 * t2 - 2.0 * tau;
    let p = p0 * h00 + m0 * h10 + p1 * h01 + m1 * h11;
    let v = (p0 * d00 + m0 * d10 + p1 * d01 + m1 * d11) * (1.0 / step);
    (p, v)
}

/// JSON curve file: `{"n": .., "points": [[x, y], ..], "velocities": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub n: usize,
    pub points: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocities: Option<Vec<Point2>>,
    /// Free-text annotation, used for homotopy frames.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CurveFile {
    pub fn from_curve(curve: &SampledCurve) -> Self {
        CurveFile {
            n: curve.len(),
            points: curve.points.clone(),
            velocities: Some(curve.velocities.clone()),
            note: None,
        }
    }

    fn check_n(&self) -> Result<()> {
        if self.n != self.points.len() {
            return Err(CurveError::InvalidArgument(format!(
                "n = {} but {} points",
                self.n,
                self.points.len()
            )));
        }
        Ok(())
    }

    /// Validated curve; missing velocities are taken by finite differences.
    pub fn into_curve(self) -> Result<SampledCurve> {
        self.check_n()?;
        match self.velocities {
            Some(v) => SampledCurve::new(self.points, v),
            None => SampledCurve::from_points(self.points),
        }
    }

    /// Curve without regularity or adequacy checks.
    pub fn into_curve_unchecked(self) -> Result<SampledCurve> {
        self.check_n()?;
        match self.velocities {
            Some(v) => SampledCurve::new_unchecked(self.points, v),
            None => {
                let n = self.points.len();
                if n < MIN_SAMPLES {
                    return Err(CurveError::InvalidArgument(format!(
                        "need at least {MIN_SAMPLES} samples, got {n}"
                    )));
                }
                let h = TAU / n as f64;
                let v = (0..n)
                    .map(|i| (self.points[(i + 1) % n] - self.points[(i + n - 1) % n]) * (0.5 / h))
                    .collect();
                SampledCurve::new_unchecked(self.points, v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::turning_number;

    #[test]
    fn circle_samples() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 64).unwrap();
        assert_eq!(c.len(), 64);
        for p in c.points() {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        assert!((c.scale() - 2.0).abs() < 1e-12);
        assert_eq!(turning_number(&c).unwrap(), 1);
    }

    #[test]
    fn gamma_needs_enough_samples() {
        assert!(matches!(
            make_gamma(CanonicalIndex::GammaK(3), 32),
            Err(CurveError::InvalidArgument(_))
        ));
        assert!(make_gamma(CanonicalIndex::GammaK(2), 32).is_ok());
        assert!(make_gamma(CanonicalIndex::GammaK(1), 8).is_err());
    }

    #[test]
    fn reverse_is_an_involution() {
        let c = make_gamma(CanonicalIndex::GammaK(0), 64).unwrap();
        assert_eq!(reverse(&reverse(&c)), c);
    }

    #[test]
    fn gamma0_primed_is_reversed_eight() {
        let a = make_gamma(CanonicalIndex::Gamma0Primed, 64).unwrap();
        let b = reverse(&make_gamma(CanonicalIndex::GammaK(0), 64).unwrap());
        assert_eq!(a, b);
        assert_eq!(turning_number(&a).unwrap(), 0);
    }

    #[test]
    fn half_turn_of_eight_is_its_reversal() {
        let eight = make_gamma(CanonicalIndex::GammaK(0), 128).unwrap();
        let rotated = transform(&eight, &Affine::rotation(std::f64::consts::PI)).unwrap();
        let (shift, dev) = rotated.best_shift(&reverse(&eight)).unwrap();
        assert_eq!(shift, 0);
        assert!(dev < 1e-12);
    }

    #[test]
    fn identity_transform() {
        let c = make_gamma(CanonicalIndex::GammaK(2), 64).unwrap();
        assert_eq!(transform(&c, &Affine::IDENTITY).unwrap(), c);
    }

    #[test]
    fn squashed_circle_keeps_turning_number() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 64).unwrap();
        let m = Affine::new([[1.0, 0.0], [0.0, 0.1]], Point2::ZERO);
        let s = transform(&c, &m).unwrap();
        assert_eq!(turning_number(&s).unwrap(), 1);
    }

    #[test]
    fn degenerate_transform_is_rejected() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 64).unwrap();
        let m = Affine::new([[1.0, 2.0], [2.0, 4.0]], Point2::ZERO);
        assert!(matches!(transform(&c, &m), Err(CurveError::InvalidArgument(_))));
    }

    #[test]
    fn extreme_anisotropy_reports_regularity() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 64).unwrap();
        let m = Affine::new([[1.0, 0.0], [0.0, 1e-9]], Point2::ZERO);
        assert!(matches!(
            transform(&c, &m),
            Err(CurveError::RegularityViolation { index: 0, .. })
        ));
    }

    #[test]
    fn resample_refines_and_fixes() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 64).unwrap();
        let fine = resample(&c, 128).unwrap();
        assert_eq!(turning_number(&fine).unwrap(), 1);
        let same = resample(&c, 64).unwrap();
        assert!(same.max_deviation(&c) < 1e-9 * c.scale());
    }

    #[test]
    fn coarse_resample_is_undersampled() {
        let c = make_gamma(CanonicalIndex::GammaK(5), 256).unwrap();
        assert!(matches!(resample(&c, 16), Err(CurveError::Undersampled { .. })));
        // three turns still fit in 32 samples (a quarter turn needs n <= 12)
        let c3 = make_gamma(CanonicalIndex::GammaK(3), 256).unwrap();
        assert_eq!(turning_number(&resample(&c3, 32).unwrap()).unwrap(), 3);
    }

    #[test]
    fn finite_difference_velocities() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 256).unwrap();
        let fd = SampledCurve::from_points(c.points().to_vec()).unwrap();
        for (a, b) in fd.velocities().iter().zip(c.velocities()) {
            assert!(a.distance(*b) < 1e-3);
        }
    }

    #[test]
    fn zero_velocity_is_irregular() {
        let c = make_gamma(CanonicalIndex::GammaK(1), 32).unwrap();
        let mut v = c.velocities().to_vec();
        v[5] = Point2::ZERO;
        assert!(matches!(
            SampledCurve::new(c.points().to_vec(), v),
            Err(CurveError::RegularityViolation { index: 5, .. })
        ));
    }

    #[test]
    fn curve_file_round_trip() {
        let c = make_gamma(CanonicalIndex::GammaK(-1), 32).unwrap();
        let json = serde_json::to_string(&CurveFile::from_curve(&c)).unwrap();
        assert!(json.starts_with("{\"n\":32,\"points\":[["));
        let back: CurveFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_curve().unwrap(), c);
    }
}
