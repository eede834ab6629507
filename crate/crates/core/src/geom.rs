//! Plane points and affine maps.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point (or vector) of the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector at `angle` radians from the x axis.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 { x: c, y: s }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, other: Point2, s: f64) -> Point2 {
        self + (other - self) * s
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }
}

/// Signed angle from `a` to `b` in (−π, π].
pub fn signed_angle(a: Point2, b: Point2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Point2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// `p ↦ linear · p + offset`, with `linear = [[a, b], [c, d]]` in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub linear: [[f64; 2]; 2],
    pub offset: Point2,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        linear: [[1.0, 0.0], [0.0, 1.0]],
        offset: Point2::ZERO,
    };

    pub fn new(linear: [[f64; 2]; 2], offset: Point2) -> Self {
        Affine { linear, offset }
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Affine::new([[c, -s], [s, c]], Point2::ZERO)
    }

    /// Rotation by `angle` about `center`.
    pub fn rotation_about(angle: f64, center: Point2) -> Self {
        let rot = Affine::rotation(angle);
        Affine::new(rot.linear, center - rot.apply_linear(center))
    }

    pub fn translation(offset: Point2) -> Self {
        Affine::new(Affine::IDENTITY.linear, offset)
    }

    /// Scales the component along `perp(axis)` by `factor` about `center`,
    /// leaving the component along the unit vector `axis` unchanged.
    pub fn squash(axis: Point2, factor: f64, center: Point2) -> Self {
        let n = axis.perp();
        // I + (factor - 1) n nᵀ
        let k = factor - 1.0;
        let linear = [
            [1.0 + k * n.x * n.x, k * n.x * n.y],
            [k * n.y * n.x, 1.0 + k * n.y * n.y],
        ];
        let map = Affine::new(linear, Point2::ZERO);
        Affine::new(linear, center - map.apply_linear(center))
    }

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.linear;
        a * d - b * c
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        self.apply_linear(p) + self.offset
    }

    pub fn apply_linear(&self, v: Point2) -> Point2 {
        let [[a, b], [c, d]] = self.linear;
        Point2::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }
}

/// Largest distance between two of the given points.
///
/// Computed on the convex hull, so the quadratic pass only runs over hull
/// vertices.
pub fn diameter(points: &[Point2]) -> f64 {
    let hull = convex_hull(points);
    let mut best = 0.0f64;
    for (i, &a) in hull.iter().enumerate() {
        for &b in &hull[i + 1..] {
            best = best.max(a.distance(b));
        }
    }
    best
}

/// Andrew's monotone chain. Collinear points are dropped.
fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diameter_matches_brute_force() {
        let pts: Vec<Point2> = (0..97)
            .map(|i| {
                let t = i as f64 * 0.37;
                Point2::new((2.0 * t).sin() + 0.3 * t.cos(), t.sin())
            })
            .collect();
        let mut brute = 0.0f64;
        for a in &pts {
            for b in &pts {
                brute = brute.max(a.distance(*b));
            }
        }
        assert!((diameter(&pts) - brute).abs() < 1e-12);
    }

    #[test]
    fn diameter_of_collinear_points() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(3.0, 3.0)];
        assert!((diameter(&pts) - 18f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn squash_keeps_axis_component() {
        let axis = Point2::from_angle(0.7);
        let m = Affine::squash(axis, 0.1, Point2::new(1.0, 2.0));
        let p = Point2::new(3.0, -1.0);
        let q = m.apply(p);
        assert!(((q - p).dot(axis)).abs() < 1e-12);
        assert!((m.determinant() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rotation_about_fixes_center() {
        let c = Point2::new(0.5, -2.0);
        let m = Affine::rotation_about(1.3, c);
        assert!(m.apply(c).distance(c) < 1e-12);
    }
}
