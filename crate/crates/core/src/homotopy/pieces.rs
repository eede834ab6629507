//! Closed curves assembled from arcs and cubic Hermite segments, each owning
//! a parameter interval.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::curve::{hermite, SampledCurve};
use crate::error::Result;
use crate::geom::Point2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape {
    /// Circle arc: polar angle `start + sweep·τ` around `center`.
    Arc {
        center: Point2,
        radius: f64,
        start: f64,
        sweep: f64,
    },
    /// Hermite segment with tangents given per unit `τ`.
    Hermite {
        p0: Point2,
        m0: Point2,
        p1: Point2,
        m1: Point2,
    },
}

impl Shape {
    /// Arc leaving `from` with the given heading, turning by `sweep`
    /// (positive is counterclockwise).
    pub fn arc_from(from: Point2, heading: f64, radius: f64, sweep: f64) -> Shape {
        let side = sweep.signum();
        let center = from + Point2::from_angle(heading + side * FRAC_PI_2) * radius;
        Shape::Arc {
            center,
            radius,
            start: heading - side * FRAC_PI_2,
            sweep,
        }
    }

    /// Segment whose tangents at both ends are `(Δx, 0)`: `x` moves linearly
    /// and `y` follows a smoothstep.
    pub fn run(p0: Point2, p1: Point2) -> Shape {
        let m = Point2::new(p1.x - p0.x, 0.0);
        Shape::Hermite { p0, m0: m, p1, m1: m }
    }

    /// Position and derivative in `τ ∈ [0, 1]`.
    pub fn eval(&self, tau: f64) -> (Point2, Point2) {
        match *self {
            Shape::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let phi = start + sweep * tau;
                let dir = Point2::from_angle(phi);
                (center + dir * radius, dir.perp() * (radius * sweep))
            }
            Shape::Hermite { p0, m0, p1, m1 } => hermite(p0, m0, p1, m1, tau, 1.0),
        }
    }

    pub fn start_point(&self) -> Point2 {
        self.eval(0.0).0
    }

    pub fn end(&self) -> Point2 {
        self.eval(1.0).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Piece {
    pub shape: Shape,
    /// Parameter at `τ = 0`; may lie outside `[0, 2π)`.
    pub t0: f64,
    pub len: f64,
}

/// Pieces covering one period, in parameter order.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PieceCurve {
    pub pieces: Vec<Piece>,
}

impl PieceCurve {
    fn locate(&self, t: f64) -> (&Piece, f64) {
        let mut best = (&self.pieces[0], f64::INFINITY);
        for p in &self.pieces {
            let off = (t - p.t0).rem_euclid(TAU);
            if off <= p.len {
                return (p, off / p.len);
            }
            // rounding at a seam: take the nearest piece end
            let miss = off - p.len;
            if miss < best.1 {
                best = (p, miss);
            }
        }
        (best.0, 1.0)
    }

    /// Position and velocity at `t`.
    pub fn eval(&self, t: f64) -> (Point2, Point2) {
        let (piece, tau) = self.locate(t);
        let (p, d) = piece.shape.eval(tau);
        (p, d * (1.0 / piece.len))
    }

    /// Uniform samples, mapped to the plane by `frame`.
    pub fn sample(&self, n: usize, frame: impl Fn(Point2) -> Point2) -> (Vec<Point2>, Vec<Point2>) {
        (0..n)
            .map(|i| {
                let (p, v) = self.eval(TAU * i as f64 / n as f64);
                (frame(p), frame(v) - frame(Point2::ZERO))
            })
            .unzip()
    }

    pub fn to_sampled(&self, n: usize, frame: impl Fn(Point2) -> Point2) -> Result<SampledCurve> {
        let (p, v) = self.sample(n, frame);
        SampledCurve::new_unchecked(p, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn arc_from_turns_as_asked() {
        let a = Shape::arc_from(Point2::new(0.0, 0.0), 0.0, 1.0, PI);
        let (p, v) = a.eval(1.0);
        assert!(p.distance(Point2::new(0.0, 2.0)) < 1e-12);
        assert!(v.x < 0.0 && v.y.abs() < 1e-12);
        let b = Shape::arc_from(Point2::new(0.0, 0.0), PI, 1.0, -PI / 2.0);
        let (p, v) = b.eval(1.0);
        assert!(p.distance(Point2::new(-1.0, 1.0)) < 1e-12);
        assert!(v.y > 0.0 && v.x.abs() < 1e-12);
    }

    #[test]
    fn run_is_linear_in_x() {
        let r = Shape::run(Point2::new(0.0, 0.0), Point2::new(4.0, 1.0));
        for k in 0..=10 {
            let tau = k as f64 / 10.0;
            let (p, d) = r.eval(tau);
            assert!((p.x - 4.0 * tau).abs() < 1e-12);
            assert!((d.x - 4.0).abs() < 1e-12);
        }
        assert_eq!(r.eval(0.0).1.y, 0.0);
    }
}
