//! Curves made of runs nearly parallel to a direction, joined by semicircular
//! turn caps.
//!
//! Geometry lives in the frame of the direction: `X` along `u`, `Y` along its
//! counterclockwise normal. Cap `j` is centred on parameter `t_j` and
//! reaches `X = x_j` at its middle; the run after it has `X`-velocity sign
//! `σ_j`, and these signs alternate.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::curve::{SampledCurve, MIN_SAMPLES};
use crate::error::{CurveError, Result};
use crate::flatten::{Direction, Turn, TurnCode};
use crate::geom::Point2;
use crate::rewrite::{CyclicWord, Letter};

use super::pieces::{Piece, PieceCurve, Shape};

/// Cap radius as a fraction of the smallest `x` gap between adjacent turns.
const RADIUS_FRACTION: f64 = 0.25;
/// Cap half-width as a fraction of the smallest adjacent parameter gap.
const WINDOW_FRACTION: f64 = 0.4;
/// Distance, in radii, between the caps around a pair about to be cancelled.
const PULL_CLEARANCE: f64 = 26.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    pub dir: Letter,
    pub t: f64,
    pub half_width: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurnRunCurve {
    direction: Direction,
    caps: Vec<Cap>,
    /// `X`-velocity sign of the run entering cap 0.
    sigma_in0: f64,
    radius: f64,
    /// `Y` of the centre of cap 0.
    y0: f64,
    n: usize,
}

impl TurnRunCurve {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn caps(&self) -> &[Cap] {
        &self.caps
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn samples(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.caps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.caps.is_empty()
    }

    pub fn word(&self) -> CyclicWord {
        CyclicWord::new(self.caps.iter().map(|c| c.dir).collect()).expect("even number of caps")
    }

    /// The code this curve realizes.
    pub fn code(&self) -> TurnCode {
        let turns = self
            .caps
            .iter()
            .map(|c| Turn {
                dir: c.dir,
                t: c.t,
                x: c.x,
            })
            .collect();
        TurnCode::new(self.direction, turns).expect("even number of caps")
    }

    /// `X`-velocity sign entering cap `j`.
    pub fn sigma_in(&self, j: usize) -> f64 {
        if j.is_multiple_of(2) {
            self.sigma_in0
        } else {
            -self.sigma_in0
        }
    }

    /// Sign of the `Y` travel across cap `j`.
    fn rho(&self, j: usize) -> f64 {
        self.sigma_in(j) * self.caps[j].dir.sign()
    }

    fn cap_centres_y(&self) -> Vec<f64> {
        let m = self.caps.len();
        let r = self.radius;
        let total: f64 = (0..m).map(|j| 2.0 * r * self.rho(j)).sum();
        let drift = -total / m as f64;
        let mut ys = Vec::with_capacity(m);
        let mut y = self.y0;
        for j in 0..m {
            ys.push(y);
            if j + 1 < m {
                y += self.rho(j) * r + drift + self.rho(j + 1) * r;
            }
        }
        ys
    }

    /// Moves the curve so that its cap centres are centred on `y` vertically.
    pub fn with_baseline(mut self, y: f64) -> Self {
        let ys = self.cap_centres_y();
        let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.y0 += y - 0.5 * (lo + hi);
        self
    }

    /// Parameter where cap `j` starts, lifted so that it increases with `j`
    /// across the seam when `j ≥ m`.
    fn cap_start(&self, j: usize) -> f64 {
        let m = self.caps.len();
        let c = &self.caps[j % m];
        c.t - c.half_width + TAU * (j / m) as f64
    }

    fn cap_end(&self, j: usize) -> f64 {
        let m = self.caps.len();
        let c = &self.caps[j % m];
        c.t + c.half_width + TAU * (j / m) as f64
    }

    fn heading_in(&self, j: usize) -> f64 {
        if self.sigma_in(j) > 0.0 {
            0.0
        } else {
            PI
        }
    }

    fn cap_shape(&self, j: usize, cy: f64) -> Shape {
        let c = &self.caps[j];
        let s = self.sigma_in(j);
        let start = Point2::new(c.x - s * self.radius, cy - self.rho(j) * self.radius);
        Shape::arc_from(start, self.heading_in(j), self.radius, c.dir.sign() * PI)
    }

    /// Arcs and runs in the frame of the direction. Piece `2j` is cap `j`,
    /// piece `2j + 1` the run after it.
    pub(crate) fn pieces(&self) -> PieceCurve {
        let m = self.caps.len();
        let ys = self.cap_centres_y();
        let caps: Vec<Shape> = (0..m).map(|j| self.cap_shape(j, ys[j])).collect();
        let mut pieces = Vec::with_capacity(2 * m);
        for j in 0..m {
            let c = &self.caps[j];
            pieces.push(Piece {
                shape: caps[j],
                t0: c.t - c.half_width,
                len: 2.0 * c.half_width,
            });
            pieces.push(Piece {
                shape: Shape::run(caps[j].end(), caps[(j + 1) % m].start_point()),
                t0: self.cap_end(j),
                len: self.cap_start(j + 1) - self.cap_end(j),
            });
        }
        PieceCurve { pieces }
    }

    pub(crate) fn to_world(&self) -> impl Fn(Point2) -> Point2 {
        let u = self.direction.vector();
        let nrm = self.direction.normal();
        move |p| u * p.x + nrm * p.y
    }

    /// Samples without checking regularity.
    pub(crate) fn sample_unchecked(&self) -> Result<SampledCurve> {
        self.pieces().to_sampled(self.n, self.to_world())
    }

    /// Samples the curve and checks every curve invariant.
    pub fn to_sampled(&self) -> Result<SampledCurve> {
        let c = self.sample_unchecked()?;
        c.validate()?;
        Ok(c)
    }

    fn check_pair(&self, pair: (usize, usize)) -> Result<()> {
        let m = self.caps.len();
        let (i, j) = pair;
        if m < 4 || i >= m || j != (i + 1) % m || self.caps[i].dir == self.caps[j].dir {
            return Err(CurveError::InvalidArgument(format!(
                "({i}, {j}) is not a cancellable pair of {}",
                self.word()
            )));
        }
        Ok(())
    }

    /// Spreads the caps around `pair` so that the runs on either side of it
    /// are long enough to absorb the pair. Cap `i + 2` moves forward, caps
    /// `i + 3 ..= i − 1` move back, and caps `i`, `i + 1` stay put.
    pub(crate) fn pulled(&self, pair: (usize, usize)) -> Result<TurnRunCurve> {
        self.check_pair(pair)?;
        let m = self.caps.len();
        let i = pair.0;
        let before = (i + m - 1) % m;
        let after = (i + 2) % m;
        let sigma = self.sigma_in(i);
        let gap = sigma * (self.caps[after].x - self.caps[before].x);
        let d = (0.5 * (PULL_CLEARANCE * self.radius - gap)).max(0.0);
        let mut out = self.clone();
        for k in 2..m {
            let j = (i + k) % m;
            out.caps[j].x += if k == 2 { sigma * d } else { -sigma * d };
        }
        Ok(out)
    }

    /// Replaces the zig-zag through caps `i`, `i + 1` by a single step: run,
    /// quarter turn, straight rise, quarter turn back, run. Parameter
    /// intervals are those of the five pieces it replaces.
    pub(crate) fn straightened(&self, pair: (usize, usize)) -> Result<PieceCurve> {
        self.check_pair(pair)?;
        let m = self.caps.len();
        let i = pair.0;
        let mut curve = self.pieces();
        let np = 2 * m;
        let idx = |k: isize| ((2 * i) as isize + k).rem_euclid(np as isize) as usize;
        let p0 = curve.pieces[idx(-2)].shape.end();
        let p5 = curve.pieces[idx(4)].shape.start_point();
        let r = self.radius;
        let sigma = self.sigma_in(i);
        let d = self.caps[i].dir.sign();
        let rho = sigma * d;
        let heading = self.heading_in(i);
        let rise = 2.0 * r;
        let xm = 0.5 * (p0.x + p5.x);
        let h1 = 0.5 * (p5.y - p0.y - rho * (2.0 * r + rise));
        let q1 = Point2::new(xm - sigma * r, p0.y + h1);
        let arc1 = Shape::arc_from(q1, heading, r, d * FRAC_PI_2);
        let q2 = arc1.end();
        let q3 = q2 + Point2::new(0.0, rho * rise);
        let line = Shape::Hermite {
            p0: q2,
            m0: q3 - q2,
            p1: q3,
            m1: q3 - q2,
        };
        let arc2 = Shape::arc_from(q3, heading + d * FRAC_PI_2, r, -d * FRAC_PI_2);
        let q4 = arc2.end();
        let shapes = [
            Shape::run(p0, q1),
            arc1,
            line,
            arc2,
            Shape::run(q4, p5),
        ];
        for (k, s) in shapes.into_iter().enumerate() {
            curve.pieces[idx(k as isize - 1)].shape = s;
        }
        Ok(curve)
    }

    /// The same curve without caps `i`, `i + 1`.
    pub(crate) fn cancelled(&self, pair: (usize, usize)) -> Result<TurnRunCurve> {
        self.check_pair(pair)?;
        let (i, j) = pair;
        let first = (0..self.caps.len()).find(|&k| k != i && k != j).expect("m >= 4");
        let ys = self.cap_centres_y();
        let caps = self
            .caps
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, c)| *c)
            .collect();
        Ok(TurnRunCurve {
            direction: self.direction,
            caps,
            sigma_in0: self.sigma_in(first),
            radius: self.radius,
            y0: ys[first],
            n: self.n,
        })
    }
}

/// Builds the turn-run curve for `code`, sampled with `n` points. The `x`
/// values of the code are kept when they are compatible with alternating
/// runs; otherwise evenly spread positions are used.
pub fn realize_code(code: &TurnCode, n: usize) -> Result<TurnRunCurve> {
    if n < MIN_SAMPLES {
        return Err(CurveError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let turns = code.turns();
    let m = turns.len();
    let mut xs: Vec<f64> = turns.iter().map(|t| t.x).collect();
    let signs: Vec<f64> = (0..m).map(|j| (xs[(j + 1) % m] - xs[j]).signum()).collect();
    let consistent = (0..m).all(|j| {
        let d = xs[(j + 1) % m] - xs[j];
        d != 0.0 && d.is_finite() && signs[j] == -signs[(j + m - 1) % m]
    });
    let sigma_in0 = if consistent {
        signs[m - 1]
    } else {
        xs = (0..m).map(|j| if j % 2 == 0 { 1.0 } else { 0.0 }).collect();
        1.0
    };
    let min_gap = (0..m)
        .map(|j| (xs[(j + 1) % m] - xs[j]).abs())
        .fold(f64::INFINITY, f64::min);
    let ts: Vec<f64> = turns.iter().map(|t| t.t).collect();
    let t_gap = |j: usize| {
        if j + 1 < m {
            ts[j + 1] - ts[j]
        } else {
            ts[0] + TAU - ts[m - 1]
        }
    };
    let caps = (0..m)
        .map(|j| Cap {
            dir: turns[j].dir,
            t: ts[j],
            half_width: WINDOW_FRACTION * t_gap(j).min(t_gap((j + m - 1) % m)),
            x: xs[j],
        })
        .collect();
    Ok(TurnRunCurve {
        direction: code.direction,
        caps,
        sigma_in0,
        radius: RADIUS_FRACTION * min_gap,
        y0: 0.0,
        n,
    })
}

/// A code with the given letters, evenly spaced in parameter, with
/// alternating `x` so that it is directly realizable.
pub fn synthetic_code(word: &CyclicWord, direction: Direction) -> TurnCode {
    let m = word.len();
    let turns = word
        .letters()
        .iter()
        .enumerate()
        .map(|(j, &dir)| Turn {
            dir,
            t: TAU * (j as f64 + 0.5) / m as f64,
            x: if j % 2 == 0 { 1.0 } else { 0.0 },
        })
        .collect();
    TurnCode::new(direction, turns).expect("words have even length >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatten::{code_turning_number, extract_turn_code};
    use crate::invariant::turning_number;

    fn realize(word: &str) -> TurnRunCurve {
        let code = synthetic_code(&word.parse().unwrap(), Direction::new(1.0, 0.0).unwrap());
        realize_code(&code, 512).unwrap()
    }

    #[test]
    fn realizations_have_the_right_code() {
        for word in ["LL", "LR", "RR", "LLLL", "LRLL", "LLRLRLLR", "RRRRRL", "LRLRLRLR"] {
            let t = realize(word);
            let c = t.to_sampled().unwrap();
            let code = extract_turn_code(&c, t.direction()).unwrap();
            assert_eq!(code.word().to_string(), word);
            assert_eq!(turning_number(&c).unwrap(), code_turning_number(&code).unwrap());
        }
    }

    #[test]
    fn pieces_join_up() {
        let t = realize("LLRLRLLR");
        let pc = t.pieces();
        for k in 0..pc.pieces.len() {
            let a = pc.pieces[k];
            let b = pc.pieces[(k + 1) % pc.pieces.len()];
            assert!(a.shape.end().distance(b.shape.start_point()) < 1e-9, "gap after piece {k}");
            let t_end = a.t0 + a.len;
            assert!(((t_end - b.t0).rem_euclid(TAU)).min(TAU - (t_end - b.t0).rem_euclid(TAU)) < 1e-12);
        }
    }

    #[test]
    fn straightened_section_is_closed_and_monotone() {
        let t = realize("LRLL");
        let pulled = t.pulled((0, 1)).unwrap();
        let mid = pulled.straightened((0, 1)).unwrap();
        for k in 0..mid.pieces.len() {
            let a = mid.pieces[k];
            let b = mid.pieces[(k + 1) % mid.pieces.len()];
            assert!(a.shape.end().distance(b.shape.start_point()) < 1e-9, "gap after piece {k}");
        }
        let c = mid.to_sampled(512, pulled.to_world()).unwrap();
        c.validate().unwrap();
        // the rise is perpendicular to the direction, so look slightly askew
        let code = extract_turn_code(&c, Direction::from_angle(0.05)).unwrap();
        assert_eq!(code.word().to_string(), "LL");
        assert_eq!(turning_number(&c).unwrap(), 1);
    }

    #[test]
    fn pull_keeps_the_code() {
        let t = realize("LLRLRLLR");
        let pulled = t.pulled((1, 2)).unwrap();
        let c = pulled.to_sampled().unwrap();
        let code = extract_turn_code(&c, t.direction()).unwrap();
        assert_eq!(code.word(), t.word());
    }
}
