//! A small language for analytic curves, e.g. `x = sin(2*t); y = sin(t)`.

mod expr;
mod parser;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

pub use expr::Expr;
pub use parser::parse_expr;

use crate::curve::{SampledCurve, MIN_SAMPLES};
use crate::error::{CurveError, Result};
use crate::geom::{diameter, Point2};

/// Closure tolerance relative to the curve scale.
pub const CLOSURE_TOL: f64 = 1e-6;

/// The pair `(x(t), y(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveExpr {
    pub x: Expr,
    pub y: Expr,
}

impl CurveExpr {
    pub fn eval(&self, t: f64) -> Point2 {
        Point2::new(self.x.eval(t), self.y.eval(t))
    }
}

impl fmt::Display for CurveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}; y = {}", self.x, self.y)
    }
}

impl FromStr for CurveExpr {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self> {
        parse_curve(s)
    }
}

pub fn parse_curve(src: &str) -> Result<CurveExpr> {
    let (x, y) = parser::parse_pair(src)?;
    Ok(CurveExpr { x, y })
}

pub fn differentiate(e: &CurveExpr) -> CurveExpr {
    CurveExpr {
        x: e.x.derivative(),
        y: e.y.derivative(),
    }
}

/// Samples at `t_i = 2πi/n` with exact velocities. The expression must close
/// up: `|α(2π) − α(0)|` below `CLOSURE_TOL · scale`.
pub fn sample_expr(e: &CurveExpr, n: usize) -> Result<SampledCurve> {
    if n < MIN_SAMPLES {
        return Err(CurveError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let d = differentiate(e);
    let params: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let points: Vec<Point2> = params.iter().map(|&t| e.eval(t)).collect();
    let velocities: Vec<Point2> = params.iter().map(|&t| d.eval(t)).collect();
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(CurveError::InvalidArgument(format!(
            "expression is not finite at t = {}",
            params[i]
        )));
    }
    let scale = diameter(&points);
    let gap = e.eval(TAU).distance(points[0]);
    if !(gap < CLOSURE_TOL * scale) {
        return Err(CurveError::NotClosed { gap });
    }
    SampledCurve::new(points, velocities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::turning_number;

    fn d(src: &str) -> String {
        parse_expr(src).unwrap().derivative().to_string()
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(d("sin(t)"), "cos(t)");
        assert_eq!(d("sin(2*t)"), "2*cos(2*t)");
        assert_eq!(d("t^2"), "2*t");
        assert_eq!(d("cos(t)"), "-sin(t)");
        assert_eq!(d("3"), "0");
    }

    #[test]
    fn parse_examples() {
        let c = parse_curve("x = cos(t); y = sin(t)").unwrap();
        assert_eq!(c.x, Expr::Cos(Box::new(Expr::T)));
        assert!(parse_curve("x = sin(2*t); y = sin(t);").is_ok());
        match parse_curve("x = cos(q); y = t") {
            Err(CurveError::UnknownIdentifier { name, line, col }) => {
                assert_eq!((name.as_str(), line, col), ("q", 1, 9));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_curve("x = cos(t);\ny = sin(t") {
            Err(CurveError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 10)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_curve("x = t / t; y = t"), Err(CurveError::Syntax { .. })));
        assert!(matches!(parse_curve("x = t^-1; y = t"), Err(CurveError::Syntax { .. })));
        assert!(matches!(parse_curve("x = t^1.5; y = t"), Err(CurveError::Syntax { .. })));
        assert!(parse_curve("x = 2^-1; y = t / 2").is_ok());
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-t^2").unwrap();
        // unary minus binds tighter than pow
        assert_eq!(e.eval(3.0), 9.0);
        assert_eq!(parse_expr("1 - 2 - 3").unwrap().eval(0.0), -4.0);
        assert_eq!(parse_expr("2 * 3 ^ 2").unwrap().eval(0.0), 18.0);
        assert_eq!(parse_expr("8 / 2 / 2").unwrap().eval(0.0), 2.0);
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let src = format!("x = {}t{}; y = t", "(".repeat(500), ")".repeat(500));
        assert!(matches!(parse_curve(&src), Err(CurveError::Syntax { .. })));
        let src = format!("x = {}t; y = t", "-".repeat(500));
        assert!(matches!(parse_curve(&src), Err(CurveError::Syntax { .. })));
    }

    #[test]
    fn sample_examples() {
        let circle = parse_curve("x = cos(t); y = sin(t)").unwrap();
        assert_eq!(turning_number(&sample_expr(&circle, 64).unwrap()).unwrap(), 1);
        let c = parse_curve("x = cos(t); y = sin(2*t)").unwrap();
        assert_eq!(turning_number(&sample_expr(&c, 256).unwrap()).unwrap(), 0);
        let open = parse_curve("x = t; y = t").unwrap();
        assert!(matches!(sample_expr(&open, 64), Err(CurveError::NotClosed { .. })));
        let cusp = parse_curve("x = cos(t)^3; y = sin(t)^3").unwrap();
        assert!(matches!(
            sample_expr(&cusp, 64),
            Err(CurveError::RegularityViolation { index: 0, .. })
        ));
    }

    #[test]
    fn display_round_trip() {
        for src in ["x = -t^2 + 3*sin(2*t); y = (1 - t)*(t + 2)", "x = -(-t); y = 2^-3*t^3^2"] {
            let c = parse_curve(src).unwrap();
            assert_eq!(parse_curve(&c.to_string()).unwrap(), c);
        }
    }
}
