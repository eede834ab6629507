use std::f64::consts::PI;
use std::fmt;

/// Expression over the single variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    T,
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

use Expr::*;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Num(v) => *v,
            T => t,
            Pi => PI,
            Neg(a) => -a.eval(t),
            Add(a, c) => a.eval(t) + c.eval(t),
            Sub(a, c) => a.eval(t) - c.eval(t),
            Mul(a, c) => a.eval(t) * c.eval(t),
            Div(a, c) => a.eval(t) / c.eval(t),
            Pow(a, n) => a.eval(t).powi(*n),
            Sin(a) => a.eval(t).sin(),
            Cos(a) => a.eval(t).cos(),
        }
    }

    pub fn depends_on_t(&self) -> bool {
        match self {
            Num(_) | Pi => false,
            T => true,
            Neg(a) | Pow(a, _) | Sin(a) | Cos(a) => a.depends_on_t(),
            Add(a, c) | Sub(a, c) | Mul(a, c) | Div(a, c) => a.depends_on_t() || c.depends_on_t(),
        }
    }

    /// Derivative with respect to `t`, simplified.
    pub fn derivative(&self) -> Expr {
        self.raw_derivative().simplify()
    }

    fn raw_derivative(&self) -> Expr {
        match self {
            Num(_) | Pi => Num(0.0),
            T => Num(1.0),
            Neg(a) => Neg(b(a.raw_derivative())),
            Add(a, c) => Add(b(a.raw_derivative()), b(c.raw_derivative())),
            Sub(a, c) => Sub(b(a.raw_derivative()), b(c.raw_derivative())),
            Mul(a, c) => Add(
                b(Mul(b(a.raw_derivative()), c.clone())),
                b(Mul(a.clone(), b(c.raw_derivative()))),
            ),
            Div(a, c) => Div(
                b(Sub(
                    b(Mul(b(a.raw_derivative()), c.clone())),
                    b(Mul(a.clone(), b(c.raw_derivative()))),
                )),
                b(Pow(c.clone(), 2)),
            ),
            Pow(a, n) => Mul(
                b(Mul(b(Num(*n as f64)), b(Pow(a.clone(), n - 1)))),
                b(a.raw_derivative()),
            ),
            Sin(a) => Mul(b(Cos(a.clone())), b(a.raw_derivative())),
            Cos(a) => Neg(b(Mul(b(Sin(a.clone())), b(a.raw_derivative())))),
        }
    }

    fn as_num(&self) -> Option<f64> {
        match self {
            Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Constant folding and the usual 0/1 identities. Constant factors are
    /// moved to the left of products.
    pub fn simplify(&self) -> Expr {
        match self {
            Num(_) | T | Pi => self.clone(),
            Neg(a) => match a.simplify() {
                Num(0.0) => Num(0.0),
                Neg(inner) => *inner,
                s => Neg(b(s)),
            },
            Add(a, c) => match (a.simplify(), c.simplify()) {
                (Num(x), Num(y)) => Num(x + y),
                (Num(z), e) | (e, Num(z)) if z == 0.0 => e,
                (e, Neg(f)) => Sub(b(e), f),
                (x, y) => Add(b(x), b(y)),
            },
            Sub(a, c) => match (a.simplify(), c.simplify()) {
                (Num(x), Num(y)) => Num(x - y),
                (e, Num(0.0)) => e,
                (Num(0.0), e) => Neg(b(e)).simplify(),
                (e, Neg(f)) => Add(b(e), f),
                (x, y) => Sub(b(x), b(y)),
            },
            Mul(a, c) => {
                let (x, y) = (a.simplify(), c.simplify());
                match (x, y) {
                    (Num(x), Num(y)) => Num(x * y),
                    (Num(z), _) | (_, Num(z)) if z == 0.0 => Num(0.0),
                    (Num(o), e) | (e, Num(o)) if o == 1.0 => e,
                    (Neg(p), q) | (q, Neg(p)) => Neg(b(Mul(p, b(q)).simplify())).simplify(),
                    (e, Num(k)) => Mul(b(Num(k)), b(e)).simplify(),
                    (Num(k), Mul(p, q)) if p.as_num().is_some() => {
                        Mul(b(Num(k * p.as_num().unwrap())), q)
                    }
                    (x, y) => Mul(b(x), b(y)),
                }
            }
            Div(a, c) => match (a.simplify(), c.simplify()) {
                (Num(x), Num(y)) if y != 0.0 => Num(x / y),
                (Num(0.0), _) => Num(0.0),
                (e, Num(1.0)) => e,
                (x, y) => Div(b(x), b(y)),
            },
            Pow(a, n) => match (a.simplify(), *n) {
                (_, 0) => Num(1.0),
                (e, 1) => e,
                (Num(x), n) => Num(x.powi(n)),
                (e, n) => Pow(b(e), n),
            },
            Sin(a) => match a.simplify() {
                Num(x) => Num(x.sin()),
                e => Sin(b(e)),
            },
            Cos(a) => match a.simplify() {
                Num(x) => Num(x.cos()),
                e => Cos(b(e)),
            },
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Pow(..) => 3,
            // Negative literals print with a sign, like a unary minus.
            Neg(_) => 4,
            Num(v) if v.is_sign_negative() => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Num(v) => write!(f, "{v}"),
            T => f.write_str("t"),
            Pi => f.write_str("pi"),
            Neg(a) => {
                f.write_str("-")?;
                a.fmt_prec(f, 4)
            }
            Add(a, c) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                c.fmt_prec(f, 2)
            }
            Sub(a, c) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                c.fmt_prec(f, 2)
            }
            Mul(a, c) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
                c.fmt_prec(f, 3)
            }
            Div(a, c) => {
                a.fmt_prec(f, 2)?;
                f.write_str("/")?;
                c.fmt_prec(f, 3)
            }
            Pow(a, n) => {
                // the base binds at least as tightly as unary minus
                a.fmt_prec(f, 3)?;
                write!(f, "^{n}")
            }
            Sin(a) => {
                f.write_str("sin(")?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")
            }
            Cos(a) => {
                f.write_str("cos(")?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
