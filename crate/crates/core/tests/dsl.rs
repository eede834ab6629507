use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regcurve::dsl::{parse_curve, parse_expr, sample_expr, Expr};
use regcurve::{turning_number, CurveError};

pub const CORPUS: [&str; 20] = [
    "sin(t)",
    "cos(t)",
    "t^2",
    "t*t*t - 2*t",
    "sin(2*t)",
    "cos(3*t + 1)",
    "sin(t)^3",
    "cos(t)^2 - sin(t)^2",
    "(0.5 + cos(t))*cos(t)",
    "(0.5 + cos(t))*sin(t)",
    "sin(sin(t))",
    "cos(t^2/4)",
    "t^5/120 - t^3/6 + t",
    "-sin(-t) + 2^-2*t",
    "(t - pi)^4",
    "sin(t)*cos(2*t)*sin(3*t)",
    "3*sin(t)/2 - cos(t)/pi",
    "(1 + 0.3*cos(5*t))*sin(t)",
    "sin(cos(t) + t)^2",
    "2.5e-1*t^3 - 1e1*cos(t/3)",
];

/// Fourth-order centered difference.
fn fd(e: &Expr, t: f64) -> f64 {
    let h = 1e-3;
    (8.0 * (e.eval(t + h) - e.eval(t - h)) - (e.eval(t + 2.0 * h) - e.eval(t - 2.0 * h))) / (12.0 * h)
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for src in CORPUS {
        let e = parse_expr(src).unwrap();
        let d = e.derivative();
        for _ in 0..1000 {
            let t = rng.gen_range(-4.0..4.0);
            let (sym, num) = (d.eval(t), fd(&e, t));
            assert!(
                (sym - num).abs() <= 1e-6 * sym.abs().max(1.0),
                "{src} at t = {t}: {sym} vs {num}"
            );
        }
    }
}

#[test]
fn derivative_printing() {
    let d = |s: &str| parse_expr(s).unwrap().derivative().to_string();
    assert_eq!(d("sin(t)"), "cos(t)");
    assert_eq!(d("sin(2*t)"), "2*cos(2*t)");
    assert_eq!(d("t^2"), "2*t");
}

#[test]
fn examples_sample() {
    let c = sample_expr(&parse_curve("x = cos(t); y = sin(2*t)").unwrap(), 256).unwrap();
    assert_eq!(turning_number(&c).unwrap(), 0);
    let eight = sample_expr(&parse_curve("x = sin(2*t); y = sin(t)").unwrap(), 256).unwrap();
    assert_eq!(turning_number(&eight).unwrap(), 0);
    assert!(matches!(
        parse_curve("x = cos(q); y = t"),
        Err(CurveError::UnknownIdentifier { .. })
    ));
    assert!(matches!(
        sample_expr(&parse_curve("x = t; y = t").unwrap(), 64),
        Err(CurveError::NotClosed { .. })
    ));
}

const TOKENS: [&str; 24] = [
    "x", "y", "=", ";", "t", "pi", "sin", "cos", "(", ")", "+", "-", "*", "/", "^", "2", "0.5", "1e3",
    " ", "\n", "q", "1e", ".", "99999999999",
];

/// Parser must return, never panic, on arbitrary input.
#[test]
fn fuzzed_inputs_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    for i in 0..100_000 {
        let src: String = if i % 2 == 0 {
            let len = rng.gen_range(0..40);
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        } else {
            let len = rng.gen_range(0..30);
            (0..len).map(|_| TOKENS[rng.gen_range(0..TOKENS.len())]).collect()
        };
        let _ = parse_curve(&src);
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000).prop_map(|v| Expr::Num(v as f64 / 8.0)),
        Just(Expr::T),
        Just(Expr::Pi),
    ]
}

fn constant() -> impl Strategy<Value = Expr> {
    prop_oneof![(1u32..100).prop_map(|v| Expr::Num(v as f64)), Just(Expr::Pi)]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), constant()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 0i32..6).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            (constant(), -3i32..0).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            inner.clone().prop_map(|a| Expr::Sin(Box::new(a))),
            inner.prop_map(|a| Expr::Cos(Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn printing_round_trips(x in tree(), y in tree()) {
        let src = format!("x = {x}; y = {y}");
        let c = parse_curve(&src).unwrap();
        prop_assert_eq!(&c.x, &x);
        prop_assert_eq!(&c.y, &y);
        prop_assert_eq!(parse_curve(&c.to_string()).unwrap(), c);
    }
}
