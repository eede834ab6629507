use regcurve::dsl::{parse_curve, sample_expr};
use regcurve::*;

const N: usize = 256;

fn fixture(name: &str) -> SampledCurve {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let file: CurveFile = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    file.into_curve().unwrap()
}

fn expr(src: &str, n: usize) -> SampledCurve {
    sample_expr(&parse_curve(src).unwrap(), n).unwrap()
}

fn assert_valid_path(path: &HomotopyPath, a: &SampledCurve, b: &SampledCurve) {
    let report = verify_homotopy(path).unwrap();
    assert!(report.pass, "{}", report.summary());
    let scale = a.scale().min(b.scale());
    assert!(path.first().max_deviation(a) < 1e-6 * scale);
    assert!(path.last().max_deviation(b) < 1e-6 * scale);
    let r = turning_number(a).unwrap();
    for f in path.frames() {
        assert_eq!(turning_number(f).unwrap(), r);
    }
}

#[test]
fn fixture_invariants() {
    assert_eq!(turning_number(&fixture("alpha_r2.json")).unwrap(), 2);
    let f = fixture("alpha_5l3r.json");
    let code = extract_turn_code(&f, Direction::new(1.0, 0.0).unwrap()).unwrap();
    assert_eq!((code.count(Letter::L), code.count(Letter::R)), (5, 3));
    assert_eq!(code_turning_number(&code).unwrap(), 1);
    assert_eq!(turning_number(&f).unwrap(), 1);
}

#[test]
fn flatten_keeps_turning_number() {
    let a = fixture("alpha_r2.json");
    let l = choose_generic_direction(&a, 64, 7).unwrap();
    let path = flatten_homotopy(&a, l).unwrap();
    assert!(path.frames().iter().all(|f| turning_number(f).unwrap() == 2));
    let code = extract_turn_code(path.last(), l).unwrap();
    assert_eq!(code.word(), extract_turn_code(&a, l).unwrap().word());
}

#[test]
fn fixture_to_gamma2_and_back() {
    let a = fixture("alpha_r2.json");
    let g = make_gamma(CanonicalIndex::GammaK(2), N).unwrap();
    let path = synthesize_homotopy(&a, &g).unwrap();
    assert_valid_path(&path, &a, &g);
    let back = path.reversed();
    assert!(verify_homotopy(&back).unwrap().pass);
    assert_eq!(back.first(), &g);
}

#[test]
fn figure_eight_and_its_reversal() {
    let g0 = make_gamma(CanonicalIndex::GammaK(0), N).unwrap();
    let g0p = make_gamma(CanonicalIndex::Gamma0Primed, N).unwrap();
    assert_valid_path(&synthesize_homotopy(&g0, &g0p).unwrap(), &g0, &g0p);
    // a perturbed figure-eight cannot take the rotation shortcut
    let a = expr("x = -sin(2*t) + 0.1*cos(t); y = -sin(t)", N);
    assert_valid_path(&synthesize_homotopy(&a, &g0).unwrap(), &a, &g0);
}

#[test]
fn mismatched_classes() {
    let g0 = make_gamma(CanonicalIndex::GammaK(0), N).unwrap();
    let g1 = make_gamma(CanonicalIndex::GammaK(1), N).unwrap();
    match synthesize_homotopy(&g0, &g1) {
        Err(CurveError::ClassMismatch { a, b }) => assert_eq!((a, b), (0, 1)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn assorted_curves_reach_their_canonical_curve() {
    let cases = [
        "x = sin(2*t) + 0.3*cos(t); y = sin(t) + 0.2*sin(3*t)",
        "x = cos(t) + 0.3*cos(2*t); y = sin(t) - 0.3*sin(2*t)",
        "x = cos(t) + 0.4*cos(3*t); y = sin(t) + 0.4*sin(3*t)",
        "x = cos(t) - 0.6*cos(4*t); y = sin(t) + 0.3*sin(2*t)",
        "x = 2*cos(t) + cos(3*t); y = sin(t) + 0.5*sin(5*t)",
        "x = cos(3*t) + 0.2*cos(t); y = sin(3*t) - 0.3*sin(2*t)",
    ];
    for src in cases {
        let a = expr(src, 512);
        let g = make_gamma(CanonicalIndex::GammaK(turning_number(&a).unwrap()), 512).unwrap();
        assert_valid_path(&synthesize_homotopy(&a, &g).unwrap(), &a, &g);
    }
}

#[test]
fn two_non_canonical_curves() {
    let a = fixture("alpha_5l3r.json");
    let b = expr("x = cos(t) - 0.6*cos(4*t); y = sin(t) + 0.3*sin(2*t)", N);
    let path = synthesize_homotopy(&a, &b).unwrap();
    assert_valid_path(&path, &a, &b);
}

#[test]
fn different_sample_counts_are_resampled() {
    let a = make_gamma(CanonicalIndex::GammaK(1), 128).unwrap();
    let b = fixture("alpha_5l3r.json");
    let path = synthesize_homotopy(&a, &b).unwrap();
    assert_eq!(path.first().len(), 256);
    assert!(verify_homotopy(&path).unwrap().pass);
}
