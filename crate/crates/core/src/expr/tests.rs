use super::*;
use proptest::prelude::*;
use std::f64::consts::PI;

const CORPUS: [&str; 10] = [
    "t*exp(-t)",
    "sin(4*pi*t)",
    "3*x*exp(-x)",
    "exp(-x)*cos(3*pi*x)",
    "1/(1+t)",
    "exp(-(x-1)^2/5)/sqrt(5)",
    "exp(-1/(4*t+1))/sqrt(4*t+1)",
    "sinh(t)*cosh(2*t)",
    "t^3 - 2*t^2 + 0.5",
    "(1+t^2)^(-1.5)",
];

fn p(s: &str) -> Expression {
    parse(s).unwrap()
}

#[test]
fn parse_examples() {
    assert!((p("sin(4*pi*t)").eval(0.125).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(p("t*exp(-t)").eval(0.0).unwrap(), 0.0);
    assert_eq!(p("1/(1+t)").eval(1.0).unwrap(), 0.5);
    let g = p("exp(-(x-1)^2/(4*1+1))/sqrt(4*1+1)").eval(-1.0).unwrap();
    assert!((g - (-0.8f64).exp() / 5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn parse_errors() {
    match parse("3*x*exp(-x") {
        Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 10),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse("foo(t)"), Err(ExprError::UnknownIdentifier { .. })));
    assert!(matches!(parse("t + q"), Err(ExprError::UnknownIdentifier { .. })));
    assert!(matches!(parse("x + t"), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse("   "), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse("t^t"), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse("2 $ 3"), Err(ExprError::Syntax { offset: 2, .. })));
}

#[test]
fn parse_precedence() {
    assert_eq!(p("-2^2").eval(0.0).unwrap(), -4.0);
    assert_eq!(p("2^3^2").eval(0.0).unwrap(), 512.0);
    assert_eq!(p("8/2/2").eval(0.0).unwrap(), 2.0);
    assert_eq!(p("1 - 2 - 3").eval(0.0).unwrap(), -4.0);
    assert_eq!(p("2**3").eval(0.0).unwrap(), 8.0);
    assert_eq!(p("1.5e2 + 2E-1").eval(0.0).unwrap(), 150.2);
    assert_eq!(p("x*-1").eval(3.0).unwrap(), -3.0);
    assert_eq!(p("t").var(), "t");
    assert_eq!(p("3*x").var(), "x");
}

#[test]
fn eval_domain_errors() {
    assert!(matches!(p("1/(1+t)").eval(-1.0), Err(ExprError::Domain(_))));
    assert!(p("sqrt(t)").eval(-1.0).is_err());
    assert!(p("t^0.5").eval(-1.0).is_err());
    assert!(p("t^(-2)").eval(0.0).is_err());
    assert_eq!(p("t^2").eval(-3.0).unwrap(), 9.0);
}

#[test]
fn derivative_examples() {
    let f = p("t*exp(-t)");
    for n in 0..12usize {
        let d = f.differentiate(n).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        // f^(n)(0) = -(-1)^n n
        assert!((d.eval(0.0).unwrap() + sign * n as f64).abs() < 1e-12);
        for &t in &[0.3, 1.0, 2.5] {
            let expected = sign * (-t as f64).exp() * (t - n as f64);
            assert!((d.eval(t).unwrap() - expected).abs() < 1e-12 * (1.0 + expected.abs()));
        }
    }
    let g = p("sin(4*pi*t)").differentiate(1).unwrap();
    for &t in &[0.0, 0.1, 0.37] {
        assert!((g.eval(t).unwrap() - 4.0 * PI * (4.0 * PI * t).cos()).abs() < 1e-12);
    }
}

#[test]
fn order_limit() {
    assert!(matches!(p("t").differentiate(201), Err(ExprError::OrderLimit { .. })));
    assert!(matches!(p("t").derivatives(0.0, 201), Err(ExprError::OrderLimit { .. })));
    let cache = DerivativeCache::with_max_order(p("t^2"), 5);
    assert!(cache.get(6).is_err());
    assert_eq!(cache.get(2).unwrap().as_const(), Some(2.0));
    assert_eq!(cache.get(3).unwrap().as_const(), Some(0.0));
}

#[test]
fn derivative_growth_is_modest() {
    let f = p("t*exp(-t)");
    let d = f.differentiate(100).unwrap();
    assert!(d.node_count() < 2000, "nodes = {}", d.node_count());
    let s = p("exp(-t)*cos(3*pi*t)").differentiate(60).unwrap();
    assert!(s.node_count() < 20_000, "nodes = {}", s.node_count());
}

#[test]
fn jets_match_symbolic() {
    for src in CORPUS {
        let e = p(src);
        let d = e.derivatives(0.7, 10).unwrap();
        for (k, dk) in d.iter().enumerate() {
            let sym = e.differentiate(k).unwrap().eval(0.7).unwrap();
            assert!((dk - sym).abs() <= 1e-10 * (1.0 + sym.abs()), "{src} k={k}: {dk} vs {sym}");
        }
    }
}

#[test]
fn high_order_jets() {
    // f^(n)(t) = (-1)^n e^{-t} (t - n) through order 200
    let e = p("t*exp(-t)");
    let t = 0.5;
    let d = e.derivatives(t, 200).unwrap();
    for (n, dn) in d.iter().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let exact = sign * (-t as f64).exp() * (t - n as f64);
        assert!((dn - exact).abs() < 1e-10 * exact.abs().max(1.0), "n={n}");
    }
    // sin(4 pi t): derivatives (4 pi)^n sin(4 pi t + n pi/2)
    let s = p("sin(4*pi*t)").derivatives(0.3, 150).unwrap();
    for (n, dn) in s.iter().enumerate() {
        let w = 4.0 * PI;
        let exact = w.powi(n as i32) * (w * 0.3 + n as f64 * PI / 2.0).sin();
        assert!((dn - exact).abs() < 1e-9 * w.powi(n as i32), "n={n}");
    }
}

#[test]
fn jet_of_power_at_zero() {
    let e = p("t^3");
    let d = e.derivatives(0.0, 5).unwrap();
    assert_eq!(d, vec![0.0, 0.0, 0.0, 6.0, 0.0, 0.0]);
    assert!(p("t^0.5").derivatives(0.0, 2).is_err());
}

#[test]
fn complex_evaluation() {
    let e = p("2*exp(-x)*cos(x)");
    let z = Complex64::new(0.3, -0.4);
    let expected = 2.0 * (-z).exp() * z.cos();
    assert!((e.eval_complex(z).unwrap() - expected).norm() < 1e-15);
    assert!(p("sqrt(1+x^2)").eval_complex(z).is_err());
    assert!(!p("x^1.5").supports_complex());
    assert!(p("x^(-2)*sinh(x)").supports_complex());
}

#[test]
fn print_examples() {
    let e = p("-(x-1)^2/(4*t0)".replace("t0", "2").as_str());
    let back = p(&e.to_string());
    assert_eq!(e.eval(0.3).unwrap(), back.eval(0.3).unwrap());
    assert_eq!(p("3*x*exp(-x)").to_string(), "3.0*(x*exp(-x))");
}

fn finite_difference_check(src: &str, k: usize, t: f64) {
    let e = p(src);
    let dk = e.differentiate(k).unwrap();
    let dkm = e.differentiate(k - 1).unwrap();
    let h = 1e-5;
    let fd = (dkm.eval(t + h).unwrap() - dkm.eval(t - h).unwrap()) / (2.0 * h);
    let exact = dk.eval(t).unwrap();
    let scale = [t - 0.2, t, t + 0.2]
        .iter()
        .map(|&s| dk.eval(s).map(f64::abs).unwrap_or(0.0))
        .fold(1e-3, f64::max);
    assert!((fd - exact).abs() <= 1e-6 * scale, "{src} k={k} t={t}: fd={fd} exact={exact}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_matches_finite_difference(idx in 0usize..CORPUS.len(), k in 1usize..=8, t in 0.1f64..2.0) {
        finite_difference_check(CORPUS[idx], k, t);
    }

    #[test]
    fn derivative_composes(idx in 0usize..CORPUS.len(), j in 0usize..4, k in 0usize..4, t in 0.1f64..2.0) {
        let e = p(CORPUS[idx]);
        let a = e.differentiate(j + k).unwrap().eval(t).unwrap();
        let b = e.differentiate(j).unwrap().differentiate(k).unwrap().eval(t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn print_roundtrip(idx in 0usize..CORPUS.len(), k in 0usize..4, t in 0.1f64..2.0) {
        let e = p(CORPUS[idx]).differentiate(k).unwrap();
        let back = parse(&e.to_string()).unwrap();
        let a = e.eval(t).unwrap();
        let b = back.eval(t).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * (1.0 + a.abs()), "{} -> {}", e, back);
    }

    #[test]
    fn cache_entries_differentiate_previous(idx in 0usize..CORPUS.len(), k in 1usize..6, t in 0.2f64..1.8) {
        let cache = DerivativeCache::new(p(CORPUS[idx]));
        let h = 1e-5;
        let prev = cache.get(k - 1).unwrap();
        let fd = (prev.eval(t + h).unwrap() - prev.eval(t - h).unwrap()) / (2.0 * h);
        let exact = cache.get(k).unwrap().eval(t).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()));
    }
}
