use super::*;

use proptest::prelude::*;
use std::f64::consts::PI;

fn e(s: &str) -> Expression {
    Expression::parse(s).unwrap()
}

fn solver(spec: ProblemSpec) -> Solver {
    Solver::new(spec, Options::default()).unwrap()
}

const GAUSS_U0: &str = "exp(-(x-1)^2)";
const GAUSS_F0: &str = "exp(-1/(4*t+1))/sqrt(4*t+1)";
const GAUSS_G0: &str = "1/sqrt(4*t+1)";

fn heat_gaussian() -> ProblemSpec {
    ProblemSpec::new(ProblemKind::HeatDirichlet, e(GAUSS_U0)).with_f0(e(GAUSS_F0))
}

fn heat_texp() -> ProblemSpec {
    ProblemSpec::new(ProblemKind::HeatDirichlet, e(GAUSS_U0)).with_f0(e("t*exp(-t)"))
}

fn interval_gaussian() -> ProblemSpec {
    ProblemSpec::new(ProblemKind::HeatFiniteInterval, e(GAUSS_U0))
        .with_f0(e(GAUSS_F0))
        .with_g0(e(GAUSS_G0))
        .with_length(1.0)
}

fn advected(c: f64) -> ProblemSpec {
    let f0 = format!("exp(-{}*t^2/(4*t+1))/sqrt(4*t+1)", c * c);
    ProblemSpec::new(ProblemKind::AdvectedHeat, e("exp(-x^2)")).with_f0(e(&f0)).with_speed(c)
}

fn kdv1() -> ProblemSpec {
    ProblemSpec::new(ProblemKind::KdvOneBc, e("2*exp(-x)*cos(x)"))
        .with_f0(e("2*exp(-2*t)*cos(2*t)"))
        .with_decay(DecayClass::Exponential(1.0))
}

fn kdv2_u0() -> Expression {
    e("2*exp(-sqrt(3)*x)*cos(x)")
}

fn kdv2() -> ProblemSpec {
    ProblemSpec::new(ProblemKind::KdvTwoBc, kdv2_u0())
        .with_f0(e("2*cos(8*t)"))
        .with_f1(e("-2*(sqrt(3)*cos(8*t)+sin(8*t))"))
        .with_decay(DecayClass::Exponential(3f64.sqrt()))
}

/// Composite Simpson rule on [a, b] with n (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for j in 1..n {
        acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(a + j as f64 * h);
    }
    acc * h / 3.0
}

/// Finite-difference weights for derivatives 0..=m at `z` on `xs`.
fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// One-sided derivatives of order 0..=3 at 0 from the side `sign`.
fn one_sided(s: &Solver, t: f64, sign: f64, delta: f64) -> Vec<f64> {
    let xs: Vec<f64> = (0..8).map(|j| sign * j as f64 * delta).collect();
    let w = fd_weights(0.0, &xs, 3);
    let u: Vec<f64> = xs.iter().map(|&x| s.extended(x, t).unwrap()).collect();
    (0..=3).map(|k| xs.iter().enumerate().map(|(i, _)| w[i][k] * u[i]).sum()).collect()
}

#[test]
fn fd_weights_reproduce_polynomials() {
    let xs = [0.0, 0.1, 0.2, 0.3, 0.4];
    let w = fd_weights(0.0, &xs, 3);
    let p = |x: f64| 1.0 + 2.0 * x - x * x + 0.5 * x * x * x;
    let d: Vec<f64> = (0..=3).map(|k| xs.iter().enumerate().map(|(i, &x)| w[i][k] * p(x)).sum()).collect();
    for (got, want) in d.iter().zip([1.0, 2.0, -2.0, 3.0]) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}

#[test]
fn zero_data_gives_zero_parts() {
    let spec = ProblemSpec::new(ProblemKind::HeatDirichlet, Expression::zero()).with_f0(Expression::zero());
    let s = solver(spec);
    assert_eq!(s.boundary_integral(Datum::F0, 0.7, 0.5).unwrap(), 0.0);
    assert!(s.i0(0.7, 0.5).unwrap().abs() < 1e-14);
    assert!(s.extended(-0.7, 0.5).unwrap().abs() < 1e-14);
}

#[test]
fn heat_recovers_whole_line_solution() {
    let s = solver(heat_gaussian());
    let want = (-0.8f64).exp() / 5f64.sqrt();
    assert!((s.extended(-1.0, 1.0).unwrap() - want).abs() < 1e-9);
    let want = (-0.2f64).exp() / 5f64.sqrt();
    assert!((s.extended(2.0, 1.0).unwrap() - want).abs() < 1e-9);
}

#[test]
fn method_of_images_for_exponential_data() {
    let spec = ProblemSpec::new(ProblemKind::HeatDirichlet, e("exp(-x)")).with_f0(Expression::zero());
    let s = solver(spec);
    let (x, t) = (0.5, 0.25);
    let g = |z: f64| (-z * z / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
    let oracle = simpson(|y| (g(x - y) - g(x + y)) * (-y).exp(), 0.0, 40.0, 40_000);
    assert!((s.i0(x, t).unwrap() - oracle).abs() < 1e-10);
    assert!((s.extended(-x, t).unwrap() + oracle).abs() < 1e-10);
}

#[test]
fn boundary_integral_tends_to_datum_at_the_boundary() {
    let s = solver(heat_texp());
    let t = 0.7;
    let want = t * (-t as f64).exp();
    assert_eq!(s.boundary_integral(Datum::F0, 0.0, t).unwrap(), want);
    let near = s.boundary_integral(Datum::F0, 1e-6, t).unwrap();
    assert!((near - want).abs() < 1e-5, "{near} vs {want}");
    let nearer = s.boundary_integral(Datum::F0, 1e-8, t).unwrap();
    assert!((nearer - want).abs() < (near - want).abs());
}

#[test]
fn boundary_integral_refuses_negative_x() {
    let s = solver(heat_texp());
    assert!(matches!(s.boundary_integral(Datum::F0, -0.5, 1.0), Err(ContinuousError::OutsideWedge { .. })));
}

#[test]
fn heat_tilde_closed_form() {
    let s = solver(heat_texp());
    for t in [0.1, 1.0] {
        let ext = s.extension(Datum::F0, t, 5.0).unwrap();
        for i in 0..=20 {
            let x = -5.0 + 0.5 * i as f64;
            let want = (-t as f64).exp() * (2.0 * t * x.cos() + x * x.sin());
            assert!((ext.tilde(x) - want).abs() < 1e-10, "t={t} x={x}");
        }
    }
}

#[test]
fn constant_datum_doubles() {
    let spec = ProblemSpec::new(ProblemKind::HeatDirichlet, e(GAUSS_U0)).with_f0(Expression::constant(1.5));
    let s = solver(spec);
    let ext = s.taylor_coefficients(Datum::F0, 0.8, 12).unwrap();
    assert_eq!(ext.coefficients[0], 1.5);
    for n in 1..=12 {
        assert_eq!(ext.coefficients[2 * n], 0.0);
    }
    assert!((ext.tilde(-2.3) - 3.0).abs() < 1e-15);
}

#[test]
fn heat_series_matches_quadrature_for_positive_x() {
    // The full series (odd terms included) reproduces the boundary integral,
    // so I(x) + I(-x) = tilde(x) holds with both sides computed for x > 0.
    let s = solver(heat_texp());
    let t = 0.6;
    let ext = s.extension(Datum::F0, t, 3.0).unwrap();
    for x in [0.25, 1.0, 2.0, 2.9] {
        let quad = s.boundary_integral(Datum::F0, x, t).unwrap();
        assert!((ext.series(x) - quad).abs() < 1e-8, "x={x}: {} vs {quad}", ext.series(x));
        let reflected = ext.tilde(x) - ext.series(-x);
        assert!((reflected - quad).abs() < 1e-8);
    }
}

#[test]
fn truncation_converges() {
    let s = solver(heat_texp());
    let t = 1.0;
    let ext = s.extension(Datum::F0, t, 3.0).unwrap();
    let more = s.taylor_coefficients(Datum::F0, t, ext.order + 10).unwrap();
    for x in [-3.0, -1.0, 2.0] {
        assert!((ext.tilde(x) - more.tilde(x)).abs() < 1e-10);
    }
}

#[test]
fn interior_agreement() {
    let s = solver(heat_texp());
    for x in [0.3, 1.7] {
        let parts = s.i0(x, 0.5).unwrap() + s.boundary_integral(Datum::F0, x, 0.5).unwrap();
        assert!((s.extended(x, 0.5).unwrap() - parts).abs() < 10.0 * s.options().tol);
    }
}

#[test]
fn boundary_recovery() {
    for spec in [heat_texp(), advected(-1.0), interval_gaussian()] {
        let s = solver(spec.clone());
        let f = spec.datum(Datum::F0).unwrap();
        for t in [0.1, 0.5, 1.0] {
            assert!((s.extended(0.0, t).unwrap() - f.eval(t).unwrap()).abs() < 1e-8);
        }
    }
    let s = solver(interval_gaussian());
    assert_eq!(s.extended(1.0, 0.5).unwrap(), 1.0 / 3f64.sqrt());
}

#[test]
fn heat_pde_residual_on_both_sides() {
    let s = solver(heat_texp());
    let t = 0.5;
    for x in [-1.2, 0.8] {
        let res = |d: f64| {
            let ut = (s.extended(x, t + d).unwrap() - s.extended(x, t - d).unwrap()) / (2.0 * d);
            let uxx = (s.extended(x + d, t).unwrap() - 2.0 * s.extended(x, t).unwrap() + s.extended(x - d, t).unwrap())
                / (d * d);
            (ut - uxx).abs()
        };
        let (r1, r2) = (res(0.04), res(0.02));
        assert!(r1 < 1e-2, "x={x}: {r1}");
        assert!(r2 < r1 / 3.0 && r2 > r1 / 5.0, "x={x}: {r1} {r2}");
    }
}

#[test]
fn heat_extension_glues_smoothly() {
    // incompatible corner data, yet for t > 0 the extension is analytic at 0
    let s = solver(heat_texp());
    let left = one_sided(&s, 0.5, -1.0, 0.02);
    let right = one_sided(&s, 0.5, 1.0, 0.02);
    for k in 0..=3 {
        assert!((left[k] - right[k]).abs() < 1e-5, "order {k}: {} vs {}", left[k], right[k]);
    }
}

#[test]
fn interval_fourier_and_contour_agree() {
    let s = solver(interval_gaussian());
    for x in [0.1, 0.5, 1.3, 1.9] {
        let a = s.boundary_integral(Datum::F0, x, 1.0).unwrap();
        let b = s.boundary_integral_contour(Datum::F0, x, 1.0).unwrap();
        assert!((a - b).abs() < 1e-8, "x={x}: {a} vs {b}");
    }
}

#[test]
fn interval_recovers_whole_line_solution() {
    let s = solver(interval_gaussian());
    for x in [-0.7, 0.4, 1.6] {
        let want = ReferenceSolution::GaussianDrift.eval(x, 1.0).unwrap();
        assert!((s.extended(x, 1.0).unwrap() - want).abs() < 1e-7, "x={x}");
    }
    assert!(matches!(s.extended(5.5, 1.0), Err(ContinuousError::Domain(_))));
}

#[test]
fn advected_series_matches_gauge_form() {
    for c in [-1.0, 0.5] {
        let spec = advected(c);
        let s = solver(spec.clone());
        let f = spec.datum(Datum::F0).unwrap();
        let ext = s.taylor_coefficients(Datum::F0, 1.0, 8).unwrap();
        for x in [-0.4, 0.3] {
            let gauge = advected::gauge_tilde(f, c, x, 1.0, *s.options()).unwrap();
            assert!((ext.tilde(x) - gauge).abs() < 1e-8, "c={c} x={x}: {} vs {gauge}", ext.tilde(x));
        }
        let quad = s.boundary_integral(Datum::F0, 0.3, 1.0).unwrap();
        assert!((ext.series(0.3) - quad).abs() < 1e-8);
    }
}

#[test]
fn advected_recovers_whole_line_solution() {
    for c in [1.0, -1.0] {
        let s = solver(advected(c));
        let r = ReferenceSolution::AdvectedGaussian { c };
        for x in [-1.5, 0.7] {
            assert!((s.extended(x, 1.0).unwrap() - r.eval(x, 1.0).unwrap()).abs() < 1e-6, "c={c} x={x}");
        }
    }
}

#[test]
fn advected_limit_matches_time_zero_series() {
    // At t = 0 the gauge form reduces to e^{-cx/2} times the even tilde of
    // e^{c^2 s/4} f(s), a plain power series in x.
    let spec = advected(1.0);
    let s = solver(spec.clone());
    let g = spec.datum(Datum::F0).unwrap().times_exp(0.25);
    for x in [-1.5, -0.5] {
        let closed = (-x / 2.0f64).exp() * heat::even_tilde(&g, x, 0.0, *s.options()).unwrap();
        assert!((s.advected_tilde_limit(x).unwrap() - closed).abs() < 1e-6, "x={x}");
    }
}

#[test]
fn kdv1_tilde_at_time_zero() {
    let spec = ProblemSpec::new(ProblemKind::KdvOneBc, Expression::zero())
        .with_f0(e("t*exp(-t)"))
        .with_decay(DecayClass::Exponential(1.0));
    let s = solver(spec);
    let s3 = 3f64.sqrt();
    for i in 0..=8 {
        let x = -3.0 + 0.5 * i as f64;
        let want = -x * x.exp() / 3.0 + 2.0 / 3.0 * x * (-x / 2.0).exp() * (s3 * x / 2.0 + PI / 6.0).sin();
        let got = s.tilde_at_zero_time(Datum::F0, x).unwrap();
        assert!((got - want).abs() < 1e-8, "x={x}: {got} vs {want}");
        assert!((3.0 * kdv1_series(x) - want).abs() < 1e-8, "x={x}");
        if x < 0.0 {
            assert_eq!(s.boundary_to_initial(x).unwrap(), got);
        }
    }
}

/// sum (-1)^m f^(m)(0) x^(3m)/(3m)! with f^(m)(0) = -(-1)^m m, the oracle series.
fn kdv1_series(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut term = 1.0;
    for m in 0..60usize {
        if m > 0 {
            let k = 3 * m;
            term *= x * x * x / ((k - 2) * (k - 1) * k) as f64;
        }
        acc += -(m as f64) * term;
    }
    acc
}

#[test]
fn kdv1_rejects_non_analytic_data() {
    let spec = ProblemSpec::new(ProblemKind::KdvOneBc, e("exp(-x)*sqrt(x^2+1)"))
        .with_f0(e("t"))
        .with_decay(DecayClass::Exponential(1.0));
    assert!(matches!(solver(spec).boundary_to_initial(-1.0), Err(ContinuousError::NotAnalytic(_))));
}

#[test]
fn kdv1_recovers_one_point() {
    let s = solver(kdv1());
    let want = 2.0 * (-1.5f64).exp() * (-2.5f64).cos();
    assert!((s.extended(-0.5, 1.0).unwrap() - want).abs() < 1e-6);
}

#[test]
fn kdv2_structural_zeros() {
    let s = solver(kdv2());
    let a = s.taylor_coefficients(Datum::F0, 0.7, 10).unwrap();
    let b = s.taylor_coefficients(Datum::F1, 0.7, 10).unwrap();
    for n in 1..=10 {
        assert_eq!(a.coefficients[3 * n - 2], 0.0);
    }
    for n in 0..=10 {
        assert_eq!(b.coefficients[3 * n], 0.0);
    }
    assert!(a.coefficients[2] != 0.0 && b.coefficients[2] != 0.0);
}

#[test]
fn kdv2_recovers_whole_line_solution() {
    let s = solver(kdv2());
    for x in [-0.8, 0.0, 0.6] {
        let want = ReferenceSolution::Kdv2ExpCos.eval(x, 1.0).unwrap();
        assert!((s.extended(x, 1.0).unwrap() - want).abs() < 1e-6, "x={x}");
    }
}

#[test]
fn kdv2_reflection_signs() {
    // I_f0 continues with minus reflection and I_f1 with plus reflection.
    let s = solver(kdv2());
    let t = 0.4;
    for d in [Datum::F0, Datum::F1] {
        let ext = s.extension(d, t, 1.5).unwrap();
        let x = 1.2;
        let sign = if d == Datum::F0 { 1.0 } else { -1.0 };
        let mirror = s.boundary_integral(d, x, t).unwrap();
        assert!((ext.tilde(x) - sign * ext.series(-x) - mirror).abs() < 1e-9);
        assert!((s.boundary_extended(d, -x, t).unwrap() - ext.series(-x)).abs() < 1e-9);
    }
}

#[test]
fn kdv2_refuses_incompatible_map() {
    let spec = ProblemSpec::new(ProblemKind::KdvTwoBc, kdv2_u0())
        .with_f0(Expression::zero())
        .with_f1(Expression::zero())
        .with_decay(DecayClass::Exponential(3f64.sqrt()));
    let s = solver(spec.clone());
    assert!(matches!(s.boundary_to_initial(-1.0), Err(ContinuousError::Incompatible { order: 0, .. })));
    let res = check_compatibility(&spec, 2).unwrap();
    assert_eq!(res[0].residual, 2.0);
    assert!(s.boundary_to_initial(-1.0).is_err());
}

#[test]
fn heat_map_for_texp_datum() {
    let s = solver(heat_texp());
    // tilde f0(x, 0) = x sin x
    let want = 2.0 * 2f64.sin() - (-1.0f64).exp();
    assert!((s.boundary_to_initial(-2.0).unwrap() - want).abs() < 1e-12);
    assert_eq!(s.boundary_to_initial(1.5).unwrap(), (-0.25f64).exp());
}

#[test]
fn homogeneous_map_is_odd_image() {
    let spec = ProblemSpec::new(ProblemKind::HeatDirichlet, e(GAUSS_U0)).with_f0(Expression::zero());
    let s = solver(spec);
    for x in [0.3, 2.0] {
        assert_eq!(s.boundary_to_initial(-x).unwrap(), -s.boundary_to_initial(x).unwrap());
    }
}

#[test]
fn compatibility_residuals() {
    let ok = check_compatibility(&heat_gaussian(), 4).unwrap();
    assert!(ok.iter().all(|r| r.residual < 1e-9));
    assert!(compatible_to(&ok, 4));
    let bad = check_compatibility(&heat_texp(), 2).unwrap();
    let order1 = bad.iter().find(|r| r.order == 1).unwrap();
    // u0''(0) = 2 e^{-1}, f0'(0) = 1
    assert!((order1.residual - (1.0 - 2.0 * (-1.0f64).exp()).abs()).abs() < 1e-12);
    assert!(!compatible_to(&bad, 1));
}

#[test]
fn named_references() {
    assert_eq!(reference_whole_line("gaussian-drift", 1.0, 0.0).unwrap(), 1.0);
    assert_eq!(reference_whole_line("kdv-decaying-cos", 0.0, 0.0).unwrap(), 2.0);
    assert!(matches!(reference_whole_line("nope", 0.0, 0.0), Err(ContinuousError::UnknownReference(_))));
    let spec = ProblemSpec::new(ProblemKind::Transport, e("exp(-x)")).with_f0(e("sin(t)")).with_speed(2.0);
    let r = ReferenceSolution::for_problem("transport-dalembert", &spec).unwrap();
    assert_eq!(r.eval(1.0, 3.0).unwrap(), (3.0f64 - 0.5).sin());
}

#[test]
fn references_solve_their_equations() {
    let (x, t, d) = (0.4, 0.7, 1e-3);
    let fd = |r: &ReferenceSolution, k: usize| -> (f64, f64) {
        let u = |x: f64, t: f64| r.eval(x, t).unwrap();
        let ut = (u(x, t + d) - u(x, t - d)) / (2.0 * d);
        let ux = match k {
            1 => (u(x + d, t) - u(x - d, t)) / (2.0 * d),
            2 => (u(x + d, t) - 2.0 * u(x, t) + u(x - d, t)) / (d * d),
            _ => (u(x + 2.0 * d, t) - 2.0 * u(x + d, t) + 2.0 * u(x - d, t) - u(x - 2.0 * d, t)) / (2.0 * d * d * d),
        };
        (ut, ux)
    };
    let (ut, uxx) = fd(&ReferenceSolution::GaussianDrift, 2);
    assert!((ut - uxx).abs() < 1e-5);
    let (ut, uxxx) = fd(&ReferenceSolution::KdvDecayingCos, 3);
    assert!((ut + uxxx).abs() < 1e-4);
    let (ut, uxxx) = fd(&ReferenceSolution::Kdv2ExpCos, 3);
    assert!((ut - uxxx).abs() < 1e-3 * uxxx.abs().max(1.0));
    let r = ReferenceSolution::AdvectedGaussian { c: -1.0 };
    let (ut, uxx) = fd(&r, 2);
    let (_, ux) = fd(&r, 1);
    assert!((ut - uxx + ux).abs() < 1e-5);
}

#[test]
fn neumann_recovers_even_image() {
    // even data about 0 with zero flux: the continuation is the even image
    let spec = ProblemSpec::new(ProblemKind::HeatNeumann, e("exp(-x^2)")).with_f1(Expression::zero());
    let s = solver(spec);
    for x in [0.4, 1.5] {
        let want = (-x * x / 3.0f64).exp() / 3f64.sqrt();
        assert!((s.extended(x, 0.5).unwrap() - want).abs() < 1e-9);
        assert!((s.extended(-x, 0.5).unwrap() - want).abs() < 1e-9);
    }
}

#[test]
fn neumann_recovers_shifted_gaussian() {
    let f1 = "2*exp(-1/(4*t+1))/(4*t+1)^1.5";
    let spec = ProblemSpec::new(ProblemKind::HeatNeumann, e(GAUSS_U0)).with_f1(e(f1));
    let s = solver(spec);
    for x in [-1.0, 0.5] {
        let want = ReferenceSolution::GaussianDrift.eval(x, 1.0).unwrap();
        assert!((s.extended(x, 1.0).unwrap() - want).abs() < 1e-8, "x={x}");
    }
}

#[test]
fn problem_kind_round_trip() {
    for kind in ProblemKind::ALL {
        assert_eq!(kind.as_str().parse::<ProblemKind>().unwrap(), kind);
    }
    assert!("heat".parse::<ProblemKind>().is_err());
}

#[test]
fn spec_validation() {
    assert!(Solver::new(ProblemSpec::new(ProblemKind::HeatDirichlet, e(GAUSS_U0)), Options::default()).is_err());
    assert!(Solver::new(heat_gaussian(), Options::default().with_tol(0.0)).is_err());
    assert!(solver(heat_gaussian()).extended(1.0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn homogeneous_dirichlet_is_odd(center in 0.5f64..2.0, x in 0.1f64..2.0, t in 0.2f64..1.0) {
        let spec = ProblemSpec::new(ProblemKind::HeatDirichlet, e(&format!("exp(-(x-{center})^2)")))
            .with_f0(Expression::zero());
        let s = solver(spec);
        let (a, b) = (s.extended(x, t).unwrap(), s.extended(-x, t).unwrap());
        prop_assert!((a + b).abs() < 1e-12);
    }

    #[test]
    fn constant_datum_tilde_is_twice_constant(k in -5.0f64..5.0, x in -4.0f64..4.0, t in 0.1f64..2.0) {
        let spec = ProblemSpec::new(ProblemKind::HeatDirichlet, e(GAUSS_U0)).with_f0(Expression::constant(k));
        let s = solver(spec);
        let ext = s.extension(Datum::F0, t, x).unwrap();
        prop_assert!((ext.tilde(x) - 2.0 * k).abs() < 1e-14 * k.abs().max(1.0));
    }

    #[test]
    fn kdv2_zeros_for_polynomial_data(a in -2.0f64..2.0, b in -2.0f64..2.0, t in 0.1f64..1.0) {
        let f = format!("{a} + {b}*t + t^3");
        let spec = ProblemSpec::new(ProblemKind::KdvTwoBc, kdv2_u0())
            .with_f0(e(&f))
            .with_f1(e(&f))
            .with_decay(DecayClass::Exponential(3f64.sqrt()));
        let s = solver(spec);
        let ea = s.taylor_coefficients(Datum::F0, t, 5).unwrap();
        let eb = s.taylor_coefficients(Datum::F1, t, 5).unwrap();
        for n in 1..=5 {
            prop_assert_eq!(ea.coefficients[3 * n - 2], 0.0);
            prop_assert_eq!(eb.coefficients[3 * n], 0.0);
        }
    }

    #[test]
    fn heat_map_is_tilde_minus_image(x in 0.1f64..3.0) {
        let s = solver(heat_texp());
        let u0 = e(GAUSS_U0);
        let want = x * x.sin() - u0.eval(x).unwrap();
        prop_assert!((s.boundary_to_initial(-x).unwrap() - want).abs() < 1e-12);
    }
}
