//! Linear KdV on the half-line: u_t + u_xxx = 0 with one boundary condition
//! and u_t = u_xxx with two.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

use num_complex::Complex64;

use super::kgrid::{data_extent, discretize, Envelope, ExpSum};
use super::taylor::{datum_series, fractional_brackets, jet, radius_estimate, scaled_values, Parity, TaylorExtension};
use super::{ContinuousError, Datum, Options, ProblemSpec, Result, Solver};
use crate::expr::Expression;
use crate::quad::{adaptive, AdaptOptions, ContourPath, Piece};
use crate::specfun::{airy_ai, gamma};

type C = Complex64;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

fn alpha() -> C {
    C::from_polar(1.0, 2.0 * PI / 3.0)
}

/// One contour contribution: int e^{i rho k x} E(k) weight u0^(arg_scale k) dk.
struct Part {
    pieces: Vec<Piece>,
    arg_scale: C,
    weight: C,
    rho: C,
}

impl Solver {
    fn kdv_sum(&self, t: f64, xs: f64, parts: &[Part], phase: impl Fn(C) -> C, beta: f64) -> Result<ExpSum> {
        let (ybar, amp) = data_extent(&self.spec.u0, beta);
        let log_amp = amp.ln();
        let i = C::new(0.0, 1.0);
        let mut sum = ExpSum::default();
        for part in parts {
            let rho = part.rho;
            let log_env = |k: C| phase(k).re + (rho * k).im.abs() * xs + log_amp;
            let rate = |k: C| xs + ybar + 3.0 * k.norm_sqr() * t;
            let env = Envelope { log_env: &log_env, rate: &rate, log_cut: (self.tol() * 1e-3).ln() };
            let path = ContourPath::new(part.pieces.clone());
            for node in discretize(&path, &env) {
                let k = node.k;
                let uh = self.u0_hat(part.arg_scale * k)?;
                let coef = node.w * part.weight * phase(k).exp() * uh / (2.0 * PI);
                sum.push(i * rho * k, coef);
            }
        }
        Ok(sum)
    }

    /// u_t + u_xxx = 0: horizontal line Im k = eps plus the four deformed
    /// pieces carrying u0^(alpha k), u0^(alpha^2 k) and the rotated phases.
    pub(super) fn kdv1_i0_sum(&self, t: f64, xs: f64) -> Result<ExpSum> {
        let eps = 1f64.min(1.0 / t.sqrt()).min(self.spec.decay_rate() / 2.0);
        let a = alpha();
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        let ie = C::new(0.0, eps);
        let left = C::new(-1.0, 0.0);
        let up_right = vec![Piece::Segment { a: zero, b: ie }, Piece::Ray { start: ie, dir: one }];
        let parts = [
            Part {
                pieces: vec![Piece::RayIn { end: ie, dir: left }, Piece::Ray { start: ie, dir: one }],
                arg_scale: one,
                weight: one,
                rho: one,
            },
            Part {
                pieces: vec![Piece::RayIn { end: ie, dir: left }, Piece::Segment { a: ie, b: zero }],
                arg_scale: a,
                weight: a,
                rho: one,
            },
            Part { pieces: up_right.clone(), arg_scale: a * a, weight: a * a, rho: one },
            Part { pieces: up_right, arg_scale: one, weight: -one, rho: a },
            Part {
                pieces: vec![Piece::Segment { a: zero, b: ie }, Piece::Ray { start: ie, dir: left }],
                arg_scale: one,
                weight: one,
                rho: a * a,
            },
        ];
        let i = C::new(0.0, 1.0);
        self.kdv_sum(t, xs, &parts, |k| i * k * k * k * t, eps)
    }

    /// u_t = u_xxx: wedges in the lower half-plane.
    pub(super) fn kdv2_i0_sum(&self, t: f64, xs: f64) -> Result<ExpSum> {
        let a = alpha();
        let one = C::new(1.0, 0.0);
        let wedge = |a_in: f64, a_out: f64| ContourPath::wedge(1.0, a_in, a_out).pieces;
        let parts = [
            Part { pieces: wedge(-5.0 * FRAC_PI_6, -FRAC_PI_6), arg_scale: one, weight: one, rho: one },
            Part { pieces: wedge(FRAC_PI_2, -FRAC_PI_6), arg_scale: a * a, weight: -one, rho: one },
            Part { pieces: wedge(7.0 * FRAC_PI_6, FRAC_PI_2), arg_scale: a, weight: -one, rho: one },
        ];
        let i = C::new(0.0, 1.0);
        self.kdv_sum(t, xs, &parts, |k| -i * k * k * k * t, 0.0)
    }
}

/// 3 int_{x/(3t)^(1/3)}^inf f(t - x^3/(3 z^3)) Ai(z) dz, x > 0.
pub(super) fn kdv1_boundary_airy(f: &Expression, x: f64, t: f64, tol: f64) -> Result<f64> {
    let z0 = x / (3.0 * t).cbrt();
    let zmax = z0.max((1.5 * -(tol * 1e-3).ln()).powf(2.0 / 3.0)) + 1.0;
    let mut bad: Option<ContinuousError> = None;
    let r = adaptive(
        |z: f64| {
            let s = (t - x * x * x / (3.0 * z * z * z)).max(0.0);
            match (f.eval(s), airy_ai(z)) {
                (Ok(v), Ok(ai)) => v * ai,
                (Err(e), _) => {
                    bad.get_or_insert(e.into());
                    f64::NAN
                }
                (_, Err(e)) => {
                    bad.get_or_insert(e.into());
                    f64::NAN
                }
            }
        },
        z0,
        zmax,
        AdaptOptions::new(0.05 * tol).panels(8),
    );
    if let Some(e) = bad {
        return Err(e);
    }
    if !r.converged {
        return Err(crate::quad::QuadError::NoConvergence { piece: 0, interval: r.worst, error: r.error }.into());
    }
    Ok(3.0 * r.value)
}

fn sign(m: usize) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// sqrt(3) Gamma(phi) / (2 pi).
fn kdv_constant(phi: f64) -> Result<f64> {
    Ok(SQRT_3 * gamma(phi)? / (2.0 * PI))
}

fn extension(datum: Datum, f: &Expression, t: f64, n: usize, coefficients: Vec<f64>, parity: Parity) -> Result<TaylorExtension> {
    let ct = jet(f, t, n)?;
    let (radius, bound_scale) = radius_estimate(&ct);
    Ok(TaylorExtension { datum, center: 0.0, t, coefficients, parity, order: n, step: 3, radius, bound_scale })
}

/// a_{3m} = (-1)^m f^(m)(t)/(3m)!, a_{3m-2} = k(1/3)(-1)^m P(m,1/3)/(3m-2)!,
/// a_{3m-1} = -k(2/3)(-1)^m P(m,2/3)/(3m-1)!, k(phi) = sqrt(3) Gamma(phi)/(2 pi).
pub(super) fn kdv1_coefficients(f: &Expression, t: f64, n: usize) -> Result<TaylorExtension> {
    let ct = jet(f, t, n)?;
    let even = scaled_values(&ct, |m| 3 * m);
    let p13 = fractional_brackets(f, t, 1.0 / 3.0, n, |m| 3 * m - 2)?;
    let p23 = fractional_brackets(f, t, 2.0 / 3.0, n, |m| 3 * m - 1)?;
    let (k13, k23) = (kdv_constant(1.0 / 3.0)?, kdv_constant(2.0 / 3.0)?);
    let mut c = vec![0.0; 3 * n + 1];
    for m in 0..=n {
        c[3 * m] = sign(m) * even[m];
        if m >= 1 {
            c[3 * m - 2] = k13 * sign(m) * p13[m];
            c[3 * m - 1] = -k23 * sign(m) * p23[m];
        }
    }
    extension(Datum::F0, f, t, n, c, Parity::Even)
}

/// a_{3m} = f0^(m)(t)/(3m)!, a_{3m-2} = 0, a_{3m-1} = -k(2/3) P(m,2/3)/(3m-1)!.
pub(super) fn kdv2_f0_coefficients(f: &Expression, t: f64, n: usize) -> Result<TaylorExtension> {
    let ct = jet(f, t, n)?;
    let even = scaled_values(&ct, |m| 3 * m);
    let p23 = fractional_brackets(f, t, 2.0 / 3.0, n, |m| 3 * m - 1)?;
    let k23 = kdv_constant(2.0 / 3.0)?;
    let mut c = vec![0.0; 3 * n + 1];
    for m in 0..=n {
        c[3 * m] = even[m];
        if m >= 1 {
            c[3 * m - 1] = -k23 * p23[m];
        }
    }
    extension(Datum::F0, f, t, n, c, Parity::Even)
}

/// b_{3m+1} = f1^(m)(t)/(3m+1)!, b_{3m} = 0, b_{3m-1} = -k(1/3) P(m,1/3)/(3m-1)!.
pub(super) fn kdv2_f1_coefficients(f: &Expression, t: f64, n: usize) -> Result<TaylorExtension> {
    let ct = jet(f, t, n)?;
    let odd = scaled_values(&ct, |m| 3 * m + 1);
    let p13 = fractional_brackets(f, t, 1.0 / 3.0, n, |m| 3 * m - 1)?;
    let k13 = kdv_constant(1.0 / 3.0)?;
    let mut c = vec![0.0; 3 * n + 2];
    for m in 0..=n {
        c[3 * m + 1] = odd[m];
        if m >= 1 {
            c[3 * m - 1] = -k13 * p13[m];
        }
    }
    extension(Datum::F1, f, t, n, c, Parity::Odd)
}

/// 3 sum (-1)^m f0^(m)(0) x^(3m)/(3m)!.
pub(super) fn kdv1_tilde_at_zero_time(f: &Expression, x: f64, opts: Options) -> Result<f64> {
    Ok(3.0 * datum_series(f, 0.0, x, 3, 0, true, opts.tol, opts.taylor_max_order)?)
}

/// w0(x) for x < 0: 3 sum (-1)^m f0^(m)(0) x^(3m)/(3m)! - u0(alpha x) - u0(alpha^2 x).
pub(super) fn kdv1_w0(spec: &ProblemSpec, x: f64, opts: Options) -> Result<f64> {
    let u0 = &spec.u0;
    if !u0.supports_complex() {
        return Err(ContinuousError::NotAnalytic(
            "the u0 expression uses square roots or non-integer powers; its continuation to complex arguments is ambiguous".into(),
        ));
    }
    let tilde = kdv1_tilde_at_zero_time(spec.datum(Datum::F0)?, x, opts)?;
    // u0(alpha^2 x) is the conjugate of u0(alpha x) for real expressions
    let rotated = u0.eval_complex(alpha() * x)?;
    Ok(tilde - 2.0 * rotated.re)
}

