//! Heat equation on the half-line with Dirichlet or Neumann data.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::kgrid::{data_extent, discretize, Envelope, ExpSum};
use super::taylor::{datum_series, fractional_brackets, jet, radius_estimate, scaled_values, Parity, TaylorExtension};
use super::{ContinuousError, Datum, Options, ProblemKind, Result, Solver};
use crate::expr::Expression;
use crate::quad::{
    adaptive, integrate_path, singular_time_convolution, AdaptOptions, ContourPath, DecayDescriptor, PathOptions, Piece,
    SingularKernel, StabilizedTransform,
};

type C = Complex64;

const SQRT_PI: f64 = 1.772_453_850_905_516;

impl Solver {
    /// Sine (Dirichlet) or cosine (Neumann) transform form of I0.
    pub(super) fn heat_i0_sum(&self, t: f64, xs: f64) -> Result<ExpSum> {
        let (ybar, amp) = data_extent(&self.spec.u0, 0.0);
        let log_amp = amp.ln();
        let log_env = |k: C| -k.re * k.re * t + log_amp;
        let rate = |_: C| xs + ybar;
        let env = Envelope { log_env: &log_env, rate: &rate, log_cut: (self.tol() * 1e-3).ln() };
        let path = ContourPath::new(vec![Piece::Ray { start: C::new(0.0, 0.0), dir: C::new(1.0, 0.0) }]);
        let dirichlet = self.spec.kind == ProblemKind::HeatDirichlet;
        let mut sum = ExpSum::default();
        for node in discretize(&path, &env) {
            let uh = self.u0_hat(node.k)?;
            let w = node.w.re * (-node.k.re * node.k.re * t).exp() * 2.0 / PI;
            let coef = if dirichlet { C::new(0.0, w * uh.im) } else { C::new(w * uh.re, 0.0) };
            sum.push(C::new(0.0, node.k.re), coef);
        }
        Ok(sum)
    }
}

fn eval_or_nan(f: &Expression, s: f64, bad: &mut Option<ContinuousError>) -> f64 {
    match f.eval(s) {
        Ok(v) => v,
        Err(e) => {
            bad.get_or_insert(e.into());
            f64::NAN
        }
    }
}

fn finish(r: crate::quad::QuadResult<f64>, bad: Option<ContinuousError>) -> Result<f64> {
    if let Some(e) = bad {
        return Err(e);
    }
    if !r.converged {
        return Err(crate::quad::QuadError::NoConvergence { piece: 0, interval: r.worst, error: r.error }.into());
    }
    Ok(r.value)
}

/// Classical form (2/sqrt(pi)) int_{x/(2 sqrt t)}^inf f(t - x^2/(4 z^2)) e^{-z^2} dz, x > 0.
pub(super) fn dirichlet_real(f: &Expression, x: f64, t: f64, tol: f64) -> Result<f64> {
    let z0 = x / (2.0 * t.sqrt());
    let zmax = (z0 + 1.0).max((-(tol * 1e-4).ln()).sqrt() + 1.0);
    let mut bad = None;
    let r = adaptive(
        |z: f64| {
            let s = (t - x * x / (4.0 * z * z)).max(0.0);
            eval_or_nan(f, s, &mut bad) * (-z * z).exp()
        },
        z0,
        zmax,
        AdaptOptions::new(0.05 * tol * SQRT_PI).panels(8),
    );
    Ok(2.0 / SQRT_PI * finish(r, bad)?)
}

/// -(2/sqrt(pi)) int_0^sqrt(t) f(t - u^2) e^{-x^2/(4u^2)} du, x >= 0.
pub(super) fn neumann_real(f: &Expression, x: f64, t: f64, tol: f64) -> Result<f64> {
    let mut bad = None;
    let r = adaptive(
        |u: f64| {
            let g = if x == 0.0 { 1.0 } else { (-x * x / (4.0 * u * u)).exp() };
            eval_or_nan(f, t - u * u, &mut bad) * g
        },
        0.0,
        t.sqrt(),
        AdaptOptions::new(0.05 * tol * SQRT_PI).panels(8),
    );
    Ok(-2.0 / SQRT_PI * finish(r, bad)?)
}

/// Boundary of the heat sector with its rays turned to arg pi/6 and 5pi/6.
/// There Re k^2 > 0, so the e^{-k^2 t} f(0) part of E decays like a Gaussian
/// instead of oscillating with unit modulus.
pub(super) fn rotated_omega() -> ContourPath {
    ContourPath::wedge(1.0, 5.0 * PI / 6.0, PI / 6.0)
}

/// (1/(i pi)) int over the (rotated) boundary of the heat sector of
/// k e^{ikx} E(k^2) dk, with E the stabilized time transform of f.
pub(super) fn dirichlet_contour(f: &Expression, x: f64, t: f64, tol: f64) -> Result<f64> {
    let st = StabilizedTransform::new(f, t, tol)?;
    let i = C::new(0.0, 1.0);
    let g = |k: C| k * (i * k * x).exp() * st.eval(k * k);
    let opts = PathOptions::new(tol * 0.1, DecayDescriptor::exponential(0.5 * x)).oscillation(x);
    let r = integrate_path(g, &rotated_omega(), &opts)?;
    Ok((r.value / (i * PI)).re)
}

/// Heat Dirichlet coefficients about `center` through derivative order n:
/// a_{2m} = f^(m)(t)/(2m)! and the odd ones from the fractional brackets.
pub(super) fn dirichlet_coefficients(f: &Expression, t: f64, n: usize, datum: Datum, center: f64) -> Result<TaylorExtension> {
    let ct = jet(f, t, n)?;
    let even = scaled_values(&ct, |m| 2 * m);
    let odd = fractional_brackets(f, t, 0.5, n, |m| 2 * m - 1)?;
    let mut coefficients = vec![0.0; 2 * n + 1];
    for m in 0..=n {
        coefficients[2 * m] = even[m];
        if m >= 1 {
            coefficients[2 * m - 1] = -odd[m] / SQRT_PI;
        }
    }
    let (radius, bound_scale) = radius_estimate(&ct);
    Ok(TaylorExtension { datum, center, t, coefficients, parity: Parity::Even, order: n, step: 2, radius, bound_scale })
}

/// Neumann coefficients: b_{2m+1} = f^(m)(t)/(2m+1)!, b_{2m} = a_{2m-1}[f]/(2m),
/// b_0 = -(1/sqrt(pi)) int_0^t f(s) (t-s)^(-1/2) ds.
pub(super) fn neumann_coefficients(f: &Expression, t: f64, n: usize) -> Result<TaylorExtension> {
    let ct = jet(f, t, n)?;
    let odd = scaled_values(&ct, |m| 2 * m + 1);
    let even = fractional_brackets(f, t, 0.5, n, |m| 2 * m)?;
    let mut coefficients = vec![0.0; 2 * n + 2];
    let bad = std::cell::RefCell::new(None);
    let b0 = singular_time_convolution(SingularKernel::new(0.5)?, |s| eval_or_nan(f, s, &mut bad.borrow_mut()), t, 1e-14)?;
    if let Some(e) = bad.into_inner() {
        return Err(e);
    }
    coefficients[0] = -b0 / SQRT_PI;
    for m in 0..=n {
        coefficients[2 * m + 1] = odd[m];
        if m >= 1 {
            coefficients[2 * m] = -even[m] / SQRT_PI;
        }
    }
    let (radius, bound_scale) = radius_estimate(&ct);
    Ok(TaylorExtension {
        datum: Datum::F1,
        center: 0.0,
        t,
        coefficients,
        parity: Parity::Odd,
        order: n,
        step: 2,
        radius,
        bound_scale,
    })
}

/// 2 sum f^(m)(t) x^(2m)/(2m)!, the even tilde series at time t >= 0.
pub(super) fn even_tilde(f: &Expression, x: f64, t: f64, opts: Options) -> Result<f64> {
    Ok(2.0 * datum_series(f, t, x, 2, 0, false, opts.tol, opts.taylor_max_order)?)
}

/// 2 sum f^(m)(0) x^(2m+1)/(2m+1)!.
pub(super) fn odd_tilde_at_zero_time(f: &Expression, x: f64, opts: Options) -> Result<f64> {
    Ok(2.0 * datum_series(f, 0.0, x, 2, 1, false, opts.tol, opts.taylor_max_order)?)
}
