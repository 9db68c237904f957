//! Advected heat equation u_t = u_xx + c u_x on the half-line.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::heat::{dirichlet_real, even_tilde};
use super::kgrid::{data_extent, discretize, Envelope, ExpSum};
use super::taylor::{jet, radius_estimate, Parity, TaylorExtension};
use super::{ContinuousError, Datum, Options, ProblemKind, Result, Solver};
use crate::expr::Expression;
use crate::quad::{adaptive, gauss_legendre, AdaptOptions, ContourPath};

type C = Complex64;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Times used to extrapolate the tilde series to t = 0.
const LIMIT_TIMES: [f64; 3] = [1e-2, 1e-3, 1e-4];

impl Solver {
    /// I0 = Re[(1/2pi) int_R e^{ikx - Wt} u0^(k) dk
    ///        - (1/2pi) int_{Im k = b} e^{ikx - Wt} u0^(-k + ic) dk], b = |c| + 1.
    pub(super) fn advected_i0_sum(&self, t: f64, xs: f64) -> Result<ExpSum> {
        let c = self.spec.c;
        let i = C::new(0.0, 1.0);
        let b = c.abs() + 1.0;
        let (ybar, amp) = data_extent(&self.spec.u0, 0.0);
        let log_amp = amp.ln();
        let w = |k: C| k * k - i * k * c;
        let log_env = |k: C| -w(k).re * t + k.im.abs() * xs + log_amp;
        let rate = |k: C| xs + ybar + t * (2.0 * k - i * c).norm();
        let env = Envelope { log_env: &log_env, rate: &rate, log_cut: (self.tol() * 1e-3).ln() };
        let mut sum = ExpSum::default();
        for node in discretize(&ContourPath::real_line(), &env) {
            let k = node.k;
            let coef = node.w * (-w(k) * t).exp() * self.u0_hat(k)? / (2.0 * PI);
            sum.push(i * k, coef);
        }
        for node in discretize(&ContourPath::horizontal(b), &env) {
            let k = node.k;
            let coef = -node.w * (-w(k) * t).exp() * self.u0_hat(-k + i * c)? / (2.0 * PI);
            sum.push(i * k, coef);
        }
        Ok(sum)
    }

    /// tilde f0(x, 0) as the extrapolated limit of tilde f0(x, t), t -> 0+.
    pub(super) fn advected_tilde_limit(&self, x: f64) -> Result<f64> {
        let f = self.f(Datum::F0)?;
        let mut vals = [0.0; 3];
        for (v, &t) in vals.iter_mut().zip(&LIMIT_TIMES) {
            *v = gauge_tilde(f, self.spec.c, x, t, self.opts)?;
        }
        Ok(neville_at_zero(&LIMIT_TIMES, &vals))
    }
}

/// Polynomial extrapolation of (t_i, v_i) to t = 0.
pub(super) fn neville_at_zero(t: &[f64], v: &[f64]) -> f64 {
    let mut p = v.to_vec();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (ti, tj) = (t[i], t[i + level]);
            p[i] = (tj * p[i] - ti * p[i + 1]) / (tj - ti);
        }
    }
    p[0]
}

/// (2/sqrt(pi)) int_{x/(2 sqrt t)}^inf f(t - x^2/(4z^2)) e^{-(z + cx/(4z))^2} dz, x > 0.
pub(super) fn boundary_real(f: &Expression, c: f64, x: f64, t: f64, tol: f64) -> Result<f64> {
    let z0 = x / (2.0 * t.sqrt());
    let zmax = z0.max((c.abs() * x / 4.0).sqrt()) + (-(tol * 1e-4).ln()).sqrt() + 1.0;
    let mut bad = None;
    let r = adaptive(
        |z: f64| {
            let s = (t - x * x / (4.0 * z * z)).max(0.0);
            let g = z + c * x / (4.0 * z);
            match f.eval(s) {
                Ok(v) => v * (-g * g).exp(),
                Err(e) => {
                    bad.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        z0,
        zmax,
        AdaptOptions::new(0.05 * tol * SQRT_PI).panels(8),
    );
    if let Some(e) = bad {
        return Err(e.into());
    }
    if !r.converged {
        return Err(crate::quad::QuadError::NoConvergence { piece: 0, interval: r.worst, error: r.error }.into());
    }
    Ok(2.0 / SQRT_PI * r.value)
}

/// Gauge-transform form of the even tilde series:
/// e^{-c^2 t/4} [e^{-cx/2} g~(x,t) + 2 sinh(cx/2) H_g(-x,t)], g = e^{c^2 s/4} f(s),
/// with H_g the plain heat boundary integral. Even in x.
pub(super) fn gauge_tilde(f: &Expression, c: f64, x: f64, t: f64, opts: Options) -> Result<f64> {
    let x = -x.abs();
    let g = f.times_exp(c * c / 4.0);
    let gt = even_tilde(&g, x, t, opts)?;
    let h = if x == 0.0 { 0.0 } else { dirichlet_real(&g, -x, t, opts.tol)? };
    Ok((-c * c * t / 4.0).exp() * ((-c * x / 2.0).exp() * gt + 2.0 * (c * x / 2.0).sinh() * h))
}

/// Taylor coefficients a_j, j = 0..=2n+1, of the boundary integral about x = 0.
///
/// With G_m(j, tau) = -((-1)^m / 2pi) int_{Im k = h} (ik)^j (2ik + c) e^{-W tau} / W^m dk,
/// repeated integration by parts of int_0^t f(s) d^j_x K(0, t-s) ds gives
/// j! a_j = sum_{m=1}^M f^(m-1)(0) G_m(j, t) + int_0^t f^(M)(s) G_M(j, t-s) ds
/// with M = j/2 + 2, which keeps the remaining kernel bounded.
pub(super) fn coefficients(f: &Expression, c: f64, t: f64, n: usize) -> Result<TaylorExtension> {
    let jmax = 2 * n + 1;
    let big_m = |j: usize| j / 2 + 2;
    let mmax = big_m(jmax);
    if mmax > crate::expr::DEFAULT_MAX_ORDER {
        return Err(ContinuousError::Unsupported { kind: ProblemKind::AdvectedHeat, what: format!("Taylor order {n}") });
    }
    let d0 = f.derivatives(0.0, mmax)?;
    let table = phi_table(c, t, jmax, |_| 1..=mmax);
    let rule = gauss_legendre(16);
    let su = t.sqrt();
    let mut rem = vec![0.0; jmax + 1];
    let panels = 8;
    let hu = su / panels as f64;
    for p in 0..panels {
        for (xg, wg) in rule.nodes.iter().zip(&rule.weights) {
            let u = p as f64 * hu + 0.5 * hu * (xg + 1.0);
            let w = 0.5 * hu * wg;
            let ds = f.derivatives(t - u * u, mmax)?;
            let tab = phi_table(c, u * u, jmax, |j| big_m(j)..=big_m(j));
            for j in 0..=jmax {
                rem[j] += w * 2.0 * u * ds[big_m(j)] * tab[j][big_m(j)];
            }
        }
    }
    let mut coefficients = vec![0.0; jmax + 1];
    let mut fact = 1.0;
    for j in 0..=jmax {
        if j > 0 {
            fact *= j as f64;
        }
        let mut acc = rem[j];
        for m in 1..=big_m(j) {
            acc += d0[m - 1] * table[j][m];
        }
        coefficients[j] = acc / fact;
    }
    let ct = jet(f, t, n)?;
    let (radius, bound_scale) = radius_estimate(&ct);
    Ok(TaylorExtension {
        datum: Datum::F0,
        center: 0.0,
        t,
        coefficients,
        parity: Parity::Even,
        order: n,
        step: 2,
        radius,
        bound_scale,
    })
}

/// Phi(j, m, tau) = -((-1)^m / 2pi) tau^{m - (j+2)/2}
///   int_{Im kappa = h} (i kappa)^j (2 i kappa + c sqrt(tau)) e^{-omega} / omega^m dkappa,
/// omega = kappa^2 - i kappa c sqrt(tau), for j = 0..=jmax and m in ms(j).
/// Entries outside ms(j) are left at zero.
fn phi_table(c: f64, tau: f64, jmax: usize, ms: impl Fn(usize) -> std::ops::RangeInclusive<usize>) -> Vec<Vec<f64>> {
    let i = C::new(0.0, 1.0);
    let st = tau.sqrt();
    let cs = c * st;
    let h = 1.0 + cs.max(0.0);
    let reach = (jmax as f64).sqrt() + 8.0;
    let panels = (2.0 * reach / 0.5).ceil() as usize;
    let rule = gauss_legendre(16);
    let mtop = (0..=jmax).map(|j| *ms(j).end()).max().unwrap_or(1);
    let mut sums = vec![vec![C::new(0.0, 0.0); mtop + 1]; jmax + 1];
    let hp = 2.0 * reach / panels as f64;
    for p in 0..panels {
        for (xg, wg) in rule.nodes.iter().zip(&rule.weights) {
            let a = -reach + p as f64 * hp + 0.5 * hp * (xg + 1.0);
            let kappa = C::new(a, h);
            let omega = kappa * kappa - i * kappa * cs;
            let base = (2.0 * i * kappa + cs) * (-omega).exp() * (0.5 * hp * wg);
            let inv = 1.0 / omega;
            let mut pw = base;
            for (j, row) in sums.iter_mut().enumerate() {
                let r = ms(j);
                let mut q = pw * inv.powi(*r.start() as i32);
                for m in r {
                    row[m] += q;
                    q *= inv;
                }
                pw *= i * kappa;
            }
        }
    }
    let mut out = vec![vec![0.0; mtop + 1]; jmax + 1];
    for j in 0..=jmax {
        for m in ms(j) {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let scale = tau.powf(m as f64 - (j as f64 + 2.0) / 2.0);
            out[j][m] = -sign / (2.0 * PI) * scale * sums[j][m].re;
        }
    }
    out
}
