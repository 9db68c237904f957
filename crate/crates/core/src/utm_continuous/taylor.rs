use serde::Serialize;

use super::{ContinuousError, Datum};
use crate::expr::Expression;
use crate::quad::{ConvolutionRule, SingularKernel};
use crate::specfun::ln_gamma;

/// Which part of the series the tilde function doubles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Taylor coefficients of a boundary integral in powers of (x - center).
#[derive(Debug, Clone, Serialize)]
pub struct TaylorExtension {
    pub datum: Datum,
    pub center: f64,
    pub t: f64,
    /// Coefficient of (x - center)^j. Structural zeros are stored as 0.0.
    pub coefficients: Vec<f64>,
    pub parity: Parity,
    /// Highest derivative order of the datum used.
    pub order: usize,
    /// Powers per derivative order: 2 for heat-type, 3 for KdV.
    pub step: usize,
    /// Root-test radius of the datum about t, for the tail bound.
    pub radius: f64,
    pub bound_scale: f64,
}

impl TaylorExtension {
    pub fn series(&self, x: f64) -> f64 {
        horner(&self.coefficients, x - self.center)
    }

    /// 2 * (even or odd part of the series).
    pub fn tilde(&self, x: f64) -> f64 {
        let y = x - self.center;
        let keep = |j: usize| (j % 2 == 0) == (self.parity == Parity::Even);
        let mut acc = 0.0;
        for (j, c) in self.coefficients.iter().enumerate().rev() {
            acc = acc * y + if keep(j) { *c } else { 0.0 };
        }
        2.0 * acc
    }

    /// Bound C (N+1)! / (r^(N+1) (p(N+1))!) |x|^(p(N+1)) on the first omitted term.
    pub fn tail_bound(&self, x: f64) -> f64 {
        let n1 = (self.order + 1) as f64;
        let p = self.step as f64;
        let y = (x - self.center).abs().max(1e-300);
        let ln = self.bound_scale.max(1e-300).ln() + lgam(n1 + 1.0) - n1 * self.radius.ln() - lgam(p * n1 + 1.0)
            + p * n1 * y.ln();
        ln.exp()
    }

    /// The stopping rule: three trailing nonzero tilde terms below
    /// tol * (absolute sum) and the tail bound below tol.
    pub fn converged_at(&self, x: f64, tol: f64) -> bool {
        let y = (x - self.center).abs();
        let keep = |j: usize| (j % 2 == 0) == (self.parity == Parity::Even);
        let terms: Vec<f64> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(j, c)| keep(*j) && **c != 0.0)
            .map(|(j, c)| (c * y.powi(j as i32)).abs())
            .collect();
        let total: f64 = terms.iter().sum();
        let trailing_ok = terms.len() < 3 || terms[terms.len() - 3..].iter().all(|v| *v <= tol * total.max(1.0));
        trailing_ok && self.tail_bound(x) <= tol
    }
}

fn horner(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * y + v)
}

/// ln Gamma for positive arguments.
pub(crate) fn lgam(x: f64) -> f64 {
    ln_gamma(x).unwrap_or(f64::NAN)
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    lgam(n as f64 + 1.0)
}

/// Taylor coefficients f^(n)(s)/n!, n = 0..=order.
pub(crate) fn jet(f: &Expression, s: f64, order: usize) -> Result<Vec<f64>, ContinuousError> {
    Ok(f.taylor(s, order, 1.0)?)
}

/// Root-test radius estimate and bound constant for |f^(n)(t)| <= C n!/r^n.
pub(crate) fn radius_estimate(c: &[f64]) -> (f64, f64) {
    let n = c.len();
    let mut inv_r: f64 = 0.0;
    for (j, v) in c.iter().enumerate().skip((n / 2).max(1)) {
        if *v != 0.0 {
            inv_r = inv_r.max(v.abs().powf(1.0 / j as f64));
        }
    }
    // entire data: the root test still shrinks like e/n; keep a floor
    let inv_r = inv_r.max(1e-3);
    let r = 1.0 / inv_r;
    let scale = c.iter().enumerate().map(|(j, v)| v.abs() * r.powi(j as i32)).fold(0.0, f64::max);
    (r, scale.max(1e-300))
}

/// f^(n)(t) / target! for n = 0..=order, with target = denom(n), in log space.
pub(crate) fn scaled_values(c: &[f64], denom: impl Fn(usize) -> usize) -> Vec<f64> {
    c.iter()
        .enumerate()
        .map(|(n, v)| {
            if *v == 0.0 {
                0.0
            } else {
                v.signum() * (v.abs().ln() + ln_factorial(n) - ln_factorial(denom(n))).exp()
            }
        })
        .collect()
}

/// sum_{m>=0} sign^m f^(m)(s0) y^(p m + q) / (p m + q)!, with sign = -1 when
/// `alternating`, truncated by the same rule as [`TaylorExtension`].
pub(crate) fn datum_series(f: &Expression, s0: f64, y: f64, p: usize, q: usize, alternating: bool, tol: f64, cap: usize) -> Result<f64, ContinuousError> {
    let cap = cap.min(crate::expr::DEFAULT_MAX_ORDER);
    let mut n = 16.min(cap);
    let ay = y.abs();
    loop {
        let c = jet(f, s0, n)?;
        let vals = scaled_values(&c, |m| p * m + q);
        let mut sum = 0.0;
        let mut terms = Vec::with_capacity(n + 1);
        for (m, v) in vals.iter().enumerate() {
            let e = (p * m + q) as i32;
            let sign = if alternating && m % 2 == 1 { -1.0 } else { 1.0 };
            let term = sign * v * y.powi(e);
            sum += term;
            if *v != 0.0 {
                terms.push((v * ay.powi(e)).abs());
            }
        }
        let total: f64 = terms.iter().sum();
        let trailing = terms.len() < 3 || terms[terms.len() - 3..].iter().all(|v| *v <= tol * total.max(1.0));
        let (r, scale) = radius_estimate(&c);
        let n1 = (n + 1) as f64;
        let e1 = (p * (n + 1) + q) as f64;
        let bound = (scale.ln() + lgam(n1 + 1.0) - n1 * r.ln() - lgam(e1 + 1.0) + e1 * ay.max(1e-300).ln()).exp();
        if (trailing && bound <= tol) || n >= cap {
            return Ok(sum);
        }
        n = (n + 16).min(cap);
    }
}

/// Fractional brackets
///
/// P(n) = sum_{m=1}^n (-1)^(n-m) Gamma(n-m+phi) / (Gamma(phi) t^(n-m+phi)) f^(m-1)(0)
///        + int_0^t f^(n)(s) (t-s)^(-phi) ds,
///
/// returned divided by denom(n)! for n = 1..=n_max (index 0 unused).
pub(crate) fn fractional_brackets(
    f: &Expression,
    t: f64,
    phi: f64,
    n_max: usize,
    denom: impl Fn(usize) -> usize,
) -> Result<Vec<f64>, ContinuousError> {
    let mut out = vec![0.0; n_max + 1];
    if n_max == 0 {
        return Ok(out);
    }
    let c0 = jet(f, 0.0, n_max)?;
    let ln_t = t.ln();
    let lg_phi = lgam(phi);
    let kernel = SingularKernel::new(phi)?;
    let rule = ConvolutionRule::new(kernel, t, 48, 16);
    let node_jets: Vec<Vec<f64>> = rule.nodes.iter().map(|&s| jet(f, s, n_max)).collect::<Result<_, _>>()?;
    for n in 1..=n_max {
        let ln_den = ln_factorial(denom(n));
        let mut acc = 0.0;
        for m in 1..=n {
            let c = c0[m - 1];
            if c == 0.0 {
                continue;
            }
            let k = (n - m) as f64;
            let sign = if (n - m) % 2 == 0 { 1.0 } else { -1.0 } * c.signum();
            let ln = lgam(k + phi) - lg_phi - (k + phi) * ln_t + c.abs().ln() + ln_factorial(m - 1) - ln_den;
            acc += sign * ln.exp();
        }
        let factor = (ln_factorial(n) - ln_den).exp();
        let integral: f64 = node_jets.iter().zip(&rule.weights).map(|(j, w)| j[n] * w).sum();
        acc += integral * factor;
        out[n] = acc;
    }
    Ok(out)
}
