use num_complex::Complex64;

use super::adaptive::{adaptive, AdaptOptions};
use super::rules::{gauss_legendre, GaussRule};
use super::QuadError;
use crate::expr::{ExprError, Expression};

type C = Complex64;

/// Endpoint singularity (t - s)^(-beta) of a time convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularKernel {
    pub beta: f64,
}

impl SingularKernel {
    pub fn new(beta: f64) -> Result<Self, QuadError> {
        if !(0.0..1.0).contains(&beta) {
            return Err(QuadError::Kernel(beta));
        }
        Ok(SingularKernel { beta })
    }

    /// t - s = tau^m. m = 1/(1 - beta) cancels the singularity; when m(1 - beta)
    /// can be made an integer with a small integer m (beta = 1/3 needs m = 3)
    /// the transformed integrand is smooth as well.
    fn m(&self) -> f64 {
        for m in 2..=12 {
            let e = m as f64 * (1.0 - self.beta);
            if (e - e.round()).abs() < 1e-12 {
                return m as f64;
            }
        }
        1.0 / (1.0 - self.beta)
    }

    /// Weight factor m tau^(m - 1 - m beta) after the substitution.
    fn jacobian(&self, m: f64, tau: f64) -> f64 {
        let e = m - 1.0 - m * self.beta;
        if (e - e.round()).abs() < 1e-12 {
            m * tau.powi(e.round() as i32)
        } else {
            m * tau.powf(e)
        }
    }
}

/// int_0^t f(s) (t - s)^(-beta) ds.
pub fn singular_time_convolution(kernel: SingularKernel, f: impl Fn(f64) -> f64, t: f64, tol: f64) -> Result<f64, QuadError> {
    if !(t > 0.0) {
        return Err(QuadError::Domain(format!("convolution needs t > 0, got {t}")));
    }
    let m = kernel.m();
    let upper = t.powf(1.0 / m);
    let r = adaptive(|tau: f64| kernel.jacobian(m, tau) * f((t - tau.powf(m)).max(0.0)), 0.0, upper, AdaptOptions::new(tol).panels(4));
    if !r.converged {
        return Err(QuadError::NoConvergence { piece: 0, interval: r.worst, error: r.error });
    }
    Ok(r.value)
}

/// Fixed composite Gauss-Legendre rule for int_0^t g(s) (t-s)^(-beta) ds,
/// reusable across many integrands g.
#[derive(Debug, Clone)]
pub struct ConvolutionRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ConvolutionRule {
    pub fn new(kernel: SingularKernel, t: f64, panels: usize, order: usize) -> Self {
        let m = kernel.m();
        let upper = t.powf(1.0 / m);
        let rule = gauss_legendre(order);
        let h = upper / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = p as f64 * h;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let tau = lo + 0.5 * h * (x + 1.0);
                nodes.push((t - tau.powf(m)).max(0.0));
                weights.push(0.5 * h * w * kernel.jacobian(m, tau));
            }
        }
        ConvolutionRule { nodes, weights }
    }

    pub fn apply(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

const ASYMPTOTIC_TERMS: usize = 28;
const FIXED_PANELS: usize = 64;

/// E(W) = int_0^t e^{-W(t-s)} f(s) ds, the bounded form of e^{-Wt} F(W, t).
///
/// Large |W| t uses integration by parts,
/// E = sum_j (-1)^j [f^(j)(t) - e^{-Wt} f^(j)(0)] / W^(j+1),
/// small |W| t a fixed composite Gauss rule, and anything in between an
/// adaptive rule.
#[derive(Debug, Clone)]
pub struct StabilizedTransform {
    f: Expression,
    t: f64,
    d0: Vec<f64>,
    dt: Vec<f64>,
    nodes: Vec<f64>,
    weighted: Vec<f64>,
    tol: f64,
}

impl StabilizedTransform {
    pub fn new(f: &Expression, t: f64, tol: f64) -> Result<Self, ExprError> {
        let d0 = f.derivatives(0.0, ASYMPTOTIC_TERMS)?;
        let dt = f.derivatives(t, ASYMPTOTIC_TERMS)?;
        let rule: GaussRule = gauss_legendre(16);
        let h = t / FIXED_PANELS as f64;
        let mut nodes = Vec::with_capacity(FIXED_PANELS * 16);
        let mut weighted = Vec::with_capacity(FIXED_PANELS * 16);
        for p in 0..FIXED_PANELS {
            let lo = p as f64 * h;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = lo + 0.5 * h * (x + 1.0);
                nodes.push(s);
                weighted.push(0.5 * h * w * f.eval(s)?);
            }
        }
        Ok(StabilizedTransform { f: f.clone(), t, d0, dt, nodes, weighted, tol })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Derivatives f^(j)(0), j = 0..=28.
    pub fn derivatives_at_zero(&self) -> &[f64] {
        &self.d0
    }

    pub fn eval(&self, w: C) -> C {
        let wt = w.norm() * self.t;
        if wt > 30.0 {
            if let Some(v) = self.asymptotic(w) {
                return v;
            }
        }
        if wt <= 150.0 {
            let mut acc = C::new(0.0, 0.0);
            for (s, fw) in self.nodes.iter().zip(&self.weighted) {
                acc += (-w * (self.t - s)).exp() * fw;
            }
            return acc;
        }
        let f = &self.f;
        let t = self.t;
        let panels = (wt / 2.0).ceil() as usize;
        let r = adaptive(
            |s: f64| (-w * (t - s)).exp() * f.eval(s).unwrap_or(0.0),
            0.0,
            t,
            AdaptOptions::new(self.tol * 1e-2).panels(panels.min(50_000)),
        );
        r.value
    }

    fn asymptotic(&self, w: C) -> Option<C> {
        let decay = (-w * self.t).exp();
        let inv = 1.0 / w;
        let mut pow = inv;
        let mut sum = C::new(0.0, 0.0);
        // magnitudes of the last four terms; data like sin(4 pi t) at t = 1/2
        // has every other derivative zero, so single small terms prove nothing
        let mut recent = [f64::INFINITY; 4];
        for j in 0..ASYMPTOTIC_TERMS {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let term = (decay * (-self.d0[j]) + self.dt[j]) * pow * sign;
            recent[j % 4] = term.norm();
            sum += term;
            let scale = sum.norm().max(1e-300);
            if j >= 3 && recent.iter().all(|&m| m <= 1e-17 * scale) {
                return Some(sum);
            }
            if j >= 7 {
                let newer = recent[j % 4].max(recent[(j + 3) % 4]);
                let older = recent[(j + 2) % 4].max(recent[(j + 1) % 4]);
                if newer > older {
                    return None;
                }
            }
            pow *= inv;
        }
        None
    }
}
