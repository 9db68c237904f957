//! Fixed-node discretizations of spectral contours.
//!
//! Every x-independent factor of an I0-type integrand is folded into one
//! coefficient per node, so the integral at any x is a plain exponential sum.

use num_complex::Complex64;

use crate::expr::Expression;
use crate::quad::{gauss_legendre, ContourPath, Piece};

type C = Complex64;

const GL_ORDER: usize = 16;
const MAX_PANELS: usize = 40_000;

/// Quadrature node `k` with complex weight `w` (including dk).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub k: C,
    pub w: C,
}

/// Controls panel width and ray truncation.
pub(crate) struct Envelope<'a> {
    /// log of an upper bound for |integrand| at k over all x of interest
    pub log_env: &'a dyn Fn(C) -> f64,
    /// local phase rate of the integrand in k
    pub rate: &'a dyn Fn(C) -> f64,
    pub log_cut: f64,
}

impl Envelope<'_> {
    fn width(&self, k: C) -> f64 {
        (8.0 / (self.rate)(k).max(1e-9)).min(0.5)
    }
}

pub(crate) fn discretize(path: &ContourPath, env: &Envelope) -> Vec<Node> {
    let rule = gauss_legendre(GL_ORDER);
    let mut out = Vec::new();
    let mut panel = |a: f64, b: f64, map: &dyn Fn(f64) -> (C, C), sign: f64, out: &mut Vec<Node>| {
        let h = 0.5 * (b - a);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = a + h * (x + 1.0);
            let (k, dk) = map(s);
            out.push(Node { k, w: dk * (sign * h * w) });
        }
    };
    for piece in &path.pieces {
        match *piece {
            Piece::Segment { a, b } => {
                let len = (b - a).norm();
                let dir = (b - a) / len;
                let width = env.width(a).min(env.width(b));
                let n = ((len / width).ceil() as usize).clamp(1, MAX_PANELS);
                let map = |s: f64| (a + dir * s, dir);
                for p in 0..n {
                    panel(len * p as f64 / n as f64, len * (p + 1) as f64 / n as f64, &map, 1.0, &mut out);
                }
            }
            Piece::Arc { center, radius, theta0, theta1 } => {
                let len = radius * (theta1 - theta0).abs();
                let mut width = f64::INFINITY;
                for j in 0..=8 {
                    let th = theta0 + (theta1 - theta0) * j as f64 / 8.0;
                    width = width.min(env.width(center + C::from_polar(radius, th)));
                }
                let n = ((len / width).ceil() as usize).clamp(1, MAX_PANELS);
                let map = |th: f64| {
                    let e = C::from_polar(radius, th);
                    (center + e, C::new(0.0, 1.0) * e)
                };
                for p in 0..n {
                    let a = theta0 + (theta1 - theta0) * p as f64 / n as f64;
                    let b = theta0 + (theta1 - theta0) * (p + 1) as f64 / n as f64;
                    panel(a, b, &map, 1.0, &mut out);
                }
            }
            Piece::Ray { start, dir } => march(start, dir, 1.0, env, &mut panel, &mut out),
            Piece::RayIn { end, dir } => march(end, dir, -1.0, env, &mut panel, &mut out),
        }
    }
    out
}

fn march(
    origin: C,
    dir: C,
    sign: f64,
    env: &Envelope,
    panel: &mut impl FnMut(f64, f64, &dyn Fn(f64) -> (C, C), f64, &mut Vec<Node>),
    out: &mut Vec<Node>,
) {
    let map = |rho: f64| (origin + dir * rho, dir);
    let mut rho = 0.0;
    for _ in 0..MAX_PANELS {
        let k0 = origin + dir * rho;
        let width = env.width(k0);
        let next = rho + width;
        panel(rho, next, &map, sign, out);
        let l0 = (env.log_env)(k0);
        let l1 = (env.log_env)(origin + dir * next);
        rho = next;
        if rho >= 1.0 && l1 <= l0 && l1 + width.ln() < env.log_cut {
            break;
        }
    }
}

/// Value `Re sum coef_j exp(rate_j x)`.
#[derive(Debug, Clone, Default)]
pub(crate) struct ExpSum {
    pub rates: Vec<C>,
    pub coefs: Vec<C>,
}

impl ExpSum {
    pub fn push(&mut self, rate: C, coef: C) {
        if coef.norm() > 0.0 {
            self.rates.push(rate);
            self.coefs.push(coef);
        }
    }

    pub fn eval(&self, x: f64) -> C {
        self.rates.iter().zip(&self.coefs).map(|(r, c)| c * (r * x).exp()).sum()
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.rates.len()
    }
}

/// Extent Y beyond which |u0(y)| e^{beta y} is negligible, and an estimate of
/// int_0^Y |u0(y)| e^{beta y} dy.
pub(crate) fn data_extent(u0: &Expression, beta: f64) -> (f64, f64) {
    let step = 0.125;
    let mut peak: f64 = 0.0;
    let mut last = 0.0;
    let mut mass = 0.0;
    let mut y = 0.0;
    while y <= 400.0 {
        let v = u0.eval(y).map(|v| v.abs() * (beta * y).exp()).unwrap_or(0.0);
        if v.is_finite() {
            peak = peak.max(v);
            mass += v * step;
            if v > 1e-17 * peak {
                last = y;
            }
        }
        y += step;
    }
    (last.max(1.0), (2.0 * mass).max(1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_path, DecayDescriptor, PathOptions};

    #[test]
    fn matches_adaptive_path_integral() {
        // int over a radius-2 wedge at angles 5pi/6, pi/6 (clear of the pole at i) of k e^{ikx - k^2 t} / (k^2 + 1) dk at x = 0.7, t = 0.4
        let (x, t) = (0.7, 0.4);
        let f = |k: C| k * (C::new(0.0, 1.0) * k * x - k * k * t).exp() / (k * k + 1.0);
        let path = ContourPath::wedge(2.0, 5.0 * std::f64::consts::PI / 6.0, std::f64::consts::PI / 6.0);
        let log_env = |k: C| (C::new(0.0, 1.0) * k * x - k * k * t).re;
        let rate = |k: C| x + 2.0 * k.norm() * t;
        let env = Envelope { log_env: &log_env, rate: &rate, log_cut: -40.0 };
        let nodes = discretize(&path, &env);
        let fixed: C = nodes.iter().map(|n| f(n.k) * n.w).sum();
        let r = integrate_path(f, &path, &PathOptions::new(1e-13, DecayDescriptor::gaussian(0.25 * t)).oscillation(x)).unwrap();
        assert!((fixed - r.value).norm() < 1e-12, "{fixed} vs {}", r.value);
    }

    #[test]
    fn exp_sum_skips_zero_terms() {
        let mut s = ExpSum::default();
        s.push(C::new(0.0, 1.0), C::new(0.0, 0.0));
        s.push(C::new(0.0, 1.0), C::new(1.0, 0.0));
        assert_eq!(s.len(), 1);
        assert!((s.eval(std::f64::consts::PI).re + 1.0).abs() < 1e-15);
    }
}
