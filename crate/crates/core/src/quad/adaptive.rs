use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::rules::{WG, WGK, XGK};

/// Values that can be integrated: real or complex.
pub trait Field: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn norm(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdiv: usize,
    pub initial_panels: usize,
}

impl AdaptOptions {
    pub fn new(abs_tol: f64) -> Self {
        AdaptOptions { abs_tol, rel_tol: 1e-14, max_subdiv: 4000, initial_panels: 1 }
    }

    pub fn panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
    /// Interval with the largest remaining error estimate.
    pub worst: (f64, f64),
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss-Kronrod 7/15 step: (Kronrod value, |K - G| error).
pub fn gk15<T: Field>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    let mut err = (k - g).norm();
    if !k.is_finite() {
        err = f64::INFINITY;
    }
    (k, err)
}

/// Globally adaptive Gauss-Kronrod integration of `f` over [a, b].
pub fn adaptive<T: Field>(mut f: impl FnMut(f64) -> T, a: f64, b: f64, opts: AdaptOptions) -> QuadResult<T> {
    let mut heap = BinaryHeap::new();
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut total = T::zero();
    let mut err_total = 0.0;
    let mut evals = 0;
    for i in 0..n0 {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == n0 { b } else { lo + width };
        let (v, e) = gk15(&mut f, lo, hi);
        evals += 15;
        total = total + v;
        err_total += e;
        heap.push(Panel { a: lo, b: hi, value: v, error: e });
    }
    let min_width = (b - a).abs() * 1e-13;
    let mut subdivisions = 0;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err_total <= target {
            let worst = heap.peek().map(|p| (p.a, p.b)).unwrap_or((a, b));
            return QuadResult { value: total, error: err_total, evals, converged: true, worst };
        }
        if subdivisions >= opts.max_subdiv {
            break;
        }
        let Some(p) = heap.pop() else { break };
        if (p.b - p.a).abs() < min_width {
            // cannot refine further; keep it and stop
            heap.push(p);
            break;
        }
        let mid = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, mid);
        let (v2, e2) = gk15(&mut f, mid, p.b);
        evals += 30;
        subdivisions += 1;
        total = total - p.value + v1 + v2;
        err_total += e1 + e2 - p.error;
        heap.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
    }
    // recompute sums from scratch to shed accumulated rounding
    let mut value = T::zero();
    let mut error = 0.0;
    let mut worst = (a, b);
    let mut worst_err = -1.0;
    for p in heap.iter() {
        value = value + p.value;
        error += p.error;
        if p.error > worst_err {
            worst_err = p.error;
            worst = (p.a, p.b);
        }
    }
    let target = opts.abs_tol.max(opts.rel_tol * value.norm());
    QuadResult { value, error, evals, converged: error <= target, worst }
}
