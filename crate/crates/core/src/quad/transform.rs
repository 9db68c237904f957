use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex64;

use super::adaptive::{adaptive, AdaptOptions};
use super::rules::{gauss_legendre, GaussRule};
use super::QuadError;
use crate::expr::Expression;

type C = Complex64;

/// Find Y with |u0(y)| e^{beta y} negligible on [Y, infinity), assuming u0
/// decays at least like e^{-rate y} eventually.
fn half_line_cutoff(u0: &Expression, beta: f64, rate: f64, tol: f64) -> Result<f64, QuadError> {
    let margin = rate - beta;
    if !(margin > 0.0) {
        return Err(QuadError::Divergence(format!(
            "e^(-iky) u0(y) with Im k = {beta} is not dominated by the declared decay rate {rate}"
        )));
    }
    let g = |y: f64| u0.eval(y).map(|v| v.abs() * (beta * y).exp()).unwrap_or(f64::INFINITY);
    let mut y = 1.0;
    while y < 1e5 {
        // sup over [y, 2y] sampled, then an exponential tail bound
        let sup = (0..=8).map(|j| g(y * (1.0 + j as f64 / 8.0))).fold(0.0, f64::max);
        if sup.is_finite() && sup * (1.0 / margin + y) < 0.05 * tol {
            return Ok(y);
        }
        y *= 1.5;
    }
    Err(QuadError::Divergence("initial datum does not decay within y < 1e5".into()))
}

/// u0-hat(k) = int_0^inf e^{-iky} u0(y) dy.
///
/// `decay_rate` is the exponential rate at which u0 is known to decay; it
/// must exceed Im k.
pub fn half_line_transform(u0: &Expression, k: C, decay_rate: f64, tol: f64) -> Result<C, QuadError> {
    if u0.is_zero() {
        return Ok(C::new(0.0, 0.0));
    }
    let cutoff = half_line_cutoff(u0, k.im, decay_rate, tol)?;
    integrate_against_exponential(u0, k, 0.0, cutoff, 0.5 * tol)
}

/// int_0^L e^{-iky} u0(y) dy, entire in k.
pub fn finite_interval_transform(u0: &Expression, l: f64, k: C, tol: f64) -> Result<C, QuadError> {
    if u0.is_zero() {
        return Ok(C::new(0.0, 0.0));
    }
    integrate_against_exponential(u0, k, 0.0, l, tol)
}

fn integrate_against_exponential(u0: &Expression, k: C, a: f64, b: f64, tol: f64) -> Result<C, QuadError> {
    let mut bad = None;
    let f = |y: f64| match u0.eval(y) {
        Ok(v) => (C::new(0.0, -1.0) * k * y).exp() * v,
        Err(e) => {
            bad.get_or_insert(e);
            C::new(f64::NAN, 0.0)
        }
    };
    let panels = ((b - a) * k.re.abs() * 2.0 / std::f64::consts::PI).ceil() as usize + ((b - a) / 2.0).ceil() as usize;
    let r = adaptive(f, a, b, AdaptOptions::new(tol).panels(panels.min(20_000)));
    if let Some(e) = bad {
        return Err(QuadError::Data(e.to_string()));
    }
    if !r.converged {
        return Err(QuadError::NoConvergence { piece: 0, interval: r.worst, error: r.error });
    }
    Ok(r.value)
}

const SAMPLE_ORDER: usize = 20;
const MAX_LEVEL: i32 = 14;

/// int_0^Y e^{-iky} u0(y) dy at many k from one set of u0 samples.
///
/// Level L uses composite Gauss-Legendre panels of width 2^(1-L); a k is
/// served from the coarsest level with |k| * width / 2 <= 4 that also
/// resolves u0 itself. Frequencies beyond the finest level fall back to
/// adaptive quadrature.
pub struct SampledTransform {
    u0: Expression,
    /// Interval end for the finite-interval transform, None for the half-line.
    end: Option<f64>,
    decay_rate: f64,
    tol: f64,
    min_level: i32,
    rule: GaussRule,
    /// Per level: panel width and (y, w u0(y)) in increasing y.
    levels: RefCell<HashMap<i32, (f64, Vec<(f64, f64)>)>>,
    /// Cutoffs by Im k.
    extents: RefCell<HashMap<u64, f64>>,
}

impl SampledTransform {
    pub fn half_line(u0: &Expression, decay_rate: f64, tol: f64) -> Result<Self, QuadError> {
        Self::build(u0, None, decay_rate, tol)
    }

    pub fn finite(u0: &Expression, l: f64, tol: f64) -> Result<Self, QuadError> {
        Self::build(u0, Some(l), 0.0, tol)
    }

    fn build(u0: &Expression, end: Option<f64>, decay_rate: f64, tol: f64) -> Result<Self, QuadError> {
        let mut st = SampledTransform {
            u0: u0.clone(),
            end,
            decay_rate,
            tol,
            min_level: 0,
            rule: gauss_legendre(SAMPLE_ORDER),
            levels: RefCell::new(HashMap::new()),
            extents: RefCell::new(HashMap::new()),
        };
        if u0.is_zero() {
            return Ok(st);
        }
        let y0 = st.extent(0.0)?;
        let probe = |st: &SampledTransform, level: i32| -> Result<(C, f64), QuadError> {
            let (_, n) = st.ensure(level, y0)?;
            let cache = st.levels.borrow();
            let samples = &cache[&level].1[..n];
            let mut acc = C::new(0.0, 0.0);
            let mut mass = 0.0;
            for &(y, wu) in samples {
                acc += wu * C::new(1.0, y.cos());
                mass += wu.abs();
            }
            Ok((acc, mass))
        };
        let mut prev = probe(&st, 0)?;
        for level in 1..=MAX_LEVEL {
            let cur = probe(&st, level)?;
            if (cur.0 - prev.0).norm() <= tol * cur.1.max(1.0) {
                st.min_level = level;
                return Ok(st);
            }
            prev = cur;
        }
        st.min_level = MAX_LEVEL + 1;
        Ok(st)
    }

    fn extent(&self, beta: f64) -> Result<f64, QuadError> {
        if let Some(l) = self.end {
            return Ok(l);
        }
        if let Some(y) = self.extents.borrow().get(&beta.to_bits()) {
            return Ok(*y);
        }
        let y = half_line_cutoff(&self.u0, beta, self.decay_rate, self.tol)?;
        self.extents.borrow_mut().insert(beta.to_bits(), y);
        Ok(y)
    }

    /// Samples of `level` covering [0, y]; returns the panel width and the
    /// number of samples needed.
    fn ensure(&self, level: i32, y: f64) -> Result<(f64, usize), QuadError> {
        let mut cache = self.levels.borrow_mut();
        let entry = cache.entry(level).or_insert_with(|| {
            let nominal = 2f64.powi(1 - level);
            let width = match self.end {
                Some(l) => l / (l / nominal).ceil().max(1.0),
                None => nominal,
            };
            (width, Vec::new())
        });
        let width = entry.0;
        let panels = match self.end {
            Some(l) => (l / width).round() as usize,
            None => (y / width).ceil().max(1.0) as usize,
        };
        let have = entry.1.len() / SAMPLE_ORDER;
        for p in have..panels {
            let a = p as f64 * width;
            for (x, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                let yy = a + 0.5 * width * (x + 1.0);
                let v = self.u0.eval(yy).map_err(|e| QuadError::Data(e.to_string()))?;
                entry.1.push((yy, 0.5 * width * w * v));
            }
        }
        Ok((width, panels * SAMPLE_ORDER))
    }

    pub fn eval(&self, k: C) -> Result<C, QuadError> {
        if self.u0.is_zero() {
            return Ok(C::new(0.0, 0.0));
        }
        let need = (1.0 + (k.norm() / 8.0).log2()).ceil() as i32;
        let level = need.max(self.min_level);
        if level > MAX_LEVEL {
            return match self.end {
                Some(l) => finite_interval_transform(&self.u0, l, k, self.tol),
                None => half_line_transform(&self.u0, k, self.decay_rate, self.tol),
            };
        }
        let y = self.extent(k.im)?;
        let (_, n) = self.ensure(level, y)?;
        let cache = self.levels.borrow();
        let mik = C::new(0.0, -1.0) * k;
        Ok(cache[&level].1[..n].iter().map(|&(y, wu)| wu * (mik * y).exp()).sum())
    }
}
