//! Heat equation on (0, L) with Dirichlet data at both ends.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::heat::{even_tilde, rotated_omega};
use super::kgrid::{data_extent, ExpSum};
use super::{ContinuousError, Datum, Result, Solver, TaylorExtension};
use crate::expr::Expression;
use crate::quad::{integrate_path, DecayDescriptor, PathOptions, StabilizedTransform};

type C = Complex64;

/// Leading terms of the large-lambda expansion subtracted from the series.
const ASYMPTOTIC_ORDERS: usize = 6;
const MAX_TERMS: usize = 200_000;

/// Bernoulli numbers B_0..B_12.
const BERNOULLI: [f64; 13] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
];

fn bernoulli_poly(m: usize, x: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for k in 0..=m {
        acc += binom * BERNOULLI[k] * x.powi((m - k) as i32);
        binom *= (m - k) as f64 / (k + 1) as f64;
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// sum_{n>=1} sin(n theta) / n^(2j+1) for theta in [0, 2 pi].
pub(super) fn sine_zeta(j: usize, theta: f64) -> f64 {
    let m = 2 * j + 1;
    let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
    sign * (2.0 * PI).powi(m as i32) * bernoulli_poly(m, theta / (2.0 * PI)) / (2.0 * factorial(m))
}

impl Solver {
    /// Sine series of the initial-data part.
    pub(super) fn interval_i0_sum(&self, t: f64) -> Result<ExpSum> {
        let l = self.spec.length;
        let (_, mass) = data_extent(&self.spec.u0, 0.0);
        let amp = 2.0 / l * mass;
        let mut sum = ExpSum::default();
        for n in 1..MAX_TERMS {
            let kn = n as f64 * PI / l;
            let decay = (-kn * kn * t).exp();
            if amp * decay < self.tol() * 1e-4 {
                break;
            }
            let b = -2.0 / l * self.u0_hat(C::new(kn, 0.0))?.im;
            sum.push(C::new(0.0, kn), C::new(0.0, -b * decay));
        }
        Ok(sum)
    }

    /// Boundary integral for the datum at x = 0, at distance y in (0, 2L),
    /// as a Fourier sine series with the slowly decaying part summed in
    /// closed form.
    pub(super) fn interval_fourier(&self, f: &Expression, y: f64, t: f64) -> Result<f64> {
        let l = self.spec.length;
        let tol = self.tol();
        let theta = PI * y / l;
        let d = f.derivatives(t, ASYMPTOTIC_ORDERS)?;
        let q = l * l / (PI * PI);
        let mut closed = 0.0;
        for j in 0..ASYMPTOTIC_ORDERS {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            closed += 2.0 * PI / (l * l) * q.powi(j as i32 + 1) * sign * d[j] * sine_zeta(j, theta);
        }
        let st = StabilizedTransform::new(f, t, tol)?;
        let mut rem = 0.0;
        let mut small = 0;
        let tail_scale = d[ASYMPTOTIC_ORDERS].abs().max(1.0);
        for n in 1..MAX_TERMS {
            let nf = n as f64;
            let lambda = nf * nf / q;
            let e = st.eval(C::new(lambda, 0.0)).re;
            let mut asym = 0.0;
            let mut p = 1.0 / lambda;
            for j in 0..ASYMPTOTIC_ORDERS {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                asym += sign * d[j] * p;
                p /= lambda;
            }
            let term = 2.0 * nf * PI / (l * l) * (e - asym) * (nf * theta).sin();
            rem += term;
            // remaining terms fall off like n^(1 - 2(J+1))
            let bound = 2.0 * nf * PI / (l * l) * tail_scale * p * nf / (2.0 * ASYMPTOTIC_ORDERS as f64);
            if term.abs() < tol * 1e-3 && bound < tol * 1e-3 {
                small += 1;
                if small >= 8 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Ok(closed + rem)
    }

    fn interval_bound(&self, x: f64) -> Result<()> {
        let l = self.spec.length;
        let depth = self.opts.tile_depth;
        if x.abs() > depth * l {
            return Err(ContinuousError::Domain(format!("x = {x} beyond the tiling depth {depth} L = {}", depth * l)));
        }
        Ok(())
    }

    fn interval_f0_ext(&self, x: f64, t: f64) -> Result<f64> {
        let l = self.spec.length;
        let f = self.f(Datum::F0)?;
        let n = (x / (2.0 * l)).floor() as i64;
        let y = x - 2.0 * n as f64 * l;
        let mut v = if y == 0.0 { f.eval(t)? } else { self.interval_fourier(f, y, t)? };
        if n == 0 || f.is_zero() {
            return Ok(v);
        }
        let ext = self.extension(Datum::F0, t, x.abs().max(2.0 * l))?;
        if n > 0 {
            for j in 1..=n {
                v -= ext.tilde(x - 2.0 * j as f64 * l);
            }
        } else {
            for j in 0..(-n) {
                v += ext.tilde(x + 2.0 * j as f64 * l);
            }
        }
        Ok(v)
    }

    fn interval_g0_ext(&self, x: f64, t: f64) -> Result<f64> {
        let l = self.spec.length;
        let g = self.f(Datum::G0)?;
        let n = ((x + l) / (2.0 * l)).ceil() as i64 - 1;
        let y = x - 2.0 * n as f64 * l;
        let mut v = if y == l { g.eval(t)? } else { self.interval_fourier(g, l - y, t)? };
        if n == 0 || g.is_zero() {
            return Ok(v);
        }
        let ext = self.extension(Datum::G0, t, l + (x - l).abs().max(2.0 * l))?;
        if n > 0 {
            for j in 0..n {
                v += ext.tilde(x - 2.0 * j as f64 * l);
            }
        } else {
            for j in 1..=(-n) {
                v -= ext.tilde(x + 2.0 * j as f64 * l);
            }
        }
        Ok(v)
    }

    pub(super) fn interval_extended(&self, x: f64, t: f64) -> Result<f64> {
        self.interval_bound(x)?;
        let l = self.spec.length;
        if x == 0.0 {
            return Ok(self.f(Datum::F0)?.eval(t)?);
        }
        if x == l {
            return Ok(self.f(Datum::G0)?.eval(t)?);
        }
        Ok(self.i0(x, t)? + self.interval_f0_ext(x, t)? + self.interval_g0_ext(x, t)?)
    }

    /// Tiled whole-line initial condition.
    pub(super) fn interval_w0(&self, x: f64) -> Result<f64> {
        self.interval_bound(x)?;
        let l = self.spec.length;
        let u0 = &self.spec.u0;
        let f = self.f(Datum::F0)?;
        let g = self.f(Datum::G0)?;
        let ft = |z: f64| even_tilde(f, z, 0.0, self.opts);
        let gt = |z: f64| even_tilde(g, z - l, 0.0, self.opts);
        let n = (x / (2.0 * l)).floor() as i64;
        let y = x - 2.0 * n as f64 * l;
        let mut v = if y < l { u0.eval(y)? } else { -u0.eval(2.0 * l - y)? };
        if n < 0 {
            for j in 0..(-n) {
                v += ft(x + 2.0 * j as f64 * l)?;
            }
        } else {
            for j in 1..=n {
                v -= ft(x - 2.0 * j as f64 * l)?;
            }
        }
        let m = ((x + l) / (2.0 * l)).ceil() as i64 - 1;
        if m < 0 {
            for j in 1..=(-m) {
                v -= gt(x + 2.0 * j as f64 * l)?;
            }
        } else {
            for j in 0..m {
                v += gt(x - 2.0 * j as f64 * l)?;
            }
        }
        Ok(v)
    }
}

/// Coefficients of I_g0(x) = I[g0](L - x) in powers of (x - L).
pub(super) fn reflect_about_l(mut e: TaylorExtension) -> TaylorExtension {
    for (j, c) in e.coefficients.iter_mut().enumerate() {
        if j % 2 == 1 {
            *c = -*c;
        }
    }
    e
}

/// Contour form (1/(i pi)) int k [e^{ik(2L-y)} - e^{iky}] / [e^{2ikL} - 1] E(k^2) dk
/// over the rotated boundary of the heat sector, y in (0, 2L).
pub(super) fn contour(f: &Expression, l: f64, y: f64, t: f64, tol: f64) -> Result<f64> {
    let st = StabilizedTransform::new(f, t, tol)?;
    let i = C::new(0.0, 1.0);
    let g = |k: C| {
        let num = (i * k * (2.0 * l - y)).exp() - (i * k * y).exp();
        let den = (i * k * 2.0 * l).exp() - 1.0;
        k * num / den * st.eval(k * k)
    };
    let rate = 0.5 * y.min(2.0 * l - y);
    let opts = PathOptions::new(tol * 0.1, DecayDescriptor::exponential(rate)).oscillation(2.0 * l);
    let r = integrate_path(g, &rotated_omega(), &opts)?;
    Ok((r.value / (i * PI)).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_zeta_matches_direct_sums() {
        for j in 1..ASYMPTOTIC_ORDERS {
            for theta in [0.3, 1.0, 2.5, 4.0, 6.0] {
                let direct: f64 = (1..200_000).map(|n| (n as f64 * theta).sin() / (n as f64).powi(2 * j as i32 + 1)).sum();
                assert!((sine_zeta(j, theta) - direct).abs() < 1e-12, "j={j} theta={theta}");
            }
        }
        // j = 0 is the sawtooth (pi - theta)/2
        assert!((sine_zeta(0, 1.0) - (PI - 1.0) / 2.0).abs() < 1e-15);
    }
}
