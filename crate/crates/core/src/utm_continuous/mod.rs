//! Continuous-space UTM solvers and their analytic continuation outside the
//! physical domain: heat (Dirichlet, Neumann, finite interval), advected heat,
//! linear KdV with one and two boundary conditions, and transport.
//!
//! A [`Solver`] holds one problem plus per-worker caches (spectral transforms
//! of u0, discretized contours, Taylor extensions). It is cheap to build and
//! not `Sync`; parallel callers create one per worker.

mod advected;
mod heat;
mod interval;
mod kdv;
mod kgrid;
mod reference;
mod taylor;

#[cfg(test)]
mod tests;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{ExprError, Expression};
use crate::quad::{QuadError, SampledTransform};
use crate::specfun::SpecfunError;

pub use reference::{reference_whole_line, ReferenceSolution};
pub use taylor::{Parity, TaylorExtension};

use kgrid::ExpSum;
pub(crate) use kgrid::data_extent;

type C = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuousError {
    #[error("invalid problem: {0}")]
    Spec(String),
    #[error("decay class: {0}")]
    Decay(String),
    #[error("{0}")]
    Domain(String),
    #[error("x = {x} lies outside the region where the {what} integral is defined; use the extended evaluation")]
    OutsideWedge { x: f64, what: String },
    #[error("data incompatible at order {order}: residual {residual:e} ({condition})")]
    Incompatible { order: usize, condition: String, residual: f64 },
    #[error("u0 cannot be evaluated off the real axis: {0}")]
    NotAnalytic(String),
    #[error("unknown reference solution '{0}'")]
    UnknownReference(String),
    #[error("unsupported for {kind}: {what}")]
    Unsupported { kind: ProblemKind, what: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

pub type Result<T> = std::result::Result<T, ContinuousError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Transport,
    HeatDirichlet,
    HeatNeumann,
    HeatFiniteInterval,
    AdvectedHeat,
    KdvOneBc,
    KdvTwoBc,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 7] = [
        ProblemKind::Transport,
        ProblemKind::HeatDirichlet,
        ProblemKind::HeatNeumann,
        ProblemKind::HeatFiniteInterval,
        ProblemKind::AdvectedHeat,
        ProblemKind::KdvOneBc,
        ProblemKind::KdvTwoBc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Transport => "transport",
            ProblemKind::HeatDirichlet => "heat-dirichlet",
            ProblemKind::HeatNeumann => "heat-neumann",
            ProblemKind::HeatFiniteInterval => "heat-finite-interval",
            ProblemKind::AdvectedHeat => "advected-heat",
            ProblemKind::KdvOneBc => "kdv-one-bc",
            ProblemKind::KdvTwoBc => "kdv-two-bc",
        }
    }

    /// Boundary data the kind requires.
    pub fn required_data(self) -> &'static [Datum] {
        match self {
            ProblemKind::Transport => &[Datum::F0],
            ProblemKind::HeatDirichlet | ProblemKind::AdvectedHeat | ProblemKind::KdvOneBc => &[Datum::F0],
            ProblemKind::HeatNeumann => &[Datum::F1],
            ProblemKind::HeatFiniteInterval => &[Datum::F0, Datum::G0],
            ProblemKind::KdvTwoBc => &[Datum::F0, Datum::F1],
        }
    }

    /// Dispersion relation W(k) with u ~ e^{ikx - W t}.
    pub fn dispersion(self, k: C, c: f64) -> C {
        let i = C::new(0.0, 1.0);
        match self {
            ProblemKind::Transport => -i * k * c,
            ProblemKind::HeatDirichlet | ProblemKind::HeatNeumann | ProblemKind::HeatFiniteInterval => k * k,
            ProblemKind::AdvectedHeat => k * k - i * k * c,
            ProblemKind::KdvOneBc => -i * k * k * k,
            ProblemKind::KdvTwoBc => i * k * k * k,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = ContinuousError;
    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ContinuousError::Spec(format!("unknown problem kind '{s}'")))
    }
}

/// Boundary datum selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Datum {
    F0,
    F1,
    G0,
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Datum::F0 => "f0",
            Datum::F1 => "f1",
            Datum::G0 => "g0",
        })
    }
}

/// How fast u0 decays at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DecayClass {
    Integrable,
    /// |u0(y)| e^{rate y} integrable.
    Exponential(f64),
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub u0: Expression,
    pub f0: Option<Expression>,
    pub f1: Option<Expression>,
    pub g0: Option<Expression>,
    /// Advection speed (advected heat, transport).
    pub c: f64,
    /// Interval length (finite interval).
    pub length: f64,
    pub decay: DecayClass,
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind, u0: Expression) -> Self {
        ProblemSpec { kind, u0, f0: None, f1: None, g0: None, c: 0.0, length: 1.0, decay: DecayClass::Integrable }
    }

    pub fn with_f0(mut self, e: Expression) -> Self {
        self.f0 = Some(e);
        self
    }

    pub fn with_f1(mut self, e: Expression) -> Self {
        self.f1 = Some(e);
        self
    }

    pub fn with_g0(mut self, e: Expression) -> Self {
        self.g0 = Some(e);
        self
    }

    pub fn with_speed(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_length(mut self, l: f64) -> Self {
        self.length = l;
        self
    }

    pub fn with_decay(mut self, d: DecayClass) -> Self {
        self.decay = d;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let required = self.kind.required_data();
        for d in [Datum::F0, Datum::F1, Datum::G0] {
            let present = self.datum_opt(d).is_some();
            if required.contains(&d) && !present {
                return Err(ContinuousError::Spec(format!("{} requires {d}", self.kind)));
            }
            if !required.contains(&d) && present {
                return Err(ContinuousError::Spec(format!("{} does not take {d}", self.kind)));
            }
        }
        if !self.c.is_finite() {
            return Err(ContinuousError::Spec("advection speed must be finite".into()));
        }
        match self.kind {
            ProblemKind::Transport if self.c == 0.0 => {
                return Err(ContinuousError::Spec("transport needs a nonzero speed c".into()))
            }
            ProblemKind::HeatFiniteInterval if !(self.length > 0.0 && self.length.is_finite()) => {
                return Err(ContinuousError::Spec(format!("interval length must be positive, got {}", self.length)))
            }
            ProblemKind::KdvOneBc if !matches!(self.decay, DecayClass::Exponential(r) if r > 0.0) => {
                return Err(ContinuousError::Decay("kdv-one-bc needs u0 with exponential decay e^{-eps y}, eps > 0".into()))
            }
            _ => {}
        }
        if let DecayClass::Exponential(r) = self.decay {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ContinuousError::Decay(format!("decay rate must be positive, got {r}")));
            }
        }
        Ok(())
    }

    fn datum_opt(&self, d: Datum) -> Option<&Expression> {
        match d {
            Datum::F0 => self.f0.as_ref(),
            Datum::F1 => self.f1.as_ref(),
            Datum::G0 => self.g0.as_ref(),
        }
    }

    pub fn datum(&self, d: Datum) -> Result<&Expression> {
        self.datum_opt(d).ok_or_else(|| ContinuousError::Spec(format!("{} has no datum {d}", self.kind)))
    }

    /// Rate used for transforms of u0. Plain integrable data on the real axis
    /// only needs some positive rate for the cutoff search.
    pub(crate) fn decay_rate(&self) -> f64 {
        match self.decay {
            DecayClass::Exponential(r) => r,
            DecayClass::Integrable => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: f64,
    /// Cap on the derivative order used by Taylor extensions.
    pub taylor_max_order: usize,
    /// Finite-interval tiling reach in units of L.
    pub tile_depth: f64,
    /// |x| up to which cached contour discretizations are built.
    pub x_scale: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { tol: 1e-10, taylor_max_order: 200, tile_depth: 5.0, x_scale: 5.0 }
    }
}

impl Options {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Interior,
    Continued,
    Reference,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Interior => "interior",
            Provenance::Continued => "continued",
            Provenance::Reference => "reference",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolutionSample {
    pub x: f64,
    pub t: f64,
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatResidual {
    pub order: usize,
    pub condition: String,
    pub residual: f64,
}

/// Compatible through order m: every residual of order <= m below 1e-9.
pub fn compatible_to(residuals: &[CompatResidual], m: usize) -> bool {
    residuals.iter().filter(|r| r.order <= m).all(|r| r.residual < 1e-9)
}

#[derive(Default)]
struct Caches {
    transforms: HashMap<(u64, u64), C>,
    sums: HashMap<(u64, u64), Rc<ExpSum>>,
    extensions: HashMap<(Datum, u64), (f64, Rc<TaylorExtension>)>,
    sampler: Option<Rc<SampledTransform>>,
    warnings: Vec<String>,
}

/// Per-worker evaluator for one problem.
pub struct Solver {
    spec: ProblemSpec,
    opts: Options,
    cache: RefCell<Caches>,
}

impl Solver {
    pub fn new(spec: ProblemSpec, opts: Options) -> Result<Self> {
        spec.validate()?;
        if !(opts.tol > 0.0) {
            return Err(ContinuousError::Spec(format!("tolerance must be positive, got {}", opts.tol)));
        }
        Ok(Solver { spec, opts, cache: RefCell::new(Caches::default()) })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn options(&self) -> &Options {
        &self.opts
    }

    pub fn warnings(&self) -> Vec<String> {
        self.cache.borrow().warnings.clone()
    }

    /// Truncation orders of the cached extensions as (datum, t, order),
    /// sorted by datum and time.
    pub fn truncation_orders(&self) -> Vec<(Datum, f64, usize)> {
        let mut v: Vec<_> = self
            .cache
            .borrow()
            .extensions
            .iter()
            .map(|((d, t), (_, e))| (*d, f64::from_bits(*t), e.order))
            .collect();
        v.sort_by(|a, b| (a.0 as u8, a.1).partial_cmp(&(b.0 as u8, b.1)).unwrap());
        v
    }

    fn warn(&self, msg: String) {
        let mut c = self.cache.borrow_mut();
        if !c.warnings.contains(&msg) {
            c.warnings.push(msg);
        }
    }

    fn tol(&self) -> f64 {
        self.opts.tol
    }

    fn f(&self, d: Datum) -> Result<&Expression> {
        self.spec.datum(d)
    }

    /// Half-line transform of u0 (interval transform for the finite interval).
    fn u0_hat(&self, k: C) -> Result<C> {
        let key = (k.re.to_bits(), k.im.to_bits());
        if let Some(v) = self.cache.borrow().transforms.get(&key) {
            return Ok(*v);
        }
        let sampler = self.cache.borrow().sampler.clone();
        let sampler = match sampler {
            Some(s) => s,
            None => {
                let tol = self.tol() * 1e-2;
                let s = Rc::new(match self.spec.kind {
                    ProblemKind::HeatFiniteInterval => SampledTransform::finite(&self.spec.u0, self.spec.length, tol)?,
                    _ => SampledTransform::half_line(&self.spec.u0, self.spec.decay_rate(), tol)?,
                });
                self.cache.borrow_mut().sampler = Some(s.clone());
                s
            }
        };
        let v = sampler.eval(k)?;
        self.cache.borrow_mut().transforms.insert(key, v);
        Ok(v)
    }

    fn x_bucket(&self, x: f64) -> f64 {
        let mut xs = self.opts.x_scale.max(1.0);
        while xs < x.abs() {
            xs *= 2.0;
        }
        xs
    }

    fn check_time(t: f64) -> Result<()> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(ContinuousError::Domain(format!("t must be positive, got {t}")));
        }
        Ok(())
    }

    /// The initial-condition integral I0(x, t), entire in x.
    pub fn i0(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if self.spec.u0.is_zero() {
            return Ok(0.0);
        }
        if self.spec.kind == ProblemKind::Transport {
            return Err(ContinuousError::Unsupported { kind: self.spec.kind, what: "spectral I0".into() });
        }
        let xs = self.x_bucket(x);
        let key = (t.to_bits(), xs.to_bits());
        let cached = self.cache.borrow().sums.get(&key).cloned();
        let sum = match cached {
            Some(s) => s,
            None => {
                let s = Rc::new(match self.spec.kind {
                    ProblemKind::HeatDirichlet | ProblemKind::HeatNeumann => self.heat_i0_sum(t, xs)?,
                    ProblemKind::HeatFiniteInterval => self.interval_i0_sum(t)?,
                    ProblemKind::AdvectedHeat => self.advected_i0_sum(t, xs)?,
                    ProblemKind::KdvOneBc => self.kdv1_i0_sum(t, xs)?,
                    ProblemKind::KdvTwoBc => self.kdv2_i0_sum(t, xs)?,
                    ProblemKind::Transport => unreachable!(),
                });
                self.cache.borrow_mut().sums.insert(key, s.clone());
                s
            }
        };
        let v = sum.eval(x);
        // sine and cosine sums keep only the real part by construction
        let full_integral = matches!(self.spec.kind, ProblemKind::AdvectedHeat | ProblemKind::KdvOneBc | ProblemKind::KdvTwoBc);
        if full_integral && v.im.abs() > 100.0 * self.tol() * v.re.abs().max(1.0) {
            self.warn(format!("I0 imaginary residue {:e} at x={x}, t={t}", v.im));
        }
        Ok(v.re)
    }

    /// The boundary integral for one datum inside its region of validity.
    pub fn boundary_integral(&self, d: Datum, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let f = self.f(d)?;
        let kind = self.spec.kind;
        if let Some(v) = self.boundary_convention(d, x, t)? {
            return Ok(v);
        }
        let outside = |what: &str| ContinuousError::OutsideWedge { x, what: what.into() };
        if f.is_zero() {
            return Ok(0.0);
        }
        match kind {
            ProblemKind::HeatFiniteInterval => {
                let l = self.spec.length;
                match d {
                    Datum::F0 if x > 0.0 && x < 2.0 * l => self.interval_fourier(f, x, t),
                    Datum::G0 if x > -l && x < l => self.interval_fourier(f, l - x, t),
                    _ => Err(outside(&format!("{d}"))),
                }
            }
            _ if x < 0.0 => Err(outside(&format!("{d}"))),
            ProblemKind::HeatDirichlet => heat::dirichlet_real(f, x, t, self.tol()),
            ProblemKind::HeatNeumann => heat::neumann_real(f, x, t, self.tol()),
            ProblemKind::AdvectedHeat => advected::boundary_real(f, self.spec.c, x, t, self.tol()),
            ProblemKind::KdvOneBc => kdv::kdv1_boundary_airy(f, x, t, self.tol()),
            ProblemKind::KdvTwoBc => {
                let ext = self.extension(d, t, x)?;
                Ok(ext.series(x))
            }
            ProblemKind::Transport => Err(ContinuousError::Unsupported { kind, what: "boundary integral".into() }),
        }
    }

    /// Datum value at the boundary point for Dirichlet-type data.
    fn boundary_convention(&self, d: Datum, x: f64, t: f64) -> Result<Option<f64>> {
        let kind = self.spec.kind;
        let f = self.f(d)?;
        let hit = match (kind, d) {
            (ProblemKind::HeatFiniteInterval, Datum::G0) => x == self.spec.length,
            (ProblemKind::HeatNeumann, _) | (ProblemKind::KdvTwoBc, Datum::F1) => false,
            _ => x == 0.0,
        };
        Ok(if hit { Some(f.eval(t)?) } else { None })
    }

    /// Contour-quadrature form of the boundary integral (heat Dirichlet and
    /// finite interval), independent of the routes used in production.
    pub fn boundary_integral_contour(&self, d: Datum, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let f = self.f(d)?;
        match self.spec.kind {
            ProblemKind::HeatDirichlet if x > 0.0 => heat::dirichlet_contour(f, x, t, self.tol()),
            ProblemKind::HeatFiniteInterval => {
                let l = self.spec.length;
                let y = if d == Datum::G0 { l - x } else { x };
                if !(y > 0.0 && y < 2.0 * l) {
                    return Err(ContinuousError::OutsideWedge { x, what: format!("{d}") });
                }
                interval::contour(f, l, y, t, self.tol())
            }
            kind => Err(ContinuousError::Unsupported { kind, what: "contour form of the boundary integral".into() }),
        }
    }

    /// Taylor coefficients of the boundary integral for datum `d` at time t,
    /// through derivative order n of the datum.
    pub fn taylor_coefficients(&self, d: Datum, t: f64, n: usize) -> Result<TaylorExtension> {
        Self::check_time(t)?;
        let f = self.f(d)?;
        match (self.spec.kind, d) {
            (ProblemKind::HeatDirichlet, Datum::F0) => heat::dirichlet_coefficients(f, t, n, d, 0.0),
            (ProblemKind::HeatFiniteInterval, Datum::F0) => heat::dirichlet_coefficients(f, t, n, d, 0.0),
            (ProblemKind::HeatFiniteInterval, Datum::G0) => {
                heat::dirichlet_coefficients(f, t, n, d, self.spec.length).map(interval::reflect_about_l)
            }
            (ProblemKind::HeatNeumann, Datum::F1) => heat::neumann_coefficients(f, t, n),
            (ProblemKind::AdvectedHeat, Datum::F0) => advected::coefficients(f, self.spec.c, t, n),
            (ProblemKind::KdvOneBc, Datum::F0) => kdv::kdv1_coefficients(f, t, n),
            (ProblemKind::KdvTwoBc, Datum::F0) => kdv::kdv2_f0_coefficients(f, t, n),
            (ProblemKind::KdvTwoBc, Datum::F1) => kdv::kdv2_f1_coefficients(f, t, n),
            (kind, d) => Err(ContinuousError::Unsupported { kind, what: format!("Taylor coefficients for {d}") }),
        }
    }

    /// Adaptively truncated extension valid for |x - center| up to the
    /// largest distance requested so far.
    pub fn extension(&self, d: Datum, t: f64, x: f64) -> Result<Rc<TaylorExtension>> {
        let center = if self.spec.kind == ProblemKind::HeatFiniteInterval && d == Datum::G0 { self.spec.length } else { 0.0 };
        let reach = self.x_bucket(x - center);
        let key = (d, t.to_bits());
        if let Some((r, e)) = self.cache.borrow().extensions.get(&key) {
            if *r >= reach {
                return Ok(e.clone());
            }
        }
        let cap = self.opts.taylor_max_order.min(crate::expr::DEFAULT_MAX_ORDER);
        let step = match self.spec.kind {
            ProblemKind::KdvOneBc | ProblemKind::KdvTwoBc => 8,
            _ => 12,
        };
        let mut n = step.min(cap);
        let mut last: Option<TaylorExtension> = None;
        let ext = loop {
            let e = match (self.taylor_coefficients(d, t, n), last.take()) {
                (Ok(e), _) => e,
                (Err(err), None) => return Err(err),
                (Err(err), Some(prev)) => {
                    self.warn(format!("Taylor extension of {d} at t={t} stopped at order {}: {err}", prev.order));
                    break prev;
                }
            };
            if e.converged_at(center + reach, self.tol()) {
                break e;
            }
            if n >= cap {
                self.warn(format!(
                    "Taylor extension of {d} at t={t} not converged at order {n}: tail bound {:e} at |x|={reach}",
                    e.tail_bound(center + reach)
                ));
                break e;
            }
            n = (n + step).min(cap);
            last = Some(e);
        };
        let ext = Rc::new(ext);
        self.cache.borrow_mut().extensions.insert(key, (reach, ext.clone()));
        Ok(ext)
    }

    /// Full continued solution u_ac(x, t).
    pub fn extended(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.sample(x, t)?.value)
    }

    pub fn sample(&self, x: f64, t: f64) -> Result<SolutionSample> {
        Self::check_time(t)?;
        if !x.is_finite() {
            return Err(ContinuousError::Domain(format!("x must be finite, got {x}")));
        }
        let kind = self.spec.kind;
        let inside = match kind {
            ProblemKind::HeatFiniteInterval => (0.0..=self.spec.length).contains(&x),
            _ => x >= 0.0,
        };
        let provenance = if inside { Provenance::Interior } else { Provenance::Continued };
        let value = match kind {
            ProblemKind::Transport => transport(&self.spec, x, t)?,
            ProblemKind::HeatFiniteInterval => self.interval_extended(x, t)?,
            _ => {
                if x == 0.0 && kind != ProblemKind::HeatNeumann {
                    self.f(Datum::F0)?.eval(t)?
                } else {
                    let mut v = self.i0(x, t)?;
                    for &d in kind.required_data() {
                        v += self.boundary_extended(d, x, t)?;
                    }
                    v
                }
            }
        };
        Ok(SolutionSample { x, t, value, provenance })
    }

    /// Boundary integral continued to x < 0 through the tilde reflection.
    fn boundary_extended(&self, d: Datum, x: f64, t: f64) -> Result<f64> {
        if x >= 0.0 {
            return self.boundary_integral(d, x, t);
        }
        if self.f(d)?.is_zero() {
            return Ok(0.0);
        }
        let mirror = self.boundary_integral(d, -x, t)?;
        if self.spec.kind == ProblemKind::AdvectedHeat {
            return Ok(advected::gauge_tilde(self.f(d)?, self.spec.c, x, t, self.opts)? - mirror);
        }
        let ext = self.extension(d, t, x)?;
        let plus = matches!((self.spec.kind, d), (ProblemKind::HeatNeumann, _) | (ProblemKind::KdvTwoBc, Datum::F1));
        Ok(if plus { ext.tilde(x) + mirror } else { ext.tilde(x) - mirror })
    }

    /// The tilde function of datum `d` at t = 0, for any real x.
    pub fn tilde_at_zero_time(&self, d: Datum, x: f64) -> Result<f64> {
        let f = self.f(d)?;
        match (self.spec.kind, d) {
            (ProblemKind::HeatDirichlet, Datum::F0) => heat::even_tilde(f, x, 0.0, self.opts),
            (ProblemKind::HeatNeumann, Datum::F1) => heat::odd_tilde_at_zero_time(f, x, self.opts),
            (ProblemKind::KdvOneBc, Datum::F0) => kdv::kdv1_tilde_at_zero_time(f, x, self.opts),
            (kind, d) => Err(ContinuousError::Unsupported { kind, what: format!("tilde of {d} at t = 0") }),
        }
    }

    /// The whole-line initial condition w0 whose evolution restricts to the
    /// solution of the boundary value problem.
    pub fn boundary_to_initial(&self, x: f64) -> Result<f64> {
        let s = &self.spec;
        let inside = match s.kind {
            ProblemKind::HeatFiniteInterval => x > 0.0 && x < s.length,
            _ => x > 0.0,
        };
        if inside {
            return Ok(s.u0.eval(x)?);
        }
        match s.kind {
            ProblemKind::Transport => {
                if s.c > 0.0 {
                    Ok(s.datum(Datum::F0)?.eval(-x / s.c)?)
                } else {
                    Ok(s.u0.eval(x)?)
                }
            }
            ProblemKind::HeatDirichlet => Ok(heat::even_tilde(self.f(Datum::F0)?, x, 0.0, self.opts)? - s.u0.eval(-x)?),
            ProblemKind::HeatNeumann => Ok(s.u0.eval(-x)? + heat::odd_tilde_at_zero_time(self.f(Datum::F1)?, x, self.opts)?),
            ProblemKind::HeatFiniteInterval => self.interval_w0(x),
            ProblemKind::AdvectedHeat => {
                let tilde = self.advected_tilde_limit(x)?;
                Ok(-(-s.c * x).exp() * s.u0.eval(-x)? + tilde)
            }
            ProblemKind::KdvOneBc => kdv::kdv1_w0(s, x, self.opts),
            ProblemKind::KdvTwoBc => {
                let res = self.compatibility(6)?;
                if let Some(bad) = res.iter().find(|r| r.residual >= 1e-9) {
                    return Err(ContinuousError::Incompatible {
                        order: bad.order,
                        condition: bad.condition.clone(),
                        residual: bad.residual,
                    });
                }
                Ok(s.u0.eval(x)?)
            }
        }
    }

    /// Residuals of the compatibility conditions at the corner through the
    /// given order.
    pub fn compatibility(&self, orders: usize) -> Result<Vec<CompatResidual>> {
        let s = &self.spec;
        let mut out = Vec::new();
        let top = match s.kind {
            ProblemKind::KdvOneBc | ProblemKind::KdvTwoBc => 3 * orders + 1,
            _ => 2 * orders + 1,
        };
        let du0 = s.u0.derivatives(0.0, top.min(crate::expr::DEFAULT_MAX_ORDER))?;
        let push = |out: &mut Vec<CompatResidual>, order: usize, condition: String, lhs: f64, rhs: f64| {
            out.push(CompatResidual { order, condition, residual: (lhs - rhs).abs() });
        };
        match s.kind {
            ProblemKind::Transport => {
                if s.c > 0.0 {
                    let df = self.f(Datum::F0)?.derivatives(0.0, orders)?;
                    for n in 0..=orders {
                        let rhs = (-s.c).powi(n as i32) * du0[n];
                        push(&mut out, n, format!("f0^({n})(0) = (-c)^{n} u0^({n})(0)"), df[n], rhs);
                    }
                }
            }
            ProblemKind::HeatDirichlet | ProblemKind::HeatFiniteInterval => {
                let df = self.f(Datum::F0)?.derivatives(0.0, orders)?;
                for n in 0..=orders {
                    push(&mut out, n, format!("f0^({n})(0) = u0^({})(0)", 2 * n), df[n], du0[2 * n]);
                }
                if s.kind == ProblemKind::HeatFiniteInterval {
                    let dg = self.f(Datum::G0)?.derivatives(0.0, orders)?;
                    let dl = s.u0.derivatives(s.length, 2 * orders)?;
                    for n in 0..=orders {
                        push(&mut out, n, format!("g0^({n})(0) = u0^({})(L)", 2 * n), dg[n], dl[2 * n]);
                    }
                }
            }
            ProblemKind::HeatNeumann => {
                let df = self.f(Datum::F1)?.derivatives(0.0, orders)?;
                for n in 0..=orders {
                    push(&mut out, n, format!("f1^({n})(0) = u0^({})(0)", 2 * n + 1), df[n], du0[2 * n + 1]);
                }
            }
            ProblemKind::AdvectedHeat => {
                let df = self.f(Datum::F0)?.derivatives(0.0, orders)?;
                for n in 0..=orders {
                    // (D^2 + c D)^n u0 at 0
                    let mut rhs = 0.0;
                    let mut binom = 1.0;
                    for k in 0..=n {
                        rhs += binom * s.c.powi((n - k) as i32) * du0[n + k];
                        binom *= (n - k) as f64 / (k + 1) as f64;
                    }
                    push(&mut out, n, format!("f0^({n})(0) = ((d/dx)^2 + c d/dx)^{n} u0(0)"), df[n], rhs);
                }
            }
            ProblemKind::KdvOneBc => {
                let df = self.f(Datum::F0)?.derivatives(0.0, orders)?;
                for n in 0..=orders {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    push(&mut out, n, format!("f0^({n})(0) = (-1)^{n} u0^({})(0)", 3 * n), df[n], sign * du0[3 * n]);
                }
            }
            ProblemKind::KdvTwoBc => {
                let df0 = self.f(Datum::F0)?.derivatives(0.0, orders)?;
                let df1 = self.f(Datum::F1)?.derivatives(0.0, orders)?;
                for n in 0..=orders {
                    push(&mut out, n, format!("f0^({n})(0) = u0^({})(0)", 3 * n), df0[n], du0[3 * n]);
                    push(&mut out, n, format!("f1^({n})(0) = u0^({})(0)", 3 * n + 1), df1[n], du0[3 * n + 1]);
                }
            }
        }
        Ok(out)
    }
}

fn transport(s: &ProblemSpec, x: f64, t: f64) -> Result<f64> {
    let c = s.c;
    if c > 0.0 && x <= c * t {
        Ok(s.datum(Datum::F0)?.eval(t - x / c)?)
    } else {
        Ok(s.u0.eval(x - c * t)?)
    }
}

fn solver(spec: &ProblemSpec, tol: f64) -> Result<Solver> {
    Solver::new(spec.clone(), Options::default().with_tol(tol))
}

pub fn evaluate_i0(spec: &ProblemSpec, x: f64, t: f64, tol: f64) -> Result<f64> {
    solver(spec, tol)?.i0(x, t)
}

pub fn evaluate_boundary_integral(spec: &ProblemSpec, which: Datum, x: f64, t: f64, tol: f64) -> Result<f64> {
    solver(spec, tol)?.boundary_integral(which, x, t)
}

pub fn taylor_coefficients(spec: &ProblemSpec, which: Datum, t: f64, n: usize, tol: f64) -> Result<TaylorExtension> {
    solver(spec, tol)?.taylor_coefficients(which, t, n)
}

/// u_ac(x, t). `max_order` caps the Taylor truncation order.
pub fn evaluate_extended(spec: &ProblemSpec, x: f64, t: f64, tol: f64, max_order: usize) -> Result<f64> {
    let opts = Options { tol, taylor_max_order: max_order, ..Options::default() };
    Solver::new(spec.clone(), opts)?.extended(x, t)
}

pub fn boundary_to_initial(spec: &ProblemSpec, x: f64) -> Result<f64> {
    solver(spec, 1e-10)?.boundary_to_initial(x)
}

pub fn check_compatibility(spec: &ProblemSpec, orders: usize) -> Result<Vec<CompatResidual>> {
    solver(spec, 1e-10)?.compatibility(orders)
}
