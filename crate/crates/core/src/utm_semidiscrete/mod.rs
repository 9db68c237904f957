//! Lattice heat equation u_n' = (u_{n-1} - 2 u_n + u_{n+1}) / h^2 on the
//! half-lattice, with a Dirichlet value at n = 0 (sites n >= 1) or a
//! backward-stencil Neumann condition (q_0 - q_{-1}) / h = u(t) (sites n >= 0).
//!
//! Values for n >= 0 come from the spectral representation over
//! k in [-pi/h, pi/h]; values at negative indices from the exact finite-sum
//! continuation, which only needs derivatives of the boundary datum at T.


use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{ExprError, Expression};
use crate::quad::{adaptive, AdaptOptions, QuadError, StabilizedTransform};
use crate::specfun::{bessel_i_scaled, SpecfunError};
use crate::utm_continuous::{data_extent, ContinuousError, Options, ProblemKind, ProblemSpec, Solver};

type C = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemidiscreteError {
    #[error("invalid lattice problem: {0}")]
    Spec(String),
    #[error("{0}")]
    Domain(String),
    #[error("k-integral did not settle: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Continuous(#[from] ContinuousError),
}

pub type Result<T> = std::result::Result<T, SemidiscreteError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeBc {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub bc: LatticeBc,
    /// Grid spacing.
    pub h: f64,
    /// Initial data, sampled at n h.
    pub u0: Expression,
    /// f0(t) for Dirichlet, the flux u(t) for Neumann.
    pub boundary: Expression,
    /// Evaluation time.
    pub t: f64,
}

impl LatticeSpec {
    pub fn dirichlet(h: f64, u0: Expression, f0: Expression, t: f64) -> Self {
        LatticeSpec { bc: LatticeBc::Dirichlet, h, u0, boundary: f0, t }
    }

    pub fn neumann(h: f64, u0: Expression, u: Expression, t: f64) -> Self {
        LatticeSpec { bc: LatticeBc::Neumann, h, u0, boundary: u, t }
    }

    pub fn with_h(&self, h: f64) -> Self {
        LatticeSpec { h, ..self.clone() }
    }

    pub fn with_t(&self, t: f64) -> Self {
        LatticeSpec { t, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(SemidiscreteError::Spec(format!("grid spacing must be positive, got {}", self.h)));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(SemidiscreteError::Spec(format!("time must be positive, got {}", self.t)));
        }
        Ok(())
    }

    /// W(k) = (2 - e^{ikh} - e^{-ikh}) / h^2.
    pub fn dispersion(&self, k: f64) -> f64 {
        (2.0 - 2.0 * (k * self.h).cos()) / (self.h * self.h)
    }

    /// First index governed by the lattice ODE.
    pub fn first_site(&self) -> i64 {
        match self.bc {
            LatticeBc::Dirichlet => 1,
            LatticeBc::Neumann => 0,
        }
    }

    /// The continuous half-line problem this lattice discretizes.
    pub fn continuum(&self) -> ProblemSpec {
        match self.bc {
            LatticeBc::Dirichlet => ProblemSpec::new(ProblemKind::HeatDirichlet, self.u0.clone()).with_f0(self.boundary.clone()),
            LatticeBc::Neumann => ProblemSpec::new(ProblemKind::HeatNeumann, self.u0.clone()).with_f1(self.boundary.clone()),
        }
    }
}

/// Trapezoid nodes theta_j = 2 pi j / N with the x-independent factors
/// e^{-WT} sum_m u_m e^{-i m theta} and E(W) = int_0^T e^{-W(T-t)} b(t) dt.
struct Grid {
    theta: Vec<f64>,
    q: Vec<C>,
    e: Vec<f64>,
}

impl Grid {
    fn len(&self) -> f64 {
        self.theta.len() as f64
    }
}

/// Per-problem evaluator with cached samples, k-grid and boundary jets.
pub struct Lattice {
    spec: LatticeSpec,
    tol: f64,
    samples: Vec<f64>,
    transform: StabilizedTransform,
    grid: RefCell<Option<(i64, Grid)>>,
    jet: RefCell<Vec<f64>>,
}

const MIN_NODES: usize = 64;
const MAX_NODES: usize = 1 << 22;

impl Lattice {
    pub fn new(spec: LatticeSpec, tol: f64) -> Result<Self> {
        spec.validate()?;
        if !(tol > 0.0) {
            return Err(SemidiscreteError::Spec(format!("tolerance must be positive, got {tol}")));
        }
        let (extent, _) = data_extent(&spec.u0, 0.0);
        if extent >= 399.0 {
            return Err(SemidiscreteError::Spec("u0 does not decay on the sampled range".into()));
        }
        let m_max = (extent / spec.h).ceil() as i64 + 1;
        let mut samples = Vec::with_capacity(m_max as usize + 1);
        for m in 0..=m_max {
            let v = if m < spec.first_site() { 0.0 } else { spec.u0.eval(m as f64 * spec.h)? };
            samples.push(v);
        }
        // the boundary part carries a 1/h^2 factor
        let transform = StabilizedTransform::new(&spec.boundary, spec.t, (tol * 1e-2 * spec.h * spec.h).max(1e-16))?;
        Ok(Lattice { spec, tol, samples, transform, grid: RefCell::new(None), jet: RefCell::new(Vec::new()) })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    fn a(&self) -> f64 {
        2.0 * self.spec.t / (self.spec.h * self.spec.h)
    }

    fn build(&self, nodes: usize) -> Grid {
        let (h, t) = (self.spec.h, self.spec.t);
        let mut grid = Grid { theta: Vec::with_capacity(nodes), q: Vec::with_capacity(nodes), e: Vec::with_capacity(nodes) };
        for j in 0..nodes {
            let theta = 2.0 * PI * j as f64 / nodes as f64;
            let w = (2.0 - 2.0 * theta.cos()) / (h * h);
            let decay = (-w * t).exp();
            let mut q = C::new(0.0, 0.0);
            if decay > 1e-300 {
                let rot = C::from_polar(1.0, -theta);
                let mut z = C::new(1.0, 0.0);
                for &u in &self.samples {
                    q += z * u;
                    z *= rot;
                }
                q *= decay;
            }
            grid.theta.push(theta);
            grid.q.push(q);
            grid.e.push(self.transform.eval(C::new(w, 0.0)).re);
        }
        grid
    }

    fn parts_on(&self, g: &Grid, n: i64) -> (f64, f64) {
        let h = self.spec.h;
        let nf = n as f64;
        let (mut init, mut bnd) = (0.0, 0.0);
        match self.spec.bc {
            LatticeBc::Dirichlet => {
                for ((th, q), e) in g.theta.iter().zip(&g.q).zip(&g.e) {
                    let s = (nf * th).sin();
                    init -= 2.0 * s * q.im;
                    bnd += s * th.sin() * e;
                }
                (init / g.len(), 2.0 * bnd / (h * h * g.len()))
            }
            LatticeBc::Neumann => {
                for ((th, q), e) in g.theta.iter().zip(&g.q).zip(&g.e) {
                    let z0 = C::from_polar(1.0, nf * th);
                    let z1 = C::from_polar(1.0, (nf + 1.0) * th);
                    init += (z0 * q + z1 * q.conj()).re;
                    bnd += (z0.re + z1.re) * e;
                }
                (init / g.len(), -bnd / (h * g.len()))
            }
        }
    }

    /// Builds (or reuses) a node set resolving indices up to |n|.
    fn ensure_grid(&self, n: i64) -> Result<()> {
        let reach = n.abs().max(1);
        if let Some((r, _)) = self.grid.borrow().as_ref() {
            if *r >= reach {
                return Ok(());
            }
        }
        let band = reach as f64 + self.samples.len() as f64 + 12.0 * self.a().sqrt() + 32.0;
        let mut nodes = ((2.0 * band) as usize).next_power_of_two().max(MIN_NODES);
        let mut prev = self.build(nodes);
        loop {
            let next = self.build(2 * nodes);
            let mut worst: f64 = 0.0;
            for probe in [1, reach] {
                let (a0, b0) = self.parts_on(&prev, probe);
                let (a1, b1) = self.parts_on(&next, probe);
                worst = worst.max((a0 + b0 - a1 - b1).abs());
            }
            nodes *= 2;
            if worst < 0.1 * self.tol {
                *self.grid.borrow_mut() = Some((reach, next));
                return Ok(());
            }
            if 2 * nodes > MAX_NODES {
                return Err(SemidiscreteError::NoConvergence(format!(
                    "trapezoid change {worst:e} at {nodes} nodes for |n| = {reach}"
                )));
            }
            prev = next;
        }
    }

    /// Initial-data and boundary parts of the spectral representation at n.
    pub fn parts(&self, n: i64) -> Result<(f64, f64)> {
        self.ensure_grid(n)?;
        let g = self.grid.borrow();
        Ok(self.parts_on(&g.as_ref().expect("grid built").1, n))
    }

    /// The spectral representation evaluated at any index. For negative n it
    /// reproduces only the reflected values, not the continued solution.
    pub fn representation(&self, n: i64) -> Result<f64> {
        let (a, b) = self.parts(n)?;
        Ok(a + b)
    }

    /// Solution on the physical lattice; n = 0 returns f0(T) for Dirichlet.
    pub fn physical(&self, n: i64) -> Result<f64> {
        if n < self.spec.first_site() {
            if self.spec.bc == LatticeBc::Dirichlet && n == 0 {
                return Ok(self.spec.boundary.eval(self.spec.t)?);
            }
            return Err(SemidiscreteError::Domain(format!("n = {n} is outside the physical lattice")));
        }
        self.representation(n)
    }

    fn derivatives(&self, order: usize) -> Result<Vec<f64>> {
        if self.jet.borrow().len() <= order {
            let d = self.spec.boundary.derivatives(self.spec.t, order)?;
            *self.jet.borrow_mut() = d;
        }
        Ok(self.jet.borrow()[..=order].to_vec())
    }

    /// Index whose physical value the continuation at n reflects.
    pub fn mirror(&self, n: i64) -> i64 {
        match self.spec.bc {
            LatticeBc::Dirichlet => -n,
            LatticeBc::Neumann => -n - 1,
        }
    }

    /// Finite-sum continuation to a negative index, given the mirror value.
    ///
    /// Dirichlet, n <= 0: u_n = -2n sum_{p=0}^{-n} f0^(p)(T) h^{2p} G(p, n) - u_{-n},
    /// G(p, n) = Gamma(p-n) / (Gamma(1-n-p) Gamma(2p+1)).
    /// Neumann, n <= -1 with m = -n: q_{-m} = (1 - 2m) h sum_{p=0}^{m-1}
    /// u^(p)(T) h^{2p} / (2p+1)! Gamma(p+m)/Gamma(m-p) + q_{m-1}.
    pub fn continued(&self, n: i64, mirror_value: f64) -> Result<f64> {
        let h2 = self.spec.h * self.spec.h;
        match self.spec.bc {
            LatticeBc::Dirichlet => {
                if n > 0 {
                    return Err(SemidiscreteError::Domain(format!("Dirichlet continuation needs n <= 0, got {n}")));
                }
                if n == 0 {
                    return Ok(self.spec.boundary.eval(self.spec.t)?);
                }
                let m = (-n) as usize;
                let d = self.derivatives(m)?;
                // c_p = h^{2p} Gamma(p-n) / (Gamma(1-n-p) Gamma(2p+1)) as a running
                // product, so h^{2p} and the gamma ratio never over- or underflow
                // separately
                let mf = m as f64;
                let mut c = 1.0 / mf;
                let mut acc = 0.0;
                for (p, dp) in d.iter().enumerate() {
                    if p > 0 {
                        let l = (p - 1) as f64;
                        c *= (mf - l) * (mf + l) * h2 / ((2.0 * l + 1.0) * (2.0 * l + 2.0));
                    }
                    acc += dp * c;
                }
                Ok(-2.0 * n as f64 * acc - mirror_value)
            }
            LatticeBc::Neumann => {
                if n >= 0 {
                    return Err(SemidiscreteError::Domain(format!("Neumann continuation needs n <= -1, got {n}")));
                }
                let m = -n;
                let d = self.derivatives((m - 1) as usize)?;
                // c_p = h^{2p} / (2p+1)! Gamma(p+m) / Gamma(m-p), running product
                let mf = m as f64;
                let mut c = 1.0;
                let mut acc = 0.0;
                for (p, dp) in d.iter().enumerate() {
                    if p > 0 {
                        let pf = p as f64;
                        c *= (mf + pf - 1.0) * (mf - pf) * h2 / ((2.0 * pf) * (2.0 * pf + 1.0));
                    }
                    acc += dp * c;
                }
                Ok((1.0 - 2.0 * m as f64) * self.spec.h * acc + mirror_value)
            }
        }
    }

    /// Solution at any index: physical values, or the continuation fed by
    /// the physical mirror value.
    pub fn value(&self, n: i64) -> Result<f64> {
        if n >= self.spec.first_site() || (self.spec.bc == LatticeBc::Dirichlet && n == 0) {
            return self.physical(n);
        }
        let mirror = self.physical(self.mirror(n))?;
        self.continued(n, mirror)
    }

    /// Values on n_min..=n_max.
    pub fn solution(&self, n_min: i64, n_max: i64) -> Result<ContinuedLatticeSolution> {
        if n_min > n_max {
            return Err(SemidiscreteError::Domain(format!("empty index range {n_min}..={n_max}")));
        }
        let reach = n_min.abs().max(n_max.abs());
        self.ensure_grid(reach + 1)?;
        let mut phys = BTreeMap::new();
        let mut get = |k: i64| -> Result<f64> {
            if let Some(v) = phys.get(&k) {
                return Ok(*v);
            }
            let v = self.physical(k)?;
            phys.insert(k, v);
            Ok(v)
        };
        let mut values = Vec::with_capacity((n_max - n_min + 1) as usize);
        for n in n_min..=n_max {
            let v = if n >= self.spec.first_site() || (self.spec.bc == LatticeBc::Dirichlet && n == 0) {
                get(n)?
            } else {
                let mv = get(self.mirror(n))?;
                self.continued(n, mv)?
            };
            values.push(v);
        }
        let budget = match self.spec.bc {
            LatticeBc::Dirichlet => (-n_min).max(0) as usize,
            LatticeBc::Neumann => (-n_min - 1).max(0) as usize,
        };
        Ok(ContinuedLatticeSolution { h: self.spec.h, t: self.spec.t, n_min, values, derivative_budget: budget })
    }

    /// Boundary term as a time integral against the lattice heat kernel,
    /// Dirichlet: K(n,T) = n int_0^{2T/h^2} e^{-s} B(n,s)/s f0(T - h^2 s/2) ds,
    /// Neumann: -(h/2) int_0^{2T/h^2} e^{-s} [B(n,s) + B(n+1,s)] u(T - h^2 s/2) ds.
    pub fn kernel_form(&self, n: i64) -> Result<f64> {
        let (h, t) = (self.spec.h, self.spec.t);
        let b = &self.spec.boundary;
        if b.is_zero() {
            return Ok(0.0);
        }
        if self.spec.bc == LatticeBc::Dirichlet && n == 0 {
            return Err(SemidiscreteError::Domain("the kernel form needs n != 0".into()));
        }
        let top = self.a();
        let mut bad: Option<ExprError> = None;
        let mut kernel = |s: f64| -> f64 {
            let v = match b.eval(t - 0.5 * h * h * s) {
                Ok(v) => v,
                Err(e) => {
                    bad.get_or_insert(e);
                    return f64::NAN;
                }
            };
            match self.spec.bc {
                LatticeBc::Dirichlet => n as f64 * bessel_i_scaled(n, s) / s * v,
                LatticeBc::Neumann => -0.5 * h * (bessel_i_scaled(n, s) + bessel_i_scaled(n + 1, s)) * v,
            }
        };
        // geometric panels resolve the s -> 0 end and the slow s^{-3/2} tail
        let mut edges = vec![0.0];
        let mut s = 1.0 / 64.0;
        while s < top {
            edges.push(s);
            s *= 2.0;
        }
        edges.push(top);
        let per = self.tol * 1e-2 / edges.len() as f64;
        let mut total = 0.0;
        for w in edges.windows(2) {
            let r = adaptive(&mut kernel, w[0], w[1], AdaptOptions::new(per).panels(2));
            if !r.converged {
                return Err(QuadError::NoConvergence { piece: 0, interval: r.worst, error: r.error }.into());
            }
            total += r.value;
        }
        if let Some(e) = bad {
            return Err(e.into());
        }
        Ok(total)
    }

    /// Initial-data part as the Bessel image sum
    /// sum_m u_m e^{-a} [B(n-m, a) -+ B(n+m+s, a)], a = 2T/h^2.
    pub fn image_sum(&self, n: i64) -> f64 {
        let a = self.a();
        let mut acc = 0.0;
        for (m, &u) in self.samples.iter().enumerate() {
            let m = m as i64;
            acc += u * match self.spec.bc {
                LatticeBc::Dirichlet => bessel_i_scaled(n - m, a) - bessel_i_scaled(n + m, a),
                LatticeBc::Neumann => bessel_i_scaled(n - m, a) + bessel_i_scaled(n + m + 1, a),
            };
        }
        acc
    }
}

/// Lattice values on a contiguous index range.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuedLatticeSolution {
    pub h: f64,
    pub t: f64,
    pub n_min: i64,
    pub values: Vec<f64>,
    /// Highest boundary-datum derivative the continuation used.
    pub derivative_budget: usize,
}

impl ContinuedLatticeSolution {
    pub fn n_max(&self) -> i64 {
        self.n_min + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<f64> {
        if n < self.n_min {
            return None;
        }
        self.values.get((n - self.n_min) as usize).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.n_min + i as i64, *v))
    }
}

pub fn sd_heat_dirichlet(spec: &LatticeSpec, n: i64, tol: f64) -> Result<f64> {
    require(spec, LatticeBc::Dirichlet)?;
    if n < 0 {
        return Err(SemidiscreteError::Domain(format!("n must be >= 0, got {n}")));
    }
    Lattice::new(spec.clone(), tol)?.physical(n)
}

/// u_n(T) for n <= 0 from the mirror value u_{-n}(T).
pub fn sd_heat_dirichlet_continued(spec: &LatticeSpec, n: i64, u_pos: f64, tol: f64) -> Result<f64> {
    require(spec, LatticeBc::Dirichlet)?;
    Lattice::new(spec.clone(), tol)?.continued(n, u_pos)
}

pub fn sd_bessel_kernel_form(spec: &LatticeSpec, n: i64, tol: f64) -> Result<f64> {
    Lattice::new(spec.clone(), tol)?.kernel_form(n)
}

pub fn sd_heat_neumann(spec: &LatticeSpec, n: i64, tol: f64) -> Result<f64> {
    require(spec, LatticeBc::Neumann)?;
    if n < 0 {
        return Err(SemidiscreteError::Domain(format!("n must be >= 0, got {n}")));
    }
    Lattice::new(spec.clone(), tol)?.physical(n)
}

/// q_{-n}(T) for n >= 1 from the mirror value q_{n-1}(T).
pub fn sd_heat_neumann_continued(spec: &LatticeSpec, n: i64, q_mirror: f64) -> Result<f64> {
    require(spec, LatticeBc::Neumann)?;
    if n < 1 {
        return Err(SemidiscreteError::Domain(format!("n must be >= 1, got {n}")));
    }
    Lattice::new(spec.clone(), 1e-10)?.continued(-n, q_mirror)
}

fn require(spec: &LatticeSpec, bc: LatticeBc) -> Result<()> {
    if spec.bc != bc {
        return Err(SemidiscreteError::Spec(format!("expected a {bc:?} lattice, got {:?}", spec.bc)));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub max_err: f64,
    /// log(e_prev / e) / log(h_prev / h); absent on the first row.
    pub observed_order: Option<f64>,
    /// max |u_{-n} + u_n| (Dirichlet) or |q_{-n} - q_{n-1}| (Neumann) when
    /// the boundary datum vanishes.
    pub symmetry_defect: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub t: f64,
    pub window: (f64, f64),
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Order between the last two refinements.
    pub fn final_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.observed_order)
    }
}

/// Max error of the continued lattice solution at spacing h against the
/// continued continuous solution on every lattice point of the window, and
/// the reflection defect when the boundary datum vanishes.
pub fn continuum_error(spec: &LatticeSpec, h: f64, window: (f64, f64), tol: f64) -> Result<(f64, Option<f64>)> {
    let cont = Solver::new(spec.continuum(), Options::default().with_tol(tol))?;
    window_error(spec, &cont, h, window, tol)
}

fn window_error(spec: &LatticeSpec, cont: &Solver, h: f64, window: (f64, f64), tol: f64) -> Result<(f64, Option<f64>)> {
    let lat = Lattice::new(spec.with_h(h), tol)?;
    let n_min = (window.0 / h).ceil() as i64;
    let n_max = (window.1 / h).floor() as i64;
    let sol = lat.solution(n_min, n_max)?;
    let mut max_err: f64 = 0.0;
    for (n, v) in sol.iter() {
        let x = n as f64 * h;
        if !v.is_finite() {
            return Err(SemidiscreteError::Domain(format!("non-finite lattice value at n = {n}")));
        }
        let exact = if x == 0.0 && spec.bc == LatticeBc::Dirichlet {
            spec.boundary.eval(spec.t)?
        } else {
            cont.extended(x, spec.t)?
        };
        max_err = max_err.max((v - exact).abs());
    }
    let symmetry_defect = if spec.boundary.is_zero() {
        let mut worst: f64 = 0.0;
        for (n, v) in sol.iter().filter(|(n, _)| *n < 0) {
            if let Some(m) = sol.get(lat.mirror(n)) {
                let d = match spec.bc {
                    LatticeBc::Dirichlet => v + m,
                    LatticeBc::Neumann => v - m,
                };
                worst = worst.max(d.abs());
            }
        }
        Some(worst)
    } else {
        None
    };
    Ok((max_err, symmetry_defect))
}

/// Max error of the continued lattice solution against the continued
/// continuous solution on every lattice point of the window, for each h.
pub fn continuum_limit_check(spec: &LatticeSpec, hs: &[f64], window: (f64, f64), tol: f64) -> Result<ConvergenceReport> {
    if hs.len() < 3 {
        return Err(SemidiscreteError::Spec(format!("a refinement study needs at least 3 grid spacings, got {}", hs.len())));
    }
    if hs.iter().any(|h| !(*h > 0.0)) {
        return Err(SemidiscreteError::Spec("grid spacings must be positive".into()));
    }
    let ratio = hs[1] / hs[0];
    if hs.windows(2).any(|w| ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-9) || ratio == 1.0 {
        return Err(SemidiscreteError::Spec("grid spacings must form a geometric progression".into()));
    }
    if !(window.0 < window.1) {
        return Err(SemidiscreteError::Spec(format!("empty window [{}, {}]", window.0, window.1)));
    }
    let cont = Solver::new(spec.continuum(), Options::default().with_tol(tol))?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(hs.len());
    for &h in hs {
        let (max_err, symmetry_defect) = window_error(spec, &cont, h, window, tol)?;
        let observed_order = rows.last().map(|p| (p.max_err / max_err).ln() / (p.h / h).ln());
        rows.push(ConvergenceRow { h, max_err, observed_order, symmetry_defect });
    }
    Ok(ConvergenceReport { t: spec.t, window, rows })
}
