//! The solve, map-initial and converge commands.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Problem, ScenarioConfig};
use super::CliError;
use crate::utm_continuous::{
    compatible_to, CompatResidual, ContinuousError, Datum, ProblemKind, ProblemSpec, Provenance, Solver,
};
use crate::utm_semidiscrete::{continuum_limit_check, ConvergenceRow, Lattice, LatticeSpec, SemidiscreteError};

/// A numeric table destined for CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// One evaluated sample.
#[derive(Debug, Clone, Serialize)]
pub struct SampleRow {
    pub x: f64,
    pub t: f64,
    pub u_ac: f64,
    pub u_ref: Option<f64>,
    pub abs_err: Option<f64>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationOrder {
    pub datum: Datum,
    pub t: f64,
    pub order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub command: &'static str,
    pub kind: String,
    pub samples: usize,
    pub max_abs_err: Option<f64>,
    pub observed_order: Option<f64>,
    pub wall_time_s: f64,
    pub truncation_orders: Vec<TruncationOrder>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub summary: Summary,
    pub rows: Vec<SampleRow>,
}

impl RunReport {
    pub fn table(&self) -> Table {
        Table {
            header: vec!["x", "t", "u_ac", "u_ref", "abs_err"],
            rows: self.rows.iter().map(|r| vec![Some(r.x), Some(r.t), Some(r.u_ac), r.u_ref, r.abs_err]).collect(),
        }
    }
}

fn max_of(v: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    v.flatten().fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))))
}

fn at(x: f64, t: f64, e: impl Into<CliError>) -> CliError {
    match e.into() {
        CliError::Numerics(msg) => CliError::Numerics(format!("sample x = {x}, t = {t}: {msg}")),
        other => other,
    }
}

pub fn solve(cfg: &ScenarioConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (rows, truncation_orders, warnings) = match cfg.problem()? {
        Problem::Continuous(spec) => solve_continuous(cfg, spec)?,
        Problem::Lattice(spec) => (solve_lattice(cfg, spec)?, Vec::new(), Vec::new()),
    };
    let summary = Summary {
        scenario: cfg.name.clone(),
        command: "solve",
        kind: cfg.problem.kind.clone(),
        samples: rows.len(),
        max_abs_err: max_of(rows.iter().map(|r| r.abs_err)),
        observed_order: None,
        wall_time_s: start.elapsed().as_secs_f64(),
        truncation_orders,
        warnings,
    };
    Ok(RunReport { summary, rows })
}

type Solved = (Vec<SampleRow>, Vec<TruncationOrder>, Vec<String>);

fn solve_continuous(cfg: &ScenarioConfig, spec: ProblemSpec) -> Result<Solved, CliError> {
    let xs = cfg.x_grid()?;
    let reference = cfg.reference(&spec)?;
    let opts = cfg.options();
    let points: Vec<(f64, f64)> = cfg.grid.times.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect();
    let rows: Vec<Result<SampleRow, CliError>> = points
        .par_iter()
        .map_init(
            || Solver::new(spec.clone(), opts),
            |solver, &(x, t)| {
                let solver = solver.as_ref().map_err(|e| CliError::from(e.clone()))?;
                let s = solver.sample(x, t).map_err(|e| at(x, t, e))?;
                let u_ref = reference.as_ref().map(|r| r.eval(x, t)).transpose().map_err(|e| at(x, t, e))?;
                Ok(SampleRow { x, t, u_ac: s.value, u_ref, abs_err: u_ref.map(|r| (s.value - r).abs()), provenance: s.provenance })
            },
        )
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;

    // Truncation bookkeeping from one solver, independent of the work split.
    let solver = Solver::new(spec.clone(), opts)?;
    let continued = spec.kind != ProblemKind::Transport && spec.kind != ProblemKind::AdvectedHeat;
    let reach = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut orders = Vec::new();
    if continued && rows.iter().any(|r| r.provenance == Provenance::Continued) {
        for &t in &cfg.grid.times {
            for &d in spec.kind.required_data() {
                if spec.datum(d)?.is_zero() {
                    continue;
                }
                solver.extension(d, t, reach).map_err(|e| at(-reach, t, e))?;
            }
        }
        orders = solver.truncation_orders().into_iter().map(|(datum, t, order)| TruncationOrder { datum, t, order }).collect();
    }
    Ok((rows, orders, solver.warnings()))
}

fn solve_lattice(cfg: &ScenarioConfig, spec: LatticeSpec) -> Result<Vec<SampleRow>, CliError> {
    let (n_min, n_max) = cfg.index_range()?;
    let continuum = cfg.wants_continuum()?;
    let tol = cfg.numerics.tol;
    let per_time: Vec<Result<Vec<SampleRow>, CliError>> = cfg
        .grid
        .times
        .par_iter()
        .map(|&t| {
            let spec = spec.with_t(t);
            let lat = Lattice::new(spec.clone(), tol)?;
            let sol = lat.solution(n_min, n_max).map_err(|e| CliError::from(e))?;
            let cont = if continuum { Some(Solver::new(spec.continuum(), cfg.options())?) } else { None };
            sol.iter()
                .map(|(n, v)| {
                    let x = n as f64 * spec.h;
                    let u_ref = match &cont {
                        Some(s) => Some(s.extended(x, t).map_err(|e| at(x, t, e))?),
                        None => None,
                    };
                    let provenance = if n >= 0 { Provenance::Interior } else { Provenance::Continued };
                    Ok(SampleRow { x, t, u_ac: v, u_ref, abs_err: u_ref.map(|r| (v - r).abs()), provenance })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_time {
        rows.extend(r?);
    }
    Ok(rows)
}

/// One-sided limits of w0 at a boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct Jump {
    pub x: f64,
    pub left: f64,
    pub right: f64,
    pub jump: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapSummary {
    pub scenario: String,
    pub kind: String,
    pub samples: usize,
    pub compatible_through_order_2: bool,
    pub residuals: Vec<CompatResidual>,
    pub jumps: Vec<Jump>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct MapReport {
    pub summary: MapSummary,
    pub table: Table,
}

pub fn map_initial(cfg: &ScenarioConfig) -> Result<MapReport, CliError> {
    let start = Instant::now();
    let spec = match cfg.problem()? {
        Problem::Continuous(spec) => spec,
        Problem::Lattice(_) => return Err(CliError::Config("map-initial needs a continuous problem".into())),
    };
    let xs = cfg.x_grid()?;
    let opts = cfg.options();
    let solver = Solver::new(spec.clone(), opts)?;
    let residuals = solver.compatibility(2)?;
    // refuses before any sampling when no map exists
    let left0 = solver.boundary_to_initial(0.0).map_err(|e| at(0.0, 0.0, e))?;
    let mut jumps = vec![Jump { x: 0.0, left: left0, right: spec.u0.eval(0.0)?, jump: 0.0 }];
    if spec.kind == ProblemKind::HeatFiniteInterval {
        let l = spec.length;
        jumps.push(Jump { x: l, left: spec.u0.eval(l)?, right: solver.boundary_to_initial(l).map_err(|e| at(l, 0.0, e))?, jump: 0.0 });
    }
    if matches!(spec.kind, ProblemKind::Transport) {
        jumps.clear();
    }
    for j in &mut jumps {
        j.jump = j.right - j.left;
    }
    let rows: Vec<Result<Vec<Option<f64>>, CliError>> = xs
        .par_iter()
        .map_init(
            || Solver::new(spec.clone(), opts),
            |s, &x| {
                let s = s.as_ref().map_err(|e| CliError::from(e.clone()))?;
                let w0 = s.boundary_to_initial(x).map_err(|e| at(x, 0.0, e))?;
                let cont = spec.u0.eval(x).ok().filter(|v| v.is_finite());
                Ok(vec![Some(x), Some(w0), cont])
            },
        )
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let summary = MapSummary {
        scenario: cfg.name.clone(),
        kind: cfg.problem.kind.clone(),
        samples: rows.len(),
        compatible_through_order_2: compatible_to(&residuals, 2),
        residuals,
        jumps,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(MapReport { summary, table: Table { header: vec!["x", "w0", "u0_analytic_continuation"], rows } })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeTime {
    pub t: f64,
    pub window: (f64, f64),
    pub rows: Vec<ConvergenceRow>,
    pub observed_order: Option<f64>,
    /// All reflection defects below 1e-10 (zero boundary datum only).
    pub symmetry_ok: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeSummary {
    pub scenario: String,
    pub kind: String,
    pub times: Vec<ConvergeTime>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergeReport {
    pub summary: ConvergeSummary,
    pub table: Table,
}

pub fn converge(cfg: &ScenarioConfig) -> Result<ConvergeReport, CliError> {
    let start = Instant::now();
    let spec = match cfg.problem()? {
        Problem::Lattice(spec) => spec,
        Problem::Continuous(_) => return Err(CliError::Config("converge needs a lattice problem".into())),
    };
    let hs = cfg.grid.h_values.clone().unwrap_or_else(|| vec![spec.h]);
    let window = cfg.window()?;
    let reach = window.0.abs().max(window.1.abs());
    if let Some(h) = hs.iter().find(|h| **h > 0.0 && reach / **h > super::config::MAX_LATTICE_INDEX as f64) {
        return Err(CliError::Config(format!("window reaches beyond the index budget at h = {h}")));
    }
    let tol = cfg.numerics.tol;
    let reports: Vec<Result<ConvergeTime, CliError>> = cfg
        .grid
        .times
        .par_iter()
        .map(|&t| {
            let r = continuum_limit_check(&spec.with_t(t), &hs, window, tol)?;
            let symmetry_ok = if spec.boundary.is_zero() {
                Some(r.rows.iter().all(|row| row.symmetry_defect.is_some_and(|d| d < 1e-10)))
            } else {
                None
            };
            Ok(ConvergeTime { t, window, observed_order: r.final_order(), rows: r.rows, symmetry_ok })
        })
        .collect();
    let times = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows = times
        .iter()
        .flat_map(|ct| ct.rows.iter().map(move |r| vec![Some(ct.t), Some(r.h), Some(r.max_err), r.observed_order, r.symmetry_defect]))
        .collect();
    let summary = ConvergeSummary {
        scenario: cfg.name.clone(),
        kind: cfg.problem.kind.clone(),
        times,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(ConvergeReport {
        summary,
        table: Table { header: vec!["t", "h", "max_err", "observed_order", "symmetry_defect"], rows },
    })
}

impl From<ContinuousError> for CliError {
    fn from(e: ContinuousError) -> Self {
        match e {
            ContinuousError::Incompatible { .. } => CliError::Incompatible(e.to_string()),
            ContinuousError::Spec(_) | ContinuousError::Decay(_) | ContinuousError::UnknownReference(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerics(other.to_string()),
        }
    }
}

impl From<SemidiscreteError> for CliError {
    fn from(e: SemidiscreteError) -> Self {
        match e {
            SemidiscreteError::Spec(msg) => CliError::Config(msg),
            SemidiscreteError::Continuous(c) => c.into(),
            other => CliError::Numerics(other.to_string()),
        }
    }
}

impl From<crate::expr::ExprError> for CliError {
    fn from(e: crate::expr::ExprError) -> Self {
        CliError::Numerics(e.to_string())
    }
}
