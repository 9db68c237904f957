//! Scenario configuration: a single JSON document per run.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::expr::{Expression, DEFAULT_MAX_ORDER};
use crate::utm_continuous::{DecayClass, Options, ProblemKind, ProblemSpec, ReferenceSolution};
use crate::utm_semidiscrete::LatticeSpec;

/// Largest lattice index magnitude the continuation is asked for.
pub const MAX_LATTICE_INDEX: i64 = if DEFAULT_MAX_ORDER < 200 { DEFAULT_MAX_ORDER as i64 } else { 200 };

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub problem: ProblemBlock,
    pub grid: GridBlock,
    #[serde(default)]
    pub numerics: NumericsBlock,
    #[serde(default)]
    pub outputs: OutputsBlock,
    #[serde(default)]
    pub reference: Option<ReferenceBlock>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    /// A continuous kind (`heat-dirichlet`, ...) or `lattice-dirichlet` /
    /// `lattice-neumann`.
    pub kind: String,
    pub u0: String,
    #[serde(default)]
    pub f0: Option<String>,
    #[serde(default)]
    pub f1: Option<String>,
    #[serde(default)]
    pub g0: Option<String>,
    /// Neumann flux of the lattice problem.
    #[serde(default)]
    pub u: Option<String>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default, rename = "L")]
    pub length: Option<f64>,
    #[serde(default)]
    pub h: Option<f64>,
    /// u0 decays like e^{-rate x}; omitted means merely integrable.
    #[serde(default)]
    pub decay_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    #[serde(default)]
    pub x_min: Option<f64>,
    #[serde(default)]
    pub x_max: Option<f64>,
    #[serde(default)]
    pub n_points: Option<usize>,
    #[serde(default)]
    pub n_min: Option<i64>,
    #[serde(default)]
    pub n_max: Option<i64>,
    #[serde(default)]
    pub h_values: Option<Vec<f64>>,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsBlock {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_order")]
    pub taylor_max_order: usize,
    #[serde(default = "default_depth")]
    pub tile_depth: f64,
}

fn default_tol() -> f64 {
    Options::default().tol
}

fn default_order() -> usize {
    Options::default().taylor_max_order
}

fn default_depth() -> f64 {
    Options::default().tile_depth
}

impl Default for NumericsBlock {
    fn default() -> Self {
        NumericsBlock { tol: default_tol(), taylor_max_order: default_order(), tile_depth: default_depth() }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsBlock {
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub json: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceBlock {
    /// A named whole-line solution, or `continuum` for lattice problems.
    pub name: String,
}

/// The problem a config describes.
#[derive(Debug, Clone)]
pub enum Problem {
    Continuous(ProblemSpec),
    Lattice(LatticeSpec),
}

fn expr(field: &str, text: &str) -> Result<Expression, CliError> {
    Expression::parse(text).map_err(|e| CliError::Config(format!("problem.{field}: {e}")))
}

fn opt_expr(field: &str, text: &Option<String>) -> Result<Option<Expression>, CliError> {
    text.as_deref().map(|t| expr(field, t)).transpose()
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let n = &self.numerics;
        if !(n.tol > 0.0 && n.tol < 1.0) {
            return Err(CliError::Config(format!("numerics.tol must lie in (0, 1), got {}", n.tol)));
        }
        if !(n.tile_depth >= 1.0) {
            return Err(CliError::Config(format!("numerics.tile_depth must be at least 1, got {}", n.tile_depth)));
        }
        if self.grid.times.is_empty() {
            return Err(CliError::Config("grid.times is empty".into()));
        }
        if let Some(t) = self.grid.times.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(CliError::Config(format!("grid.times must be positive, got {t}")));
        }
        self.problem()?;
        Ok(())
    }

    pub fn options(&self) -> Options {
        Options {
            tol: self.numerics.tol,
            taylor_max_order: self.numerics.taylor_max_order,
            tile_depth: self.numerics.tile_depth,
            ..Options::default()
        }
    }

    /// Builds the problem; the lattice evaluation time is the first grid time.
    pub fn problem(&self) -> Result<Problem, CliError> {
        let p = &self.problem;
        let u0 = expr("u0", &p.u0)?;
        match p.kind.as_str() {
            "lattice-dirichlet" | "lattice-neumann" => {
                let h = p.h.ok_or_else(|| CliError::Config("problem.h is required for lattice problems".into()))?;
                let t = self.grid.times[0];
                let spec = if p.kind == "lattice-dirichlet" {
                    let f0 = p.f0.as_deref().ok_or_else(|| CliError::Config("problem.f0 is required".into()))?;
                    LatticeSpec::dirichlet(h, u0, expr("f0", f0)?, t)
                } else {
                    let u = p.u.as_deref().ok_or_else(|| CliError::Config("problem.u is required".into()))?;
                    LatticeSpec::neumann(h, u0, expr("u", u)?, t)
                };
                spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
                Ok(Problem::Lattice(spec))
            }
            kind => {
                let kind: ProblemKind = kind.parse().map_err(|e: crate::utm_continuous::ContinuousError| CliError::Config(e.to_string()))?;
                let mut spec = ProblemSpec::new(kind, u0);
                if let Some(f) = opt_expr("f0", &p.f0)? {
                    spec = spec.with_f0(f);
                }
                if let Some(f) = opt_expr("f1", &p.f1)? {
                    spec = spec.with_f1(f);
                }
                if let Some(f) = opt_expr("g0", &p.g0)? {
                    spec = spec.with_g0(f);
                }
                if let Some(c) = p.c {
                    spec = spec.with_speed(c);
                }
                if let Some(l) = p.length {
                    spec = spec.with_length(l);
                }
                if let Some(r) = p.decay_rate {
                    spec = spec.with_decay(DecayClass::Exponential(r));
                }
                spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
                Ok(Problem::Continuous(spec))
            }
        }
    }

    /// The x grid: n_points evenly spaced values on [x_min, x_max].
    pub fn x_grid(&self) -> Result<Vec<f64>, CliError> {
        let g = &self.grid;
        let (a, b, n) = match (g.x_min, g.x_max, g.n_points) {
            (Some(a), Some(b), Some(n)) => (a, b, n),
            _ => return Err(CliError::Config("grid needs x_min, x_max and n_points".into())),
        };
        if !(a <= b) || n == 0 || (n == 1 && a != b) {
            return Err(CliError::Config(format!("bad x grid [{a}, {b}] with {n} points")));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let m = (n - 1) as f64;
        Ok((0..n).map(|i| (a * (m - i as f64) + b * i as f64) / m).collect())
    }

    /// Lattice index range, capped by the derivative budget.
    pub fn index_range(&self) -> Result<(i64, i64), CliError> {
        let g = &self.grid;
        let (a, b) = match (g.n_min, g.n_max) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CliError::Config("grid needs n_min and n_max for lattice problems".into())),
        };
        if a > b {
            return Err(CliError::Config(format!("empty index range [{a}, {b}]")));
        }
        if a.abs().max(b.abs()) > MAX_LATTICE_INDEX {
            return Err(CliError::Config(format!("lattice indices are limited to |n| <= {MAX_LATTICE_INDEX}")));
        }
        Ok((a, b))
    }

    pub fn window(&self) -> Result<(f64, f64), CliError> {
        match (self.grid.x_min, self.grid.x_max) {
            (Some(a), Some(b)) if a < b => Ok((a, b)),
            _ => Err(CliError::Config("grid needs x_min < x_max".into())),
        }
    }

    /// Resolves the reference block against the problem.
    pub fn reference(&self, spec: &ProblemSpec) -> Result<Option<ReferenceSolution>, CliError> {
        match &self.reference {
            None => Ok(None),
            Some(r) => ReferenceSolution::for_problem(&r.name, spec).map(Some).map_err(|e| CliError::Config(e.to_string())),
        }
    }

    pub fn wants_continuum(&self) -> Result<bool, CliError> {
        match self.reference.as_ref().map(|r| r.name.as_str()) {
            None => Ok(false),
            Some("continuum") => Ok(true),
            Some(other) => Err(CliError::Config(format!("lattice problems only support the 'continuum' reference, got '{other}'"))),
        }
    }
}
