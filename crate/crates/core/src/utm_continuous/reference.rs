//! Exact whole-line solutions used as references.

use super::{ContinuousError, Datum, ProblemKind, ProblemSpec, Result};
use crate::expr::Expression;

#[derive(Debug, Clone)]
pub enum ReferenceSolution {
    /// e^{-(x-1)^2/(4t+1)} / sqrt(4t+1), solves u_t = u_xx.
    GaussianDrift,
    /// GaussianDrift at (x + ct + 1, t), solves u_t = u_xx + c u_x.
    AdvectedGaussian { c: f64 },
    /// 2 e^{-(x+2t)} cos(x - 2t), solves u_t + u_xxx = 0.
    KdvDecayingCos,
    /// 2 e^{-sqrt(3) x} cos(x + 8t), solves u_t = u_xxx.
    Kdv2ExpCos,
    /// u_t + c u_x = 0: f0(t - x/c) behind the front when c > 0, u0(x - ct) otherwise.
    TransportDalembert { c: f64, u0: Expression, f0: Expression },
}

impl ReferenceSolution {
    pub const NAMES: [&'static str; 5] =
        ["gaussian-drift", "advected-gaussian", "kdv-decaying-cos", "kdv2-exp-cos", "transport-dalembert"];

    /// Parameter-free references by name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "gaussian-drift" => Ok(ReferenceSolution::GaussianDrift),
            "kdv-decaying-cos" => Ok(ReferenceSolution::KdvDecayingCos),
            "kdv2-exp-cos" => Ok(ReferenceSolution::Kdv2ExpCos),
            "advected-gaussian" | "transport-dalembert" => {
                Err(ContinuousError::Spec(format!("reference '{name}' takes its parameters from a problem")))
            }
            _ => Err(ContinuousError::UnknownReference(name.to_string())),
        }
    }

    /// Reference by name, drawing c and data from the problem where needed.
    pub fn for_problem(name: &str, spec: &ProblemSpec) -> Result<Self> {
        match name {
            "advected-gaussian" => Ok(ReferenceSolution::AdvectedGaussian { c: spec.c }),
            "transport-dalembert" => {
                if spec.kind != ProblemKind::Transport {
                    return Err(ContinuousError::Spec("transport-dalembert needs a transport problem".into()));
                }
                Ok(ReferenceSolution::TransportDalembert {
                    c: spec.c,
                    u0: spec.u0.clone(),
                    f0: spec.datum(Datum::F0)?.clone(),
                })
            }
            _ => Self::from_name(name),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReferenceSolution::GaussianDrift => "gaussian-drift",
            ReferenceSolution::AdvectedGaussian { .. } => "advected-gaussian",
            ReferenceSolution::KdvDecayingCos => "kdv-decaying-cos",
            ReferenceSolution::Kdv2ExpCos => "kdv2-exp-cos",
            ReferenceSolution::TransportDalembert { .. } => "transport-dalembert",
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Ok(match self {
            ReferenceSolution::GaussianDrift => gaussian_drift(x, t),
            ReferenceSolution::AdvectedGaussian { c } => gaussian_drift(x + c * t + 1.0, t),
            ReferenceSolution::KdvDecayingCos => 2.0 * (-(x + 2.0 * t)).exp() * (x - 2.0 * t).cos(),
            ReferenceSolution::Kdv2ExpCos => 2.0 * (-(3f64.sqrt()) * x).exp() * (x + 8.0 * t).cos(),
            ReferenceSolution::TransportDalembert { c, u0, f0 } => {
                if *c > 0.0 && x <= c * t {
                    f0.eval(t - x / c)?
                } else {
                    u0.eval(x - c * t)?
                }
            }
        })
    }
}

fn gaussian_drift(x: f64, t: f64) -> f64 {
    let d = 4.0 * t + 1.0;
    (-(x - 1.0).powi(2) / d).exp() / d.sqrt()
}

/// Evaluate a parameter-free named reference.
pub fn reference_whole_line(name: &str, x: f64, t: f64) -> Result<f64> {
    ReferenceSolution::from_name(name)?.eval(x, t)
}
