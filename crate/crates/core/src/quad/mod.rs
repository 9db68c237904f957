//! Quadrature in the spectral plane: adaptive Gauss-Kronrod on contour
//! pieces, half-line and finite-interval transforms of initial data, weakly
//! singular time convolutions and the stabilized time transform.

mod adaptive;
mod convolution;
mod path;
mod rules;
mod transform;

use thiserror::Error;

pub use adaptive::{adaptive, gk15, AdaptOptions, Field, QuadResult};
pub use convolution::{singular_time_convolution, ConvolutionRule, SingularKernel, StabilizedTransform};
pub use path::{integrate_path, ContourPath, DecayDescriptor, DecayKind, PathOptions, PathResult, Piece};
pub use rules::{gauss_legendre, GaussRule};
pub use transform::{finite_interval_transform, half_line_transform, SampledTransform};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("no convergence on piece {piece}: worst subinterval [{}, {}], error estimate {error:e}", interval.0, interval.1)]
    NoConvergence { piece: usize, interval: (f64, f64), error: f64 },
    #[error("decay check failed: {0}")]
    Decay(String),
    #[error("transform diverges: {0}")]
    Divergence(String),
    #[error("singular kernel exponent {0} must lie in [0, 1)")]
    Kernel(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("data evaluation failed: {0}")]
    Data(String),
}

/// Composite Gauss-Legendre sum of `f` over [a, b].
pub fn composite_gauss<T: Field>(f: impl Fn(f64) -> T, a: f64, b: f64, panels: usize, rule: &GaussRule) -> T {
    let h = (b - a) / panels as f64;
    let mut acc = T::zero();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc = acc + f(lo + 0.5 * h * (x + 1.0)) * (0.5 * h * w);
        }
    }
    acc
}
