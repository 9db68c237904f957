use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::adaptive::{adaptive, AdaptOptions};
use super::QuadError;

type C = Complex64;

fn cis(theta: f64) -> C {
    C::from_polar(1.0, theta)
}

/// One oriented piece of a contour in the k-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment { a: C, b: C },
    /// From `start` out to infinity along the unit vector `dir`.
    Ray { start: C, dir: C },
    /// From infinity along `dir` back in to `end` (points are `end + rho*dir`).
    RayIn { end: C, dir: C },
    /// Circular arc `center + radius*e^{i theta}` for theta from `theta0` to `theta1`.
    Arc { center: C, radius: f64, theta0: f64, theta1: f64 },
}

impl Piece {
    pub fn is_ray(&self) -> bool {
        matches!(self, Piece::Ray { .. } | Piece::RayIn { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub pieces: Vec<Piece>,
}

impl ContourPath {
    pub fn new(pieces: Vec<Piece>) -> Self {
        ContourPath { pieces }
    }

    /// Incoming ray at angle `arg_in`, arc of radius `r` from `arg_in` to
    /// `arg_out` (either sense), outgoing ray at angle `arg_out`.
    pub fn wedge(r: f64, arg_in: f64, arg_out: f64) -> Self {
        if r == 0.0 {
            return ContourPath::new(vec![
                Piece::RayIn { end: C::new(0.0, 0.0), dir: cis(arg_in) },
                Piece::Ray { start: C::new(0.0, 0.0), dir: cis(arg_out) },
            ]);
        }
        ContourPath::new(vec![
            Piece::RayIn { end: r * cis(arg_in), dir: cis(arg_in) },
            Piece::Arc { center: C::new(0.0, 0.0), radius: r, theta0: arg_in, theta1: arg_out },
            Piece::Ray { start: r * cis(arg_out), dir: cis(arg_out) },
        ])
    }

    /// Boundary of the heat sector {pi/4 < arg k < 3pi/4, |k| > r}, traversed
    /// in along arg 3pi/4 and out along arg pi/4.
    pub fn heat_omega(r: f64) -> Self {
        Self::wedge(r, 3.0 * FRAC_PI_4, FRAC_PI_4)
    }

    /// The horizontal line Im k = eps, left to right.
    pub fn horizontal(eps: f64) -> Self {
        let p = C::new(0.0, eps);
        ContourPath::new(vec![
            Piece::RayIn { end: p, dir: C::new(-1.0, 0.0) },
            Piece::Ray { start: p, dir: C::new(1.0, 0.0) },
        ])
    }

    /// The real line.
    pub fn real_line() -> Self {
        Self::horizontal(0.0)
    }

    /// Negated orientation.
    pub fn reversed(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| match *p {
                Piece::Segment { a, b } => Piece::Segment { a: b, b: a },
                Piece::Ray { start, dir } => Piece::RayIn { end: start, dir },
                Piece::RayIn { end, dir } => Piece::Ray { start: end, dir },
                Piece::Arc { center, radius, theta0, theta1 } => Piece::Arc { center, radius, theta0: theta1, theta1: theta0 },
            })
            .collect();
        ContourPath { pieces }
    }
}

/// Envelope class of the integrand along rays, in the distance `rho` from the
/// ray's finite end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayKind {
    /// exp(-rate rho^2)
    Gaussian,
    /// exp(-rate rho^3)
    CubicExponential,
    /// exp(-rate rho)
    Exponential,
    /// (1 + rho)^(-rate), rate > 1
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayDescriptor {
    pub kind: DecayKind,
    pub rate: f64,
}

impl DecayDescriptor {
    pub fn gaussian(rate: f64) -> Self {
        DecayDescriptor { kind: DecayKind::Gaussian, rate }
    }
    pub fn cubic(rate: f64) -> Self {
        DecayDescriptor { kind: DecayKind::CubicExponential, rate }
    }
    pub fn exponential(rate: f64) -> Self {
        DecayDescriptor { kind: DecayKind::Exponential, rate }
    }
    pub fn algebraic(power: f64) -> Self {
        DecayDescriptor { kind: DecayKind::Algebraic, rate: power }
    }

    fn valid(&self) -> bool {
        match self.kind {
            DecayKind::Algebraic => self.rate > 1.0,
            _ => self.rate > 0.0,
        }
    }

    pub fn envelope(&self, rho: f64) -> f64 {
        match self.kind {
            DecayKind::Gaussian => (-self.rate * rho * rho).exp(),
            DecayKind::CubicExponential => (-self.rate * rho.powi(3)).exp(),
            DecayKind::Exponential => (-self.rate * rho).exp(),
            DecayKind::Algebraic => (1.0 + rho).powf(-self.rate),
        }
    }

    /// Upper bound for the integral of the envelope over [rho, infinity).
    pub fn tail(&self, rho: f64) -> f64 {
        let r = self.rate;
        match self.kind {
            DecayKind::Gaussian => {
                if rho <= 0.0 {
                    0.5 * (PI / r).sqrt()
                } else {
                    self.envelope(rho) / (2.0 * r * rho).min(2.0 * (r / PI).sqrt())
                }
            }
            DecayKind::CubicExponential => {
                if rho <= 0.0 {
                    1.0 / r.cbrt()
                } else {
                    self.envelope(rho) / (3.0 * r * rho * rho).min(r.cbrt())
                }
            }
            DecayKind::Exponential => self.envelope(rho) / r,
            DecayKind::Algebraic => (1.0 + rho).powf(1.0 - r) / (r - 1.0),
        }
    }

    /// Smallest radius (up to a factor of ~1.1) with amplitude * tail <= bound.
    pub fn truncation(&self, amplitude: f64, bound: f64) -> f64 {
        if amplitude == 0.0 || amplitude * self.tail(0.0) <= bound {
            return 1.0;
        }
        let mut hi = 1.0;
        while amplitude * self.tail(hi) > bound {
            hi *= 2.0;
            if hi > 1e12 {
                return hi;
            }
        }
        let mut lo = hi / 2.0;
        while hi - lo > 0.05 * hi {
            let mid = 0.5 * (lo + hi);
            if amplitude * self.tail(mid) > bound {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PathOptions {
    pub tol: f64,
    pub decay: DecayDescriptor,
    /// Largest phase rate |x| of factors like e^{ikx}; sets the initial panel length.
    pub oscillation: f64,
    pub max_subdiv: usize,
    /// Multiplies every computed ray truncation radius.
    pub truncation_scale: f64,
}

impl PathOptions {
    pub fn new(tol: f64, decay: DecayDescriptor) -> Self {
        PathOptions { tol, decay, oscillation: 0.0, max_subdiv: 4000, truncation_scale: 1.0 }
    }

    pub fn oscillation(mut self, w: f64) -> Self {
        self.oscillation = w.abs();
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PathResult {
    pub value: C,
    pub error: f64,
    pub evals: usize,
}

fn initial_panels(length: f64, osc: f64) -> usize {
    let by_osc = (length * osc * 4.0 / PI).ceil();
    (by_osc.max(length / 4.0).ceil().max(1.0) as usize).min(20_000)
}

/// Integrate `f` along `path`, truncating rays by the decay descriptor.
pub fn integrate_path(f: impl Fn(C) -> C, path: &ContourPath, opts: &PathOptions) -> Result<PathResult, QuadError> {
    if !opts.decay.valid() {
        return Err(QuadError::Decay(format!("invalid decay descriptor {:?}", opts.decay)));
    }
    let n = path.pieces.len().max(1) as f64;
    let piece_tol = 0.75 * opts.tol / n;
    let mut total = C::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evals = 0;
    for (idx, piece) in path.pieces.iter().enumerate() {
        let (v, e, ev) = match *piece {
            Piece::Segment { a, b } => {
                let len = (b - a).norm();
                if len == 0.0 {
                    continue;
                }
                let d = (b - a) / len;
                let o = AdaptOptions { abs_tol: piece_tol, rel_tol: 1e-14, max_subdiv: opts.max_subdiv, initial_panels: initial_panels(len, opts.oscillation) };
                let r = adaptive(|s: f64| f(a + d * s) * d, 0.0, len, o);
                if !r.converged {
                    return Err(QuadError::NoConvergence { piece: idx, interval: r.worst, error: r.error });
                }
                (r.value, r.error, r.evals)
            }
            Piece::Arc { center, radius, theta0, theta1 } => {
                let len = radius * (theta1 - theta0).abs();
                let o = AdaptOptions { abs_tol: piece_tol, rel_tol: 1e-14, max_subdiv: opts.max_subdiv, initial_panels: initial_panels(len, opts.oscillation) };
                let r = adaptive(
                    |th: f64| {
                        let e = cis(th);
                        f(center + radius * e) * C::new(0.0, radius) * e
                    },
                    theta0,
                    theta1,
                    o,
                );
                if !r.converged {
                    return Err(QuadError::NoConvergence { piece: idx, interval: r.worst, error: r.error });
                }
                (r.value, r.error, r.evals)
            }
            Piece::Ray { start, dir } | Piece::RayIn { end: start, dir } => {
                let sign = if matches!(piece, Piece::RayIn { .. }) { -1.0 } else { 1.0 };
                let g = |rho: f64| f(start + dir * rho) * dir;
                let radius = ray_truncation(&g, &opts.decay, 0.25 * opts.tol / n).ok_or_else(|| {
                    QuadError::Decay(format!("integrand does not decay along ray {idx} from {start} in direction {dir}"))
                })? * opts.truncation_scale;
                let o = AdaptOptions { abs_tol: piece_tol, rel_tol: 1e-14, max_subdiv: opts.max_subdiv, initial_panels: initial_panels(radius, opts.oscillation) };
                let r = adaptive(&g, 0.0, radius, o);
                if !r.converged {
                    return Err(QuadError::NoConvergence { piece: idx, interval: r.worst, error: r.error });
                }
                (r.value * sign, r.error, r.evals)
            }
        };
        total += v;
        error += e;
        evals += ev;
    }
    Ok(PathResult { value: total, error, evals })
}

/// Truncation radius for a ray integrand `g(rho)` under `decay`, or `None` if
/// the sampled integrand violates the envelope.
pub(crate) fn ray_truncation(g: &impl Fn(f64) -> C, decay: &DecayDescriptor, bound: f64) -> Option<f64> {
    let mut amp: f64 = 0.0;
    let mut rho = 0.0;
    let mut step = 0.125;
    loop {
        let env = decay.envelope(rho);
        if env < 1e-200 {
            break;
        }
        let v = g(rho).norm();
        if !v.is_finite() {
            return None;
        }
        amp = amp.max(v / env);
        if env < 1e-18 && rho > 1.0 {
            break;
        }
        rho += step;
        step = (step * 1.25).min(4.0);
        if rho > 1e6 {
            break;
        }
    }
    let radius = decay.truncation(amp, bound);
    // the integrand must be negligible at the cut
    let at = g(radius).norm();
    let env_bound = 10.0 * amp * decay.envelope(radius) + bound;
    if !(at.is_finite() && at <= env_bound) {
        return None;
    }
    Some(radius)
}
