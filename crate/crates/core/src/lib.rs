//! Unified transform solutions of linear initial-boundary value problems,
//! their analytic continuation beyond the physical domain, and the
//! associated boundary-to-initial maps.

pub mod cli;
pub mod expr;
pub mod quad;
pub mod specfun;
pub mod utm_continuous;
pub mod utm_semidiscrete;
