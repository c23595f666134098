//! Special-function primitives: gamma, rising factorials, Bernoulli and
//! Bernoulli–Nørlund polynomials.

pub mod bernoulli;
mod gamma;
mod norlund;

pub use gamma::{pochhammer, GammaFn};
pub use norlund::{bernoulli_norlund, bernoulli_norlund_row, NorlundKernel, PolySeries};

use num_complex::Complex;

use crate::error::Result;
use crate::params::PrecisionContext;
use crate::scalar::Real;

/// Principal branch of `log Gamma(z)`.
///
/// Builds a fresh [`GammaFn`]; hold one directly when evaluating many points.
pub fn log_gamma<T: Real>(z: &Complex<T>, ctx: &PrecisionContext) -> Result<Complex<T>> {
    GammaFn::new(ctx.normalized().pole_merge_tol).log_gamma(z)
}
