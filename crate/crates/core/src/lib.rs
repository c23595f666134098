//! Evaluation of delta-neutral Fox `H^{q,0}_{p,q}` functions near their
//! positive singular point `z = rho`.
//!
//! The library builds the power-series coefficients of `H(rho t)` in powers
//! of `1 - t` (through Bernoulli–Nørlund polynomials), evaluates the related
//! inverse factorial series of the Mellin transform, and ships independent
//! residue-series and closed-form oracles to check both.
//!
//! All numerics are generic over [`Real`]; the aliases below name the usual
//! instantiations.

pub mod coeffs;
pub mod error;
pub mod oracle;
pub mod params;
pub mod polymath;
pub mod scalar;
pub mod series;

pub use error::{FoxError, Result};
pub use params::{DomainInfo, HParams, Pair, PrecisionContext};
pub use scalar::{ComplexFns, Mp, Real};

pub use num_complex::Complex;

/// 38 significant digits.
pub type Mp128 = Mp<128>;
/// 76 significant digits; the default working precision.
pub type Mp256 = Mp<256>;
pub type Mp512 = Mp<512>;
pub type Mp1024 = Mp<1024>;
pub type Mp2048 = Mp<2048>;

pub type C64 = Complex<f64>;
pub type CMp256 = Complex<Mp256>;
