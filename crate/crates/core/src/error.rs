use thiserror::Error;

/// Failures reported by the library.
///
/// Numeric payloads are rounded to `f64`; they are diagnostic only.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoxError {
    #[error("scale factor {value} of {side} parameter {index} is not positive")]
    NonPositiveScale { side: Side, index: usize, value: f64 },
    #[error("{side} parameter {index} has a non-finite entry")]
    NonFinite { side: Side, index: usize },
    #[error("the lower parameter list is empty")]
    EmptyLower,
    #[error("mu = {residual:e} exceeds the tolerance; the function is not delta-neutral")]
    NotDeltaNeutral { residual: f64 },
    #[error("eta = {re} + {im}i is not an integer")]
    NonIntegerEta { re: f64, im: f64 },
    #[error("eta = {eta}, but this expansion requires eta = 1")]
    EtaNotOne { eta: i64 },
    #[error("gamma function pole at {re} + {im}i")]
    PoleOfGamma { re: f64, im: f64 },
    #[error("W(z) has an uncancelled pole at z = {re} + {im}i")]
    PoleOfW { re: f64, im: f64 },
    #[error("rising factorial hits a pole at z = {re} + {im}i")]
    PochhammerPole { re: f64, im: f64 },
    #[error("cancellation leaves {surviving} digits at index {index} even at {bits} bits")]
    PrecisionExhausted { index: usize, bits: u32, surviving: f64 },
    #[error("|1 - t| = {distance} is not below the radius of convergence {radius}")]
    OutsideDisk { distance: f64, radius: f64 },
    #[error("t = {re} + {im}i lies on the branch cut (-inf, 0]")]
    BranchCut { re: f64, im: f64 },
    #[error("t^omega = {re} + {im}i is outside the convergence domain of the rescaled expansion")]
    OutsideDomain { re: f64, im: f64 },
    #[error("omega = {omega} must be positive and finite")]
    InvalidOmega { omega: f64 },
    #[error("gamma1 = {gamma1} is within tolerance of pi/3; the abscissa is not determined")]
    BoundaryGamma { gamma1: f64 },
    #[error("gamma1 = {gamma1} < pi/3; the abscissa result does not apply")]
    SectorTooNarrow { gamma1: f64 },
    #[error("the integrand has a pole of order {multiplicity} at {re} + {im}i; residue series needs simple poles")]
    NonSimplePoles { re: f64, im: f64, multiplicity: u32 },
    #[error("|z| = {modulus} is too close to the circle of convergence |z| = {rho}")]
    TooCloseToBoundary { modulus: f64, rho: f64 },
    #[error("invalid closed-form family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("need at least {needed} coefficients, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

impl FoxError {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            FoxError::NonPositiveScale { .. } => "NonPositiveScale",
            FoxError::NonFinite { .. } => "NonFinite",
            FoxError::EmptyLower => "EmptyLower",
            FoxError::NotDeltaNeutral { .. } => "NotDeltaNeutral",
            FoxError::NonIntegerEta { .. } => "NonIntegerEta",
            FoxError::EtaNotOne { .. } => "EtaNotOne",
            FoxError::PoleOfGamma { .. } => "PoleOfGamma",
            FoxError::PoleOfW { .. } => "PoleOfW",
            FoxError::PochhammerPole { .. } => "PochhammerPole",
            FoxError::PrecisionExhausted { .. } => "PrecisionExhausted",
            FoxError::OutsideDisk { .. } => "OutsideDisk",
            FoxError::BranchCut { .. } => "BranchCut",
            FoxError::OutsideDomain { .. } => "OutsideDomain",
            FoxError::InvalidOmega { .. } => "InvalidOmega",
            FoxError::BoundaryGamma { .. } => "BoundaryGamma",
            FoxError::SectorTooNarrow { .. } => "SectorTooNarrow",
            FoxError::NonSimplePoles { .. } => "NonSimplePoles",
            FoxError::TooCloseToBoundary { .. } => "TooCloseToBoundary",
            FoxError::InvalidFamilyParams(_) => "InvalidFamilyParams",
            FoxError::InsufficientCoefficients { .. } => "InsufficientCoefficients",
        }
    }

    /// True for failures caused by the parameters themselves rather than evaluation.
    pub fn is_validation(&self) -> bool {
        !matches!(self, FoxError::PrecisionExhausted { .. })
    }
}

pub type Result<T> = std::result::Result<T, FoxError>;
