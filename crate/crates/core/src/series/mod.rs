//! Evaluators for the expansions of `H(rho t)` about `t = 1`, the inverse
//! factorial series of its Mellin transform, and the associated diagnostics.

mod expansion;
mod mellin;
mod poles;

pub use expansion::{eval_h_general, eval_h_omega, eval_phi, GeneralExpansion, OmegaExpansion, PhiExpansion};
pub use mellin::{eval_w_direct, eval_w_factorial, FactorialSeries, WDirect};
pub use poles::{abscissa, abscissa_theta, default_depth, pole_set, PoleRecord, PoleSet};

use num_complex::Complex;

use crate::coeffs::CoefficientTable;
use crate::error::{FoxError, Result};
use crate::scalar::{log10_abs, ComplexFns, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Warning {
    /// The factorial series is evaluated at or left of its abscissa.
    BelowAbscissa,
    /// `gamma1` sits on `pi/3`, where the abscissa result is not guaranteed.
    BoundaryGamma,
}

impl Warning {
    pub fn name(&self) -> &'static str {
        match self {
            Warning::BelowAbscissa => "BelowAbscissa",
            Warning::BoundaryGamma => "BoundaryGamma",
        }
    }
}

/// A truncated series value.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    pub terms_used: usize,
    /// Heuristic: ten times the magnitude of the last term summed.
    pub trunc_estimate: T,
    /// `trunc_estimate <= 10^(-digits/2) |value|`.
    pub converged: bool,
    pub warnings: Vec<Warning>,
}

impl<T: Real> SeriesValue<T> {
    pub fn from_sum(value: Complex<T>, terms_used: usize, trunc_estimate: T, digits: u32) -> Self {
        let mut v = SeriesValue { value, terms_used, trunc_estimate, converged: false, warnings: Vec::new() };
        v.refresh_converged(digits);
        v
    }

    pub(crate) fn refresh_converged(&mut self, digits: u32) {
        let threshold = self.value.cabs().to_f64().log10() - digits as f64 / 2.0;
        self.converged = self.trunc_estimate.is_zero() || log10_abs(&self.trunc_estimate) <= threshold;
    }

    pub(crate) fn with_warnings(mut self, warnings: &[Warning]) -> Self {
        for w in warnings {
            if !self.warnings.contains(w) {
                self.warnings.push(*w);
            }
        }
        self
    }
}

/// Least-squares slope of `log y` against `log n` through the upper envelope
/// (maxima over consecutive blocks) of the points with `y > 0`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(n, y)| *n > 0.0 && *y > 0.0 && y.is_finite()).cloned().collect();
    if pts.len() < 3 {
        return None;
    }
    let block = (pts.len() / 20).max(1);
    let env: Vec<(f64, f64)> = pts
        .chunks(block)
        .map(|c| {
            let &(n, y) = c.iter().max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap();
            (n.ln(), y.ln())
        })
        .collect();
    if env.len() < 2 {
        return None;
    }
    let k = env.len() as f64;
    let mx = env.iter().map(|p| p.0).sum::<f64>() / k;
    let my = env.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = env.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = env.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Minimum table length accepted by [`order_estimate`].
pub const MIN_ORDER_COEFFICIENTS: usize = 50;

/// Estimate of the Hadamard order `limsup log|n f_n| / log n`, fitted over the
/// last third of the table; `-inf` for a tail that vanishes to working precision.
pub fn order_estimate<T: Real>(table: &CoefficientTable<T>) -> Result<f64> {
    if table.len() < MIN_ORDER_COEFFICIENTS {
        return Err(FoxError::InsufficientCoefficients { needed: MIN_ORDER_COEFFICIENTS, got: table.len() });
    }
    let logs: Vec<(usize, f64)> = table.indexed().map(|(n, v)| (n, log10_abs(&v.cabs()))).collect();
    let top = logs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let floor = top - table.digits_used as f64 / 2.0;
    let from = table.first_index + table.len() * 2 / 3;
    let tail: Vec<(f64, f64)> = logs
        .iter()
        .filter(|(n, l)| *n >= from.max(1) && *l > floor)
        .map(|&(n, l)| (n as f64, n as f64 * 10f64.powf(l - top)))
        .collect();
    if tail.len() < 3 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(fit_power_law(&tail).unwrap_or(f64::NEG_INFINITY))
}

#[cfg(test)]
mod tests;
