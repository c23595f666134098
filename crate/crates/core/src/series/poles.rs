//! Poles of the shifted integrand, the quantity `beta_hat(sigma)`, and the
//! convergence abscissa of the inverse factorial series.

use num_complex::Complex;

use crate::error::{FoxError, Result};
use crate::params::{HParams, PrecisionContext};
use crate::scalar::{cx, int, ComplexFns, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct PoleRecord<T> {
    pub location: Complex<T>,
    pub multiplicity: u32,
    /// A simple pole at a non-positive integer.
    pub removable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet<T> {
    /// Sorted by decreasing real part.
    pub records: Vec<PoleRecord<T>>,
    /// Largest real part over non-removable poles; `None` stands for `-inf`.
    pub beta_hat: Option<T>,
}

impl<T: Real> PoleSet<T> {
    /// Highest multiplicity among the records, 0 when empty.
    pub fn max_multiplicity(&self) -> u32 {
        self.records.iter().map(|r| r.multiplicity).max().unwrap_or(0)
    }
}

fn near<T: Real>(x: &Complex<T>, y: &Complex<T>, tol: f64) -> bool {
    let d = (x.clone() - y.clone()).cabs().to_f64();
    d <= tol * x.cabs().to_f64().max(y.cabs().to_f64()).max(1.0)
}

/// Whether `x` is within `tol` of a non-positive integer.
fn near_nonpositive_integer<T: Real>(x: &Complex<T>, tol: f64) -> bool {
    let n = x.re.round();
    n <= T::zero() && near(x, &cx(n), tol)
}

/// Enumeration depth reaching at least one unit below the shallowest pole of every family.
pub fn default_depth<T: Real>(params: &HParams<T>, sigma: &Complex<T>) -> usize {
    let shallow: Vec<f64> =
        params.lower.iter().map(|p| (sigma.re.clone() - p.shift.re.clone() / p.scale.clone()).to_f64()).collect();
    let top = shallow.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bottom = shallow.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_scale = params.lower.iter().map(|p| p.scale.to_f64()).fold(0.0, f64::max);
    (max_scale * (top - bottom + 2.0)).ceil() as usize + 2
}

/// Poles of `prod_j Gamma(b_j - sigma beta_j + beta_j s) / prod_i Gamma(a_i - sigma alpha_i + alpha_i s)`
/// located at `s = sigma - (b_j + nu) / beta_j`, `nu <= depth`.
pub fn pole_set<T: Real>(params: &HParams<T>, sigma: &Complex<T>, depth: usize, ctx: &PrecisionContext) -> PoleSet<T> {
    let tol = ctx.normalized().pole_merge_tol;
    let mut merged: Vec<PoleRecord<T>> = Vec::new();
    for p in &params.lower {
        for nu in 0..=depth {
            let s = sigma.clone() - (p.shift.clone() + cx(int::<T>(nu as i64))) / p.scale.clone();
            match merged.iter_mut().find(|r| near(&r.location, &s, tol)) {
                Some(r) => r.multiplicity += 1,
                None => merged.push(PoleRecord { location: s, multiplicity: 1, removable: false }),
            }
        }
    }
    let mut records = Vec::with_capacity(merged.len());
    for mut r in merged {
        let cancelled = params
            .upper
            .iter()
            .filter(|p| {
                let arg = p.shift.clone() + (r.location.clone() - sigma.clone()) * p.scale.clone();
                near_nonpositive_integer(&arg, tol)
            })
            .count() as u32;
        if cancelled >= r.multiplicity {
            continue;
        }
        r.multiplicity -= cancelled;
        r.removable = r.multiplicity == 1 && near_nonpositive_integer(&r.location, tol);
        records.push(r);
    }
    records.sort_by(|a, b| b.location.re.partial_cmp(&a.location.re).unwrap_or(std::cmp::Ordering::Equal));
    let beta_hat = records.iter().filter(|r| !r.removable).map(|r| r.location.re.clone()).next();
    PoleSet { records, beta_hat }
}

/// Convergence abscissa `lambda = beta_hat(sigma) - Re sigma` of the inverse
/// factorial series of a family with `eta = 1`; `None` stands for `-inf`.
pub fn abscissa<T: Real>(params: &HParams<T>, sigma: &Complex<T>, ctx: &PrecisionContext) -> Result<Option<T>> {
    let info = params.derive(ctx)?;
    if info.eta != 1 {
        return Err(FoxError::EtaNotOne { eta: info.eta });
    }
    if info.boundary_warning {
        return Err(FoxError::BoundaryGamma { gamma1: info.gamma1.to_f64() });
    }
    if info.gamma1 < T::pi() / int::<T>(3) {
        return Err(FoxError::SectorTooNarrow { gamma1: info.gamma1.to_f64() });
    }
    let poles = pole_set(params, sigma, default_depth(params, sigma), ctx);
    Ok(poles.beta_hat.map(|b| b - sigma.re.clone()))
}

/// Abscissa of the series in `z` for an arbitrary integer `eta`: the abscissa
/// of the augmented family at `sigma = theta + eta`, measured in `z`.
pub fn abscissa_theta<T: Real>(params: &HParams<T>, theta: &T, ctx: &PrecisionContext) -> Result<Option<T>> {
    let info = params.derive(ctx)?;
    let aug = params.augment(theta, info.eta);
    abscissa(&aug, &cx(theta.clone() + int::<T>(info.eta)), ctx)
}
