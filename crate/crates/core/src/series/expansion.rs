//! Power-series expansions of `H(rho t)` in powers of `1 - t`.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{SeriesValue, Warning};
use crate::coeffs::{h_coefficients, scaled_h, v_coefficients, CoefficientTable};
use crate::error::{FoxError, Result};
use crate::params::{HParams, PrecisionContext};
use crate::scalar::{int, ComplexFns, Real};

fn check_cut<T: Real>(t: &Complex<T>) -> Result<()> {
    if t.im.is_zero() && t.re <= T::zero() {
        return Err(FoxError::BranchCut { re: t.re.to_f64(), im: t.im.to_f64() });
    }
    Ok(())
}

fn check_disk<T: Real>(t: &Complex<T>, radius: &T) -> Result<Complex<T>> {
    check_cut(t)?;
    let w = Complex::<T>::one() - t.clone();
    let d = w.cabs();
    if d >= *radius {
        return Err(FoxError::OutsideDisk { distance: d.to_f64(), radius: radius.to_f64() });
    }
    Ok(w)
}

/// Sums `sum_{n >= start} c_n w^(n - start + first_power)` and reports
/// `10 |last term|` as the truncation estimate.
fn power_sum<T: Real>(
    coeffs: &[Complex<T>],
    w: &Complex<T>,
    start: usize,
    first_power: u32,
    digits: u32,
) -> SeriesValue<T> {
    let mut pw = w.clone().powu(first_power);
    let mut acc = Complex::<T>::zero();
    let mut last = T::zero();
    let mut terms = 0;
    for c in &coeffs[start.min(coeffs.len())..] {
        let term = c.clone() * pw.clone();
        last = term.cabs();
        acc += term;
        pw *= w.clone();
        terms += 1;
    }
    SeriesValue::from_sum(acc, terms.max(1), int::<T>(10) * last, digits)
}

/// `phi(t) = t^(-sigma) H(rho t) = sum_n V_n(sigma) (1 - t)^n` for a family with `eta = 1`.
#[derive(Debug, Clone)]
pub struct PhiExpansion<T> {
    pub table: CoefficientTable<T>,
    pub radius: T,
    digits: u32,
    warnings: Vec<Warning>,
}

impl<T: Real> PhiExpansion<T> {
    pub fn new(params: &HParams<T>, sigma: &Complex<T>, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let info = params.derive(ctx)?;
        let table = v_coefficients(params, sigma, n_max, ctx)?;
        let warnings = if info.boundary_warning { vec![Warning::BoundaryGamma] } else { Vec::new() };
        Ok(PhiExpansion { table, radius: info.radius, digits: ctx.effective_digits::<T>(), warnings })
    }

    pub fn eval(&self, t: &Complex<T>) -> Result<SeriesValue<T>> {
        let w = check_disk(t, &self.radius)?;
        Ok(power_sum(&self.table.values, &w, 0, 0, self.digits).with_warnings(&self.warnings))
    }
}

/// `H(rho t) = t^(theta+1) (1-t)^(eta-1) sum_n h_n / Gamma(eta+n) (1-t)^n` for any integer `eta`.
#[derive(Debug, Clone)]
pub struct GeneralExpansion<T> {
    pub table: CoefficientTable<T>,
    /// `h_n / Gamma(eta + n)`.
    pub scaled: Vec<Complex<T>>,
    pub eta: i64,
    pub theta: T,
    pub radius: T,
    digits: u32,
    warnings: Vec<Warning>,
}

impl<T: Real> GeneralExpansion<T> {
    pub fn new(params: &HParams<T>, theta: &T, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let info = params.derive(ctx)?;
        let table = h_coefficients(params, theta, n_max, ctx)?;
        let scaled = scaled_h(&table, info.eta);
        let warnings = if info.boundary_warning { vec![Warning::BoundaryGamma] } else { Vec::new() };
        Ok(GeneralExpansion {
            table,
            scaled,
            eta: info.eta,
            theta: theta.clone(),
            radius: info.radius,
            digits: ctx.effective_digits::<T>(),
            warnings,
        })
    }

    /// Index of the first coefficient not killed by a pole of `Gamma(eta + n)`.
    fn start(&self) -> usize {
        (1 - self.eta).max(0) as usize
    }

    /// `(1-t)^(eta-1) sum_n c_n (1-t)^n` at `w = 1 - t`, without the power of `t`.
    fn series_at(&self, w: &Complex<T>) -> SeriesValue<T> {
        let start = self.start();
        let first_power = (start as i64 + self.eta - 1) as u32;
        power_sum(&self.scaled, w, start, first_power, self.digits)
    }

    pub fn eval(&self, t: &Complex<T>) -> Result<SeriesValue<T>> {
        let w = check_disk(t, &self.radius)?;
        let mut v = self.series_at(&w);
        let tp = t.cpowr(&(self.theta.clone() + T::one()));
        v.value *= tp.clone();
        v.trunc_estimate *= tp.cabs();
        Ok(v.with_warnings(&self.warnings))
    }
}

/// `H(rho t) = omega * H_omega(rho^omega t^omega)`, with `H_omega` the family
/// whose scales are multiplied by `omega`, expanded by [`GeneralExpansion`].
#[derive(Debug, Clone)]
pub struct OmegaExpansion<T> {
    pub inner: GeneralExpansion<T>,
    pub omega: T,
}

impl<T: Real> OmegaExpansion<T> {
    pub fn new(params: &HParams<T>, theta: &T, omega: &T, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        if !(omega.is_finite() && *omega > T::zero()) {
            return Err(FoxError::InvalidOmega { omega: omega.to_f64() });
        }
        let inner = GeneralExpansion::new(&params.rescale(omega), theta, n_max, ctx)?;
        Ok(OmegaExpansion { inner, omega: omega.clone() })
    }

    pub fn eval(&self, t: &Complex<T>) -> Result<SeriesValue<T>> {
        check_cut(t)?;
        // u = t^omega on the sheet continuous from the positive axis
        let log_u = t.cln() * self.omega.clone();
        let outside = || {
            let u = log_u.cexp();
            FoxError::OutsideDomain { re: u.re.to_f64(), im: u.im.to_f64() }
        };
        if log_u.im.abs() * int::<T>(2) >= T::pi() {
            return Err(outside());
        }
        let u = log_u.cexp();
        let w = Complex::<T>::one() - u;
        if w.cabs() >= self.inner.radius {
            return Err(outside());
        }
        let mut v = self.inner.series_at(&w);
        let tp = (log_u * (self.inner.theta.clone() + T::one())).cexp() * self.omega.clone();
        v.value *= tp.clone();
        v.trunc_estimate *= tp.cabs();
        Ok(v.with_warnings(&self.inner.warnings))
    }
}

pub fn eval_phi<T: Real>(
    params: &HParams<T>,
    sigma: &Complex<T>,
    t: &Complex<T>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesValue<T>> {
    check_cut(t)?;
    PhiExpansion::new(params, sigma, n_max, ctx)?.eval(t)
}

pub fn eval_h_general<T: Real>(
    params: &HParams<T>,
    theta: &T,
    t: &Complex<T>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesValue<T>> {
    check_cut(t)?;
    GeneralExpansion::new(params, theta, n_max, ctx)?.eval(t)
}

pub fn eval_h_omega<T: Real>(
    params: &HParams<T>,
    theta: &T,
    omega: &T,
    t: &Complex<T>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesValue<T>> {
    check_cut(t)?;
    OmegaExpansion::new(params, theta, omega, n_max, ctx)?.eval(t)
}
