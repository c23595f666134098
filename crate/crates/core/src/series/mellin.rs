//! The Mellin transform `W(z) = rho^(-z) prod Gamma(beta_j z + b_j) / prod Gamma(alpha_i z + a_i)`
//! and its inverse factorial series.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::poles::abscissa_theta;
use super::{SeriesValue, Warning};
use crate::coeffs::{h_coefficients, CoefficientTable};
use crate::error::{FoxError, Result};
use crate::params::{HParams, PrecisionContext};
use crate::polymath::GammaFn;
use crate::scalar::{cx, int, ComplexFns, Real};

/// Direct evaluation of `W(z)` from gamma functions.
#[derive(Debug, Clone)]
pub struct WDirect<T> {
    params: HParams<T>,
    ln_rho: T,
    gamma: GammaFn<T>,
}

impl<T: Real> WDirect<T> {
    pub fn new(params: &HParams<T>, ctx: &PrecisionContext) -> Self {
        let ctx = ctx.normalized();
        WDirect { params: params.clone(), ln_rho: -params.beta_const().ln(), gamma: GammaFn::new(ctx.pole_merge_tol) }
    }

    pub fn eval(&self, z: &Complex<T>) -> Result<Complex<T>> {
        let arg = |p: &crate::params::Pair<T>| z.clone() * p.scale.clone() + p.shift.clone();
        let mut num_poles: Vec<(Complex<T>, T)> = Vec::new();
        let mut den_poles: Vec<(Complex<T>, T)> = Vec::new();
        let mut log = -(z.clone() * self.ln_rho.clone());
        for p in &self.params.lower {
            let x = arg(p);
            if let Some(n) = self.gamma.pole_index(&x) {
                num_poles.push((cx(-int::<T>(n as i64)), p.scale.clone()));
            } else {
                log += self.gamma.log_gamma(&x)?;
            }
        }
        for p in &self.params.upper {
            let x = arg(p);
            if let Some(n) = self.gamma.pole_index(&x) {
                den_poles.push((cx(-int::<T>(n as i64)), p.scale.clone()));
            } else {
                log -= self.gamma.log_gamma(&x)?;
            }
        }
        if num_poles.len() > den_poles.len() {
            return Err(FoxError::PoleOfW { re: z.re.to_f64(), im: z.im.to_f64() });
        }
        if den_poles.len() > num_poles.len() {
            return Ok(Complex::zero());
        }
        // Gamma(x_n)/Gamma(x_d) -> (alpha/beta) (-1)^(x_d - x_n) Gamma(1 - x_d)/Gamma(1 - x_n)
        let mut factor = Complex::<T>::one();
        for ((xn, beta), (xd, alpha)) in num_poles.into_iter().zip(den_poles) {
            let one = Complex::<T>::one();
            log += self.gamma.log_gamma(&(one.clone() - xd.clone()))? - self.gamma.log_gamma(&(one - xn.clone()))?;
            let parity = (xd.re - xn.re).to_f64().round() as i64;
            let sign = if parity.rem_euclid(2) == 0 { T::one() } else { -T::one() };
            factor *= sign * alpha / beta;
        }
        Ok(log.cexp() * factor)
    }
}

/// `W(z) = sum_n h_n Gamma(z + theta + 1) / Gamma(z + theta + eta + n + 1)`.
#[derive(Debug, Clone)]
pub struct FactorialSeries<T> {
    pub table: CoefficientTable<T>,
    pub eta: i64,
    pub theta: T,
    /// Convergence abscissa in `z`; `None` when it is `-inf` or not determined.
    pub abscissa: Option<T>,
    /// Whether the abscissa could be determined.
    pub abscissa_known: bool,
    digits: u32,
    tol: f64,
}

impl<T: Real> FactorialSeries<T> {
    pub fn new(params: &HParams<T>, theta: &T, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let info = params.derive(ctx)?;
        let table = h_coefficients(params, theta, n_max, ctx)?;
        let (abscissa, abscissa_known) = match abscissa_theta(params, theta, ctx) {
            Ok(a) => (a, true),
            Err(_) => (None, false),
        };
        Ok(FactorialSeries {
            table,
            eta: info.eta,
            theta: theta.clone(),
            abscissa,
            abscissa_known,
            digits: ctx.effective_digits::<T>(),
            tol: ctx.normalized().pole_merge_tol,
        })
    }

    fn check_divisor(&self, d: &Complex<T>, z: &Complex<T>) -> Result<()> {
        if d.cabs().to_f64() <= self.tol * z.cabs().to_f64().max(1.0) {
            return Err(FoxError::PochhammerPole { re: z.re.to_f64(), im: z.im.to_f64() });
        }
        Ok(())
    }

    /// The individual terms `h_n Gamma(w) / Gamma(w + eta + n)`, `w = z + theta + 1`.
    pub fn terms(&self, z: &Complex<T>) -> Result<Vec<Complex<T>>> {
        let w = z.clone() + cx(self.theta.clone() + T::one());
        // c_0 = Gamma(w) / Gamma(w + eta)
        let mut c = Complex::<T>::one();
        if self.eta >= 0 {
            for k in 0..self.eta {
                let d = w.clone() + cx(int::<T>(k));
                self.check_divisor(&d, z)?;
                c /= d;
            }
        } else {
            for k in self.eta..0 {
                c *= w.clone() + cx(int::<T>(k));
            }
        }
        // c_n = c_{n-1} / (w + eta + n - 1)
        let base = w + cx(int::<T>(self.eta));
        let mut out = Vec::with_capacity(self.table.len());
        for (n, h) in self.table.values.iter().enumerate() {
            if n > 0 {
                let d = base.clone() + cx(int::<T>(n as i64 - 1));
                self.check_divisor(&d, z)?;
                c /= d;
            }
            out.push(h.clone() * c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, z: &Complex<T>) -> Result<SeriesValue<T>> {
        let terms = self.terms(z)?;
        let mut acc = Complex::<T>::zero();
        let mut last = T::zero();
        for t in &terms {
            last = t.cabs();
            acc += t.clone();
        }
        let mut v = SeriesValue::from_sum(acc, terms.len().max(1), int::<T>(10) * last, self.digits);
        let below = match (&self.abscissa, self.abscissa_known) {
            (Some(l), true) => z.re <= *l,
            _ => false,
        };
        if below {
            v.converged = false;
            v.warnings.push(Warning::BelowAbscissa);
        }
        Ok(v)
    }
}

pub fn eval_w_direct<T: Real>(params: &HParams<T>, z: &Complex<T>, ctx: &PrecisionContext) -> Result<Complex<T>> {
    WDirect::new(params, ctx).eval(z)
}

pub fn eval_w_factorial<T: Real>(
    params: &HParams<T>,
    theta: &T,
    z: &Complex<T>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesValue<T>> {
    FactorialSeries::new(params, theta, n_max, ctx)?.eval(z)
}
