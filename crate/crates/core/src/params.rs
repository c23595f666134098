//! Parameter model of `H^{q,0}_{p,q}` and its derived domain quantities.
//!
//! The function is the Mellin–Barnes integral of
//! `prod_j Gamma(b_j + beta_j s) / prod_i Gamma(a_i + alpha_i s) * z^(-s)`
//! over a left loop enclosing all poles of the numerator.

use num_complex::Complex;

use crate::error::{FoxError, Result, Side};
use crate::scalar::{cx, int, real, ComplexFns, Real};

/// One `(scale, shift)` pair of the parameter lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair<T> {
    pub scale: T,
    pub shift: Complex<T>,
}

impl<T: Real> Pair<T> {
    pub fn new(scale: T, shift: Complex<T>) -> Self {
        Pair { scale, shift }
    }

    pub fn real(scale: T, shift: T) -> Self {
        Pair { scale, shift: cx(shift) }
    }
}

/// Upper pairs `(alpha_i, a_i)` and lower pairs `(beta_j, b_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HParams<T> {
    pub upper: Vec<Pair<T>>,
    pub lower: Vec<Pair<T>>,
}

/// Tolerances and requested precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionContext {
    /// Requested significant decimal digits.
    pub digits: u32,
    /// Relative distance below which two poles are treated as one.
    pub pole_merge_tol: f64,
    /// Accepted deviation of `mu` from 0 and of `eta` from an integer.
    pub integer_tol: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: 60, pole_merge_tol: 1e-10, integer_tol: 1e-10 }
    }
}

impl PrecisionContext {
    pub fn with_digits(digits: u32) -> Self {
        PrecisionContext { digits, ..Default::default() }
    }

    /// Clamps the context into its valid range.
    pub fn normalized(&self) -> Self {
        let clamp = |x: f64, d: f64| if x > 0.0 && x < 1.0 { x } else { d };
        PrecisionContext {
            digits: self.digits.max(16),
            pole_merge_tol: clamp(self.pole_merge_tol, 1e-10),
            integer_tol: clamp(self.integer_tol, 1e-10),
        }
    }

    /// Digits actually available in `T`, capped by the request.
    pub fn effective_digits<T: Real>(&self) -> u32 {
        self.digits.min(T::digits())
    }
}

/// Quantities derived from a delta-neutral parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainInfo<T> {
    /// `sum beta_j - sum alpha_i` as computed (at most the tolerance in magnitude).
    pub mu: T,
    /// `prod alpha_i^alpha_i * prod beta_j^(-beta_j)`.
    pub beta_const: T,
    /// The singular point `1 / beta_const`.
    pub rho: T,
    /// Half-opening `2 pi min(scales)` of the sector of analyticity.
    pub gamma1: T,
    pub eta: i64,
    /// Deviation of the computed `eta` from the stored integer.
    pub eta_residual: f64,
    /// `(-1)^eta (2 pi)^(q - p)`.
    pub c0: T,
    /// Radius of convergence of the expansions around `t = 1`.
    pub radius: T,
    pub delta_neutral: bool,
    /// Set when `gamma1` is within tolerance of `pi/3`.
    pub boundary_warning: bool,
}

impl<T: Real> HParams<T> {
    /// Builds and validates a parameter set.
    pub fn new(upper: Vec<Pair<T>>, lower: Vec<Pair<T>>) -> Result<Self> {
        HParams { upper, lower }.validate()
    }

    /// Shorthand for real shifts: `upper = [(alpha, a)]`, `lower = [(beta, b)]`.
    pub fn real(upper: &[(T, T)], lower: &[(T, T)]) -> Result<Self> {
        let conv = |v: &[(T, T)]| v.iter().map(|(s, x)| Pair::real(s.clone(), x.clone())).collect();
        Self::new(conv(upper), conv(lower))
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Returns the parameters unchanged if every invariant holds.
    pub fn validate(self) -> Result<Self> {
        if self.lower.is_empty() {
            return Err(FoxError::EmptyLower);
        }
        for (side, list) in [(Side::Upper, &self.upper), (Side::Lower, &self.lower)] {
            for (index, pair) in list.iter().enumerate() {
                if !pair.scale.is_finite() || !pair.shift.is_finite_c() {
                    return Err(FoxError::NonFinite { side, index });
                }
                if pair.scale <= T::zero() {
                    return Err(FoxError::NonPositiveScale { side, index, value: pair.scale.to_f64() });
                }
            }
        }
        Ok(self)
    }

    /// All scale factors, upper first.
    pub fn scales(&self) -> impl Iterator<Item = &T> {
        self.upper.iter().chain(self.lower.iter()).map(|p| &p.scale)
    }

    pub fn mu(&self) -> T {
        let mut mu = T::zero();
        for p in &self.lower {
            mu += p.scale.clone();
        }
        for p in &self.upper {
            mu -= p.scale.clone();
        }
        mu
    }

    /// `prod alpha_i^alpha_i * prod beta_j^(-beta_j)`, through its logarithm.
    pub fn beta_const(&self) -> T {
        let mut log = T::zero();
        for p in &self.upper {
            log += p.scale.clone() * p.scale.ln();
        }
        for p in &self.lower {
            log -= p.scale.clone() * p.scale.ln();
        }
        log.exp()
    }

    pub fn gamma1(&self) -> T {
        let min = self.scales().cloned().reduce(|a, b| if b < a { b } else { a }).expect("q >= 1");
        int::<T>(2) * T::pi() * min
    }

    /// `sum a_i - sum b_j + (q - p)/2` before rounding.
    pub fn eta_value(&self) -> Complex<T> {
        let mut eta: Complex<T> = cx(real::<T>(0.5) * int::<T>(self.q() as i64 - self.p() as i64));
        for p in &self.upper {
            eta += p.shift.clone();
        }
        for p in &self.lower {
            eta -= p.shift.clone();
        }
        eta
    }

    /// Rounds `eta` to an integer, or fails when it is not one within `tol`.
    pub fn eta_integer(&self, tol: f64) -> Result<(i64, f64)> {
        let eta = self.eta_value();
        let rounded = eta.re.round();
        let dev = (eta.re.clone() - rounded.clone()).abs().to_f64();
        let im = eta.im.abs().to_f64();
        if dev > tol || im > tol {
            return Err(FoxError::NonIntegerEta { re: eta.re.to_f64(), im: eta.im.to_f64() });
        }
        Ok((rounded.to_f64() as i64, dev.max(im)))
    }

    /// Computes every derived quantity; fails unless `mu = 0` and `eta` is an integer.
    pub fn derive(&self, ctx: &PrecisionContext) -> Result<DomainInfo<T>> {
        let ctx = ctx.normalized();
        let mu = self.mu();
        let residual = mu.abs().to_f64();
        if residual > ctx.integer_tol {
            return Err(FoxError::NotDeltaNeutral { residual: mu.to_f64() });
        }
        let (eta, eta_residual) = self.eta_integer(ctx.integer_tol)?;
        let beta_const = self.beta_const();
        let rho = T::one() / beta_const.clone();
        let gamma1 = self.gamma1();
        let sign = if eta.rem_euclid(2) == 0 { T::one() } else { -T::one() };
        let c0 = sign * (int::<T>(2) * T::pi()).powi(self.q() as i32 - self.p() as i32);
        let third = T::pi() / int::<T>(3);
        let boundary_warning = (gamma1.clone() - third).abs().to_f64() <= ctx.integer_tol;
        let radius = radius_for_gamma1(&gamma1);
        Ok(DomainInfo {
            mu,
            beta_const,
            rho,
            gamma1,
            eta,
            eta_residual,
            c0,
            radius,
            delta_neutral: true,
            boundary_warning,
        })
    }

    /// Parameters of `t^(-sigma) H(rho t)` up to the constant `rho^sigma`:
    /// `a_i -> a_i - sigma alpha_i`, `b_j -> b_j - sigma beta_j`.
    pub fn shift(&self, sigma: &Complex<T>) -> Self {
        let move_pair =
            |p: &Pair<T>| Pair { scale: p.scale.clone(), shift: p.shift.clone() - sigma.clone() * p.scale.clone() };
        HParams { upper: self.upper.iter().map(move_pair).collect(), lower: self.lower.iter().map(move_pair).collect() }
    }

    /// Multiplies `W(z)` by `Gamma(z + theta + eta) / Gamma(z + theta + 1)`,
    /// which turns any integer `eta` into 1.
    pub fn augment(&self, theta: &T, eta: i64) -> Self {
        let mut out = self.clone();
        out.upper.push(Pair::real(T::one(), theta.clone() + T::one()));
        out.lower.push(Pair::real(T::one(), theta.clone() + int::<T>(eta)));
        out
    }

    /// Multiplies every scale by `omega`.
    pub fn rescale(&self, omega: &T) -> Self {
        let scale = |p: &Pair<T>| Pair { scale: p.scale.clone() * omega.clone(), shift: p.shift.clone() };
        HParams { upper: self.upper.iter().map(scale).collect(), lower: self.lower.iter().map(scale).collect() }
    }
}

/// `R = 1` for `gamma1 >= pi/3`, else `2 sin(gamma1 / 2)`.
pub fn radius_for_gamma1<T: Real>(gamma1: &T) -> T {
    let third = T::pi() / int::<T>(3);
    if *gamma1 >= third {
        T::one()
    } else {
        int::<T>(2) * (gamma1.clone() / int::<T>(2)).sin()
    }
}
