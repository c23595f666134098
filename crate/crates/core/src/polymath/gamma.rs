//! Complex gamma function at arbitrary precision.
//!
//! Right half-plane: upward shift followed by the Stirling series. Left
//! half-plane: reflection, with the branch of the logarithm restored from a
//! double-precision estimate of the principal imaginary part.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::bernoulli::even_bernoulli;
use crate::error::{FoxError, Result};
use crate::scalar::{cx, from_rational, int, real, ComplexFns, Real};

/// Gamma-function evaluator holding the Stirling coefficients for `T`.
#[derive(Debug, Clone)]
pub struct GammaFn<T> {
    /// `B_{2k} / (2k (2k-1))`, `k = 1..K`.
    stirling: Vec<T>,
    /// Minimum `|z|` at which the truncated Stirling series is used.
    r0: f64,
    half_ln_2pi: T,
    pole_tol: f64,
}

fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).log2()).sum()
}

impl<T: Real> GammaFn<T> {
    /// `pole_tol` is the relative distance from a non-positive integer treated as a pole.
    pub fn new(pole_tol: f64) -> Self {
        let bits = T::BITS as f64 + 8.0;
        let mut r0 = (0.25 * T::BITS as f64).max(8.0);
        // Smallest K with |B_{2K+2}| / ((2K+2)(2K+1) r0^(2K+1)) < 2^-bits.
        let terms = loop {
            let found = (1..4000usize).find(|&k| {
                let e = 1.0 + log2_factorial(2 * k + 2)
                    - (2 * k + 2) as f64 * std::f64::consts::TAU.log2()
                    - (2 * k + 1) as f64 * r0.log2();
                e < -bits
            });
            match found {
                Some(k) => break k,
                None => r0 *= 1.5,
            }
        };
        let stirling = even_bernoulli(terms)
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let k = (i + 1) as i64;
                from_rational::<T>(b) / int::<T>(2 * k * (2 * k - 1))
            })
            .collect();
        let half_ln_2pi = (int::<T>(2) * T::pi()).ln() / int::<T>(2);
        GammaFn { stirling, r0, half_ln_2pi, pole_tol }
    }

    /// Returns `Some(n)` when `z` is within tolerance of the non-positive integer `-n`.
    pub fn pole_index(&self, z: &Complex<T>) -> Option<u64> {
        let n = z.re.round();
        if n > T::zero() {
            return None;
        }
        let d = (z.clone() - cx(n.clone())).cabs().to_f64();
        let scale = z.cabs().to_f64().max(1.0);
        (d <= self.pole_tol * scale).then(|| (-n.to_f64()) as u64)
    }

    /// Principal `log Gamma(z)` for `Re z >= 1/2`.
    fn lgamma_right(&self, z: &Complex<T>) -> Complex<T> {
        let x = z.re.to_f64();
        let y = z.im.to_f64();
        let mut m = 0usize;
        if x < 0.5 {
            m = (0.5 - x).ceil() as usize;
        }
        if y * y < self.r0 * self.r0 {
            let need = (self.r0 * self.r0 - y * y).sqrt() - x;
            if need > m as f64 {
                m = need.ceil() as usize;
            }
        }
        let w = z.clone() + cx(int::<T>(m as i64));
        let mut result = self.stirling_series(&w);
        if m > 0 {
            let mut prod = Complex::<T>::one();
            let mut arg_sum = 0.0f64;
            for k in 0..m {
                let f = z.clone() + cx(int::<T>(k as i64));
                arg_sum += y.atan2(x + k as f64);
                prod *= f;
            }
            let mut log_prod = prod.cln();
            let tau = std::f64::consts::TAU;
            let turns = ((arg_sum - log_prod.im.to_f64()) / tau).round();
            if turns != 0.0 {
                log_prod.im += int::<T>(turns as i64) * int::<T>(2) * T::pi();
            }
            result -= log_prod;
        }
        result
    }

    fn stirling_series(&self, w: &Complex<T>) -> Complex<T> {
        let half = cx(real::<T>(0.5));
        let mut acc = (w.clone() - half) * w.cln() - w.clone() + cx(self.half_ln_2pi.clone());
        let inv = Complex::<T>::one() / w.clone();
        let inv2 = inv.clone() * inv.clone();
        let mut pow = inv;
        let tiny = T::epsilon() * acc.cabs().max_with(&T::one());
        for c in &self.stirling {
            let term = pow.clone() * c.clone();
            let small = term.cabs() < tiny;
            acc += term;
            if small {
                break;
            }
            pow *= inv2.clone();
        }
        acc
    }

    /// Principal branch of `log Gamma(z)`; on the negative real axis the
    /// limit from the upper half-plane.
    pub fn log_gamma(&self, z: &Complex<T>) -> Result<Complex<T>> {
        if self.pole_index(z).is_some() {
            return Err(FoxError::PoleOfGamma { re: z.re.to_f64(), im: z.im.to_f64() });
        }
        if z.re >= real::<T>(0.5) {
            return Ok(self.lgamma_right(z));
        }
        let one_minus = Complex::<T>::one() - z.clone();
        let mut l = cx(T::pi().ln()) - z.csin_pi().cln() - self.lgamma_right(&one_minus);
        let target = principal_im_estimate(z.re.to_f64(), z.im.to_f64());
        let tau = std::f64::consts::TAU;
        let turns = ((target - l.im.to_f64()) / tau).round();
        if turns != 0.0 {
            l.im += int::<T>(turns as i64) * int::<T>(2) * T::pi();
        }
        Ok(l)
    }

    pub fn gamma(&self, z: &Complex<T>) -> Result<Complex<T>> {
        if self.pole_index(z).is_some() {
            return Err(FoxError::PoleOfGamma { re: z.re.to_f64(), im: z.im.to_f64() });
        }
        if z.re >= real::<T>(0.5) {
            return Ok(self.lgamma_right(z).cexp());
        }
        let one_minus = Complex::<T>::one() - z.clone();
        let denom = z.csin_pi() * self.lgamma_right(&one_minus).cexp();
        Ok(cx(T::pi()) / denom)
    }

    /// `1 / Gamma(z)`, an entire function: exactly zero at the poles.
    pub fn rgamma(&self, z: &Complex<T>) -> Complex<T> {
        if z.re >= real::<T>(0.5) {
            return (-self.lgamma_right(z)).cexp();
        }
        if z.im.is_zero() && z.re.clone() == z.re.round() {
            return Complex::zero();
        }
        let one_minus = Complex::<T>::one() - z.clone();
        z.csin_pi() * self.lgamma_right(&one_minus).cexp() / cx(T::pi())
    }
}

trait MaxWith {
    fn max_with(self, other: &Self) -> Self;
}

impl<T: Real> MaxWith for T {
    fn max_with(self, other: &Self) -> Self {
        if self < *other {
            other.clone()
        } else {
            self
        }
    }
}

/// Double-precision estimate of `Im log Gamma(x + iy)` on the principal branch.
fn principal_im_estimate(x: f64, y: f64) -> f64 {
    let mut m = 0usize;
    if x < 12.0 {
        m = (12.0 - x).ceil() as usize;
    }
    let mut arg_sum = 0.0;
    for k in 0..m {
        arg_sum += y.atan2(x + k as f64);
    }
    let w = Complex::new(x + m as f64, y);
    let lw = w.ln();
    let mut s = (w - 0.5) * lw - w;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    s += inv / 12.0;
    s -= inv * inv2 / 360.0;
    s += inv * inv2 * inv2 / 1260.0;
    s.im - arg_sum
}

/// Rising factorial `z (z+1) ... (z+n-1)`.
pub fn pochhammer<T: Real>(z: &Complex<T>, n: usize) -> Complex<T> {
    let mut acc = Complex::<T>::one();
    for k in 0..n {
        acc *= z.clone() + cx(int::<T>(k as i64));
    }
    acc
}
