//! Bernoulli–Nørlund polynomials from their generating function
//! `(t / (e^t - 1))^a e^(x t) = sum_k B^(a)_k(x) t^k / k!`.
//!
//! The kernel `(t / (e^t - 1))^a` is formed as `exp(-a L(t))` where
//! `L(t) = log((e^t - 1) / t)`; the series inside the logarithm starts at 1,
//! so no removable singularity is ever evaluated.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{cx, int, log10_abs, ComplexFns, Real};

/// Truncated power series of the Nørlund kernel for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySeries<T> {
    /// `c_0..c_K` of `(t / (e^t - 1))^order`; `c_0 = 1`.
    pub coefficients: Vec<Complex<T>>,
    pub order: Complex<T>,
}

/// Shared tables for every order up to a fixed degree.
#[derive(Debug, Clone)]
pub struct NorlundKernel<T> {
    log_series: Vec<T>,
    inv_fact: Vec<T>,
}

impl<T: Real> NorlundKernel<T> {
    pub fn new(k_max: usize) -> Self {
        let mut inv_fact = Vec::with_capacity(k_max + 2);
        inv_fact.push(T::one());
        for k in 1..=k_max + 1 {
            let prev: T = inv_fact[k - 1].clone();
            inv_fact.push(prev / int::<T>(k as i64));
        }
        // (e^t - 1)/t = sum t^k / (k+1)!
        let d: Vec<T> = (0..=k_max).map(|k| inv_fact[k + 1].clone()).collect();
        let mut log_series = vec![T::zero(); k_max + 1];
        for k in 1..=k_max {
            let mut acc = int::<T>(k as i64) * d[k].clone();
            for j in 1..k {
                acc -= int::<T>(j as i64) * log_series[j].clone() * d[k - j].clone();
            }
            log_series[k] = acc / int::<T>(k as i64);
        }
        NorlundKernel { log_series, inv_fact }
    }

    pub fn max_degree(&self) -> usize {
        self.log_series.len() - 1
    }

    pub fn inv_factorial(&self, k: usize) -> &T {
        &self.inv_fact[k]
    }

    /// Coefficients of `(t / (e^t - 1))^order` up to `t^k_max`, real order.
    pub fn kernel_real(&self, order: &T, k_max: usize) -> Vec<T> {
        assert!(k_max <= self.max_degree(), "kernel built for degree {}", self.max_degree());
        let scaled: Vec<T> = self.log_series.iter().take(k_max + 1).map(|l| -(order.clone() * l.clone())).collect();
        exp_series(&scaled)
    }

    /// Coefficients of `(t / (e^t - 1))^order` up to `t^k_max`.
    pub fn kernel(&self, order: &Complex<T>, k_max: usize) -> PolySeries<T> {
        assert!(k_max <= self.max_degree(), "kernel built for degree {}", self.max_degree());
        let coefficients = if order.im.is_zero() {
            self.kernel_real(&order.re, k_max).into_iter().map(cx).collect()
        } else {
            let scaled: Vec<Complex<T>> =
                self.log_series.iter().take(k_max + 1).map(|l| -(order.clone() * l.clone())).collect();
            exp_series(&scaled)
        };
        PolySeries { coefficients, order: order.clone() }
    }

    /// `B^(a)_k(x) / k!` for `k = 0..=k_max`, from a kernel series.
    pub fn scaled_row(&self, kernel: &[T], x: &Complex<T>) -> Vec<Complex<T>> {
        let n = kernel.len();
        let powers = scaled_powers(x, n, &self.inv_fact);
        (0..n)
            .map(|k| {
                let mut acc = Complex::<T>::zero();
                for j in 0..=k {
                    acc += powers[k - j].clone() * kernel[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Like [`scaled_row`](Self::scaled_row), also returning for each entry
    /// `log10` of the largest term in its convolution.
    pub fn scaled_row_bounded(&self, kernel: &[T], x: &Complex<T>) -> (Vec<Complex<T>>, Vec<f64>) {
        let n = kernel.len();
        let powers = scaled_powers(x, n, &self.inv_fact);
        let log_c: Vec<f64> = kernel.iter().map(log10_abs).collect();
        let log_p: Vec<f64> = powers.iter().map(|z| log10_abs(&z.cabs())).collect();
        (0..n)
            .map(|k| {
                let mut acc = Complex::<T>::zero();
                let mut big = f64::NEG_INFINITY;
                for j in 0..=k {
                    acc += powers[k - j].clone() * kernel[j].clone();
                    big = big.max(log_c[j] + log_p[k - j]);
                }
                (acc, big)
            })
            .unzip()
    }

    /// `B^(a)_0(x) .. B^(a)_{k_max}(x)` for real order `a`.
    pub fn row(&self, order: &T, k_max: usize, x: &Complex<T>) -> Vec<Complex<T>> {
        let kernel = self.kernel_real(order, k_max);
        let mut fact = T::one();
        self.scaled_row(&kernel, x)
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                if k > 0 {
                    fact *= int::<T>(k as i64);
                }
                v * fact.clone()
            })
            .collect()
    }
}

/// `x^k / k!` for `k < n`.
fn scaled_powers<T: Real>(x: &Complex<T>, n: usize, inv_fact: &[T]) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n);
    let mut p = Complex::<T>::one();
    for f in &inv_fact[..n] {
        out.push(p.clone() * f.clone());
        p *= x.clone();
    }
    out
}

/// `exp(f)` for a series with `f_0 = 0`: `k e_k = sum_j j f_j e_{k-j}`.
fn exp_series<S>(f: &[S]) -> Vec<S>
where
    S: Clone + num_traits::Num + num_traits::NumAssign + FromIndex,
{
    let n = f.len();
    let mut e: Vec<S> = Vec::with_capacity(n);
    e.push(S::one());
    for k in 1..n {
        let mut acc = S::zero();
        for j in 1..=k {
            acc += S::from_index(j) * f[j].clone() * e[k - j].clone();
        }
        e.push(acc / S::from_index(k));
    }
    e
}

trait FromIndex {
    fn from_index(i: usize) -> Self;
}

impl<T: Real> FromIndex for T {
    fn from_index(i: usize) -> Self {
        int(i as i64)
    }
}

impl<T: Real> FromIndex for Complex<T> {
    fn from_index(i: usize) -> Self {
        cx(int(i as i64))
    }
}

/// `B^(order)_k(x)` for arbitrary complex order.
pub fn bernoulli_norlund<T: Real>(order: &Complex<T>, k: usize, x: &Complex<T>) -> Complex<T> {
    let kern = NorlundKernel::<T>::new(k);
    let series = kern.kernel(order, k);
    // k! sum_j c_j x^(k-j) / (k-j)!
    let powers = scaled_powers(x, k + 1, &kern.inv_fact);
    let mut acc = Complex::<T>::zero();
    for j in 0..=k {
        acc += powers[k - j].clone() * series.coefficients[j].clone();
    }
    let mut fact = T::one();
    for i in 2..=k {
        fact *= int::<T>(i as i64);
    }
    acc * fact
}

/// `B^(order)_0(x) .. B^(order)_{k_max}(x)` sharing one kernel.
pub fn bernoulli_norlund_row<T: Real>(order: u32, k_max: usize, x: &Complex<T>) -> Vec<Complex<T>> {
    NorlundKernel::<T>::new(k_max).row(&int::<T>(order as i64), k_max, x)
}
