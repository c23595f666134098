//! Coefficients of the expansion of `H^{q,0}_{p,q}` about its singular point.
//!
//! For `eta = 1`,
//! `V_n(sigma) = pre * sum_k (-1)^k l_{n-k} / (k! (n-k)!) * B^(n+1)_k(1 - sigma)`
//! with `l_r = (1/r) sum_m q_m l_{r-m}` and
//! `q_m = (-1)^(m+1)/(m+1) [sum_k B_{m+1}(b_k)/beta_k^m - sum_j B_{m+1}(a_j)/alpha_j^m]`.
//!
//! The inner sum alternates with factorially growing terms, so each row is
//! checked for cancellation and recomputed in a wider scalar type when fewer
//! than [`MIN_SURVIVING_DIGITS`] remain.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{FoxError, Result};
use crate::params::{HParams, Pair, PrecisionContext};
use crate::polymath::NorlundKernel;
use crate::scalar::{convert, cx, int, log10_abs, real, ComplexFns, Real};

/// Rows keeping fewer significant digits than this are recomputed wider.
pub const MIN_SURVIVING_DIGITS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffKind {
    /// Moments `q_m`, indexed from 1.
    Q,
    /// `l_r`, with `l_0 = 1`.
    L,
    /// `V_n(sigma)`.
    V,
    /// `h_n = V'_n(theta + eta) n!` of the augmented parameters.
    H,
}

impl CoeffKind {
    pub fn name(&self) -> &'static str {
        match self {
            CoeffKind::Q => "q",
            CoeffKind::L => "l",
            CoeffKind::V => "V",
            CoeffKind::H => "h",
        }
    }
}

/// A coefficient sequence with the precision it was computed under.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    pub kind: CoeffKind,
    /// `values[i]` is the coefficient with index `first_index + i`.
    pub values: Vec<Complex<T>>,
    pub first_index: usize,
    /// `sigma` for `V`, `theta` for `h`, zero otherwise.
    pub parameter: Complex<T>,
    /// Decimal digits of the widest arithmetic used for any entry.
    pub digits_used: u32,
    /// Estimated decimal digits lost to cancellation, per entry.
    pub cancellation_report: Vec<f64>,
}

impl<T: Real> CoefficientTable<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficient with the given index, if present.
    pub fn get(&self, index: usize) -> Option<&Complex<T>> {
        index.checked_sub(self.first_index).and_then(|i| self.values.get(i))
    }

    /// `(index, value)` pairs in ascending order.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, &Complex<T>)> {
        self.values.iter().enumerate().map(move |(i, v)| (i + self.first_index, v))
    }

    pub fn max_digits_lost(&self) -> f64 {
        self.cancellation_report.iter().cloned().fold(0.0, f64::max)
    }
}

fn convert_c<T: Real, U: Real>(z: &Complex<T>) -> Complex<U> {
    Complex::new(convert(&z.re), convert(&z.im))
}

fn convert_params<T: Real, U: Real>(params: &HParams<T>) -> HParams<U> {
    let conv =
        |v: &[Pair<T>]| v.iter().map(|p| Pair { scale: convert(&p.scale), shift: convert_c(&p.shift) }).collect();
    HParams { upper: conv(&params.upper), lower: conv(&params.lower) }
}

/// Digits lost when a value `10^log_sum` carries rounding error of scale
/// `10^log_err`, measured against `max(|sum|, 10^log_floor)` so exact zeros
/// do not count as total loss.
fn digits_lost(log_err: f64, log_sum: f64, log_floor: f64) -> f64 {
    let reference = log_sum.max(log_floor);
    if log_err == f64::NEG_INFINITY {
        0.0
    } else {
        (log_err - reference).max(0.0)
    }
}

fn q_values<T: Real>(params: &HParams<T>, m_max: usize) -> Vec<Complex<T>> {
    let kern = NorlundKernel::<T>::new(m_max + 1);
    // B_{m+1}(x) / (m+1)! for m = 0..m_max
    let rows = |list: &[Pair<T>]| -> Vec<Vec<Complex<T>>> {
        list.iter().map(|p| kern.scaled_row(&kern.kernel_real(&T::one(), m_max + 1), &p.shift)).collect()
    };
    let lower_rows = rows(&params.lower);
    let upper_rows = rows(&params.upper);
    let mut fact = T::one();
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        fact *= int::<T>(m as i64 + 1);
        let mut acc = Complex::<T>::zero();
        for (p, row) in params.lower.iter().zip(&lower_rows) {
            acc += row[m + 1].clone() / p.scale.powi(m as i32);
        }
        for (p, row) in params.upper.iter().zip(&upper_rows) {
            acc -= row[m + 1].clone() / p.scale.powi(m as i32);
        }
        // (-1)^(m+1)/(m+1) * (m+1)! * acc
        let sign = if m % 2 == 1 { T::one() } else { -T::one() };
        out.push(acc * (sign * fact.clone() / int::<T>(m as i64 + 1)));
    }
    out
}

/// `l_0..l_{r_max}` and, per entry, `log10` of the largest magnitude met in
/// its convolution (an absolute error scale in units of the roundoff).
fn l_values<T: Real>(q: &[Complex<T>], r_max: usize) -> (Vec<Complex<T>>, Vec<f64>) {
    let mut l = Vec::with_capacity(r_max + 1);
    let mut mag = vec![0.0];
    l.push(Complex::<T>::one());
    let q_mag: Vec<f64> = q.iter().take(r_max).map(|v| log10_abs(&v.cabs())).collect();
    for r in 1..=r_max {
        let mut acc = Complex::<T>::zero();
        let mut big = f64::NEG_INFINITY;
        for m in 1..=r {
            acc += q[m - 1].clone() * l[r - m].clone();
            big = big.max(q_mag[m - 1] + mag[r - m]);
        }
        let value = acc / cx(int::<T>(r as i64));
        mag.push((big - (r as f64).log10()).max(log10_abs(&value.cabs())));
        l.push(value);
    }
    (l, mag)
}

/// Digits lost per entry given error scales `mag` and computed values.
fn loss_report<T: Real>(values: &[Complex<T>], mag: &[f64]) -> Vec<f64> {
    let floor_scale = -(T::digits() as f64) / 2.0;
    let mut running = f64::NEG_INFINITY;
    values
        .iter()
        .zip(mag)
        .map(|(v, &m)| {
            let log_v = log10_abs(&v.cabs());
            running = running.max(log_v);
            digits_lost(m, log_v, running + floor_scale)
        })
        .collect()
}

/// Moments `q_1..q_{m_max}`.
pub fn q_moments<T: Real>(params: &HParams<T>, m_max: usize, ctx: &PrecisionContext) -> CoefficientTable<T> {
    let values = q_values(params, m_max);
    CoefficientTable {
        kind: CoeffKind::Q,
        cancellation_report: vec![0.0; values.len()],
        values,
        first_index: 1,
        parameter: Complex::zero(),
        digits_used: ctx.effective_digits::<T>(),
    }
}

/// `l_0..l_{r_max}` from a table of moments.
pub fn l_sequence<T: Real>(q_table: &CoefficientTable<T>, r_max: usize) -> CoefficientTable<T> {
    assert!(q_table.kind == CoeffKind::Q && q_table.first_index == 1, "expected a q table");
    assert!(q_table.len() >= r_max, "need {r_max} moments, have {}", q_table.len());
    let (values, mag) = l_values(&q_table.values, r_max);
    let cancellation_report = loss_report(&values, &mag);
    CoefficientTable {
        kind: CoeffKind::L,
        values,
        first_index: 0,
        parameter: Complex::zero(),
        digits_used: q_table.digits_used,
        cancellation_report,
    }
}

/// `(2 pi)^((q-p)/2) prod beta_k^(b_k - 1/2) prod alpha_j^(1/2 - a_j)`.
pub fn prefactor<T: Real>(params: &HParams<T>) -> Complex<T> {
    let half: T = real(0.5);
    let two_pi_log = (int::<T>(2) * T::pi()).ln();
    let mut log = cx(two_pi_log * half.clone() * int::<T>(params.q() as i64 - params.p() as i64));
    for p in &params.lower {
        log += (p.shift.clone() - cx(half.clone())) * p.scale.ln();
    }
    for p in &params.upper {
        log += (cx(half.clone()) - p.shift.clone()) * p.scale.ln();
    }
    log.cexp()
}

/// One row of the inner sum, `sum_k (-1)^k l_{n-k}/(n-k)! * B^(n+1)_k(x)/k!`,
/// together with `log10` of its first-order rounding-error scale.
fn v_row<T: Real>(
    kern: &NorlundKernel<T>,
    l_scaled: &[Complex<T>],
    l_mag: &[f64],
    x: &Complex<T>,
    n: usize,
) -> (Complex<T>, f64) {
    let kernel = kern.kernel_real(&int::<T>(n as i64 + 1), n);
    let (row, row_mag) = kern.scaled_row_bounded(&kernel, x);
    let mut acc = Complex::<T>::zero();
    let mut err_terms = Vec::with_capacity(n + 1);
    for (k, (b, b_mag)) in row.into_iter().zip(row_mag).enumerate() {
        let b_mag = b_mag.max(log10_abs(&b.cabs()));
        let mut term = l_scaled[n - k].clone() * b;
        if k % 2 == 1 {
            term = -term;
        }
        err_terms.push(l_mag[n - k] + b_mag);
        acc += term;
    }
    (acc, log10_sum(&err_terms))
}

/// `log10 sum_i 10^(x_i)`.
fn log10_sum(xs: &[f64]) -> f64 {
    let top = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + xs.iter().map(|x| 10f64.powf(x - top)).sum::<f64>().log10()
}

/// Inner sums for the rows `ns`, computed in `U`.
fn v_rows_in<T: Real, U: Real>(
    params: &HParams<T>,
    sigma: &Complex<T>,
    n_max: usize,
    ns: &[usize],
) -> Vec<(Complex<T>, f64)> {
    let params_u: HParams<U> = convert_params(params);
    let sigma_u: Complex<U> = convert_c(sigma);
    let q = q_values(&params_u, n_max);
    let (l, l_mag) = l_values(&q, n_max);
    let kern = NorlundKernel::<U>::new(n_max);
    let l_scaled: Vec<Complex<U>> = l.into_iter().enumerate().map(|(r, v)| v * kern.inv_factorial(r).clone()).collect();
    let l_mag: Vec<f64> = l_mag.iter().enumerate().map(|(r, m)| m - log10_factorial(r)).collect();
    let x = Complex::<U>::one() - sigma_u;
    ns.par_iter()
        .map(|&n| {
            let (s, e) = v_row(&kern, &l_scaled, &l_mag, &x, n);
            (convert_c(&s), e)
        })
        .collect()
}

fn log10_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).log10()).sum()
}

/// `V_0(sigma)..V_{n_max}(sigma)`; requires `eta = 1`.
pub fn v_coefficients<T: Real>(
    params: &HParams<T>,
    sigma: &Complex<T>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<CoefficientTable<T>> {
    let info = params.derive(ctx)?;
    if info.eta != 1 {
        return Err(FoxError::EtaNotOne { eta: info.eta });
    }
    v_unchecked(params, sigma, n_max)
}

fn v_unchecked<T: Real>(params: &HParams<T>, sigma: &Complex<T>, n_max: usize) -> Result<CoefficientTable<T>> {
    type W1<T> = <T as Real>::Wider;
    type W2<T> = <<T as Real>::Wider as Real>::Wider;

    let all: Vec<usize> = (0..=n_max).collect();
    let mut sums: Vec<Complex<T>> = Vec::with_capacity(n_max + 1);
    let mut log_err: Vec<f64> = Vec::with_capacity(n_max + 1);
    for (s, m) in v_rows_in::<T, T>(params, sigma, n_max, &all) {
        sums.push(s);
        log_err.push(m);
    }
    let mut level_digits = vec![T::digits(); n_max + 1];
    let mut level_bits = vec![T::BITS; n_max + 1];

    let assess = |sums: &[Complex<T>], log_err: &[f64], level_digits: &[u32]| -> (Vec<f64>, Vec<usize>) {
        let mut running = f64::NEG_INFINITY;
        let mut lost = Vec::with_capacity(sums.len());
        let mut failing = Vec::new();
        for (n, s) in sums.iter().enumerate() {
            let d = level_digits[n] as f64;
            let log_sum = log10_abs(&s.cabs());
            running = running.max(log_sum);
            let l = digits_lost(log_err[n], log_sum, running - d / 2.0);
            if d - l < MIN_SURVIVING_DIGITS {
                failing.push(n);
            }
            lost.push(l);
        }
        (lost, failing)
    };

    let (mut lost, mut failing) = assess(&sums, &log_err, &level_digits);
    if !failing.is_empty() {
        for (&n, (s, m)) in failing.iter().zip(v_rows_in::<T, W1<T>>(params, sigma, n_max, &failing)) {
            sums[n] = s;
            log_err[n] = m;
            level_digits[n] = W1::<T>::digits();
            level_bits[n] = W1::<T>::BITS;
        }
        (lost, failing) = assess(&sums, &log_err, &level_digits);
    }
    if !failing.is_empty() && W2::<T>::digits() > W1::<T>::digits() {
        for (&n, (s, m)) in failing.iter().zip(v_rows_in::<T, W2<T>>(params, sigma, n_max, &failing)) {
            sums[n] = s;
            log_err[n] = m;
            level_digits[n] = W2::<T>::digits();
            level_bits[n] = W2::<T>::BITS;
        }
        (lost, failing) = assess(&sums, &log_err, &level_digits);
    }
    if let Some(&index) = failing.first() {
        return Err(FoxError::PrecisionExhausted {
            index,
            bits: level_bits[index],
            surviving: level_digits[index] as f64 - lost[index],
        });
    }

    let pre = prefactor(params);
    let widest = level_digits.iter().cloned().max().unwrap_or(T::digits());
    Ok(CoefficientTable {
        kind: CoeffKind::V,
        values: sums.into_iter().map(|s| s * pre.clone()).collect(),
        first_index: 0,
        parameter: sigma.clone(),
        digits_used: widest,
        cancellation_report: lost,
    })
}

/// `h_n = V'_n(theta + eta) n!`, where `V'` belongs to the augmented parameters.
pub fn h_coefficients<T: Real>(
    params: &HParams<T>,
    theta: &T,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<CoefficientTable<T>> {
    let info = params.derive(ctx)?;
    let aug = params.augment(theta, info.eta);
    let sigma = cx(theta.clone() + int::<T>(info.eta));
    let v = v_unchecked(&aug, &sigma, n_max)?;
    let mut fact = T::one();
    let values = v
        .values
        .into_iter()
        .enumerate()
        .map(|(n, x)| {
            if n > 0 {
                fact *= int::<T>(n as i64);
            }
            x * fact.clone()
        })
        .collect();
    Ok(CoefficientTable { kind: CoeffKind::H, values, parameter: cx(theta.clone()), ..v })
}

/// `n! / Gamma(eta + n)`, zero where `Gamma` has a pole.
pub fn factorial_ratio<T: Real>(eta: i64, n: usize) -> T {
    let m = eta + n as i64 - 1;
    if m < 0 {
        return T::zero();
    }
    // n! / m!
    let (lo, hi, invert) = if m as usize <= n { (m as usize, n, false) } else { (n, m as usize, true) };
    let mut r = T::one();
    for k in lo + 1..=hi {
        r *= int::<T>(k as i64);
    }
    if invert {
        T::one() / r
    } else {
        r
    }
}

/// `c_n = h_n / Gamma(eta + n)` for the general expansion.
pub fn scaled_h<T: Real>(h: &CoefficientTable<T>, eta: i64) -> Vec<Complex<T>> {
    let mut fact = T::one();
    h.values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            if n > 0 {
                fact *= int::<T>(n as i64);
            }
            // h_n / Gamma(eta + n) = (h_n / n!) * n! / Gamma(eta + n)
            (v.clone() / fact.clone()) * factorial_ratio::<T>(eta, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_real, Mp};

    type M = Mp<256>;

    fn m(s: &str) -> M {
        parse_real(s).unwrap()
    }

    fn unit(b: &str) -> HParams<M> {
        HParams::real(&[(M::one(), m(b) + M::one())], &[(M::one(), m(b))]).unwrap()
    }

    fn duplication(b: &str) -> HParams<M> {
        let b = m(b);
        HParams::real(
            &[(M::one(), int::<M>(2) * b.clone() + M::one())],
            &[(m("1/2"), b.clone()), (m("1/2"), b + m("1/2"))],
        )
        .unwrap()
    }

    fn rel(a: &Complex<M>, b: &Complex<M>) -> f64 {
        ((a.clone() - b.clone()).cabs() / b.cabs()).to_f64()
    }

    #[test]
    fn unit_family_moments() {
        let ctx = PrecisionContext::default();
        let q = q_moments(&unit("0.3"), 6, &ctx);
        let b = m("0.3");
        for (i, v) in q.indexed() {
            let expect = cx((-b.clone()).powi(i as i32));
            assert!((v.clone() - expect).cabs() < real::<M>(1e-70), "q_{i}");
        }
        let l = l_sequence(&q, 2);
        assert_eq!(l.values[0], Complex::one());
        assert!((l.values[1].clone() + cx(b.clone())).cabs() < real::<M>(1e-70));
        assert!((l.values[2].clone() - cx(b.clone() * b)).cabs() < real::<M>(1e-70));
    }

    #[test]
    fn identical_lists_give_zero_moments() {
        let p = HParams::real(&[(m("0.5"), m("0.7"))], &[(m("0.5"), m("0.7"))]).unwrap();
        let q = q_moments(&p, 5, &PrecisionContext::default());
        assert!(q.values.iter().all(|v| v.cabs() < real::<M>(1e-70)));
        let l = l_sequence(&q, 5);
        assert!(l.values[1..].iter().all(|v| v.cabs() < real::<M>(1e-70)));
    }

    #[test]
    fn prefactor_values() {
        assert!(rel(&prefactor(&unit("0.3")), &Complex::one()) < 1e-70);
        let b = m("0.3");
        let expect = cx(int::<M>(2).powr(&(M::one() - int::<M>(2) * b)) * M::pi().sqrt());
        assert!(rel(&prefactor(&duplication("0.3")), &expect) < 1e-70);
        let single = HParams::real(&[], &[(M::one(), m("1.7"))]).unwrap();
        let expect = cx((int::<M>(2) * M::pi()).sqrt());
        assert!(rel(&prefactor(&single), &expect) < 1e-70);
    }

    #[test]
    fn unit_family_expansion_is_constant() {
        let ctx = PrecisionContext::default();
        let v = v_coefficients(&unit("0.3"), &cx(m("0.3")), 20, &ctx).unwrap();
        assert!(rel(&v.values[0], &Complex::one()) < 1e-70);
        for x in &v.values[1..] {
            assert!(x.cabs() < real::<M>(1e-50));
        }
    }

    #[test]
    fn duplication_coefficients_vanish() {
        let ctx = PrecisionContext::default();
        let v = v_coefficients(&duplication("0.3"), &cx(m("0.6")), 30, &ctx).unwrap();
        let v0 = prefactor(&duplication("0.3"));
        assert!(rel(&v.values[0], &v0) < 1e-70);
        for x in &v.values[1..] {
            assert!(x.cabs() < real::<M>(1e-40));
        }
    }

    #[test]
    fn first_coefficient_is_prefactor() {
        let p =
            HParams::real(&[(m("1/2"), m("0.7")), (m("1/2"), m("0.9"))], &[(m("1/3"), m("0.4")), (m("2/3"), m("0.2"))])
                .unwrap();
        let v = v_coefficients(&p, &Complex::new(m("0.3"), m("0.2")), 3, &PrecisionContext::default()).unwrap();
        assert!(rel(&v.values[0], &prefactor(&p)) < 1e-70);
    }

    #[test]
    fn eta_must_be_one() {
        let p = HParams::real(&[(M::one(), m("2.3"))], &[(M::one(), m("0.3"))]).unwrap();
        let err = v_coefficients(&p, &Complex::zero(), 4, &PrecisionContext::default()).unwrap_err();
        assert!(matches!(err, FoxError::EtaNotOne { eta: 2 }));
    }

    #[test]
    fn h_of_eta_one_is_scaled_v() {
        let ctx = PrecisionContext::default();
        let p = unit("0.3");
        let theta = m("-0.7");
        let h = h_coefficients(&p, &theta, 6, &ctx).unwrap();
        let aug = p.augment(&theta, 1);
        let v = v_coefficients(&aug, &cx(theta + M::one()), 6, &ctx).unwrap();
        let mut fact = M::one();
        for n in 0..=6 {
            if n > 0 {
                fact *= int::<M>(n);
            }
            let diff = (h.values[n as usize].clone() - v.values[n as usize].clone() * fact.clone()).cabs();
            assert!(diff < real::<M>(1e-60));
        }
        assert_eq!(h.kind, CoeffKind::H);
    }

    #[test]
    fn factorial_ratios() {
        assert_eq!(factorial_ratio::<f64>(1, 5), 1.0);
        assert_eq!(factorial_ratio::<f64>(2, 3), 0.25);
        assert_eq!(factorial_ratio::<f64>(0, 3), 3.0);
        assert_eq!(factorial_ratio::<f64>(-1, 1), 0.0);
        assert_eq!(factorial_ratio::<f64>(-1, 2), 2.0);
    }

    #[test]
    fn double_precision_escalates() {
        let ctx = PrecisionContext::default();
        let wide =
            HParams::real(&[(m("1/2"), m("0.7")), (m("1/2"), m("1.6"))], &[(m("1/3"), m("0.4")), (m("2/3"), m("0.9"))])
                .unwrap();
        let narrow: HParams<f64> = convert_params(&wide);
        let reference = v_coefficients(&wide, &cx(m("-10")), 120, &ctx).unwrap();
        let v = v_coefficients(&narrow, &Complex::new(-10.0, 0.0), 120, &ctx).unwrap();
        assert!(v.digits_used > 15);
        for (x, r) in v.values.iter().zip(&reference.values) {
            let r = r.to_c64();
            assert!((x - r).norm() <= 1e-10 * r.norm());
        }
    }
}
