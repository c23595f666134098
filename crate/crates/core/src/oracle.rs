//! Independent reference values: the residue series of `H^{q,0}_{p,q}` inside
//! `|z| < rho`, two classical closed forms, a comparison engine, and a seeded
//! generator of well-conditioned test families.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::error::{FoxError, Result};
use crate::params::{HParams, Pair, PrecisionContext};
use crate::polymath::GammaFn;
use crate::scalar::{convert, cx, from_rational, int, log10_abs, real, ComplexFns, Real};
use crate::series::{pole_set, GeneralExpansion, SeriesValue};

/// Default truncation of the residue series.
pub const DEFAULT_NU_MAX: usize = 400;

/// Consecutive negligible terms after which the residue series stops early.
const TAIL_RUN: usize = 3;

fn to_f64_params<T: Real>(params: &HParams<T>) -> HParams<f64> {
    let conv = |p: &Pair<T>| Pair::new(p.scale.to_f64(), Complex::new(p.shift.re.to_f64(), p.shift.im.to_f64()));
    HParams { upper: params.upper.iter().map(conv).collect(), lower: params.lower.iter().map(conv).collect() }
}

/// Residue series with the `z`-independent weights computed once.
#[derive(Debug, Clone)]
pub struct ResidueSeries<T> {
    /// `(exponent, weight)` for `nu = 0..=nu_max`, one list per lower gamma.
    branches: Vec<Vec<(Complex<T>, Complex<T>)>>,
    rho: T,
    digits: u32,
}

impl<T: Real> ResidueSeries<T> {
    pub fn new(params: &HParams<T>, nu_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let info = params.derive(ctx)?;
        let poles = pole_set(&to_f64_params(params), &Complex::zero(), nu_max, ctx);
        if let Some(r) = poles.records.iter().find(|r| r.multiplicity > 1) {
            return Err(FoxError::NonSimplePoles {
                re: r.location.re,
                im: r.location.im,
                multiplicity: r.multiplicity,
            });
        }
        let gamma = GammaFn::<T>::new(ctx.normalized().pole_merge_tol);
        let branches = params
            .lower
            .iter()
            .enumerate()
            .map(|(j, pj)| Self::branch(params, j, pj, nu_max, &gamma))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResidueSeries { branches, rho: info.rho, digits: ctx.effective_digits::<T>() })
    }

    /// Residues at `s = -(b_j + nu) / beta_j`.
    fn branch(
        params: &HParams<T>,
        j: usize,
        pj: &Pair<T>,
        nu_max: usize,
        gamma: &GammaFn<T>,
    ) -> Result<Vec<(Complex<T>, Complex<T>)>> {
        let mut out = Vec::with_capacity(nu_max + 1);
        let mut inv_fact = T::one() / pj.scale.clone();
        for nu in 0..=nu_max {
            if nu > 0 {
                inv_fact = -inv_fact / int::<T>(nu as i64);
            }
            let exponent = (pj.shift.clone() + cx(int::<T>(nu as i64))) / pj.scale.clone();
            let mut w = cx(inv_fact.clone());
            for (k, pk) in params.lower.iter().enumerate() {
                if k == j {
                    continue;
                }
                let x = pk.shift.clone() - exponent.clone() * pk.scale.clone();
                w *= gamma.gamma(&x).map_err(|_| FoxError::NonSimplePoles {
                    re: -exponent.re.to_f64(),
                    im: -exponent.im.to_f64(),
                    multiplicity: 2,
                })?;
            }
            for pi in &params.upper {
                w *= gamma.rgamma(&(pi.shift.clone() - exponent.clone() * pi.scale.clone()));
            }
            out.push((exponent, w));
        }
        Ok(out)
    }

    pub fn eval(&self, z: &Complex<T>) -> Result<SeriesValue<T>> {
        let limit = self.rho.clone() * real::<T>(0.98);
        if z.cabs() >= limit {
            return Err(FoxError::TooCloseToBoundary { modulus: z.cabs().to_f64(), rho: self.rho.to_f64() });
        }
        if z.is_zero() {
            return Ok(SeriesValue::from_sum(Complex::zero(), 1, T::zero(), self.digits));
        }
        let log_z = z.cln();
        let depth = self.branches.iter().map(|b| b.len()).max().unwrap_or(0);
        let mut acc = Complex::<T>::zero();
        let mut last = T::zero();
        let mut quiet = 0;
        let mut used = 0;
        for nu in 0..depth {
            let mut row = Complex::<T>::zero();
            for b in &self.branches {
                if let Some((e, w)) = b.get(nu) {
                    if !w.is_zero() {
                        row += w.clone() * (log_z.clone() * e.clone()).cexp();
                    }
                }
            }
            acc += row.clone();
            used = nu + 1;
            last = row.cabs();
            let scale = log10_abs(&acc.cabs());
            if log10_abs(&last) < scale - self.digits as f64 {
                quiet += 1;
                if quiet >= TAIL_RUN {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        Ok(SeriesValue::from_sum(acc, used.max(1), int::<T>(10) * last, self.digits))
    }
}

/// `H(z)` by summing residues, for `|z| < 0.98 rho` and simple poles.
pub fn residue_series<T: Real>(
    params: &HParams<T>,
    z: &Complex<T>,
    nu_max: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesValue<T>> {
    ResidueSeries::new(params, nu_max, ctx)?.eval(z)
}

/// Families with an elementary `H(rho t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm<T> {
    /// `alpha = beta = 1`: `H(t) = t^b (1-t)^(a-b-1) / Gamma(a-b)`, `rho = 1`.
    BetaRatio { a: T, b: T },
    /// `beta = (1/2, 1/2)`, `b = (b, b + 1/2)`, `alpha = 1`, `a = 2b + 1`:
    /// `H(t/2) = 2^(1-2b) sqrt(pi) t^(2b)`.
    Duplication { b: T },
}

impl<T: Real> ClosedForm<T> {
    /// The parameter lists of the family.
    pub fn params(&self) -> Result<HParams<T>> {
        match self {
            ClosedForm::BetaRatio { a, b } => HParams::real(&[(T::one(), a.clone())], &[(T::one(), b.clone())]),
            ClosedForm::Duplication { b } => {
                let half = T::one() / int::<T>(2);
                HParams::real(
                    &[(T::one(), int::<T>(2) * b.clone() + T::one())],
                    &[(half.clone(), b.clone()), (half.clone(), b.clone() + half)],
                )
            }
        }
    }

    /// Recognises the two families up to the order of the lower list.
    pub fn detect(params: &HParams<T>, tol: f64) -> Option<Self> {
        let close = |x: &T, y: &T| (x.clone() - y.clone()).abs().to_f64() <= tol * y.abs().to_f64().max(1.0);
        let is_real = |p: &Pair<T>| p.shift.im.is_zero();
        if !params.upper.iter().chain(&params.lower).all(is_real) || params.upper.len() != 1 {
            return None;
        }
        let up = &params.upper[0];
        match params.lower.as_slice() {
            [lo] if close(&up.scale, &T::one()) && close(&lo.scale, &T::one()) => {
                let gap = up.shift.re.clone() - lo.shift.re.clone();
                let n = gap.round();
                (n >= T::one() && close(&gap, &n))
                    .then(|| ClosedForm::BetaRatio { a: up.shift.re.clone(), b: lo.shift.re.clone() })
            }
            [l0, l1] => {
                let half = T::one() / int::<T>(2);
                if !(close(&up.scale, &T::one()) && close(&l0.scale, &half) && close(&l1.scale, &half)) {
                    return None;
                }
                let (x, y) = (l0.shift.re.clone(), l1.shift.re.clone());
                let b = if x < y { x } else { y.clone() };
                let other = if l0.shift.re == b { l1.shift.re.clone() } else { l0.shift.re.clone() };
                (close(&other, &(b.clone() + half)) && close(&up.shift.re, &(int::<T>(2) * b.clone() + T::one())))
                    .then(|| ClosedForm::Duplication { b })
            }
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ClosedForm::BetaRatio { a, b } => {
                let gap = a.clone() - b.clone();
                let integral = (gap.clone() - gap.round()).abs().to_f64() <= 1e-10;
                if !(gap.is_finite() && integral && gap.round() >= T::one() && b.is_finite()) {
                    return Err(FoxError::InvalidFamilyParams(format!(
                        "a - b = {} is not a positive integer",
                        gap.to_f64()
                    )));
                }
            }
            ClosedForm::Duplication { b } => {
                if !b.is_finite() {
                    return Err(FoxError::InvalidFamilyParams(format!("b = {} is not finite", b.to_f64())));
                }
            }
        }
        Ok(())
    }

    /// `rho` of the family.
    pub fn rho(&self) -> T {
        match self {
            ClosedForm::BetaRatio { .. } => T::one(),
            ClosedForm::Duplication { .. } => T::one() / int::<T>(2),
        }
    }

    /// `H(rho t)`.
    pub fn eval(&self, t: &Complex<T>) -> Result<Complex<T>> {
        self.validate()?;
        match self {
            ClosedForm::BetaRatio { a, b } => {
                let gap = a.clone() - b.clone();
                let m = gap.round().to_f64() as u32 - 1;
                let mut fact = T::one();
                for k in 1..=m as i64 {
                    fact *= int::<T>(k);
                }
                let one_minus = Complex::<T>::one() - t.clone();
                Ok(t.cpowr(b) * one_minus.powu(m) / fact)
            }
            ClosedForm::Duplication { b } => {
                let two_b = int::<T>(2) * b.clone();
                let c = int::<T>(2).powr(&(T::one() - two_b.clone())) * T::pi().sqrt();
                Ok(t.cpowr(&two_b) * c)
            }
        }
    }
}

pub fn closed_form<T: Real>(family: &ClosedForm<T>, t: &Complex<T>) -> Result<Complex<T>> {
    family.eval(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<T> {
    pub grid: Vec<Complex<T>>,
    pub expansion_values: Vec<Complex<T>>,
    pub oracle_values: Vec<Complex<T>>,
    pub abs_err: Vec<T>,
    pub rel_err: Vec<T>,
    pub max_rel_err: T,
    pub terms_used: Vec<usize>,
    /// Whether the oracle side came from a closed form.
    pub closed_form: bool,
}

/// One grid point of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PointComparison<T> {
    pub expansion: SeriesValue<T>,
    pub oracle: Complex<T>,
}

impl<T: Real> PointComparison<T> {
    pub fn abs_err(&self) -> T {
        (self.expansion.value.clone() - self.oracle.clone()).cabs()
    }

    /// Relative to the oracle; absolute when the oracle vanishes.
    pub fn rel_err(&self) -> T {
        let scale = self.oracle.cabs();
        if scale.is_zero() {
            self.abs_err()
        } else {
            self.abs_err() / scale
        }
    }
}

/// Per-point comparison; only setup failures are returned as an outer error.
pub fn compare_points<T: Real>(
    params: &HParams<T>,
    theta: &T,
    t_grid: &[Complex<T>],
    n_max: usize,
    nu_max: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<Result<PointComparison<T>>>> {
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    let closed = ClosedForm::detect(params, ctx.normalized().integer_tol);
    let info = params.derive(ctx)?;
    let expansion = GeneralExpansion::new(params, theta, n_max, ctx)?;
    let residues = match closed {
        Some(_) => None,
        None => Some(ResidueSeries::new(params, nu_max, ctx)?),
    };
    Ok(t_grid
        .par_iter()
        .map(|t| {
            let e = expansion.eval(t)?;
            let o = match (&closed, &residues) {
                (Some(f), _) => f.eval(t)?,
                (None, Some(r)) => r.eval(&(t.clone() * info.rho.clone()))?.value,
                (None, None) => unreachable!(),
            };
            Ok(PointComparison { expansion: e, oracle: o })
        })
        .collect())
}

/// Evaluates the general expansion and the oracle (closed form when the family
/// is recognised, residue series otherwise) on each grid point.
pub fn compare<T: Real>(
    params: &HParams<T>,
    theta: &T,
    t_grid: &[Complex<T>],
    n_max: usize,
    nu_max: usize,
    ctx: &PrecisionContext,
) -> Result<ComparisonReport<T>> {
    let rows = compare_points(params, theta, t_grid, n_max, nu_max, ctx)?.into_iter().collect::<Result<Vec<_>>>()?;
    let mut report = ComparisonReport {
        grid: t_grid.to_vec(),
        expansion_values: Vec::with_capacity(rows.len()),
        oracle_values: Vec::with_capacity(rows.len()),
        abs_err: Vec::with_capacity(rows.len()),
        rel_err: Vec::with_capacity(rows.len()),
        max_rel_err: T::zero(),
        terms_used: Vec::with_capacity(rows.len()),
        closed_form: ClosedForm::detect(params, ctx.normalized().integer_tol).is_some(),
    };
    for row in rows {
        let rel = row.rel_err();
        if rel > report.max_rel_err {
            report.max_rel_err = rel.clone();
        }
        report.abs_err.push(row.abs_err());
        report.rel_err.push(rel);
        report.terms_used.push(row.expansion.terms_used);
        report.expansion_values.push(row.expansion.value);
        report.oracle_values.push(row.oracle);
    }
    Ok(report)
}

/// A parameter family with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFamily {
    pub upper: Vec<(BigRational, BigRational)>,
    pub lower: Vec<(BigRational, BigRational)>,
}

impl RationalFamily {
    pub fn params<T: Real>(&self) -> HParams<T> {
        let conv = |(s, a): &(BigRational, BigRational)| (from_rational::<T>(s), from_rational::<T>(a));
        let upper: Vec<_> = self.upper.iter().map(conv).collect();
        let lower: Vec<_> = self.lower.iter().map(conv).collect();
        HParams::real(&upper, &lower).expect("generated scales are positive")
    }

    /// `min_j b_j / beta_j`.
    pub fn min_ratio(&self) -> BigRational {
        self.lower.iter().map(|(s, b)| b / s).min().expect("lower list is nonempty")
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Scales drawn by [`FamilyGenerator`].
pub fn scale_pool() -> Vec<BigRational> {
    vec![ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3), ratio(1, 1), ratio(3, 2)]
}

/// Seeded generator of delta-neutral families with `eta = 1`, simple poles
/// separated by at least `0.05`, and `gamma1 >= pi/2`.
#[derive(Debug, Clone)]
pub struct FamilyGenerator {
    rng: StdRng,
    pool: Vec<BigRational>,
}

impl FamilyGenerator {
    pub fn new(seed: u64) -> Self {
        FamilyGenerator { rng: StdRng::seed_from_u64(seed), pool: scale_pool() }
    }

    fn draw_scales(&mut self, n: usize) -> Vec<BigRational> {
        (0..n).map(|_| self.pool[self.rng.gen_range(0..self.pool.len())].clone()).collect()
    }

    fn draw_shift(&mut self) -> BigRational {
        ratio(self.rng.gen_range(200..=1500), 1000)
    }

    fn separated(lower: &[(BigRational, BigRational)]) -> bool {
        const DEPTH: i64 = 24;
        let mut poles: Vec<f64> = Vec::new();
        for (s, b) in lower {
            let (s, b) = (s.to_f64().unwrap(), b.to_f64().unwrap());
            poles.extend((0..=DEPTH).map(|nu| -(b + nu as f64) / s));
        }
        poles.sort_by(|x, y| x.partial_cmp(y).unwrap());
        poles.windows(2).all(|w| w[1] - w[0] >= 0.05)
    }

    pub fn next_family(&mut self) -> RationalFamily {
        loop {
            let q = self.rng.gen_range(2..=3);
            let p = self.rng.gen_range(1..=2);
            let betas = self.draw_scales(q);
            let alphas = self.draw_scales(p);
            let sum_b: BigRational = betas.iter().sum();
            let sum_a: BigRational = alphas.iter().sum();
            if sum_a != sum_b {
                continue;
            }
            let lower: Vec<_> = betas.into_iter().map(|s| (s, self.draw_shift())).collect();
            if !Self::separated(&lower) {
                continue;
            }
            let mut upper: Vec<_> = alphas.into_iter().map(|s| (s, self.draw_shift())).collect();
            // eta = sum a - sum b + (q - p)/2 = 1
            let sum_lower: BigRational = lower.iter().map(|(_, b)| b.clone()).sum();
            let others: BigRational = upper[..p - 1].iter().map(|(_, a)| a.clone()).sum();
            let last = BigRational::one() + sum_lower - ratio(q as i64 - p as i64, 2) - others;
            if !last.is_positive() {
                continue;
            }
            upper[p - 1].1 = last;
            return RationalFamily { upper, lower };
        }
    }
}

/// Parameters converted to another scalar type.
pub fn convert_params<T: Real, U: Real>(params: &HParams<T>) -> HParams<U> {
    let conv =
        |p: &Pair<T>| Pair::new(convert::<T, U>(&p.scale), Complex::new(convert(&p.shift.re), convert(&p.shift.im)));
    HParams { upper: params.upper.iter().map(conv).collect(), lower: params.lower.iter().map(conv).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_real, Mp};

    type M = Mp<256>;

    fn m(s: &str) -> M {
        parse_real(s).unwrap()
    }

    fn c(re: &str) -> Complex<M> {
        cx(m(re))
    }

    fn rel(a: &Complex<M>, b: &Complex<M>) -> f64 {
        ((a.clone() - b.clone()).cabs() / b.cabs()).to_f64()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn residue_unit_family() {
        let p = ClosedForm::BetaRatio { a: m("1.3"), b: m("0.3") }.params().unwrap();
        let v = residue_series(&p, &c("0.5"), 400, &ctx()).unwrap();
        assert!(rel(&v.value, &cx(m("0.5").powr(&m("0.3")))) < 1e-60);
        assert!(v.terms_used < 10);
    }

    #[test]
    fn residue_duplication_family() {
        let f = ClosedForm::Duplication { b: m("0.3") };
        let v = residue_series(&f.params().unwrap(), &c("0.3"), 400, &ctx()).unwrap();
        let expected = f.eval(&c("0.6")).unwrap();
        assert!(rel(&v.value, &expected) < 1e-50);
    }

    #[test]
    fn residue_at_origin() {
        let p = ClosedForm::BetaRatio { a: m("2.3"), b: m("0.3") }.params().unwrap();
        let v = residue_series(&p, &Complex::zero(), 40, &ctx()).unwrap();
        assert!(v.value.is_zero());
    }

    #[test]
    fn residue_refusals() {
        let p = HParams::real(&[(m("2"), m("1.1"))], &[(M::one(), m("0.3")), (M::one(), m("0.3"))]).unwrap();
        assert!(matches!(residue_series(&p, &c("0.1"), 40, &ctx()), Err(FoxError::NonSimplePoles { .. })));
        let p = ClosedForm::BetaRatio { a: m("1.3"), b: m("0.3") }.params().unwrap();
        assert!(matches!(residue_series(&p, &c("0.99"), 40, &ctx()), Err(FoxError::TooCloseToBoundary { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let b = m("0.37");
        let v = closed_form(&ClosedForm::BetaRatio { a: b.clone() + M::one(), b: b.clone() }, &c("0.25")).unwrap();
        assert!(rel(&v, &cx(m("0.25").powr(&b.clone()))) < 1e-70);
        let v = closed_form(&ClosedForm::Duplication { b: m("0.5") }, &Complex::one()).unwrap();
        assert!(rel(&v, &cx(M::pi().sqrt())) < 1e-70);
        let v = closed_form(&ClosedForm::BetaRatio { a: b.clone() + int::<M>(2), b: b.clone() }, &c("0.5")).unwrap();
        assert!(rel(&v, &cx(m("0.5").powr(&(b.clone() + M::one())))) < 1e-70);
        let bad = closed_form(&ClosedForm::BetaRatio { a: b.clone() + m("0.5"), b }, &c("0.5"));
        assert!(matches!(bad, Err(FoxError::InvalidFamilyParams(_))));
    }

    #[test]
    fn detects_families() {
        let f = ClosedForm::Duplication { b: m("0.3") };
        let mut p = f.params().unwrap();
        assert_eq!(ClosedForm::detect(&p, 1e-10), Some(f));
        p.lower.swap(0, 1);
        assert!(matches!(ClosedForm::detect(&p, 1e-10), Some(ClosedForm::Duplication { .. })));
        let g = ClosedForm::BetaRatio { a: m("2.3"), b: m("0.3") };
        assert!(matches!(ClosedForm::detect(&g.params().unwrap(), 1e-10), Some(ClosedForm::BetaRatio { .. })));
        let p = HParams::real(&[(M::one(), m("1.8"))], &[(M::one(), m("0.3"))]).unwrap();
        assert_eq!(ClosedForm::detect(&p, 1e-10), None);
    }

    #[test]
    fn compare_duplication() {
        let p = ClosedForm::Duplication { b: m("0.3") }.params().unwrap();
        let grid = [c("0.4"), c("0.6"), c("0.8")];
        let r = compare(&p, &m("-0.4"), &grid, 120, 400, &ctx()).unwrap();
        assert!(r.closed_form);
        assert!(r.max_rel_err.to_f64() <= 1e-20);
        let empty = compare(&p, &m("-0.4"), &[], 120, 400, &ctx()).unwrap();
        assert!(empty.grid.is_empty() && empty.max_rel_err.is_zero());
    }

    #[test]
    fn generated_families_are_well_formed() {
        let mut g = FamilyGenerator::new(7);
        for _ in 0..20 {
            let fam = g.next_family();
            let p: HParams<M> = fam.params();
            let d = p.derive(&ctx()).unwrap();
            assert_eq!(d.eta, 1);
            assert!(d.gamma1.to_f64() >= std::f64::consts::FRAC_PI_2 - 1e-12);
            assert!(fam.lower.iter().all(|(_, b)| *b >= ratio(1, 5) && *b <= ratio(3, 2)));
        }
        assert_eq!(FamilyGenerator::new(3).next_family(), FamilyGenerator::new(3).next_family());
    }
}
