use super::*;
use crate::coeffs::{v_coefficients, CoeffKind};
use crate::params::{HParams, PrecisionContext};
use crate::scalar::{cx, int, parse_real, real, Mp};
use num_traits::{One, Zero};

type M = Mp<256>;

fn m(s: &str) -> M {
    parse_real(s).unwrap()
}

fn c(re: &str, im: &str) -> Complex<M> {
    Complex::new(m(re), m(im))
}

fn beta_ratio(b: &str, gap: i64) -> HParams<M> {
    HParams::real(&[(M::one(), m(b) + int::<M>(gap))], &[(M::one(), m(b))]).unwrap()
}

fn duplication(b: &str) -> HParams<M> {
    let b = m(b);
    HParams::real(&[(M::one(), int::<M>(2) * b.clone() + M::one())], &[(m("1/2"), b.clone()), (m("1/2"), b + m("1/2"))])
        .unwrap()
}

fn dup_constant(b: f64) -> f64 {
    2f64.powf(1.0 - 2.0 * b) * std::f64::consts::PI.sqrt()
}

fn rel(a: &Complex<M>, b: &Complex<M>) -> f64 {
    ((a.clone() - b.clone()).cabs() / b.cabs()).to_f64()
}

fn rel_f(a: &Complex<M>, b: f64) -> f64 {
    rel(a, &cx(real::<M>(b)))
}

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

#[test]
fn phi_unit_family_is_one() {
    let v = eval_phi(&beta_ratio("0.3", 1), &c("0.3", "0"), &c("0.5", "0"), 30, &ctx()).unwrap();
    assert!(rel(&v.value, &Complex::<M>::one()) < 1e-60);
    assert!(v.converged);
}

#[test]
fn phi_duplication_constant() {
    let v = eval_phi(&duplication("0.3"), &c("0.6", "0"), &c("0.7", "0"), 40, &ctx()).unwrap();
    assert!(rel_f(&v.value, 2.338_77) < 1e-5);
    assert!(rel_f(&v.value, dup_constant(0.3)) < 1e-14);
}

#[test]
fn phi_at_one_is_leading_coefficient() {
    let p = HParams::real(&[(m("3/2"), m("1.45"))], &[(M::one(), m("0.3")), (m("1/2"), m("0.65"))]).unwrap();
    let sigma = c("0.1", "0");
    let table = v_coefficients(&p, &sigma, 20, &ctx()).unwrap();
    let v = eval_phi(&p, &sigma, &Complex::<M>::one(), 20, &ctx()).unwrap();
    assert_eq!(v.value, table.values[0]);
}

#[test]
fn phi_errors() {
    let p = beta_ratio("0.3", 1);
    let s = c("0.3", "0");
    assert!(matches!(eval_phi(&p, &s, &c("-0.5", "0"), 10, &ctx()), Err(FoxError::BranchCut { .. })));
    assert!(matches!(eval_phi(&p, &s, &c("2.5", "0"), 10, &ctx()), Err(FoxError::OutsideDisk { .. })));
    assert!(matches!(eval_phi(&beta_ratio("0.3", 2), &s, &c("0.5", "0"), 10, &ctx()), Err(FoxError::EtaNotOne { .. })));
}

#[test]
fn general_unit_family() {
    let v = eval_h_general(&beta_ratio("0.3", 1), &m("-0.7"), &c("0.5", "0"), 20, &ctx()).unwrap();
    assert!(rel_f(&v.value, 0.5f64.powf(0.3)) < 1e-14);
}

#[test]
fn general_duplication() {
    let v = eval_h_general(&duplication("0.3"), &m("-0.4"), &c("0.8", "0"), 40, &ctx()).unwrap();
    assert!(rel_f(&v.value, dup_constant(0.3) * 0.8f64.powf(0.6)) < 1e-14);
}

#[test]
fn general_eta_two() {
    let p = beta_ratio("0.3", 2);
    let theta = m("-0.7");
    let v = eval_h_general(&p, &theta, &Complex::<M>::one(), 20, &ctx()).unwrap();
    assert!(v.value.is_zero());
    let v = eval_h_general(&p, &theta, &c("0.5", "0"), 40, &ctx()).unwrap();
    assert!(rel_f(&v.value, 0.5f64.powf(1.3)) < 1e-14);
}

#[test]
fn omega_one_matches_general() {
    let p = HParams::real(&[(m("3/2"), m("1.45"))], &[(M::one(), m("0.3")), (m("1/2"), m("0.65"))]).unwrap();
    let theta = m("0.2");
    for t in [c("0.6", "0"), c("0.9", "0.2")] {
        let g = eval_h_general(&p, &theta, &t, 60, &ctx()).unwrap();
        let o = eval_h_omega(&p, &theta, &M::one(), &t, 60, &ctx()).unwrap();
        assert!(rel(&o.value, &g.value) < 1e-60);
    }
}

#[test]
fn omega_duplication_invariant() {
    let v = eval_h_omega(&duplication("0.3"), &m("-0.4"), &m("2"), &c("0.6", "0"), 150, &ctx()).unwrap();
    assert!(rel_f(&v.value, dup_constant(0.3) * 0.6f64.powf(0.6)) < 1e-14);
}

#[test]
fn omega_domain_checks() {
    let p = duplication("0.3");
    let theta = m("-0.4");
    assert!(matches!(
        eval_h_omega(&p, &theta, &m("4"), &c("0.7", "0.5"), 10, &ctx()),
        Err(FoxError::OutsideDomain { .. })
    ));
    assert!(matches!(
        eval_h_omega(&p, &theta, &m("0"), &c("0.7", "0"), 10, &ctx()),
        Err(FoxError::InvalidOmega { .. })
    ));
}

#[test]
fn w_direct_closed_forms() {
    let z = c("0.7", "0.4");
    let w = eval_w_direct(&duplication("0.3"), &z, &ctx()).unwrap();
    let expected = cx(real::<M>(dup_constant(0.3))) / (z.clone() + c("0.6", "0"));
    assert!(rel(&w, &expected) < 1e-14);

    let w = eval_w_direct(&beta_ratio("0.3", 1), &z, &ctx()).unwrap();
    assert!(rel(&w, &(Complex::<M>::one() / (z.clone() + c("0.3", "0")))) < 1e-70);

    let same =
        HParams::real(&[(m("1/2"), m("0.4")), (M::one(), m("1.2"))], &[(m("1/2"), m("0.4")), (M::one(), m("1.2"))])
            .unwrap();
    let w = eval_w_direct(&same, &z, &ctx()).unwrap();
    assert!(rel(&w, &Complex::<M>::one()) < 1e-70);
}

#[test]
fn w_direct_cancelled_poles() {
    // z = -1.3 puts Gamma(z + 0.3) on a pole, cancelled by Gamma(z + 1.3)
    let w = eval_w_direct(&beta_ratio("0.3", 1), &c("-1.3", "0"), &ctx()).unwrap();
    assert!(rel(&w, &c("-1", "0")) < 1e-60);
    let w = eval_w_direct(&beta_ratio("0.3", 1), &c("-0.3", "0"), &ctx());
    assert!(matches!(w, Err(FoxError::PoleOfW { .. })));
}

#[test]
fn w_factorial_closed_forms() {
    let v = eval_w_factorial(&duplication("0.3"), &m("-0.4"), &c("1", "0"), 30, &ctx()).unwrap();
    assert!(rel_f(&v.value, dup_constant(0.3) / 1.6) < 1e-14);
    assert!(v.warnings.is_empty());

    let v = eval_w_factorial(&beta_ratio("0.3", 1), &m("-0.7"), &c("2", "0"), 30, &ctx()).unwrap();
    assert!(rel(&v.value, &(Complex::<M>::one() / c("2.3", "0"))) < 1e-60);

    let big = eval_w_factorial(&beta_ratio("0.3", 1), &m("-0.7"), &c("1e6", "0"), 30, &ctx()).unwrap();
    assert!((big.value.re.to_f64() * 1e6 - 1.0).abs() < 1e-6);
}

#[test]
fn w_factorial_below_abscissa_warns() {
    let p = HParams::real(&[(m("2"), m("1.5"))], &[(M::one(), m("0.3")), (M::one(), m("0.7"))]).unwrap();
    let s = FactorialSeries::new(&p, &m("-1"), 40, &ctx()).unwrap();
    assert!(s.abscissa_known);
    let lambda = s.abscissa.clone().unwrap().to_f64();
    assert!((lambda + 0.3).abs() < 1e-12);
    let v = s.eval(&c("-0.5", "0")).unwrap();
    assert!(!v.converged);
    assert!(v.warnings.contains(&Warning::BelowAbscissa));
    let v = s.eval(&c("2", "0")).unwrap();
    assert!(v.warnings.is_empty());
}

#[test]
fn w_factorial_matches_direct_far_right() {
    let p = HParams::real(&[(m("3/2"), m("1.45"))], &[(M::one(), m("0.3")), (m("1/2"), m("0.65"))]).unwrap();
    let z = c("6", "1");
    let f = eval_w_factorial(&p, &m("-1"), &z, 120, &ctx()).unwrap();
    let d = eval_w_direct(&p, &z, &ctx()).unwrap();
    assert!(rel(&f.value, &d) < 1e-10);
}

#[test]
fn order_estimate_examples() {
    let unit = v_coefficients(&beta_ratio("0.3", 1), &c("0.3", "0"), 60, &ctx()).unwrap();
    assert_eq!(order_estimate(&unit).unwrap(), f64::NEG_INFINITY);

    let mut harmonic = unit.clone();
    harmonic.kind = CoeffKind::V;
    harmonic.values = (0..200).map(|n| cx(M::one() / int::<M>(n.max(1)))).collect();
    assert!(order_estimate(&harmonic).unwrap().abs() < 1e-6);

    let mut short = unit;
    short.values.truncate(10);
    assert!(matches!(order_estimate(&short), Err(FoxError::InsufficientCoefficients { .. })));
}

#[test]
fn power_law_fit() {
    let pts: Vec<(f64, f64)> = (1..200).map(|n| (n as f64, 3.0 * (n as f64).powf(-1.5))).collect();
    assert!((fit_power_law(&pts).unwrap() + 1.5).abs() < 1e-9);
    assert_eq!(fit_power_law(&pts[..2]), None);
}
