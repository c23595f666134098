use foxh::polymath::{bernoulli_norlund, log_gamma, pochhammer, GammaFn};
use foxh::scalar::{cx, int, real, ComplexFns};
use foxh::{Complex, HParams, Mp256, PrecisionContext, Real};
use num_traits::{One, Zero};
use proptest::prelude::*;

type M = Mp256;

fn c(re: f64, im: f64) -> Complex<M> {
    Complex::new(real(re), real(im))
}

fn close(a: &Complex<M>, b: &Complex<M>, rel: f64) -> bool {
    let scale = a.cabs().to_f64().max(b.cabs().to_f64()).max(1.0);
    (a.clone() - b.clone()).cabs().to_f64() <= rel * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norlund_symmetry(order in 0.0f64..8.0, k in 0usize..=40, x in -3.0f64..3.0) {
        let a = c(order, 0.0);
        let lhs = bernoulli_norlund(&a, k, &(a.clone() - c(x, 0.0)));
        let rhs = bernoulli_norlund(&a, k, &c(x, 0.0));
        let rhs = if k % 2 == 0 { rhs } else { -rhs };
        prop_assert!(close(&lhs, &rhs, 1e-45));
    }

    #[test]
    fn norlund_forward_difference(order in 1.0f64..8.0, k in 1usize..=40, x in -3.0f64..3.0) {
        let a = c(order, 0.0);
        let x = c(x, 0.0);
        let diff = bernoulli_norlund(&a, k, &(x.clone() + Complex::one())) - bernoulli_norlund(&a, k, &x);
        let lower = bernoulli_norlund(&(a - Complex::one()), k - 1, &x) * int::<M>(k as i64);
        prop_assert!(close(&diff, &lower, 1e-45));
    }

    #[test]
    fn pochhammer_recurrence(re in -5.0f64..5.0, im in -3.0f64..3.0, n in 0usize..30) {
        let z = c(re, im);
        let next = pochhammer(&z, n + 1);
        let step = pochhammer(&z, n) * (z.clone() + cx(int::<M>(n as i64)));
        prop_assert!(close(&next, &step, 1e-70));
    }

    #[test]
    fn gamma_recurrence_and_reflection(re in -6.0f64..6.0, im in 0.1f64..4.0) {
        let g = GammaFn::<M>::new(1e-10);
        let z = c(re, im);
        let lhs = g.gamma(&(z.clone() + Complex::one())).unwrap();
        let rhs = g.gamma(&z).unwrap() * z.clone();
        prop_assert!(close(&lhs, &rhs, 1e-70));
        // Gamma(z) Gamma(1 - z) sin(pi z) = pi
        let prod = g.gamma(&z).unwrap() * g.gamma(&(Complex::<M>::one() - z.clone())).unwrap() * z.csin_pi();
        prop_assert!(close(&prod, &cx(M::pi()), 1e-70));
        let inv = g.rgamma(&z) * g.gamma(&z).unwrap();
        prop_assert!(close(&inv, &Complex::one(), 1e-70));
    }

    #[test]
    fn log_gamma_matches_gamma(re in 0.5f64..30.0, im in -10.0f64..10.0) {
        let ctx = PrecisionContext::default();
        let z = c(re, im);
        let lg = log_gamma(&z, &ctx).unwrap().cexp();
        let g = GammaFn::<M>::new(1e-10).gamma(&z).unwrap();
        prop_assert!(close(&lg, &g, 1e-65 * g.cabs().to_f64().max(1.0)));
    }

    #[test]
    fn rescale_and_shift_preserve_balance(
        b1 in 0.1f64..2.0, b2 in 0.1f64..2.0, a in 0.1f64..2.0, omega in 0.25f64..4.0, sigma in -2.0f64..2.0,
    ) {
        let ctx = PrecisionContext::default();
        let p = HParams::real(
            &[(real::<M>(1.5), real(a))],
            &[(M::one(), real(b1)), (real(0.5), real(b2))],
        ).unwrap();
        let mu = |p: &HParams<M>| p.mu().to_f64().abs();
        prop_assert!(mu(&p) < 1e-70);
        let r = p.rescale(&real(omega));
        prop_assert!(mu(&r) < 1e-70);
        // eta does not depend on the scales
        prop_assert!((r.eta_value() - p.eta_value()).cabs().to_f64() < 1e-70);
        // rho^omega
        let rho = p.derive(&ctx).map(|d| d.rho).unwrap_or_else(|_| M::one() / p.beta_const());
        let rho_r = M::one() / r.beta_const();
        prop_assert!((rho_r.ln() - rho.ln() * real::<M>(omega)).abs().to_f64() < 1e-65);
        // shifting by sigma then -sigma is the identity
        let back = p.shift(&c(sigma, 0.0)).shift(&c(-sigma, 0.0));
        for (x, y) in back.upper.iter().chain(&back.lower).zip(p.upper.iter().chain(&p.lower)) {
            prop_assert!((x.shift.clone() - y.shift.clone()).cabs().to_f64() < 1e-70);
        }
        // eta moves by -sigma (sum b beta - sum a alpha) = 0 for a balanced shift
        let shifted_eta = p.shift(&c(sigma, 0.0)).eta_value();
        let expected = p.eta_value() - c(sigma, 0.0) * (cx(real::<M>(1.5)) - cx(real::<M>(1.5)));
        prop_assert!((shifted_eta - expected).cabs().to_f64() < 1e-65);
    }
}

#[test]
fn falling_factorial_identity() {
    // B^(n+1)_n(x) = (x-1)(x-2)...(x-n)
    for n in 0..12usize {
        let x = c(0.37, 0.2);
        let lhs = bernoulli_norlund(&cx(int::<M>(n as i64 + 1)), n, &x);
        let mut rhs = Complex::<M>::one();
        for i in 1..=n {
            rhs *= x.clone() - cx(int::<M>(i as i64));
        }
        assert!(close(&lhs, &rhs, 1e-70), "n = {n}");
    }
    assert!(bernoulli_norlund(&Complex::<M>::zero(), 5, &c(0.5, 0.0)).cabs().to_f64() > 0.0);
}
