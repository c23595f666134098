//! Exact Bernoulli numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Tangent numbers `T_1..T_n` (`tan x = sum T_k x^(2k-1)/(2k-1)!`), integer-only.
fn tangent_numbers(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return Vec::new();
    }
    let mut t = vec![BigInt::zero(); n + 1];
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    t.remove(0);
    t
}

/// `B_2, B_4, ..., B_{2n}` as exact rationals.
pub fn even_bernoulli(n: usize) -> Vec<BigRational> {
    tangent_numbers(n)
        .into_iter()
        .enumerate()
        .map(|(i, tk)| {
            let k = i + 1;
            let four_k = BigInt::one() << (2 * k);
            let num = tk * BigInt::from(2 * k);
            let den = &four_k * (&four_k - BigInt::one());
            let b = BigRational::new(num, den);
            if k % 2 == 1 {
                b
            } else {
                -b
            }
        })
        .collect()
}

/// `B_0, B_1, ..., B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let evens = even_bernoulli(n / 2);
    (0..=n)
        .map(|k| match k {
            0 => BigRational::one(),
            1 => BigRational::new((-1).into(), 2.into()),
            k if k % 2 == 1 => BigRational::zero(),
            k => evens[k / 2 - 1].clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn first_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], r(1, 1));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[3], r(0, 1));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[6], r(1, 42));
        assert_eq!(b[8], r(-1, 30));
        assert_eq!(b[10], r(5, 66));
        assert_eq!(b[12], r(-691, 2730));
    }

    #[test]
    fn satisfies_defining_recurrence() {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
        let b = bernoulli_numbers(40);
        for m in 1..40usize {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate().take(m + 1) {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            assert!(acc.is_zero(), "m = {m}");
        }
    }
}
