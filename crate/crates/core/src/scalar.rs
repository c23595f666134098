//! Scalar abstraction.
//!
//! Every numerical routine in this crate is generic over [`Real`], a
//! `num-traits` based real-number trait with the handful of transcendental
//! functions the algorithms need. Two families of implementations exist:
//!
//! * `f64`, for quick low-precision work;
//! * [`Mp<BITS>`], an MPFR float with a fixed binary precision baked into the
//!   type, so `zero()`, `one()` and `from_f64()` always carry the working
//!   precision.
//!
//! Each type names a [`Real::Wider`] type with roughly twice the precision;
//! routines that detect catastrophic cancellation recompute there.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, NumAssign, One, Zero};
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};

/// Real scalar used throughout the crate.
pub trait Real:
    Num
    + NumAssign
    + Neg<Output = Self>
    + FromPrimitive
    + PartialOrd
    + Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// The next precision tier, used for precision escalation.
    type Wider: Real;

    /// Binary precision of the significand.
    const BITS: u32;

    /// Decimal digits reliably represented.
    fn digits() -> u32 {
        ((Self::BITS as f64 - 1.0) * std::f64::consts::LOG10_2).floor() as u32
    }

    /// Unit roundoff, `2^(1-BITS)`.
    fn epsilon() -> Self;

    fn pi() -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn floor(&self) -> Self;
    /// Round half away from zero.
    fn round(&self) -> Self;
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn powr(&self, e: &Self) -> Self {
        (e.clone() * self.ln()).exp()
    }
    fn powi(&self, n: i32) -> Self {
        let mut base = self.clone();
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
    fn hypot(&self, other: &Self) -> Self {
        (self.clone() * self.clone() + other.clone() * other.clone()).sqrt()
    }
    fn is_finite(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Exact binary decomposition `mantissa * 2^exponent`; `None` for non-finite values.
    fn to_parts(&self) -> Option<(BigInt, i64)>;
    /// Rounds `mantissa * 2^exponent` to this precision.
    fn from_parts(mantissa: &BigInt, exponent: i64) -> Self;

    /// Parses a decimal literal (`"0.3"`, `"-1.5e-3"`) correctly rounded to this precision.
    fn parse_decimal(s: &str) -> Option<Self>;

    /// Scientific notation with exactly `sig` significant digits, e.g. `"2.50e-1"`.
    fn to_sci(&self, sig: usize) -> String;
}

/// Converts between scalar types through the exact binary representation.
pub fn convert<T: Real, U: Real>(x: &T) -> U {
    match x.to_parts() {
        Some((m, e)) => U::from_parts(&m, e),
        None => U::from_f64(x.to_f64()).unwrap_or_else(U::zero),
    }
}

/// Exact rational value of a finite scalar.
pub fn to_rational<T: Real>(x: &T) -> Option<BigRational> {
    let (m, e) = x.to_parts()?;
    let one = BigInt::from(1);
    Some(if e >= 0 { BigRational::from_integer(m << e as usize) } else { BigRational::new(m, one << (-e) as usize) })
}

/// Rounds an exact rational to the scalar type.
pub fn from_rational<T: Real>(r: &BigRational) -> T {
    let n = T::from_parts(r.numer(), 0);
    let d = T::from_parts(r.denom(), 0);
    n / d
}

/// Parses a real literal: a decimal number or a ratio `p/q` of decimals.
pub fn parse_real<T: Real>(s: &str) -> Option<T> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = T::parse_decimal(p.trim())?;
            let q = T::parse_decimal(q.trim())?;
            if q.is_zero() {
                None
            } else {
                Some(p / q)
            }
        }
        None => T::parse_decimal(s),
    }
}

pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64")
}

pub fn int<T: Real>(n: i64) -> T {
    T::from_i64(n).expect("integer fits")
}

/// Complex arithmetic the `num-complex` crate only provides for `Float` types.
pub trait ComplexFns<T: Real>: Sized {
    fn cabs(&self) -> T;
    fn carg(&self) -> T;
    fn cexp(&self) -> Self;
    /// Principal logarithm.
    fn cln(&self) -> Self;
    /// Principal power `exp(w log z)`; `0^w = 0` for `Re w > 0`.
    fn cpow(&self, w: &Self) -> Self;
    fn cpowr(&self, x: &T) -> Self;
    fn csqrt(&self) -> Self;
    /// `sin(pi z)`, with the argument reduced modulo 2 before scaling by pi.
    fn csin_pi(&self) -> Self;
    fn is_finite_c(&self) -> bool;
    fn to_c64(&self) -> Complex<f64>;
}

impl<T: Real> ComplexFns<T> for Complex<T> {
    fn cabs(&self) -> T {
        self.re.abs().hypot(&self.im.abs())
    }

    fn carg(&self) -> T {
        self.im.atan2(&self.re)
    }

    fn cexp(&self) -> Self {
        let m = self.re.exp();
        Complex::new(m.clone() * self.im.cos(), m * self.im.sin())
    }

    fn cln(&self) -> Self {
        Complex::new(self.cabs().ln(), self.carg())
    }

    fn cpow(&self, w: &Self) -> Self {
        if self.is_zero() {
            return Complex::zero();
        }
        (w.clone() * self.cln()).cexp()
    }

    fn cpowr(&self, x: &T) -> Self {
        if self.is_zero() {
            return Complex::zero();
        }
        if self.im.is_zero() && self.re > T::zero() {
            return Complex::new(self.re.powr(x), T::zero());
        }
        (self.cln() * x.clone()).cexp()
    }

    fn csqrt(&self) -> Self {
        self.cpowr(&real(0.5))
    }

    fn csin_pi(&self) -> Self {
        // sin(pi(x + iy)) = sin(pi x) cosh(pi y) + i cos(pi x) sinh(pi y)
        let two: T = int(2);
        let x = self.re.clone() - (self.re.clone() / two.clone()).round() * two;
        let px = x * T::pi();
        let py = self.im.clone() * T::pi();
        let ep = py.exp();
        let em = T::one() / ep.clone();
        let half: T = real(0.5);
        let ch = (ep.clone() + em.clone()) * half.clone();
        let sh = (ep - em) * half;
        Complex::new(px.sin() * ch, px.cos() * sh)
    }

    fn is_finite_c(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// `log10 |x|`, `-inf` for zero; safe outside the `f64` exponent range.
pub fn log10_abs<T: Real>(x: &T) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let f = x.to_f64().abs();
    if f > 1e-300 && f < 1e300 {
        f.log10()
    } else {
        x.abs().ln().to_f64() / std::f64::consts::LN_10
    }
}

/// Lifts a real into the complex plane.
pub fn cx<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

// ---------------------------------------------------------------------------
// f64

impl Real for f64 {
    type Wider = Mp<128>;
    const BITS: u32 = 53;

    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn round(&self) -> Self {
        f64::round(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powr(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn hypot(&self, other: &Self) -> Self {
        f64::hypot(*self, *other)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_parts(&self) -> Option<(BigInt, i64)> {
        if !self.is_finite() {
            return None;
        }
        if *self == 0.0 {
            return Some((BigInt::zero(), 0));
        }
        let bits = self.to_bits();
        let sign = if bits >> 63 == 0 { 1 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | 0x0010_0000_0000_0000, exp - 1075) };
        let tz = mant.trailing_zeros();
        Some((BigInt::from(mant >> tz) * sign, e + tz as i64))
    }

    fn from_parts(mantissa: &BigInt, exponent: i64) -> Self {
        // Route through MPFR for correct rounding of wide mantissas.
        let m = Integer::from_str_radix(&mantissa.to_str_radix(16), 16).expect("hex digits");
        let mut f = Float::with_val(53, m);
        f <<= exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        f.to_f64()
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
    }

    fn to_sci(&self, sig: usize) -> String {
        format!("{:.*e}", sig.max(1) - 1, self)
    }
}

// ---------------------------------------------------------------------------
// MPFR tiers

/// MPFR float with `BITS` bits of significand.
#[derive(Clone, PartialEq)]
pub struct Mp<const BITS: u32>(Float);

impl<const BITS: u32> Mp<BITS> {
    pub fn from_float(f: Float) -> Self {
        if f.prec() == BITS {
            Mp(f)
        } else {
            Mp(Float::with_val(BITS, f))
        }
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident, $tra:ident, $ma:ident, $op:tt) => {
        impl<const B: u32> $tr for Mp<B> {
            type Output = Self;
            #[inline]
            fn $m(mut self, rhs: Self) -> Self {
                self.0 $op &rhs.0;
                self
            }
        }
        impl<const B: u32> $tra for Mp<B> {
            #[inline]
            fn $ma(&mut self, rhs: Self) {
                self.0 $op &rhs.0;
            }
        }
    };
}

mp_binop!(Add, add, AddAssign, add_assign, +=);
mp_binop!(Sub, sub, SubAssign, sub_assign, -=);
mp_binop!(Mul, mul, MulAssign, mul_assign, *=);
mp_binop!(Div, div, DivAssign, div_assign, /=);
mp_binop!(Rem, rem, RemAssign, rem_assign, %=);

impl<const B: u32> Neg for Mp<B> {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.0 = -self.0;
        self
    }
}

impl<const B: u32> Zero for Mp<B> {
    fn zero() -> Self {
        Mp(Float::with_val(B, 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const B: u32> One for Mp<B> {
    fn one() -> Self {
        Mp(Float::with_val(B, 1))
    }
}

impl<const B: u32> Num for Mp<B> {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Mp(Float::with_val(B, parsed)))
    }
}

impl<const B: u32> FromPrimitive for Mp<B> {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Mp(Float::with_val(B, n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Mp(Float::with_val(B, n)))
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then(|| Mp(Float::with_val(B, x)))
    }
}

impl<const B: u32> PartialOrd for Mp<B> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl<const B: u32> fmt::Debug for Mp<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp<{}>({})", B, float_sci(&self.0, mp_digits(B)))
    }
}

impl<const B: u32> fmt::Display for Mp<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&float_sci(&self.0, f.precision().unwrap_or(mp_digits(B))))
    }
}

fn mp_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn float_sci(x: &Float, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_zero() {
        let sign = if x.is_sign_negative() { "-" } else { "" };
        return if sig == 1 { format!("{sign}0e0") } else { format!("{sign}0.{}e0", "0".repeat(sig - 1)) };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // 0.d1d2... x 10^e  ->  d1.d2... e(e-1)
    let (neg, digits, exp) = x.to_sign_string_exp_round(10, Some(sig), Round::Nearest);
    let exp = exp.unwrap_or(0) - 1;
    let sign = if neg { "-" } else { "" };
    let (lead, rest) = digits.split_at(1);
    if rest.is_empty() {
        format!("{sign}{lead}e{exp}")
    } else {
        format!("{sign}{lead}.{rest}e{exp}")
    }
}

macro_rules! mp_tier {
    ($bits:literal => $wider:literal) => {
        impl Real for Mp<$bits> {
            type Wider = Mp<$wider>;
            const BITS: u32 = $bits;

            fn epsilon() -> Self {
                Mp(Float::with_val($bits, Float::i_exp(1, 1 - $bits)))
            }
            fn pi() -> Self {
                Mp(Float::with_val($bits, rug::float::Constant::Pi))
            }
            fn ln(&self) -> Self {
                Mp(self.0.clone().ln())
            }
            fn exp(&self) -> Self {
                Mp(self.0.clone().exp())
            }
            fn sin(&self) -> Self {
                Mp(self.0.clone().sin())
            }
            fn cos(&self) -> Self {
                Mp(self.0.clone().cos())
            }
            fn sqrt(&self) -> Self {
                Mp(self.0.clone().sqrt())
            }
            fn atan2(&self, x: &Self) -> Self {
                Mp(self.0.clone().atan2(&x.0))
            }
            fn floor(&self) -> Self {
                Mp(self.0.clone().floor())
            }
            fn round(&self) -> Self {
                Mp(self.0.clone().round())
            }
            fn abs(&self) -> Self {
                Mp(self.0.clone().abs())
            }
            fn powr(&self, e: &Self) -> Self {
                Mp(self.0.clone().pow(&e.0))
            }
            fn powi(&self, n: i32) -> Self {
                Mp(self.0.clone().pow(n))
            }
            fn hypot(&self, other: &Self) -> Self {
                Mp(self.0.clone().hypot(&other.0))
            }
            fn is_finite(&self) -> bool {
                self.0.is_finite()
            }
            fn to_f64(&self) -> f64 {
                self.0.to_f64()
            }

            fn to_parts(&self) -> Option<(BigInt, i64)> {
                if !self.0.is_finite() {
                    return None;
                }
                if self.0.is_zero() {
                    return Some((BigInt::zero(), 0));
                }
                let (mut m, mut e) = self.0.to_integer_exp()?;
                let tz = m.find_one(0).unwrap_or(0);
                m >>= tz;
                e += tz as i32;
                let m = BigInt::parse_bytes(m.to_string_radix(16).as_bytes(), 16)?;
                Some((m, e as i64))
            }

            fn from_parts(mantissa: &BigInt, exponent: i64) -> Self {
                let m = Integer::from_str_radix(&mantissa.to_str_radix(16), 16).expect("hex digits");
                let mut f = Float::with_val($bits, m);
                f <<= exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
                Mp(f)
            }

            fn parse_decimal(s: &str) -> Option<Self> {
                let parsed = Float::parse(s.trim()).ok()?;
                let f = Float::with_val($bits, parsed);
                f.is_finite().then_some(Mp(f))
            }

            fn to_sci(&self, sig: usize) -> String {
                float_sci(&self.0, sig)
            }
        }
    };
}

mp_tier!(128 => 256);
mp_tier!(256 => 512);
mp_tier!(512 => 1024);
mp_tier!(1024 => 2048);
mp_tier!(2048 => 4096);
mp_tier!(4096 => 8192);
mp_tier!(8192 => 8192);

/// Decimal digits to the smallest MPFR tier that holds them (with 16 guard bits).
pub fn bits_for_digits(digits: u32) -> u32 {
    let need = (digits as f64 / std::f64::consts::LOG10_2).ceil() as u32 + 16;
    [128u32, 256, 512, 1024, 2048, 4096, 8192].into_iter().find(|&b| b >= need).unwrap_or(8192)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Mp<256>;

    #[test]
    fn constants_carry_precision() {
        let third = M::one() / int::<M>(3);
        let back = third * int::<M>(3);
        assert!((back - M::one()).abs() < M::epsilon() * int::<M>(4));
        assert_eq!(M::digits(), 76);
    }

    #[test]
    fn parts_roundtrip_between_tiers() {
        let x: M = parse_real("1/3").unwrap();
        let wide: Mp<512> = convert(&x);
        let back: M = convert(&wide);
        assert_eq!(back, x);
        let y: f64 = convert(&x);
        assert_eq!(y, 1.0 / 3.0);
        assert_eq!(convert::<f64, M>(&0.1).to_parts(), 0.1f64.to_parts());
    }

    #[test]
    fn rational_conversion_is_exact() {
        let x: M = real(0.375);
        let r = to_rational(&x).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 8.into()));
        let back: M = from_rational(&r);
        assert_eq!(back, x);
    }

    #[test]
    fn sci_format_is_fixed_width() {
        let x: M = parse_real("0.25").unwrap();
        assert_eq!(x.to_sci(3), "2.50e-1");
        assert_eq!(M::zero().to_sci(3), "0.00e0");
        assert_eq!(int::<M>(-1234).to_sci(2), "-1.2e3");
        assert_eq!(0.25f64.to_sci(3), "2.50e-1");
        assert_eq!(parse_real::<M>("97.87").unwrap().to_sci(4), "9.787e1");
        assert_eq!(parse_real::<M>("999.96").unwrap().to_sci(4), "1.000e3");
        assert_eq!(parse_real::<M>("-0.000123").unwrap().to_sci(2), "-1.2e-4");
    }

    #[test]
    fn complex_elementary_functions() {
        let z = Complex::new(real::<M>(0.3), real::<M>(-1.7));
        let w = z.cln().cexp();
        assert!((w - z.clone()).cabs() < real::<M>(1e-70));
        let s = z.csqrt();
        assert!((s.clone() * s - z).cabs() < real::<M>(1e-70));
        let neg = cx(real::<M>(-2.0)).cln();
        assert!((neg.im - M::pi()).abs() < real::<M>(1e-70));
    }

    #[test]
    fn sin_pi_is_accurate_near_integers() {
        let z = Complex::new(parse_real::<M>("-40.000000000000000000001").unwrap(), M::zero());
        let s = z.csin_pi();
        // sin(pi(-40 + d)) = sin(pi d) for even shift
        let d: M = parse_real("-1e-21").unwrap();
        let expect = (d * M::pi()).sin();
        assert!(((s.re - expect.clone()) / expect).abs() < real::<M>(1e-50));
    }

    #[test]
    fn tier_selection() {
        assert_eq!(bits_for_digits(16), 128);
        assert_eq!(bits_for_digits(60), 256);
        assert_eq!(bits_for_digits(120), 512);
    }
}
