//! Scalar abstractions.
//!
//! Polynomials and number-field elements are generic over a [`Scalar`]
//! coefficient ring. Exact work uses [`BigInt`] (rings whose defining
//! polynomials are monic) and [`BigRational`] (anything needing inverses);
//! `f64` is supported for quick numeric experiments.
//!
//! Approximate real values used by the verification oracle go through the
//! separate [`Real`] trait, implemented for `f64` and for the arbitrary
//! precision [`BigReal`].

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A commutative ring with identity that can absorb integers.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// Approximate this value as a real number with `prec` significand bits.
    fn to_real<R: Real>(&self, prec: u32) -> R;
}

/// A [`Scalar`] with exact (or, for floats, approximate) division.
pub trait FieldScalar: Scalar + for<'a> DivAssign<&'a Self> {}

impl Scalar for BigInt {
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_real<R: Real>(&self, prec: u32) -> R {
        R::from_bigint(self, prec)
    }
}

impl Scalar for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_real<R: Real>(&self, prec: u32) -> R {
        R::from_ratio(self, prec)
    }
}

impl FieldScalar for BigRational {}

impl Scalar for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn to_real<R: Real>(&self, prec: u32) -> R {
        R::from_f64(*self, prec)
    }
}

impl FieldScalar for f64 {}

/// Approximate real arithmetic at a chosen working precision.
///
/// Binary operations on values of different precision produce a result at
/// the larger of the two.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64, prec: u32) -> Self;
    fn from_bigint(v: &BigInt, prec: u32) -> Self;

    fn from_ratio(v: &BigRational, prec: u32) -> Self {
        Self::from_bigint(v.numer(), prec) / Self::from_bigint(v.denom(), prec)
    }

    fn zero(prec: u32) -> Self {
        Self::from_f64(0.0, prec)
    }

    fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    /// `cos(num·π/den)` for `den > 0`.
    fn cos_pi_ratio(num: i128, den: i128, prec: u32) -> Self;

    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn precision(&self) -> u32;
}

/// Reduce `num/den` (an angle in units of π) into `[0, 1]` using the
/// symmetries of cosine. Returns the reduced numerator.
fn reduce_cos_angle(num: i128, den: i128) -> i128 {
    assert!(den > 0, "angle denominator must be positive");
    let r = num.mod_floor(&(2 * den));
    if r > den {
        2 * den - r
    } else {
        r
    }
}

impl Real for f64 {
    fn from_f64(v: f64, _prec: u32) -> Self {
        v
    }

    fn from_bigint(v: &BigInt, _prec: u32) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(v: &BigRational, _prec: u32) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn cos_pi_ratio(num: i128, den: i128, _prec: u32) -> Self {
        let r = reduce_cos_angle(num, den);
        (r as f64 * std::f64::consts::PI / den as f64).cos()
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn precision(&self) -> u32 {
        53
    }
}

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Arbitrary-precision binary floating point value.
#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    prec: u32,
}

impl BigReal {
    fn wrap(value: BigFloat, prec: u32) -> Self {
        BigReal { value, prec }
    }

    pub fn inner(&self) -> &BigFloat {
        &self.value
    }

    fn bits(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn to_decimal_string(&self) -> String {
        CONSTS.with(|cc| {
            self.value
                .format(Radix::Dec, RM, &mut cc.borrow_mut())
                .unwrap_or_else(|_| "NaN".to_string())
        })
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigReal({}, {} bits)",
            self.to_decimal_string(),
            self.prec
        )
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! bigreal_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for BigReal {
            type Output = BigReal;

            fn $method(self, rhs: BigReal) -> BigReal {
                let prec = self.bits(&rhs);
                BigReal::wrap(self.value.$method(&rhs.value, prec as usize, RM), prec)
            }
        }
    };
}

bigreal_binop!(Add, add);
bigreal_binop!(Sub, sub);
bigreal_binop!(Mul, mul);
bigreal_binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;

    fn neg(self) -> BigReal {
        BigReal::wrap(self.value.neg(), self.prec)
    }
}

impl Real for BigReal {
    fn from_f64(v: f64, prec: u32) -> Self {
        BigReal::wrap(BigFloat::from_f64(v, prec as usize), prec)
    }

    fn from_bigint(v: &BigInt, prec: u32) -> Self {
        if let Some(small) = v.to_i64() {
            return BigReal::wrap(BigFloat::from_i64(small, prec as usize), prec);
        }
        let value = CONSTS.with(|cc| {
            BigFloat::parse(
                &v.to_string(),
                Radix::Dec,
                prec as usize,
                RM,
                &mut cc.borrow_mut(),
            )
        });
        BigReal::wrap(value, prec)
    }

    fn cos_pi_ratio(num: i128, den: i128, prec: u32) -> Self {
        let r = reduce_cos_angle(num, den);
        // Guard bits for the argument reduction inside `cos`, which also
        // returns NaN below roughly two words of working precision.
        let work = (prec as usize + 32).max(128).next_multiple_of(64);
        let value = CONSTS.with(|cc| {
            let mut cc = cc.borrow_mut();
            let pi = cc.pi(work, RM);
            let angle = pi.mul(&BigFloat::from_i128(r, work), work, RM).div(
                &BigFloat::from_i128(den, work),
                work,
                RM,
            );
            let mut c = angle.cos(work, RM, &mut cc);
            c.set_precision(prec as usize, RM)
                .expect("precision reduction");
            c
        });
        BigReal::wrap(value, prec)
    }

    fn abs(&self) -> Self {
        BigReal::wrap(self.value.abs(), self.prec)
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.value.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.value.as_raw_parts() {
            None => f64::NAN,
            Some((words, _, sign, exp, _)) => {
                if words.iter().all(|w| *w == 0) {
                    return 0.0;
                }
                // value = 0.m × 2^exp with the most significant word last
                let top = *words.last().unwrap() as f64;
                let next = if words.len() > 1 {
                    words[words.len() - 2] as f64
                } else {
                    0.0
                };
                let frac = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
                let mag = frac * 2f64.powi(exp.clamp(-1100, 1100));
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    fn precision(&self) -> u32 {
        self.prec
    }
}

/// Parse a decimal integer, accepting an optional leading `+`.
pub fn parse_bigint(s: &str) -> Option<BigInt> {
    let t = s.trim();
    match t.strip_prefix('+') {
        Some(rest) if rest.starts_with(['+', '-']) => None,
        Some(rest) => rest.parse().ok(),
        None => t.parse().ok(),
    }
}

/// `true` iff `v` is an integer; returns it.
pub fn as_integer(v: &BigRational) -> Option<BigInt> {
    if v.is_integer() {
        Some(v.numer().clone())
    } else {
        None
    }
}

/// Relative distance `|a − b| / |b|`, falling back to `|a − b|` when `b = 0`.
pub fn relative_error<R: Real>(approx: &R, exact: &R) -> f64 {
    let diff = (approx.clone() - exact.clone()).abs();
    let scale = exact.abs();
    if scale.to_f64() == 0.0 {
        diff.to_f64()
    } else {
        (diff / scale).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_reduction_covers_all_quadrants() {
        for num in -20..20 {
            let direct = (num as f64 * std::f64::consts::PI / 7.0).cos();
            let reduced = <f64 as Real>::cos_pi_ratio(num, 7, 53);
            assert!((direct - reduced).abs() < 1e-14, "num = {num}");
        }
    }

    #[test]
    fn bigreal_matches_f64_to_double_precision() {
        for (num, den) in [(1, 4), (3, 4), (6, 5), (29, 16), (-7, 3)] {
            let hi = BigReal::cos_pi_ratio(num, den, 128);
            let lo = <f64 as Real>::cos_pi_ratio(num, den, 53);
            assert!((hi.to_f64() - lo).abs() < 1e-15);
            assert_eq!(hi.precision(), 128);
        }
    }

    #[test]
    fn bigreal_carries_more_than_double_precision() {
        // (1 + 2^-80) − 1 vanishes in f64 but not at 128 bits.
        let one = BigReal::one(128);
        let tiny = BigReal::from_bigint(&BigInt::one(), 128)
            / BigReal::from_bigint(&(BigInt::one() << 80u32), 128);
        let diff = (one.clone() + tiny) - one;
        let expected = 2f64.powi(-80);
        assert!((diff.to_f64() - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn bigreal_from_large_integer() {
        let v: BigInt = "4611686018427387904123".parse().unwrap();
        let r = BigReal::from_bigint(&v, 128);
        assert!((r.to_f64() - 4.611_686_018_427_388e21).abs() / 4.6e21 < 1e-15);
        assert!(BigReal::from_bigint(&-v, 128).to_f64() < 0.0);
    }

    #[test]
    fn parse_accepts_explicit_plus() {
        assert_eq!(parse_bigint("+17"), Some(BigInt::from(17)));
        assert_eq!(parse_bigint("-3"), Some(BigInt::from(-3)));
        assert_eq!(parse_bigint("+-3"), None);
    }

    #[test]
    fn cosine_at_low_precision() {
        for prec in [32u32, 53, 64, 65, 96] {
            let c = BigReal::cos_pi_ratio(1, 5, prec).to_f64();
            assert!(
                (c - (std::f64::consts::PI / 5.0).cos()).abs() < 1e-9,
                "{prec} bits gave {c}"
            );
        }
    }
}
