//! Dense univariate polynomials, Chebyshev polynomials and exact division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{FieldScalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("division leaves a nonzero remainder")]
    NonZeroRemainder,
    #[error("quotient has non-integer coefficients")]
    NonIntegerQuotient,
    #[error("coefficient of odd degree {degree} is nonzero")]
    OddCoefficientPresent { degree: usize },
}

/// Degree of a polynomial; the zero polynomial has degree minus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense polynomial with ascending coefficients.
///
/// Canonical form: the last stored coefficient is nonzero; the zero
/// polynomial stores no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .map(|a| {
                    let mut a = a.clone();
                    a *= c;
                    a
                })
                .collect(),
        )
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficient-wise conversion into another scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// `p(c·x)`: coefficient `k` is multiplied by `c^k`.
    pub fn scale_variable(&self, c: &T) -> Self {
        let mut factor = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let mut a = a.clone();
            a *= &factor;
            out.push(a);
            factor *= c;
        }
        Poly::new(out)
    }

    /// `p(−x)`
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, T::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Poly::new(coeffs)
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let mut t = a.clone();
                t *= b;
                coeffs[i + j] += &t;
            }
        }
        Poly::new(coeffs)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl<T: Scalar> $trait for Poly<T> {
            type Output = Poly<T>;

            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: FieldScalar> Poly<T> {
    /// Euclidean division: `self = q·den + r` with `deg r < deg den`.
    pub fn div_rem(&self, den: &Poly<T>) -> Result<(Poly<T>, Poly<T>), PolyError> {
        let lead = den.leading().ok_or(PolyError::ZeroDivisor)?.clone();
        let dd = den.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let mut c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            c /= &lead;
            for (j, d) in den.coeffs.iter().enumerate() {
                let mut t = c.clone();
                t *= d;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Divide every coefficient by `d`, or `None` if some division is inexact.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Poly::new(out))
    }

    /// Descending powers with explicit signs, e.g. `4t^2 - 6t + 1`.
    pub fn to_text(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.sign() == num_bigint::Sign::Minus;
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            let mag = c.magnitude();
            if k == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for Poly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("t"))
    }
}

/// Chebyshev polynomial of the first kind, `T_l(cos θ) = cos(lθ)`.
pub fn chebyshev_t(l: usize) -> Poly<BigInt> {
    chebyshev_sequence(Poly::x(), l)
}

/// Chebyshev polynomial of the second kind (`U_0 = 1`, `U_1 = 2x`).
pub fn chebyshev_u(l: usize) -> Poly<BigInt> {
    chebyshev_sequence(Poly::from_i64s(&[0, 2]), l)
}

/// `first`, `second` start the three-term recurrence `P_{k+1} = 2x·P_k − P_{k−1}` at `P_0 = 1`.
fn chebyshev_sequence(first: Poly<BigInt>, l: usize) -> Poly<BigInt> {
    let mut prev = Poly::one();
    if l == 0 {
        return prev;
    }
    let mut cur = first;
    let two_x = Poly::from_i64s(&[0, 2]);
    for _ in 1..l {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// All `T_0, …, T_max`.
pub fn chebyshev_t_table(max: usize) -> Vec<Poly<BigInt>> {
    let two_x = Poly::from_i64s(&[0, 2]);
    let mut table: Vec<Poly<BigInt>> = Vec::with_capacity(max + 1);
    table.push(Poly::one());
    if max >= 1 {
        table.push(Poly::x());
    }
    for k in 2..=max {
        let next = &(&two_x * &table[k - 1]) - &table[k - 2];
        table.push(next);
    }
    table
}

/// Exact division in `ℤ[x]`.
///
/// Runs integer long division; if a leading coefficient fails to divide,
/// falls back to rational division to tell a non-integral quotient apart
/// from a nonzero remainder.
pub fn exact_div(num: &Poly<BigInt>, den: &Poly<BigInt>) -> Result<Poly<BigInt>, PolyError> {
    let lead = den.leading().ok_or(PolyError::ZeroDivisor)?;
    let dd = den.coeffs.len() - 1;
    if num.is_zero() {
        return Ok(Poly::zero());
    }
    if num.coeffs.len() <= dd {
        return Err(PolyError::NonZeroRemainder);
    }
    let mut rem = num.coeffs.clone();
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        if rem[k + dd].is_zero() {
            continue;
        }
        let (c, r) = rem[k + dd].div_rem(lead);
        if !r.is_zero() {
            return Err(classify_rational_division(num, den));
        }
        for (j, d) in den.coeffs.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quot[k] = c;
    }
    if rem[..dd].iter().any(|c| !c.is_zero()) {
        return Err(PolyError::NonZeroRemainder);
    }
    Ok(Poly::new(quot))
}

fn classify_rational_division(num: &Poly<BigInt>, den: &Poly<BigInt>) -> PolyError {
    match num.to_rational().div_rem(&den.to_rational()) {
        Ok((_, r)) if !r.is_zero() => PolyError::NonZeroRemainder,
        Ok(_) => PolyError::NonIntegerQuotient,
        Err(e) => e,
    }
}

/// For `p(x)` with vanishing odd coefficients, returns `P` with `P(x²) = p(x)`.
pub fn even_part<T: Scalar>(p: &Poly<T>) -> Result<Poly<T>, PolyError> {
    if let Some(degree) = p
        .coeffs
        .iter()
        .enumerate()
        .position(|(i, c)| i % 2 == 1 && !c.is_zero())
    {
        return Err(PolyError::OddCoefficientPresent { degree });
    }
    Ok(Poly::new(p.coeffs.iter().step_by(2).cloned().collect()))
}

/// Checks `2·T_m·T_n = T_{m+n} + T_{m−n}` coefficient-wise.
pub fn chebyshev_product_identity_check(m: usize, n: usize) -> bool {
    assert!(m >= n, "identity is stated for m >= n");
    let lhs = (&chebyshev_t(m) * &chebyshev_t(n)).scale(&BigInt::from(2));
    let rhs = &chebyshev_t(m + n) + &chebyshev_t(m - n);
    lhs == rhs
}
