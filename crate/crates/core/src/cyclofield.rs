//! Exact arithmetic in `ℚ[u, v] / (m_p(u), m_q(v))`, where `u = 2cos(π/p)`
//! and `v = 2cos(π/q)`.
//!
//! Both minimal polynomials are monic with integer coefficients, so the
//! subring `ℤ[u, v]/(…)` is closed under the ring operations and elements
//! can be held over [`BigInt`] whenever no inverse is needed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::polyalg::{exact_div, Poly};
use crate::scalar::{FieldScalar, Real, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("order {0} is invalid, need at least 2")]
    InvalidOrder(u32),
    #[error("elements come from different field contexts")]
    ContextMismatch,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("numerator {numerator} is out of range (0, {modulus})")]
    OutOfRange { numerator: u32, modulus: u32 },
    #[error("2cos({numerator}π/{modulus}) is not a root of the minimal polynomial")]
    NotAConjugate { numerator: u32, modulus: u32 },
}

/// Which generator: `u` (attached to `p`) or `v` (attached to `q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

/// Cyclotomic polynomial `Φ_n` by dividing `x^n − 1` by `Φ_d` for proper divisors `d`.
pub fn cyclotomic(n: usize) -> Poly<BigInt> {
    let mut memo = BTreeMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: usize, memo: &mut BTreeMap<usize, Poly<BigInt>>) -> Poly<BigInt> {
    assert!(n > 0, "cyclotomic index must be positive");
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut result = Poly::monomial(BigInt::one(), n) - Poly::one();
    for d in (1..n).filter(|d| n % d == 0) {
        let phi_d = cyclotomic_memo(d, memo);
        result = exact_div(&result, &phi_d).expect("Φ_d divides x^n − 1");
    }
    memo.insert(n, result.clone());
    result
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Monic minimal polynomial of `2cos(π/m)`.
///
/// `Φ_{2m}` is palindromic of degree `2d`, so it can be written as
/// `x^d·ψ(x + 1/x)`; `ψ` is the answer.
pub fn min_poly_2cos(m: u32) -> Result<Poly<BigInt>, FieldError> {
    if m < 2 {
        return Err(FieldError::InvalidOrder(m));
    }
    let phi = cyclotomic(2 * m as usize);
    let two_d = phi.degree().finite().expect("cyclotomic is nonzero");
    let d = two_d / 2;
    let x2_plus_1 = Poly::<BigInt>::from_i64s(&[1, 0, 1]);
    let mut rest = phi;
    let mut psi = vec![BigInt::zero(); d + 1];
    // Peel off x^{d−k}(x² + 1)^k = x^d (x + 1/x)^k from the top down.
    for k in (0..=d).rev() {
        let c = rest.coeff(d + k);
        if c.is_zero() {
            continue;
        }
        let mut term = Poly::one();
        for _ in 0..k {
            term = &term * &x2_plus_1;
        }
        rest = &rest - &term.shift(d - k).scale(&c);
        psi[k] = c;
    }
    assert!(rest.is_zero(), "Φ_{} is not palindromic", 2 * m);
    Ok(Poly::new(psi))
}

/// Data shared by every element of one quotient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    p: u32,
    q: u32,
    m_p: Poly<BigInt>,
    m_q: Poly<BigInt>,
    d_p: usize,
    d_q: usize,
}

impl FieldContext {
    pub fn new(p: u32, q: u32) -> Result<Arc<Self>, FieldError> {
        let m_p = min_poly_2cos(p)?;
        let m_q = min_poly_2cos(q)?;
        let d_p = m_p.degree().finite().unwrap();
        let d_q = m_q.degree().finite().unwrap();
        Ok(Arc::new(FieldContext {
            p,
            q,
            m_p,
            m_q,
            d_p,
            d_q,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn min_poly(&self, side: Side) -> &Poly<BigInt> {
        match side {
            Side::P => &self.m_p,
            Side::Q => &self.m_q,
        }
    }

    pub fn degree(&self, side: Side) -> usize {
        match side {
            Side::P => self.d_p,
            Side::Q => self.d_q,
        }
    }

    pub fn modulus(&self, side: Side) -> u32 {
        match side {
            Side::P => self.p,
            Side::Q => self.q,
        }
    }

    /// Dimension of the ring as a vector space over the scalars.
    pub fn dim(&self) -> usize {
        self.d_p * self.d_q
    }

    fn same_as(&self, other: &FieldContext) -> bool {
        self.p == other.p && self.q == other.q
    }

    /// Reduce a `rows × cols` grid of `u^i v^j` coefficients in place and
    /// return the reduced `d_p × d_q` block.
    fn reduce<T: Scalar>(&self, mut grid: Vec<T>, rows: usize, cols: usize) -> Vec<T> {
        let mp: Vec<T> = self.m_p.coeffs().iter().map(T::from_bigint).collect();
        let mq: Vec<T> = self.m_q.coeffs().iter().map(T::from_bigint).collect();
        // v-degree first: u^i v^j with j ≥ d_q.
        for i in 0..rows {
            for j in (self.d_q..cols).rev() {
                let c = std::mem::replace(&mut grid[i * cols + j], T::zero());
                if c.is_zero() {
                    continue;
                }
                for (k, m) in mq.iter().enumerate().take(self.d_q) {
                    if m.is_zero() {
                        continue;
                    }
                    let mut t = c.clone();
                    t *= m;
                    grid[i * cols + j - self.d_q + k] -= &t;
                }
            }
        }
        for i in (self.d_p..rows).rev() {
            for j in 0..self.d_q {
                let c = std::mem::replace(&mut grid[i * cols + j], T::zero());
                if c.is_zero() {
                    continue;
                }
                for (k, m) in mp.iter().enumerate().take(self.d_p) {
                    if m.is_zero() {
                        continue;
                    }
                    let mut t = c.clone();
                    t *= m;
                    grid[(i - self.d_p + k) * cols + j] -= &t;
                }
            }
        }
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.d_p {
            for j in 0..self.d_q {
                out.push(std::mem::replace(&mut grid[i * cols + j], T::zero()));
            }
        }
        out
    }
}

/// Element of `R[u, v] / (m_p(u), m_q(v))` for a scalar ring `R`.
///
/// Coefficients are stored row-major: entry `i·d_q + j` multiplies `u^i v^j`.
#[derive(Clone)]
pub struct NfElement<T> {
    ctx: Arc<FieldContext>,
    coeffs: Vec<T>,
}

impl<T: Scalar> NfElement<T> {
    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        NfElement {
            ctx: ctx.clone(),
            coeffs: vec![T::zero(); ctx.dim()],
        }
    }

    pub fn from_scalar(ctx: &Arc<FieldContext>, c: T) -> Self {
        let mut e = Self::zero(ctx);
        e.coeffs[0] = c;
        e
    }

    pub fn one(ctx: &Arc<FieldContext>) -> Self {
        Self::from_scalar(ctx, T::one())
    }

    /// `u` or `v`. For `p = 2` the generator `u = 0` reduces away.
    pub fn generator(ctx: &Arc<FieldContext>, side: Side) -> Self {
        let (rows, cols) = match side {
            Side::P => (ctx.d_p.max(2), ctx.d_q),
            Side::Q => (ctx.d_p, ctx.d_q.max(2)),
        };
        let mut grid = vec![T::zero(); rows * cols];
        match side {
            Side::P => grid[cols] = T::one(),
            Side::Q => grid[1] = T::one(),
        }
        NfElement {
            ctx: ctx.clone(),
            coeffs: ctx.reduce(grid, rows, cols),
        }
    }

    /// Build from an arbitrary `rows[i][j]` (coefficient of `u^i v^j`), reducing.
    pub fn from_bivariate(ctx: &Arc<FieldContext>, rows: &[Vec<T>]) -> Self {
        let r = rows.len().max(ctx.d_p);
        let c = rows.iter().map(Vec::len).max().unwrap_or(0).max(ctx.d_q);
        let mut grid = vec![T::zero(); r * c];
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                grid[i * c + j] = x.clone();
            }
        }
        NfElement {
            ctx: ctx.clone(),
            coeffs: ctx.reduce(grid, r, c),
        }
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `u^i v^j` in the reduced representation.
    pub fn coeff(&self, i: usize, j: usize) -> &T {
        &self.coeffs[i * self.ctx.d_q + j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The scalar value if every non-constant basis coefficient vanishes.
    pub fn as_scalar(&self) -> Option<&T> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<(), FieldError> {
        if self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_ctx(other)?;
        let mut acc = Unreduced::new(&self.ctx);
        acc.add_product(self, other);
        Ok(acc.reduce())
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate at `u = 2cos(conj_a·π/p)`, `v = 2cos(conj_b·π/q)`.
    ///
    /// The point must be a Galois conjugate of the standard embedding, i.e.
    /// a root of both minimal polynomials.
    pub fn numeric_embed<R: Real>(
        &self,
        conj_a: u32,
        conj_b: u32,
        prec: u32,
    ) -> Result<R, FieldError> {
        let u = conjugate_generator::<R>(&self.ctx, Side::P, conj_a, prec)?;
        let v = conjugate_generator::<R>(&self.ctx, Side::Q, conj_b, prec)?;
        let mut total = R::zero(prec);
        let mut u_pow = R::one(prec);
        for i in 0..self.ctx.d_p {
            let mut v_pow = R::one(prec);
            for j in 0..self.ctx.d_q {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    total = total + c.to_real::<R>(prec) * u_pow.clone() * v_pow.clone();
                }
                v_pow = v_pow * v.clone();
            }
            u_pow = u_pow * u.clone();
        }
        Ok(total)
    }
}

fn conjugate_generator<R: Real>(
    ctx: &FieldContext,
    side: Side,
    numerator: u32,
    prec: u32,
) -> Result<R, FieldError> {
    let modulus = ctx.modulus(side);
    let err = FieldError::NotAConjugate { numerator, modulus };
    if numerator == 0 {
        return Err(err);
    }
    let two = R::from_f64(2.0, prec);
    let x = two * R::cos_pi_ratio(numerator as i128, modulus as i128, prec);
    let mut residual = R::zero(prec);
    for c in ctx.min_poly(side).coeffs().iter().rev() {
        residual = residual * x.clone() + R::from_bigint(c, prec);
    }
    if residual.abs().to_f64() < 1e-9 {
        Ok(x)
    } else {
        Err(err)
    }
}

impl<T: FieldScalar> NfElement<T> {
    /// Multiplicative inverse via a linear solve on the multiplication-by-`self` map.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        let n = self.ctx.dim();
        // column k holds the coordinates of self·e_k
        let mut matrix = vec![vec![T::zero(); n + 1]; n];
        for k in 0..n {
            let mut basis = Self::zero(&self.ctx);
            basis.coeffs[k] = T::one();
            let col = self * &basis;
            for (row, c) in col.coeffs.into_iter().enumerate() {
                matrix[row][k] = c;
            }
        }
        matrix[0][n] = T::one();
        let solution = solve_augmented(matrix).ok_or(FieldError::NotInvertible)?;
        Ok(NfElement {
            ctx: self.ctx.clone(),
            coeffs: solution,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_ctx(other)?;
        self.try_mul(&other.inverse()?)
    }
}

/// Gauss–Jordan elimination on an `n × (n+1)` augmented matrix.
fn solve_augmented<T: FieldScalar>(mut m: Vec<Vec<T>>) -> Option<Vec<T>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = {
            let mut one = T::one();
            one /= &m[col][col];
            one
        };
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                let mut t = p.clone();
                t *= &factor;
                *x -= &t;
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

impl<T: Scalar> PartialEq for NfElement<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl<T: Scalar> fmt::Debug for NfElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..self.ctx.d_p {
            for j in 0..self.ctx.d_q {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    terms.push(format!("({c:?})·u^{i}·v^{j}"));
                }
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(
            f,
            "NfElement[p={}, q={}]({})",
            self.ctx.p,
            self.ctx.q,
            terms.join(" + ")
        )
    }
}

// Operator forms panic on mismatched contexts; use the `try_*` methods to
// get an error instead.
impl<T: Scalar> Add for &NfElement<T> {
    type Output = NfElement<T>;

    fn add(self, rhs: &NfElement<T>) -> NfElement<T> {
        self.try_add(rhs).expect("field context mismatch")
    }
}

impl<T: Scalar> Sub for &NfElement<T> {
    type Output = NfElement<T>;

    fn sub(self, rhs: &NfElement<T>) -> NfElement<T> {
        self.try_sub(rhs).expect("field context mismatch")
    }
}

impl<T: Scalar> Mul for &NfElement<T> {
    type Output = NfElement<T>;

    fn mul(self, rhs: &NfElement<T>) -> NfElement<T> {
        self.try_mul(rhs).expect("field context mismatch")
    }
}

impl<T: Scalar> Neg for &NfElement<T> {
    type Output = NfElement<T>;

    fn neg(self) -> NfElement<T> {
        NfElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for NfElement<T> {
    type Output = NfElement<T>;

    fn neg(self) -> NfElement<T> {
        -&self
    }
}

/// Accumulator for sums of products, reduced once at the end.
pub struct Unreduced<T> {
    ctx: Arc<FieldContext>,
    grid: Vec<T>,
    rows: usize,
    cols: usize,
}

impl<T: Scalar> Unreduced<T> {
    pub fn new(ctx: &Arc<FieldContext>) -> Self {
        let rows = 2 * ctx.d_p - 1;
        let cols = 2 * ctx.d_q - 1;
        Unreduced {
            ctx: ctx.clone(),
            grid: vec![T::zero(); rows * cols],
            rows,
            cols,
        }
    }

    /// `self += a·b`
    pub fn add_product(&mut self, a: &NfElement<T>, b: &NfElement<T>) {
        let dq = self.ctx.d_q;
        for (ia, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let (ai, aj) = (ia / dq, ia % dq);
            for (ib, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (bi, bj) = (ib / dq, ib % dq);
                let mut t = ca.clone();
                t *= cb;
                self.grid[(ai + bi) * self.cols + aj + bj] += &t;
            }
        }
    }

    pub fn reduce(self) -> NfElement<T> {
        NfElement {
            coeffs: self.ctx.reduce(self.grid, self.rows, self.cols),
            ctx: self.ctx,
        }
    }
}

/// Product of two polynomials (ascending coefficient lists) over the ring.
/// Each output coefficient is reduced once.
pub fn nf_poly_mul<T: Scalar>(
    ctx: &Arc<FieldContext>,
    a: &[NfElement<T>],
    b: &[NfElement<T>],
) -> Vec<NfElement<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    (0..a.len() + b.len() - 1)
        .map(|k| {
            let mut acc = Unreduced::new(ctx);
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            for i in lo..=hi {
                acc.add_product(&a[i], &b[k - i]);
            }
            acc.reduce()
        })
        .collect()
}

/// `2cos(k·π/m)` for the generator `g = 2cos(π/m)`, via the Lucas recurrence
/// `V_0 = 2`, `V_1 = g`, `V_{k+1} = g·V_k − V_{k−1}`. Integral for any `k`.
pub fn two_cos_element<T: Scalar>(ctx: &Arc<FieldContext>, side: Side, k: u32) -> NfElement<T> {
    let g = NfElement::<T>::generator(ctx, side);
    let mut prev = NfElement::from_scalar(ctx, T::from_i64(2));
    if k == 0 {
        return prev;
    }
    let mut cur = g.clone();
    for _ in 1..k {
        let next = &(&g * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn check_numerator(ctx: &FieldContext, side: Side, numerator: u32) -> Result<(), FieldError> {
    let modulus = ctx.modulus(side);
    if numerator == 0 || numerator >= modulus {
        Err(FieldError::OutOfRange { numerator, modulus })
    } else {
        Ok(())
    }
}

/// Exact `cos(numerator·π/p)` (side `P`) or `cos(numerator·π/q)` (side `Q`).
pub fn cos_element<T: FieldScalar>(
    ctx: &Arc<FieldContext>,
    side: Side,
    numerator: u32,
) -> Result<NfElement<T>, FieldError> {
    check_numerator(ctx, side, numerator)?;
    let mut half = T::one();
    half /= &T::from_i64(2);
    Ok(two_cos_element::<T>(ctx, side, numerator).scale(&half))
}

/// `C = (1 − cos(aπ/p))·(1 − cos(bπ/q))`.
pub fn c_constant<T: FieldScalar>(
    ctx: &Arc<FieldContext>,
    a: u32,
    b: u32,
) -> Result<NfElement<T>, FieldError> {
    let one = NfElement::one(ctx);
    let left = &one - &cos_element(ctx, Side::P, a)?;
    let right = &one - &cos_element(ctx, Side::Q, b)?;
    Ok(&left * &right)
}

/// `4C = (2 − 2cos(aπ/p))·(2 − 2cos(bπ/q))`, an algebraic integer.
pub fn four_c_integral<T: Scalar>(
    ctx: &Arc<FieldContext>,
    a: u32,
    b: u32,
) -> Result<NfElement<T>, FieldError> {
    check_numerator(ctx, Side::P, a)?;
    check_numerator(ctx, Side::Q, b)?;
    let two = NfElement::from_scalar(ctx, T::from_i64(2));
    let left = &two - &two_cos_element(ctx, Side::P, a);
    let right = &two - &two_cos_element(ctx, Side::Q, b);
    Ok(&left * &right)
}

/// `gcd(k, 2m) = 1`, the numerators whose `2cos(kπ/m)` are conjugates of `2cos(π/m)`.
pub fn is_conjugate_numerator(k: u32, m: u32) -> bool {
    k.gcd(&(2 * m)) == 1
}
