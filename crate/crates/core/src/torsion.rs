//! Representation classes, Johnson torsion values and the torsion polynomial
//! `σ_(p,q,n)(t)` of the Brieskorn sphere `Σ(p, q, |pqn + 1|)`.
//!
//! The polynomial is assembled exactly. For each acyclic pair `(a, b)` the
//! factor is `Y(t) = P(t / 4C)` where `P` is the even part of
//! `X_n(x) = ±(T_{N+1} − T_{N−1}) / (2(x² − 1))` (or `T_N` when `p`, `q` and
//! `n` are all odd) and `C = (1 − cos aπ/p)(1 − cos bπ/q)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cyclofield::{
    c_constant, four_c_integral, nf_poly_mul, FieldContext, FieldError, NfElement,
};
use crate::polyalg::{chebyshev_t_table, chebyshev_u, even_part, exact_div, Poly, PolyError};
use crate::scalar::{as_integer, Real};

type NfRat = NfElement<BigRational>;
type NfInt = NfElement<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("p = {p} and q = {q} must both be at least 2")]
    BadParameters { p: u32, q: u32 },
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: u32, q: u32 },
    #[error("surgery coefficient n = {0} is too large")]
    Overflow(i64),
    #[error("n = 0 gives S^3, which has no irreducible representation classes")]
    ZeroSurgery,
    #[error("representation class ({a},{b},{k}) is not acyclic")]
    NotAcyclic { a: u32, b: u32, k: u64 },
    #[error("({a},{b}) is not an acyclic pair for this knot")]
    NotAcyclicPair { a: u32, b: u32 },
    #[error("torsion denominator vanishes for class ({a},{b},{k})")]
    DegenerateDenominator { a: u32, b: u32, k: u64 },
    #[error("coefficient of t^{degree} is not rational")]
    NonRationalCoefficient { degree: usize },
    #[error("coefficient of t^{degree} is not an integer")]
    NonIntegerCoefficient { degree: usize },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl TorsionError {
    /// Errors that signal a bug in the mathematics or its implementation
    /// rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            TorsionError::DegenerateDenominator { .. }
                | TorsionError::NonRationalCoefficient { .. }
                | TorsionError::NonIntegerCoefficient { .. }
                | TorsionError::InvariantViolation(_)
                | TorsionError::Poly(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityCase {
    PEvenQOdd,
    POddQEven,
    BothOddNEven,
    BothOddNOdd,
    NZero,
}

/// `(p, q, n)` for `1/n` surgery on the `(p, q)` torus knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurgeryDescriptor {
    p: u32,
    q: u32,
    n: i64,
    order: u64,
    parity: ParityCase,
}

impl SurgeryDescriptor {
    pub fn new(p: u32, q: u32, n: i64) -> Result<Self, TorsionError> {
        if p < 2 || q < 2 {
            return Err(TorsionError::BadParameters { p, q });
        }
        if p.gcd(&q) != 1 {
            return Err(TorsionError::NotCoprime { p, q });
        }
        let signed = (p as i128) * (q as i128) * (n as i128) + 1;
        let order = u64::try_from(signed.unsigned_abs()).map_err(|_| TorsionError::Overflow(n))?;
        // keep every later i128 angle computation (p·q·k < 2^64·2^64) in range
        if order > (1u64 << 40) {
            return Err(TorsionError::Overflow(n));
        }
        let parity = if n == 0 {
            ParityCase::NZero
        } else if p % 2 == 0 {
            ParityCase::PEvenQOdd
        } else if q % 2 == 0 {
            ParityCase::POddQEven
        } else if n % 2 == 0 {
            ParityCase::BothOddNEven
        } else {
            ParityCase::BothOddNOdd
        };
        Ok(SurgeryDescriptor {
            p,
            q,
            n,
            order,
            parity,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `N = |pqn + 1|`, the third Brieskorn exponent.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn parity(&self) -> ParityCase {
        self.parity
    }

    /// Same knot, different surgery coefficient.
    pub fn with_n(&self, n: i64) -> Result<Self, TorsionError> {
        SurgeryDescriptor::new(self.p, self.q, n)
    }
}

impl fmt::Display for SurgeryDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.n)
    }
}

pub fn make_descriptor(p: u32, q: u32, n: i64) -> Result<SurgeryDescriptor, TorsionError> {
    SurgeryDescriptor::new(p, q, n)
}

/// Conjugacy class of an irreducible `SL(2, ℂ)` representation, labelled by
/// the traces `2cos(aπ/p)`, `2cos(bπ/q)` and `2cos(kπ/N)` of `x`, `y` and the meridian.
#[derive(Debug, Clone, PartialEq)]
pub struct RepClass {
    pub a: u32,
    pub b: u32,
    pub k: u64,
    pub trace_x: f64,
    pub trace_y: f64,
    pub trace_m: f64,
    pub acyclic: bool,
}

/// All classes, ordered lexicographically by `(a, b, k)`.
pub fn enumerate_reps(d: &SurgeryDescriptor) -> Result<Vec<RepClass>, TorsionError> {
    if d.parity == ParityCase::NZero {
        return Err(TorsionError::ZeroSurgery);
    }
    let big_n = d.order;
    let mut out = Vec::new();
    for a in 1..d.p {
        for b in (1..d.q).filter(|b| (b + a) % 2 == 0) {
            let trace_x = 2.0 * <f64 as Real>::cos_pi_ratio(a as i128, d.p as i128, 53);
            let trace_y = 2.0 * <f64 as Real>::cos_pi_ratio(b as i128, d.q as i128, 53);
            let acyclic = a % 2 == 1 && b % 2 == 1;
            let parity = (d.n.rem_euclid(2) as u64 * a as u64) % 2;
            for k in (1..big_n).filter(|k| k % 2 == parity) {
                out.push(RepClass {
                    a,
                    b,
                    k,
                    trace_x,
                    trace_y,
                    trace_m: 2.0 * <f64 as Real>::cos_pi_ratio(k as i128, big_n as i128, 53),
                    acyclic,
                });
            }
        }
    }
    Ok(out)
}

/// Pairs `(a, b)` with `a`, `b` odd, `0 < a < p`, `0 < b < q`.
pub fn acyclic_pairs(p: u32, q: u32) -> Vec<(u32, u32)> {
    (1..p)
        .step_by(2)
        .flat_map(|a| (1..q).step_by(2).map(move |b| (a, b)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct TorsionValue<R> {
    pub tau: R,
    pub inverse: R,
}

/// Johnson's closed form `τ = 1 / [2(1 − cos aπ/p)(1 − cos bπ/q)(1 + cos pqkπ/N)]`.
pub fn torsion_value<R: Real>(
    d: &SurgeryDescriptor,
    r: &RepClass,
    prec: u32,
) -> Result<TorsionValue<R>, TorsionError> {
    if !r.acyclic {
        return Err(TorsionError::NotAcyclic {
            a: r.a,
            b: r.b,
            k: r.k,
        });
    }
    let one = R::one(prec);
    let fa = one.clone() - R::cos_pi_ratio(r.a as i128, d.p as i128, prec);
    let fb = one.clone() - R::cos_pi_ratio(r.b as i128, d.q as i128, prec);
    let angle = (d.p as i128) * (d.q as i128) * (r.k as i128);
    let fk = one.clone() + R::cos_pi_ratio(angle, d.order as i128, prec);
    if fk.abs().to_f64() < 1e-12 {
        return Err(TorsionError::DegenerateDenominator {
            a: r.a,
            b: r.b,
            k: r.k,
        });
    }
    let inverse = R::from_f64(2.0, prec) * fa * fb * fk;
    Ok(TorsionValue {
        tau: one / inverse.clone(),
        inverse,
    })
}

/// `X_n(x)`: `±(T_{N+1} − T_{N−1})/(2(x² − 1))` (sign of `n`) when `N` is odd,
/// `T_N` when `p`, `q`, `n` are all odd.
pub fn x_polynomial(d: &SurgeryDescriptor) -> Result<Poly<BigInt>, TorsionError> {
    let big_n = d.order as usize;
    match d.parity {
        ParityCase::NZero => Err(TorsionError::ZeroSurgery),
        ParityCase::BothOddNOdd => Ok(chebyshev_t_table(big_n).pop().unwrap()),
        _ => {
            let table = chebyshev_t_table(big_n + 1);
            let diff = &table[big_n + 1] - &table[big_n - 1];
            let half = diff
                .div_scalar_exact(&BigInt::from(2))
                .expect("T_{N+1} − T_{N−1} has even coefficients");
            let quotient = exact_div(&half, &Poly::from_i64s(&[-1, 0, 1]))?;
            if quotient != chebyshev_u(big_n - 1) {
                return Err(TorsionError::InvariantViolation(format!(
                    "(T_{{N+1}} − T_{{N−1}})/(2(x²−1)) differs from U_{{N−1}} for N = {big_n}"
                )));
            }
            Ok(if d.n < 0 { -quotient } else { quotient })
        }
    }
}

fn check_pair(
    d: &SurgeryDescriptor,
    a: u32,
    b: u32,
    ctx: &FieldContext,
) -> Result<(), TorsionError> {
    if ctx.p() != d.p || ctx.q() != d.q {
        return Err(FieldError::ContextMismatch.into());
    }
    if a == 0 || a >= d.p || b == 0 || b >= d.q || a % 2 == 0 || b % 2 == 0 {
        return Err(TorsionError::NotAcyclicPair { a, b });
    }
    Ok(())
}

/// `[P_j · w^j]` for an integer polynomial `P` and ring element `w`.
fn substitute_scaled(p: &Poly<BigInt>, w: &NfRat) -> Vec<NfRat> {
    let ctx = w.context();
    let mut power = NfRat::one(ctx);
    let mut out = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        out.push(power.scale(&BigRational::from_integer(c.clone())));
        power = &power * w;
    }
    out
}

fn inverse_four_c(ctx: &Arc<FieldContext>, a: u32, b: u32) -> Result<NfRat, TorsionError> {
    let c: NfRat = c_constant(ctx, a, b)?;
    Ok(c.scale(&BigRational::from_integer(4.into())).inverse()?)
}

/// Coefficients (ascending in `t`) of `Y_(n,a,b)(t) = P(t / 4C)`.
pub fn y_polynomial(
    d: &SurgeryDescriptor,
    a: u32,
    b: u32,
    ctx: &Arc<FieldContext>,
) -> Result<Vec<NfRat>, TorsionError> {
    check_pair(d, a, b, ctx)?;
    if d.parity == ParityCase::NZero {
        return Ok(vec![NfRat::one(ctx)]);
    }
    let p = even_part(&x_polynomial(d)?)?;
    Ok(substitute_scaled(&p, &inverse_four_c(ctx, a, b)?))
}

/// `D(t) = 2T_m(√t / (2√C))` with `m = pq` if `p` or `q` is even, `m = 2pq` otherwise.
pub fn three_term_d(
    d: &SurgeryDescriptor,
    a: u32,
    b: u32,
    ctx: &Arc<FieldContext>,
) -> Result<Vec<NfRat>, TorsionError> {
    check_pair(d, a, b, ctx)?;
    let m = relation_chebyshev_index(d.p, d.q);
    let t = chebyshev_t_table(m).pop().unwrap().scale(&BigInt::from(2));
    let e = even_part(&t)?;
    Ok(substitute_scaled(&e, &inverse_four_c(ctx, a, b)?))
}

fn relation_chebyshev_index(p: u32, q: u32) -> usize {
    let pq = p as usize * q as usize;
    if p % 2 == 0 || q % 2 == 0 {
        pq
    } else {
        2 * pq
    }
}

/// Step of the three-term relation: 1 if `p` or `q` is even, 2 otherwise.
pub fn relation_step(p: u32, q: u32) -> i64 {
    if p % 2 == 0 || q % 2 == 0 {
        1
    } else {
        2
    }
}

/// The exponent `e` with `σ(0) = (−1)^e`; it equals the degree.
fn degree_numerator(d: &SurgeryDescriptor) -> u128 {
    let (p, q, big_n) = (d.p as u128, d.q as u128, d.order as u128);
    let num = match d.parity {
        ParityCase::NZero => return 0,
        ParityCase::PEvenQOdd => (big_n - 1) * p * (q - 1),
        ParityCase::POddQEven => (big_n - 1) * (p - 1) * q,
        ParityCase::BothOddNEven => (big_n - 1) * (p - 1) * (q - 1),
        ParityCase::BothOddNOdd => big_n * (p - 1) * (q - 1),
    };
    assert!(num % 8 == 0, "exponent {num}/8 is not an integer for {d}");
    num / 8
}

/// Prescribed value `σ(0) ∈ {+1, −1}`.
pub fn normalization_value(d: &SurgeryDescriptor) -> i32 {
    if degree_numerator(d) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn degree_formula(d: &SurgeryDescriptor) -> u64 {
    degree_numerator(d) as u64
}

/// One factor of the product, kept in compact form: `Y(t) = P(t / four_c)`.
#[derive(Debug, Clone)]
pub struct PairFactor {
    pub a: u32,
    pub b: u32,
    pub four_c: NfInt,
}

#[derive(Debug, Clone)]
pub struct TorsionPolynomial {
    sigma: Poly<BigInt>,
    descriptor: SurgeryDescriptor,
    x_even: Poly<BigInt>,
    factors: Vec<PairFactor>,
    sign_corrected: bool,
}

impl TorsionPolynomial {
    pub fn sigma(&self) -> &Poly<BigInt> {
        &self.sigma
    }

    pub fn descriptor(&self) -> &SurgeryDescriptor {
        &self.descriptor
    }

    pub fn factors(&self) -> &[PairFactor] {
        &self.factors
    }

    /// Even part `P` of `X_n`, shared by every factor.
    pub fn x_even(&self) -> &Poly<BigInt> {
        &self.x_even
    }

    /// Whether a global sign flip was needed to meet the prescribed `σ(0)`.
    pub fn sign_corrected(&self) -> bool {
        self.sign_corrected
    }

    pub fn degree(&self) -> usize {
        self.sigma.degree().finite().unwrap_or(0)
    }

    pub fn constant_term(&self) -> BigInt {
        self.sigma.coeff(0)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.sigma.leading().cloned().unwrap_or_else(BigInt::zero)
    }

    /// `σ(4t)`, the normalisation used by the published coefficient tables.
    pub fn scaled_by_four(&self) -> Poly<BigInt> {
        self.sigma.scale_variable(&BigInt::from(4))
    }

    /// Exact coefficients of the `i`-th factor `Y_(n,a,b)`.
    pub fn y_coefficients(&self, i: usize) -> Result<Vec<NfRat>, TorsionError> {
        let f = &self.factors[i];
        let ctx = f.four_c.context().clone();
        let lifted = NfRat::from_bivariate(
            &ctx,
            &(0..ctx.degree(crate::cyclofield::Side::P))
                .map(|r| {
                    (0..ctx.degree(crate::cyclofield::Side::Q))
                        .map(|c| BigRational::from_integer(f.four_c.coeff(r, c).clone()))
                        .collect()
                })
                .collect::<Vec<_>>(),
        );
        Ok(substitute_scaled(&self.x_even, &lifted.inverse()?))
    }
}

/// `c^0, …, c^k`.
fn powers_of(c: &NfInt, k: usize) -> Vec<NfInt> {
    let mut powers = Vec::with_capacity(k + 1);
    powers.push(NfInt::one(c.context()));
    for _ in 0..k {
        let next = powers.last().unwrap() * c;
        powers.push(next);
    }
    powers
}

/// `c^k·P(t/c) = Σ P_j c^{k−j} t^j`; needs `k ≥ deg P`.
fn lift_integral(p: &Poly<BigInt>, k: usize, powers: &[NfInt]) -> Vec<NfInt> {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(j, pj)| powers[k - j].scale(pj))
        .collect()
}

/// Even part of `X_n`, or `1` when `n = 0`.
fn x_even_or_one(d: &SurgeryDescriptor) -> Result<Poly<BigInt>, TorsionError> {
    if d.parity == ParityCase::NZero {
        Ok(Poly::one())
    } else {
        Ok(even_part(&x_polynomial(d)?)?)
    }
}

/// `σ_(p,q,n)(t)`, normalised so that `σ(0)` equals [`normalization_value`].
///
/// Works in the integral ring: with `c = 4C` and `D = deg P`, each
/// `c^D·Y(t) = Σ P_j c^{D−j} t^j` has algebraic-integer coefficients. The
/// product of these equals `M^D·σ` where `M = ∏ c` is a rational integer.
pub fn sigma(d: &SurgeryDescriptor) -> Result<TorsionPolynomial, TorsionError> {
    if d.parity == ParityCase::NZero {
        return Ok(TorsionPolynomial {
            sigma: Poly::one(),
            descriptor: *d,
            x_even: Poly::one(),
            factors: Vec::new(),
            sign_corrected: false,
        });
    }
    let ctx = FieldContext::new(d.p, d.q)?;
    let x_even = even_part(&x_polynomial(d)?)?;
    let top = x_even.degree().finite().expect("X_n is nonzero");

    let mut factors = Vec::new();
    let mut product = vec![NfInt::one(&ctx)];
    let mut norm = NfInt::one(&ctx);
    for (a, b) in acyclic_pairs(d.p, d.q) {
        let c: NfInt = four_c_integral(&ctx, a, b)?;
        let scaled = lift_integral(&x_even, top, &powers_of(&c, top));
        product = nf_poly_mul(&ctx, &product, &scaled);
        norm = &norm * &c;
        factors.push(PairFactor { a, b, four_c: c });
    }

    let norm = norm.as_scalar().cloned().ok_or_else(|| {
        TorsionError::InvariantViolation("product of the 4C values is irrational".into())
    })?;
    let denom = num_traits::pow(norm, top);
    let mut coeffs = Vec::with_capacity(product.len());
    for (degree, c) in product.iter().enumerate() {
        let c = c
            .as_scalar()
            .ok_or(TorsionError::NonRationalCoefficient { degree })?;
        let (quot, rem) = c.div_rem(&denom);
        if !rem.is_zero() {
            return Err(TorsionError::NonIntegerCoefficient { degree });
        }
        coeffs.push(quot);
    }
    finish(d, Poly::new(coeffs), x_even, factors)
}

fn finish(
    d: &SurgeryDescriptor,
    raw: Poly<BigInt>,
    x_even: Poly<BigInt>,
    factors: Vec<PairFactor>,
) -> Result<TorsionPolynomial, TorsionError> {
    let target = BigInt::from(normalization_value(d));
    let constant = raw.coeff(0);
    if constant.abs() != BigInt::one() {
        return Err(TorsionError::InvariantViolation(format!(
            "σ(0) = {constant} for {d}, expected ±1"
        )));
    }
    let sign_corrected = constant != target;
    let sigma = if sign_corrected { -raw } else { raw };
    let expected = degree_formula(d);
    if sigma.degree().finite() != Some(expected as usize) {
        return Err(TorsionError::InvariantViolation(format!(
            "deg σ = {} for {d}, expected {expected}",
            sigma.degree()
        )));
    }
    Ok(TorsionPolynomial {
        sigma,
        descriptor: *d,
        x_even,
        factors,
        sign_corrected,
    })
}

/// The same polynomial assembled literally: multiply the `Y` factors with
/// rational coefficients obtained through ring inversion. Much slower than
/// [`sigma`]; kept as an independent cross-check.
pub fn sigma_by_inverse(d: &SurgeryDescriptor) -> Result<TorsionPolynomial, TorsionError> {
    if d.parity == ParityCase::NZero {
        return sigma(d);
    }
    let ctx = FieldContext::new(d.p, d.q)?;
    let mut product = vec![NfRat::one(&ctx)];
    for (a, b) in acyclic_pairs(d.p, d.q) {
        product = nf_poly_mul(&ctx, &product, &y_polynomial(d, a, b, &ctx)?);
    }
    let mut coeffs = Vec::with_capacity(product.len());
    for (degree, c) in product.iter().enumerate() {
        let c = c
            .as_scalar()
            .ok_or(TorsionError::NonRationalCoefficient { degree })?;
        coeffs.push(as_integer(c).ok_or(TorsionError::NonIntegerCoefficient { degree })?);
    }
    let x_even = even_part(&x_polynomial(d)?)?;
    let factors = acyclic_pairs(d.p, d.q)
        .into_iter()
        .map(|(a, b)| {
            Ok(PairFactor {
                a,
                b,
                four_c: four_c_integral(&ctx, a, b)?,
            })
        })
        .collect::<Result<Vec<_>, TorsionError>>()?;
    finish(d, Poly::new(coeffs), x_even, factors)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub a: u32,
    pub b: u32,
    pub n: i64,
    pub step: i64,
    pub passed: bool,
    /// Lowest power of `t` where the two sides differ.
    pub first_mismatch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeTermReport {
    pub descriptor: SurgeryDescriptor,
    pub checks: Vec<RelationCheck>,
}

impl ThreeTermReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks `Y_(n+s) = D·Y_(n) − Y_(n−s)` exactly for every acyclic pair, with
/// step `s` from [`relation_step`] and `Y_(0) = 1`.
///
/// Every term is a polynomial in `t/c` with `c = 4C`, so the identity is
/// multiplied through by `c^K` (`K` the largest degree involved) and
/// compared in the integral ring. `c` is nonzero, so nothing is lost.
pub fn verify_three_term(d: &SurgeryDescriptor) -> Result<ThreeTermReport, TorsionError> {
    let step = relation_step(d.p, d.q);
    let up = x_even_or_one(&d.with_n(d.n + step)?)?;
    let mid = x_even_or_one(d)?;
    let low = x_even_or_one(&d.with_n(d.n - step)?)?;
    let dpoly = even_part(
        &chebyshev_t_table(relation_chebyshev_index(d.p, d.q))
            .pop()
            .expect("table is nonempty")
            .scale(&BigInt::from(2)),
    )?;
    let deg = |p: &Poly<BigInt>| p.degree().finite().unwrap_or(0);
    let k = deg(&up).max(deg(&dpoly) + deg(&mid)).max(deg(&low));

    let ctx = FieldContext::new(d.p, d.q)?;
    let zero = NfInt::zero(&ctx);
    let mut checks = Vec::new();
    for (a, b) in acyclic_pairs(d.p, d.q) {
        let powers = powers_of(&four_c_integral(&ctx, a, b)?, k);
        let lhs = lift_integral(&up, k, &powers);
        let mut rhs = nf_poly_mul(
            &ctx,
            &lift_integral(&dpoly, deg(&dpoly), &powers),
            &lift_integral(&mid, k - deg(&dpoly), &powers),
        );
        let low = lift_integral(&low, k, &powers);
        if rhs.len() < low.len() {
            rhs.resize(low.len(), zero.clone());
        }
        for (r, l) in rhs.iter_mut().zip(&low) {
            *r = &*r - l;
        }
        let len = lhs.len().max(rhs.len());
        let first_mismatch =
            (0..len).find(|&j| lhs.get(j).unwrap_or(&zero) != rhs.get(j).unwrap_or(&zero));
        checks.push(RelationCheck {
            a,
            b,
            n: d.n,
            step,
            passed: first_mismatch.is_none(),
            first_mismatch,
        });
    }
    Ok(ThreeTermReport {
        descriptor: *d,
        checks,
    })
}
