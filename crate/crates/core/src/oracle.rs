//! Floating-point reconstruction of `σ` from the Johnson torsion values.
//!
//! This path never touches the Chebyshev/number-field machinery: the roots
//! come straight from the closed-form torsion formula, and the polynomial is
//! `leading · ∏ (t − r_i)` expanded at the requested precision.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::polyalg::Poly;
use crate::scalar::{relative_error, Real};
use crate::torsion::{enumerate_reps, torsion_value, ParityCase, SurgeryDescriptor, TorsionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exact polynomial has {exact} coefficients, approximation has {approx}")]
    LengthMismatch { exact: usize, approx: usize },
}

/// The values `1/τ` over all acyclic classes, ascending.
#[derive(Debug, Clone)]
pub struct RootMultiset<R> {
    pub roots: Vec<R>,
    pub descriptor: SurgeryDescriptor,
    pub precision: u32,
}

pub fn collect_roots<R: Real>(
    d: &SurgeryDescriptor,
    prec: u32,
) -> Result<RootMultiset<R>, TorsionError> {
    let mut roots = Vec::new();
    if d.parity() != ParityCase::NZero {
        for r in enumerate_reps(d)?.iter().filter(|r| r.acyclic) {
            roots.push(torsion_value::<R>(d, r, prec)?.inverse);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("torsion values are finite"));
    Ok(RootMultiset {
        roots,
        descriptor: *d,
        precision: prec,
    })
}

/// Ascending coefficients of `leading · ∏ (t − r)`, multiplying factors in
/// the stored root order.
pub fn reconstruct<R: Real>(ms: &RootMultiset<R>, leading: &BigInt) -> Vec<R> {
    let prec = ms.precision;
    let mut coeffs = vec![R::from_bigint(leading, prec)];
    for r in &ms.roots {
        let mut next = vec![R::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + c.clone();
            next[i] = next[i].clone() - r.clone() * c.clone();
        }
        coeffs = next;
    }
    coeffs
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    /// Per-coefficient error: relative for nonzero exact coefficients,
    /// absolute over the largest coefficient magnitude otherwise.
    pub errors: Vec<f64>,
    pub max_error: f64,
    pub worst_degree: Option<usize>,
    pub rel_tol: f64,
    pub passed: bool,
}

pub fn compare<R: Real>(
    exact: &Poly<BigInt>,
    approx: &[R],
    rel_tol: f64,
) -> Result<CompareReport, OracleError> {
    assert!(rel_tol > 0.0, "tolerance must be positive");
    let coeffs = exact.coeffs();
    if coeffs.len() != approx.len() {
        return Err(OracleError::LengthMismatch {
            exact: coeffs.len(),
            approx: approx.len(),
        });
    }
    let prec = approx.first().map(Real::precision).unwrap_or(53);
    let largest = coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let largest = R::from_bigint(&largest, prec);
    let errors: Vec<f64> = coeffs
        .iter()
        .zip(approx)
        .map(|(c, a)| {
            if c.is_zero() {
                (a.abs() / largest.clone()).to_f64()
            } else {
                relative_error(a, &R::from_bigint(c, prec))
            }
        })
        .collect();
    let (worst_degree, max_error) =
        errors
            .iter()
            .copied()
            .enumerate()
            .fold((None, 0.0f64), |(wi, wm), (i, e)| {
                if e > wm || e.is_nan() {
                    (Some(i), e)
                } else {
                    (wi, wm)
                }
            });
    Ok(CompareReport {
        passed: errors.iter().all(|e| *e <= rel_tol),
        errors,
        max_error,
        worst_degree,
        rel_tol,
    })
}

/// Exact binary fraction `mantissa · 2^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "bracket endpoint must be finite");
        if x == 0.0 {
            return Dyadic {
                mantissa: BigInt::zero(),
                exponent: 0,
            };
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic {
            mantissa: BigInt::from(m) * sign,
            exponent: e,
        }
    }

    fn midpoint(&self, other: &Dyadic) -> Dyadic {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        Dyadic {
            mantissa: a + b,
            exponent: e - 1,
        }
    }

    fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.mantissa >> shift as usize)
            .to_f64()
            .unwrap_or(f64::NAN);
        top * 2f64.powi((self.exponent + shift).clamp(-2000, 2000) as i32)
    }
}

/// Sign of `p(x)` computed exactly.
fn sign_at(p: &Poly<BigInt>, x: &Dyadic) -> i32 {
    let coeffs = p.coeffs();
    let Some(top) = coeffs.len().checked_sub(1) else {
        return 0;
    };
    let value = if x.exponent >= 0 {
        let xi = &x.mantissa << x.exponent as usize;
        coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &xi + c)
    } else {
        // 2^{s·D} p(m / 2^s) = Σ c_j m^j 2^{s(D−j)}
        let s = (-x.exponent) as usize;
        let mut acc = coeffs[top].clone();
        for (j, c) in coeffs.iter().enumerate().rev().skip(1) {
            acc = acc * &x.mantissa + (c << (s * (top - j)));
        }
        acc
    };
    match value.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootCorrespondence {
    pub degree: usize,
    pub expected: usize,
    /// Root located near each expected value (ascending), `NaN` where none was certified.
    pub located: Vec<f64>,
    pub max_rel_error: f64,
    /// Indices of expected values whose bracket showed no sign change, or
    /// which collided with a neighbour.
    pub unresolved: Vec<usize>,
    pub passed: bool,
}

/// Locate the real roots of an integer polynomial near the given values.
///
/// Each expected value `r` gets the bracket `[r(1 − w), r(1 + w)]` with
/// `w = rel_tol / 2`. The sign of the polynomial is evaluated exactly at the
/// endpoints; a sign change certifies a root inside, which is then narrowed
/// by `refine_steps` bisections. When the brackets are disjoint and every
/// one is certified, a polynomial of degree `expected.len()` has exactly
/// these roots and no others.
pub fn root_correspondence(
    poly: &Poly<BigInt>,
    expected: &[f64],
    rel_tol: f64,
    refine_steps: u32,
) -> RootCorrespondence {
    let degree = poly.degree().finite().unwrap_or(0);
    let mut order: Vec<usize> = (0..expected.len()).collect();
    order.sort_by(|&i, &j| expected[i].total_cmp(&expected[j]));
    let w = rel_tol / 2.0;
    let lo: Vec<f64> = order.iter().map(|&i| expected[i] * (1.0 - w)).collect();
    let hi: Vec<f64> = order.iter().map(|&i| expected[i] * (1.0 + w)).collect();

    let mut located = vec![f64::NAN; expected.len()];
    let mut unresolved = Vec::new();
    let mut max_rel_error = 0.0f64;
    for (slot, &idx) in order.iter().enumerate() {
        let collides = (slot > 0 && lo[slot] <= hi[slot - 1])
            || (slot + 1 < order.len() && lo[slot + 1] <= hi[slot]);
        if collides {
            unresolved.push(idx);
            continue;
        }
        let mut a = Dyadic::from_f64(lo[slot]);
        let mut b = Dyadic::from_f64(hi[slot]);
        let sa = sign_at(poly, &a);
        let sb = sign_at(poly, &b);
        let root = if sa == 0 {
            a.to_f64()
        } else if sb == 0 {
            b.to_f64()
        } else if sa != sb {
            for _ in 0..refine_steps {
                let m = a.midpoint(&b);
                match sign_at(poly, &m) {
                    0 => {
                        b = m.clone();
                        a = m;
                        break;
                    }
                    s if s == sa => a = m,
                    _ => b = m,
                }
            }
            a.midpoint(&b).to_f64()
        } else {
            unresolved.push(idx);
            continue;
        };
        located[idx] = root;
        let r = expected[idx];
        max_rel_error = max_rel_error.max((root - r).abs() / r.abs());
    }
    unresolved.sort_unstable();
    RootCorrespondence {
        degree,
        expected: expected.len(),
        passed: degree == expected.len() && unresolved.is_empty() && max_rel_error <= rel_tol,
        located,
        max_rel_error,
        unresolved,
    }
}
