//! Exact torsion polynomials for Brieskorn homology spheres obtained by
//! `1/n` surgery on a `(p, q)` torus knot.
//!
//! The crate is generic over its scalar types: polynomials and number-field
//! elements work over any [`scalar::Scalar`], the verification oracle over
//! any [`scalar::Real`]. The aliases below fix the concrete types used by
//! the exact pipeline.

pub mod cli;
pub mod cyclofield;
pub mod fixtures;
pub mod oracle;
pub mod polyalg;
pub mod scalar;
pub mod torsion;
pub mod verify;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use scalar::BigReal;

/// Dense polynomial over `ℤ`.
pub type IntPoly = polyalg::Poly<BigInt>;
/// Dense polynomial over `ℚ`.
pub type RatPoly = polyalg::Poly<BigRational>;
/// Element of `ℚ[u, v]/(m_p, m_q)`.
pub type NfRat = cyclofield::NfElement<BigRational>;
/// Element of the integral subring `ℤ[u, v]/(m_p, m_q)`.
pub type NfInt = cyclofield::NfElement<BigInt>;

/// Default significand bits for the floating-point oracle.
pub const DEFAULT_PRECISION: u32 = 128;
