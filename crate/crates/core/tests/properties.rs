use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use torsionpoly::cyclofield::{FieldContext, Side};
use torsionpoly::polyalg::{chebyshev_t, chebyshev_u, exact_div, Poly};
use torsionpoly::scalar::Real;
use torsionpoly::torsion::{
    degree_formula, normalization_value, sigma, sigma_by_inverse, SurgeryDescriptor,
};
use torsionpoly::{BigReal, NfRat};

fn eval_big(p: &Poly<BigInt>, x: f64) -> f64 {
    let x = BigReal::from_f64(x, 256);
    let mut acc = BigReal::zero(256);
    for c in p.coeffs().iter().rev() {
        acc = acc * x.clone() + BigReal::from_bigint(c, 256);
    }
    acc.to_f64()
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = Poly<BigInt>> {
    prop::collection::vec(-1000i64..=1000, 1..=max_deg + 1).prop_map(|c| Poly::from_i64s(&c))
}

const CONTEXTS: [(u32, u32); 4] = [(2, 3), (4, 3), (3, 5), (5, 7)];

fn element(ctx: &Arc<FieldContext>, raw: &[(i64, i64)]) -> NfRat {
    let dq = ctx.degree(Side::Q);
    let rows: Vec<Vec<BigRational>> = (0..ctx.degree(Side::P))
        .map(|i| {
            (0..dq)
                .map(|j| {
                    let (n, d) = raw[(i * dq + j) % raw.len()];
                    BigRational::new(n.into(), d.into())
                })
                .collect()
        })
        .collect();
    NfRat::from_bivariate(ctx, &rows)
}

fn raw_element() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 6)
}

proptest! {
    #[test]
    fn chebyshev_matches_cosine(l in 0usize..=50, theta in 0.0f64..std::f64::consts::PI) {
        let got = eval_big(&chebyshev_t(l), theta.cos());
        prop_assert!((got - (l as f64 * theta).cos()).abs() < 1e-9);
    }

    #[test]
    fn chebyshev_parity(l in 0usize..=60) {
        let t = chebyshev_t(l);
        for (k, c) in t.coeffs().iter().enumerate() {
            if (k + l) % 2 == 1 {
                prop_assert!(c == &BigInt::from(0));
            }
        }
    }

    #[test]
    fn difference_quotient_is_u(n in 1usize..=60) {
        let num = &chebyshev_t(n + 1) - &chebyshev_t(n - 1);
        let q = exact_div(&num, &Poly::from_i64s(&[-2, 0, 2])).unwrap();
        prop_assert_eq!(q, chebyshev_u(n - 1));
    }

    #[test]
    fn exact_div_inverts_multiplication(a in int_poly(12), b in int_poly(12)) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(exact_div(&prod, &b).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(idx in 0usize..4, x in raw_element(), y in raw_element(), z in raw_element()) {
        let (p, q) = CONTEXTS[idx];
        let ctx = FieldContext::new(p, q).unwrap();
        let (a, b, c) = (element(&ctx, &x), element(&ctx, &y), element(&ctx, &z));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a * &NfRat::one(&ctx), a.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn inverse_is_two_sided(idx in 0usize..4, x in raw_element()) {
        let (p, q) = CONTEXTS[idx];
        let ctx = FieldContext::new(p, q).unwrap();
        let a = element(&ctx, &x);
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, NfRat::one(&ctx));
        prop_assert_eq!(&inv * &a, NfRat::one(&ctx));
    }

    /// Every conjugate embedding is a ring homomorphism.
    #[test]
    fn galois_embeddings_respect_products(idx in 0usize..4, x in raw_element(), y in raw_element(), ka in 1u32..40, kb in 1u32..40) {
        let (p, q) = CONTEXTS[idx];
        prop_assume!(ka.gcd(&(2 * p)) == 1 && kb.gcd(&(2 * q)) == 1);
        let ctx = FieldContext::new(p, q).unwrap();
        let (a, b) = (element(&ctx, &x), element(&ctx, &y));
        let ea: f64 = a.numeric_embed(ka, kb, 53).unwrap();
        let eb: f64 = b.numeric_embed(ka, kb, 53).unwrap();
        let eab: f64 = (&a * &b).numeric_embed(ka, kb, 53).unwrap();
        let esum: f64 = (&a + &b).numeric_embed(ka, kb, 53).unwrap();
        let scale = 1.0 + ea.abs() * eb.abs();
        prop_assert!((eab - ea * eb).abs() < 1e-9 * scale * 100.0);
        prop_assert!((esum - ea - eb).abs() < 1e-9 * (1.0 + ea.abs() + eb.abs()));
    }

    #[test]
    fn grid_invariants(p in 2u32..=7, q in 2u32..=7, n in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        prop_assume!(p.gcd(&q) == 1);
        let d = SurgeryDescriptor::new(p, q, n).unwrap();
        let s = sigma(&d).unwrap();
        prop_assert_eq!(s.constant_term(), BigInt::from(normalization_value(&d)));
        prop_assert_eq!(s.degree() as u64, degree_formula(&d));
        let scaled = s.scaled_by_four();
        for (j, c) in s.sigma().coeffs().iter().enumerate() {
            prop_assert_eq!(scaled.coeff(j), c * BigInt::from(4).pow(j as u32));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn integral_and_literal_routes_agree(p in 2u32..=5, q in 2u32..=5, n in -2i64..=2) {
        prop_assume!(p.gcd(&q) == 1);
        let d = SurgeryDescriptor::new(p, q, n).unwrap();
        let (fast, literal) = (sigma(&d).unwrap(), sigma_by_inverse(&d).unwrap());
        prop_assert_eq!(fast.sigma(), literal.sigma());
    }
}
