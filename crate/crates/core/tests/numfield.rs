use morigal::arith::FactorBudget;
use morigal::finfield::FiniteField;
use morigal::galois::{CertifyOptions, Conclusion};
use morigal::mori::{d0_closed_form, search_quadruples, Span};
use morigal::numfield::quadruple::{d0_k, trinomial_discriminant_k};
use morigal::numfield::{
    certify_k, residue_map, splitting, validate_generalized_quadruple, verify_k, ImagQuadField, OKElement,
    SUPPORTED_D,
};
use morigal::with_field;
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = ImagQuadField> {
    prop::sample::select(SUPPORTED_D.to_vec()).prop_map(|d| ImagQuadField::new(d).unwrap())
}

fn element() -> impl Strategy<Value = OKElement> {
    (-500i64..500, -500i64..500).prop_map(|(x, y)| OKElement::new(x, y))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(k in field(), a in element(), b in element()) {
        prop_assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
        prop_assert_eq!(k.norm(&k.conj(&a)), k.norm(&a));
        prop_assert_eq!(k.mul(&a, &k.conj(&a)), OKElement::from_int(k.norm(&a)));
    }

    #[test]
    fn exact_division_inverts_multiplication(k in field(), a in element(), b in element()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(k.div_exact(&k.mul(&a, &b), &b), Some(a));
    }

    #[test]
    fn canonical_associate_is_a_class_invariant(k in field(), a in element()) {
        let c = k.canonical_associate(&a);
        for u in k.units() {
            prop_assert_eq!(k.canonical_associate(&k.mul(&u, &a)), c.clone());
        }
    }

    #[test]
    fn residue_maps_are_ring_homomorphisms(k in field(), p in prop::sample::select(vec![3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31]), a in element(), b in element()) {
        for ideal in splitting(&k, &BigUint::from(p)) {
            let ctx = ideal.residue_field().unwrap();
            with_field!(&ctx, f => {
                let (ra, rb) = (residue_map(f, &ideal, &a), residue_map(f, &ideal, &b));
                prop_assert_eq!(residue_map(f, &ideal, &k.mul(&a, &b)), f.mul(&ra, &rb));
                prop_assert_eq!(residue_map(f, &ideal, &a.add(&b)), f.add(&ra, &rb));
                prop_assert!(f.is_zero(&residue_map(f, &ideal, &ideal.generator)));
            });
        }
    }
}

#[test]
fn splitting_degrees_sum_to_two() {
    for d in SUPPORTED_D {
        let k = ImagQuadField::new(d).unwrap();
        for p in [2u32, 3, 5, 7, 11, 13, 163] {
            let ideals = splitting(&k, &BigUint::from(p));
            let total: u32 = ideals.iter().map(|i| i.residue_degree * i.ramification_index).sum();
            assert_eq!(total, 2, "d = {d}, p = {p}");
            for i in &ideals {
                assert_eq!(k.norm(&i.generator), BigInt::from(p).pow(i.residue_degree), "d = {d}, p = {p}");
            }
        }
    }
}

/// With rational `b` and `c`, `D0` over `K` is the rational `D0` (whose
/// constant term already carries the factor `p`).
#[test]
fn rational_inputs_agree_with_rational_d0() {
    let budget = FactorBudget::default();
    for g in 1..=3u32 {
        for q in search_quadruples(g, Span::new(3, 30), Span::new(1, 6), Span::new(1, 5), budget).take(6) {
            let rational = d0_closed_form(&q, &budget).unwrap().d0;
            let b = OKElement::from_int(q.b.clone());
            let c = OKElement::from_int(q.p_int() * &q.c);
            for d in SUPPORTED_D {
                let k = ImagQuadField::new(d).unwrap();
                let d0 = d0_k(&k, g, &b, &c);
                assert_eq!(d0, OKElement::from_int(rational.clone()), "{q} over d = {d}");
                let u = q.integral_trinomial();
                let delta = trinomial_discriminant_k(
                    &k,
                    u.n,
                    &OKElement::from_int(u.linear.clone()),
                    &OKElement::from_int(u.constant.clone()),
                );
                let m = g * (2 * g - 1);
                assert_eq!(delta, d0.scale(&(BigInt::one() << (2 * m))), "{q} over d = {d}");
            }
        }
    }
}

#[test]
fn gaussian_lift_of_genus_two_example() {
    let k = ImagQuadField::new(-1).unwrap();
    let budget = FactorBudget::default();
    let q = validate_generalized_quadruple(
        &k,
        2,
        &k.parse("2+i").unwrap(),
        &OKElement::from_int(2),
        &OKElement::from_int(5),
        &budget,
    )
    .unwrap();
    let cert = certify_k(&q, &CertifyOptions::default());
    assert_eq!(cert.discriminant.d0, OKElement::from_int(-144027));
    assert_eq!(cert.conclusion, Conclusion::FullSymmetric);
    assert_eq!(cert.group.as_deref(), Some("S_5"));
    assert!(verify_k(&cert).is_sound());
}
