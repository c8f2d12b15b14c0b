//! `D0 = 1 mod 4` and `p` does not divide `D0` for valid quadruples, with
//! `D0` taken from the resultant-based discriminant rather than the closed
//! form.

use morigal::arith::FactorBudget;
use morigal::mori::{search_quadruples_par, validate_quadruple, Span};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn d0_from_resultant(q: &morigal::mori::MoriQuadruple) -> BigInt {
    let delta = q.integral_trinomial().to_poly().integer_discriminant().unwrap();
    let m = q.g * (2 * q.g - 1);
    let four_m = BigInt::from(1) << (2 * m);
    let (d0, r) = delta.div_rem(&four_m);
    assert!(r.is_zero(), "{q}: 4^M does not divide the discriminant");
    d0
}

#[test]
fn d0_invariants_over_search_boxes() {
    let budget = FactorBudget::default();
    let mut tested = 0;
    for g in 1..=5u32 {
        for q in search_quadruples_par(g, Span::new(3, 80), Span::new(-12, 12), Span::new(-9, 9), budget) {
            let d0 = d0_from_resultant(&q);
            assert_eq!(d0.mod_floor(&BigInt::from(4)), BigInt::from(1), "{q}: D0 = {d0}");
            assert!(!(&d0 % q.p_int()).is_zero(), "{q}: p divides D0 = {d0}");
            tested += 1;
        }
    }
    assert!(tested > 500, "only {tested} quadruples");
}

proptest! {
    #[test]
    fn d0_invariants_on_random_quadruples(
        g in 1u32..=4,
        p in prop::sample::select(vec![3i64, 5, 7, 11, 13, 17, 29, 37, 41, 97, 101, 1009]),
        b in -10_000i64..10_000,
        c in -10_000i64..10_000,
    ) {
        let budget = FactorBudget::default();
        let Ok(q) = validate_quadruple(g, &p.into(), &b.into(), &c.into(), &budget) else {
            return Ok(());
        };
        let d0 = d0_from_resultant(&q);
        prop_assert_eq!(d0.mod_floor(&BigInt::from(4)), BigInt::from(1));
        prop_assert!(!(&d0 % q.p_int()).is_zero());
    }
}
