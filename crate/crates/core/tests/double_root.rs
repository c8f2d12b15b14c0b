//! For valid quadruples and odd primes `l`, the reduction of `u~` has at
//! most one multiple root, of multiplicity exactly 2, lying in `F_l`, nonzero
//! and equal to `-nC/((n-1)B)`.

use morigal::arith::{is_prime_u64, FactorBudget};
use morigal::finfield::{expected_double_root, multiplicity_profile, FiniteField, FqContext};
use morigal::mori::{d0_closed_form, search_quadruples, MoriQuadruple, Span};
use morigal::with_field;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quadruples() -> Vec<MoriQuadruple> {
    let budget = FactorBudget::default();
    let mut out = Vec::new();
    for g in 1..=5u32 {
        out.extend(search_quadruples(g, Span::new(3, 60), Span::new(1, 9), Span::new(1, 9), budget).take(5));
    }
    out
}

/// Checks the lemma at `ell`; returns whether a double root occurred.
fn check(q: &MoriQuadruple, ell: u64) -> bool {
    let u = q.integral_trinomial();
    let ctx = FqContext::prime(&BigUint::from(ell)).unwrap();
    with_field!(&ctx, f => {
        let red = u.to_poly().reduce_mod(f);
        let profile = multiplicity_profile(f, &red, 7).unwrap();
        assert!(profile.len() <= 1, "{q} mod {ell}: {} multiple factors", profile.len());
        let Some(m) = profile.first() else { return false };
        assert_eq!(m.multiplicity, 2, "{q} mod {ell}");
        let root = m.root.clone().unwrap_or_else(|| panic!("{q} mod {ell}: multiple factor not linear"));
        assert!(!f.is_zero(&root), "{q} mod {ell}: zero double root");
        let b = f.from_int(&u.linear);
        let c = f.from_int(&u.constant);
        let expected = expected_double_root(f, u.n as u64, &b, &c).unwrap();
        assert_eq!(root, expected, "{q} mod {ell}");
        true
    })
}

#[test]
fn double_root_lemma_on_random_primes() {
    let qs = quadruples();
    assert!(qs.len() >= 20, "only {} quadruples", qs.len());
    let gs: std::collections::BTreeSet<u32> = qs.iter().map(|q| q.g).collect();
    assert_eq!(gs.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut doubles = 0;
    for q in &qs {
        let mut tested = 0;
        while tested < 200 {
            let ell = rng.gen_range(3u64..1 << 40);
            if !is_prime_u64(ell) {
                continue;
            }
            check(q, ell);
            tested += 1;
        }
        // Primes dividing D0 are the only ones with a multiple root; test them all.
        let dec = d0_closed_form(q, &FactorBudget::default()).unwrap();
        for pp in &dec.known_prime_factors {
            if let Ok(ell) = u64::try_from(&pp.prime) {
                doubles += check(q, ell) as usize;
            }
        }
    }
    assert!(doubles >= qs.len(), "only {doubles} double roots seen");
}

#[test]
fn small_primes_exhaustively() {
    for q in quadruples().iter().take(10) {
        for ell in (3u64..2000).filter(|&l| is_prime_u64(l)) {
            check(q, ell);
        }
    }
}
