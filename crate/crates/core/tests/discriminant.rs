//! The closed-form trinomial discriminant against two independent
//! computations: the subresultant resultant and a fraction-free determinant
//! of the Sylvester matrix.

use morigal::arith::FactorBudget;
use morigal::intpoly::{trinomial_discriminant, IntPolynomial, Trinomial};
use morigal::mori::{d0_closed_form, search_quadruples, Span};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

/// Determinant by Bareiss elimination (exact, integer intermediates).
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of `a` and `b`, coefficients given highest degree first.
fn sylvester(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    let mut rows = Vec::with_capacity(size);
    for i in 0..db {
        let mut row = vec![BigInt::zero(); size];
        row[i..i + a.len()].clone_from_slice(a);
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![BigInt::zero(); size];
        row[i..i + b.len()].clone_from_slice(b);
        rows.push(row);
    }
    rows
}

/// Discriminant of the monic `x^n + Bx + C` as `(-1)^(n(n-1)/2) Res(f, f')`.
fn sylvester_discriminant(n: u32, b: &BigInt, c: &BigInt) -> BigInt {
    let n = n as usize;
    let mut f = vec![BigInt::zero(); n + 1];
    f[0] = BigInt::one();
    f[n - 1] = b.clone();
    f[n] = c.clone();
    let mut df = vec![BigInt::zero(); n];
    df[0] = BigInt::from(n);
    df[n - 1] = b.clone();
    let res = bareiss_det(sylvester(&f, &df));
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

#[test]
fn sylvester_oracle_matches_textbook_values() {
    // x^2 + bx + c: b^2 - 4c; x^3 + px + q: -4p^3 - 27q^2.
    assert_eq!(sylvester_discriminant(2, &3.into(), &5.into()), BigInt::from(9 - 20));
    assert_eq!(sylvester_discriminant(3, &(-8).into(), &(-6).into()), BigInt::from(1076));
    assert_eq!(sylvester_discriminant(5, &(-1).into(), &(-1).into()), BigInt::from(2869));
}

#[test]
fn worked_examples() {
    let d = trinomial_discriminant(5, &(-32).into(), &(-40).into()).unwrap();
    assert_eq!(d, BigInt::from(-589934592i64));
    assert_eq!(d, BigInt::from(-144027) << 12);
}

fn coeff() -> impl Strategy<Value = i64> {
    (-1_000_000_000i64..=1_000_000_000).prop_filter("nonzero", |v| *v != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_subresultant_and_sylvester(n in 2u32..=12, b in coeff(), c in coeff()) {
        let (b, c) = (BigInt::from(b), BigInt::from(c));
        let closed = trinomial_discriminant(n, &b, &c).unwrap();
        let sub = IntPolynomial::trinomial(n, &b, &c).integer_discriminant().unwrap();
        prop_assert_eq!(&closed, &sub);
        prop_assert_eq!(&closed, &sylvester_discriminant(n, &b, &c));
        prop_assert_eq!(&closed, &Trinomial::new(n, b, c).unwrap().discriminant());
    }

    /// `x -> x / lambda` scales `Delta` by `lambda^(n(n-1))`.
    #[test]
    fn weighted_scaling(n in 2u32..=9, b in -1000i64..1000, c in -1000i64..1000, lambda in 1i64..20) {
        let (b, c, l) = (BigInt::from(b), BigInt::from(c), BigInt::from(lambda));
        let scaled = trinomial_discriminant(n, &(&b * Pow::pow(&l, n - 1)), &(&c * Pow::pow(&l, n))).unwrap();
        let base = trinomial_discriminant(n, &b, &c).unwrap();
        prop_assert_eq!(scaled, base * Pow::pow(&l, n * (n - 1)));
    }

    /// `x -> -x` sends the trinomial to `x^n + Bx - C` for odd `n` and to
    /// `x^n - Bx + C` for even `n`, up to sign; the discriminant is unchanged.
    #[test]
    fn reflection(n in 2u32..=11, b in coeff(), c in coeff()) {
        let (b, c) = (BigInt::from(b), BigInt::from(c));
        let (b2, c2) = if n % 2 == 0 { (-b.clone(), c.clone()) } else { (b.clone(), -c.clone()) };
        prop_assert_eq!(
            trinomial_discriminant(n, &b, &c).unwrap(),
            trinomial_discriminant(n, &b2, &c2).unwrap()
        );
    }
}

#[test]
fn mori_discriminant_is_power_of_four_times_d0() {
    let budget = FactorBudget::default();
    for g in 1..=4u32 {
        for q in search_quadruples(g, Span::new(3, 40), Span::new(1, 8), Span::new(1, 7), budget).take(15) {
            let u = q.integral_trinomial();
            let m = g * (2 * g - 1);
            let sub = u.to_poly().integer_discriminant().unwrap();
            let dec = d0_closed_form(&q, &budget).unwrap();
            assert_eq!(sub, &dec.d0 << (2 * m), "{q}");
            assert_eq!(sylvester_discriminant(u.n, &u.linear, &u.constant), sub, "{q}");
        }
    }
}
