use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{format_coords, group_order_factors, FieldError, FiniteField, FqPoly, PolyRing};
use crate::arith::FactorBudget;

type Poly<F> = FqPoly<<F as FiniteField>::Elem>;

/// Squarefree decomposition of a nonzero polynomial: pairwise coprime monic
/// squarefree parts `s_i` with `monic(u) = prod s_i^(m_i)`, by increasing
/// multiplicity. Constant parts are omitted.
pub fn squarefree_decomposition<F: FiniteField>(
    field: &F,
    u: &Poly<F>,
) -> Result<Vec<(Poly<F>, u32)>, FieldError> {
    if u.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let r = PolyRing::new(field);
    let mut out = sff(&r, &r.monic(u));
    out.sort_by_key(|(_, m)| *m);
    Ok(out)
}

fn sff<F: FiniteField>(r: &PolyRing<'_, F>, f: &Poly<F>) -> Vec<(Poly<F>, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = r.gcd(f, &r.derivative(f));
    let mut w = r.div_exact(f, &c);
    let mut i = 1;
    while !r.is_one(&w) {
        let y = r.gcd(&w, &c);
        let part = r.div_exact(&w, &y);
        if !r.is_one(&part) {
            out.push((part, i));
        }
        c = r.div_exact(&c, &y);
        w = y;
        i += 1;
    }
    if !r.is_one(&c) {
        // What is left is a polynomial in x^p.
        let p = r.field().characteristic().to_u32().expect("degree exceeds p");
        for (part, m) in sff(r, &r.pth_root(&c)) {
            out.push((part, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into the products `g_d` of its
/// irreducible factors of each degree `d`; only nontrivial `g_d` are listed.
pub fn distinct_degree_factorization<F: FiniteField>(
    field: &F,
    u: &Poly<F>,
) -> Vec<(Poly<F>, usize)> {
    let r = PolyRing::new(field);
    let q = field.order();
    let x = r.x();
    let mut out = Vec::new();
    let mut rest = r.monic(u);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = r.powmod(&h, &q, &rest);
        let g = r.gcd(&rest, &r.sub(&h, &x));
        if !r.is_one(&g) {
            rest = r.div_exact(&rest, &g);
            h = r.rem(&h, &rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&k| k > 0) {
        out.push((rest, deg));
    }
    out
}

/// Cantor-Zassenhaus splitting of a monic product of distinct irreducibles
/// of common degree `d`.
fn equal_degree<F: FiniteField>(
    r: &PolyRing<'_, F>,
    f: Poly<F>,
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly<F>>,
) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f);
        return;
    }
    let field = r.field();
    let e = (field.order().pow(d as u32) - 1u32) >> 1;
    loop {
        let a = r.from_coeffs((0..n).map(|_| field.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = r.sub(&r.powmod(&a, &e, &f), &r.one());
        let g = r.gcd(&f, &b);
        let k = g.degree().unwrap_or(0);
        if k > 0 && k < n {
            let rest = r.div_exact(&f, &g);
            equal_degree(r, g, d, rng, out);
            equal_degree(r, rest, d, rng, out);
            return;
        }
    }
}

fn coeff_key<F: FiniteField>(field: &F, f: &Poly<F>) -> Vec<Vec<BigUint>> {
    f.coeffs().iter().map(|c| field.coords(c)).collect()
}

/// Total order on monic factors: by degree, then lexicographically by
/// coefficient coordinate vectors starting from the constant term.
fn cmp_factors<F: FiniteField>(field: &F, a: &Poly<F>, b: &Poly<F>) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| coeff_key(field, a).cmp(&coeff_key(field, b)))
}

fn split_irreducibles<F: FiniteField>(
    r: &PolyRing<'_, F>,
    squarefree: &Poly<F>,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F>> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree_factorization(r.field(), squarefree) {
        equal_degree(r, g, d, rng, &mut out);
    }
    out
}

/// Complete factorization of `u` into monic irreducibles with
/// multiplicities, in the canonical order. The leading coefficient is
/// dropped. `seed` drives the equal-degree splitting; the result does not
/// depend on it.
pub fn factor<F: FiniteField>(
    field: &F,
    u: &Poly<F>,
    seed: u64,
) -> Result<Vec<(Poly<F>, u32)>, FieldError> {
    let r = PolyRing::new(field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, m) in squarefree_decomposition(field, u)? {
        for f in split_irreducibles(&r, &part, &mut rng) {
            out.push((f, m));
        }
    }
    out.sort_by(|a, b| cmp_factors(field, &a.0, &b.0));
    debug_assert_eq!(reconstruct(field, &out), r.monic(u));
    Ok(out)
}

/// `prod f^m` over a factor list.
pub fn reconstruct<F: FiniteField>(field: &F, factors: &[(Poly<F>, u32)]) -> Poly<F> {
    let r = PolyRing::new(field);
    factors
        .iter()
        .fold(r.one(), |acc, (f, m)| r.mul(&acc, &r.pow(f, *m)))
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: FiniteField>(field: &F, f: &Poly<F>) -> bool {
    let r = PolyRing::new(field);
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let f = r.monic(f);
    let q = field.order();
    let x = r.x();
    // x^(q^k) mod f for k = 0..=n
    let mut frob = vec![r.rem(&x, &f)];
    for _ in 0..n {
        let next = r.powmod(frob.last().unwrap(), &q, &f);
        frob.push(next);
    }
    if frob[n] != frob[0] {
        return false;
    }
    crate::arith::prime_divisors_u64(n as u64).into_iter().all(|s| {
        let h = r.sub(&frob[n / s as usize], &x);
        r.is_one(&r.gcd(&f, &h))
    })
}

/// One irreducible factor in a [`FactorPattern`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub degree: usize,
    pub multiplicity: u32,
    /// Coefficients of the monic factor, constant term first.
    pub coeffs: Vec<String>,
}

/// Sorted multiset of irreducible factors with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactorPattern {
    pub entries: Vec<FactorEntry>,
}

impl FactorPattern {
    pub fn from_factors<F: FiniteField>(field: &F, factors: &[(Poly<F>, u32)]) -> Self {
        let entries = factors
            .iter()
            .map(|(f, m)| FactorEntry {
                degree: f.degree().unwrap_or(0),
                multiplicity: *m,
                coeffs: f.coeffs().iter().map(|c| field.format_elem(c)).collect(),
            })
            .collect();
        FactorPattern { entries }
    }

    /// Sum of degree times multiplicity.
    pub fn total_degree(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.degree * e.multiplicity as usize)
            .sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.iter().all(|e| e.multiplicity == 1)
    }

    /// Factor degrees repeated by multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.degree).take(e.multiplicity as usize))
            .collect();
        out.sort_unstable();
        out
    }

    /// `(degree, multiplicity)` pairs in pattern order.
    pub fn shape(&self) -> Vec<(usize, u32)> {
        self.entries
            .iter()
            .map(|e| (e.degree, e.multiplicity))
            .collect()
    }

    /// Rebuilds the factors over `field`, failing on malformed coefficients.
    pub fn to_factors<F: FiniteField>(&self, field: &F) -> Option<Vec<(Poly<F>, u32)>> {
        let r = PolyRing::new(field);
        self.entries
            .iter()
            .map(|e| {
                let coeffs = e
                    .coeffs
                    .iter()
                    .map(|s| parse_coords(s, field.degree()).map(|c| field.from_coords(&c)))
                    .collect::<Option<Vec<_>>>()?;
                let f = r.from_coeffs(coeffs);
                (f.degree() == Some(e.degree) && f.coeffs().len() == e.coeffs.len())
                    .then_some((f, e.multiplicity))
            })
            .collect()
    }

    /// Checks that every factor is monic irreducible, the listed order is the
    /// canonical one, and the product with multiplicities equals `monic(u)`.
    pub fn verify<F: FiniteField>(&self, field: &F, u: &Poly<F>) -> bool {
        let Some(factors) = self.to_factors(field) else {
            return false;
        };
        let r = PolyRing::new(field);
        let monic = factors
            .iter()
            .all(|(f, m)| *m > 0 && f.leading() == Some(&field.one()));
        let sorted = factors
            .windows(2)
            .all(|w| cmp_factors(field, &w[0].0, &w[1].0) == Ordering::Less);
        monic
            && sorted
            && factors.iter().all(|(f, _)| is_irreducible(field, f))
            && reconstruct(field, &factors) == r.monic(u)
            && FactorPattern::from_factors(field, &factors) == *self
    }
}

fn parse_coords(s: &str, k: u32) -> Option<Vec<BigUint>> {
    let coords: Vec<BigUint> = match k {
        1 => vec![s.trim().parse().ok()?],
        _ => {
            let (a, b) = s.split_once('+')?;
            let b = b.strip_suffix("*y")?;
            vec![a.trim().parse().ok()?, b.trim().parse().ok()?]
        }
    };
    (format_coords(&coords) == s).then_some(coords)
}

/// Factorization of `u` as a serializable pattern.
pub fn factor_pattern<F: FiniteField>(
    field: &F,
    u: &Poly<F>,
    seed: u64,
) -> Result<FactorPattern, FieldError> {
    Ok(FactorPattern::from_factors(field, &factor(field, u, seed)?))
}

/// Degrees of the irreducible factors of a squarefree `u`, ascending (the
/// Frobenius cycle type); `None` if `u` has a repeated factor or is zero.
pub fn cycle_type<F: FiniteField>(field: &F, u: &Poly<F>) -> Option<Vec<usize>> {
    let r = PolyRing::new(field);
    if u.degree()? == 0 || !r.is_one(&r.gcd(u, &r.derivative(u))) {
        return None;
    }
    let mut out = Vec::new();
    for (g, d) in distinct_degree_factorization(field, u) {
        let count = g.degree().unwrap() / d;
        out.extend(std::iter::repeat(d).take(count));
    }
    out.sort_unstable();
    Some(out)
}

/// An irreducible factor occurring more than once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipleFactor<E> {
    pub factor: FqPoly<E>,
    pub multiplicity: u32,
    /// The root, for linear factors.
    pub root: Option<E>,
}

/// Every irreducible factor of `u` with multiplicity at least 2, in the
/// canonical factor order.
pub fn multiplicity_profile<F: FiniteField>(
    field: &F,
    u: &Poly<F>,
    seed: u64,
) -> Result<Vec<MultipleFactor<F::Elem>>, FieldError> {
    let r = PolyRing::new(field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, m) in squarefree_decomposition(field, u)? {
        if m < 2 {
            continue;
        }
        for f in split_irreducibles(&r, &part, &mut rng) {
            let root = (f.degree() == Some(1)).then(|| field.neg(&f.coeffs()[0]));
            out.push(MultipleFactor {
                factor: f,
                multiplicity: m,
                root,
            });
        }
    }
    out.sort_by(|a, b| cmp_factors(field, &a.factor, &b.factor));
    Ok(out)
}

/// The only candidate multiple root of `x^n + Bx + C`:
/// `-n C / ((n - 1) B)`.
pub fn expected_double_root<F: FiniteField>(
    field: &F,
    n: u64,
    b: &F::Elem,
    c: &F::Elem,
) -> Result<F::Elem, FieldError> {
    let n_el = field.from_int(&n.into());
    let m_el = field.from_int(&(n - 1).into());
    let denom = field.mul(&m_el, b);
    let num = field.neg(&field.mul(&n_el, c));
    field
        .div(&num, &denom)
        .ok_or(FieldError::DivisionByZero("(n - 1) * B"))
}

/// Order of `a` in the multiplicative group; needs the factorization of
/// `q - 1`.
pub fn multiplicative_order<F: FiniteField>(
    field: &F,
    a: &F::Elem,
    budget: &FactorBudget,
) -> Result<BigUint, FieldError> {
    if field.is_zero(a) {
        return Err(FieldError::ZeroElement);
    }
    let q = field.order();
    let mut order = &q - 1u32;
    for r in group_order_factors(&q, budget)? {
        while order.is_multiple_of(&r) {
            let smaller = &order / &r;
            if field.pow(a, &smaller) != field.one() {
                break;
            }
            order = smaller;
        }
    }
    Ok(order)
}

/// Whether `a` generates the multiplicative group.
pub fn is_primitive<F: FiniteField>(
    field: &F,
    a: &F::Elem,
    budget: &FactorBudget,
) -> Result<bool, FieldError> {
    if field.is_zero(a) {
        return Err(FieldError::ZeroElement);
    }
    let n = field.order() - 1u32;
    let one = field.one();
    Ok(group_order_factors(&field.order(), budget)?
        .iter()
        .all(|r| field.pow(a, &(&n / r)) != one))
}

/// Whether `a` is a `d`-th power: `a^((q-1)/gcd(d, q-1)) = 1`. Zero counts
/// as a `d`-th power.
pub fn is_dth_power<F: FiniteField>(field: &F, a: &F::Elem, d: &BigUint) -> bool {
    if field.is_zero(a) {
        return true;
    }
    let n = field.order() - 1u32;
    let e = &n / n.gcd(d);
    if e.is_zero() {
        return true;
    }
    field.pow(a, &e) == field.one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::{Fp2, Fp64, FpBig};
    use num_traits::One;

    fn budget() -> FactorBudget {
        FactorBudget::default()
    }

    #[test]
    fn factors_small_examples() {
        let f3 = Fp64::new(3).unwrap();
        let r = PolyRing::new(&f3);
        let pat = factor_pattern(&f3, &r.from_i64s(&[0, 1, 0, 1]), 1).unwrap();
        assert_eq!(pat.shape(), vec![(1, 1), (2, 1)]);
        assert_eq!(pat.entries[0].coeffs, vec!["0", "1"]);
        assert_eq!(pat.entries[1].coeffs, vec!["1", "0", "1"]);

        let f5 = Fp64::new(5).unwrap();
        let r5 = PolyRing::new(&f5);
        let pat = factor_pattern(&f5, &r5.from_i64s(&[0, 0, 1]), 1).unwrap();
        assert_eq!(pat.shape(), vec![(1, 2)]);

        let f13 = Fp64::new(13).unwrap();
        let r13 = PolyRing::new(&f13);
        let u = r13.from_i64s(&[12, 7, 0, 0, 0, 1]);
        let pat = factor_pattern(&f13, &u, 1).unwrap();
        assert!(pat
            .entries
            .iter()
            .any(|e| e.multiplicity == 2 && e.coeffs == vec!["4", "1"]));
        assert!(pat.verify(&f13, &u));
    }

    #[test]
    fn factorization_is_seed_independent() {
        let f = Fp64::new(101).unwrap();
        let r = PolyRing::new(&f);
        let u = r.from_i64s(&[3, -7, 0, 11, 5, 0, 0, 1, 2, 0, 9, 1]);
        let a = factor(&f, &u, 1).unwrap();
        for seed in 2..10 {
            assert_eq!(factor(&f, &u, seed).unwrap(), a);
        }
        assert_eq!(reconstruct(&f, &a), r.monic(&u));
    }

    #[test]
    fn handles_pth_powers() {
        let f = Fp64::new(3).unwrap();
        let r = PolyRing::new(&f);
        // (x^2 + 1)^3 (x + 1)^4
        let a = r.from_i64s(&[1, 0, 1]);
        let b = r.from_i64s(&[1, 1]);
        let u = r.mul(&r.pow(&a, 3), &r.pow(&b, 4));
        let fac = factor(&f, &u, 0).unwrap();
        assert_eq!(fac, vec![(b, 4), (a, 3)]);
    }

    #[test]
    fn quadratic_extension_factorization() {
        // x^2 + 1 is irreducible over F_7 but splits over F_49.
        let f = Fp2::new(Fp64::new(7).unwrap()).unwrap();
        let r = PolyRing::new(&f);
        let u = r.from_i64s(&[1, 0, 1]);
        let pat = factor_pattern(&f, &u, 3).unwrap();
        assert_eq!(pat.shape(), vec![(1, 1), (1, 1)]);
        assert!(pat.verify(&f, &u));
        // 7 = 3 mod 4 makes x^4 - 3 reducible although 3 is a non-residue;
        // x^3 - 3 is irreducible over F_7 and, having odd degree, over F_49.
        let base = Fp64::new(7).unwrap();
        let rb = PolyRing::new(&base);
        assert!(!is_irreducible(&base, &rb.from_i64s(&[-3, 0, 0, 0, 1])));
        assert!(is_irreducible(&base, &rb.from_i64s(&[-3, 0, 0, 1])));
        let cubic = r.from_i64s(&[-3, 0, 0, 1]);
        assert!(is_irreducible(&f, &cubic));
        assert_eq!(factor_pattern(&f, &cubic, 0).unwrap().shape(), vec![(3, 1)]);
    }

    #[test]
    fn big_backend_matches_small() {
        let p = 1_000_003u64;
        let small = Fp64::new(p).unwrap();
        let big = FpBig::new(BigUint::from(p)).unwrap();
        let coeffs = [5i64, -1, 0, 0, 0, 1];
        let a = factor_pattern(&small, &PolyRing::new(&small).from_i64s(&coeffs), 0).unwrap();
        let b = factor_pattern(&big, &PolyRing::new(&big).from_i64s(&coeffs), 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn profile_and_double_root() {
        let f = Fp64::new(13).unwrap();
        let r = PolyRing::new(&f);
        let prof = multiplicity_profile(&f, &r.from_i64s(&[12, 7, 0, 0, 0, 1]), 0).unwrap();
        assert_eq!(prof.len(), 1);
        assert_eq!((prof[0].root, prof[0].multiplicity), (Some(9), 2));
        assert_eq!(expected_double_root(&f, 5, &7, &12).unwrap(), 9);

        let f19 = Fp64::new(19).unwrap();
        let g = expected_double_root(&f19, 5, &f19.from_i64(-1), &f19.from_i64(-1)).unwrap();
        assert_eq!(g, 13);
        assert_eq!(expected_double_root(&f19, 5, &3, &0).unwrap(), 0);
        assert!(expected_double_root(&f19, 5, &0, &1).is_err());

        let sq = r.from_i64s(&[1, 1, 0, 1]);
        assert!(multiplicity_profile(&f, &sq, 0).unwrap().is_empty());
    }

    #[test]
    fn orders_and_powers() {
        let f3 = Fp64::new(3).unwrap();
        assert_eq!(multiplicative_order(&f3, &2, &budget()).unwrap(), BigUint::from(2u32));
        let f5 = Fp64::new(5).unwrap();
        assert_eq!(multiplicative_order(&f5, &2, &budget()).unwrap(), BigUint::from(4u32));
        assert!(is_primitive(&f5, &2, &budget()).unwrap());
        assert!(!is_primitive(&f5, &4, &budget()).unwrap());
        assert_eq!(multiplicative_order(&f5, &1, &budget()).unwrap(), BigUint::one());
        assert!(multiplicative_order(&f5, &0, &budget()).is_err());
        let two = BigUint::from(2u32);
        assert!(is_dth_power(&f5, &4, &two));
        assert!(!is_dth_power(&f5, &2, &two));
        assert!(is_dth_power(&f5, &3, &BigUint::one()));
    }

    #[test]
    fn order_in_quadratic_extension() {
        let f = Fp2::new(Fp64::new(5).unwrap()).unwrap();
        let mut generators = 0;
        for a in 0..5 {
            for b in 0..5 {
                if (a, b) == (0, 0) {
                    continue;
                }
                let x = (a, b);
                let ord = multiplicative_order(&f, &x, &budget()).unwrap();
                // brute force
                let mut acc = x;
                let mut k = 1u32;
                while acc != f.one() {
                    acc = f.mul(&acc, &x);
                    k += 1;
                }
                assert_eq!(ord, BigUint::from(k));
                if is_primitive(&f, &x, &budget()).unwrap() {
                    generators += 1;
                }
            }
        }
        // phi(24) = 8
        assert_eq!(generators, 8);
    }

    #[test]
    fn cycle_types() {
        let f = Fp64::new(5).unwrap();
        let r = PolyRing::new(&f);
        // x^5 - 32x - 40 = x^5 - 2x mod 5 = x (x^4 - 2)
        let u = r.from_i64s(&[-40, -32, 0, 0, 0, 1]);
        assert_eq!(cycle_type(&f, &u), Some(vec![1, 4]));
        assert_eq!(cycle_type(&f, &r.from_i64s(&[0, 0, 1])), None);
    }

    #[test]
    fn pattern_verification_rejects_tampering() {
        let f = Fp64::new(13).unwrap();
        let r = PolyRing::new(&f);
        let u = r.from_i64s(&[12, 7, 0, 0, 0, 1]);
        let pat = factor_pattern(&f, &u, 0).unwrap();
        let mut bad = pat.clone();
        bad.entries[0].multiplicity += 1;
        assert!(!bad.verify(&f, &u));
        let mut bad = pat.clone();
        bad.entries.reverse();
        assert!(!bad.verify(&f, &u));
        let json = serde_json::to_string(&pat).unwrap();
        assert!(json.starts_with("[{\"degree\":"));
        let back: FactorPattern = serde_json::from_str(&json).unwrap();
        assert!(back.verify(&f, &u));
    }
}
