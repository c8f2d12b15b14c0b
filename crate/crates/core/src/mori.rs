//! Mori quadruples `(g, p, b, c)`, their trinomials, the odd part `D0` of the
//! discriminant, and the witnesses extracted from reductions mod `p` and mod
//! an odd prime dividing the discriminant to odd order.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, FactorBudget, Primality};
use crate::finfield::{
    expected_double_root, factor, is_dth_power, is_primitive, multiplicity_profile, FactorPattern,
    FieldError, FiniteField, FqContext, PolyRing,
};
use crate::intpoly::{pow2, trinomial_discriminant, IntPolynomial, PolyError, Trinomial};
use crate::with_field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoriError {
    #[error("g must be positive")]
    ZeroGenus,
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("quadruple fails: {}", .0.failures().join(", "))]
    Invalid(Box<QuadrupleConditions>),
    #[error("could not fully factor {0} within the budget")]
    FactorizationIncomplete(BigUint),
    #[error("no prime of odd valuation passed the double-root check (unfactored cofactor {cofactor})")]
    NoTranspositionPrime { cofactor: BigUint },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Per-condition record for a candidate quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleConditions {
    pub p_primality: Primality,
    /// Every prime divisor of `g` divides `(p - 1) / 2`.
    pub genus_divisibility: bool,
    /// `b mod p` generates `F_p^*`.
    pub primitive_root: bool,
    pub c_odd: bool,
    pub gcd_b_c: bool,
    pub gcd_b_2g_plus_1: bool,
    pub gcd_c_g: bool,
    /// `c = -p mod 4`; recorded, not required.
    pub c_congruent_minus_p_mod_4: bool,
}

impl QuadrupleConditions {
    pub fn coprimality(&self) -> bool {
        self.c_odd && self.gcd_b_c && self.gcd_b_2g_plus_1 && self.gcd_c_g
    }

    pub fn is_valid(&self) -> bool {
        self.genus_divisibility && self.primitive_root && self.coprimality()
    }

    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            (self.genus_divisibility, "genus_divisibility (a prime divisor of g does not divide (p-1)/2)"),
            (self.primitive_root, "primitive_root (b is not a primitive root mod p)"),
            (self.c_odd, "c_odd"),
            (self.gcd_b_c, "gcd_b_c"),
            (self.gcd_b_2g_plus_1, "gcd_b_2g_plus_1"),
            (self.gcd_c_g, "gcd_c_g"),
        ];
        checks.iter().filter(|(ok, _)| !ok).map(|(_, n)| *n).collect()
    }
}

/// A validated quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriQuadruple {
    pub g: u32,
    #[serde(with = "crate::serde_dec")]
    pub p: BigUint,
    #[serde(with = "crate::serde_dec")]
    pub b: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub c: BigInt,
    pub validation: QuadrupleConditions,
}

impl fmt::Display for MoriQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.g, self.p, self.b, self.c)
    }
}

fn gcd_is_one(a: &BigInt, b: &BigInt) -> bool {
    a.gcd(b).is_one()
}

/// Evaluates every condition independently. Fails only when `g = 0`, `p` is
/// not an odd prime, or `p - 1` cannot be factored.
pub fn check_conditions(
    g: u32,
    p: &BigInt,
    b: &BigInt,
    c: &BigInt,
    budget: &FactorBudget,
) -> Result<QuadrupleConditions, MoriError> {
    if g == 0 {
        return Err(MoriError::ZeroGenus);
    }
    let p_primality = arith::is_prime_int(p);
    if !p_primality.is_prime() || p.is_even() || p.is_negative() {
        return Err(MoriError::NotOddPrime(p.clone()));
    }
    let pu = p.magnitude().clone();
    let half: BigUint = (&pu - 1u32) >> 1;
    let genus_divisibility = arith::prime_divisors_u64(g as u64)
        .into_iter()
        .all(|d| (&half % BigUint::from(d)).is_zero());
    let ctx = FqContext::prime(&pu)?;
    let primitive_root = with_field!(&ctx, f => match is_primitive(f, &f.from_int(b), budget) {
        Ok(v) => Ok(v),
        Err(FieldError::ZeroElement) => Ok(false),
        Err(FieldError::GroupOrderUnfactored(n)) => Err(MoriError::FactorizationIncomplete(n)),
        Err(e) => Err(e.into()),
    })?;
    let gi = BigInt::from(g);
    let n = BigInt::from(2 * g as u64 + 1);
    Ok(QuadrupleConditions {
        p_primality,
        genus_divisibility,
        primitive_root,
        c_odd: c.is_odd(),
        gcd_b_c: gcd_is_one(b, c),
        gcd_b_2g_plus_1: gcd_is_one(b, &n),
        gcd_c_g: gcd_is_one(c, &gi),
        c_congruent_minus_p_mod_4: (c + p).mod_floor(&BigInt::from(4)).is_zero(),
    })
}

/// Validates `(g, p, b, c)`; an invalid quadruple yields
/// [`MoriError::Invalid`] carrying the full report.
pub fn validate_quadruple(
    g: u32,
    p: &BigInt,
    b: &BigInt,
    c: &BigInt,
    budget: &FactorBudget,
) -> Result<MoriQuadruple, MoriError> {
    let validation = check_conditions(g, p, b, c, budget)?;
    if !validation.is_valid() {
        return Err(MoriError::Invalid(Box::new(validation)));
    }
    Ok(MoriQuadruple {
        g,
        p: p.magnitude().clone(),
        b: b.clone(),
        c: c.clone(),
        validation,
    })
}

impl MoriQuadruple {
    pub fn degree(&self) -> u32 {
        2 * self.g + 1
    }

    pub fn p_int(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.p.clone())
    }

    /// `f = x^(2g+1) - b x - p c / 4`.
    pub fn mori_polynomial(&self) -> IntPolynomial {
        let n = self.degree() as usize;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::from(4);
        coeffs[1] = -BigInt::from(4) * &self.b;
        coeffs[0] = -(self.p_int() * &self.c);
        IntPolynomial::new(coeffs, 2)
    }

    /// `u~ = x^(2g+1) - 2^(2g) b x - 2^(2g-1) p c`, the integral rescaling of `f`.
    pub fn integral_trinomial(&self) -> Trinomial {
        let g = self.g as u64;
        let linear = -(pow2(2 * g) * &self.b);
        let constant = -(pow2(2 * g - 1) * self.p_int() * &self.c);
        Trinomial::new(self.degree(), linear, constant).expect("b and c are nonzero")
    }
}

/// `(f, u~)` with `u~ = 2^(2g+1) f(x/2)` checked.
pub fn build_trinomials(q: &MoriQuadruple) -> (IntPolynomial, Trinomial) {
    let f = q.mori_polynomial();
    let u = q.integral_trinomial();
    debug_assert_eq!(
        f.scale_substitute(&BigUint::from(2u32)).unwrap(),
        u.to_poly()
    );
    (f, u)
}

/// A prime with its exact exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_dec")]
    pub prime: BigUint,
    pub exponent: u32,
}

/// `Delta = 2^(2M) D0` with `D0` odd, and what is known of the factorization
/// of `|D0|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantDecomposition {
    #[serde(with = "crate::serde_dec")]
    pub delta: BigInt,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "D0", with = "crate::serde_dec")]
    pub d0: BigInt,
    /// Prime factors of `|D0|`, ascending.
    pub known_prime_factors: Vec<PrimePower>,
    #[serde(with = "crate::serde_dec")]
    pub unfactored_cofactor: BigUint,
    /// Some listed factor is only a probable prime.
    pub probable_primes: bool,
}

impl DiscriminantDecomposition {
    /// Splits off the largest even power of 2 and factors the rest. `D0` is
    /// even exactly when `v_2(Delta)` is odd.
    pub fn new(delta: BigInt, budget: &FactorBudget) -> Self {
        assert!(!delta.is_zero(), "zero discriminant");
        let m = (arith::v2(&delta) / 2) as u64;
        let d0 = &delta >> (2 * m);
        let fac = arith::factorize(d0.magnitude(), budget);
        DiscriminantDecomposition {
            delta,
            m,
            d0,
            known_prime_factors: fac
                .factors
                .into_iter()
                .map(|(prime, exponent)| PrimePower { prime, exponent })
                .collect(),
            unfactored_cofactor: fac.cofactor,
            probable_primes: fac.probable,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.unfactored_cofactor.is_one()
    }

    /// Factors times cofactor reproduce `|D0|`, and `2^(2M) D0 = Delta`.
    pub fn is_consistent(&self) -> bool {
        let prod = self
            .known_prime_factors
            .iter()
            .fold(self.unfactored_cofactor.clone(), |acc, pp| {
                acc * Pow::pow(&pp.prime, pp.exponent)
            });
        prod == *self.d0.magnitude() && (&self.d0 << (2 * self.m)) == self.delta
    }

    /// Odd primes dividing `Delta` to odd order, among the known factors.
    pub fn odd_valuation_primes(&self) -> Vec<PrimePower> {
        self.known_prime_factors
            .iter()
            .filter(|pp| pp.exponent % 2 == 1 && pp.prime != BigUint::from(2u32))
            .cloned()
            .collect()
    }

    pub fn d0_mod_4(&self) -> u32 {
        self.d0.mod_floor(&BigInt::from(4)).to_u32().unwrap()
    }

    /// Whether `Delta` is a square in `Q`.
    pub fn is_square(&self) -> bool {
        arith::is_perfect_square(&self.delta)
    }
}

/// Odd primes dividing `delta` to odd order, with the unfactored cofactor.
pub fn odd_valuation_primes(
    delta: &BigInt,
    budget: &FactorBudget,
) -> (Vec<PrimePower>, BigUint) {
    let mut n = delta.magnitude().clone();
    if let Some(k) = n.trailing_zeros() {
        n >>= k;
    }
    let fac = arith::factorize(&n, budget);
    let primes = fac
        .factors
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(prime, exponent)| PrimePower { prime, exponent })
        .collect();
    (primes, fac.cofactor)
}

/// The closed form
/// `D0 = (-1)^g [ (2g+1) ((2g+1)^g (pc)^g)^2 - 2^(6g) g^(2g) b^(2g+1) ]`,
/// checked against the discriminant of `u~` and the congruences it must
/// satisfy.
pub fn d0_closed_form(
    q: &MoriQuadruple,
    budget: &FactorBudget,
) -> Result<DiscriminantDecomposition, MoriError> {
    let g = q.g;
    let n = BigInt::from(2 * g + 1);
    let pc = q.p_int() * &q.c;
    let inner = Pow::pow(&n, g) * Pow::pow(&pc, g);
    let t1 = &n * &inner * &inner;
    let t2 = pow2(6 * g as u64) * Pow::pow(&BigInt::from(g), 2 * g) * Pow::pow(&q.b, 2 * g + 1);
    let mut d0 = t1 - t2;
    if g % 2 == 1 {
        d0 = -d0;
    }
    let m = g as u64 * (2 * g as u64 - 1);
    let u = q.integral_trinomial();
    let delta = trinomial_discriminant(u.n, &u.linear, &u.constant)?;
    if delta != (&d0 << (2 * m)) {
        return Err(MoriError::Internal(format!(
            "closed-form D0 {d0} disagrees with discriminant {delta}"
        )));
    }
    let dec = DiscriminantDecomposition::new(delta, budget);
    if dec.d0 != d0 {
        return Err(MoriError::Internal("D0 is not the odd part".into()));
    }
    if d0.is_even() || (&d0 % q.p_int()).is_zero() || dec.d0_mod_4() != 1 {
        return Err(MoriError::Internal(format!(
            "D0 = {d0} violates D0 odd, p not dividing D0, D0 = 1 mod 4"
        )));
    }
    Ok(dec)
}

/// A verified double root of `u mod ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranspositionWitness {
    #[serde(with = "crate::serde_dec")]
    pub ell: BigUint,
    /// `v_ell(Delta)`, odd.
    pub valuation: u32,
    #[serde(with = "crate::serde_dec")]
    pub gamma: BigUint,
    /// Factorization of `u mod ell`.
    pub pattern: FactorPattern,
}

/// Why a candidate prime does not yield a transposition witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranspositionFailure {
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigUint),
    #[error("valuation {0} is even")]
    EvenValuation(u32),
    #[error("(n-1)B vanishes mod ell")]
    DegenerateCoefficients,
    #[error("gamma is not a double root")]
    GammaNotDoubleRoot,
    #[error("multiple-root profile is not a single nonzero double root equal to gamma")]
    BadProfile,
    #[error("factor pattern has other repeated factors")]
    BadPattern,
}

/// Verifies that `u mod ell` has exactly one multiple root, double, nonzero,
/// in `F_ell`, equal to `-nC/((n-1)B)`.
pub fn check_transposition_prime(
    u: &Trinomial,
    ell: &BigUint,
    valuation: u32,
    seed: u64,
) -> Result<TranspositionWitness, TranspositionFailure> {
    if valuation % 2 == 0 {
        return Err(TranspositionFailure::EvenValuation(valuation));
    }
    let ctx = FqContext::prime(ell).map_err(|_| TranspositionFailure::NotOddPrime(ell.clone()))?;
    with_field!(&ctx, f => {
        let r = PolyRing::new(f);
        let poly = u.to_poly().reduce_mod(f);
        let (b, c) = (f.from_int(&u.linear), f.from_int(&u.constant));
        let gamma = expected_double_root(f, u.n as u64, &b, &c)
            .map_err(|_| TranspositionFailure::DegenerateCoefficients)?;
        if !f.is_zero(&r.eval(&poly, &gamma)) || !f.is_zero(&r.eval(&r.derivative(&poly), &gamma)) {
            return Err(TranspositionFailure::GammaNotDoubleRoot);
        }
        let profile = multiplicity_profile(f, &poly, seed).expect("nonzero");
        let ok = matches!(profile.as_slice(),
            [m] if m.multiplicity == 2 && m.root.as_ref() == Some(&gamma) && !f.is_zero(&gamma));
        if !ok {
            return Err(TranspositionFailure::BadProfile);
        }
        let factors = factor(f, &poly, seed).expect("nonzero");
        let pattern = FactorPattern::from_factors(f, &factors);
        let doubles = pattern.entries.iter().filter(|e| e.multiplicity == 2).count();
        if doubles != 1 || pattern.entries.iter().any(|e| e.multiplicity > 2) {
            return Err(TranspositionFailure::BadPattern);
        }
        Ok(TranspositionWitness {
            ell: ell.clone(),
            valuation,
            gamma: f.coords(&gamma).remove(0),
            pattern,
        })
    })
}

/// The smallest odd prime of odd valuation (other than `excluded`) that
/// passes [`check_transposition_prime`].
pub fn find_transposition_prime(
    u: &Trinomial,
    dec: &DiscriminantDecomposition,
    excluded: Option<&BigUint>,
    seed: u64,
) -> Result<TranspositionWitness, MoriError> {
    dec.odd_valuation_primes()
        .iter()
        .filter(|pp| Some(&pp.prime) != excluded)
        .find_map(|pp| check_transposition_prime(u, &pp.prime, pp.exponent, seed).ok())
        .ok_or_else(|| MoriError::NoTranspositionPrime {
            cofactor: dec.unfactored_cofactor.clone(),
        })
}

/// Runs the double-root check at every known odd-valuation prime.
pub fn check_all_transposition_primes(
    u: &Trinomial,
    dec: &DiscriminantDecomposition,
    seed: u64,
) -> Vec<(BigUint, Result<TranspositionWitness, TranspositionFailure>)> {
    dec.odd_valuation_primes()
        .into_iter()
        .map(|pp| {
            let res = check_transposition_prime(u, &pp.prime, pp.exponent, seed);
            (pp.prime, res)
        })
        .collect()
}

/// Irreducibility of `x^m - b` over `F_q` by the binomial criterion: `b` is
/// not a `d`-th power for any prime `d | m`, and `b` is not in `-4 F_q^4`
/// when `4 | m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialCriterion {
    pub exponent: u64,
    /// `(d, b is not a d-th power)` for each prime `d | exponent`.
    pub prime_divisors: Vec<(u64, bool)>,
    /// `b` outside `-4 F_q^4`; present when `4 | exponent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_minus_four_fourth_power: Option<bool>,
    pub irreducible: bool,
}

pub fn binomial_criterion<F: FiniteField>(field: &F, b: &F::Elem, m: u64) -> BinomialCriterion {
    let prime_divisors: Vec<(u64, bool)> = arith::prime_divisors_u64(m)
        .into_iter()
        .map(|d| (d, !is_dth_power(field, b, &BigUint::from(d))))
        .collect();
    let not_minus_four_fourth_power = (m % 4 == 0).then(|| {
        let minus_four = field.from_i64(-4);
        let ratio = field.div(b, &minus_four).expect("odd characteristic");
        !is_dth_power(field, &ratio, &BigUint::from(4u32))
    });
    let irreducible = !field.is_zero(b)
        && prime_divisors.iter().all(|(_, ok)| *ok)
        && not_minus_four_fourth_power.unwrap_or(true);
    BinomialCriterion {
        exponent: m,
        prime_divisors,
        not_minus_four_fourth_power,
        irreducible,
    }
}

/// The factorization of `f mod p` into `x (x^(2g) - b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    #[serde(with = "crate::serde_dec")]
    pub p: BigUint,
    pub pattern: FactorPattern,
    pub criterion: BinomialCriterion,
}

/// Reduces `f` mod `p` through `u~` and `x -> 2x`, and certifies the pattern
/// `{(1,1), (2g,1)}` by factoring and by the binomial criterion.
pub fn mod_p_pattern(q: &MoriQuadruple, seed: u64) -> Result<CycleWitness, MoriError> {
    let ctx = FqContext::prime(&q.p)?;
    let (f_poly, u) = build_trinomials(q);
    let n = q.degree() as usize;
    with_field!(&ctx, fld => {
        let r = PolyRing::new(fld);
        let u_bar = u.to_poly().reduce_mod(fld);
        let two = fld.from_i64(2);
        let inv = fld.inv(&fld.pow(&two, &BigUint::from(n))).unwrap();
        let f_bar = r.scale(&r.scale_variable(&u_bar, &two), &inv);
        if f_bar != f_poly.reduce_mod(fld) {
            return Err(MoriError::Internal("f mod p disagrees with u~(2x)/2^n mod p".into()));
        }
        let factors = factor(fld, &f_bar, seed)?;
        let pattern = FactorPattern::from_factors(fld, &factors);
        let by_factoring = pattern.shape() == vec![(1, 1), (n - 1, 1)];
        let b_bar = fld.from_int(&q.b);
        let criterion = binomial_criterion(fld, &b_bar, n as u64 - 1);
        if !by_factoring || !criterion.irreducible {
            return Err(MoriError::Internal(format!(
                "mod-p pattern {:?} (criterion says irreducible: {})",
                pattern.shape(),
                criterion.irreducible
            )));
        }
        Ok(CycleWitness {
            p: q.p.clone(),
            pattern,
            criterion,
        })
    })
}

/// Inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn new(lo: i64, hi: i64) -> Self {
        Span { lo, hi }
    }

    pub fn iter(self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }
}

fn quadruples_for_p(
    g: u32,
    p: i64,
    b_range: Span,
    c_range: Span,
    budget: &FactorBudget,
) -> Vec<MoriQuadruple> {
    if p < 3 || !arith::is_prime_u64(p as u64) {
        return Vec::new();
    }
    let p = BigInt::from(p);
    let mut out = Vec::new();
    for b in b_range.iter() {
        for c in c_range.iter() {
            if let Ok(q) = validate_quadruple(g, &p, &b.into(), &c.into(), budget) {
                out.push(q);
            }
        }
    }
    out
}

/// Every valid quadruple in the box, ordered by `(p, b, c)`.
pub fn search_quadruples(
    g: u32,
    p_range: Span,
    b_range: Span,
    c_range: Span,
    budget: FactorBudget,
) -> impl Iterator<Item = MoriQuadruple> {
    p_range
        .iter()
        .flat_map(move |p| quadruples_for_p(g, p, b_range, c_range, &budget))
}

/// [`search_quadruples`] split across the current rayon pool by `p`; the
/// result is in the same order.
pub fn search_quadruples_par(
    g: u32,
    p_range: Span,
    b_range: Span,
    c_range: Span,
    budget: FactorBudget,
) -> Vec<MoriQuadruple> {
    let ps: Vec<i64> = p_range.iter().collect();
    ps.par_iter()
        .map(|&p| quadruples_for_p(g, p, b_range, c_range, &budget))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
