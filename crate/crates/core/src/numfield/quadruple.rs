//! Generalized Mori quadruples `(g, P, b, c)` over `K` and the certificate
//! that `x^(2g+1) - bx - c/4` has Galois group `S_(2g+1)` over `K`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ideal::{coprime, reduce_poly, residue_map, splitting, MaximalIdeal};
use super::{ideal_from_generator, ImagQuadField, NumFieldError, OKElement};
use crate::arith::{self, FactorBudget};
use crate::finfield::{
    expected_double_root, factor, is_primitive, multiplicity_profile, FactorPattern, FiniteField,
    PolyRing,
};
use crate::galois::{CertifyOptions, Conclusion, Verification};
use crate::mori::{binomial_criterion, BinomialCriterion, PrimePower};
use crate::padic::{eisenstein_dumas, EisensteinDumas, NewtonPolygon};
use crate::with_field;

/// Per-condition record for a generalized quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedConditions {
    pub odd_residue_characteristic: bool,
    /// Every prime divisor of `g` divides `(q - 1) / 2`, `q = |O_K / P|`.
    pub genus_divisibility: bool,
    /// `b mod P` generates the multiplicative group of the residue field.
    pub primitive_root: bool,
    pub c_in_prime: bool,
    pub c_minus_1_in_2o: bool,
    pub b_c_coprime: bool,
    pub b_2g_plus_1_coprime: bool,
    pub two_g_c_coprime: bool,
}

impl GeneralizedConditions {
    fn named(&self) -> [(bool, &'static str); 8] {
        [
            (self.odd_residue_characteristic, "odd_residue_characteristic"),
            (self.genus_divisibility, "genus_divisibility"),
            (self.primitive_root, "primitive_root"),
            (self.c_in_prime, "c_in_prime"),
            (self.c_minus_1_in_2o, "c_minus_1_in_2o"),
            (self.b_c_coprime, "b_c_coprime"),
            (self.b_2g_plus_1_coprime, "b_2g_plus_1_coprime"),
            (self.two_g_c_coprime, "two_g_c_coprime"),
        ]
    }

    pub fn is_valid(&self) -> bool {
        self.named().iter().all(|(ok, _)| *ok)
    }

    pub fn coprimality(&self) -> bool {
        self.b_c_coprime && self.b_2g_plus_1_coprime && self.two_g_c_coprime
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.named()
            .iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, name)| *name)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedQuadruple {
    pub field: ImagQuadField,
    pub omega: String,
    pub g: u32,
    pub prime: MaximalIdeal,
    pub b: OKElement,
    pub c: OKElement,
    pub conditions: GeneralizedConditions,
}

impl GeneralizedQuadruple {
    pub fn degree(&self) -> u32 {
        2 * self.g + 1
    }

    /// `(B, C)` with `U(x) = 2^n F(x/2) = x^n + Bx + C`.
    pub fn integral_model(&self) -> (OKElement, OKElement) {
        let g = self.g;
        let big_b = self.b.scale(&-(BigInt::one() << (2 * g)));
        let big_c = self.c.scale(&-(BigInt::one() << (2 * g - 1)));
        (big_b, big_c)
    }

    pub fn polynomial_string(&self) -> String {
        format!("x^{} - ({})*x - ({})/4", self.degree(), self.b, self.c)
    }
}

/// Checks the generalized conditions. `prime_gen` must generate a maximal
/// ideal of `O_K`.
pub fn check_generalized_conditions(
    k: &ImagQuadField,
    g: u32,
    ideal: &MaximalIdeal,
    b: &OKElement,
    c: &OKElement,
    budget: &FactorBudget,
) -> GeneralizedConditions {
    let odd = ideal.p.is_odd();
    let q = ideal.norm();
    let half = (&q - 1u32) / 2u32;
    let genus_divisibility = arith::prime_divisors_u64(g as u64)
        .into_iter()
        .all(|d| (&half % BigUint::from(d)).is_zero());
    let primitive_root = odd && {
        let ctx = ideal.residue_field().expect("odd prime");
        with_field!(&ctx, f => is_primitive(f, &residue_map(f, ideal, b), budget).unwrap_or(false))
    };
    let two_g_plus_1 = OKElement::from_int(2 * g + 1);
    let two_g = OKElement::from_int(2 * g);
    GeneralizedConditions {
        odd_residue_characteristic: odd,
        genus_divisibility,
        primitive_root,
        c_in_prime: ideal.contains(k, c),
        c_minus_1_in_2o: c.sub(&OKElement::one()).divisible_by_int(&BigInt::from(2)),
        b_c_coprime: coprime(k, b, c, budget).unwrap_or(false),
        b_2g_plus_1_coprime: coprime(k, b, &two_g_plus_1, budget).unwrap_or(false),
        two_g_c_coprime: coprime(k, &two_g, c, budget).unwrap_or(false),
    }
}

pub fn validate_generalized_quadruple(
    k: &ImagQuadField,
    g: u32,
    prime_gen: &OKElement,
    b: &OKElement,
    c: &OKElement,
    budget: &FactorBudget,
) -> Result<GeneralizedQuadruple, NumFieldError> {
    if g == 0 {
        return Err(NumFieldError::ZeroGenus);
    }
    let ideal = ideal_from_generator(k, prime_gen)?;
    let conditions = check_generalized_conditions(k, g, &ideal, b, c, budget);
    if !conditions.is_valid() {
        return Err(NumFieldError::Invalid(Box::new(conditions)));
    }
    Ok(GeneralizedQuadruple {
        field: *k,
        omega: k.omega_convention(),
        g,
        prime: ideal,
        b: b.clone(),
        c: c.clone(),
        conditions,
    })
}

/// Search limits for [`generate_quadruple`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationBounds {
    pub max_prime: u64,
    /// Bound on `max(|x|, |y|)` for the coordinates of `b` and `c`.
    pub max_height: u32,
}

/// Elements with `max(|x|, |y|) <= h`, by height and then lexicographically.
pub fn elements_by_height(h: u32) -> Vec<OKElement> {
    let h = h as i64;
    let mut out: Vec<(i64, i64, i64)> = (-h..=h)
        .flat_map(|x| (-h..=h).map(move |y| (x.abs().max(y.abs()), x, y)))
        .collect();
    out.sort();
    out.into_iter().map(|(_, x, y)| OKElement::new(x, y)).collect()
}

/// The first valid quadruple in scan order: rational primes `p` increasing
/// with `p = 1 mod 2g` and `p` not dividing `2g + 1`, the ideals above `p`
/// in [`splitting`] order, then `b` and `c` in [`elements_by_height`] order.
pub fn generate_quadruple(
    k: &ImagQuadField,
    g: u32,
    bounds: &GenerationBounds,
    budget: &FactorBudget,
) -> Result<GeneralizedQuadruple, NumFieldError> {
    if g == 0 {
        return Err(NumFieldError::ZeroGenus);
    }
    let n = 2 * g as u64 + 1;
    let elems = elements_by_height(bounds.max_height);
    for p in arith::primes_up_to(bounds.max_prime) {
        if p == 2 || p % (2 * g as u64) != 1 % (2 * g as u64) || n % p == 0 {
            continue;
        }
        for ideal in splitting(k, &BigUint::from(p)) {
            let ctx = ideal.residue_field()?;
            let primitive: Vec<&OKElement> = with_field!(&ctx, f => elems
                .iter()
                .filter(|b| is_primitive(f, &residue_map(f, &ideal, b), budget).unwrap_or(false))
                .collect());
            for b in primitive {
                for c in &elems {
                    if !c.sub(&OKElement::one()).divisible_by_int(&BigInt::from(2)) || !ideal.contains(k, c) {
                        continue;
                    }
                    if let Ok(q) = validate_generalized_quadruple(k, g, &ideal.generator, b, c, budget) {
                        return Ok(q);
                    }
                }
            }
        }
    }
    Err(NumFieldError::Exhausted)
}

/// Single-segment `P2`-adic polygon of `F` at an ideal `P2` above 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPolygonWitness {
    pub ideal: MaximalIdeal,
    pub ramification_index: u32,
    /// `gcd(2 e, n)`.
    pub gcd_2e_n: u64,
    pub polygon: NewtonPolygon,
    pub test: EisensteinDumas,
}

/// `F mod P = x (x^(2g) - b)` with the binomial factor irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCycleWitness {
    pub ideal: MaximalIdeal,
    pub pattern: FactorPattern,
    pub criterion: BinomialCriterion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KDiscriminant {
    pub delta: OKElement,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "D0")]
    pub d0: OKElement,
    pub d0_minus_1_in_4o: bool,
    /// `D0 = (-1)^g (2g + 1) mod 4 O_K`.
    pub d0_congruence: bool,
    #[serde(with = "crate::serde_dec")]
    pub norm_d0: BigUint,
    pub norm_prime_factors: Vec<PrimePower>,
    #[serde(with = "crate::serde_dec")]
    pub unfactored_cofactor: BigUint,
}

impl KDiscriminant {
    pub fn is_complete(&self) -> bool {
        self.unfactored_cofactor.is_one()
    }
}

/// A maximal ideal of odd residue characteristic, dividing `Delta(U)` to odd
/// order, modulo which `U` has exactly one double root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTranspositionWitness {
    pub ideal: MaximalIdeal,
    pub valuation: u32,
    pub gamma: String,
    pub gamma_in_prime_field: bool,
    pub pattern: FactorPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KIdealCheck {
    pub generator: OKElement,
    #[serde(with = "crate::serde_dec")]
    pub p: BigUint,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRamificationReport {
    pub totally_imaginary: bool,
    pub class_number: u32,
    pub two_adic_ramification_index: u32,
    /// `K(sqrt(D0))/K` is unramified above 2.
    pub quadratic_unramified_above_2: bool,
    /// Ramification index above `P2` is divisible by `n`.
    pub ramified_above_2: bool,
    /// The three ideal coprimality conditions hold, so at every odd maximal
    /// ideal `U` has at most one double root.
    pub odd_ideal_hypotheses: bool,
    /// The `A_n` part of the splitting field is unramified outside 2.
    pub alternating_part_unramified_outside_2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCertificate {
    pub field: ImagQuadField,
    pub omega: String,
    pub quadruple: GeneralizedQuadruple,
    pub degree: u32,
    pub polynomial: String,
    #[serde(rename = "B")]
    pub linear: OKElement,
    #[serde(rename = "C")]
    pub constant: OKElement,
    pub irreducibility_witness: KPolygonWitness,
    pub cycle_witness: Option<KCycleWitness>,
    pub discriminant: KDiscriminant,
    pub transposition_witness: Option<KTranspositionWitness>,
    pub transposition_checks: Vec<KIdealCheck>,
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub notes: Vec<String>,
    pub ramification_report: KRamificationReport,
    pub seed: u64,
}

/// `Delta(x^n + Bx + C) = (-1)^(n(n-1)/2) (n^n C^(n-1) + (-1)^(n-1) (n-1)^(n-1) B^n)`.
pub fn trinomial_discriminant_k(k: &ImagQuadField, n: u32, b: &OKElement, c: &OKElement) -> OKElement {
    let nn = BigInt::from(n).pow(n);
    let mm = BigInt::from(n - 1).pow(n - 1);
    let t1 = k.pow(c, n - 1).scale(&nn);
    let mut t2 = k.pow(b, n).scale(&mm);
    if (n - 1) % 2 == 1 {
        t2 = t2.neg();
    }
    let sum = t1.add(&t2);
    if (n as u64 * (n as u64 - 1) / 2) % 2 == 1 {
        sum.neg()
    } else {
        sum
    }
}

/// `D0 = (-1)^g ((2g+1)^(2g+1) c^(2g) - 2^(6g) g^(2g) b^(2g+1))`.
pub fn d0_k(k: &ImagQuadField, g: u32, b: &OKElement, c: &OKElement) -> OKElement {
    let n = 2 * g + 1;
    let t1 = k.pow(c, 2 * g).scale(&BigInt::from(n).pow(n));
    let t2 = k
        .pow(b, n)
        .scale(&((BigInt::one() << (6 * g)) * BigInt::from(g).pow(2 * g)));
    let d = t1.sub(&t2);
    if g % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

fn polygon_witness(q: &GeneralizedQuadruple) -> KPolygonWitness {
    let k = &q.field;
    let n = q.degree() as usize;
    let ideal = splitting(k, &BigUint::from(2u32)).remove(0);
    let e = ideal.ramification_index;
    let v4 = ideal.valuation(k, &OKElement::from_int(4)).unwrap() as i64;
    let mut points = vec![(0usize, ideal.valuation(k, &q.c).expect("c is nonzero") as i64 - v4)];
    if let Some(vb) = ideal.valuation(k, &q.b) {
        points.push((1, vb as i64));
    }
    points.push((n, 0));
    let polygon = NewtonPolygon::from_points(points).expect("nonzero constant term");
    let test = eisenstein_dumas(&polygon);
    KPolygonWitness {
        ideal,
        ramification_index: e,
        gcd_2e_n: (2 * e as u64).gcd(&(n as u64)),
        polygon,
        test,
    }
}

fn mod_prime_pattern(q: &GeneralizedQuadruple, seed: u64) -> Result<KCycleWitness, String> {
    let ctx = q.prime.residue_field().map_err(|e| e.to_string())?;
    let n = q.degree() as usize;
    with_field!(&ctx, f => {
        let f_bar = reduce_f(f, q);
        let factors = factor(f, &f_bar, seed).map_err(|e| e.to_string())?;
        let pattern = FactorPattern::from_factors(f, &factors);
        let criterion = binomial_criterion(f, &residue_map(f, &q.prime, &q.b), n as u64 - 1);
        if pattern.shape() != vec![(1, 1), (n - 1, 1)] || !criterion.irreducible {
            return Err(format!("pattern mod P is {:?}", pattern.shape()));
        }
        Ok(KCycleWitness { ideal: q.prime.clone(), pattern, criterion })
    })
}

/// `F mod P`, using that 4 is invertible in the residue field.
fn reduce_f<F: FiniteField>(f: &F, q: &GeneralizedQuadruple) -> crate::finfield::FqPoly<F::Elem> {
    let n = q.degree() as usize;
    let inv4 = f.inv(&f.from_i64(4)).unwrap();
    let mut coeffs = vec![f.zero(); n + 1];
    coeffs[0] = f.neg(&f.mul(&residue_map(f, &q.prime, &q.c), &inv4));
    coeffs[1] = f.neg(&residue_map(f, &q.prime, &q.b));
    coeffs[n] = f.one();
    PolyRing::new(f).from_coeffs(coeffs)
}

fn u_coeffs(n: u32, big_b: &OKElement, big_c: &OKElement) -> Vec<OKElement> {
    let mut coeffs = vec![OKElement::zero(); n as usize + 1];
    coeffs[0] = big_c.clone();
    coeffs[1] = big_b.clone();
    coeffs[n as usize] = OKElement::one();
    coeffs
}

/// The residue written over `F_p` when it lies in the prime field.
fn gamma_string<F: FiniteField>(f: &F, gamma: &F::Elem) -> (String, bool) {
    let coords = f.coords(gamma);
    if coords[1..].iter().all(|c| c.is_zero()) {
        (coords[0].to_string(), true)
    } else {
        (f.format_elem(gamma), false)
    }
}

/// The double-root check at one maximal ideal.
pub fn check_transposition_ideal(
    k: &ImagQuadField,
    n: u32,
    big_b: &OKElement,
    big_c: &OKElement,
    delta: &OKElement,
    ideal: &MaximalIdeal,
    seed: u64,
) -> Result<KTranspositionWitness, String> {
    if !ideal.p.is_odd() {
        return Err("residue characteristic 2".into());
    }
    let valuation = ideal.valuation(k, delta).ok_or("discriminant is zero")?;
    if valuation % 2 == 0 {
        return Err(format!("valuation {valuation} is even"));
    }
    let ctx = ideal.residue_field().map_err(|e| e.to_string())?;
    with_field!(&ctx, f => {
        let r = PolyRing::new(f);
        let (bb, cb) = (residue_map(f, ideal, big_b), residue_map(f, ideal, big_c));
        let hyp = f.mul(&f.from_i64(n as i64 * (n as i64 - 1)), &f.mul(&bb, &cb));
        if f.is_zero(&hyp) {
            return Err("n(n-1)BC lies in the ideal".into());
        }
        let poly = reduce_poly(f, ideal, &u_coeffs(n, big_b, big_c));
        let gamma = expected_double_root(f, n as u64, &bb, &cb).map_err(|e| e.to_string())?;
        if !f.is_zero(&r.eval(&poly, &gamma)) || !f.is_zero(&r.eval(&r.derivative(&poly), &gamma)) {
            return Err("gamma is not a double root".into());
        }
        let profile = multiplicity_profile(f, &poly, seed).map_err(|e| e.to_string())?;
        let single = matches!(profile.as_slice(),
            [m] if m.multiplicity == 2 && m.root.as_ref() == Some(&gamma));
        if !single {
            return Err("multiple-root profile is not a single double root at gamma".into());
        }
        let factors = factor(f, &poly, seed).map_err(|e| e.to_string())?;
        let pattern = FactorPattern::from_factors(f, &factors);
        let (gamma_str, in_prime_field) = gamma_string(f, &gamma);
        Ok(KTranspositionWitness {
            ideal: ideal.clone(),
            valuation,
            gamma: gamma_str,
            gamma_in_prime_field: in_prime_field,
            pattern,
        })
    })
}

fn discriminant_record(
    q: &GeneralizedQuadruple,
    delta: &OKElement,
    budget: &FactorBudget,
) -> Result<KDiscriminant, String> {
    let k = &q.field;
    let g = q.g;
    let d0 = d0_k(k, g, &q.b, &q.c);
    let m = g as u64 * (2 * g as u64 - 1);
    if d0.scale(&(BigInt::one() << (2 * m))) != *delta {
        return Err("Delta(U) differs from 2^(2M) D0".into());
    }
    let four = BigInt::from(4);
    let target = OKElement::from_int(if g % 2 == 1 { -(2 * g as i64 + 1) } else { 2 * g as i64 + 1 });
    let norm_d0 = super::ideal::abs_biguint(&k.norm(&d0));
    let fac = arith::factorize(&norm_d0, budget);
    Ok(KDiscriminant {
        delta: delta.clone(),
        m,
        d0_minus_1_in_4o: d0.sub(&OKElement::one()).divisible_by_int(&four),
        d0_congruence: d0.sub(&target).divisible_by_int(&four),
        d0,
        norm_d0,
        norm_prime_factors: fac
            .factors
            .into_iter()
            .map(|(prime, exponent)| PrimePower { prime, exponent })
            .collect(),
        unfactored_cofactor: fac.cofactor,
    })
}

fn k_ramification(
    q: &GeneralizedQuadruple,
    poly: &KPolygonWitness,
    disc: &KDiscriminant,
) -> KRamificationReport {
    let ramified_above_2 = poly.test.irreducible && poly.gcd_2e_n == 1;
    KRamificationReport {
        totally_imaginary: q.field.d() < 0,
        class_number: 1,
        two_adic_ramification_index: poly.ramification_index,
        quadratic_unramified_above_2: disc.d0_minus_1_in_4o,
        ramified_above_2,
        odd_ideal_hypotheses: q.conditions.coprimality(),
        alternating_part_unramified_outside_2: disc.d0_minus_1_in_4o && q.conditions.coprimality(),
    }
}

fn conclude(irreducible: bool, cycle: bool, transposition: bool, factored: bool) -> Conclusion {
    match (irreducible && cycle, transposition) {
        (true, true) => Conclusion::FullSymmetric,
        (true, false) if !factored => Conclusion::ConditionalFullSymmetric,
        _ => Conclusion::Inconclusive,
    }
}

/// Runs the pipeline over `K` on a validated generalized quadruple.
pub fn certify_k(q: &GeneralizedQuadruple, opts: &CertifyOptions) -> KCertificate {
    let k = &q.field;
    let n = q.degree();
    let mut notes = Vec::new();
    let irreducibility_witness = polygon_witness(q);
    let irreducible = irreducibility_witness.test.irreducible && irreducibility_witness.gcd_2e_n == 1;
    if !irreducible {
        notes.push("irreducibility: polygon test failed".into());
    }
    let cycle_witness = match mod_prime_pattern(q, opts.seed) {
        Ok(w) => Some(w),
        Err(e) => {
            notes.push(format!("cycle: {e}"));
            None
        }
    };
    let (big_b, big_c) = q.integral_model();
    let delta = trinomial_discriminant_k(k, n, &big_b, &big_c);
    let discriminant = match discriminant_record(q, &delta, &opts.budget) {
        Ok(d) => d,
        Err(e) => panic!("closed-form discriminant check failed: {e}"),
    };
    if !discriminant.d0_minus_1_in_4o {
        notes.push("hypothesis violation: D0 - 1 is not in 4O".into());
    }
    let per_prime: Vec<Vec<(MaximalIdeal, Result<KTranspositionWitness, String>)>> = discriminant
        .norm_prime_factors
        .par_iter()
        .filter(|pp| pp.prime.is_odd())
        .map(|pp| {
            splitting(k, &pp.prime)
                .into_iter()
                .map(|ideal| {
                    let res = check_transposition_ideal(k, n, &big_b, &big_c, &delta, &ideal, opts.seed);
                    (ideal, res)
                })
                .collect()
        })
        .collect();
    let results: Vec<_> = per_prime.into_iter().flatten().collect();
    let transposition_witness = results.iter().find_map(|(_, r)| r.as_ref().ok().cloned());
    if transposition_witness.is_none() {
        notes.push(format!(
            "transposition: no ideal above the known factors of N(D0) passed (unfactored cofactor {})",
            discriminant.unfactored_cofactor
        ));
    }
    let transposition_checks = results
        .into_iter()
        .map(|(ideal, r)| KIdealCheck {
            generator: ideal.generator,
            p: ideal.p,
            passed: r.is_ok(),
            failure: r.err(),
        })
        .collect();
    let conclusion = if discriminant.d0_minus_1_in_4o {
        conclude(
            irreducible,
            cycle_witness.is_some(),
            transposition_witness.is_some(),
            discriminant.is_complete(),
        )
    } else {
        Conclusion::Inconclusive
    };
    let ramification_report = k_ramification(q, &irreducibility_witness, &discriminant);
    KCertificate {
        field: *k,
        omega: k.omega_convention(),
        quadruple: q.clone(),
        degree: n,
        polynomial: q.polynomial_string(),
        linear: big_b,
        constant: big_c,
        irreducibility_witness,
        cycle_witness,
        discriminant,
        transposition_witness,
        transposition_checks,
        conclusion,
        group: (conclusion != Conclusion::Inconclusive).then(|| format!("S_{n}")),
        notes,
        ramification_report,
        seed: opts.seed,
    }
}

fn verify_transposition_k(
    k: &ImagQuadField,
    n: u32,
    big_b: &OKElement,
    big_c: &OKElement,
    delta: &OKElement,
    w: &KTranspositionWitness,
) -> Result<(), String> {
    if !arith::is_prime(&w.ideal.p).is_prime() || !splitting(k, &w.ideal.p).contains(&w.ideal) {
        return Err("not a maximal ideal of O_K".into());
    }
    if w.ideal.valuation(k, delta) != Some(w.valuation) || w.valuation % 2 == 0 {
        return Err("valuation is not the stored odd value".into());
    }
    let ctx = w.ideal.residue_field().map_err(|e| e.to_string())?;
    with_field!(&ctx, f => {
        let r = PolyRing::new(f);
        let (bb, cb) = (residue_map(f, &w.ideal, big_b), residue_map(f, &w.ideal, big_c));
        let hyp = f.mul(&f.from_i64(n as i64 * (n as i64 - 1)), &f.mul(&bb, &cb));
        if f.is_zero(&hyp) {
            return Err("n(n-1)BC lies in the ideal".into());
        }
        let poly = reduce_poly(f, &w.ideal, &u_coeffs(n, big_b, big_c));
        let gamma = expected_double_root(f, n as u64, &bb, &cb).map_err(|e| e.to_string())?;
        if gamma_string(f, &gamma) != (w.gamma.clone(), w.gamma_in_prime_field) {
            return Err("gamma differs from -nC/((n-1)B)".into());
        }
        if !f.is_zero(&r.eval(&poly, &gamma)) || !f.is_zero(&r.eval(&r.derivative(&poly), &gamma)) {
            return Err("gamma is not a double root".into());
        }
        if !w.pattern.verify(f, &poly) {
            return Err("stored factorization does not check".into());
        }
        let expected: Vec<String> = r.linear(&gamma).coeffs().iter().map(|c| f.format_elem(c)).collect();
        let repeated: Vec<_> = w.pattern.entries.iter().filter(|e| e.multiplicity > 1).collect();
        if repeated.len() != 1 || repeated[0].multiplicity != 2 || repeated[0].coeffs != expected {
            return Err("repeated part is not exactly (x - gamma)^2".into());
        }
        Ok(())
    })
}

/// Rebuilds the conclusion of a certificate over `K` from its witnesses,
/// without refactoring `N(D0)`.
pub fn verify_k(cert: &KCertificate) -> Verification {
    let mut problems = Vec::new();
    let mut check = |stage: &str, r: Result<(), String>| match r {
        Ok(()) => true,
        Err(e) => {
            problems.push(format!("{stage}: {e}"));
            false
        }
    };
    let q = &cert.quadruple;
    let k = &q.field;
    let n = q.degree();
    let input_ok = check(
        "input",
        match validate_generalized_quadruple(k, q.g, &q.prime.generator, &q.b, &q.c, &FactorBudget::default()) {
            Ok(v) if v == *q && cert.field == *k && cert.degree == n => Ok(()),
            Ok(_) => Err("stored quadruple differs from its revalidation".into()),
            Err(e) => Err(e.to_string()),
        },
    );
    let (big_b, big_c) = q.integral_model();
    let model_ok = check(
        "integral model",
        (big_b == cert.linear && big_c == cert.constant)
            .then_some(())
            .ok_or_else(|| "U differs from 2^n F(x/2)".to_string()),
    );
    let poly = polygon_witness(q);
    let irreducible = check(
        "irreducibility",
        if poly != cert.irreducibility_witness {
            Err("stored polygon differs".into())
        } else if !(poly.test.irreducible && poly.gcd_2e_n == 1) {
            Err("polygon test fails".into())
        } else {
            Ok(())
        },
    );
    let cycle = match &cert.cycle_witness {
        Some(w) => {
            let r = (|| {
                if w.ideal != q.prime {
                    return Err("cycle witness is not at P".to_string());
                }
                let ctx = q.prime.residue_field().map_err(|e| e.to_string())?;
                with_field!(&ctx, f => {
                    let f_bar = reduce_f(f, q);
                    let crit = binomial_criterion(f, &residue_map(f, &q.prime, &q.b), n as u64 - 1);
                    if w.pattern.shape() != vec![(1, 1), (n as usize - 1, 1)] || !w.pattern.verify(f, &f_bar) {
                        Err("factorization mod P does not check".to_string())
                    } else if crit != w.criterion || !crit.irreducible {
                        Err("binomial criterion does not match".to_string())
                    } else {
                        Ok(())
                    }
                })
            })();
            check("cycle", r)
        }
        None => false,
    };
    let delta = trinomial_discriminant_k(k, n, &big_b, &big_c);
    let d = &cert.discriminant;
    let d0 = d0_k(k, q.g, &q.b, &q.c);
    let disc_ok = check(
        "discriminant",
        if d.delta != delta || d.d0 != d0 || d0.scale(&(BigInt::one() << (2 * d.m))) != delta {
            Err("discriminant or D0 differs from the closed form".into())
        } else if !d.d0_minus_1_in_4o || !d0.sub(&OKElement::one()).divisible_by_int(&BigInt::from(4)) {
            Err("D0 - 1 is not in 4O".into())
        } else if d.norm_d0 != super::ideal::abs_biguint(&k.norm(&d0)) {
            Err("stored norm of D0 is wrong".into())
        } else {
            let product = d
                .norm_prime_factors
                .iter()
                .fold(d.unfactored_cofactor.clone(), |acc, pp| acc * (&pp.prime).pow(pp.exponent));
            let primes_ok = d.norm_prime_factors.iter().all(|pp| arith::is_prime(&pp.prime).is_prime());
            if product != d.norm_d0 || !primes_ok {
                Err("factorization of N(D0) does not check".into())
            } else {
                Ok(())
            }
        },
    );
    let transposition = match &cert.transposition_witness {
        Some(w) => check(
            "transposition",
            verify_transposition_k(k, n, &big_b, &big_c, &delta, w),
        ),
        None => false,
    };
    let ram_ok = check(
        "ramification",
        (k_ramification(q, &poly, d) == cert.ramification_report)
            .then_some(())
            .ok_or_else(|| "ramification report differs".to_string()),
    );
    let conclusion = if input_ok && model_ok && disc_ok && ram_ok {
        conclude(irreducible, cycle, transposition, d.is_complete())
    } else {
        Conclusion::Inconclusive
    };
    Verification {
        conclusion,
        matches_stored: conclusion == cert.conclusion,
        problems,
    }
}
