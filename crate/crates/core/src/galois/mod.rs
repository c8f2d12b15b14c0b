//! Certificates that a trinomial has Galois group `S_n`, their independent
//! re-verification, and two validation instruments: the subgroup oracle and
//! Frobenius cycle-type sampling.
//!
//! A certificate stores three witnesses: irreducibility (a 2-adic Newton
//! polygon, or a prime modulo which the polynomial stays irreducible), an
//! `(n-1)`-cycle (a factorization pattern `[1, n-1]` at an unramified prime,
//! which makes the group doubly transitive), and a transposition (a prime
//! dividing the discriminant to odd order modulo which there is exactly one
//! double root). [`verify`] rechecks each witness without refactoring the
//! discriminant.

pub mod chebotarev;
pub mod oracle;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, FactorBudget};
use crate::finfield::{
    cycle_type, expected_double_root, factor, FactorPattern, FiniteField, Fp64, FqContext,
    PolyRing,
};
use crate::intpoly::{trinomial_discriminant, IntPolynomial, PolyError, Trinomial};
use crate::mori::{
    binomial_criterion, build_trinomials, check_all_transposition_primes, d0_closed_form,
    find_transposition_prime, mod_p_pattern, validate_quadruple, BinomialCriterion,
    DiscriminantDecomposition, MoriQuadruple, TranspositionWitness,
};
use crate::padic::{eisenstein_dumas, newton_polygon_2adic, EisensteinDumas, NewtonPolygon};
use crate::{with_field, DEFAULT_SEED};

/// Final verdict of a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    /// All three witnesses verified.
    FullSymmetric,
    /// Irreducibility and the long cycle verified; no transposition prime was
    /// found because the discriminant could not be fully factored.
    ConditionalFullSymmetric,
    Inconclusive,
}

/// What was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateInput {
    Quadruple(MoriQuadruple),
    Trinomial(Trinomial),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum IrreducibilityWitness {
    /// Single-segment 2-adic Newton polygon without interior lattice points.
    NewtonPolygon {
        polygon: NewtonPolygon,
        test: EisensteinDumas,
    },
    /// A prime modulo which the polynomial is irreducible.
    FullCycle {
        #[serde(with = "crate::serde_dec")]
        prime: BigUint,
        pattern: FactorPattern,
    },
}

/// Factorization pattern `[1, n-1]` at a prime not dividing the discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongCycleWitness {
    #[serde(with = "crate::serde_dec")]
    pub prime: BigUint,
    pub pattern: FactorPattern,
    /// Independent irreducibility check of the binomial factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<BinomialCriterion>,
}

/// The double-root check at one prime of odd valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheck {
    #[serde(with = "crate::serde_dec")]
    pub ell: BigUint,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Ramification facts derived from the witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationReport {
    pub discriminant_is_square: bool,
    /// `D0 = 1 mod 4`, so `Q(sqrt(Delta))` is unramified at 2.
    pub quadratic_subfield_unramified_at_2: bool,
    /// Known odd primes ramified in `Q(sqrt(Delta))` (odd valuation).
    pub ramified_odd_primes: Vec<String>,
    /// `gcd(B, C)`, `gcd(n, B)` and `gcd(n-1, C)` are powers of 2, so at every
    /// odd prime the reduction has at most one double root and the
    /// splitting field is unramified over `Q(sqrt(Delta))` there.
    pub unramified_over_quadratic_at_odd_primes: bool,
    /// The 2-adic polygon slope has denominator `n`, forcing ramification
    /// of index divisible by `n` at 2 (quadruple inputs only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified_at_2: Option<bool>,
    /// Combining the two facts above: the `A_n` part is ramified at 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternating_part_ramified_at_2: Option<bool>,
}

/// Why double transitivity plus a transposition gives `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum GroupFactBasis {
    /// Checked over all subgroups of `S_n` by the enumeration oracle.
    SubgroupOracle { n: usize },
    /// Standard permutation-group lemma, not machine checked at this degree.
    StandardLemma { statement: String },
}

const LEMMA: &str =
    "a doubly transitive permutation group of degree n containing a transposition is S_n";

fn group_fact_basis(n: u32) -> GroupFactBasis {
    if matches!(n, 3 | 5 | 7) {
        GroupFactBasis::SubgroupOracle { n: n as usize }
    } else {
        GroupFactBasis::StandardLemma {
            statement: LEMMA.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCertificate {
    pub input: CertificateInput,
    pub degree: u32,
    /// The polynomial whose group is certified.
    pub polynomial: IntPolynomial,
    /// Its integral trinomial model `x^n + Bx + C`.
    pub integral_model: Trinomial,
    pub irreducibility_witness: Option<IrreducibilityWitness>,
    pub cycle_witness: Option<LongCycleWitness>,
    pub transposition_witness: Option<TranspositionWitness>,
    /// The double-root check at every known prime of odd valuation.
    pub transposition_checks: Vec<PrimeCheck>,
    pub discriminant: DiscriminantDecomposition,
    pub conclusion: Conclusion,
    /// `S_n` when the conclusion is not inconclusive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Failed or missing stages.
    pub notes: Vec<String>,
    pub ramification_report: RamificationReport,
    pub group_fact_basis: GroupFactBasis,
    pub seed: u64,
}

/// Knobs shared by the certifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub budget: FactorBudget,
    pub seed: u64,
    /// Search bound for the primes giving the cycle witnesses of general
    /// trinomials.
    pub prime_bound: u64,
}

pub const DEFAULT_PRIME_BOUND: u64 = 10_000;

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: FactorBudget::default(),
            seed: DEFAULT_SEED,
            prime_bound: DEFAULT_PRIME_BOUND,
        }
    }
}

fn is_power_of_two_or_one(n: &BigInt) -> bool {
    let m = n.magnitude();
    !m.is_zero() && (m & (m - 1u32)).is_zero()
}

/// Whether the three gcd conditions make every odd prime satisfy the
/// double-root hypotheses.
pub fn gcd_conditions(u: &Trinomial) -> [bool; 3] {
    let n = BigInt::from(u.n);
    let n1 = BigInt::from(u.n - 1);
    [
        is_power_of_two_or_one(&u.linear.gcd(&u.constant)),
        is_power_of_two_or_one(&n.gcd(&u.linear)),
        is_power_of_two_or_one(&n1.gcd(&u.constant)),
    ]
}

fn conclude(irreducible: bool, cycle: bool, transposition: bool, factored: bool) -> Conclusion {
    match (irreducible && cycle, transposition) {
        (true, true) => Conclusion::FullSymmetric,
        (true, false) if !factored => Conclusion::ConditionalFullSymmetric,
        _ => Conclusion::Inconclusive,
    }
}

fn group_name(n: u32, c: Conclusion) -> Option<String> {
    (c != Conclusion::Inconclusive).then(|| format!("S_{n}"))
}

fn ramification(
    u: &Trinomial,
    dec: &DiscriminantDecomposition,
    polygon: Option<&NewtonPolygon>,
) -> RamificationReport {
    let quad_unram = dec.d0.is_odd() && dec.d0_mod_4() == 1;
    let ramified_at_2 = polygon.map(|pg| {
        pg.segments.len() == 1 && *pg.segments[0].slope.denom() == u.n as i64 && u.n > 1
    });
    RamificationReport {
        discriminant_is_square: dec.is_square(),
        quadratic_subfield_unramified_at_2: quad_unram,
        ramified_odd_primes: dec
            .odd_valuation_primes()
            .iter()
            .map(|pp| pp.prime.to_string())
            .collect(),
        unramified_over_quadratic_at_odd_primes: gcd_conditions(u).iter().all(|&b| b),
        ramified_at_2,
        alternating_part_ramified_at_2: ramified_at_2.map(|r| r && quad_unram),
    }
}

fn prime_checks(u: &Trinomial, dec: &DiscriminantDecomposition, seed: u64) -> Vec<PrimeCheck> {
    check_all_transposition_primes(u, dec, seed)
        .into_iter()
        .map(|(ell, res)| match res {
            Ok(w) => PrimeCheck {
                ell,
                passed: true,
                gamma: Some(w.gamma.to_string()),
                failure: None,
            },
            Err(e) => PrimeCheck {
                ell,
                passed: false,
                gamma: None,
                failure: Some(e.to_string()),
            },
        })
        .collect()
}

/// Runs the full pipeline on a validated quadruple.
pub fn certify(q: &MoriQuadruple, opts: &CertifyOptions) -> GaloisCertificate {
    let (f, u) = build_trinomials(q);
    let n = q.degree();
    let mut notes = Vec::new();

    let polygon = newton_polygon_2adic(&f).expect("constant term -pc/4 is nonzero");
    let test = eisenstein_dumas(&polygon);
    let irreducible = test.irreducible;
    if !irreducible {
        notes.push("irreducibility: 2-adic polygon test failed".into());
    }

    let cycle_witness = match mod_p_pattern(q, opts.seed) {
        Ok(w) => Some(LongCycleWitness {
            prime: w.p,
            pattern: w.pattern,
            criterion: Some(w.criterion),
        }),
        Err(e) => {
            notes.push(format!("cycle: {e}"));
            None
        }
    };

    let dec = match d0_closed_form(q, &opts.budget) {
        Ok(d) => d,
        Err(e) => {
            notes.push(format!("discriminant: {e}"));
            DiscriminantDecomposition::new(u.discriminant(), &opts.budget)
        }
    };

    let transposition_witness = match find_transposition_prime(&u, &dec, Some(&q.p), opts.seed) {
        Ok(w) => Some(w),
        Err(e) => {
            notes.push(format!("transposition: {e}"));
            None
        }
    };
    let transposition_checks = prime_checks(&u, &dec, opts.seed);

    let conclusion = conclude(
        irreducible,
        cycle_witness.is_some(),
        transposition_witness.is_some(),
        dec.is_complete(),
    );
    let ramification_report = ramification(&u, &dec, Some(&polygon));
    GaloisCertificate {
        input: CertificateInput::Quadruple(q.clone()),
        degree: n,
        polynomial: f,
        integral_model: u,
        irreducibility_witness: Some(IrreducibilityWitness::NewtonPolygon { polygon, test }),
        cycle_witness,
        transposition_witness,
        transposition_checks,
        discriminant: dec,
        conclusion,
        group: group_name(n, conclusion),
        notes,
        ramification_report,
        group_fact_basis: group_fact_basis(n),
        seed: opts.seed,
    }
}

/// Per-condition outcome of the gate for general trinomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub squarefree: bool,
    pub gcd_b_c_power_of_2: bool,
    pub gcd_n_b_power_of_2: bool,
    pub gcd_n_minus_1_c_power_of_2: bool,
    /// `Delta = 2^(2M) D0` with `D0 = 1 mod 4`.
    pub discriminant_form: bool,
    pub discriminant_not_square: bool,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.squarefree
            && self.gcd_b_c_power_of_2
            && self.gcd_n_b_power_of_2
            && self.gcd_n_minus_1_c_power_of_2
            && self.discriminant_form
            && self.discriminant_not_square
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.squarefree, "squarefree"),
            (self.gcd_b_c_power_of_2, "gcd_b_c_power_of_2"),
            (self.gcd_n_b_power_of_2, "gcd_n_b_power_of_2"),
            (self.gcd_n_minus_1_c_power_of_2, "gcd_n_minus_1_c_power_of_2"),
            (self.discriminant_form, "discriminant_form"),
            (self.discriminant_not_square, "discriminant_not_square"),
        ]
        .iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| *name)
        .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrinomialError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("hypotheses fail: {}", .0.failures().join(", "))]
    Hypotheses(Box<HypothesisReport>),
}

pub fn check_hypotheses(u: &Trinomial) -> HypothesisReport {
    let delta = u.discriminant();
    let [g1, g2, g3] = gcd_conditions(u);
    let form = !delta.is_zero() && {
        let v = arith::v2(&delta);
        v % 2 == 0 && (&delta >> v).mod_floor(&BigInt::from(4)).is_one()
    };
    HypothesisReport {
        squarefree: !delta.is_zero(),
        gcd_b_c_power_of_2: g1,
        gcd_n_b_power_of_2: g2,
        gcd_n_minus_1_c_power_of_2: g3,
        discriminant_form: form,
        discriminant_not_square: !arith::is_perfect_square(&delta),
    }
}

/// First odd prime `q <= bound`, `q` not dividing `delta`, at which `u mod q`
/// has the given cycle type.
fn scan_for_pattern(
    u: &Trinomial,
    delta: &BigInt,
    wanted: &[usize],
    bound: u64,
    seed: u64,
) -> Option<(BigUint, FactorPattern)> {
    let poly = u.to_poly();
    arith::primes_up_to(bound)
        .into_iter()
        .filter(|&q| q > 2 && !(delta % BigInt::from(q)).is_zero())
        .find_map(|q| {
            let field = Fp64::new(q).unwrap();
            let red = poly.reduce_mod(&field);
            (cycle_type(&field, &red)? == wanted).then(|| {
                let pat = FactorPattern::from_factors(&field, &factor(&field, &red, seed).unwrap());
                (BigUint::from(q), pat)
            })
        })
}

/// Certifies `x^n + Bx + C` under the gcd and discriminant hypotheses. The
/// `(n-1)`-cycle and irreducibility are found by scanning primes up to
/// `opts.prime_bound`; without them the conclusion is inconclusive even
/// when the transposition is certified.
pub fn certify_general_trinomial(
    n: u32,
    b: &BigInt,
    c: &BigInt,
    opts: &CertifyOptions,
) -> Result<GaloisCertificate, TrinomialError> {
    let u = Trinomial::new(n, b.clone(), c.clone())?;
    let report = check_hypotheses(&u);
    if !report.holds() {
        return Err(TrinomialError::Hypotheses(Box::new(report)));
    }
    let delta = u.discriminant();
    let dec = DiscriminantDecomposition::new(delta.clone(), &opts.budget);
    let mut notes = Vec::new();

    let full: Vec<usize> = vec![n as usize];
    let long: Vec<usize> = if n == 2 { vec![1, 1] } else { vec![1, n as usize - 1] };
    let irreducibility_witness = scan_for_pattern(&u, &delta, &full, opts.prime_bound, opts.seed)
        .map(|(prime, pattern)| IrreducibilityWitness::FullCycle { prime, pattern });
    if irreducibility_witness.is_none() {
        notes.push(format!("irreducibility: no prime below {} keeps u irreducible", opts.prime_bound));
    }
    let cycle_witness = scan_for_pattern(&u, &delta, &long, opts.prime_bound, opts.seed).map(
        |(prime, pattern)| LongCycleWitness {
            prime,
            pattern,
            criterion: None,
        },
    );
    if cycle_witness.is_none() {
        notes.push(format!(
            "transposition certified; S_{n} conditional on double transitivity (no (n-1)-cycle below {})",
            opts.prime_bound
        ));
    }
    let transposition_witness = match find_transposition_prime(&u, &dec, None, opts.seed) {
        Ok(w) => Some(w),
        Err(e) => {
            notes.push(format!("transposition: {e}"));
            None
        }
    };
    let transposition_checks = prime_checks(&u, &dec, opts.seed);
    let conclusion = conclude(
        irreducibility_witness.is_some(),
        cycle_witness.is_some(),
        transposition_witness.is_some(),
        dec.is_complete(),
    );
    let ramification_report = ramification(&u, &dec, None);
    Ok(GaloisCertificate {
        input: CertificateInput::Trinomial(u.clone()),
        degree: n,
        polynomial: u.to_poly(),
        integral_model: u,
        irreducibility_witness,
        cycle_witness,
        transposition_witness,
        transposition_checks,
        discriminant: dec,
        conclusion,
        group: group_name(n, conclusion),
        notes,
        ramification_report,
        group_fact_basis: group_fact_basis(n),
        seed: opts.seed,
    })
}

/// Outcome of re-checking a certificate from its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub conclusion: Conclusion,
    pub matches_stored: bool,
    pub problems: Vec<String>,
}

impl Verification {
    pub fn is_sound(&self) -> bool {
        self.matches_stored && self.problems.is_empty()
    }
}

/// Checks a stored transposition witness for `u`: `ell` is an odd prime
/// dividing `delta` to the stated odd order, `gamma` is the predicted double
/// root, and the stored factorization of `u mod ell` is correct with exactly
/// one repeated factor, `x - gamma` squared.
pub fn verify_transposition(
    u: &Trinomial,
    delta: &BigInt,
    w: &TranspositionWitness,
) -> Result<(), String> {
    let ctx = FqContext::prime(&w.ell).map_err(|e| e.to_string())?;
    let ell = BigInt::from(w.ell.clone());
    if delta.is_zero() || arith::valuation(delta, &ell) != w.valuation || w.valuation % 2 == 0 {
        return Err(format!("v_{}(Delta) is not the stored odd valuation", w.ell));
    }
    with_field!(&ctx, f => {
        let r = PolyRing::new(f);
        let poly = u.to_poly().reduce_mod(f);
        let gamma = f.from_coords(&[w.gamma.clone()]);
        if f.coords(&gamma)[0] != w.gamma || f.is_zero(&gamma) {
            return Err("gamma is not a nonzero reduced residue".into());
        }
        let predicted = expected_double_root(f, u.n as u64, &f.from_int(&u.linear), &f.from_int(&u.constant))
            .map_err(|e| e.to_string())?;
        if predicted != gamma {
            return Err("gamma differs from -nC/((n-1)B)".into());
        }
        if !f.is_zero(&r.eval(&poly, &gamma)) || !f.is_zero(&r.eval(&r.derivative(&poly), &gamma)) {
            return Err("gamma is not a double root".into());
        }
        if !w.pattern.verify(f, &poly) {
            return Err("stored factorization mod ell does not check".into());
        }
        let repeated: Vec<_> = w.pattern.entries.iter().filter(|e| e.multiplicity > 1).collect();
        let linear = r.linear(&gamma);
        let expected_coeffs: Vec<String> = linear.coeffs().iter().map(|c| f.format_elem(c)).collect();
        if repeated.len() != 1 || repeated[0].multiplicity != 2 || repeated[0].coeffs != expected_coeffs {
            return Err("repeated part is not exactly (x - gamma)^2".into());
        }
        Ok(())
    })
}

fn verify_pattern_at(
    prime: &BigUint,
    poly: &IntPolynomial,
    pattern: &FactorPattern,
    shape: &[(usize, u32)],
) -> Result<(), String> {
    let ctx = FqContext::prime(prime).map_err(|e| e.to_string())?;
    with_field!(&ctx, f => {
        let red = poly.reduce_mod(f);
        if pattern.shape() != shape {
            return Err(format!("pattern mod {prime} has shape {:?}", pattern.shape()));
        }
        if !pattern.verify(f, &red) {
            return Err(format!("factorization mod {prime} does not check"));
        }
        Ok(())
    })
}

fn verify_decomposition(dec: &DiscriminantDecomposition, delta: &BigInt) -> Result<(), String> {
    if dec.delta != *delta {
        return Err("stored discriminant differs from the closed form".into());
    }
    if !dec.is_consistent() {
        return Err("discriminant factors do not multiply back".into());
    }
    if dec
        .known_prime_factors
        .iter()
        .any(|pp| !arith::is_prime(&pp.prime).is_prime())
    {
        return Err("a listed discriminant factor is composite".into());
    }
    Ok(())
}

/// Rebuilds the conclusion of a certificate from its witnesses alone.
pub fn verify(cert: &GaloisCertificate) -> Verification {
    let mut problems = Vec::new();
    let mut check = |stage: &str, r: Result<(), String>| match r {
        Ok(()) => true,
        Err(e) => {
            problems.push(format!("{stage}: {e}"));
            false
        }
    };
    let u = &cert.integral_model;
    let n = u.n;
    let delta = trinomial_discriminant(n, &u.linear, &u.constant).unwrap_or_default();

    let (input_ok, polynomial) = match &cert.input {
        CertificateInput::Quadruple(q) => {
            let revalidated = validate_quadruple(q.g, &q.p_int(), &q.b, &q.c, &FactorBudget::default());
            let ok = match revalidated {
                Ok(v) if v == *q => {
                    let (f, ut) = build_trinomials(q);
                    if ut != *u || f != cert.polynomial {
                        Err("polynomials do not match the quadruple".to_string())
                    } else {
                        Ok(())
                    }
                }
                Ok(_) => Err("stored validation record differs".into()),
                Err(e) => Err(e.to_string()),
            };
            (check("input", ok), cert.polynomial.clone())
        }
        CertificateInput::Trinomial(t) => {
            let report = check_hypotheses(t);
            let ok = if t != u || cert.polynomial != u.to_poly() {
                Err("polynomials do not match the trinomial".to_string())
            } else if !report.holds() {
                Err(format!("hypotheses fail: {}", report.failures().join(", ")))
            } else {
                Ok(())
            };
            (check("input", ok), u.to_poly())
        }
    };

    let irreducible = match &cert.irreducibility_witness {
        Some(IrreducibilityWitness::NewtonPolygon { polygon, test }) => {
            let r = match newton_polygon_2adic(&polynomial) {
                Ok(pg) if pg == *polygon => {
                    let t = eisenstein_dumas(&pg);
                    if t == *test && t.irreducible {
                        Ok(())
                    } else {
                        Err("polygon test does not certify irreducibility".to_string())
                    }
                }
                Ok(_) => Err("stored polygon differs from the recomputed one".into()),
                Err(e) => Err(e.to_string()),
            };
            check("irreducibility", r)
        }
        Some(IrreducibilityWitness::FullCycle { prime, pattern }) => {
            let r = verify_pattern_at(prime, &polynomial, pattern, &[(n as usize, 1)]);
            check("irreducibility", r)
        }
        None => false,
    };

    let cycle = match &cert.cycle_witness {
        Some(w) => {
            let mut r = verify_pattern_at(&w.prime, &polynomial, &w.pattern, &[(1, 1), (n as usize - 1, 1)]);
            if r.is_ok() && (&delta % BigInt::from(w.prime.clone())).is_zero() {
                r = Err(format!("{} divides the discriminant", w.prime));
            }
            if let (Ok(()), CertificateInput::Quadruple(q)) = (&r, &cert.input) {
                r = if w.prime != q.p {
                    Err("cycle witness is not at p".into())
                } else {
                    let ctx = FqContext::prime(&q.p).unwrap();
                    let crit = with_field!(&ctx, f => binomial_criterion(f, &f.from_int(&q.b), n as u64 - 1));
                    if Some(&crit) == w.criterion.as_ref() && crit.irreducible {
                        Ok(())
                    } else {
                        Err("binomial criterion does not match".into())
                    }
                };
            }
            check("cycle", r)
        }
        None => false,
    };

    let dec_ok = check("discriminant", verify_decomposition(&cert.discriminant, &delta));

    let transposition = match &cert.transposition_witness {
        Some(w) => {
            let mut r = verify_transposition(u, &delta, w);
            if let CertificateInput::Quadruple(q) = &cert.input {
                if w.ell == q.p {
                    r = Err("ell equals p".into());
                }
            }
            check("transposition", r)
        }
        None => false,
    };

    let report = ramification(
        u,
        &cert.discriminant,
        match &cert.irreducibility_witness {
            Some(IrreducibilityWitness::NewtonPolygon { polygon, .. }) => Some(polygon),
            _ => None,
        },
    );
    let ram_ok = check(
        "ramification",
        (report == cert.ramification_report)
            .then_some(())
            .ok_or_else(|| "ramification report differs".to_string()),
    );

    let conclusion = if input_ok && dec_ok && ram_ok {
        conclude(irreducible, cycle, transposition, cert.discriminant.is_complete())
    } else {
        Conclusion::Inconclusive
    };
    Verification {
        conclusion,
        matches_stored: conclusion == cert.conclusion,
        problems,
    }
}
