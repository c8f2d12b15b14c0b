//! Maximal ideals of `O_K`, prime splitting and reduction to residue fields.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ImagQuadField, NumFieldError, OKElement};
use crate::arith;
use crate::finfield::{FieldError, FiniteField, FqContext, FqPoly, PolyRing};

/// A maximal ideal `(generator)` of `O_K` above the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalIdeal {
    #[serde(with = "crate::serde_dec")]
    pub p: BigUint,
    pub residue_degree: u32,
    pub ramification_index: u32,
    pub generator: OKElement,
    /// Image of `w` in the residue field as coordinates over `F_p`: one for
    /// degree 1, two in the basis `1, y` of `F_p[y]/(y^2 - t)` for degree 2.
    /// Empty for the inert prime 2, whose residue field is not modelled.
    #[serde(with = "crate::serde_dec::vec")]
    pub omega_image: Vec<BigUint>,
}

impl MaximalIdeal {
    /// `|O_K / P| = p^k`.
    pub fn norm(&self) -> BigUint {
        self.p.pow(self.residue_degree)
    }

    pub fn has_residue_map(&self) -> bool {
        self.p.is_odd() && !self.omega_image.is_empty()
    }

    /// The residue field, for odd `p`.
    pub fn residue_field(&self) -> Result<FqContext, FieldError> {
        FqContext::new(&self.p, self.residue_degree)
    }

    /// Membership, through the residue map when available and by exact
    /// division by the generator otherwise.
    pub fn contains(&self, k: &ImagQuadField, x: &OKElement) -> bool {
        if self.has_residue_map() {
            let ctx = self.residue_field().expect("odd prime");
            crate::with_field!(&ctx, f => f.is_zero(&residue_map(f, self, x)))
        } else {
            k.divides(&self.generator, x)
        }
    }

    /// `v_P(x)`, `None` for `x = 0`.
    pub fn valuation(&self, k: &ImagQuadField, x: &OKElement) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = x.clone();
        while let Some(q) = k.div_exact(&cur, &self.generator) {
            cur = q;
            v += 1;
        }
        Some(v)
    }
}

/// The ring homomorphism `O_K -> O_K / P`.
pub fn residue_map<F: FiniteField>(field: &F, ideal: &MaximalIdeal, x: &OKElement) -> F::Elem {
    let w = field.from_coords(&ideal.omega_image);
    field.add(&field.from_int(&x.x), &field.mul(&field.from_int(&x.y), &w))
}

/// Reduces a polynomial with coefficients in `O_K` (constant term first).
pub fn reduce_poly<F: FiniteField>(
    field: &F,
    ideal: &MaximalIdeal,
    coeffs: &[OKElement],
) -> FqPoly<F::Elem> {
    PolyRing::new(field).from_coeffs(coeffs.iter().map(|c| residue_map(field, ideal, c)).collect())
}

/// `floor(a / b + 1/2)` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let num: BigInt = 2 * a + b;
    num.div_floor(&(2 * b))
}

/// A generator of `(p, w - r)` from a Gauss-reduced basis of the lattice,
/// whose shortest vector has norm `p` because `O_K` is a PID.
fn lattice_generator(k: &ImagQuadField, p: &BigInt, r: &BigInt) -> OKElement {
    let q = |v: &OKElement| k.norm(v);
    let b2 = |u: &OKElement, v: &OKElement| q(&u.add(v)) - q(u) - q(v);
    let mut v1 = OKElement::from_int(p.clone());
    let mut v2 = OKElement::new(-r, 1);
    loop {
        if q(&v1) > q(&v2) {
            std::mem::swap(&mut v1, &mut v2);
        }
        let m = round_div(&b2(&v1, &v2), &(2 * q(&v1)));
        if m.is_zero() {
            break;
        }
        v2 = v2.sub(&v1.scale(&m));
    }
    assert_eq!(&q(&v1), p, "shortest lattice vector must have norm p");
    k.canonical_associate(&v1)
}

/// Roots of `X^2 - tX + n` modulo `p`, ascending.
fn omega_roots_mod(k: &ImagQuadField, p: &BigUint) -> Vec<BigUint> {
    let pi = BigInt::from(p.clone());
    if let Some(small) = p.to_u64().filter(|&v| v <= 3) {
        return (0..small)
            .map(BigInt::from)
            .filter(|x| (x * x - k.omega_trace() * x + k.omega_norm()).is_multiple_of(&pi))
            .map(|x| x.to_biguint().unwrap())
            .collect();
    }
    let inv2 = arith::inv_mod(&BigUint::from(2u32), p).unwrap();
    let t = arith::mod_floor(&k.omega_trace(), p);
    let Some(s) = arith::sqrt_mod(&k.discriminant(), p) else {
        return Vec::new();
    };
    let mut roots: Vec<BigUint> = [(&t + &s) % p, (&t + p - &s) % p]
        .into_iter()
        .map(|x| x * &inv2 % p)
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// The maximal ideals above `p`: two of degree 1 when `p` splits, `(p)` of
/// degree 2 when inert, one of ramification index 2 when `p` divides the
/// field discriminant. Split ideals are listed by decreasing generator.
pub fn splitting(k: &ImagQuadField, p: &BigUint) -> Vec<MaximalIdeal> {
    let disc = k.discriminant();
    let symbol = if p == &BigUint::from(2u32) {
        arith::kronecker_at_two(&disc)
    } else {
        arith::legendre(&disc, p)
    };
    let pi = BigInt::from(p.clone());
    match symbol {
        -1 => {
            let omega_image = if p.is_odd() {
                // w = (t + sqrt(disc)) / 2 and sqrt(disc) = s * y with s^2 = disc / t0.
                let t0 = arith::least_non_residue(p);
                let ratio = arith::mod_floor(&disc, p) * arith::inv_mod(&t0, p).unwrap() % p;
                let s = arith::sqrt_mod(&BigInt::from(ratio), p).expect("disc / t0 is a square");
                let inv2 = arith::inv_mod(&BigUint::from(2u32), p).unwrap();
                let t = arith::mod_floor(&k.omega_trace(), p);
                vec![t * &inv2 % p, s * &inv2 % p]
            } else {
                Vec::new()
            };
            vec![MaximalIdeal {
                p: p.clone(),
                residue_degree: 2,
                ramification_index: 1,
                generator: OKElement::from_int(pi),
                omega_image,
            }]
        }
        0 => {
            let r = omega_roots_mod(k, p).remove(0);
            vec![MaximalIdeal {
                p: p.clone(),
                residue_degree: 1,
                ramification_index: 2,
                generator: lattice_generator(k, &pi, &BigInt::from(r.clone())),
                omega_image: vec![r],
            }]
        }
        _ => {
            let mut ideals: Vec<MaximalIdeal> = omega_roots_mod(k, p)
                .into_iter()
                .map(|r| MaximalIdeal {
                    p: p.clone(),
                    residue_degree: 1,
                    ramification_index: 1,
                    generator: lattice_generator(k, &pi, &BigInt::from(r.clone())),
                    omega_image: vec![r],
                })
                .collect();
            ideals.sort_by(|a, b| (&b.generator.x, &b.generator.y).cmp(&(&a.generator.x, &a.generator.y)));
            ideals
        }
    }
}

/// The maximal ideal generated by `gen`, when it is one.
pub fn ideal_from_generator(
    k: &ImagQuadField,
    gen: &OKElement,
) -> Result<MaximalIdeal, NumFieldError> {
    let bad = || NumFieldError::NotPrimeElement(gen.to_string());
    let n = k.norm(gen);
    let n = n.to_biguint().filter(|n| !n.is_zero()).ok_or_else(bad)?;
    if arith::is_prime(&n).is_prime() {
        return splitting(k, &n)
            .into_iter()
            .find(|i| i.residue_degree == 1 && k.divides(&i.generator, gen) && k.divides(gen, &i.generator))
            .ok_or_else(bad);
    }
    let root = n.sqrt();
    if &root * &root == n && arith::is_prime(&root).is_prime() {
        let ideals = splitting(k, &root);
        if let [inert] = ideals.as_slice() {
            if inert.residue_degree == 2 && k.divides(gen, &inert.generator) {
                return Ok(inert.clone());
            }
        }
    }
    Err(bad())
}

/// Whether `a O_K + b O_K = O_K`: no maximal ideal above a common prime
/// divisor of the norms contains both. `None` when the gcd of the norms
/// cannot be factored within the budget.
pub fn coprime(
    k: &ImagQuadField,
    a: &OKElement,
    b: &OKElement,
    budget: &arith::FactorBudget,
) -> Option<bool> {
    let g = k.norm(a).gcd(&k.norm(b));
    if g.is_zero() {
        return Some(false);
    }
    if g.is_one() {
        return Some(true);
    }
    let fac = arith::factorize(g.magnitude(), budget);
    if !fac.is_complete() {
        return None;
    }
    Some(fac.factors.iter().all(|(ell, _)| {
        splitting(k, ell)
            .iter()
            .all(|i| !(i.contains(k, a) && i.contains(k, b)))
    }))
}

/// `|x|` as a natural number.
pub(crate) fn abs_biguint(x: &BigInt) -> BigUint {
    x.abs().to_biguint().unwrap()
}
