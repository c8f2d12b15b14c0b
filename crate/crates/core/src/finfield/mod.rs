//! Finite fields of odd characteristic: prime fields and their quadratic
//! extensions, dense polynomials over them, and complete factorization.
//!
//! Fields implement [`FiniteField`]; the concrete backends are [`Fp64`]
//! (moduli below 2^63, native arithmetic), [`FpBig`] (arbitrary moduli) and
//! [`Fp2`] (the extension `F[y]/(y^2 - t)` with `t` the least positive
//! non-residue). [`FqContext`] picks a backend at runtime; use
//! [`with_field!`](crate::with_field) to run generic code against it.

mod factor;
mod poly;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, FactorBudget, Primality};

pub use factor::{
    cycle_type, distinct_degree_factorization, expected_double_root, factor, factor_pattern,
    is_dth_power, is_irreducible, is_primitive, multiplicative_order, multiplicity_profile,
    reconstruct, squarefree_decomposition, FactorEntry, FactorPattern, MultipleFactor,
};
pub use poly::{FqPoly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigUint),
    #[error("extension degree {0} unsupported (only 1 and 2)")]
    UnsupportedDegree(u32),
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("could not fully factor the group order {0} within budget")]
    GroupOrderUnfactored(BigUint),
}

/// Arithmetic in a finite field of odd characteristic.
pub trait FiniteField: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn characteristic(&self) -> BigUint;
    /// Degree over the prime field.
    fn degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of an integer under `Z -> F`.
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Least nonnegative residues of the coordinates over the prime field.
    fn coords(&self, a: &Self::Elem) -> Vec<BigUint>;
    fn from_coords(&self, coords: &[BigUint]) -> Self::Elem;
    fn descriptor(&self) -> FieldDescriptor;

    fn order(&self) -> BigUint {
        self.characteristic().pow(self.degree())
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// The p-th root, i.e. the inverse of Frobenius: `a^(q/p)`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.characteristic();
        self.pow(a, &p.pow(self.degree() - 1))
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        format_coords(&self.coords(a))
    }
}

/// `a` for prime fields, `a+b*y` for quadratic extensions.
pub fn format_coords(coords: &[BigUint]) -> String {
    match coords {
        [a] => a.to_string(),
        [a, b] => format!("{a}+{b}*y"),
        _ => unreachable!("extension degree above 2"),
    }
}

/// Serializable description of a field: characteristic, degree and (for
/// degree 2) the defining polynomial `y^2 - t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    #[serde(with = "crate::serde_dec")]
    pub p: BigUint,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

fn check_odd_prime(p: &BigUint) -> Result<Primality, FieldError> {
    let status = arith::is_prime(p);
    if p.is_even() || !status.is_prime() {
        return Err(FieldError::NotOddPrime(p.clone()));
    }
    Ok(status)
}

/// Prime field with modulus below 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp64 {
    p: u64,
}

impl Fp64 {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 63 || p % 2 == 0 || !arith::is_prime_u64(p) {
            return Err(FieldError::NotOddPrime(BigUint::from(p)));
        }
        Ok(Fp64 { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl FiniteField for Fp64 {
    type Elem = u64;

    fn characteristic(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        arith::mul_mod_u64(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(arith::pow_mod_u64(*a, self.p - 2, self.p))
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        n.mod_floor(&m).to_u64().unwrap()
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn coords(&self, a: &u64) -> Vec<BigUint> {
        vec![BigUint::from(*a)]
    }
    fn from_coords(&self, coords: &[BigUint]) -> u64 {
        (&coords[0] % self.p).to_u64().unwrap()
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.characteristic(),
            k: 1,
            modulus: None,
        }
    }
    fn pow(&self, a: &u64, e: &BigUint) -> u64 {
        // Fermat: exponents only matter modulo p - 1 for nonzero bases.
        if *a == 0 {
            return if e.is_zero() { 1 } else { 0 };
        }
        let reduced = (e % (self.p - 1)).to_u64().unwrap();
        arith::pow_mod_u64(*a, reduced, self.p)
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// Prime field with an arbitrary-precision modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpBig {
    p: BigUint,
}

impl FpBig {
    pub fn new(p: BigUint) -> Result<Self, FieldError> {
        check_odd_prime(&p)?;
        Ok(FpBig { p })
    }
}

impl FiniteField for FpBig {
    type Elem = BigUint;

    fn characteristic(&self) -> BigUint {
        self.p.clone()
    }
    fn degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.p - b
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        arith::inv_mod(a, &self.p)
    }
    fn from_int(&self, n: &BigInt) -> BigUint {
        arith::mod_floor(n, &self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        rng.gen_biguint_below(&self.p)
    }
    fn coords(&self, a: &BigUint) -> Vec<BigUint> {
        vec![a.clone()]
    }
    fn from_coords(&self, coords: &[BigUint]) -> BigUint {
        &coords[0] % &self.p
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p.clone(),
            k: 1,
            modulus: None,
        }
    }
    fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }
    fn pth_root(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
}

/// Quadratic extension `F[y]/(y^2 - t)` of a prime field `F`, with `t` the
/// least positive quadratic non-residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp2<F: FiniteField> {
    base: F,
    t: F::Elem,
    t_value: BigUint,
}

impl<F: FiniteField> Fp2<F> {
    pub fn new(base: F) -> Result<Self, FieldError> {
        if base.degree() != 1 {
            return Err(FieldError::UnsupportedDegree(base.degree() * 2));
        }
        let t_value = arith::least_non_residue(&base.characteristic());
        let t = base.from_coords(&[t_value.clone()]);
        Ok(Fp2 { base, t, t_value })
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// The constant `t` in the defining polynomial `y^2 - t`.
    pub fn non_residue(&self) -> &BigUint {
        &self.t_value
    }

    pub fn embed(&self, a: F::Elem) -> (F::Elem, F::Elem) {
        (a, self.base.zero())
    }
}

impl<F: FiniteField> FiniteField for Fp2<F> {
    type Elem = (F::Elem, F::Elem);

    fn characteristic(&self) -> BigUint {
        self.base.characteristic()
    }
    fn degree(&self) -> u32 {
        2
    }
    fn zero(&self) -> Self::Elem {
        (self.base.zero(), self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.base.one(), self.base.zero())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.base;
        let ac = f.mul(&a.0, &b.0);
        let bd = f.mul(&a.1, &b.1);
        let ad = f.mul(&a.0, &b.1);
        let bc = f.mul(&a.1, &b.0);
        (f.add(&ac, &f.mul(&bd, &self.t)), f.add(&ad, &bc))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let f = &self.base;
        let norm = f.sub(&f.mul(&a.0, &a.0), &f.mul(&self.t, &f.mul(&a.1, &a.1)));
        let ni = f.inv(&norm)?;
        Some((f.mul(&a.0, &ni), f.neg(&f.mul(&a.1, &ni))))
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        (self.base.from_int(n), self.base.zero())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        (self.base.random(rng), self.base.random(rng))
    }
    fn coords(&self, a: &Self::Elem) -> Vec<BigUint> {
        let mut c = self.base.coords(&a.0);
        c.extend(self.base.coords(&a.1));
        c
    }
    fn from_coords(&self, coords: &[BigUint]) -> Self::Elem {
        (
            self.base.from_coords(&coords[..1]),
            self.base.from_coords(&coords[1..2]),
        )
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.characteristic(),
            k: 2,
            modulus: Some(format!("y^2 - {}", self.t_value)),
        }
    }
}

/// A finite field `F_q`, `q = p` or `p^2` with `p` odd, with the backend
/// chosen by the size of `p`.
#[derive(Clone, Debug)]
pub enum FqContext {
    Small(Fp64),
    Big(FpBig),
    SmallQuadratic(Fp2<Fp64>),
    BigQuadratic(Fp2<FpBig>),
}

impl FqContext {
    pub fn new(p: &BigUint, k: u32) -> Result<Self, FieldError> {
        let small = p.to_u64().filter(|&v| v < 1 << 63);
        match (k, small) {
            (1, Some(v)) => Ok(FqContext::Small(Fp64::new(v)?)),
            (1, None) => Ok(FqContext::Big(FpBig::new(p.clone())?)),
            (2, Some(v)) => Ok(FqContext::SmallQuadratic(Fp2::new(Fp64::new(v)?)?)),
            (2, None) => Ok(FqContext::BigQuadratic(Fp2::new(FpBig::new(p.clone())?)?)),
            (k, _) => Err(FieldError::UnsupportedDegree(k)),
        }
    }

    pub fn prime(p: &BigUint) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        crate::with_field!(self, f => f.descriptor())
    }

    pub fn characteristic(&self) -> BigUint {
        crate::with_field!(self, f => f.characteristic())
    }

    pub fn degree(&self) -> u32 {
        crate::with_field!(self, f => f.degree())
    }
}

/// Evaluates `$body` with `$f` bound to the concrete field inside an
/// [`FqContext`](crate::finfield::FqContext).
#[macro_export]
macro_rules! with_field {
    ($ctx:expr, $f:ident => $body:expr) => {
        match $ctx {
            $crate::finfield::FqContext::Small($f) => $body,
            $crate::finfield::FqContext::Big($f) => $body,
            $crate::finfield::FqContext::SmallQuadratic($f) => $body,
            $crate::finfield::FqContext::BigQuadratic($f) => $body,
        }
    };
}

/// Factors `q - 1` completely or fails.
pub(crate) fn group_order_factors(
    q: &BigUint,
    budget: &FactorBudget,
) -> Result<Vec<BigUint>, FieldError> {
    let order = q - 1u32;
    let f = arith::factorize(&order, budget);
    if !f.is_complete() {
        return Err(FieldError::GroupOrderUnfactored(order));
    }
    Ok(f.factors.into_iter().map(|(p, _)| p).collect())
}
