use num_bigint::{BigInt, BigUint};

use super::FiniteField;

/// Dense polynomial over a finite field, constant term first, no trailing
/// zeros (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqPoly<E> {
    coeffs: Vec<E>,
}

impl<E> FqPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Polynomial arithmetic over a fixed field.
#[derive(Clone, Copy, Debug)]
pub struct PolyRing<'a, F: FiniteField> {
    field: &'a F,
}

impl<'a, F: FiniteField> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &'a F {
        self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> FqPoly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn from_ints(&self, coeffs: &[BigInt]) -> FqPoly<F::Elem> {
        self.from_coeffs(coeffs.iter().map(|c| self.field.from_int(c)).collect())
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> FqPoly<F::Elem> {
        self.from_coeffs(coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn zero(&self) -> FqPoly<F::Elem> {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn constant(&self, c: F::Elem) -> FqPoly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn one(&self) -> FqPoly<F::Elem> {
        self.constant(self.field.one())
    }

    /// `c * x^k`
    pub fn monomial(&self, c: F::Elem, k: usize) -> FqPoly<F::Elem> {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.push(c);
        self.from_coeffs(coeffs)
    }

    pub fn x(&self) -> FqPoly<F::Elem> {
        self.monomial(self.field.one(), 1)
    }

    /// The monic linear polynomial `x - r`.
    pub fn linear(&self, root: &F::Elem) -> FqPoly<F::Elem> {
        self.from_coeffs(vec![self.field.neg(root), self.field.one()])
    }

    pub fn is_one(&self, a: &FqPoly<F::Elem>) -> bool {
        a.coeffs.len() == 1 && a.coeffs[0] == self.field.one()
    }

    pub fn add(&self, a: &FqPoly<F::Elem>, b: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        let f = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = f.zero();
        let coeffs = (0..n)
            .map(|i| {
                f.add(
                    a.coeffs.get(i).unwrap_or(&zero),
                    b.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn sub(&self, a: &FqPoly<F::Elem>, b: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        FqPoly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn scale(&self, a: &FqPoly<F::Elem>, c: &F::Elem) -> FqPoly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &FqPoly<F::Elem>, b: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = self.field;
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    pub fn pow(&self, a: &FqPoly<F::Elem>, e: u32) -> FqPoly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(
        &self,
        a: &FqPoly<F::Elem>,
        b: &FqPoly<F::Elem>,
    ) -> (FqPoly<F::Elem>, FqPoly<F::Elem>) {
        let f = self.field;
        let db = b.degree().expect("polynomial division by zero");
        let lead_inv = f.inv(b.leading().unwrap()).unwrap();
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul(&rem[i], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                let k = i - db + j;
                rem[k] = f.sub(&rem[k], &f.mul(&c, bc));
            }
            quot[i - db] = c;
        }
        rem.truncate(db);
        (self.from_coeffs(quot), self.from_coeffs(rem))
    }

    pub fn rem(&self, a: &FqPoly<F::Elem>, b: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        self.divrem(a, b).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, a: &FqPoly<F::Elem>, b: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, a: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        match a.leading() {
            None => self.zero(),
            Some(lc) => self.scale(a, &self.field.inv(lc).unwrap()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, a: &FqPoly<F::Elem>, b: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        let f = self.field;
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn eval(&self, a: &FqPoly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn mulmod(
        &self,
        a: &FqPoly<F::Elem>,
        b: &FqPoly<F::Elem>,
        m: &FqPoly<F::Elem>,
    ) -> FqPoly<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    /// `base^e mod m`
    pub fn powmod(
        &self,
        base: &FqPoly<F::Elem>,
        e: &BigUint,
        m: &FqPoly<F::Elem>,
    ) -> FqPoly<F::Elem> {
        let base = self.rem(base, m);
        let mut acc = self.rem(&self.one(), m);
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    /// `a(s * x)`
    pub fn scale_variable(&self, a: &FqPoly<F::Elem>, s: &F::Elem) -> FqPoly<F::Elem> {
        let f = self.field;
        let mut power = f.one();
        let mut coeffs = Vec::with_capacity(a.coeffs.len());
        for c in &a.coeffs {
            coeffs.push(f.mul(c, &power));
            power = f.mul(&power, s);
        }
        self.from_coeffs(coeffs)
    }

    /// For `a` with every exponent divisible by p, the unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: &FqPoly<F::Elem>) -> FqPoly<F::Elem> {
        let f = self.field;
        let step = usize::try_from(&f.characteristic())
            .ok()
            .filter(|&p| p < a.coeffs.len())
            .unwrap_or(a.coeffs.len().max(1));
        let coeffs = a.coeffs.iter().step_by(step).map(|c| f.pth_root(c)).collect();
        self.from_coeffs(coeffs)
    }
}
