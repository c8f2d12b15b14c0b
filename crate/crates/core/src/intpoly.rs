//! Univariate polynomials over `Z[1/2]`: integer numerators over a common
//! power-of-two denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::finfield::{FiniteField, FqPoly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("denominator {0} is not a power of 2")]
    NonDyadicDenominator(BigInt),
    #[error("operation needs a polynomial of degree at least 1")]
    Constant,
    #[error("trinomial degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("trinomial coefficients B and C must be nonzero")]
    ZeroCoefficient,
    #[error("scale factor must be positive")]
    ZeroScale,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial with denominator 2^{0} is not reducible at 2")]
    NotReducibleAtTwo(u32),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// `(a_0 + a_1 x + ... + a_n x^n) / 2^e`, normalized so that `e = 0` or some
/// `a_i` is odd, with no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
    denom_exp: u32,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>, mut denom_exp: u32) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return IntPolynomial {
                coeffs,
                denom_exp: 0,
            };
        }
        let twos = coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(arith::v2)
            .min()
            .unwrap()
            .min(denom_exp);
        if twos > 0 {
            for c in &mut coeffs {
                *c >>= twos;
            }
            denom_exp -= twos;
        }
        IntPolynomial { coeffs, denom_exp }
    }

    pub fn from_ints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs, 0)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_ints(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Rejects any coefficient whose reduced denominator is not a power of 2.
    pub fn from_rationals(coeffs: &[BigRational]) -> Result<Self, PolyError> {
        let mut e = 0;
        for c in coeffs {
            let d = c.denom();
            let k = arith::v2(d);
            if (d >> k) != BigInt::one() {
                return Err(PolyError::NonDyadicDenominator(d.clone()));
            }
            e = e.max(k as u32);
        }
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (BigInt::from(1) << e) / c.denom())
            .collect();
        Ok(Self::new(nums, e))
    }

    /// `x^n + b x + c`
    pub fn trinomial(n: u32, b: &BigInt, c: &BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); n as usize + 1];
        coeffs[n as usize] = BigInt::one();
        coeffs[1] += b;
        coeffs[0] += c;
        Self::from_ints(coeffs)
    }

    /// Numerators `a_i`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.denom_exp == 0
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::one() << self.denom_exp
    }

    /// The true coefficient `a_i / 2^e`.
    pub fn coeff(&self, i: usize) -> BigRational {
        let a = self.coeffs.get(i).cloned().unwrap_or_default();
        BigRational::new(a, self.denominator())
    }

    pub fn leading(&self) -> Option<BigRational> {
        self.degree().map(|n| self.coeff(n))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&self.denominator())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from(c.clone()));
        acc / BigRational::from(self.denominator())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::new(coeffs, self.denom_exp)
    }

    /// Gcd of the numerators (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Numerators divided by their content, as a polynomial in `Z[x]` with
    /// positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.coeffs.last().unwrap().is_negative() {
            g = -g;
        }
        Self::from_ints(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            denom_exp: self.denom_exp,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.denom_exp.max(other.denom_exp);
        let (sa, sb) = (e - self.denom_exp, e - other.denom_exp);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default() << sa;
                let b = other.coeffs.get(i).cloned().unwrap_or_default() << sb;
                a + b
            })
            .collect();
        Self::new(coeffs, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new(), 0);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out, self.denom_exp + other.denom_exp)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.denom_exp)
    }

    /// Pseudo-division in `Z[x]`: `lc(b)^(m-n+1) a = q b + r`, `deg r < deg b`.
    /// Both inputs must be integral; panics if `b` is zero.
    pub fn pseudo_divrem(&self, b: &Self) -> (Self, Self) {
        assert!(self.is_integral() && b.is_integral());
        let n = b.degree().expect("pseudo-division by zero");
        let lc = b.coeffs.last().unwrap();
        let Some(m) = self.degree().filter(|&m| m >= n) else {
            return (Self::from_ints(Vec::new()), self.clone());
        };
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); m - n + 1];
        for i in (n..=m).rev() {
            let t = r[i].clone();
            for c in q.iter_mut() {
                *c *= lc;
            }
            for c in r.iter_mut() {
                *c *= lc;
            }
            q[i - n] += &t;
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[i - n + j] -= &t * bc;
            }
        }
        r.truncate(n);
        (Self::from_ints(q), Self::from_ints(r))
    }

    /// `s^n f(x/s)` for monic `f` of degree `n`.
    pub fn scale_substitute(&self, s: &BigUint) -> Result<Self, PolyError> {
        if s.is_zero() {
            return Err(PolyError::ZeroScale);
        }
        let n = self.degree().filter(|&n| n >= 1).ok_or(PolyError::Constant)?;
        if !self.is_monic() {
            return Err(PolyError::NotMonic);
        }
        let s = BigInt::from(s.clone());
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Pow::pow(&s, (n - i) as u32))
            .collect();
        Ok(Self::new(coeffs, self.denom_exp))
    }

    /// Coefficients `a_i * (2^e)^(-1) mod ell`. At `ell = 2` only integral
    /// polynomials reduce.
    pub fn reduce_coeffs_mod(&self, ell: &BigUint) -> Result<Vec<BigUint>, PolyError> {
        let inv = if ell == &BigUint::from(2u32) {
            if self.denom_exp > 0 {
                return Err(PolyError::NotReducibleAtTwo(self.denom_exp));
            }
            BigUint::one()
        } else {
            let d = BigUint::one() << self.denom_exp;
            arith::inv_mod(&(d % ell), ell).expect("2 is a unit modulo an odd prime")
        };
        Ok(self
            .coeffs
            .iter()
            .map(|c| (arith::mod_floor(c, ell) * &inv) % ell)
            .collect())
    }

    /// Image in `F[x]` for a field of odd characteristic.
    pub fn reduce_mod<F: FiniteField>(&self, field: &F) -> FqPoly<F::Elem> {
        let r = PolyRing::new(field);
        let inv = field
            .inv(&field.from_int(&self.denominator()))
            .expect("odd characteristic");
        r.from_coeffs(
            self.coeffs
                .iter()
                .map(|c| field.mul(&field.from_int(c), &inv))
                .collect(),
        )
    }

    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`, computed with a subresultant
    /// remainder sequence on the integral numerator polynomial.
    pub fn discriminant(&self) -> Result<BigRational, PolyError> {
        let n = self.degree().filter(|&n| n >= 1).ok_or(PolyError::Constant)?;
        let g = IntPolynomial::from_ints(self.coeffs.clone());
        let lc = g.coeffs.last().unwrap();
        let res = resultant(&g, &g.derivative());
        let (d, rem) = res.div_rem(lc);
        debug_assert!(rem.is_zero());
        let d = if (n * (n - 1) / 2) % 2 == 1 { -d } else { d };
        // disc(g / 2^e) = disc(g) / 2^(e(2n-2))
        let scale = BigInt::one() << (self.denom_exp as usize * (2 * n - 2));
        Ok(BigRational::new(d, scale))
    }

    /// Discriminant of a monic integral polynomial.
    pub fn integer_discriminant(&self) -> Result<BigInt, PolyError> {
        let d = self.discriminant()?;
        Ok(d.to_integer())
    }
}

/// Resultant of two polynomials in `Z[x]` (subresultant algorithm).
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    assert!(a.is_integral() && b.is_integral());
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            s = -s;
        }
    }
    let (ca, cb) = (a.content(), b.content());
    let t = Pow::pow(&ca, b.degree().unwrap() as u32) * Pow::pow(&cb, a.degree().unwrap() as u32);
    a = IntPolynomial::from_ints(a.coeffs.iter().map(|c| c / &ca).collect());
    b = IntPolynomial::from_ints(b.coeffs.iter().map(|c| c / &cb).collect());
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        if db == 0 {
            // Res(a, const) = const^deg a
            let lb = b.coeffs[0].clone();
            let hh = if da == 0 {
                h.clone()
            } else {
                Pow::pow(&lb, da as u32) / Pow::pow(&h, (da - 1) as u32)
            };
            return s * t * hh;
        }
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let (_, r) = a.pseudo_divrem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &g * Pow::pow(&h, delta);
        a = b;
        b = IntPolynomial::from_ints(r.coeffs.iter().map(|c| c / &divisor).collect());
        g = a.coeffs.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            Pow::pow(&g, delta) / Pow::pow(&h, delta - 1)
        };
    }
}

/// `(-1)^(n(n-1)/2) n^n C^(n-1) + (-1)^((n-1)(n-2)/2) (n-1)^(n-1) B^n`, the
/// discriminant of `x^n + Bx + C`.
pub fn trinomial_discriminant(n: u32, b: &BigInt, c: &BigInt) -> Result<BigInt, PolyError> {
    if n < 2 {
        return Err(PolyError::DegreeTooSmall(n));
    }
    let nn = BigInt::from(n);
    let m = BigInt::from(n - 1);
    let mut t1 = Pow::pow(&nn, n) * Pow::pow(c, n - 1);
    if (n as u64 * (n as u64 - 1) / 2) % 2 == 1 {
        t1 = -t1;
    }
    let mut t2 = Pow::pow(&m, n - 1) * Pow::pow(b, n);
    if ((n as u64 - 1) * (n as u64 - 2) / 2) % 2 == 1 {
        t2 = -t2;
    }
    Ok(t1 + t2)
}

/// `x^n + Bx + C` over `Z` with `n >= 2` and `B, C` nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trinomial {
    pub n: u32,
    #[serde(rename = "B", with = "crate::serde_dec")]
    pub linear: BigInt,
    #[serde(rename = "C", with = "crate::serde_dec")]
    pub constant: BigInt,
}

impl Trinomial {
    pub fn new(n: u32, linear: BigInt, constant: BigInt) -> Result<Self, PolyError> {
        if n < 2 {
            return Err(PolyError::DegreeTooSmall(n));
        }
        if linear.is_zero() || constant.is_zero() {
            return Err(PolyError::ZeroCoefficient);
        }
        Ok(Trinomial {
            n,
            linear,
            constant,
        })
    }

    pub fn to_poly(&self) -> IntPolynomial {
        IntPolynomial::trinomial(self.n, &self.linear, &self.constant)
    }

    /// Closed-form discriminant.
    pub fn discriminant(&self) -> BigInt {
        trinomial_discriminant(self.n, &self.linear, &self.constant).unwrap()
    }
}

impl fmt::Display for Trinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: &BigInt| if v.is_negative() { "-" } else { "+" };
        let lin = self.linear.magnitude();
        let lin = if lin.is_one() { String::new() } else { lin.to_string() };
        write!(
            f,
            "x^{} {} {}x {} {}",
            self.n,
            sign(&self.linear),
            lin,
            sign(&self.constant),
            self.constant.magnitude()
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")?;
        if self.denom_exp > 0 {
            write!(f, " / 2^{}", self.denom_exp)?;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let err = || PolyError::Parse(s.to_string());
        let (body, e) = match s.split_once('/') {
            None => (s.trim(), 0),
            Some((body, den)) => {
                let exp = den.trim().strip_prefix("2^").ok_or_else(err)?;
                (body.trim(), exp.trim().parse::<u32>().map_err(|_| err())?)
            }
        };
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(err)?;
        let coeffs = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse::<BigInt>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Self::new(coeffs, e))
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::serde_dec::deserialize(d)
    }
}

/// `2^k` as an integer.
pub fn pow2(k: u64) -> BigInt {
    BigInt::from_biguint(Sign::Plus, BigUint::one() << k)
}

/// Exact integer square root test on a rational.
pub fn is_rational_square(q: &BigRational) -> bool {
    arith::is_perfect_square(q.numer()) && arith::is_perfect_square(q.denom())
}

/// `v_2` of a nonzero element of `Z[1/2]`.
pub fn dyadic_valuation(num: &BigInt, denom_exp: u32) -> Option<i64> {
    (!num.is_zero()).then(|| arith::v2(num) as i64 - denom_exp as i64)
}
