//! Imaginary quadratic fields of class number 1, their rings of integers,
//! prime splitting, residue maps, and Mori quadruples over them.
//!
//! Elements of `O_K = Z[w]` are written `x + y*w` with `w = sqrt(d)` when
//! `d = 2, 3 mod 4` and `w = (1 + sqrt(d))/2` when `d = 1 mod 4`.

pub mod ideal;
pub mod quadruple;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finfield::FieldError;

pub use ideal::{ideal_from_generator, residue_map, splitting, MaximalIdeal};
pub use quadruple::{
    certify_k, generate_quadruple, validate_generalized_quadruple, verify_k, GeneralizedConditions,
    GeneralizedQuadruple, GenerationBounds, KCertificate,
};

/// The nine squarefree `d < 0` with `Q(sqrt(d))` of class number 1.
pub const SUPPORTED_D: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("d = {0} is not one of the nine class-number-1 imaginary quadratic fields")]
    UnsupportedField(i64),
    #[error("cannot parse ring element {0:?}")]
    Parse(String),
    #[error("{0} does not generate a maximal ideal")]
    NotPrimeElement(String),
    #[error("g must be positive")]
    ZeroGenus,
    #[error("generalized quadruple fails: {}", .0.failures().join(", "))]
    Invalid(Box<GeneralizedConditions>),
    #[error("no generalized quadruple within the search bounds")]
    Exhausted,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `Q(sqrt(d))` for `d` in [`SUPPORTED_D`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct ImagQuadField {
    d: i64,
}

impl TryFrom<i64> for ImagQuadField {
    type Error = NumFieldError;
    fn try_from(d: i64) -> Result<Self, NumFieldError> {
        ImagQuadField::new(d)
    }
}

impl From<ImagQuadField> for i64 {
    fn from(k: ImagQuadField) -> i64 {
        k.d
    }
}

impl ImagQuadField {
    pub fn new(d: i64) -> Result<Self, NumFieldError> {
        if SUPPORTED_D.contains(&d) {
            Ok(ImagQuadField { d })
        } else {
            Err(NumFieldError::UnsupportedField(d))
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    fn half_integral(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// Trace of `w`.
    pub fn omega_trace(&self) -> BigInt {
        BigInt::from(self.half_integral() as i64)
    }

    /// Norm of `w`; `w^2 = trace * w - norm`.
    pub fn omega_norm(&self) -> BigInt {
        if self.half_integral() {
            BigInt::from((1 - self.d) / 4)
        } else {
            BigInt::from(-self.d)
        }
    }

    /// Field discriminant, `d` or `4d`.
    pub fn discriminant(&self) -> BigInt {
        if self.half_integral() {
            BigInt::from(self.d)
        } else {
            BigInt::from(4 * self.d)
        }
    }

    /// Human-readable definition of `w`.
    pub fn omega_convention(&self) -> String {
        if self.half_integral() {
            format!("w = (1 + sqrt({}))/2", self.d)
        } else {
            format!("w = sqrt({})", self.d)
        }
    }

    pub fn mul(&self, a: &OKElement, b: &OKElement) -> OKElement {
        let yy = &a.y * &b.y;
        OKElement {
            x: &a.x * &b.x - &yy * self.omega_norm(),
            y: &a.x * &b.y + &a.y * &b.x + &yy * self.omega_trace(),
        }
    }

    pub fn pow(&self, a: &OKElement, mut e: u32) -> OKElement {
        let mut base = a.clone();
        let mut acc = OKElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, a: &OKElement) -> OKElement {
        OKElement {
            x: &a.x + &a.y * self.omega_trace(),
            y: -&a.y,
        }
    }

    /// `N(x + y w) = x^2 + trace(w) x y + N(w) y^2`.
    pub fn norm(&self, a: &OKElement) -> BigInt {
        &a.x * &a.x + &a.x * &a.y * self.omega_trace() + &a.y * &a.y * self.omega_norm()
    }

    /// `a / b` when it lies in `O_K`.
    pub fn div_exact(&self, a: &OKElement, b: &OKElement) -> Option<OKElement> {
        let n = self.norm(b);
        if n.is_zero() {
            return None;
        }
        let num = self.mul(a, &self.conj(b));
        let (qx, rx) = num.x.div_rem(&n);
        let (qy, ry) = num.y.div_rem(&n);
        (rx.is_zero() && ry.is_zero()).then_some(OKElement { x: qx, y: qy })
    }

    pub fn divides(&self, b: &OKElement, a: &OKElement) -> bool {
        self.div_exact(a, b).is_some()
    }

    /// The units of `O_K`.
    pub fn units(&self) -> Vec<OKElement> {
        let w = OKElement::omega();
        let mut base = vec![OKElement::one()];
        match self.d {
            -1 => base.push(w),
            -3 => {
                base.push(w.clone());
                base.push(self.mul(&w, &w));
            }
            _ => {}
        }
        let negs: Vec<_> = base.iter().map(OKElement::neg).collect();
        base.into_iter().chain(negs).collect()
    }

    /// The associate of `a` with the lexicographically largest `(x, y)`.
    pub fn canonical_associate(&self, a: &OKElement) -> OKElement {
        self.units()
            .iter()
            .map(|u| self.mul(u, a))
            .max_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)))
            .unwrap()
    }

    /// Parses `x+y*w`; `i` is accepted for `w` when `d = -1`.
    pub fn parse(&self, s: &str) -> Result<OKElement, NumFieldError> {
        let alias = if self.d == -1 { Some('i') } else { None };
        parse_element(s, alias)
    }
}

/// `x + y w` in `O_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OKElement {
    pub x: BigInt,
    pub y: BigInt,
}

impl OKElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        OKElement {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn from_int(x: impl Into<BigInt>) -> Self {
        OKElement::new(x, 0)
    }

    pub fn zero() -> Self {
        OKElement::new(0, 0)
    }

    pub fn one() -> Self {
        OKElement::new(1, 0)
    }

    pub fn omega() -> Self {
        OKElement::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn add(&self, o: &OKElement) -> OKElement {
        OKElement::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &OKElement) -> OKElement {
        OKElement::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> OKElement {
        OKElement::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, k: &BigInt) -> OKElement {
        OKElement::new(&self.x * k, &self.y * k)
    }

    /// Membership in `m O_K` for a rational integer `m`.
    pub fn divisible_by_int(&self, m: &BigInt) -> bool {
        self.x.is_multiple_of(m) && self.y.is_multiple_of(m)
    }
}

impl fmt::Display for OKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y_part = |y: &BigInt| {
            if y.abs().is_one() {
                "w".to_string()
            } else {
                format!("{}*w", y.abs())
            }
        };
        match (self.x.is_zero(), self.y.sign()) {
            (_, num_bigint::Sign::NoSign) => write!(f, "{}", self.x),
            (true, num_bigint::Sign::Plus) => write!(f, "{}", y_part(&self.y)),
            (true, num_bigint::Sign::Minus) => write!(f, "-{}", y_part(&self.y)),
            (false, num_bigint::Sign::Plus) => write!(f, "{}+{}", self.x, y_part(&self.y)),
            (false, num_bigint::Sign::Minus) => write!(f, "{}-{}", self.x, y_part(&self.y)),
        }
    }
}

fn parse_element(s: &str, alias: Option<char>) -> Result<OKElement, NumFieldError> {
    let err = || NumFieldError::Parse(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut out = OKElement::zero();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        let is_unit_symbol = |c: char| c == 'w' || Some(c) == alias;
        match body.chars().last() {
            Some(c) if is_unit_symbol(c) => {
                let coeff = body[..body.len() - 1].trim_end_matches('*');
                let k: BigInt = if coeff.is_empty() {
                    BigInt::one()
                } else {
                    coeff.parse().map_err(|_| err())?
                };
                out.y += k * sign;
            }
            Some(_) => {
                let k: BigInt = body.parse().map_err(|_| err())?;
                out.x += k * sign;
            }
            None => return Err(err()),
        }
    }
    Ok(out)
}

impl FromStr for OKElement {
    type Err = NumFieldError;
    fn from_str(s: &str) -> Result<Self, NumFieldError> {
        parse_element(s, None)
    }
}

impl TryFrom<String> for OKElement {
    type Error = NumFieldError;
    fn try_from(s: String) -> Result<Self, NumFieldError> {
        s.parse()
    }
}

impl From<OKElement> for String {
    fn from(a: OKElement) -> String {
        a.to_string()
    }
}
