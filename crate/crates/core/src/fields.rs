//! Exact scalar arithmetic over the rationals and prime fields GF(p).
//!
//! Every [`FieldElement`] carries its [`FieldSpec`]; combining elements of
//! different fields through the `checked_*` methods is an error, and through
//! the operator impls it is a panic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    SpecMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is an infinite field")]
    InfiniteField(FieldSpec),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("cannot parse field spec {0:?}")]
    ParseSpec(String),
}

/// The ground field: either Q or GF(p) for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// GF(p), checking that `p` is prime.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_i64(*self, 0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_i64(*self, 1)
    }

    pub fn element(&self, n: i64) -> FieldElement {
        FieldElement::from_i64(*self, n)
    }

    /// Parses a literal such as `3`, `-1/4` into this field.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        FieldElement::parse(*self, s)
    }

    /// All elements of a finite field in the order 0, 1, ..., p-1.
    pub fn enumerate(&self) -> Result<Vec<FieldElement>, FieldError> {
        match self {
            FieldSpec::Rationals => Err(FieldError::InfiniteField(*self)),
            FieldSpec::Prime(p) => Ok((0..*p)
                .map(|r| FieldElement {
                    spec: *self,
                    repr: Repr::Residue(r),
                })
                .collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF:{p}"),
        }
    }
}

/// Accepts `Q` or `GF:p` (also `GF(p)` and `GFp`).
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t == "q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let rest = t
            .strip_prefix("GF")
            .or_else(|| t.strip_prefix("gf"))
            .ok_or_else(|| FieldError::ParseSpec(s.to_string()))?;
        let digits = rest
            .trim_start_matches([':', '('])
            .trim_end_matches(')')
            .trim();
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::ParseSpec(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

/// JSON form: `{"field": "Q"}` or `{"field": "GF", "p": 7}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

impl TryFrom<FieldSpecJson> for FieldSpec {
    type Error = FieldError;

    fn try_from(value: FieldSpecJson) -> Result<Self, Self::Error> {
        match (value.field.as_str(), value.p) {
            ("Q", None) => Ok(FieldSpec::Rationals),
            ("GF", Some(p)) => FieldSpec::prime(p),
            (other, _) => other.parse(),
        }
    }
}

impl From<FieldSpec> for FieldSpecJson {
    fn from(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldSpecJson {
                field: "Q".into(),
                p: None,
            },
            FieldSpec::Prime(p) => FieldSpecJson {
                field: "GF".into(),
                p: Some(p),
            },
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FieldSpecJson::from(*self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Text(String),
            Json(FieldSpecJson),
        }
        match Either::deserialize(deserializer)? {
            Either::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Either::Json(j) => FieldSpec::try_from(j).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue(u64),
}

/// An element of a [`FieldSpec`] in canonical form: a reduced fraction for
/// Q, a residue in `[0, p)` for GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: Repr,
}

impl FieldElement {
    pub fn from_i64(spec: FieldSpec, n: i64) -> Self {
        let repr = match spec {
            FieldSpec::Rationals => Repr::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Repr::Residue((n as i128).rem_euclid(p as i128) as u64),
        };
        FieldElement { spec, repr }
    }

    pub fn from_bigint(spec: FieldSpec, n: &BigInt) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElement {
                spec,
                repr: Repr::Rational(BigRational::from_integer(n.clone())),
            },
            FieldSpec::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldElement {
                    spec,
                    repr: Repr::Residue(r.to_u64().expect("residue fits in u64")),
                }
            }
        }
    }

    /// `num / den` mapped into the field.
    pub fn from_ratio(spec: FieldSpec, num: &BigInt, den: &BigInt) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match spec {
            FieldSpec::Rationals => Ok(FieldElement {
                spec,
                repr: Repr::Rational(BigRational::new(num.clone(), den.clone())),
            }),
            FieldSpec::Prime(_) => {
                let n = FieldElement::from_bigint(spec, num);
                let d = FieldElement::from_bigint(spec, den);
                n.checked_div(&d)
            }
        }
    }

    pub fn from_rational(spec: FieldSpec, q: &BigRational) -> Result<Self, FieldError> {
        Self::from_ratio(spec, q.numer(), q.denom())
    }

    /// Parses `n`, `-n`, `n/d` (whitespace tolerated) into `spec`.
    pub fn parse(spec: FieldSpec, s: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t.as_str(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        Self::from_ratio(spec, &num, &den).map_err(|e| match e {
            FieldError::DivisionByZero => FieldError::DivisionByZero,
            _ => err(),
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue(r) => *r == 1,
        }
    }

    /// The residue for GF(p) elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue(r) => Some(*r),
            Repr::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Residue(_) => None,
        }
    }

    /// True for rationals with negative value; never for GF(p).
    pub fn is_negative(&self) -> bool {
        matches!(&self.repr, Repr::Rational(q) if q.is_negative())
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch(self.spec, other.spec))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr, self.spec) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a + b),
            (Repr::Residue(a), Repr::Residue(b), FieldSpec::Prime(p)) => {
                Repr::Residue(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            _ => unreachable!("representation always matches spec"),
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr, self.spec) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a * b),
            (Repr::Residue(a), Repr::Residue(b), FieldSpec::Prime(p)) => {
                Repr::Residue(((*a as u128 * *b as u128) % p as u128) as u64)
            }
            _ => unreachable!("representation always matches spec"),
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Self {
        let repr = match (&self.repr, self.spec) {
            (Repr::Rational(a), _) => Repr::Rational(-a),
            (Repr::Residue(a), FieldSpec::Prime(p)) => Repr::Residue(if *a == 0 { 0 } else { p - a }),
            _ => unreachable!(),
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let repr = match (&self.repr, self.spec) {
            (Repr::Rational(a), _) => Repr::Rational(a.recip()),
            (Repr::Residue(a), FieldSpec::Prime(p)) => Repr::Residue(pow_mod(*a, p - 2, p)),
            _ => unreachable!(),
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub(crate) fn rational_mut(&mut self) -> Option<&mut BigRational> {
        match &mut self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Residue(_) => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for deterministic sorting: by field, then by value
/// (numeric for Q, residue for GF(p)).
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.spec.cmp(&other.spec).then_with(|| match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Residue(a), Repr::Residue(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(gf(5).element(3) + gf(5).element(4), gf(5).element(2));
        let q = FieldSpec::Rationals;
        let half = q.parse_element("1/2").unwrap();
        let third = q.parse_element("1/3").unwrap();
        assert_eq!((half + third).to_string(), "5/6");
        assert!((gf(2).one() + gf(2).one()).is_zero());
    }

    #[test]
    fn mul_inv_examples() {
        assert_eq!(gf(7).element(3).inv().unwrap(), gf(7).element(5));
        let q = FieldSpec::Rationals;
        let x = q.parse_element("-2/3").unwrap();
        assert_eq!(x.inv().unwrap().to_string(), "-3/2");
        assert_eq!(gf(5).element(2) * gf(5).element(4), gf(5).element(3));
        assert_eq!(gf(5).zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn spec_mismatch_is_error() {
        let a = gf(5).one();
        let b = gf(7).one();
        assert!(matches!(a.checked_add(&b), Err(FieldError::SpecMismatch(_, _))));
        assert!(matches!(
            FieldSpec::Rationals.one().checked_mul(&a),
            Err(FieldError::SpecMismatch(_, _))
        ));
    }

    #[test]
    fn enumerate_examples() {
        let e: Vec<String> = gf(3).enumerate().unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(e, ["0", "1", "2"]);
        assert_eq!(gf(2).enumerate().unwrap().len(), 2);
        assert!(matches!(
            FieldSpec::Rationals.enumerate(),
            Err(FieldError::InfiniteField(_))
        ));
    }

    #[test]
    fn negative_literals_reduce() {
        assert_eq!(gf(7).element(-1), gf(7).element(6));
        assert_eq!(gf(5).parse_element("-1/4").unwrap(), gf(5).element(1));
        assert_eq!(FieldSpec::Rationals.parse_element("4/8").unwrap().to_string(), "1/2");
        assert!(gf(5).parse_element("1/5").is_err());
        assert!(FieldSpec::Rationals.parse_element("x").is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("GF:7".parse::<FieldSpec>().unwrap(), gf(7));
        assert_eq!("GF(13)".parse::<FieldSpec>().unwrap(), gf(13));
        assert!("GF:8".parse::<FieldSpec>().is_err());
        let j: FieldSpec = serde_json::from_str(r#"{"field": "GF", "p": 7}"#).unwrap();
        assert_eq!(j, gf(7));
        let j: FieldSpec = serde_json::from_str(r#"{"field": "Q"}"#).unwrap();
        assert_eq!(j, FieldSpec::Rationals);
        assert_eq!(serde_json::to_string(&gf(5)).unwrap(), r#"{"field":"GF","p":5}"#);
    }

    #[test]
    fn large_primes() {
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        let f = gf(2_147_483_647);
        let a = f.element(123_456_789);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert!(is_prime(18_446_744_073_709_551_557));
    }
}
