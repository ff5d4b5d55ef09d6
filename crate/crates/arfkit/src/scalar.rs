//! Exact coefficient fields: arbitrary-precision rationals and prime fields
//! F_p for small p.
//!
//! Rationals are kept in lowest terms with positive denominator; prime-field
//! elements are canonical residues in `[0, p)`. Arithmetic between scalars of
//! different fields is an error, never a coercion.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest characteristic accepted for prime coefficient fields.
pub const MAX_PRIME: u32 = 97;

const SMALL_PRIMES: &[u32] = &[
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Tag identifying a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rational numbers (models characteristic 0).
    Rationals,
    /// The prime field with `p` elements, `p` prime and at most [`MAX_PRIME`].
    Prime(u32),
}

impl Field {
    /// Validated constructor for prime fields.
    pub fn prime(p: u32) -> Result<Field> {
        if SMALL_PRIMES.contains(&p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidField(format!(
                "{p} is not a prime <= {MAX_PRIME}"
            )))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> ExactScalar {
        match self {
            Field::Rationals => ExactScalar::Rational(BigRational::zero()),
            Field::Prime(p) => ExactScalar::Prime { p: *p, residue: 0 },
        }
    }

    pub fn one(&self) -> ExactScalar {
        self.integer(1)
    }

    /// The image of an integer in this field.
    pub fn integer(&self, n: i64) -> ExactScalar {
        match self {
            Field::Rationals => ExactScalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let m = i64::from(*p);
                ExactScalar::Prime {
                    p: *p,
                    residue: n.rem_euclid(m) as u32,
                }
            }
        }
    }

    /// Parse a field spec: `q` for the rationals, `f<p>` for a prime field.
    pub fn parse(text: &str) -> Result<Field> {
        let t = text.trim().to_ascii_lowercase();
        match t.as_str() {
            "q" | "rational" | "rationals" => Ok(Field::Rationals),
            _ => {
                let digits = t
                    .strip_prefix('f')
                    .or_else(|| t.strip_prefix("gf"))
                    .ok_or_else(|| Error::InvalidField(text.to_string()))?;
                let p: u32 = digits
                    .parse()
                    .map_err(|_| Error::InvalidField(text.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An element of one of the supported coefficient fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    Prime { p: u32, residue: u32 },
}

impl ExactScalar {
    pub fn rational(numer: i64, denom: i64) -> ExactScalar {
        ExactScalar::Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn field(&self) -> Field {
        match self {
            ExactScalar::Rational(_) => Field::Rationals,
            ExactScalar::Prime { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_zero(),
            ExactScalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_one(),
            ExactScalar::Prime { residue, .. } => *residue == 1,
        }
    }

    fn check_field(&self, other: &ExactScalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn add(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.check_field(other)?;
        Ok(match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(a + b),
            (ExactScalar::Prime { p, residue: a }, ExactScalar::Prime { residue: b, .. }) => {
                ExactScalar::Prime {
                    p: *p,
                    residue: (a + b) % p,
                }
            }
            _ => unreachable!("field checked above"),
        })
    }

    pub fn sub(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.check_field(other)?;
        Ok(match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(a * b),
            (ExactScalar::Prime { p, residue: a }, ExactScalar::Prime { residue: b, .. }) => {
                ExactScalar::Prime {
                    p: *p,
                    residue: ((u64::from(*a) * u64::from(*b)) % u64::from(*p)) as u32,
                }
            }
            _ => unreachable!("field checked above"),
        })
    }

    pub fn div(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.mul(&other.inverse()?)
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(a) => ExactScalar::Rational(-a),
            ExactScalar::Prime { p, residue } => ExactScalar::Prime {
                p: *p,
                residue: if *residue == 0 { 0 } else { p - residue },
            },
        }
    }

    pub fn inverse(&self) -> Result<ExactScalar> {
        if self.is_zero() {
            return Err(Error::NonInvertibleScalar(self.to_string()));
        }
        Ok(match self {
            ExactScalar::Rational(a) => ExactScalar::Rational(a.recip()),
            ExactScalar::Prime { p, residue } => ExactScalar::Prime {
                p: *p,
                residue: mod_inverse(*residue, *p),
            },
        })
    }
}

/// Inverse of `a` modulo the prime `p` by Fermat's little theorem.
fn mod_inverse(a: u32, p: u32) -> u32 {
    debug_assert!(a != 0 && a < p);
    let (mut base, mut exp, mut acc) = (u64::from(a), p - 2, 1u64);
    let m = u64::from(p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ExactScalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Parse an exact rational literal `p`, `-p`, or `p/q`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
        let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(numer, denom))
    } else {
        let numer: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(numer))
    }
}

/// Canonical `p/q` rendering of a rational (plain integer when q = 1).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the rational is an integer.
pub fn is_integral(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Sign-aware split used by series formatting: `(is_negative, magnitude)`.
pub fn scalar_sign_split(s: &ExactScalar) -> (bool, ExactScalar) {
    match s {
        ExactScalar::Rational(r) if r.is_negative() => (true, ExactScalar::Rational(-r)),
        _ => (false, s.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let a = ExactScalar::rational(2, -4);
        assert_eq!(a, ExactScalar::rational(-1, 2));
        assert_eq!(a.to_string(), "-1/2");
        assert_eq!(ExactScalar::rational(6, 3).to_string(), "2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.integer(5);
        let b = f.integer(4);
        assert_eq!(a.add(&b).unwrap(), f.integer(2));
        assert_eq!(a.mul(&b).unwrap(), f.integer(6));
        assert_eq!(a.neg(), f.integer(2));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn negative_integers_reduce_into_range() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.integer(-3), f.integer(2));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Field::Rationals.one();
        let b = Field::prime(3).unwrap().one();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn rejects_composite_and_large_characteristics() {
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(101).is_err());
        assert!(Field::parse("f97").is_ok());
        assert!(Field::parse("f98").is_err());
        assert_eq!(Field::parse("q").unwrap(), Field::Rationals);
    }

    #[test]
    fn all_prime_inverses() {
        for &p in SMALL_PRIMES {
            let f = Field::prime(p).unwrap();
            for a in 1..p {
                let x = f.integer(i64::from(a));
                assert!(x.mul(&x.inverse().unwrap()).unwrap().is_one());
            }
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Field::Rationals.zero().inverse().is_err());
        assert!(Field::prime(2).unwrap().zero().inverse().is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_rational("3/6").unwrap(),
            parse_rational("1/2").unwrap()
        );
        assert_eq!(format_rational(&parse_rational("-4/2").unwrap()), "-2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
