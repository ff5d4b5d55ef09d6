//! Truncated formal power series over an exact coefficient field.
//!
//! A series stores only its nonzero coefficients below a truncation order T;
//! coefficients at exponents >= T are *unknown*, not zero. Binary operations
//! propagate truncation as the minimum of the input truncations, which is
//! conservative but keeps the precision bookkeeping obvious. A series with no
//! stored coefficient is indistinguishable from zero at its truncation; its
//! order is the sentinel [`Order::AtLeast`], never silently 0 or infinity.
//!
//! Values are immutable after construction and all operations are pure, so
//! everything here is safe to share across threads.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, scalar_sign_split, ExactScalar, Field};

/// The valuation of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Least exponent with a nonzero coefficient.
    Finite(u32),
    /// No nonzero coefficient is visible; the true order is at least this
    /// bound (the series' truncation).
    AtLeast(u32),
}

impl Order {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(*n),
            Order::AtLeast(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::AtLeast(t) => write!(f, ">={t}"),
        }
    }
}

/// A formal power series known up to a finite truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    /// Exponent -> nonzero coefficient; all exponents < truncation.
    coeffs: BTreeMap<u32, ExactScalar>,
    truncation: u32,
}

impl TruncatedSeries {
    /// The zero series (no visible coefficients) at the given truncation.
    pub fn zero(field: Field, truncation: u32) -> TruncatedSeries {
        TruncatedSeries {
            field,
            coeffs: BTreeMap::new(),
            truncation,
        }
    }

    /// The constant series 1.
    pub fn one(field: Field, truncation: u32) -> TruncatedSeries {
        TruncatedSeries::monomial(field, 0, truncation)
    }

    /// The monomial t^exponent, provided it is visible below the truncation.
    pub fn monomial(field: Field, exponent: u32, truncation: u32) -> TruncatedSeries {
        let mut coeffs = BTreeMap::new();
        if exponent < truncation {
            coeffs.insert(exponent, field.one());
        }
        TruncatedSeries {
            field,
            coeffs,
            truncation,
        }
    }

    /// Build a series from (exponent, coefficient) terms; repeated exponents
    /// are summed, zero results dropped, exponents >= truncation rejected.
    pub fn from_terms<I>(field: Field, terms: I, truncation: u32) -> Result<TruncatedSeries>
    where
        I: IntoIterator<Item = (u32, ExactScalar)>,
    {
        let mut coeffs: BTreeMap<u32, ExactScalar> = BTreeMap::new();
        for (e, c) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if e >= truncation {
                return Err(Error::Parse(format!(
                    "exponent {e} is not below the truncation {truncation}"
                )));
            }
            let total = match coeffs.remove(&e) {
                Some(prev) => prev.add(&c)?,
                None => c,
            };
            if !total.is_zero() {
                coeffs.insert(e, total);
            }
        }
        Ok(TruncatedSeries {
            field,
            coeffs,
            truncation,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// The least exponent with a nonzero coefficient, or the sentinel when
    /// the series is indistinguishable from zero at this truncation.
    pub fn order(&self) -> Order {
        match self.coeffs.keys().next() {
            Some(&e) => Order::Finite(e),
            None => Order::AtLeast(self.truncation),
        }
    }

    /// True when no coefficient is visible below the truncation.
    pub fn is_effectively_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at an exponent; `None` when the exponent is at or beyond
    /// the truncation (unknown), the field's zero when known to vanish.
    pub fn coefficient(&self, exponent: u32) -> Option<ExactScalar> {
        if exponent >= self.truncation {
            return None;
        }
        Some(
            self.coeffs
                .get(&exponent)
                .cloned()
                .unwrap_or_else(|| self.field.zero()),
        )
    }

    /// Coefficient at the order, when the order is finite.
    pub fn leading_coefficient(&self) -> Option<&ExactScalar> {
        self.coeffs.values().next()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &ExactScalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Restrict to a (possibly smaller) truncation.
    pub fn truncate_to(&self, truncation: u32) -> TruncatedSeries {
        let t = self.truncation.min(truncation);
        TruncatedSeries {
            field: self.field,
            coeffs: self
                .coeffs
                .range(..t)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            truncation: t,
        }
    }

    fn check_field(&self, other: &TruncatedSeries) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field, other.field))
        }
    }

    /// Coefficient-wise sum; result truncation is the minimum of the inputs'.
    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_field(other)?;
        let t = self.truncation.min(other.truncation);
        let mut coeffs: BTreeMap<u32, ExactScalar> = BTreeMap::new();
        for (e, c) in self.coeffs.range(..t) {
            coeffs.insert(*e, c.clone());
        }
        for (e, c) in other.coeffs.range(..t) {
            let total = match coeffs.remove(e) {
                Some(prev) => prev.add(c)?,
                None => c.clone(),
            };
            if !total.is_zero() {
                coeffs.insert(*e, total);
            }
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs,
            truncation: t,
        })
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
            truncation: self.truncation,
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    /// Multiply by a scalar of the same field.
    pub fn scale(&self, scalar: &ExactScalar) -> Result<TruncatedSeries> {
        if scalar.field() != self.field {
            return Err(Error::FieldMismatch(self.field, scalar.field()));
        }
        if scalar.is_zero() {
            return Ok(TruncatedSeries::zero(self.field, self.truncation));
        }
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let prod = c.mul(scalar)?;
            if !prod.is_zero() {
                coeffs.insert(*e, prod);
            }
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs,
            truncation: self.truncation,
        })
    }

    /// Add `scalar * t^exponent`; exponents at or beyond the truncation are
    /// silently invisible (they carry no information at this precision).
    pub fn add_term(&self, exponent: u32, scalar: &ExactScalar) -> Result<TruncatedSeries> {
        if scalar.field() != self.field {
            return Err(Error::FieldMismatch(self.field, scalar.field()));
        }
        let mut out = self.clone();
        if exponent >= out.truncation || scalar.is_zero() {
            return Ok(out);
        }
        let total = match out.coeffs.remove(&exponent) {
            Some(prev) => prev.add(scalar)?,
            None => scalar.clone(),
        };
        if !total.is_zero() {
            out.coeffs.insert(exponent, total);
        }
        Ok(out)
    }

    /// Cauchy product; result truncation is the minimum of the inputs'.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_field(other)?;
        let t = self.truncation.min(other.truncation);
        let mut coeffs: BTreeMap<u32, ExactScalar> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            if *ea >= t {
                break;
            }
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e >= t {
                    break;
                }
                let prod = ca.mul(cb)?;
                let total = match coeffs.remove(&e) {
                    Some(prev) => prev.add(&prod)?,
                    None => prod,
                };
                if !total.is_zero() {
                    coeffs.insert(e, total);
                }
            }
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs,
            truncation: t,
        })
    }

    /// Exact quotient in the power series ring: the unique q with q*b = a,
    /// truncated to min(T_a, T_b) - order(b). Requires order(b) <= order(a);
    /// a quotient whose order would be negative leaves k[[t]] and is an error.
    pub fn div(&self, divisor: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_field(divisor)?;
        let v = match divisor.order() {
            Order::Finite(v) => v,
            Order::AtLeast(_) => {
                return Err(Error::DivisionByZeroSeries {
                    truncation: divisor.truncation,
                })
            }
        };
        if let Order::Finite(va) = self.order() {
            if va < v {
                return Err(Error::DivisionOrder {
                    divisor: v,
                    dividend: va.to_string(),
                });
            }
        }
        let t_full = self.truncation.min(divisor.truncation);
        if t_full <= v {
            return Err(Error::InsufficientTruncation(format!(
                "quotient truncation {t_full} - {v} leaves no visible coefficients"
            )));
        }
        let t_out = t_full - v;

        // Shift both down by v: the divisor becomes a unit.
        let shifted_num: Vec<(u32, ExactScalar)> = self
            .coeffs
            .iter()
            .filter(|(e, _)| **e >= v && **e - v < t_out)
            .map(|(e, c)| (*e - v, c.clone()))
            .collect();
        let unit: Vec<(u32, ExactScalar)> = divisor
            .coeffs
            .iter()
            .filter(|(e, _)| **e - v < t_out)
            .map(|(e, c)| (*e - v, c.clone()))
            .collect();

        // Dense back-substitution for q with q * unit = shifted_num.
        let u0_inv = unit[0].1.inverse()?;
        let mut num_dense = vec![self.field.zero(); t_out as usize];
        for (e, c) in shifted_num {
            num_dense[e as usize] = c;
        }
        let mut quot = vec![self.field.zero(); t_out as usize];
        for n in 0..t_out as usize {
            let mut acc = num_dense[n].clone();
            for (e, c) in unit.iter().skip(1) {
                let e = *e as usize;
                if e > n {
                    break;
                }
                acc = acc.sub(&c.mul(&quot[n - e])?)?;
            }
            quot[n] = acc.mul(&u0_inv)?;
        }
        TruncatedSeries::from_terms(
            self.field,
            quot.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e as u32, c)),
            t_out,
        )
    }

    /// Divide by the leading coefficient so the series is monic at its order.
    pub fn monic(&self) -> Result<TruncatedSeries> {
        match self.leading_coefficient() {
            None => Ok(self.clone()),
            Some(lc) => self.scale(&lc.inverse()?),
        }
    }

    /// Parse the series literal format: terms `c`, `c*t^e`, `t^e`, `t` joined
    /// by `+`/`-`, whitespace-insensitive, exact rational coefficients `p/q`
    /// (reduced integers for prime fields).
    pub fn parse(text: &str, field: Field, truncation: u32) -> Result<TruncatedSeries> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty series literal".to_string()));
        }

        // Split into signed terms; '+'/'-' only occur as term separators
        // because exponents are naturals and coefficients lead their term.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut sign = false;
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '+' | '-' if i > 0 && !current.is_empty() => {
                    terms.push((sign, std::mem::take(&mut current)));
                    sign = ch == '-';
                }
                '-' if current.is_empty() => sign = !sign,
                '+' if current.is_empty() => {}
                _ => current.push(ch),
            }
        }
        if current.is_empty() {
            return Err(Error::Parse(format!(
                "dangling sign in series literal {text:?}"
            )));
        }
        terms.push((sign, current));

        let mut parsed: Vec<(u32, ExactScalar)> = Vec::new();
        for (negative, term) in terms {
            let (exponent, coeff) = parse_term(&term, field)?;
            if exponent >= truncation {
                return Err(Error::Parse(format!(
                    "exponent {exponent} in {term:?} is not below the truncation {truncation}"
                )));
            }
            let coeff = if negative { coeff.neg() } else { coeff };
            parsed.push((exponent, coeff));
        }
        TruncatedSeries::from_terms(field, parsed, truncation)
    }

    /// Canonical literal rendering: exponents strictly increasing, exact
    /// coefficients, `0` for the effectively-zero series.
    pub fn canonical_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let (neg, mag) = scalar_sign_split(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let tpart = match e {
                0 => None,
                1 => Some("t".to_string()),
                _ => Some(format!("t^{e}")),
            };
            match (tpart, mag.is_one()) {
                (None, _) => out.push_str(&mag.to_string()),
                (Some(tp), true) => out.push_str(&tp),
                (Some(tp), false) => {
                    out.push_str(&mag.to_string());
                    out.push('*');
                    out.push_str(&tp);
                }
            }
        }
        out
    }
}

fn parse_term(term: &str, field: Field) -> Result<(u32, ExactScalar)> {
    let bad = || Error::Parse(format!("invalid series term {term:?}"));
    match term.find('t') {
        None => Ok((0, parse_coefficient(term, field)?)),
        Some(pos) => {
            let coeff_part = term[..pos].trim_end_matches('*');
            let exp_part = &term[pos + 1..];
            if exp_part.contains('t') || coeff_part.contains('t') {
                return Err(bad());
            }
            let exponent: u32 = if exp_part.is_empty() {
                1
            } else {
                exp_part
                    .strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?
            };
            let coeff = if coeff_part.is_empty() {
                field.one()
            } else {
                parse_coefficient(coeff_part, field)?
            };
            Ok((exponent, coeff))
        }
    }
}

fn parse_coefficient(text: &str, field: Field) -> Result<ExactScalar> {
    match field {
        Field::Rationals => Ok(ExactScalar::Rational(parse_rational(text)?)),
        Field::Prime(_) => {
            let n: i64 = text
                .parse()
                .map_err(|_| Error::Parse(format!("invalid prime-field coefficient {text:?}")))?;
            Ok(field.integer(n))
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self.canonical_string(), self.truncation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(text: &str) -> TruncatedSeries {
        TruncatedSeries::parse(text, Field::Rationals, 10).unwrap()
    }

    #[test]
    fn order_reads_off_least_exponent() {
        assert_eq!(q("t^2 + t^5").order(), Order::Finite(2));
        assert_eq!(
            TruncatedSeries::zero(Field::Rationals, 10).order(),
            Order::AtLeast(10)
        );
        assert_eq!(q("3 + t").order(), Order::Finite(0));
    }

    #[test]
    fn add_cancels_and_keeps_identity() {
        let sum = q("t^2 + t^3").add(&q("-t^3")).unwrap();
        assert_eq!(sum, q("t^2"));
        assert_eq!(q("t^4").add(&q("t^7")).unwrap(), q("t^4 + t^7"));
        let s = q("1/2*t^2 - t^3");
        assert_eq!(
            s.add(&TruncatedSeries::zero(Field::Rationals, 10)).unwrap(),
            s
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(q("t^2").mul(&q("t^3")).unwrap(), q("t^5"));
        assert_eq!(q("1 + t").mul(&q("1 - t")).unwrap(), q("1 - t^2"));
        let zero = TruncatedSeries::zero(Field::Rationals, 10);
        assert_eq!(zero.mul(&q("1 + t")).unwrap(), zero);
    }

    #[test]
    fn div_examples() {
        // Monomial divisor: quotient truncation drops by the divisor order.
        let quot = q("t^4 + t^7").div(&q("t^4")).unwrap();
        assert_eq!(
            quot,
            TruncatedSeries::parse("1 + t^3", Field::Rationals, 6).unwrap()
        );
        assert_eq!(quot.truncation(), 6);

        let one = q("t^3").div(&q("t^3")).unwrap();
        assert_eq!(
            one,
            TruncatedSeries::parse("1", Field::Rationals, 7).unwrap()
        );

        // A trailing term becomes the leading term of the quotient.
        for n in 1..6u32 {
            for m in 1..(10 - n) {
                let a = TruncatedSeries::from_terms(
                    Field::Rationals,
                    [(n, Field::Rationals.one()), (n + m, Field::Rationals.one())],
                    10,
                )
                .unwrap();
                let b = TruncatedSeries::monomial(Field::Rationals, n, 10);
                let expect =
                    TruncatedSeries::parse(&format!("1 + t^{m}"), Field::Rationals, 10 - n)
                        .unwrap();
                assert_eq!(a.div(&b).unwrap(), expect);
            }
        }
    }

    #[test]
    fn div_rejects_order_violations() {
        assert!(matches!(
            q("t^2").div(&q("t^3")),
            Err(Error::DivisionOrder { .. })
        ));
        assert!(matches!(
            q("t").div(&TruncatedSeries::zero(Field::Rationals, 10)),
            Err(Error::DivisionByZeroSeries { .. })
        ));
    }

    #[test]
    fn div_by_unit_with_tail() {
        // (1 - t)^-1 = 1 + t + t^2 + ...
        let inv = TruncatedSeries::one(Field::Rationals, 8)
            .div(&q("1 - t"))
            .unwrap();
        let expect = TruncatedSeries::from_terms(
            Field::Rationals,
            (0..8).map(|e| (e, Field::Rationals.one())),
            8,
        )
        .unwrap();
        assert_eq!(inv, expect);
    }

    #[test]
    fn mismatched_fields_error() {
        let a = q("t");
        let b = TruncatedSeries::parse("t", Field::prime(5).unwrap(), 10).unwrap();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn parse_is_whitespace_insensitive_and_canonicalizes() {
        assert_eq!(q(" t^4+t^7 "), q("t^4 + t^7"));
        assert_eq!(q("1/2 * t^2 - t^3").canonical_string(), "1/2*t^2 - t^3");
        assert_eq!(q("-t + t - t^2 + t^2").canonical_string(), "0");
        assert_eq!(q("2*t - t").canonical_string(), "t");
        assert_eq!(q("0").canonical_string(), "0");
        assert_eq!(q("-3/2").canonical_string(), "-3/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "t^", "t^-2", "x^2", "1//2*t", "t^2^3", "+", "t*t"] {
            assert!(
                TruncatedSeries::parse(bad, Field::Rationals, 10).is_err(),
                "accepted {bad:?}"
            );
        }
        // Exponent at the truncation carries no information: rejected.
        assert!(TruncatedSeries::parse("t^10", Field::Rationals, 10).is_err());
    }

    #[test]
    fn parse_prime_field_reduces_coefficients() {
        let f5 = Field::prime(5).unwrap();
        let s = TruncatedSeries::parse("7*t + 3*t", f5, 10).unwrap();
        assert_eq!(s.canonical_string(), "0");
        let s = TruncatedSeries::parse("-2*t^2", f5, 10).unwrap();
        assert_eq!(s.canonical_string(), "3*t^2");
    }

    fn arb_series(max_trunc: u32) -> impl Strategy<Value = TruncatedSeries> {
        (
            prop::collection::btree_map(0u32..max_trunc, (-4i64..=4, 1i64..=3), 0..6),
            (max_trunc / 2)..=max_trunc,
        )
            .prop_map(move |(terms, trunc)| {
                TruncatedSeries::from_terms(
                    Field::Rationals,
                    terms
                        .into_iter()
                        .filter(|(e, _)| *e < trunc)
                        .map(|(e, (n, d))| (e, ExactScalar::rational(n, d))),
                    trunc,
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_exactly(
            a in arb_series(16),
            b in arb_series(16),
            c in arb_series(16),
        ) {
            let t = a.truncation().min(b.truncation()).min(c.truncation());
            let assoc_l = a.mul(&b).unwrap().mul(&c).unwrap().truncate_to(t);
            let assoc_r = a.mul(&b.mul(&c).unwrap()).unwrap().truncate_to(t);
            prop_assert_eq!(assoc_l, assoc_r);

            let distrib_l = a.mul(&b.add(&c).unwrap()).unwrap().truncate_to(t);
            let distrib_r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap().truncate_to(t);
            prop_assert_eq!(distrib_l, distrib_r);

            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }

        #[test]
        fn order_is_additive_under_mul(a in arb_series(16), b in arb_series(16)) {
            let prod = a.mul(&b).unwrap();
            if let (Order::Finite(oa), Order::Finite(ob)) = (a.order(), b.order()) {
                if oa + ob < prod.truncation() {
                    prop_assert_eq!(prod.order(), Order::Finite(oa + ob));
                }
            }
        }

        #[test]
        fn div_undoes_mul(a in arb_series(16), b in arb_series(16)) {
            if let Order::Finite(ob) = b.order() {
                if ob <= 4 {
                    let quot = a.mul(&b).unwrap().div(&b).unwrap();
                    prop_assert_eq!(a.truncate_to(quot.truncation()), quot);
                }
            }
        }
    }
}
