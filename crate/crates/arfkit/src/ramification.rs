//! Lower-numbered ramification filtrations, the Herbrand transition function,
//! upper numbering, jump detection, and the Hasse-Arf integrality check.
//!
//! The input is the abstract filtration: the chain of group orders
//! `|G_-1| >= |G_0| >= ... >= |G_r| = 1`, each dividing the previous. The
//! Herbrand function is the piecewise-linear integral of the reciprocal
//! indices `1/(G_0 : G_t)`, with slope `|G_i|/|G_0|` on `(i-1, i]` and slope
//! 1 on `[-1, 0]`; it transports the lower numbering to the upper numbering
//! through `G^{phi(u)} = G_u`. All arithmetic is exact rational.
//!
//! On the quaternion-shaped order chain (8,8,8,2,2,1) the upper jumps
//! computed from this integral are 1 and 3/2 (slopes 1, 1/4, 1/4 past u = 1).
//! A value of 3/4 is sometimes quoted for this example; the breakpoint table
//! of the integral does not produce it, and this module reports what the
//! integral gives.

use std::fmt;

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, is_integral};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn urat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A lower-numbered ramification filtration, given as the chain of group
/// orders `o_-1, o_0, ..., o_r` with `o_r = 1`.
///
/// Whether the group is abelian cannot be read off the order chain, so it is
/// caller-supplied metadata; the Hasse-Arf check is then a consistency test
/// on the data rather than a theorem verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    orders: Vec<u64>,
    abelian: bool,
    label: String,
}

impl Filtration {
    /// Validate an order chain: non-increasing, each order dividing the
    /// previous, terminating at 1. Redundant trailing 1s are trimmed so the
    /// index of the last group is minimal.
    pub fn new(orders: &[u64], abelian: bool, label: &str) -> Result<Filtration> {
        let bad = |msg: String| Error::InvalidFiltration(msg);
        if orders.len() < 2 {
            return Err(bad(format!(
                "need at least o_-1 and o_0, got {} orders",
                orders.len()
            )));
        }
        if *orders.last().unwrap() != 1 {
            return Err(bad(
                "the chain must terminate at the trivial group (order 1)".to_string(),
            ));
        }
        for w in orders.windows(2) {
            if w[1] > w[0] || w[1] == 0 || w[0] % w[1] != 0 {
                return Err(bad(format!(
                    "{} does not divide {} or the chain increases",
                    w[1], w[0]
                )));
            }
        }
        let mut trimmed: Vec<u64> = orders.to_vec();
        while trimmed.len() > 2 && trimmed[trimmed.len() - 2] == 1 {
            trimmed.pop();
        }
        Ok(Filtration {
            orders: trimmed,
            abelian,
            label: label.to_string(),
        })
    }

    /// Group orders `o_-1, o_0, ..., o_r`.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn abelian(&self) -> bool {
        self.abelian
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Index r of the first trivial group in lower numbering.
    pub fn last_index(&self) -> u64 {
        self.orders.len() as u64 - 2
    }

    /// `|G_i|` with the chain extended by 1s beyond r; `i = -1` is the full
    /// group.
    pub fn order_at(&self, i: i64) -> u64 {
        if i < -1 {
            return self.orders[0];
        }
        if i >= self.orders.len() as i64 - 1 {
            return 1;
        }
        self.orders[(i + 1) as usize]
    }

    /// `|G_t|` for real t with the convention that `G_t = G_i` for the
    /// smallest integer i >= t.
    pub fn order_at_rational(&self, t: &BigRational) -> u64 {
        self.order_at(t.ceil().to_integer().try_into().unwrap_or(i64::MAX))
    }

    /// Breakpoints `(u, phi(u))` of the Herbrand function at integer u from
    /// 0 to r, plus the exact slope on each unit interval.
    pub fn herbrand_map(&self) -> HerbrandMap {
        let o0 = urat(self.order_at(0));
        let r = self.last_index() as i64;
        let mut breakpoints = vec![(0i64, BigRational::zero())];
        let mut slopes = Vec::new();
        let mut value = BigRational::zero();
        for i in 1..=r {
            let slope = urat(self.order_at(i)) / o0.clone();
            value += slope.clone();
            slopes.push(slope);
            breakpoints.push((i, value.clone()));
        }
        let tail_slope = BigRational::one() / o0;
        HerbrandMap {
            breakpoints,
            slopes,
            tail_slope,
        }
    }

    /// The Herbrand function: exact piecewise-linear value of the integral
    /// of `1/(G_0 : G_t)` from 0 to u, linearly extended with slope 1 on
    /// `[-1, 0]`. Defined for u >= -1.
    pub fn phi(&self, u: &BigRational) -> Result<BigRational> {
        if *u < rat(-1) {
            return Err(Error::BelowMinusOne(format_rational(u)));
        }
        Ok(self.herbrand_map().phi(u))
    }

    /// Inverse of the Herbrand function; `psi(phi(u)) = u` exactly.
    pub fn psi(&self, v: &BigRational) -> Result<BigRational> {
        if *v < rat(-1) {
            return Err(Error::BelowMinusOne(format_rational(v)));
        }
        Ok(self.herbrand_map().psi(v))
    }

    /// `|G^v| = |G_{psi(v)}|`, with the smallest-integer-at-least convention
    /// applied to psi(v).
    pub fn upper_group_order(&self, v: &BigRational) -> Result<u64> {
        let u = self.psi(v)?;
        Ok(self.order_at_rational(&u))
    }

    /// Integers u >= 0 where the filtration drops: `o_u != o_{u+1}`. The tame
    /// drop at u = -1 (when `o_-1 != o_0`) is reported separately by
    /// [`Filtration::has_tame_drop`].
    pub fn lower_jumps(&self) -> Vec<u64> {
        (0..=self.last_index())
            .filter(|&u| self.order_at(u as i64) != self.order_at(u as i64 + 1))
            .collect()
    }

    /// True when the unramified quotient is nontrivial (`o_-1 != o_0`).
    pub fn has_tame_drop(&self) -> bool {
        self.order_at(-1) != self.order_at(0)
    }

    /// Upper-numbering jumps: the phi-images of the lower jumps, sorted
    /// because phi is increasing.
    pub fn upper_jumps(&self) -> Vec<BigRational> {
        let map = self.herbrand_map();
        self.lower_jumps()
            .into_iter()
            .map(|u| map.phi(&urat(u)))
            .collect()
    }

    /// Hasse-Arf as a data-consistency check: an abelian filtration must have
    /// integral upper jumps; a non-integral jump under the abelian flag
    /// means the data cannot come from an abelian extension.
    pub fn hasse_arf_check(&self) -> HasseArfReport {
        let lower = self.lower_jumps();
        let upper = self.upper_jumps();
        let all_integral = upper.iter().all(is_integral);
        let verdict = match (self.abelian, all_integral) {
            (true, true) => HasseArfVerdict::Pass,
            (true, false) => HasseArfVerdict::Violation,
            (false, _) => HasseArfVerdict::NonAbelianInfo,
        };
        HasseArfReport {
            lower_jumps: lower,
            upper_jumps: upper,
            all_integral,
            verdict,
        }
    }
}

/// The Herbrand function as exact breakpoint/slope data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerbrandMap {
    /// `(u, phi(u))` at integer u = 0..r.
    breakpoints: Vec<(i64, BigRational)>,
    /// Slope `o_i / o_0` on `(i-1, i]` for i = 1..r.
    slopes: Vec<BigRational>,
    /// Slope past the last breakpoint: `1/o_0`.
    tail_slope: BigRational,
}

impl HerbrandMap {
    pub fn breakpoints(&self) -> &[(i64, BigRational)] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[BigRational] {
        &self.slopes
    }

    pub fn phi(&self, u: &BigRational) -> BigRational {
        if !u.is_positive() {
            // Slope 1 on [-1, 0].
            return u.clone();
        }
        let (last_u, last_phi) = self.breakpoints.last().unwrap();
        if *u > rat(*last_u) {
            return last_phi.clone() + (u - rat(*last_u)) * self.tail_slope.clone();
        }
        // u lies in (i-1, i] for a unique breakpoint index i >= 1.
        let i: usize = u
            .ceil()
            .to_integer()
            .try_into()
            .expect("0 < u <= last breakpoint");
        let (_, phi_prev) = &self.breakpoints[i - 1];
        phi_prev.clone() + (u - rat(i as i64 - 1)) * self.slopes[i - 1].clone()
    }

    pub fn psi(&self, v: &BigRational) -> BigRational {
        if !v.is_positive() {
            return v.clone();
        }
        let (last_u, last_phi) = self.breakpoints.last().unwrap();
        if v > last_phi {
            return rat(*last_u) + (v - last_phi) / self.tail_slope.clone();
        }
        // Slopes are positive, so phi is strictly increasing and the segment
        // whose phi-value first reaches v is unique.
        for (i, slope) in self.slopes.iter().enumerate() {
            let (u_hi, phi_hi) = &self.breakpoints[i + 1];
            if v <= phi_hi {
                return rat(*u_hi) - (phi_hi - v) / slope.clone();
            }
        }
        unreachable!("v <= phi(last breakpoint) lands in some segment");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HasseArfVerdict {
    /// Abelian flag set and all upper jumps integral.
    Pass,
    /// Abelian flag set but a non-integral upper jump exists: the input data
    /// is internally inconsistent.
    Violation,
    /// Abelian flag not set; integrality is reported but not required.
    NonAbelianInfo,
}

impl fmt::Display for HasseArfVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HasseArfVerdict::Pass => "PASS",
            HasseArfVerdict::Violation => "VIOLATION",
            HasseArfVerdict::NonAbelianInfo => "NON_ABELIAN_INFO",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseArfReport {
    pub lower_jumps: Vec<u64>,
    pub upper_jumps: Vec<BigRational>,
    pub all_integral: bool,
    pub verdict: HasseArfVerdict,
}
