//! Numerical semigroups in canonical sporadic-plus-conductor form, the Arf
//! property, Arf closure, multiplicity sequences, and characters.
//!
//! A numerical semigroup is a co-finite additive submonoid of the naturals.
//! It is *Arf* when every element shift `{n - m : n in S, n >= m}` is again
//! additively closed. Arf semigroups are in bijection with their multiplicity
//! sequences (the consecutive differences of their elements), and the
//! characters of an Arf semigroup generate the smallest semigroup with the
//! same Arf closure. The closure here is computed by the shift recursion
//! `*S = {0} + (m + *<S - m>)`; an independent fixed-point oracle lives in
//! the test suite.

use std::collections::BTreeSet;
use std::fmt;

use num::integer::gcd;

use crate::error::{Error, Result};

/// A co-finite additive submonoid of the naturals.
///
/// `sporadic` lists the elements below `conductor` (always including 0 when
/// the conductor is positive); every integer at or beyond the conductor
/// belongs. The conductor is minimal: `conductor - 1` is a gap unless the
/// semigroup is all of the naturals (conductor 0, empty sporadic list).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumericalSemigroup {
    sporadic: Vec<u64>,
    conductor: u64,
}

impl NumericalSemigroup {
    /// The full semigroup of the naturals.
    pub fn natural() -> NumericalSemigroup {
        NumericalSemigroup {
            sporadic: Vec::new(),
            conductor: 0,
        }
    }

    /// Canonicalize a membership description: `elements` lists every member
    /// below `bound`, and every integer at or beyond `bound` is a member.
    /// The conductor is minimized and additive closure validated.
    pub fn from_parts<I>(elements: I, bound: u64) -> Result<NumericalSemigroup>
    where
        I: IntoIterator<Item = u64>,
    {
        let below: BTreeSet<u64> = elements.into_iter().filter(|&n| n < bound).collect();
        let mut conductor = bound;
        while conductor > 0 && below.contains(&(conductor - 1)) {
            conductor -= 1;
        }
        let sporadic: Vec<u64> = below.range(..conductor).copied().collect();
        let s = NumericalSemigroup {
            sporadic,
            conductor,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Error::Inconsistency(msg);
        if self.conductor > 0 && self.sporadic.first() != Some(&0) {
            return Err(bad("semigroup does not contain 0".to_string()));
        }
        // Additive closure is checkable on pairs below the conductor; sums
        // involving the tail land in the tail.
        for (i, &a) in self.sporadic.iter().enumerate() {
            for &b in &self.sporadic[i..] {
                if !self.contains(a + b) {
                    return Err(bad(format!("{a} + {b} escapes the semigroup")));
                }
            }
        }
        Ok(())
    }

    /// The least additively closed subset of the naturals containing 0 and
    /// the generators. Fails when the gcd exceeds 1 (no co-finite tail).
    pub fn from_generators(generators: &[u64]) -> Result<NumericalSemigroup> {
        let gens: BTreeSet<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let g = gens.iter().fold(0u64, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(Error::NonCoprimeGenerators(
                gens.iter().copied().collect(),
                g,
            ));
        }
        let m = *gens.iter().next().unwrap();
        if m == 1 {
            return Ok(NumericalSemigroup::natural());
        }
        // Least member in each residue class mod m, by relaxation; n belongs
        // iff n >= least[n mod m]. This gives the exact Frobenius number
        // without an a-priori bound.
        let m_us = m as usize;
        let mut least: Vec<u64> = vec![u64::MAX; m_us];
        least[0] = 0;
        let mut changed = true;
        while changed {
            changed = false;
            for r in 0..m_us {
                if least[r] == u64::MAX {
                    continue;
                }
                for &g in &gens {
                    let cand = least[r] + g;
                    let cr = (cand % m) as usize;
                    if cand < least[cr] {
                        least[cr] = cand;
                        changed = true;
                    }
                }
            }
        }
        let frobenius = least.iter().max().copied().unwrap() - m;
        let bound = frobenius + 1;
        let elements = (0..bound).filter(|&n| least[(n % m) as usize] <= n);
        NumericalSemigroup::from_parts(elements, bound)
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.sporadic.binary_search(&n).is_ok()
    }

    /// Elements below the conductor.
    pub fn sporadic(&self) -> &[u64] {
        &self.sporadic
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_natural(&self) -> bool {
        self.conductor == 0
    }

    /// Least nonzero element.
    pub fn multiplicity(&self) -> u64 {
        match self.sporadic.get(1) {
            Some(&m) => m,
            None => self.conductor.max(1),
        }
    }

    /// All elements up to and including `bound`.
    pub fn elements_up_to(&self, bound: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .sporadic
            .iter()
            .copied()
            .take_while(|&n| n <= bound)
            .collect();
        out.extend(self.conductor..=bound);
        out
    }

    /// The Arf property: every shift `{n - m : n in S, n >= m}` by an element
    /// `m` is additively closed. Shifts by elements at or beyond the
    /// conductor contain a full tail from 0 and need no check.
    pub fn is_arf(&self) -> bool {
        let c = self.conductor;
        for &m in &self.sporadic {
            let shifted: Vec<u64> = self
                .sporadic
                .iter()
                .filter(|&&n| n >= m)
                .map(|&n| n - m)
                .collect();
            let in_shift = |x: u64| x + m >= c || shifted.binary_search(&x).is_ok();
            for (i, &a) in shifted.iter().enumerate() {
                for &b in &shifted[i..] {
                    if !in_shift(a + b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The smallest Arf semigroup containing this one, by the shift
    /// recursion: strip the multiplicity m, close the shifted set additively,
    /// recurse, and reattach `{0} + (m + _)`. The conductor strictly
    /// decreases, so the recursion terminates.
    pub fn arf_closure(&self) -> NumericalSemigroup {
        if self.is_arf() {
            return self.clone();
        }
        let m = self.multiplicity();
        let c = self.conductor;
        debug_assert!(c > m, "a semigroup of shape {{0}} + tail is Arf");
        let mut gens: BTreeSet<u64> = self
            .sporadic
            .iter()
            .filter(|&&n| n > m)
            .map(|&n| n - m)
            .collect();
        // The shifted set has a full tail from c - m; two consecutive tail
        // members force gcd 1 and generate everything past 2(c - m).
        gens.extend(c - m..=2 * (c - m) + 2);
        let shifted = NumericalSemigroup::from_generators(&gens.into_iter().collect::<Vec<_>>())
            .expect("shifted set contains consecutive integers");
        let closed = shifted.arf_closure();
        let lifted = closed.elements_up_to(closed.conductor);
        let elements = std::iter::once(0).chain(lifted.into_iter().map(|x| x + m));
        NumericalSemigroup::from_parts(elements, m + closed.conductor.max(1))
            .expect("closure reassembly is additively closed")
    }

    /// Consecutive differences of the elements of an Arf semigroup, up to and
    /// including the first difference 1 (the infinite tail of 1s is implied).
    pub fn multiplicity_sequence(&self) -> Result<MultiplicitySequence> {
        if !self.is_arf() {
            return Err(Error::NotArf);
        }
        let mut entries = Vec::new();
        let mut prev = 0u64;
        for n in self.elements_up_to(self.conductor + 1).into_iter().skip(1) {
            entries.push(n - prev);
            if n - prev == 1 {
                break;
            }
            prev = n;
        }
        MultiplicitySequence::new(entries)
    }

    /// The minimal set of naturals whose generated semigroup has this Arf
    /// semigroup as its Arf closure. Searched exhaustively over subsets of
    /// the elements up to conductor + 1, by cardinality then lexicographic
    /// order; the full pool always succeeds, so the search terminates.
    pub fn characters(&self) -> Result<CharacterSet> {
        if !self.is_arf() {
            return Err(Error::NotArf);
        }
        let pool: Vec<u64> = self
            .elements_up_to(self.conductor + 1)
            .into_iter()
            .filter(|&n| n > 0)
            .collect();
        for size in 1..=pool.len() {
            let mut found: Option<Vec<u64>> = None;
            for_each_combination(&pool, size, &mut |subset| {
                if found.is_some() {
                    return;
                }
                let g = subset.iter().fold(0u64, |acc, &x| gcd(acc, x));
                if g != 1 {
                    return;
                }
                let generated =
                    NumericalSemigroup::from_generators(subset).expect("gcd-1 generator set");
                if generated.arf_closure() == *self {
                    found = Some(subset.to_vec());
                }
            });
            if let Some(chars) = found {
                return CharacterSet::new(&chars);
            }
        }
        Err(Error::Inconsistency(
            "character search exhausted its pool".to_string(),
        ))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for &n in &self.sporadic {
            write!(f, "{n}, ")?;
        }
        write!(f, "{}, {}, ...}}", self.conductor, self.conductor + 1)
    }
}

/// Visit all `size`-element combinations of `pool` in lexicographic order.
fn for_each_combination(pool: &[u64], size: usize, visit: &mut dyn FnMut(&[u64])) {
    fn rec(
        pool: &[u64],
        start: usize,
        current: &mut Vec<u64>,
        size: usize,
        visit: &mut dyn FnMut(&[u64]),
    ) {
        if current.len() == size {
            visit(current);
            return;
        }
        let remaining = size - current.len();
        for i in start..=pool.len().saturating_sub(remaining) {
            current.push(pool[i]);
            rec(pool, i + 1, current, size, visit);
            current.pop();
        }
    }
    if size <= pool.len() {
        rec(pool, 0, &mut Vec::new(), size, visit);
    }
}

/// The multiplicity sequence of an Arf semigroup (equivalently, of a branch):
/// non-increasing positive integers ending at the first 1 of the infinite
/// tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicitySequence {
    entries: Vec<u64>,
}

impl MultiplicitySequence {
    pub fn new(entries: Vec<u64>) -> Result<MultiplicitySequence> {
        let bad = |msg: &str| {
            Error::Inconsistency(format!("invalid multiplicity sequence {entries:?}: {msg}"))
        };
        if entries.is_empty() {
            return Err(bad("empty"));
        }
        if entries.last() != Some(&1) {
            return Err(bad("does not end at the first 1"));
        }
        if entries.iter().filter(|&&e| e == 1).count() != 1 {
            return Err(bad("stores more than the first tail 1"));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(bad("not non-increasing"));
        }
        Ok(MultiplicitySequence { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Reconstruct the Arf semigroup whose element differences these are:
    /// partial sums plus the implied tail of 1s.
    pub fn to_semigroup(&self) -> NumericalSemigroup {
        let mut elements = vec![0u64];
        let mut acc = 0u64;
        for &e in &self.entries {
            acc += e;
            elements.push(acc);
        }
        NumericalSemigroup::from_parts(elements, acc)
            .expect("partial sums of a multiplicity sequence are additively closed")
    }
}

impl fmt::Display for MultiplicitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// A finite gcd-1 set of naturals acting as Arf (Du Val) characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSet {
    chars: Vec<u64>,
}

impl CharacterSet {
    pub fn new(chars: &[u64]) -> Result<CharacterSet> {
        let set: BTreeSet<u64> = chars.iter().copied().filter(|&c| c > 0).collect();
        if set.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let g = set.iter().fold(0u64, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(Error::NonCoprimeGenerators(set.into_iter().collect(), g));
        }
        Ok(CharacterSet {
            chars: set.into_iter().collect(),
        })
    }

    pub fn values(&self) -> &[u64] {
        &self.chars
    }
}

/// Replay the multiplicity sequence from a character set by slowed-down
/// multi-integer Euclidean subtraction: emit the minimum, subtract it from
/// every other element, drop zeros and extra copies of the minimum, stop at
/// the first emitted 1.
///
/// The binding contract, tested rather than assumed, is that this equals
/// `multiplicity_sequence(arf_closure(<chars>))`.
pub fn jacobian_multiplicity_sequence(chars: &CharacterSet) -> MultiplicitySequence {
    let mut multiset: Vec<u64> = chars.values().to_vec();
    let mut entries = Vec::new();
    loop {
        let m = *multiset.iter().min().expect("multiset never empties");
        entries.push(m);
        if m == 1 {
            break;
        }
        let mut next = vec![m];
        let mut min_taken = false;
        for &e in &multiset {
            if e == m && !min_taken {
                min_taken = true;
                continue;
            }
            let reduced = e - m;
            if reduced != 0 && reduced != m {
                next.push(reduced);
            }
        }
        next.sort_unstable();
        multiset = next;
    }
    MultiplicitySequence::new(entries).expect("subtraction emits a non-increasing run ending at 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(list: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(list).unwrap()
    }

    #[test]
    fn from_generators_examples() {
        let cusp = gens(&[2, 3]);
        assert_eq!(cusp.sporadic(), &[0]);
        assert_eq!(cusp.conductor(), 2);

        assert_eq!(gens(&[1]), NumericalSemigroup::natural());

        let s = gens(&[4, 6, 7]);
        assert_eq!(s.sporadic(), &[0, 4, 6, 7, 8]);
        assert_eq!(s.conductor(), 10);
        assert!(!s.contains(9));
        assert!(s.contains(10));
    }

    #[test]
    fn from_generators_rejects_bad_input() {
        assert!(matches!(
            NumericalSemigroup::from_generators(&[]),
            Err(Error::EmptyGenerators)
        ));
        assert!(matches!(
            NumericalSemigroup::from_generators(&[4, 6]),
            Err(Error::NonCoprimeGenerators(_, 2))
        ));
    }

    #[test]
    fn is_arf_examples() {
        assert!(gens(&[2, 3]).is_arf());
        assert!(!gens(&[4, 6, 7]).is_arf());
        assert!(NumericalSemigroup::natural().is_arf());
    }

    #[test]
    fn arf_closure_examples() {
        let closed = gens(&[4, 6, 7]).arf_closure();
        assert_eq!(closed.sporadic(), &[0, 4]);
        assert_eq!(closed.conductor(), 6);

        let cusp = gens(&[2, 3]);
        assert_eq!(cusp.arf_closure(), cusp);

        let n = NumericalSemigroup::natural();
        assert_eq!(n.arf_closure(), n);
    }

    #[test]
    fn closure_is_extensive_and_idempotent() {
        for list in [
            &[5, 7][..],
            &[4, 6, 7],
            &[3, 7, 8],
            &[6, 10, 15],
            &[9, 12, 13],
        ] {
            let s = gens(list);
            let c = s.arf_closure();
            for n in 0..=(s.conductor() + 2) {
                if s.contains(n) {
                    assert!(c.contains(n), "{n} lost by closure of {list:?}");
                }
            }
            assert!(c.is_arf());
            assert_eq!(c.arf_closure(), c);
        }
    }

    #[test]
    fn closure_is_monotone() {
        // G <= H (by enlarging the generator set) implies *G <= *H.
        let seeds: &[&[u64]] = &[&[5, 7], &[4, 6, 7], &[6, 10, 15], &[8, 9], &[7, 11, 13]];
        let extras: &[u64] = &[3, 5, 9, 13];
        for base in seeds {
            let g = gens(base).arf_closure();
            for &extra in extras {
                let mut larger = base.to_vec();
                larger.push(extra);
                let h = gens(&larger).arf_closure();
                let horizon = g.conductor().max(h.conductor()) + 2;
                for n in 0..=horizon {
                    if g.contains(n) {
                        assert!(
                            h.contains(n),
                            "{n} lost monotonicity for {base:?} + {extra}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicity_sequence_examples() {
        assert_eq!(
            gens(&[2, 3]).multiplicity_sequence().unwrap().entries(),
            &[2, 1]
        );
        let closed = gens(&[4, 6, 7]).arf_closure();
        assert_eq!(
            closed.multiplicity_sequence().unwrap().entries(),
            &[4, 2, 1]
        );
        assert_eq!(
            NumericalSemigroup::natural()
                .multiplicity_sequence()
                .unwrap()
                .entries(),
            &[1]
        );
        assert!(matches!(
            gens(&[4, 6, 7]).multiplicity_sequence(),
            Err(Error::NotArf)
        ));
    }

    #[test]
    fn characters_examples() {
        assert_eq!(gens(&[2, 3]).characters().unwrap().values(), &[2, 3]);
        let closed = gens(&[4, 6, 7]).arf_closure();
        assert_eq!(closed.characters().unwrap().values(), &[4, 6, 7]);
        assert_eq!(
            NumericalSemigroup::natural().characters().unwrap().values(),
            &[1]
        );
    }

    #[test]
    fn jacobian_examples() {
        let seq = |list: &[u64]| {
            jacobian_multiplicity_sequence(&CharacterSet::new(list).unwrap())
                .entries()
                .to_vec()
        };
        assert_eq!(seq(&[2, 3]), vec![2, 1]);
        assert_eq!(seq(&[4, 6, 7]), vec![4, 2, 1]);
        assert_eq!(seq(&[5, 7]), vec![5, 2, 2, 1]);
    }

    #[test]
    fn jacobian_matches_spelled_out_iteration() {
        // (5,7) -> emit 5 -> (5,2) -> emit 2 -> (3,2) -> emit 2 -> (1,2) -> emit 1,
        // and the result matches the differences of {0,5,7,9,10,11,...}.
        let closed = gens(&[5, 7]).arf_closure();
        assert_eq!(closed.sporadic(), &[0, 5, 7]);
        assert_eq!(closed.conductor(), 9);
        assert_eq!(
            closed.multiplicity_sequence().unwrap().entries(),
            &[5, 2, 2, 1]
        );
    }

    #[test]
    fn sequence_semigroup_round_trip() {
        for list in [&[2, 3][..], &[5, 7], &[4, 6, 7], &[3, 5], &[7, 8, 9, 10]] {
            let closed = gens(list).arf_closure();
            let seq = closed.multiplicity_sequence().unwrap();
            assert_eq!(seq.to_semigroup(), closed);
        }
    }

    #[test]
    fn sequence_validation() {
        assert!(MultiplicitySequence::new(vec![]).is_err());
        assert!(MultiplicitySequence::new(vec![2]).is_err());
        assert!(MultiplicitySequence::new(vec![2, 1, 1]).is_err());
        assert!(MultiplicitySequence::new(vec![2, 3, 1]).is_err());
        assert!(MultiplicitySequence::new(vec![3, 2, 1]).is_ok());
    }

    #[test]
    fn conductor_is_minimal() {
        let s = NumericalSemigroup::from_parts([0, 2, 3, 4, 5], 6).unwrap();
        assert_eq!(s.conductor(), 2);
        assert_eq!(s.sporadic(), &[0]);
    }

    #[test]
    fn multiplicity_edge_cases() {
        assert_eq!(NumericalSemigroup::natural().multiplicity(), 1);
        assert_eq!(gens(&[3, 4, 5]).multiplicity(), 3);
        let shifted = NumericalSemigroup::from_parts([0], 5).unwrap();
        assert_eq!(shifted.multiplicity(), 5);
    }
}
