//! Parametrized space-curve branches: blow-ups, multiplicity sequences, the
//! value semigroup of the local ring, the Arf-ring property, and the Arf
//! closure of the ring.
//!
//! A branch is given by n coordinate series with zero constant term. Blowing
//! up divides every coordinate by a minimal-order one and translates the
//! result back to the origin; iterating yields the multiplicity sequence.
//! Independently, the completed subalgebra generated by the coordinates has a
//! value semigroup whose Arf closure encodes the same sequence; the agreement
//! of the two routes is the central cross-check of this module.
//!
//! Everything is computed at a finite working truncation. Quantities reported
//! by the pipeline are re-derived at doubled truncation and must not change;
//! on instability the truncation escalates (64, 128, ..., 512) before the
//! run fails loudly.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::semigroup::{
    jacobian_multiplicity_sequence, CharacterSet, MultiplicitySequence, NumericalSemigroup,
};
use crate::series::{Order, TruncatedSeries};
use crate::{DEFAULT_MAX_STEPS, MAX_TRUNCATION};

/// A space-curve branch given by its parametrization: one truncated series
/// with zero constant term per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    coords: Vec<TruncatedSeries>,
}

impl Branch {
    pub fn new(coords: Vec<TruncatedSeries>) -> Result<Branch> {
        if coords.is_empty() {
            return Err(Error::EmptyBranch);
        }
        let field = coords[0].field();
        for c in &coords {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if matches!(c.order(), Order::Finite(0)) {
                return Err(Error::Parse(format!(
                    "branch coordinate {} has a constant term",
                    c.canonical_string()
                )));
            }
        }
        if coords.iter().all(TruncatedSeries::is_effectively_zero) {
            return Err(Error::AllCoordinatesZero);
        }
        Ok(Branch { coords })
    }

    /// Parse a branch file: one coordinate literal per line, blank lines and
    /// `#` comments skipped. Coordinates are read at the maximal supported
    /// truncation so pipelines can later tighten and re-check precision.
    pub fn parse(text: &str, field: Field) -> Result<Branch> {
        let mut coords = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            coords.push(TruncatedSeries::parse(line, field, MAX_TRUNCATION)?);
        }
        Branch::new(coords)
    }

    pub fn coords(&self) -> &[TruncatedSeries] {
        &self.coords
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    /// Restrict every coordinate to the given truncation.
    pub fn truncate_to(&self, truncation: u32) -> Result<Branch> {
        Branch::new(
            self.coords
                .iter()
                .map(|c| c.truncate_to(truncation))
                .collect(),
        )
    }

    /// The least coordinate order. A coordinate that is indistinguishable
    /// from zero with a bound *below* the least visible order makes the
    /// minimum uncertain, which is a precision error, not a value.
    pub fn multiplicity(&self) -> Result<u64> {
        let finite_min = self
            .coords
            .iter()
            .filter_map(|c| c.order().finite())
            .min()
            .ok_or(Error::AllCoordinatesZero)?;
        for c in &self.coords {
            if let Order::AtLeast(bound) = c.order() {
                if bound < finite_min {
                    return Err(Error::InsufficientTruncation(format!(
                        "a coordinate is only known to order >= {bound}, below the visible minimum {finite_min}"
                    )));
                }
            }
        }
        Ok(u64::from(finite_min))
    }

    /// Stable coordinate order used by the blow-up: ascending series order,
    /// ties broken by original position; unknown-order coordinates last.
    fn sorted_coords(&self) -> Vec<&TruncatedSeries> {
        let mut indexed: Vec<(usize, &TruncatedSeries)> = self.coords.iter().enumerate().collect();
        indexed.sort_by_key(|(i, c)| match c.order() {
            Order::Finite(d) => (0u8, d, *i),
            Order::AtLeast(b) => (1u8, b, *i),
        });
        indexed.into_iter().map(|(_, c)| c).collect()
    }

    /// One blow-up: keep a minimal-order coordinate phi_1, replace every
    /// other coordinate by `phi_j / phi_1 - lambda_j` where lambda_j is the
    /// quotient's constant term. Coordinates that become indistinguishable
    /// from zero carry no further information and are dropped with a note.
    pub fn blow_up(&self) -> Result<Branch> {
        Ok(self.blow_up_detailed()?.1)
    }

    pub(crate) fn blow_up_detailed(&self) -> Result<(TruncatedSeries, Branch, Vec<String>)> {
        self.multiplicity()?;
        let sorted = self.sorted_coords();
        let pivot = sorted[0].clone();
        let mut coords = vec![pivot.clone()];
        let mut notes = Vec::new();
        for s in &sorted[1..] {
            let quotient = s.div(&pivot)?;
            let lambda = quotient
                .coefficient(0)
                .expect("quotient truncation is positive");
            let translated = quotient.add_term(0, &lambda.neg())?;
            if translated.is_effectively_zero() {
                notes.push(format!(
                    "dropped coordinate {}: zero after blow-up translation (precision {})",
                    s.canonical_string(),
                    translated.truncation()
                ));
            } else {
                coords.push(translated);
            }
        }
        Ok((pivot, Branch::new(coords)?, notes))
    }

    /// The multiplicities of the successive blow-ups, down to the first
    /// smooth point (multiplicity 1; the infinite tail of 1s is implied).
    pub fn multiplicity_sequence_blowup(&self, max_steps: u32) -> Result<MultiplicitySequence> {
        Ok(self.blowup_sequence_detailed(max_steps)?.0)
    }

    fn blowup_sequence_detailed(
        &self,
        max_steps: u32,
    ) -> Result<(MultiplicitySequence, Vec<String>)> {
        let mut current = self.clone();
        let mut entries = Vec::new();
        let mut notes = Vec::new();
        for _ in 0..max_steps {
            let m = current.multiplicity()?;
            entries.push(m);
            if m == 1 {
                let seq = MultiplicitySequence::new(entries)?;
                return Ok((seq, notes));
            }
            let (_, next, mut step_notes) = current.blow_up_detailed()?;
            notes.append(&mut step_notes);
            current = next;
        }
        Err(Error::MaxStepsExhausted {
            max_steps,
            partial: entries,
        })
    }

    /// Echelonized basis, one monic witness per attained order below the
    /// working truncation, of the complete subalgebra generated by the
    /// coordinates (together with the constants).
    ///
    /// Saturation closes the generators under products and order-reduction.
    /// Products whose order lands in a certified full tail of attained orders
    /// cannot reveal new orders and are skipped; witnesses for tail orders
    /// are materialized afterwards from sum decompositions.
    pub fn subalgebra(&self, truncation: u32) -> Result<SubalgebraBasis> {
        let field = self.field();
        let t_eff = self
            .coords
            .iter()
            .map(TruncatedSeries::truncation)
            .min()
            .unwrap_or(truncation)
            .min(truncation);
        if t_eff < 2 {
            return Err(Error::InsufficientTruncation(format!(
                "effective truncation {t_eff} leaves no room below the constant term"
            )));
        }
        let t = t_eff as usize;

        let mut basis: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
        basis.insert(0, TruncatedSeries::one(field, t_eff));
        let (mut attained, _) = additive_closure(&[0], t);
        let mut queue: VecDeque<TruncatedSeries> = self
            .coords
            .iter()
            .map(|c| c.truncate_to(t_eff))
            .filter(|c| !c.is_effectively_zero())
            .collect();

        while let Some(candidate) = queue.pop_front() {
            let f = tail_start(&attained);
            let Some(reduced) = reduce_against(&basis, candidate, f)? else {
                continue;
            };
            let d = reduced
                .order()
                .finite()
                .expect("reduced remainder has a visible order");
            basis.insert(d, reduced.monic()?);
            let keys: Vec<u32> = basis.keys().copied().collect();
            attained = additive_closure(&keys, t).0;
            let f = tail_start(&attained);
            let new_witness = basis[&d].clone();
            for (&e, w) in basis.range(1..) {
                if d + e < f.min(t_eff) {
                    queue.push_back(new_witness.mul(w)?);
                }
            }
        }

        // Materialize monic witnesses for attained tail orders from their
        // sum decompositions; each is a genuine product of earlier witnesses.
        let keys: Vec<u32> = basis.keys().copied().collect();
        let (attained, parents) = additive_closure(&keys, t);
        for n in 1..t {
            if !attained[n] || basis.contains_key(&(n as u32)) {
                continue;
            }
            let (a, g) = parents[n].expect("non-key attained orders have a decomposition");
            let witness = basis[&a].mul(&basis[&g])?.monic()?;
            debug_assert_eq!(witness.order(), Order::Finite(n as u32));
            basis.insert(n as u32, witness);
        }

        Ok(SubalgebraBasis {
            field,
            truncation: t_eff,
            basis,
        })
    }

    /// Basis of the Arf closure of the branch's local ring, built by the
    /// recursion `*H = k + phi_1 * (*H_1)` with H_1 the blow-up subalgebra,
    /// stopping when the subalgebra is already an Arf ring. The recursion
    /// depth is bounded by the blow-up resolution length.
    pub fn arf_ring_closure(&self, truncation: u32) -> Result<SubalgebraBasis> {
        self.arf_ring_closure_rec(truncation, DEFAULT_MAX_STEPS)
    }

    fn arf_ring_closure_rec(&self, truncation: u32, fuel: u32) -> Result<SubalgebraBasis> {
        if fuel == 0 {
            return Err(Error::RecursionDepthExceeded(DEFAULT_MAX_STEPS));
        }
        let h = self.subalgebra(truncation)?;
        if h.is_arf_ring()? {
            return Ok(h);
        }
        let (pivot, blown, _) = self.blow_up_detailed()?;
        let inner = blown.arf_ring_closure_rec(truncation, fuel - 1)?;
        let t_res = inner.truncation;
        let v = pivot
            .order()
            .finite()
            .expect("pivot order is the multiplicity");

        let mut basis: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
        basis.insert(0, TruncatedSeries::one(self.field(), t_res));
        for (&d, w) in &inner.basis {
            let order = v + d;
            if order < t_res {
                let witness = pivot.mul(w)?.truncate_to(t_res).monic()?;
                debug_assert_eq!(witness.order(), Order::Finite(order));
                basis.insert(order, witness);
            }
        }
        Ok(SubalgebraBasis {
            field: self.field(),
            truncation: t_res,
            basis,
        })
    }

    /// Run the whole pipeline at one truncation: blow-up route, value
    /// semigroup, its Arf closure, semigroup-route multiplicity sequence,
    /// characters, Jacobian replay, and the two-route agreement verdict.
    pub fn report(&self, truncation: u32, max_steps: u32) -> Result<BranchReport> {
        let working = self.truncate_to(truncation)?;
        let (blowup_sequence, notes) = working.blowup_sequence_detailed(max_steps)?;
        let h = working.subalgebra(truncation)?;
        let orders = h.orders_semigroup()?;
        let closure = orders.arf_closure();
        let semigroup_sequence = closure.multiplicity_sequence()?;
        let characters = closure.characters()?;
        let jacobian_replay = jacobian_multiplicity_sequence(&characters);
        let consistent = blowup_sequence == semigroup_sequence;
        Ok(BranchReport {
            truncation,
            blowup_sequence,
            orders,
            closure,
            semigroup_sequence,
            characters,
            jacobian_replay,
            consistent,
            notes,
        })
    }

    /// Precision-guarded pipeline: the report is recomputed at doubled
    /// truncation and every reported quantity must agree; on disagreement or
    /// a precision error the truncation escalates (doubling, up to
    /// [`MAX_TRUNCATION`]) before failing loudly.
    pub fn report_guarded(
        &self,
        truncation: u32,
        max_steps: u32,
    ) -> Result<(BranchReport, Vec<String>)> {
        let mut t = truncation;
        let mut retries = Vec::new();
        loop {
            if 2 * t > MAX_TRUNCATION {
                return Err(Error::TruncationInstability(format!(
                    "still unstable at truncation {t}; giving up at the {MAX_TRUNCATION} ceiling"
                )));
            }
            match (self.report(t, max_steps), self.report(2 * t, max_steps)) {
                (Ok(lo), Ok(hi)) if lo.agrees_with(&hi) => return Ok((lo, retries)),
                (Ok(_), Ok(_)) => {
                    retries.push(format!(
                        "results changed between truncations {t} and {}",
                        2 * t
                    ));
                }
                (Err(e), _) | (_, Err(e)) if e.kind() == crate::ErrorKind::Precision => {
                    retries.push(format!("precision failure near truncation {t}: {e}"));
                }
                (Err(e), _) => return Err(e),
                (_, Err(e)) => return Err(e),
            }
            t *= 2;
        }
    }
}

/// Echelonized basis of a complete subalgebra of the power series ring: one
/// monic witness per attained order below the working truncation. The key
/// set approximates the value semigroup of the algebra.
#[derive(Debug, Clone)]
pub struct SubalgebraBasis {
    field: Field,
    truncation: u32,
    basis: BTreeMap<u32, TruncatedSeries>,
}

impl SubalgebraBasis {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Attained orders below the truncation.
    pub fn orders(&self) -> Vec<u32> {
        self.basis.keys().copied().collect()
    }

    pub fn witness(&self, order: u32) -> Option<&TruncatedSeries> {
        self.basis.get(&order)
    }

    /// The canonical value semigroup of the attained orders. A certified
    /// tail requires a run of consecutive attained orders at least as long
    /// as the least positive order; without one the truncation is too small
    /// to pin the conductor down.
    pub fn orders_semigroup(&self) -> Result<NumericalSemigroup> {
        let t = self.truncation;
        let m = self
            .basis
            .keys()
            .find(|&&k| k > 0)
            .copied()
            .ok_or(Error::NoStableTail { truncation: t })?;
        let f = (0..=t.saturating_sub(m))
            .find(|&f| (f..f + m).all(|d| self.basis.contains_key(&d)))
            .ok_or(Error::NoStableTail { truncation: t })?;
        debug_assert!((f..t).all(|d| self.basis.contains_key(&d)));
        NumericalSemigroup::from_parts(self.basis.keys().map(|&k| u64::from(k)), u64::from(f))
    }

    /// The Arf-ring test: for every attained positive order m below the
    /// conductor, the quotients of the basis witnesses by the order-m witness
    /// must multiply pairwise back into their own span, checked to precision
    /// `truncation - m`. Products whose order lands in the quotient set's
    /// full tail are in the span automatically.
    pub fn is_arf_ring(&self) -> Result<bool> {
        let sg = self.orders_semigroup()?;
        let conductor = sg.conductor();
        let f = tail_start_of_keys(&self.basis, self.truncation);
        for (&m, s_m) in self.basis.range(1..) {
            if u64::from(m) >= conductor {
                break;
            }
            let fr = f.saturating_sub(m);
            let mut quotients: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
            for (&d, w) in self.basis.range(m..) {
                if d - m >= fr {
                    break;
                }
                quotients.insert(d - m, w.div(s_m)?.monic()?);
            }
            let entries: Vec<(u32, TruncatedSeries)> =
                quotients.iter().map(|(d, q)| (*d, q.clone())).collect();
            for (i, (dx, x)) in entries.iter().enumerate() {
                for (dy, y) in &entries[i..] {
                    if dx + dy >= fr {
                        break;
                    }
                    let product = x.mul(y)?;
                    if reduce_against(&quotients, product, fr)?.is_some() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Pipeline output for one branch at one truncation.
#[derive(Debug, Clone)]
pub struct BranchReport {
    pub truncation: u32,
    /// Multiplicity sequence from iterated blow-ups.
    pub blowup_sequence: MultiplicitySequence,
    /// Value semigroup of the coordinate subalgebra.
    pub orders: NumericalSemigroup,
    /// Arf closure of the value semigroup.
    pub closure: NumericalSemigroup,
    /// Multiplicity sequence read off the closed semigroup.
    pub semigroup_sequence: MultiplicitySequence,
    /// Characters of the closed semigroup.
    pub characters: CharacterSet,
    /// Multiplicity sequence replayed from the characters.
    pub jacobian_replay: MultiplicitySequence,
    /// Whether the blow-up route and the semigroup route agree.
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl BranchReport {
    /// Equality of every reported quantity (the precision guard's notion of
    /// stability); truncation and notes are excluded.
    pub fn agrees_with(&self, other: &BranchReport) -> bool {
        self.blowup_sequence == other.blowup_sequence
            && self.orders == other.orders
            && self.closure == other.closure
            && self.semigroup_sequence == other.semigroup_sequence
            && self.characters == other.characters
            && self.jacobian_replay == other.jacobian_replay
            && self.consistent == other.consistent
    }
}

/// Subtract matching-order basis witnesses until the remainder's order is
/// missing from the basis (a genuinely new order), lands at or beyond
/// `tail_start` (inside the certified span), or the remainder vanishes.
fn reduce_against(
    basis: &BTreeMap<u32, TruncatedSeries>,
    mut s: TruncatedSeries,
    tail_start: u32,
) -> Result<Option<TruncatedSeries>> {
    loop {
        match s.order() {
            Order::AtLeast(_) => return Ok(None),
            Order::Finite(d) if d >= tail_start => return Ok(None),
            Order::Finite(d) => match basis.get(&d) {
                None => return Ok(Some(s)),
                Some(w) => {
                    let lc = s
                        .leading_coefficient()
                        .expect("finite order implies a leading coefficient")
                        .clone();
                    s = s.sub(&w.scale(&lc)?)?;
                }
            },
        }
    }
}

/// Additive closure of a key set within `[0, t)`, with one deterministic
/// decomposition `n = rest + key` per non-key member (smallest key wins).
#[allow(clippy::type_complexity)]
fn additive_closure(keys: &[u32], t: usize) -> (Vec<bool>, Vec<Option<(u32, u32)>>) {
    let mut attained = vec![false; t];
    let mut parents: Vec<Option<(u32, u32)>> = vec![None; t];
    if t > 0 {
        attained[0] = true;
    }
    let positive: Vec<usize> = keys
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| k as usize)
        .collect();
    for n in 1..t {
        if keys.binary_search(&(n as u32)).is_ok() {
            attained[n] = true;
            continue;
        }
        for &g in &positive {
            if g > n {
                break;
            }
            if attained[n - g] {
                attained[n] = true;
                parents[n] = Some(((n - g) as u32, g as u32));
                break;
            }
        }
    }
    (attained, parents)
}

/// Least f such that every order in `[f, t)` is attained; `t` when none are.
fn tail_start(attained: &[bool]) -> u32 {
    let mut f = attained.len();
    while f > 0 && attained[f - 1] {
        f -= 1;
    }
    f as u32
}

fn tail_start_of_keys(basis: &BTreeMap<u32, TruncatedSeries>, t: u32) -> u32 {
    let mut f = t;
    while f > 0 && basis.contains_key(&(f - 1)) {
        f -= 1;
    }
    f
}
