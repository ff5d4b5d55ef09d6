//! Test-side oracles, kept independent of the library's implementation
//! paths: a least-fixed-point Arf closure, an exhaustive enumerator of Arf
//! semigroups by bounded conductor, and deterministic random data helpers.

use arfkit::semigroup::NumericalSemigroup;
use rand::Rng;

/// Arf closure by least-fixed-point saturation over an explicit membership
/// window: repeatedly add every sum forced by some element shift, re-close
/// additively, and stop when every shift is closed. Independent of the
/// library's shift recursion.
pub fn arf_closure_fixed_point(s: &NumericalSemigroup) -> NumericalSemigroup {
    let window = (2 * s.conductor() + 8).max(16) as usize;
    let mut member = vec![false; window];
    for n in s.elements_up_to(window as u64 - 1) {
        member[n as usize] = true;
    }
    loop {
        let conductor = conductor_in(&member);
        let mut added = false;
        for m in 0..conductor {
            if !member[m] {
                continue;
            }
            let shifted: Vec<usize> = (m..conductor)
                .filter(|&n| member[n])
                .map(|n| n - m)
                .collect();
            for (i, &a) in shifted.iter().enumerate() {
                for &b in &shifted[i..] {
                    if a + b < conductor - m && !member[a + b + m] {
                        member[a + b + m] = true;
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
        // Restore additive closure after the forced insertions.
        loop {
            let mut grew = false;
            let present: Vec<usize> = (0..window).filter(|&n| member[n]).collect();
            for (i, &a) in present.iter().enumerate() {
                for &b in &present[i..] {
                    if a + b < window && !member[a + b] {
                        member[a + b] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }
    let conductor = conductor_in(&member) as u64;
    NumericalSemigroup::from_parts(
        (0..member.len() as u64).filter(|&n| member[n as usize]),
        conductor,
    )
    .expect("fixed point is a semigroup")
}

fn conductor_in(member: &[bool]) -> usize {
    (0..member.len())
        .rev()
        .find(|&n| !member[n])
        .map_or(0, |gap| gap + 1)
}

/// All Arf semigroups with conductor at most `max_conductor`, generated by
/// unshifting: every Arf semigroup other than the naturals is uniquely
/// `{0} + (m + T)` for an Arf semigroup T and an element m >= 2 of T.
pub fn enumerate_arf_semigroups(max_conductor: u64) -> Vec<NumericalSemigroup> {
    let mut out = Vec::new();
    let mut stack = vec![NumericalSemigroup::natural()];
    while let Some(t) = stack.pop() {
        out.push(t.clone());
        if t.conductor() >= max_conductor {
            continue;
        }
        let budget = max_conductor - t.conductor();
        for m in t.elements_up_to(budget) {
            if m < 2 {
                continue;
            }
            let lifted = t.elements_up_to(t.conductor());
            let elements = std::iter::once(0).chain(lifted.into_iter().map(|x| x + m));
            let child = NumericalSemigroup::from_parts(elements, m + t.conductor().max(1))
                .expect("unshift of an Arf semigroup is additively closed");
            debug_assert!(child.is_arf());
            stack.push(child);
        }
    }
    out
}

/// A random generator set with the given element bound and overall gcd 1.
pub fn random_coprime_set<R: Rng>(rng: &mut R, max_element: u64, max_size: usize) -> Vec<u64> {
    loop {
        let size = rng.gen_range(2..=max_size);
        let mut gens: Vec<u64> = (0..size).map(|_| rng.gen_range(2..=max_element)).collect();
        gens.sort_unstable();
        gens.dedup();
        if gens.len() >= 2 && gens.iter().fold(0u64, |acc, &x| num::integer::gcd(acc, x)) == 1 {
            return gens;
        }
    }
}
