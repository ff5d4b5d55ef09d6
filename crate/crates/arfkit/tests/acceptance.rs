//! Acceptance suite: every release criterion as one test, exact arithmetic
//! throughout, each printing a PASS line with the scale it ran at. Brute
//! force oracles live in `common` and stay independent of the library's
//! implementation paths.

mod common;

use std::collections::BTreeSet;
use std::process::Command;

use num::rational::BigRational;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arfkit::branch::Branch;
use arfkit::quadratic::QuadraticFormF2;
use arfkit::ramification::{Filtration, HasseArfVerdict};
use arfkit::scalar::is_integral;
use arfkit::semigroup::{jacobian_multiplicity_sequence, CharacterSet, NumericalSemigroup};
use arfkit::series::{Order, TruncatedSeries};
use arfkit::{Field, MAX_TRUNCATION};

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xA2F_0000 + stream)
}

/// All coefficient arrays in the given dimension (upper-triangular bits).
fn all_forms(dim: usize) -> Vec<QuadraticFormF2> {
    let slots: Vec<(usize, usize)> = (1..=dim)
        .flat_map(|i| (i..=dim).map(move |j| (i, j)))
        .collect();
    (0u32..1 << slots.len())
        .map(|mask| {
            let terms: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &ij)| ij)
                .collect();
            QuadraticFormF2::from_terms(dim, &terms).unwrap()
        })
        .collect()
}

fn random_nondegenerate_form<R: Rng>(rng: &mut R, dim: usize) -> QuadraticFormF2 {
    loop {
        let terms: Vec<(usize, usize)> = (1..=dim)
            .flat_map(|i| (i..=dim).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let q = QuadraticFormF2::from_terms(dim, &terms).unwrap();
        if q.is_nondegenerate() {
            return q;
        }
    }
}

/// The shared form corpus of criteria 1 and 2.
fn form_corpus() -> Vec<QuadraticFormF2> {
    let mut corpus: Vec<QuadraticFormF2> = Vec::new();
    corpus.extend(
        all_forms(2)
            .into_iter()
            .filter(QuadraticFormF2::is_nondegenerate),
    );
    corpus.extend(
        all_forms(4)
            .into_iter()
            .filter(QuadraticFormF2::is_nondegenerate),
    );
    let mut r = rng(1);
    for dim in [6, 8] {
        for _ in 0..1000 {
            corpus.push(random_nondegenerate_form(&mut r, dim));
        }
    }
    corpus
}

#[test]
fn criterion_01_arf_invariant_agreement() {
    let corpus = form_corpus();
    for q in &corpus {
        assert_eq!(
            q.arf_democratic().unwrap(),
            q.arf_symplectic().unwrap(),
            "routes disagree on {}",
            q.canonical_string()
        );
    }
    println!(
        "PASS criterion 1: democratic = symplectic Arf on {} nondegenerate forms (dim 2, 4 exhaustive; 1000 random each at dim 6, 8)",
        corpus.len()
    );
}

#[test]
fn criterion_02_count_dichotomy() {
    let corpus = form_corpus();
    for q in &corpus {
        let m = q.dim() / 2;
        let count = q.count_ones().unwrap();
        let half = 1u64 << (q.dim() - 1);
        let gap = 1u64 << (m - 1);
        assert!(
            count == half - gap || count == half + gap,
            "count {} outside the dichotomy for {}",
            count,
            q.canonical_string()
        );
        let arf = q.arf_democratic().unwrap();
        assert_eq!(arf == 1, count == half + gap);
    }
    println!(
        "PASS criterion 2: one-counts sit at 2^(2m-1) +/- 2^(m-1) with Arf = 1 exactly on the larger, {} forms",
        corpus.len()
    );
}

#[test]
fn criterion_03_closure_minimality_oracle() {
    // Confidence check on the enumerator itself first: brute force over all
    // membership patterns at small conductor must give the same family.
    let small = common::enumerate_arf_semigroups(8);
    let brute = brute_force_arf_semigroups(8);
    assert_eq!(
        small.iter().collect::<BTreeSet<_>>().len(),
        small.len(),
        "enumerator emitted duplicates"
    );
    assert_eq!(
        small.into_iter().collect::<BTreeSet<_>>(),
        brute.into_iter().collect::<BTreeSet<_>>()
    );

    let mut r = rng(3);
    let all_arf_30 = common::enumerate_arf_semigroups(30);
    let mut intersection_checked = 0usize;
    let total = 200;
    for _ in 0..total {
        let gens = common::random_coprime_set(&mut r, 20, 4);
        let s = NumericalSemigroup::from_generators(&gens).unwrap();
        let closure = s.arf_closure();
        assert_eq!(
            closure,
            common::arf_closure_fixed_point(&s),
            "fixed-point oracle disagrees for generators {gens:?}"
        );
        if closure.conductor() <= 30 {
            let supersets: Vec<&NumericalSemigroup> = all_arf_30
                .iter()
                .filter(|a| {
                    let horizon = s.conductor().max(a.conductor());
                    s.elements_up_to(horizon).into_iter().all(|x| a.contains(x))
                })
                .collect();
            assert!(!supersets.is_empty());
            let members = (0..60u64).filter(|&n| supersets.iter().all(|a| a.contains(n)));
            let intersection = NumericalSemigroup::from_parts(members, 31).unwrap();
            assert_eq!(
                intersection, closure,
                "intersection oracle disagrees for {gens:?}"
            );
            intersection_checked += 1;
        }
    }
    assert!(
        intersection_checked >= 50,
        "only {intersection_checked} closures fit the conductor-30 intersection oracle"
    );
    println!(
        "PASS criterion 3: arf_closure = fixed-point oracle on {total} random generator sets, = intersection of all {} Arf supersets (conductor <= 30) on {intersection_checked} of them",
        all_arf_30.len()
    );
}

/// Brute-force Arf semigroup family for tiny conductors: every membership
/// pattern below the conductor, filtered by the definitions alone.
fn brute_force_arf_semigroups(max_conductor: u64) -> Vec<NumericalSemigroup> {
    let mut out = vec![NumericalSemigroup::natural()];
    for c in 2..=max_conductor {
        // Members below c always include 0, never c-1 (minimality).
        let free: Vec<u64> = (1..c - 1).collect();
        for mask in 0u32..1 << free.len() {
            let mut members: Vec<u64> = vec![0];
            for (k, &n) in free.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    members.push(n);
                }
            }
            let contains = |x: u64| -> bool { x >= c || members.binary_search(&x).is_ok() };
            let horizon = 2 * c + 2;
            let closed = (0..horizon).all(|a| {
                (a..horizon)
                    .all(|b| !contains(a) || !contains(b) || a + b >= horizon || contains(a + b))
            });
            if !closed {
                continue;
            }
            let arf = members.iter().all(|&m| {
                let shifted: Vec<u64> = (m..c).filter(|&n| contains(n)).map(|n| n - m).collect();
                shifted.iter().enumerate().all(|(i, &a)| {
                    shifted[i..]
                        .iter()
                        .all(|&b| a + b + m >= c || shifted.binary_search(&(a + b)).is_ok())
                })
            });
            if arf {
                out.push(NumericalSemigroup::from_parts(members, c).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_04_character_round_trip() {
    let family = common::enumerate_arf_semigroups(20);
    for a in &family {
        let chars = a.characters().unwrap();
        let regenerated = NumericalSemigroup::from_generators(chars.values())
            .unwrap()
            .arf_closure();
        assert_eq!(
            &regenerated, a,
            "characters {chars:?} do not regenerate {a}"
        );
        for drop in 0..chars.values().len() {
            let remaining: Vec<u64> = chars
                .values()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != drop)
                .map(|(_, &v)| v)
                .collect();
            let still_works = NumericalSemigroup::from_generators(&remaining)
                .map(|g| g.arf_closure() == *a)
                .unwrap_or(false);
            assert!(
                !still_works,
                "character {} of {a} is redundant",
                chars.values()[drop]
            );
        }
    }
    println!(
        "PASS criterion 4: character round trip and deletion-minimality on all {} Arf semigroups with conductor <= 20",
        family.len()
    );
}

#[test]
fn criterion_05_jacobian_equivalence() {
    let mut r = rng(5);
    let total = 500;
    for _ in 0..total {
        let values = common::random_coprime_set(&mut r, 30, 4);
        let chars = CharacterSet::new(&values).unwrap();
        let replayed = jacobian_multiplicity_sequence(&chars);
        let via_closure = NumericalSemigroup::from_generators(&values)
            .unwrap()
            .arf_closure()
            .multiplicity_sequence()
            .unwrap();
        assert_eq!(
            replayed, via_closure,
            "disagreement for characters {values:?}"
        );
    }
    println!(
        "PASS criterion 5: Jacobian replay = closure-route multiplicity sequence on {total} character sets (elements <= 30)"
    );
}

/// The branch corpus: hand-checked fixtures plus every monomial branch with
/// two or three exponents <= 10 and gcd 1.
fn branch_corpus() -> Vec<(String, Branch)> {
    let mk = |coords: &[&str]| -> Branch {
        Branch::new(
            coords
                .iter()
                .map(|c| TruncatedSeries::parse(c, Field::Rationals, MAX_TRUNCATION).unwrap())
                .collect(),
        )
        .unwrap()
    };
    // Hand fixtures stay inside the class where the value semigroup is a
    // faithful invariant (monomial-like branches); branches outside it are
    // exercised separately in the branch module's unit tests.
    let mut corpus: Vec<(String, Branch)> = vec![
        ("cusp".into(), mk(&["t^2", "t^3"])),
        ("gap".into(), mk(&["t^4", "t^4 + t^7"])),
        ("pair57".into(), mk(&["t^5", "t^7"])),
        ("dense".into(), mk(&["t^3 - t^4", "t^5 + 1/2*t^7"])),
        ("cusp-scaled".into(), mk(&["3*t^2", "5*t^3"])),
        ("dense-gap".into(), mk(&["t^4 + t^6", "t^7 - t^9"])),
        ("space".into(), mk(&["t^4", "t^6 + t^7", "t^9"])),
        (
            "late-gap".into(),
            mk(&["t^6", "t^6 + t^8", "t^6 + t^9 + t^13"]),
        ),
    ];
    let gcd = |v: &[u64]| v.iter().fold(0u64, |a, &x| num::integer::gcd(a, x));
    for a in 1..=10u64 {
        for b in (a + 1)..=10 {
            if gcd(&[a, b]) == 1 {
                corpus.push((
                    format!("mono-{a}-{b}"),
                    mk(&[&format!("t^{a}"), &format!("t^{b}")]),
                ));
            }
        }
    }
    for a in 1..=10u64 {
        for b in (a + 1)..=10 {
            for c in (b + 1)..=10 {
                if gcd(&[a, b, c]) == 1 {
                    corpus.push((
                        format!("mono-{a}-{b}-{c}"),
                        mk(&[&format!("t^{a}"), &format!("t^{b}"), &format!("t^{c}")]),
                    ));
                }
            }
        }
    }
    corpus
}

#[test]
fn criterion_06_two_route_branch_agreement() {
    let corpus = branch_corpus();
    assert!(corpus.len() >= 30);
    let expected: &[(&str, &[u64])] = &[
        ("cusp", &[2, 1]),
        ("gap", &[4, 3, 1]),
        ("pair57", &[5, 2, 2, 1]),
    ];
    for truncation in [64, 128] {
        for (name, branch) in &corpus {
            // The guarded pipeline may escalate past its starting truncation
            // when the value semigroup's conductor does not fit the window
            // (t^9, t^10 needs 72); escalation is part of the contract.
            let (report, _) = branch
                .report_guarded(truncation, 64)
                .unwrap_or_else(|e| panic!("{name} from T={truncation}: {e}"));
            assert!(
                report.consistent,
                "{name} from T={truncation}: blow-up route {:?} vs semigroup route {:?}",
                report.blowup_sequence, report.semigroup_sequence
            );
            if let Some((_, seq)) = expected.iter().find(|(n, _)| n == name) {
                assert_eq!(report.blowup_sequence.entries(), *seq, "{name}");
            }
        }
    }
    println!(
        "PASS criterion 6: blow-up route = semigroup route on {} branches, guarded runs started at truncations 64 and 128",
        corpus.len()
    );
}

#[test]
fn criterion_07_gap_phenomenon() {
    let mut cases = 0;
    for n in 2..=10u32 {
        for m in 1..n {
            let coords = vec![
                TruncatedSeries::monomial(Field::Rationals, n, 64),
                TruncatedSeries::parse(&format!("t^{n} + t^{}", n + m), Field::Rationals, 64)
                    .unwrap(),
            ];
            let blown = Branch::new(coords).unwrap().blow_up().unwrap();
            assert_eq!(
                blown.coords()[1].order(),
                Order::Finite(m),
                "blow-up of (t^{n}, t^{n}+t^{}) should expose order {m}",
                n + m
            );
            cases += 1;
        }
    }
    println!(
        "PASS criterion 7: blow-up of (t^n, t^n + t^(n+m)) has second coordinate of order exactly m for all {cases} pairs 1 <= m < n <= 10"
    );
}

#[test]
fn criterion_08_arf_ring_closure() {
    let corpus = branch_corpus();
    for (name, branch) in &corpus {
        // Guarded precision: start at 64, escalate past windows too small
        // for the conductor, then require agreement at doubled truncation.
        let mut checked = Vec::new();
        let mut truncation = 64;
        while checked.len() < 2 {
            assert!(truncation <= MAX_TRUNCATION, "{name}: no stable window");
            let outcome = branch.arf_ring_closure(truncation).and_then(|closed| {
                assert!(
                    closed.is_arf_ring().unwrap(),
                    "{name}: closure is not an Arf ring at T={truncation}"
                );
                closed.orders_semigroup()
            });
            match outcome {
                Ok(ring_orders) => {
                    let semigroup_closure = branch
                        .truncate_to(truncation)
                        .unwrap()
                        .subalgebra(truncation)
                        .unwrap()
                        .orders_semigroup()
                        .unwrap()
                        .arf_closure();
                    assert_eq!(
                        ring_orders, semigroup_closure,
                        "{name} at T={truncation}: ring-closure orders differ from the semigroup closure"
                    );
                    checked.push(ring_orders);
                }
                Err(e) => {
                    assert_eq!(
                        e.kind(),
                        arfkit::ErrorKind::Precision,
                        "{name} at T={truncation}: {e}"
                    );
                    checked.clear();
                }
            }
            truncation *= 2;
        }
        assert_eq!(checked[0], checked[1], "{name}: unstable under doubling");
    }
    println!(
        "PASS criterion 8: is_arf_ring(closure) and ring orders = semigroup closure on {} branches, stable at doubled truncation",
        corpus.len()
    );
}

#[test]
fn criterion_09_herbrand_hasse_arf() {
    let rational = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));

    let quaternion = Filtration::new(&[8, 8, 8, 2, 2, 1], false, "quaternion").unwrap();
    assert_eq!(quaternion.phi(&rational(1, 1)).unwrap(), rational(1, 1));
    assert_eq!(quaternion.phi(&rational(3, 1)).unwrap(), rational(3, 2));
    assert_eq!(
        quaternion.upper_jumps(),
        vec![rational(1, 1), rational(3, 2)]
    );

    let mut r = rng(9);
    for _ in 0..50 {
        let order = r.gen_range(2u64..=64);
        let break_at = r.gen_range(0usize..=8);
        let mut orders = vec![order; break_at + 2];
        orders.push(1);
        let f = Filtration::new(&orders, true, "single-break").unwrap();
        let report = f.hasse_arf_check();
        assert_eq!(report.verdict, HasseArfVerdict::Pass);
        assert!(report.upper_jumps.iter().all(is_integral));
    }

    // psi inverts phi exactly on random rationals across random filtrations.
    let filtrations = [
        quaternion,
        Filtration::new(&[2, 2, 2, 1], true, "").unwrap(),
        Filtration::new(&[12, 12, 6, 6, 3, 1, 1], false, "").unwrap(),
        Filtration::new(&[60, 60, 30, 10, 5, 5, 1], false, "").unwrap(),
    ];
    for k in 0..1000 {
        let f = &filtrations[k % filtrations.len()];
        let numer = r.gen_range(-8i64..=80);
        let denom = r.gen_range(1i64..=12);
        let mut u = rational(numer, denom);
        if u < rational(-1, 1) {
            u = rational(-1, 1);
        }
        let phi = f.phi(&u).unwrap();
        assert_eq!(f.psi(&phi).unwrap(), u, "psi(phi({u})) drifted");
    }
    println!(
        "PASS criterion 9: quaternion phi(1)=1, phi(3)=3/2, upper jumps {{1, 3/2}}; 50 single-break abelian filtrations integral; psi o phi = id on 1000 rationals"
    );
}

#[test]
fn criterion_10_cli_determinism_and_round_trip() {
    let bin = env!("CARGO_BIN_EXE_arfkit");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["semigroup", "--generators", "4,6,7", "--format", "json"],
        vec!["semigroup", "--generators", "5,7"],
        vec![
            "ramify",
            "--orders",
            "8,8,8,2,2,1",
            "--abelian",
            "false",
            "--json",
        ],
        vec!["ramify", "--orders", "2,2,2,1", "--abelian", "true"],
        vec!["form", "x1*x2 + x3^2 + x3*x4", "--json"],
    ];
    for argv in &invocations {
        let run = |_: usize| {
            let out = Command::new(bin)
                .args(argv)
                .env_remove("ARFKIT_TRUNCATION")
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "{argv:?} failed");
            out.stdout
        };
        assert_eq!(run(0), run(1), "rerun differs for {argv:?}");
    }

    // JSON output re-fed through --from-json must reproduce itself.
    let dir = tempfile::tempdir().unwrap();
    for argv in [
        vec!["semigroup", "--generators", "4,6,7", "--json"],
        vec![
            "ramify",
            "--orders",
            "8,8,8,2,2,1",
            "--abelian",
            "false",
            "--json",
        ],
    ] {
        let first = Command::new(bin)
            .args(&argv)
            .env_remove("ARFKIT_TRUNCATION")
            .output()
            .unwrap();
        assert!(first.status.success());
        let path = dir.path().join("report.json");
        std::fs::write(&path, &first.stdout).unwrap();
        let second = Command::new(bin)
            .args(["--from-json", path.to_str().unwrap()])
            .env_remove("ARFKIT_TRUNCATION")
            .output()
            .unwrap();
        assert!(second.status.success());
        assert_eq!(
            first.stdout, second.stdout,
            "round trip differs for {argv:?}"
        );
    }
    println!(
        "PASS criterion 10: byte-identical reruns on {} invocations; --from-json self-reproduction for semigroup and ramify",
        invocations.len()
    );
}
