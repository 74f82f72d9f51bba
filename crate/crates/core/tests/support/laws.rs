//! Laws of the calculus, each checked on one generated case. Shared by the
//! property suite and the acceptance report.

use std::collections::BTreeSet;

use picomp_core::authority::AuthorityModel;
use picomp_core::semantics::{build_lts, transitions, ExplorationMode, Label, Limits};
use picomp_core::syntax::{alpha_equivalent, bound_names, canonicalize, free_names_opaque, substitute};
use picomp_core::{structurally_congruent, DefinitionTable, Digest, Name, Process};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gen::{congruent_variant, n, sig, POOL};
use super::oracle;

pub type Outcome = Result<(), TestCaseError>;

pub fn pool_name() -> impl Strategy<Value = Name> {
    prop::sample::select(POOL).prop_map(n)
}

pub fn edges(p: &Process, mode: ExplorationMode) -> BTreeSet<(Label, Digest)> {
    transitions(p, &DefinitionTable::empty(), mode, &BTreeSet::new())
        .unwrap()
        .into_iter()
        .map(|(l, t)| (l, canonicalize(&t).digest))
        .collect()
}

/// `p` after `rounds` randomly placed congruence laws.
pub fn vary(p: &Process, seed: u64, rounds: usize) -> Process {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = p.clone();
    for _ in 0..rounds {
        q = congruent_variant(&q, &mut rng);
    }
    q
}

pub fn footprint(p: &Process, x: &Name, v: &Name) -> Outcome {
    let before = oracle::fv(p);
    let after = oracle::fv(&substitute(p, x, v, &DefinitionTable::empty()).unwrap());
    if before.contains(x) {
        let mut expected = before.clone();
        expected.remove(x);
        expected.insert(v.clone());
        prop_assert_eq!(after, expected);
    } else {
        prop_assert_eq!(after, before);
    }
    Ok(())
}

/// Substitutes a name that `p` also binds and compares with the naive
/// rename-apart substitution.
pub fn no_capture(p: &Process, x: &Name, pick: prop::sample::Index) -> Outcome {
    let bound: Vec<Name> = bound_names(p).into_iter().collect();
    let v = if bound.is_empty() { n("z") } else { pick.get(&bound).clone() };
    let got = substitute(p, x, &v, &DefinitionTable::empty()).unwrap();
    let want = oracle::naive_substitute(p, x, &v);
    prop_assert!(alpha_equivalent(&got, &want), "{} vs {}", got, want);
    Ok(())
}

pub fn alpha_laws(p: &Process, q: &Process, s1: usize, s2: usize) -> Outcome {
    let p1 = oracle::alpha_variant(p, s1);
    let p2 = oracle::alpha_variant(&p1, s2 + 100);
    prop_assert!(alpha_equivalent(p, p));
    prop_assert_eq!(alpha_equivalent(p, q), alpha_equivalent(q, p));
    prop_assert!(alpha_equivalent(p, &p1) && alpha_equivalent(&p1, &p2) && alpha_equivalent(p, &p2));
    Ok(())
}

pub fn congruence_laws(p: &Process, q: &Process, seed: u64) -> Outcome {
    let p1 = vary(p, seed, 3);
    let p2 = vary(&p1, seed ^ 0x5555, 3);
    prop_assert!(structurally_congruent(p, p));
    prop_assert_eq!(structurally_congruent(p, q), structurally_congruent(q, p));
    prop_assert!(structurally_congruent(p, &p1), "{} vs {}", p, p1);
    prop_assert!(structurally_congruent(&p1, &p2) && structurally_congruent(p, &p2));
    Ok(())
}

pub fn congruence_ignores_bound_names(p: &Process, seed: u64, s: usize) -> Outcome {
    let q = vary(p, seed, 3);
    prop_assert!(structurally_congruent(&oracle::alpha_variant(p, s), &oracle::alpha_variant(&q, s + 7)));
    Ok(())
}

pub fn canonical_idempotent(p: &Process, s: usize) -> Outcome {
    let c = canonicalize(p);
    prop_assert_eq!(&canonicalize(&c.normal_form), &c);
    prop_assert_eq!(canonicalize(&oracle::alpha_variant(p, s)).digest, c.digest);
    Ok(())
}

pub fn coherence(p: &Process, seed: u64) -> Outcome {
    let q = vary(p, seed, 4);
    prop_assert_eq!(edges(p, ExplorationMode::Open), edges(&q, ExplorationMode::Open), "{} vs {}", p, q);
    Ok(())
}

pub fn opacity(c: &Name, body: &Process) -> Outcome {
    let p = Process::restrict(c.clone(), body.clone());
    for (label, _) in edges(&p, ExplorationMode::Open) {
        prop_assert!(!label.names().contains(&c), "{} leaks {}", label, c);
    }
    Ok(())
}

pub fn par_side_condition(a: &Process, b: &Process) -> Outcome {
    let idle: BTreeSet<Name> = free_names_opaque(a).union(&free_names_opaque(b)).cloned().collect();
    for (label, _) in edges(&Process::par(a.clone(), b.clone()), ExplorationMode::Open) {
        if let Label::BoundOut { fresh, .. } = &label {
            prop_assert!(!idle.contains(fresh), "{}", label);
        }
    }
    Ok(())
}

/// The marker output sits at an active position, outside every fallback.
pub fn mark_active(p: &Process) -> bool {
    match p {
        Process::Output { channel, .. } => channel.as_str() == "mark",
        Process::Par(a, b) | Process::Sum(a, b) => mark_active(a) || mark_active(b),
        Process::Seq(a, _) => mark_active(a),
        Process::Restrict { body, .. } | Process::Handler { body, .. } => mark_active(body),
        Process::Match { lhs, rhs, then } => lhs == rhs && mark_active(then),
        _ => false,
    }
}

fn handlers(p: &Process) -> usize {
    let mut count = 0;
    p.visit(&mut |q| count += matches!(q, Process::Handler { .. }) as usize);
    count
}

/// A fallback marked with a private channel only becomes active through a
/// step that consumes its handler.
pub fn handler_safety(p: &Process, q: &Process, r: &Process) -> Outcome {
    let t = sig(1);
    let marked = Process::output(n("mark"), n("x"), q.clone());
    let system = Process::par(Process::handler(p.clone(), marked, t), r.clone());
    // Closed, so no input can learn the marker channel before the fallback runs.
    let limits = Limits { max_states: 300, max_depth: 20 };
    let lts = build_lts(&system, &DefinitionTable::empty(), ExplorationMode::Closed, limits).unwrap();
    for tr in &lts.transitions {
        let (src, dst) = (&lts.states[&tr.source], &lts.states[&tr.target]);
        if !mark_active(src) && mark_active(dst) {
            prop_assert!(tr.label == Label::Handle(t) || tr.label == Label::Tau, "{}", tr.label);
            prop_assert!(handlers(dst) < handlers(src));
        }
    }
    Ok(())
}

/// Panics unless every query on `m` agrees with the triple-loop oracle.
pub fn check_against_oracle(m: &AuthorityModel) {
    for u in &m.users {
        assert_eq!(m.goals_of(u).unwrap(), oracle::goals(m, u));
        assert_eq!(m.ops_of(u).unwrap(), oracle::ops(m, u));
        for op in &m.operations {
            for ob in &m.objects {
                assert_eq!(m.authorize(u, op, ob).unwrap(), oracle::authorize(m, u, op, ob));
            }
        }
        let view = m.service_view(u).unwrap();
        assert_eq!(view.len(), m.roles_of(u).unwrap().len() * m.goals_of(u).unwrap().len());
    }
}

/// Panics unless dropping any single role assignment only shrinks answers.
pub fn check_antitone(m: &AuthorityModel) {
    for (u, roles) in &m.ua {
        for r in roles {
            let mut smaller = m.clone();
            smaller.ua.get_mut(u).unwrap().remove(r);
            assert!(smaller.goals_of(u).unwrap().is_subset(&m.goals_of(u).unwrap()));
            assert!(smaller.ops_of(u).unwrap().is_subset(&m.ops_of(u).unwrap()));
            for op in &m.operations {
                for ob in &m.objects {
                    if smaller.authorize(u, op, ob).unwrap() {
                        assert!(m.authorize(u, op, ob).unwrap());
                    }
                }
            }
        }
    }
}
