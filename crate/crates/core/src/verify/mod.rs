//! Analyses over transition systems: deadlocks, reachability, random
//! simulation and bisimulation.

mod bisim;
mod predicate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{transitions, ExplorationMode, Label, Lts};
use crate::syntax::{canonicalize, is_nil_like, normalize_with, CalcError, DefinitionTable, Digest, Process};

pub use bisim::{lts_bisimilar, strong_bisimilar, weak_bisimilar, Equivalence};
pub use predicate::{LabelPattern, StatePredicate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("deadlock analysis needs a closed-mode LTS")]
    OpenModeLts,
    #[error("the state space of the {0} process exceeds the exploration limits")]
    StateSpaceExceeded(&'static str),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub label: Label,
    pub state: Digest,
    pub term: Process,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub initial: Digest,
    pub steps: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reachability {
    Found(Trace),
    /// No state satisfies the predicate and the LTS is complete.
    NotFound,
    /// No satisfying state among those explored, but exploration was cut short.
    Unknown,
}

/// Stuck states that are not congruent to `0`. States on the frontier are
/// not reported, since their successors were not all explored.
pub fn find_deadlocks(lts: &Lts) -> Result<BTreeSet<Digest>, VerifyError> {
    if lts.mode != ExplorationMode::Closed {
        return Err(VerifyError::OpenModeLts);
    }
    Ok(lts
        .states
        .iter()
        .filter(|(d, p)| lts.is_complete(d) && lts.outgoing(d).next().is_none() && !is_nil_like(p))
        .map(|(d, _)| *d)
        .collect())
}

/// Shortest trace from the initial state to a state satisfying `pred`.
pub fn reachable(lts: &Lts, pred: &StatePredicate) -> Reachability {
    let succ = lts.successors();
    let mut parent: BTreeMap<Digest, Option<(Digest, &Label)>> = BTreeMap::from([(lts.initial, None)]);
    let mut queue = VecDeque::from([lts.initial]);
    while let Some(s) = queue.pop_front() {
        if pred.holds(lts, &s) {
            let mut steps = Vec::new();
            let mut cur = s;
            while let Some(Some((prev, label))) = parent.get(&cur) {
                steps.push(TraceStep { label: (*label).clone(), state: cur, term: lts.states[&cur].clone() });
                cur = *prev;
            }
            steps.reverse();
            return Reachability::Found(Trace { initial: lts.initial, steps, seed: None });
        }
        for (label, t) in succ.get(&s).into_iter().flatten() {
            if !parent.contains_key(t) {
                parent.insert(*t, Some((s, *label)));
                queue.push_back(*t);
            }
        }
    }
    if lts.truncated {
        Reachability::Unknown
    } else {
        Reachability::NotFound
    }
}

/// A random run: each step picks uniformly among the enabled transitions
/// using a generator seeded with `seed`. Stops after `max_steps`, at a state
/// congruent to `0`, or when nothing is enabled.
pub fn simulate(
    p: &Process,
    defs: &DefinitionTable,
    mode: ExplorationMode,
    seed: u64,
    max_steps: usize,
) -> Result<Trace, CalcError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = normalize_with(p, defs);
    let mut trace = Trace { initial: canonicalize(&state).digest, steps: Vec::new(), seed: Some(seed) };
    let none = BTreeSet::new();
    while trace.steps.len() < max_steps && !is_nil_like(&state) {
        let mut enabled = transitions(&state, defs, mode, &none)?;
        if enabled.is_empty() {
            break;
        }
        let pick = rng.random_range(0..enabled.len() as u64) as usize;
        let (label, next) = enabled.swap_remove(pick);
        trace.steps.push(TraceStep { label, state: canonicalize(&next).digest, term: next.clone() });
        state = next;
    }
    Ok(trace)
}
