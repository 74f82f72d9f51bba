use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::label::Label;
use super::step::{successors, ExplorationMode};
use crate::syntax::{normal_form_with, CalcError, DefinitionTable, Digest, Name, Process};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 100_000, max_depth: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub source: Digest,
    pub label: Label,
    pub target: Digest,
}

/// A labelled transition system explored from one initial state.
///
/// States are identified by the digest of their normal form, so congruent
/// processes share a state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lts {
    pub initial: Digest,
    pub states: BTreeMap<Digest, Process>,
    pub transitions: BTreeSet<Transition>,
    pub mode: ExplorationMode,
    pub limits: Limits,
    pub truncated: bool,
    /// States whose outgoing transitions were not (all) recorded.
    pub frontier: BTreeSet<Digest>,
    /// Names inputs were allowed to receive besides each state's free names.
    #[serde(default)]
    pub extra_names: BTreeSet<Name>,
}

impl Lts {
    pub fn witness(&self, d: &Digest) -> Option<&Process> {
        self.states.get(d)
    }

    pub fn outgoing(&self, d: &Digest) -> impl Iterator<Item = &Transition> + '_ {
        let lo = Transition { source: *d, label: Label::Tau, target: Digest::ZERO };
        let d = *d;
        self.transitions.range(lo..).take_while(move |t| t.source == d)
    }

    /// Adjacency lists in the transition order.
    pub fn successors(&self) -> BTreeMap<Digest, Vec<(&Label, Digest)>> {
        let mut out: BTreeMap<Digest, Vec<(&Label, Digest)>> =
            self.states.keys().map(|d| (*d, Vec::new())).collect();
        for t in &self.transitions {
            out.entry(t.source).or_default().push((&t.label, t.target));
        }
        out
    }

    pub fn is_complete(&self, d: &Digest) -> bool {
        !self.frontier.contains(d)
    }
}

/// Breadth-first exploration from `initial`.
///
/// Each layer is expanded in parallel and merged in discovery order, so the
/// result does not depend on scheduling. When a limit stops exploration the
/// LTS is marked truncated and the affected states are left on the frontier.
pub fn build_lts(
    initial: &Process,
    defs: &DefinitionTable,
    mode: ExplorationMode,
    limits: Limits,
) -> Result<Lts, CalcError> {
    build_lts_with(initial, defs, mode, limits, &BTreeSet::new())
}

/// As `build_lts`, with extra names available to every input.
pub fn build_lts_with(
    initial: &Process,
    defs: &DefinitionTable,
    mode: ExplorationMode,
    limits: Limits,
    extra_names: &BTreeSet<Name>,
) -> Result<Lts, CalcError> {
    defs.check_resolved(initial)?;
    let (start, initial_digest) = normal_form_with(initial, defs);
    let mut lts = Lts {
        initial: initial_digest,
        states: BTreeMap::from([(initial_digest, start)]),
        transitions: BTreeSet::new(),
        mode,
        limits,
        truncated: false,
        frontier: BTreeSet::new(),
        extra_names: extra_names.clone(),
    };
    if limits.max_states == 0 {
        lts.truncated = true;
        lts.frontier.insert(initial_digest);
        return Ok(lts);
    }

    let mut layer = vec![initial_digest];
    let mut depth = 0;
    while !layer.is_empty() {
        let expanded: Vec<Result<Vec<(Label, Digest, Process)>, CalcError>> = layer
            .par_iter()
            .map(|d| {
                successors(&lts.states[d], defs, mode, extra_names)
            })
            .collect();

        let at_depth_limit = depth >= limits.max_depth;
        let mut next = Vec::new();
        for (source, succ) in layer.iter().zip(expanded) {
            let succ = succ?;
            if at_depth_limit {
                if !succ.is_empty() {
                    lts.truncated = true;
                    lts.frontier.insert(*source);
                }
                continue;
            }
            for (label, target, proc) in succ {
                if !lts.states.contains_key(&target) {
                    if lts.states.len() >= limits.max_states {
                        lts.truncated = true;
                        lts.frontier.insert(*source);
                        continue;
                    }
                    lts.states.insert(target, proc);
                    next.push(target);
                }
                lts.transitions.insert(Transition { source: *source, label, target });
            }
        }
        layer = next;
        depth += 1;
    }
    Ok(lts)
}
