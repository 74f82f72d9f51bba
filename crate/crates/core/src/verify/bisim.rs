use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::VerifyError;
use crate::semantics::{build_lts_with, ExplorationMode, Label, Limits, Lts};
use crate::syntax::{free_names, DefinitionTable, Digest, Process};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Internal steps are unobservable.
    Weak,
    Strong,
}

/// Weak bisimilarity of two processes, each explored in open mode with
/// inputs ranging over the free names of both.
pub fn weak_bisimilar(p: &Process, q: &Process, defs: &DefinitionTable, limits: Limits) -> Result<bool, VerifyError> {
    bisimilar(p, q, defs, limits, Equivalence::Weak)
}

pub fn strong_bisimilar(
    p: &Process,
    q: &Process,
    defs: &DefinitionTable,
    limits: Limits,
) -> Result<bool, VerifyError> {
    bisimilar(p, q, defs, limits, Equivalence::Strong)
}

fn bisimilar(
    p: &Process,
    q: &Process,
    defs: &DefinitionTable,
    limits: Limits,
    eq: Equivalence,
) -> Result<bool, VerifyError> {
    let mut names = free_names(p, defs)?;
    names.extend(free_names(q, defs)?);
    let a = build_lts_with(p, defs, ExplorationMode::Open, limits, &names)?;
    if a.truncated {
        return Err(VerifyError::StateSpaceExceeded("first"));
    }
    let b = build_lts_with(q, defs, ExplorationMode::Open, limits, &names)?;
    if b.truncated {
        return Err(VerifyError::StateSpaceExceeded("second"));
    }
    Ok(lts_bisimilar(&a, &b, eq))
}

/// Whether the initial states of two LTSs are bisimilar, decided by
/// partition refinement on their disjoint union.
pub fn lts_bisimilar(a: &Lts, b: &Lts, eq: Equivalence) -> bool {
    let mut index: BTreeMap<(u8, Digest), usize> = BTreeMap::new();
    for (side, lts) in [(0u8, a), (1u8, b)] {
        for d in lts.states.keys() {
            let n = index.len();
            index.insert((side, *d), n);
        }
    }
    let n = index.len();
    let mut labels: BTreeMap<&Label, usize> = BTreeMap::new();
    labels.insert(&Label::Tau, 0);
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (side, lts) in [(0u8, a), (1u8, b)] {
        for t in &lts.transitions {
            let next = labels.len();
            let l = *labels.entry(&t.label).or_insert(next);
            edges[index[&(side, t.source)]].push((l, index[&(side, t.target)]));
        }
    }
    let moves = match eq {
        Equivalence::Strong => edges.into_iter().map(|e| e.into_iter().collect()).collect(),
        Equivalence::Weak => saturate(&edges),
    };
    let block = refine(&moves);
    block[index[&(0, a.initial)]] == block[index[&(1, b.initial)]]
}

/// Weak moves: `=tau=>` is zero or more internal steps; `=l=>` is internal
/// steps, one `l` step, then internal steps.
fn saturate(edges: &[Vec<(usize, usize)>]) -> Vec<BTreeSet<(usize, usize)>> {
    let closure: Vec<Vec<usize>> = (0..edges.len())
        .map(|s| {
            let mut seen = BTreeSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(l, y) in &edges[x] {
                    if l == 0 && seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            seen.into_iter().collect()
        })
        .collect();
    (0..edges.len())
        .map(|s| {
            let mut out = BTreeSet::new();
            for &s1 in &closure[s] {
                out.insert((0, s1));
                for &(l, s2) in &edges[s1] {
                    if l != 0 {
                        for &t in &closure[s2] {
                            out.insert((l, t));
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Coarsest partition stable under `moves`, as a block number per state.
fn refine(moves: &[BTreeSet<(usize, usize)>]) -> Vec<usize> {
    let mut block = vec![0usize; moves.len()];
    let mut count = 1;
    loop {
        let mut ids: BTreeMap<(usize, BTreeSet<(usize, usize)>), usize> = BTreeMap::new();
        let next: Vec<usize> = (0..moves.len())
            .map(|s| {
                let sig = moves[s].iter().map(|&(l, t)| (l, block[t])).collect();
                let fresh = ids.len();
                *ids.entry((block[s], sig)).or_insert(fresh)
            })
            .collect();
        let new_count = ids.len();
        block = next;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}
