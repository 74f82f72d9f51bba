use std::collections::{BTreeMap, BTreeSet};

use super::names::free_names_opaque;
use super::{AgentId, CalcError, Name, Process};

/// Agent definitions, `A = P`, with parameterless bodies.
///
/// Construction checks that every referenced agent is defined and that
/// recursion is guarded. Free names of each agent are computed to a fixpoint
/// over the reference graph and cached.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefinitionTable {
    entries: BTreeMap<AgentId, Process>,
    free: BTreeMap<AgentId, BTreeSet<Name>>,
    all_names: BTreeSet<Name>,
}

impl DefinitionTable {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(entries: BTreeMap<AgentId, Process>) -> Result<Self, CalcError> {
        for body in entries.values() {
            for agent in body.calls() {
                if !entries.contains_key(&agent) {
                    return Err(CalcError::UnresolvedAgent(agent));
                }
            }
        }
        check_guarded(&entries)?;

        let mut free: BTreeMap<AgentId, BTreeSet<Name>> =
            entries.iter().map(|(a, p)| (a.clone(), free_names_opaque(p))).collect();
        let calls: BTreeMap<AgentId, BTreeSet<AgentId>> =
            entries.iter().map(|(a, p)| (a.clone(), p.calls())).collect();
        loop {
            let mut changed = false;
            for (agent, callees) in &calls {
                let mut extra = BTreeSet::new();
                for callee in callees {
                    extra.extend(free[callee].iter().cloned());
                }
                let mine = free.get_mut(agent).expect("agent present");
                for n in extra {
                    changed |= mine.insert(n);
                }
            }
            if !changed {
                break;
            }
        }

        let mut all_names = BTreeSet::new();
        for body in entries.values() {
            all_names.extend(body.all_names());
        }
        Ok(DefinitionTable { entries, free, all_names })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (AgentId, Process)>) -> Result<Self, CalcError> {
        Self::new(pairs.into_iter().collect())
    }

    pub fn get(&self, agent: &AgentId) -> Option<&Process> {
        self.entries.get(agent)
    }

    pub fn resolve(&self, agent: &AgentId) -> Result<&Process, CalcError> {
        self.entries.get(agent).ok_or_else(|| CalcError::UnresolvedAgent(agent.clone()))
    }

    pub fn entries(&self) -> &BTreeMap<AgentId, Process> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Free names of the agent's body, including those reached through calls.
    pub fn free_names_of(&self, agent: &AgentId) -> Result<&BTreeSet<Name>, CalcError> {
        self.free.get(agent).ok_or_else(|| CalcError::UnresolvedAgent(agent.clone()))
    }

    /// Every name mentioned by any definition, free or bound.
    pub fn all_names(&self) -> &BTreeSet<Name> {
        &self.all_names
    }

    /// Checks that every call in `p` has a definition.
    pub fn check_resolved(&self, p: &Process) -> Result<(), CalcError> {
        for agent in p.calls() {
            if !self.entries.contains_key(&agent) {
                return Err(CalcError::UnresolvedAgent(agent));
            }
        }
        Ok(())
    }
}

/// Agents reachable from `p` without passing an action prefix.
fn unguarded_calls(p: &Process, out: &mut BTreeSet<AgentId>) {
    match p {
        Process::Nil
        | Process::Output { .. }
        | Process::Input { .. }
        | Process::Tau(_)
        | Process::SignalEmit { .. } => {}
        Process::Call(a) => {
            out.insert(a.clone());
        }
        Process::Sum(a, b) | Process::Par(a, b) => {
            unguarded_calls(a, out);
            unguarded_calls(b, out);
        }
        Process::Handler { body, fallback, .. } => {
            unguarded_calls(body, out);
            unguarded_calls(fallback, out);
        }
        Process::Restrict { body, .. } => unguarded_calls(body, out),
        Process::Match { then, .. } => unguarded_calls(then, out),
        Process::Seq(a, b) => {
            unguarded_calls(a, out);
            if may_finish_silently(a) {
                unguarded_calls(b, out);
            }
        }
    }
}

/// Conservative: true unless every way to finish requires an action.
fn may_finish_silently(p: &Process) -> bool {
    match p {
        Process::Nil | Process::Call(_) => true,
        Process::Output { .. }
        | Process::Input { .. }
        | Process::Tau(_)
        | Process::SignalEmit { .. }
        | Process::Handler { .. } => false,
        Process::Sum(a, b) => may_finish_silently(a) || may_finish_silently(b),
        Process::Par(a, b) | Process::Seq(a, b) => may_finish_silently(a) && may_finish_silently(b),
        Process::Restrict { body, .. } => may_finish_silently(body),
        Process::Match { then, .. } => may_finish_silently(then),
    }
}

fn check_guarded(entries: &BTreeMap<AgentId, Process>) -> Result<(), CalcError> {
    let graph: BTreeMap<&AgentId, BTreeSet<AgentId>> = entries
        .iter()
        .map(|(a, p)| {
            let mut out = BTreeSet::new();
            unguarded_calls(p, &mut out);
            (a, out)
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut marks: BTreeMap<&AgentId, Mark> = graph.keys().map(|a| (*a, Mark::Fresh)).collect();

    // iterative DFS; a back edge to an active node is an unguarded cycle
    for root in graph.keys() {
        if marks[root] != Mark::Fresh {
            continue;
        }
        let mut stack: Vec<(&AgentId, Vec<&AgentId>)> =
            vec![(root, graph[root].iter().collect())];
        marks.insert(root, Mark::Active);
        while let Some((node, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => {
                    let next = entries.get_key_value(next).map(|(k, _)| k).expect("resolved");
                    match marks[next] {
                        Mark::Active => return Err(CalcError::UnguardedRecursion(next.clone())),
                        Mark::Fresh => {
                            marks.insert(next, Mark::Active);
                            stack.push((next, graph[next].iter().collect()));
                        }
                        Mark::Done => {}
                    }
                }
                None => {
                    marks.insert(*node, Mark::Done);
                    stack.pop();
                }
            }
        }
    }
    Ok(())
}
