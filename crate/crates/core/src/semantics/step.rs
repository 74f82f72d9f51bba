use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::label::Label;
use crate::syntax::{
    free_names, free_names_opaque, fresh_name, normal_form_with, normalize_with, substitute, CalcError, DefinitionTable,
    Digest, Name, Process,
};

/// Which actions count as transitions of a whole system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExplorationMode {
    /// Only internal steps; the system is closed off from its environment.
    #[default]
    Closed,
    /// Every action, with inputs instantiated over a finite name universe.
    Open,
}

/// Placeholder standing for a not-yet-received input name.
fn placeholder() -> Name {
    Name::internal("?in")
}

/// The name used for extruded and environment-supplied fresh names in a
/// given system. It avoids every free name of the system, every name in the
/// definitions and the extra names, so it is the same for alpha-variants.
pub fn canonical_fresh(
    free: &BTreeSet<Name>,
    defs: &DefinitionTable,
    extra: &BTreeSet<Name>,
) -> Name {
    let base = Name::internal("fresh");
    fresh_name(&base, |n| free.contains(n) || extra.contains(n) || defs.all_names().contains(n))
}

enum Step {
    Act(Label, Process),
    /// Early input with the received name still a placeholder in the target.
    In(Name, Process),
}

struct Ctx<'a> {
    defs: &'a DefinitionTable,
    fresh: Name,
    hole: Name,
}

/// All one-step transitions of `p`, targets in normal form, deduplicated up
/// to structural congruence and sorted by label then target digest.
///
/// In open mode inputs range over the free names of `p`, `extra_names` and one
/// canonical fresh name. In closed mode only internal steps are kept.
pub fn transitions(
    p: &Process,
    defs: &DefinitionTable,
    mode: ExplorationMode,
    extra_names: &BTreeSet<Name>,
) -> Result<Vec<(Label, Process)>, CalcError> {
    defs.check_resolved(p)?;
    let system = normalize_with(p, defs);
    Ok(successors(&system, defs, mode, extra_names)?.into_iter().map(|(l, _, t)| (l, t)).collect())
}

/// As `transitions` for a system already in normal form, with the digest of
/// each target.
pub(crate) fn successors(
    system: &Process,
    defs: &DefinitionTable,
    mode: ExplorationMode,
    extra_names: &BTreeSet<Name>,
) -> Result<Vec<(Label, Digest, Process)>, CalcError> {
    // Names a call contributes are all in `defs.all_names()`, which the fresh
    // name avoids anyway, so the opaque free names suffice here.
    let fresh = canonical_fresh(&free_names_opaque(system), defs, extra_names);
    let renamed;
    let system = if system.all_names().contains(&fresh) {
        renamed = rename_binders_away(system, &fresh, defs)?;
        &renamed
    } else {
        system
    };
    let ctx = Ctx { defs, fresh, hole: placeholder() };
    let steps = steps(system, &ctx, mode == ExplorationMode::Closed)?;

    let mut universe = BTreeSet::new();
    if mode == ExplorationMode::Open {
        universe = free_names(system, defs)?;
        universe.extend(extra_names.iter().cloned());
        universe.insert(ctx.fresh.clone());
    }

    let mut out: BTreeMap<(Label, Digest), Process> = BTreeMap::new();
    let mut push = |label: Label, target: Process| {
        let (target, digest) = normal_form_with(&target, defs);
        out.entry((label, digest)).or_insert(target);
    };
    for step in steps {
        match (step, mode) {
            (Step::Act(Label::Tau, t), _) => push(Label::Tau, t),
            (Step::Act(l, t), ExplorationMode::Open) => push(l, t),
            (Step::In(channel, t), ExplorationMode::Open) => {
                for v in &universe {
                    let target = substitute(&t, &ctx.hole, v, defs)?;
                    push(Label::In { channel: channel.clone(), payload: v.clone() }, target);
                }
            }
            _ => {}
        }
    }
    Ok(out.into_iter().map(|((l, d), t)| (l, d, t)).collect())
}

/// Renames every binder spelled `avoid` so the name is free for reuse.
fn rename_binders_away(p: &Process, avoid: &Name, defs: &DefinitionTable) -> Result<Process, CalcError> {
    let pick = |body: &Process| {
        let taken = body.all_names();
        fresh_name(avoid, |n| n == avoid || taken.contains(n) || defs.all_names().contains(n))
    };
    let go = |q: &Process| rename_binders_away(q, avoid, defs);
    Ok(match p {
        Process::Nil | Process::Call(_) => p.clone(),
        Process::Input { channel, binder, then } => {
            let then = go(then)?;
            if binder == avoid {
                let renamed = pick(&then);
                let then = substitute(&then, binder, &renamed, defs)?;
                Process::input(channel.clone(), renamed, then)
            } else {
                Process::input(channel.clone(), binder.clone(), then)
            }
        }
        Process::Restrict { name, body } => {
            let body = go(body)?;
            if name == avoid {
                let renamed = pick(&body);
                let body = substitute(&body, name, &renamed, defs)?;
                Process::restrict(renamed, body)
            } else {
                Process::restrict(name.clone(), body)
            }
        }
        Process::Output { channel, payload, then } => {
            Process::output(channel.clone(), payload.clone(), go(then)?)
        }
        Process::Match { lhs, rhs, then } => Process::matching(lhs.clone(), rhs.clone(), go(then)?),
        Process::Tau(t) => Process::tau(go(t)?),
        Process::SignalEmit { sig, then } => Process::emit(*sig, go(then)?),
        Process::Seq(a, b) => Process::seq(go(a)?, go(b)?),
        Process::Sum(a, b) => Process::sum(go(a)?, go(b)?),
        Process::Par(a, b) => Process::par(go(a)?, go(b)?),
        Process::Handler { body, fallback, sig } => Process::handler(go(body)?, go(fallback)?, *sig),
    })
}

/// Whether `p` has finished: congruent to `0` once calls are unfolded.
fn terminated(p: &Process, defs: &DefinitionTable) -> Result<bool, CalcError> {
    Ok(match p {
        Process::Nil => true,
        Process::Call(a) => terminated(defs.resolve(a)?, defs)?,
        Process::Par(a, b) | Process::Sum(a, b) | Process::Seq(a, b) => {
            terminated(a, defs)? && terminated(b, defs)?
        }
        Process::Restrict { body, .. } => terminated(body, defs)?,
        _ => false,
    })
}

fn map_target(steps: Vec<Step>, f: impl Fn(Process) -> Process) -> Vec<Step> {
    steps
        .into_iter()
        .map(|s| match s {
            Step::Act(l, t) => Step::Act(l, f(t)),
            Step::In(c, t) => Step::In(c, f(t)),
        })
        .collect()
}

/// Steps of `p`. With `tau_only` set the caller keeps internal steps only,
/// so visible steps of a parallel composition are not assembled.
fn steps(p: &Process, ctx: &Ctx, tau_only: bool) -> Result<Vec<Step>, CalcError> {
    let defs = ctx.defs;
    Ok(match p {
        Process::Nil => Vec::new(),
        Process::Tau(t) => vec![Step::Act(Label::Tau, (**t).clone())],
        Process::Output { channel, payload, then } => vec![Step::Act(
            Label::Out { channel: channel.clone(), payload: payload.clone() },
            (**then).clone(),
        )],
        Process::Input { channel, binder, then } => {
            vec![Step::In(channel.clone(), substitute(then, binder, &ctx.hole, defs)?)]
        }
        Process::SignalEmit { sig, then } => vec![Step::Act(Label::Emit(*sig), (**then).clone())],
        Process::Sum(a, b) => {
            let mut out = steps(a, ctx, tau_only)?;
            out.extend(steps(b, ctx, tau_only)?);
            out
        }
        Process::Match { lhs, rhs, then } => {
            if lhs == rhs {
                steps(then, ctx, tau_only)?
            } else {
                Vec::new()
            }
        }
        Process::Call(a) => steps(defs.resolve(a)?, ctx, tau_only)?,
        Process::Seq(a, b) => {
            if terminated(a, defs)? {
                steps(b, ctx, tau_only)?
            } else {
                map_target(steps(a, ctx, tau_only)?, |t| Process::seq(t, (**b).clone()))
            }
        }
        Process::Handler { body, fallback, sig } => {
            let mut out = vec![Step::Act(Label::Handle(*sig), (**fallback).clone())];
            let inner: Vec<Step> = steps(body, ctx, tau_only)?
                .into_iter()
                .filter(|s| !matches!(s, Step::Act(Label::Handle(t), _) if t == sig))
                .collect();
            out.extend(map_target(inner, |t| Process::handler(t, (**fallback).clone(), *sig)));
            out
        }
        Process::Restrict { name, body } => {
            let mut out = Vec::new();
            for s in steps(body, ctx, tau_only)? {
                match s {
                    Step::Act(Label::Out { channel, payload }, t) if payload == *name && channel != *name => {
                        let t = substitute(&t, name, &ctx.fresh, defs)?;
                        out.push(Step::Act(Label::BoundOut { channel, fresh: ctx.fresh.clone() }, t));
                    }
                    Step::Act(l, t) => {
                        if !l.names().contains(&name) {
                            out.push(Step::Act(l, Process::restrict(name.clone(), t)));
                        }
                    }
                    Step::In(c, t) => {
                        if c != *name {
                            out.push(Step::In(c, Process::restrict(name.clone(), t)));
                        }
                    }
                }
            }
            out
        }
        Process::Par(..) => {
            let mut parts = Vec::new();
            par_components(p, &mut parts);
            let each: Vec<Vec<Step>> = parts.iter().map(|q| steps(q, ctx, false)).collect::<Result<_, _>>()?;
            let rebuild = |i: usize, ti: Process, j: Option<(usize, Process)>| {
                let (jj, tj) = match j {
                    Some((jj, tj)) => (jj, Some(tj)),
                    None => (usize::MAX, None),
                };
                let (mut ti, mut tj) = (Some(ti), tj);
                Process::par_all(parts.iter().enumerate().map(|(k, q)| match k {
                    _ if k == i => ti.take().unwrap(),
                    _ if k == jj => tj.take().unwrap(),
                    _ => (*q).clone(),
                }))
            };
            let mut out = Vec::new();
            for i in 0..parts.len() {
                for j in 0..parts.len() {
                    if i != j {
                        communicate(&each[i], &each[j], ctx, &mut out, |x, y| rebuild(i, x, Some((j, y))))?;
                    }
                }
            }
            for (i, si) in each.into_iter().enumerate() {
                for s in si {
                    match s {
                        Step::Act(Label::Tau, t) => out.push(Step::Act(Label::Tau, rebuild(i, t, None))),
                        _ if tau_only => {}
                        Step::Act(l, t) => out.push(Step::Act(l, rebuild(i, t, None))),
                        Step::In(c, t) => out.push(Step::In(c, rebuild(i, t, None))),
                    }
                }
            }
            out
        }
    })
}

fn par_components<'a>(p: &'a Process, out: &mut Vec<&'a Process>) {
    match p {
        Process::Par(a, b) => {
            par_components(a, out);
            par_components(b, out);
        }
        other => out.push(other),
    }
}

/// Synchronisations where the sender or emitter is in `left`.
fn communicate(
    left: &[Step],
    right: &[Step],
    ctx: &Ctx,
    out: &mut Vec<Step>,
    join: impl Fn(Process, Process) -> Process,
) -> Result<(), CalcError> {
    for l in left {
        let Step::Act(label, lt) = l else { continue };
        for r in right {
            match (label, r) {
                (Label::Out { channel, payload }, Step::In(c, rt)) if c == channel => {
                    let rt = substitute(rt, &ctx.hole, payload, ctx.defs)?;
                    out.push(Step::Act(Label::Tau, join(lt.clone(), rt)));
                }
                (Label::BoundOut { channel, fresh }, Step::In(c, rt)) if c == channel => {
                    let rt = substitute(rt, &ctx.hole, fresh, ctx.defs)?;
                    out.push(Step::Act(Label::Tau, Process::restrict(fresh.clone(), join(lt.clone(), rt))));
                }
                (Label::Emit(s), Step::Act(Label::Handle(t), rt)) if s == t => {
                    out.push(Step::Act(Label::Tau, join(lt.clone(), rt.clone())));
                }
                _ => {}
            }
        }
    }
    Ok(())
}
