use std::collections::BTreeSet;

use super::name::fresh_name;
use super::{CalcError, DefinitionTable, Name, Process};

/// Capture-avoiding substitution of `to` for every free occurrence of `from`.
///
/// Binders spelled like `to` are renamed to a fresh `to'`-style name before
/// descending. Calls are left symbolic; if `from` is free in a referenced
/// definition the substitution is rejected, since definitions are shared.
pub fn substitute(
    p: &Process,
    from: &Name,
    to: &Name,
    defs: &DefinitionTable,
) -> Result<Process, CalcError> {
    if from == to || !occurs_free(p, from, defs)? {
        return Ok(p.clone());
    }
    subst(p, from, to, defs)
}

/// Whether `n` occurs free in `p`, looking through calls.
pub fn occurs_free(p: &Process, n: &Name, defs: &DefinitionTable) -> Result<bool, CalcError> {
    Ok(match p {
        Process::Nil => false,
        Process::Call(a) => defs.free_names_of(a)?.contains(n),
        Process::Output { channel, payload, then } => {
            channel == n || payload == n || occurs_free(then, n, defs)?
        }
        Process::Input { channel, binder, then } => {
            channel == n || (binder != n && occurs_free(then, n, defs)?)
        }
        Process::Restrict { name, body } => name != n && occurs_free(body, n, defs)?,
        Process::Match { lhs, rhs, then } => lhs == n || rhs == n || occurs_free(then, n, defs)?,
        Process::Tau(t) | Process::SignalEmit { then: t, .. } => occurs_free(t, n, defs)?,
        Process::Seq(a, b) | Process::Sum(a, b) | Process::Par(a, b) => {
            occurs_free(a, n, defs)? || occurs_free(b, n, defs)?
        }
        Process::Handler { body, fallback, .. } => {
            occurs_free(body, n, defs)? || occurs_free(fallback, n, defs)?
        }
    })
}

fn swap(n: &Name, from: &Name, to: &Name) -> Name {
    if n == from {
        to.clone()
    } else {
        n.clone()
    }
}

fn subst(p: &Process, from: &Name, to: &Name, defs: &DefinitionTable) -> Result<Process, CalcError> {
    Ok(match p {
        Process::Nil => Process::Nil,
        Process::Call(a) => {
            if defs.free_names_of(a)?.contains(from) {
                return Err(CalcError::SubstitutionIntoAgent(a.clone()));
            }
            Process::Call(a.clone())
        }
        Process::Output { channel, payload, then } => Process::output(
            swap(channel, from, to),
            swap(payload, from, to),
            subst(then, from, to, defs)?,
        ),
        Process::Match { lhs, rhs, then } => Process::matching(
            swap(lhs, from, to),
            swap(rhs, from, to),
            subst(then, from, to, defs)?,
        ),
        Process::Input { channel, binder, then } => {
            let channel = swap(channel, from, to);
            let (binder, then) = under_binder(binder, then, from, to, defs)?;
            Process::Input { channel, binder, then: Box::new(then) }
        }
        Process::Restrict { name, body } => {
            let (name, body) = under_binder(name, body, from, to, defs)?;
            Process::restrict(name, body)
        }
        Process::Tau(t) => Process::tau(subst(t, from, to, defs)?),
        Process::SignalEmit { sig, then } => Process::emit(*sig, subst(then, from, to, defs)?),
        Process::Seq(a, b) => Process::seq(subst(a, from, to, defs)?, subst(b, from, to, defs)?),
        Process::Sum(a, b) => Process::sum(subst(a, from, to, defs)?, subst(b, from, to, defs)?),
        Process::Par(a, b) => Process::par(subst(a, from, to, defs)?, subst(b, from, to, defs)?),
        Process::Handler { body, fallback, sig } => Process::handler(
            subst(body, from, to, defs)?,
            subst(fallback, from, to, defs)?,
            *sig,
        ),
    })
}

fn under_binder(
    binder: &Name,
    body: &Process,
    from: &Name,
    to: &Name,
    defs: &DefinitionTable,
) -> Result<(Name, Process), CalcError> {
    if binder == from || !occurs_free(body, from, defs)? {
        return Ok((binder.clone(), body.clone()));
    }
    if binder != to {
        return Ok((binder.clone(), subst(body, from, to, defs)?));
    }
    // the binder would capture `to`: rename it first
    let mut avoid: BTreeSet<Name> = body.all_names();
    avoid.extend(free_names_through_calls(body, defs)?);
    avoid.insert(from.clone());
    avoid.insert(to.clone());
    let renamed = fresh_name(binder, |n| avoid.contains(n));
    let body = subst(body, binder, &renamed, defs)?;
    Ok((renamed, subst(&body, from, to, defs)?))
}

fn free_names_through_calls(p: &Process, defs: &DefinitionTable) -> Result<BTreeSet<Name>, CalcError> {
    let mut out = BTreeSet::new();
    for a in p.calls() {
        out.extend(defs.free_names_of(&a)?.iter().cloned());
    }
    Ok(out)
}
