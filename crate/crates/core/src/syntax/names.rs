use std::collections::BTreeSet;

use super::{CalcError, DefinitionTable, Name, Process};

/// Free names, treating agent calls as opaque (they contribute nothing).
pub fn free_names_opaque(p: &Process) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(p, &mut Vec::new(), &mut out, &mut |_, _| Ok(())).expect("opaque calls never fail");
    out
}

/// Free names, where a call contributes the free names of its definition.
pub fn free_names(p: &Process, defs: &DefinitionTable) -> Result<BTreeSet<Name>, CalcError> {
    let mut out = BTreeSet::new();
    collect_free(p, &mut Vec::new(), &mut out, &mut |agent, out| {
        let names = defs.free_names_of(agent)?;
        out.extend(names.iter().cloned());
        Ok(())
    })?;
    Ok(out)
}

/// Names occurring in binding position (input binders, restricted names).
pub fn bound_names(p: &Process) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    p.visit(&mut |q| match q {
        Process::Input { binder, .. } => {
            out.insert(binder.clone());
        }
        Process::Restrict { name, .. } => {
            out.insert(name.clone());
        }
        _ => {}
    });
    out
}

/// Free and bound names of `p`. The two sets may overlap when the same name is
/// free in one subterm and bound in another.
pub fn name_analysis(
    p: &Process,
    defs: &DefinitionTable,
) -> Result<(BTreeSet<Name>, BTreeSet<Name>), CalcError> {
    defs.check_resolved(p)?;
    Ok((free_names(p, defs)?, bound_names(p)))
}

fn collect_free(
    p: &Process,
    bound: &mut Vec<Name>,
    out: &mut BTreeSet<Name>,
    on_call: &mut dyn FnMut(&Name, &mut BTreeSet<Name>) -> Result<(), CalcError>,
) -> Result<(), CalcError> {
    let add = |n: &Name, bound: &Vec<Name>, out: &mut BTreeSet<Name>| {
        if !bound.contains(n) {
            out.insert(n.clone());
        }
    };
    match p {
        Process::Nil => {}
        Process::Call(agent) => {
            // as if the body were inlined here
            let mut from_def = BTreeSet::new();
            on_call(agent, &mut from_def)?;
            for n in &from_def {
                add(n, bound, out);
            }
        }
        Process::Output { channel, payload, then } => {
            add(channel, bound, out);
            add(payload, bound, out);
            collect_free(then, bound, out, on_call)?;
        }
        Process::Input { channel, binder, then } => {
            add(channel, bound, out);
            bound.push(binder.clone());
            collect_free(then, bound, out, on_call)?;
            bound.pop();
        }
        Process::Restrict { name, body } => {
            bound.push(name.clone());
            collect_free(body, bound, out, on_call)?;
            bound.pop();
        }
        Process::Match { lhs, rhs, then } => {
            add(lhs, bound, out);
            add(rhs, bound, out);
            collect_free(then, bound, out, on_call)?;
        }
        Process::Tau(then) | Process::SignalEmit { then, .. } => collect_free(then, bound, out, on_call)?,
        Process::Seq(a, b) | Process::Sum(a, b) | Process::Par(a, b) => {
            collect_free(a, bound, out, on_call)?;
            collect_free(b, bound, out, on_call)?;
        }
        Process::Handler { body, fallback, .. } => {
            collect_free(body, bound, out, on_call)?;
            collect_free(fallback, bound, out, on_call)?;
        }
    }
    Ok(())
}
