//! Structural congruence.
//!
//! The law set: alpha-conversion; associativity, commutativity and unit `0`
//! for `|` and for `+`; `0 ; Q == Q`; `new c.0 == 0`; and scope extension
//! `(new c.P) | Q == new c.(P | Q)` when `c` is not free in `Q`.
//!
//! Terms are decided by a normal form: parallel and choice components are
//! flattened with `0` dropped, every restriction is pushed to the smallest
//! group of parallel components that mentions its name (vanishing when none
//! does), and components are then ordered by their alpha-normal form.

use std::collections::BTreeSet;

use super::canonical::{alpha_normal, level_name, Digest};
use super::names::free_names_opaque;
use super::{DefinitionTable, Name, Process};

/// Normal form treating calls as opaque.
pub fn normalize(p: &Process) -> Process {
    let reshaped = reshape(p, &|q| free_names_opaque(q));
    order(&reshaped, &mut Vec::new()).0
}

/// Normal form where a call's free names are those of its definition. Calls
/// must resolve in `defs`.
pub fn normalize_with(p: &Process, defs: &DefinitionTable) -> Process {
    normal_form_with(p, defs).0
}

/// `normalize_with` together with the digest of the result, computed in the
/// same pass.
pub(crate) fn normal_form_with(p: &Process, defs: &DefinitionTable) -> (Process, Digest) {
    let fv = |q: &Process| {
        super::names::free_names(q, defs).unwrap_or_else(|_| free_names_opaque(q))
    };
    let reshaped = reshape(p, &fv);
    let (normal, key) = order(&reshaped, &mut Vec::new());
    (normal, Digest::of(&key))
}

pub fn structurally_congruent(p: &Process, q: &Process) -> bool {
    alpha_normal(&normalize(p)) == alpha_normal(&normalize(q))
}

/// `p` is congruent to `0`.
pub fn is_nil_like(p: &Process) -> bool {
    normalize(p).is_nil()
}

fn flatten_par(p: Process, out: &mut Vec<Process>) {
    match p {
        Process::Par(a, b) => {
            flatten_par(*a, out);
            flatten_par(*b, out);
        }
        Process::Nil => {}
        other => out.push(other),
    }
}

fn flatten_sum(p: Process, out: &mut Vec<Process>) {
    match p {
        Process::Sum(a, b) => {
            flatten_sum(*a, out);
            flatten_sum(*b, out);
        }
        Process::Nil => {}
        other => out.push(other),
    }
}

fn components<'a>(p: &'a Process, par: bool, out: &mut Vec<&'a Process>) {
    match (p, par) {
        (Process::Par(a, b), true) | (Process::Sum(a, b), false) => {
            components(a, par, out);
            components(b, par, out);
        }
        (Process::Nil, _) => {}
        (other, _) => out.push(other),
    }
}

fn reshape(p: &Process, fv: &dyn Fn(&Process) -> BTreeSet<Name>) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::Call(a) => Process::Call(a.clone()),
        Process::Par(..) | Process::Sum(..) => {
            let is_par = matches!(p, Process::Par(..));
            let mut direct = Vec::new();
            components(p, is_par, &mut direct);
            let mut parts = Vec::new();
            for q in direct {
                if is_par {
                    flatten_par(reshape(q, fv), &mut parts);
                } else {
                    flatten_sum(reshape(q, fv), &mut parts);
                }
            }
            if is_par {
                Process::par_all(parts)
            } else {
                Process::sum_all(parts)
            }
        }
        Process::Seq(a, b) => {
            let first = reshape(a, fv);
            let second = reshape(b, fv);
            if first.is_nil() {
                second
            } else {
                Process::seq(first, second)
            }
        }
        Process::Restrict { name, body } => {
            let mut parts = Vec::new();
            flatten_par(reshape(body, fv), &mut parts);
            let (inside, outside): (Vec<_>, Vec<_>) =
                parts.into_iter().partition(|q| fv(q).contains(name));
            if inside.is_empty() {
                return Process::par_all(outside);
            }
            let mut all = outside;
            all.push(Process::restrict(name.clone(), Process::par_all(inside)));
            Process::par_all(all)
        }
        Process::Output { channel, payload, then } => {
            Process::output(channel.clone(), payload.clone(), reshape(then, fv))
        }
        Process::Input { channel, binder, then } => {
            Process::input(channel.clone(), binder.clone(), reshape(then, fv))
        }
        Process::Match { lhs, rhs, then } => Process::matching(lhs.clone(), rhs.clone(), reshape(then, fv)),
        Process::Tau(t) => Process::tau(reshape(t, fv)),
        Process::SignalEmit { sig, then } => Process::emit(*sig, reshape(then, fv)),
        Process::Handler { body, fallback, sig } => {
            Process::handler(reshape(body, fv), reshape(fallback, fv), *sig)
        }
    }
}

fn lookup(env: &[(Name, Name)], n: &Name) -> Name {
    env.iter().rev().find(|(orig, _)| orig == n).map(|(_, new)| new.clone()).unwrap_or_else(|| n.clone())
}

/// Sorts `|` and `+` components. Returns the reordered term with its original
/// names and, alongside, its depth-named counterpart used as the sort key.
fn order(p: &Process, env: &mut Vec<(Name, Name)>) -> (Process, Process) {
    match p {
        Process::Nil => (Process::Nil, Process::Nil),
        Process::Call(a) => (p.clone(), Process::Call(a.clone())),
        Process::Par(..) | Process::Sum(..) => {
            let is_par = matches!(p, Process::Par(..));
            let mut parts = Vec::new();
            components(p, is_par, &mut parts);
            let mut keyed: Vec<(Process, Process)> = parts.iter().map(|q| order(q, env)).collect();
            keyed.sort_by(|x, y| x.1.cmp(&y.1));
            let (orig, canon): (Vec<_>, Vec<_>) = keyed.into_iter().unzip();
            if is_par {
                (Process::par_all(orig), Process::par_all(canon))
            } else {
                (Process::sum_all(orig), Process::sum_all(canon))
            }
        }
        Process::Seq(a, b) => {
            let (a1, a2) = order(a, env);
            let (b1, b2) = order(b, env);
            (Process::seq(a1, b1), Process::seq(a2, b2))
        }
        Process::Output { channel, payload, then } => {
            let (t1, t2) = order(then, env);
            (
                Process::output(channel.clone(), payload.clone(), t1),
                Process::output(lookup(env, channel), lookup(env, payload), t2),
            )
        }
        Process::Match { lhs, rhs, then } => {
            let (t1, t2) = order(then, env);
            (
                Process::matching(lhs.clone(), rhs.clone(), t1),
                Process::matching(lookup(env, lhs), lookup(env, rhs), t2),
            )
        }
        Process::Input { channel, binder, then } => {
            let ch = lookup(env, channel);
            let level = level_name(env.len());
            env.push((binder.clone(), level.clone()));
            let (t1, t2) = order(then, env);
            env.pop();
            (Process::input(channel.clone(), binder.clone(), t1), Process::input(ch, level, t2))
        }
        Process::Restrict { name, body } => {
            let level = level_name(env.len());
            env.push((name.clone(), level.clone()));
            let (b1, b2) = order(body, env);
            env.pop();
            (Process::restrict(name.clone(), b1), Process::restrict(level, b2))
        }
        Process::Tau(t) => {
            let (t1, t2) = order(t, env);
            (Process::tau(t1), Process::tau(t2))
        }
        Process::SignalEmit { sig, then } => {
            let (t1, t2) = order(then, env);
            (Process::emit(*sig, t1), Process::emit(*sig, t2))
        }
        Process::Handler { body, fallback, sig } => {
            let (b1, b2) = order(body, env);
            let (f1, f2) = order(fallback, env);
            (Process::handler(b1, f1, *sig), Process::handler(b2, f2, *sig))
        }
    }
}
