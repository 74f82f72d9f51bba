//! Second, deliberately naive implementations used as test oracles.

use std::collections::{BTreeMap, BTreeSet};

use picomp_core::authority::{AuthorityModel, ObjectId, OperationId, UserId};
use picomp_core::semantics::{ExplorationMode, Label, Lts};
use picomp_core::syntax::{canonicalize, normalize, Digest};
use picomp_core::{Name, Process};

fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}

/// Free names, computed with an explicit environment of binders.
pub fn fv(p: &Process) -> BTreeSet<Name> {
    fn go(p: &Process, env: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut see = |x: &Name, env: &Vec<Name>| {
            if !env.contains(x) {
                out.insert(x.clone());
            }
        };
        match p {
            Process::Nil | Process::Call(_) => {}
            Process::Output { channel, payload, then } => {
                see(channel, env);
                see(payload, env);
                go(then, env, out);
            }
            Process::Input { channel, binder, then } => {
                see(channel, env);
                env.push(binder.clone());
                go(then, env, out);
                env.pop();
            }
            Process::Restrict { name, body } => {
                env.push(name.clone());
                go(body, env, out);
                env.pop();
            }
            Process::Match { lhs, rhs, then } => {
                see(lhs, env);
                see(rhs, env);
                go(then, env, out);
            }
            Process::Tau(t) | Process::SignalEmit { then: t, .. } => go(t, env, out),
            Process::Seq(a, b) | Process::Sum(a, b) | Process::Par(a, b) => {
                go(a, env, out);
                go(b, env, out);
            }
            Process::Handler { body, fallback, .. } => {
                go(body, env, out);
                go(fallback, env, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

/// Gives every binder a distinct name `v0`, `v1`, ... not otherwise used.
fn rename_apart(p: &Process, next: &mut usize, env: &BTreeMap<Name, Name>, avoid: &BTreeSet<Name>) -> Process {
    let r = |x: &Name| env.get(x).cloned().unwrap_or_else(|| x.clone());
    let fresh = |next: &mut usize| loop {
        let c = n(&format!("v{next}"));
        *next += 1;
        if !avoid.contains(&c) {
            return c;
        }
    };
    match p {
        Process::Nil | Process::Call(_) => p.clone(),
        Process::Output { channel, payload, then } => {
            Process::output(r(channel), r(payload), rename_apart(then, next, env, avoid))
        }
        Process::Match { lhs, rhs, then } => Process::matching(r(lhs), r(rhs), rename_apart(then, next, env, avoid)),
        Process::Input { channel, binder, then } => {
            let b = fresh(next);
            let mut inner = env.clone();
            inner.insert(binder.clone(), b.clone());
            Process::input(r(channel), b, rename_apart(then, next, &inner, avoid))
        }
        Process::Restrict { name, body } => {
            let b = fresh(next);
            let mut inner = env.clone();
            inner.insert(name.clone(), b.clone());
            Process::restrict(b, rename_apart(body, next, &inner, avoid))
        }
        Process::Tau(t) => Process::tau(rename_apart(t, next, env, avoid)),
        Process::SignalEmit { sig, then } => Process::emit(*sig, rename_apart(then, next, env, avoid)),
        Process::Seq(a, b) => {
            let a = rename_apart(a, next, env, avoid);
            Process::seq(a, rename_apart(b, next, env, avoid))
        }
        Process::Sum(a, b) => {
            let a = rename_apart(a, next, env, avoid);
            Process::sum(a, rename_apart(b, next, env, avoid))
        }
        Process::Par(a, b) => {
            let a = rename_apart(a, next, env, avoid);
            Process::par(a, rename_apart(b, next, env, avoid))
        }
        Process::Handler { body, fallback, sig } => {
            let a = rename_apart(body, next, env, avoid);
            Process::handler(a, rename_apart(fallback, next, env, avoid), *sig)
        }
    }
}

/// Replaces free `from` by `to`. Only sound when no binder is spelled `to`,
/// which `rename_apart` guarantees.
fn replace(p: &Process, from: &Name, to: &Name) -> Process {
    let r = |x: &Name| if x == from { to.clone() } else { x.clone() };
    let go = |q: &Process| replace(q, from, to);
    match p {
        Process::Nil | Process::Call(_) => p.clone(),
        Process::Output { channel, payload, then } => Process::output(r(channel), r(payload), go(then)),
        Process::Match { lhs, rhs, then } => Process::matching(r(lhs), r(rhs), go(then)),
        Process::Input { channel, binder, then } => {
            if binder == from {
                Process::input(r(channel), binder.clone(), (**then).clone())
            } else {
                Process::input(r(channel), binder.clone(), go(then))
            }
        }
        Process::Restrict { name, body } => {
            if name == from {
                p.clone()
            } else {
                Process::restrict(name.clone(), go(body))
            }
        }
        Process::Tau(t) => Process::tau(go(t)),
        Process::SignalEmit { sig, then } => Process::emit(*sig, go(then)),
        Process::Seq(a, b) => Process::seq(go(a), go(b)),
        Process::Sum(a, b) => Process::sum(go(a), go(b)),
        Process::Par(a, b) => Process::par(go(a), go(b)),
        Process::Handler { body, fallback, sig } => Process::handler(go(body), go(fallback), *sig),
    }
}

fn finished(p: &Process) -> bool {
    match p {
        Process::Nil => true,
        Process::Par(a, b) | Process::Sum(a, b) | Process::Seq(a, b) => finished(a) && finished(b),
        Process::Restrict { body, .. } => finished(body),
        _ => false,
    }
}

fn label_names(l: &Label) -> Vec<&Name> {
    match l {
        Label::Out { channel, payload } | Label::In { channel, payload } => vec![channel, payload],
        Label::BoundOut { channel, fresh } => vec![channel, fresh],
        _ => vec![],
    }
}

/// Rule-by-rule enumeration. Inputs are instantiated over `universe`, which
/// grows by each restricted name on the way down so that communications on
/// private names can still be matched.
fn rules(p: &Process, universe: &BTreeSet<Name>, fresh: &Name) -> Vec<(Label, Process)> {
    match p {
        Process::Nil | Process::Call(_) => vec![],
        Process::Tau(t) => vec![(Label::Tau, (**t).clone())],
        Process::Output { channel, payload, then } => {
            vec![(Label::Out { channel: channel.clone(), payload: payload.clone() }, (**then).clone())]
        }
        Process::Input { channel, binder, then } => universe
            .iter()
            .map(|v| (Label::In { channel: channel.clone(), payload: v.clone() }, replace(then, binder, v)))
            .collect(),
        Process::SignalEmit { sig, then } => vec![(Label::Emit(*sig), (**then).clone())],
        Process::Sum(a, b) => {
            let mut out = rules(a, universe, fresh);
            out.extend(rules(b, universe, fresh));
            out
        }
        Process::Match { lhs, rhs, then } => {
            if lhs == rhs {
                rules(then, universe, fresh)
            } else {
                vec![]
            }
        }
        Process::Seq(a, b) => {
            if finished(a) {
                rules(b, universe, fresh)
            } else {
                rules(a, universe, fresh)
                    .into_iter()
                    .map(|(l, t)| (l, Process::seq(t, (**b).clone())))
                    .collect()
            }
        }
        Process::Handler { body, fallback, sig } => {
            let mut out = vec![(Label::Handle(*sig), (**fallback).clone())];
            for (l, t) in rules(body, universe, fresh) {
                if l != Label::Handle(*sig) {
                    out.push((l, Process::handler(t, (**fallback).clone(), *sig)));
                }
            }
            out
        }
        Process::Restrict { name, body } => {
            let mut inner = universe.clone();
            inner.insert(name.clone());
            let mut out = vec![];
            for (l, t) in rules(body, &inner, fresh) {
                match &l {
                    Label::Out { channel, payload } if payload == name && channel != name => {
                        out.push((
                            Label::BoundOut { channel: channel.clone(), fresh: fresh.clone() },
                            replace(&t, name, fresh),
                        ));
                    }
                    _ if label_names(&l).contains(&name) => {}
                    _ => out.push((l, Process::restrict(name.clone(), t))),
                }
            }
            out
        }
        Process::Par(a, b) => {
            let la = rules(a, universe, fresh);
            let lb = rules(b, universe, fresh);
            let fb = fv(b);
            let fa = fv(a);
            let mut out = vec![];
            for (l, t) in &la {
                if l.bound_name().is_none_or(|x| !fb.contains(x)) {
                    out.push((l.clone(), Process::par(t.clone(), (**b).clone())));
                }
            }
            for (l, t) in &lb {
                if l.bound_name().is_none_or(|x| !fa.contains(x)) {
                    out.push((l.clone(), Process::par((**a).clone(), t.clone())));
                }
            }
            for (left, right, flip) in [(&la, &lb, false), (&lb, &la, true)] {
                for (l1, t1) in left {
                    for (l2, t2) in right {
                        let join = |x: Process, y: Process| if flip { Process::par(y, x) } else { Process::par(x, y) };
                        match (l1, l2) {
                            (Label::Out { channel: c, payload: x }, Label::In { channel: d, payload: y })
                                if c == d && x == y =>
                            {
                                out.push((Label::Tau, join(t1.clone(), t2.clone())));
                            }
                            (Label::BoundOut { channel: c, fresh: z }, Label::In { channel: d, payload: y })
                                if c == d && z == y =>
                            {
                                out.push((Label::Tau, Process::restrict(z.clone(), join(t1.clone(), t2.clone()))));
                            }
                            (Label::Emit(s), Label::Handle(t)) if s == t => {
                                out.push((Label::Tau, join(t1.clone(), t2.clone())));
                            }
                            _ => {}
                        }
                    }
                }
            }
            out
        }
    }
}

/// Transitions of a call-free term as (label, digest of normalized target).
pub fn transitions(p: &Process, mode: ExplorationMode) -> BTreeSet<(Label, Digest)> {
    let free = fv(p);
    let mut fresh = n("fresh");
    while free.contains(&fresh) {
        fresh = n(&format!("{fresh}'"));
    }
    let mut avoid = free.clone();
    avoid.insert(fresh.clone());
    let apart = rename_apart(p, &mut 0, &BTreeMap::new(), &avoid);
    let mut universe = free;
    universe.insert(fresh.clone());
    rules(&apart, &universe, &fresh)
        .into_iter()
        .filter(|(l, _)| mode == ExplorationMode::Open || *l == Label::Tau)
        .map(|(l, t)| (l, canonicalize(&normalize(&t)).digest))
        .collect()
}

/// Weak bisimilarity by removing pairs from the full relation until every
/// single step of one side is matched by a weak step of the other.
pub fn weak_bisimilar(a: &Lts, b: &Lts) -> bool {
    let closure = |lts: &Lts| -> BTreeMap<Digest, BTreeSet<Digest>> {
        let mut reach: BTreeMap<Digest, BTreeSet<Digest>> =
            lts.states.keys().map(|d| (*d, BTreeSet::from([*d]))).collect();
        loop {
            let mut changed = false;
            for t in &lts.transitions {
                if t.label == Label::Tau {
                    for d in lts.states.keys() {
                        if reach[d].contains(&t.source) && !reach[d].contains(&t.target) {
                            reach.get_mut(d).unwrap().insert(t.target);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return reach;
            }
        }
    };
    let weak = |lts: &Lts, eps: &BTreeMap<Digest, BTreeSet<Digest>>, s: &Digest, l: &Label| -> BTreeSet<Digest> {
        if *l == Label::Tau {
            return eps[s].clone();
        }
        let mut out = BTreeSet::new();
        for s1 in &eps[s] {
            for t in lts.transitions.iter().filter(|t| t.source == *s1 && t.label == *l) {
                out.extend(eps[&t.target].iter().copied());
            }
        }
        out
    };
    let ea = closure(a);
    let eb = closure(b);
    let mut rel: BTreeSet<(Digest, Digest)> =
        a.states.keys().flat_map(|x| b.states.keys().map(move |y| (*x, *y))).collect();
    loop {
        let mut drop = Vec::new();
        for &(x, y) in &rel {
            let left_ok = a.transitions.iter().filter(|t| t.source == x).all(|t| {
                weak(b, &eb, &y, &t.label).iter().any(|y2| rel.contains(&(t.target, *y2)))
            });
            let right_ok = b.transitions.iter().filter(|t| t.source == y).all(|t| {
                weak(a, &ea, &x, &t.label).iter().any(|x2| rel.contains(&(*x2, t.target)))
            });
            if !(left_ok && right_ok) {
                drop.push((x, y));
            }
        }
        if drop.is_empty() {
            return rel.contains(&(a.initial, b.initial));
        }
        for p in drop {
            rel.remove(&p);
        }
    }
}

/// Objects granted to `u`, by looping over every role and permission.
pub fn goals(m: &AuthorityModel, u: &UserId) -> BTreeSet<ObjectId> {
    let mut out = BTreeSet::new();
    for r in &m.roles {
        if !m.ua.get(u).is_some_and(|rs| rs.contains(r)) {
            continue;
        }
        for (p, pairs) in &m.permissions {
            if !m.pa.get(r).is_some_and(|ps| ps.contains(p)) {
                continue;
            }
            for (_, ob) in pairs {
                out.insert(ob.clone());
            }
        }
    }
    out
}

pub fn ops(m: &AuthorityModel, u: &UserId) -> BTreeSet<OperationId> {
    let mut out = BTreeSet::new();
    for r in &m.roles {
        if !m.ua.get(u).is_some_and(|rs| rs.contains(r)) {
            continue;
        }
        for (p, pairs) in &m.permissions {
            if !m.pa.get(r).is_some_and(|ps| ps.contains(p)) {
                continue;
            }
            for (op, _) in pairs {
                out.insert(op.clone());
            }
        }
    }
    out
}

pub fn authorize(m: &AuthorityModel, u: &UserId, op: &OperationId, ob: &ObjectId) -> bool {
    for r in &m.roles {
        if !m.ua.get(u).is_some_and(|rs| rs.contains(r)) {
            continue;
        }
        for (p, pairs) in &m.permissions {
            if m.pa.get(r).is_some_and(|ps| ps.contains(p)) && pairs.contains(&(op.clone(), ob.clone())) {
                return true;
            }
        }
    }
    false
}

/// Capture-avoiding substitution the slow way: rename every binder apart,
/// then replace textually.
pub fn naive_substitute(p: &Process, from: &Name, to: &Name) -> Process {
    let mut avoid = fv(p);
    avoid.insert(from.clone());
    avoid.insert(to.clone());
    replace(&rename_apart(p, &mut 0, &BTreeMap::new(), &avoid), from, to)
}

/// An alpha-variant of `p` whose binders are numbered from `start`.
pub fn alpha_variant(p: &Process, start: usize) -> Process {
    rename_apart(p, &mut start.clone(), &BTreeMap::new(), &fv(p))
}
