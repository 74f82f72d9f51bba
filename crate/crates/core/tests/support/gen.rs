//! Term, model-file and authority-model generators.

use std::collections::BTreeSet;

use picomp_core::authority::{AuthorityModel, ObjectId, OperationId, PermissionId, RoleId, UserId};
use picomp_core::{Name, Process, SignalId};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}

pub fn sig(v: u32) -> SignalId {
    SignalId::new(v).unwrap()
}

pub const POOL: &[&str] = &["a", "b", "c", "x", "y", "z"];

fn name_strategy() -> impl Strategy<Value = Name> {
    prop::sample::select(POOL).prop_map(n)
}

/// Call-free terms of bounded depth over a small name pool.
pub fn term(depth: u32) -> BoxedStrategy<Process> {
    let leaf = prop_oneof![
        4 => Just(Process::Nil),
        1 => (1u32..3).prop_map(|s| Process::emit(sig(s), Process::Nil)),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Process::tau),
            (name_strategy(), name_strategy(), inner.clone()).prop_map(|(c, x, p)| Process::output(c, x, p)),
            (name_strategy(), name_strategy(), inner.clone()).prop_map(|(c, x, p)| Process::input(c, x, p)),
            (1u32..3, inner.clone()).prop_map(|(s, p)| Process::emit(sig(s), p)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Process::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Process::par(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Process::seq(a, b)),
            (name_strategy(), inner.clone()).prop_map(|(x, p)| Process::restrict(x, p)),
            (name_strategy(), name_strategy(), inner.clone()).prop_map(|(x, y, p)| Process::matching(x, y, p)),
            (inner.clone(), inner.clone(), 1u32..3).prop_map(|(a, b, s)| Process::handler(a, b, sig(s))),
        ]
    })
    .boxed()
}

/// Applies one randomly chosen congruence law somewhere in the term.
pub fn congruent_variant(p: &Process, rng: &mut impl Rng) -> Process {
    let choice = rng.random_range(0..7);
    match (choice, p) {
        (0, Process::Par(a, b)) => Process::par((**b).clone(), (**a).clone()),
        (1, Process::Sum(a, b)) => Process::sum((**b).clone(), (**a).clone()),
        (2, _) => Process::par(p.clone(), Process::Nil),
        (3, _) => Process::sum(Process::Nil, p.clone()),
        (4, _) => Process::seq(Process::Nil, p.clone()),
        (5, Process::Par(a, b)) => match &**a {
            Process::Par(x, y) => Process::par((**x).clone(), Process::par((**y).clone(), (**b).clone())),
            _ => Process::par(Process::restrict(n("unused"), (**a).clone()), (**b).clone()),
        },
        (6, Process::Restrict { name, body }) => match &**body {
            Process::Par(x, y) if !picomp_core::syntax::free_names_opaque(y).contains(name) => {
                Process::par(Process::restrict(name.clone(), (**x).clone()), (**y).clone())
            }
            _ => p.clone(),
        },
        _ => match p {
            Process::Par(a, b) => Process::par(congruent_variant(a, rng), (**b).clone()),
            Process::Sum(a, b) => Process::sum((**a).clone(), congruent_variant(b, rng)),
            Process::Restrict { name, body } => Process::restrict(name.clone(), congruent_variant(body, rng)),
            Process::Tau(t) => Process::tau(congruent_variant(t, rng)),
            other => Process::par(Process::Nil, other.clone()),
        },
    }
}

/// Random call-free term with exactly `prefixes` action prefixes over
/// channels {a, b} and names {x, y}.
pub fn small_term(rng: &mut impl Rng, prefixes: usize) -> Process {
    let ch = |rng: &mut _| n(["a", "b"].choose(rng).unwrap());
    let nm = |rng: &mut _| n(["x", "y"].choose(rng).unwrap());
    if prefixes == 0 {
        return Process::Nil;
    }
    match rng.random_range(0..12) {
        0..=5 => {
            let rest = small_term(rng, prefixes - 1);
            match rng.random_range(0..4) {
                0 => Process::tau(rest),
                1 => Process::output(ch(rng), nm(rng), rest),
                2 => Process::input(ch(rng), nm(rng), rest),
                _ => Process::emit(sig(1), rest),
            }
        }
        6..=9 if prefixes >= 2 => {
            let k = rng.random_range(1..prefixes);
            let a = small_term(rng, k);
            let b = small_term(rng, prefixes - k);
            match rng.random_range(0..4) {
                0 => Process::sum(a, b),
                1 | 2 => Process::par(a, b),
                _ => Process::seq(a, b),
            }
        }
        10 => {
            let k = rng.random_range(0..=prefixes);
            Process::handler(small_term(rng, k), small_term(rng, prefixes - k), sig(1))
        }
        _ => {
            let body = small_term(rng, prefixes);
            match rng.random_range(0..3) {
                0 => Process::restrict(nm(rng), body),
                1 => Process::restrict(ch(rng), body),
                _ => {
                    let x = nm(rng);
                    let y = if rng.random_bool(0.5) { x.clone() } else { nm(rng) };
                    Process::matching(x, y, body)
                }
            }
        }
    }
}

/// Every term with at most `max` prefixes built from the action prefixes over
/// channels {a, b} and names {x, y}, `|` and `+`; plus those terms under one
/// outer `new a`, `new x` or `[x=y]`, and `;` or a handler joining two of them.
pub fn all_small_terms(max: usize) -> Vec<Process> {
    let mut by_size: Vec<Vec<Process>> = vec![vec![Process::Nil]];
    for k in 1..=max {
        let mut level = Vec::new();
        for rest in &by_size[k - 1] {
            level.push(Process::tau(rest.clone()));
            level.push(Process::emit(sig(1), rest.clone()));
            for c in ["a", "b"] {
                for x in ["x", "y"] {
                    level.push(Process::output(n(c), n(x), rest.clone()));
                    level.push(Process::input(n(c), n(x), rest.clone()));
                }
            }
        }
        for i in 1..k {
            for l in &by_size[i] {
                for r in &by_size[k - i] {
                    level.push(Process::par(l.clone(), r.clone()));
                    level.push(Process::sum(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(level);
    }
    let core: Vec<Process> = by_size.iter().flatten().cloned().collect();
    let mut out = core.clone();
    for p in &core {
        out.push(Process::restrict(n("a"), p.clone()));
        out.push(Process::restrict(n("x"), p.clone()));
        out.push(Process::matching(n("x"), n("y"), p.clone()));
    }
    for i in 1..max {
        for j in 1..=max - i {
            for l in &by_size[i] {
                for r in &by_size[j] {
                    out.push(Process::seq(l.clone(), r.clone()));
                    out.push(Process::handler(l.clone(), r.clone(), sig(1)));
                }
            }
        }
    }
    out
}

/// A random authority model with at most `max` of each entity.
pub fn authority_model(rng: &mut impl Rng, max: usize) -> AuthorityModel {
    let mut m = AuthorityModel::default();
    let count = |rng: &mut _| rand::Rng::random_range(rng, 1..=max);
    let users: Vec<UserId> = (0..count(rng)).map(|i| UserId::new(format!("u{i}"))).collect();
    let roles: Vec<RoleId> = (0..count(rng)).map(|i| RoleId::new(format!("r{i}"))).collect();
    let objects: Vec<ObjectId> = (0..count(rng)).map(|i| ObjectId::new(format!("o{i}"))).collect();
    let ops: Vec<OperationId> = (0..count(rng)).map(|i| OperationId::new(format!("op{i}"))).collect();
    let perms: Vec<PermissionId> = (0..count(rng)).map(|i| PermissionId::new(format!("p{i}"))).collect();
    for p in &perms {
        let mut pairs = BTreeSet::new();
        for _ in 0..rng.random_range(0..=3) {
            pairs.insert((ops.choose(rng).unwrap().clone(), objects.choose(rng).unwrap().clone()));
        }
        m.permissions.insert(p.clone(), pairs);
    }
    for u in &users {
        let rs = roles.iter().filter(|_| rng.random_bool(0.4)).cloned().collect();
        m.ua.insert(u.clone(), rs);
    }
    for r in &roles {
        let ps = perms.iter().filter(|_| rng.random_bool(0.4)).cloned().collect();
        m.pa.insert(r.clone(), ps);
    }
    m.users = users.into_iter().collect();
    m.roles = roles.into_iter().collect();
    m.objects = objects.into_iter().collect();
    m.operations = ops.into_iter().collect();
    m
}

/// Grammar-directed model text: random terms printed with random spacing,
/// line breaks, comments and redundant parentheses.
pub struct ModelText<'r, R: Rng> {
    rng: &'r mut R,
    out: String,
    agents: Vec<String>,
}

const CHANNELS: &[&str] = &["a", "b", "x", "y"];
const PAYLOADS: &[&str] = &["a", "b", "x", "y", "S_k.role"];
const BINDERS: &[&str] = &["x", "y", "z"];

impl<'r, R: Rng> ModelText<'r, R> {
    pub fn generate(rng: &'r mut R) -> String {
        let agents: Vec<String> = (0..rng.random_range(0..3)).map(|i| format!("P{i}")).collect();
        let mut g = ModelText { rng, out: String::new(), agents };
        g.file();
        g.out
    }

    fn space(&mut self) {
        match self.rng.random_range(0..10) {
            0 => self.out.push_str("\n  "),
            1 => self.out.push_str("  "),
            2 => self.out.push_str(" # note\n"),
            3 => self.out.push_str("\r\n"),
            _ => self.out.push(' '),
        }
    }

    fn maybe_space(&mut self) {
        if self.rng.random_bool(0.3) {
            self.space();
        }
    }

    fn file(&mut self) {
        if self.rng.random_bool(0.3) {
            self.out.push_str("# generated\n");
        }
        if self.rng.random_bool(0.7) {
            for c in CHANNELS.iter().chain(["z"].iter()) {
                self.out.push_str("chan");
                self.space();
                self.out.push_str(c);
                self.space();
            }
        }
        if self.rng.random_bool(0.5) {
            self.out.push_str("sig 1");
            self.space();
        }
        for a in self.agents.clone() {
            self.out.push_str("agent ");
            self.out.push_str(&a);
            self.maybe_space();
            self.out.push('=');
            self.maybe_space();
            self.prefixed(3);
            self.space();
        }
        self.out.push_str("main");
        self.maybe_space();
        self.out.push('=');
        self.maybe_space();
        self.proc(3, 0, true);
        if self.rng.random_bool(0.5) {
            self.out.push('\n');
        }
    }

    /// Emits a prefix so that calls below it are guarded.
    fn prefixed(&mut self, depth: u32) {
        self.out.push_str("tau.");
        self.proc(depth, 4, true);
    }

    /// `ctx` is the binding strength required by the surrounding operator:
    /// 0 any, 1 choice, 2 parallel, 3 sequence, 4 prefix operand.
    fn proc(&mut self, depth: u32, ctx: u8, guarded: bool) {
        let pick = if depth == 0 { self.rng.random_range(0..3) } else { self.rng.random_range(0..14) };
        let level = match pick {
            8 => 1,
            9 => 2,
            10 => 3,
            _ => 4,
        };
        let extra = self.rng.random_bool(0.1);
        let wrap = level < ctx || extra;
        if wrap {
            self.out.push('(');
            self.maybe_space();
        }
        match pick {
            0 | 1 => self.out.push('0'),
            2 => {
                if guarded && !self.agents.is_empty() {
                    let a = self.agents.choose(self.rng).unwrap().clone();
                    self.out.push_str(&a);
                } else {
                    self.out.push_str("tau.0");
                }
            }
            3 => {
                self.out.push_str("tau.");
                self.maybe_space();
                self.proc(depth - 1, 4, true);
            }
            4 => {
                let c = *CHANNELS.choose(self.rng).unwrap();
                let x = *PAYLOADS.choose(self.rng).unwrap();
                self.out.push_str(&format!("{c}!<{x}>."));
                self.maybe_space();
                self.proc(depth - 1, 4, true);
            }
            5 => {
                let c = *CHANNELS.choose(self.rng).unwrap();
                let x = *BINDERS.choose(self.rng).unwrap();
                self.out.push_str(&format!("{c}?({x})."));
                self.maybe_space();
                self.proc(depth - 1, 4, true);
            }
            6 => {
                let x = *BINDERS.choose(self.rng).unwrap();
                let choice = self.rng.random_range(0..3);
                match choice {
                    0 => self.out.push_str(&format!("new {x}.")),
                    1 => self.out.push_str("sig(1)."),
                    _ => {
                        let y = *PAYLOADS.choose(self.rng).unwrap();
                        self.out.push_str(&format!("[{x} ={y}]"));
                    }
                }
                self.maybe_space();
                self.proc(depth - 1, 4, guarded || choice == 1);
            }
            7 => {
                self.out.push('[');
                self.proc(depth - 1, 0, guarded);
                self.out.push(',');
                self.maybe_space();
                self.proc(depth - 1, 0, guarded);
                self.out.push_str("]@");
                self.out.push_str(&self.rng.random_range(1..4).to_string());
            }
            8..=10 => {
                let op = [" + ", " | ", " ; "][(pick - 8) as usize];
                self.proc(depth - 1, level, guarded);
                self.out.push_str(op);
                self.maybe_space();
                self.proc(depth - 1, level + 1, guarded);
            }
            _ => self.out.push('0'),
        }
        if wrap {
            self.maybe_space();
            self.out.push(')');
        }
    }
}
