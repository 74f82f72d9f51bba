use std::collections::BTreeSet;

use super::{AgentId, Name, SignalId};

/// A term of the extended calculus.
///
/// `Input` binds `binder` in `then`; `Restrict` binds `name` in `body`.
/// Nothing else binds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    Nil,
    Seq(Box<Process>, Box<Process>),
    Output { channel: Name, payload: Name, then: Box<Process> },
    Input { channel: Name, binder: Name, then: Box<Process> },
    Tau(Box<Process>),
    Sum(Box<Process>, Box<Process>),
    Par(Box<Process>, Box<Process>),
    Restrict { name: Name, body: Box<Process> },
    Match { lhs: Name, rhs: Name, then: Box<Process> },
    SignalEmit { sig: SignalId, then: Box<Process> },
    Handler { body: Box<Process>, fallback: Box<Process>, sig: SignalId },
    Call(AgentId),
}

impl Default for Process {
    fn default() -> Self {
        Process::Nil
    }
}

impl Process {
    pub fn nil() -> Self {
        Process::Nil
    }

    pub fn seq(first: Process, second: Process) -> Self {
        Process::Seq(Box::new(first), Box::new(second))
    }

    pub fn output(channel: Name, payload: Name, then: Process) -> Self {
        Process::Output { channel, payload, then: Box::new(then) }
    }

    pub fn input(channel: Name, binder: Name, then: Process) -> Self {
        Process::Input { channel, binder, then: Box::new(then) }
    }

    pub fn tau(then: Process) -> Self {
        Process::Tau(Box::new(then))
    }

    pub fn sum(left: Process, right: Process) -> Self {
        Process::Sum(Box::new(left), Box::new(right))
    }

    pub fn par(left: Process, right: Process) -> Self {
        Process::Par(Box::new(left), Box::new(right))
    }

    pub fn restrict(name: Name, body: Process) -> Self {
        Process::Restrict { name, body: Box::new(body) }
    }

    pub fn matching(lhs: Name, rhs: Name, then: Process) -> Self {
        Process::Match { lhs, rhs, then: Box::new(then) }
    }

    pub fn emit(sig: SignalId, then: Process) -> Self {
        Process::SignalEmit { sig, then: Box::new(then) }
    }

    pub fn handler(body: Process, fallback: Process, sig: SignalId) -> Self {
        Process::Handler { body: Box::new(body), fallback: Box::new(fallback), sig }
    }

    pub fn call(agent: AgentId) -> Self {
        Process::Call(agent)
    }

    /// Left-nested sum of `items`; `Nil` when empty.
    pub fn sum_all(items: impl IntoIterator<Item = Process>) -> Self {
        fold_left(items.into_iter().collect(), Process::sum)
    }

    /// Left-nested parallel composition of `items`; `Nil` when empty.
    pub fn par_all(items: impl IntoIterator<Item = Process>) -> Self {
        fold_left(items.into_iter().collect(), Process::par)
    }

    /// Left-nested sequential composition of `items`; `Nil` when empty.
    pub fn seq_all(items: impl IntoIterator<Item = Process>) -> Self {
        fold_left(items.into_iter().collect(), Process::seq)
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }

    /// Number of action prefixes (tau, send, receive, signal) in the term.
    pub fn prefix_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |p| {
            if matches!(
                p,
                Process::Tau(_)
                    | Process::Output { .. }
                    | Process::Input { .. }
                    | Process::SignalEmit { .. }
            ) {
                n += 1;
            }
        });
        n
    }

    /// Pre-order walk over every subterm.
    pub fn visit(&self, f: &mut impl FnMut(&Process)) {
        f(self);
        match self {
            Process::Nil | Process::Call(_) => {}
            Process::Seq(a, b) | Process::Sum(a, b) | Process::Par(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Process::Handler { body, fallback, .. } => {
                body.visit(f);
                fallback.visit(f);
            }
            Process::Output { then, .. }
            | Process::Input { then, .. }
            | Process::Tau(then)
            | Process::Match { then, .. }
            | Process::SignalEmit { then, .. } => then.visit(f),
            Process::Restrict { body, .. } => body.visit(f),
        }
    }

    /// Agent identifiers referenced anywhere in the term.
    pub fn calls(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let Process::Call(a) = p {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Every name occurring in the term, free or bound (agent ids excluded).
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| match p {
            Process::Output { channel, payload, .. } => {
                out.insert(channel.clone());
                out.insert(payload.clone());
            }
            Process::Input { channel, binder, .. } => {
                out.insert(channel.clone());
                out.insert(binder.clone());
            }
            Process::Restrict { name, .. } => {
                out.insert(name.clone());
            }
            Process::Match { lhs, rhs, .. } => {
                out.insert(lhs.clone());
                out.insert(rhs.clone());
            }
            _ => {}
        });
        out
    }

    /// Signals emitted or handled in the term.
    pub fn signals(&self) -> BTreeSet<SignalId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| match p {
            Process::SignalEmit { sig, .. } | Process::Handler { sig, .. } => {
                out.insert(*sig);
            }
            _ => {}
        });
        out
    }

    /// Names used in subject (channel) position that are not bound by an
    /// enclosing input or restriction.
    pub fn free_channels(&self) -> BTreeSet<Name> {
        fn go(p: &Process, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match p {
                Process::Nil | Process::Call(_) => {}
                Process::Output { channel, then, .. } => {
                    if !bound.contains(channel) {
                        out.insert(channel.clone());
                    }
                    go(then, bound, out);
                }
                Process::Input { channel, binder, then } => {
                    if !bound.contains(channel) {
                        out.insert(channel.clone());
                    }
                    bound.push(binder.clone());
                    go(then, bound, out);
                    bound.pop();
                }
                Process::Restrict { name, body } => {
                    bound.push(name.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Process::Seq(a, b) | Process::Sum(a, b) | Process::Par(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Process::Handler { body, fallback, .. } => {
                    go(body, bound, out);
                    go(fallback, bound, out);
                }
                Process::Tau(t) | Process::Match { then: t, .. } | Process::SignalEmit { then: t, .. } => {
                    go(t, bound, out)
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

fn fold_left(items: Vec<Process>, join: fn(Process, Process) -> Process) -> Process {
    let mut items = items.into_iter();
    let Some(mut acc) = items.next() else {
        return Process::Nil;
    };
    for p in items {
        acc = join(acc, p);
    }
    acc
}
