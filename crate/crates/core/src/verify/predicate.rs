use std::fmt;

use crate::semantics::{Label, Lts};
use crate::syntax::{is_nil_like, AgentId, Digest, Name, Process, SignalId};

/// A label with optional wildcards (`_`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelPattern {
    Any,
    Tau,
    Out { channel: Option<Name>, payload: Option<Name> },
    In { channel: Option<Name>, payload: Option<Name> },
    BoundOut { channel: Option<Name> },
    Emit(Option<SignalId>),
    Handle(Option<SignalId>),
}

fn fits<T: PartialEq>(want: &Option<T>, got: &T) -> bool {
    want.as_ref().is_none_or(|w| w == got)
}

impl LabelPattern {
    pub fn matches(&self, l: &Label) -> bool {
        match (self, l) {
            (LabelPattern::Any, _) => true,
            (LabelPattern::Tau, Label::Tau) => true,
            (LabelPattern::Out { channel, payload }, Label::Out { channel: c, payload: p })
            | (LabelPattern::In { channel, payload }, Label::In { channel: c, payload: p }) => {
                fits(channel, c) && fits(payload, p)
            }
            (LabelPattern::BoundOut { channel }, Label::BoundOut { channel: c, .. }) => fits(channel, c),
            (LabelPattern::Emit(s), Label::Emit(t)) | (LabelPattern::Handle(s), Label::Handle(t)) => fits(s, t),
            _ => false,
        }
    }

    /// Parses `_`, `tau`, `c!<x>`, `c?<x>`, `c!<new _>`, `sig(n)` or
    /// `handle(n)`, where any name or number may be `_`.
    pub fn parse(text: &str) -> Option<LabelPattern> {
        let text = text.trim();
        let name = |s: &str| -> Option<Option<Name>> {
            if s == "_" {
                Some(None)
            } else {
                Name::new(s).ok().map(Some)
            }
        };
        let sig = |s: &str| -> Option<Option<SignalId>> {
            if s == "_" {
                Some(None)
            } else {
                SignalId::new(s.parse().ok()?).ok().map(Some)
            }
        };
        match text {
            "_" => return Some(LabelPattern::Any),
            "tau" => return Some(LabelPattern::Tau),
            _ => {}
        }
        if let Some(n) = text.strip_prefix("sig(").and_then(|r| r.strip_suffix(')')) {
            return sig(n).map(LabelPattern::Emit);
        }
        if let Some(n) = text.strip_prefix("handle(").and_then(|r| r.strip_suffix(')')) {
            return sig(n).map(LabelPattern::Handle);
        }
        let (head, payload) = text.strip_suffix('>')?.split_once('<')?;
        if let Some(c) = head.strip_suffix('!') {
            if let Some(f) = payload.strip_prefix("new ") {
                if f != "_" && Name::new(f).is_err() {
                    return None;
                }
                return Some(LabelPattern::BoundOut { channel: name(c)? });
            }
            return Some(LabelPattern::Out { channel: name(c)?, payload: name(payload)? });
        }
        let c = head.strip_suffix('?')?;
        Some(LabelPattern::In { channel: name(c)?, payload: name(payload)? })
    }
}

impl fmt::Display for LabelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn w<T: fmt::Display>(o: &Option<T>) -> String {
            o.as_ref().map_or("_".to_string(), |v| v.to_string())
        }
        match self {
            LabelPattern::Any => f.write_str("_"),
            LabelPattern::Tau => f.write_str("tau"),
            LabelPattern::Out { channel, payload } => write!(f, "{}!<{}>", w(channel), w(payload)),
            LabelPattern::In { channel, payload } => write!(f, "{}?<{}>", w(channel), w(payload)),
            LabelPattern::BoundOut { channel } => write!(f, "{}!<new _>", w(channel)),
            LabelPattern::Emit(s) => write!(f, "sig({})", w(s)),
            LabelPattern::Handle(s) => write!(f, "handle({})", w(s)),
        }
    }
}

/// A property of a single state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatePredicate {
    /// The state is congruent to `0`.
    IsNilLike,
    /// The state has a recorded transition whose label fits the pattern.
    CanFire(LabelPattern),
    /// At least `occurrences` instances of the agent sit at active positions
    /// (not under a prefix and not in a handler's fallback).
    AgentActive { agent: AgentId, occurrences: usize },
    /// An enabled match compares `rhs` with itself: a guard `[lhs=rhs]` whose
    /// `lhs` was bound to `rhs` has passed.
    MatchFired { lhs: Name, rhs: Name },
}

impl StatePredicate {
    pub fn holds(&self, lts: &Lts, state: &Digest) -> bool {
        let Some(p) = lts.states.get(state) else { return false };
        match self {
            StatePredicate::IsNilLike => is_nil_like(p),
            StatePredicate::CanFire(pat) => lts.outgoing(state).any(|t| pat.matches(&t.label)),
            StatePredicate::AgentActive { agent, occurrences } => {
                let mut n = 0;
                active(p, &mut |q| {
                    if matches!(q, Process::Call(a) if a == agent) {
                        n += 1;
                    }
                });
                n >= *occurrences
            }
            StatePredicate::MatchFired { rhs, .. } => {
                let mut hit = false;
                active(p, &mut |q| {
                    if matches!(q, Process::Match { lhs: l, rhs: r, .. } if l == rhs && r == rhs) {
                        hit = true;
                    }
                });
                hit
            }
        }
    }

    /// Parses `nil`, `can-fire(PATTERN)`, `active(AGENT)`, `active(AGENT,N)`
    /// or `match(LHS,RHS)`.
    pub fn parse(text: &str) -> Result<StatePredicate, String> {
        let text = text.trim();
        if text == "nil" {
            return Ok(StatePredicate::IsNilLike);
        }
        let (head, args) = text
            .split_once('(')
            .and_then(|(h, rest)| rest.strip_suffix(')').map(|a| (h.trim(), a)))
            .ok_or_else(|| format!("cannot read predicate `{text}`"))?;
        let name = |s: &str| Name::new(s.trim()).map_err(|e| e.to_string());
        match head {
            "can-fire" => LabelPattern::parse(args)
                .map(StatePredicate::CanFire)
                .ok_or_else(|| format!("cannot read label pattern `{args}`")),
            "active" => {
                let (agent, n) = match args.split_once(',') {
                    Some((a, n)) => (a, n.trim().parse().map_err(|_| format!("bad count `{n}`"))?),
                    None => (args, 1),
                };
                Ok(StatePredicate::AgentActive { agent: name(agent)?, occurrences: n })
            }
            "match" => {
                let (l, r) = args.split_once(',').ok_or("match needs two names")?;
                Ok(StatePredicate::MatchFired { lhs: name(l)?, rhs: name(r)? })
            }
            other => Err(format!("unknown predicate `{other}`")),
        }
    }
}

/// Visits every subterm at an active position.
fn active(p: &Process, f: &mut impl FnMut(&Process)) {
    f(p);
    match p {
        Process::Par(a, b) | Process::Sum(a, b) => {
            active(a, f);
            active(b, f);
        }
        Process::Seq(a, _) => active(a, f),
        Process::Restrict { body, .. } => active(body, f),
        Process::Handler { body, .. } => active(body, f),
        Process::Match { lhs, rhs, then } if lhs == rhs => active(then, f),
        _ => {}
    }
}
