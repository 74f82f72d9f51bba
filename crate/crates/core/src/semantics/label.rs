use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::syntax::{Name, SignalId};

/// A transition action.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    Out { channel: Name, payload: Name },
    In { channel: Name, payload: Name },
    /// Output of a restricted name, which leaves its scope under `fresh`.
    BoundOut { channel: Name, fresh: Name },
    Emit(SignalId),
    Handle(SignalId),
}

impl Label {
    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn channel(&self) -> Option<&Name> {
        match self {
            Label::Out { channel, .. } | Label::In { channel, .. } | Label::BoundOut { channel, .. } => {
                Some(channel)
            }
            _ => None,
        }
    }

    /// The name bound by the action, if any.
    pub fn bound_name(&self) -> Option<&Name> {
        match self {
            Label::BoundOut { fresh, .. } => Some(fresh),
            _ => None,
        }
    }

    /// Every name mentioned by the action.
    pub fn names(&self) -> Vec<&Name> {
        match self {
            Label::Out { channel, payload } | Label::In { channel, payload } => vec![channel, payload],
            Label::BoundOut { channel, fresh } => vec![channel, fresh],
            _ => Vec::new(),
        }
    }

    /// Parses the rendered form produced by `Display`.
    pub fn parse(text: &str) -> Option<Label> {
        let text = text.trim();
        if text == "tau" {
            return Some(Label::Tau);
        }
        let number = |inner: &str| inner.parse::<u32>().ok().and_then(|v| SignalId::new(v).ok());
        if let Some(rest) = text.strip_prefix("sig(").and_then(|r| r.strip_suffix(')')) {
            return number(rest).map(Label::Emit);
        }
        if let Some(rest) = text.strip_prefix("handle(").and_then(|r| r.strip_suffix(')')) {
            return number(rest).map(Label::Handle);
        }
        let body = text.strip_suffix('>')?;
        let (head, payload) = body.split_once('<')?;
        if let Some(channel) = head.strip_suffix('!') {
            let channel = Name::new(channel).ok()?;
            if let Some(fresh) = payload.strip_prefix("new ") {
                return Some(Label::BoundOut { channel, fresh: Name::new(fresh).ok()? });
            }
            return Some(Label::Out { channel, payload: Name::new(payload).ok()? });
        }
        let channel = Name::new(head.strip_suffix('?')?).ok()?;
        Some(Label::In { channel, payload: Name::new(payload).ok()? })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Out { channel, payload } => write!(f, "{channel}!<{payload}>"),
            Label::In { channel, payload } => write!(f, "{channel}?<{payload}>"),
            Label::BoundOut { channel, fresh } => write!(f, "{channel}!<new {fresh}>"),
            Label::Emit(s) => write!(f, "sig({s})"),
            Label::Handle(s) => write!(f, "handle({s})"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad label `{s}`")))
    }
}
