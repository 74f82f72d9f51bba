use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CalcError;

/// Words the concrete syntax reserves. A name may not start with one of them.
pub const KEYWORDS: &[&str] = &["tau", "new", "sig", "chan", "agent", "main"];

/// A channel or payload name.
///
/// A name is one or more dot-separated segments; each segment is an
/// identifier optionally followed by primes (`x'`, `x''`), which is how fresh
/// names are spelled. Comparison is exact string equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(text: &str) -> Result<Self, CalcError> {
        if is_valid_name(text) {
            Ok(Name(Arc::from(text)))
        } else {
            Err(CalcError::InvalidName(text.to_string()))
        }
    }

    /// Builds a name without validation. Used for internal placeholders and
    /// positional binder names that must never collide with user names.
    pub(crate) fn internal(text: &str) -> Self {
        Name(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the name has a single segment, i.e. it can follow `new`.
    pub fn is_simple(&self) -> bool {
        !self.0.contains('.')
    }

    /// The name with all trailing primes removed.
    pub fn base(&self) -> &str {
        self.0.trim_end_matches('\'')
    }

    /// `self` with one more prime.
    pub fn primed(&self) -> Name {
        let mut s = String::with_capacity(self.0.len() + 1);
        s.push_str(&self.0);
        s.push('\'');
        Name(Arc::from(s))
    }
}

fn is_segment(seg: &str) -> bool {
    let core = seg.trim_end_matches('\'');
    let mut chars = core.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_valid_name(text: &str) -> bool {
    if text.is_empty() {
        return false;
    }
    let mut segs = text.split('.');
    let first = segs.next().unwrap_or("");
    if KEYWORDS.contains(&first) {
        return false;
    }
    is_segment(first) && segs.all(is_segment)
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Name::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Identifier of an agent definition. Shares the lexical rules of [`Name`].
pub type AgentId = Name;

/// A signal number, always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignalId(u32);

impl SignalId {
    pub fn new(value: u32) -> Result<Self, CalcError> {
        if value >= 1 {
            Ok(SignalId(value))
        } else {
            Err(CalcError::InvalidSignal(value))
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for SignalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for SignalId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u32::deserialize(d)?;
        SignalId::new(v).map_err(serde::de::Error::custom)
    }
}

/// Picks the first of `base`, `base'`, `base''`, ... rejected by `taken`.
pub fn fresh_name(base: &Name, taken: impl Fn(&Name) -> bool) -> Name {
    let mut candidate = base.clone();
    while taken(&candidate) {
        candidate = candidate.primed();
    }
    candidate
}
