use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest as _, Sha256};

use super::{Name, Process};

/// Stable 128-bit digest of an alpha-normal form.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest([u8; 16]);

impl Digest {
    pub const ZERO: Digest = Digest([0; 16]);

    pub fn of(normal_form: &Process) -> Self {
        let mut buf = Vec::with_capacity(256);
        encode(normal_form, &mut buf);
        let full = Sha256::digest(&buf);
        let mut out = [0u8; 16];
        out.copy_from_slice(&full[..16]);
        Digest(out)
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(32);
        for b in self.0 {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// First eight hex digits, for display.
    pub fn short(&self) -> String {
        self.to_hex()[..8].to_string()
    }

    pub fn from_hex(text: &str) -> Option<Self> {
        if text.len() != 32 || !text.is_ascii() {
            return None;
        }
        let mut out = [0u8; 16];
        for (i, chunk) in out.iter_mut().enumerate() {
            *chunk = u8::from_str_radix(&text[2 * i..2 * i + 2], 16).ok()?;
        }
        Some(Digest(out))
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.short())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Digest {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Digest::from_hex(&s).ok_or_else(|| serde::de::Error::custom("expected 32 hex digits"))
    }
}

/// A process together with the digest of its alpha-normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalProcess {
    pub digest: Digest,
    /// The input with every bound name replaced by `#k`, `k` being the number
    /// of binders enclosing the binding site.
    pub normal_form: Process,
}

pub fn canonicalize(p: &Process) -> CanonicalProcess {
    let normal_form = alpha_normal(p);
    CanonicalProcess { digest: Digest::of(&normal_form), normal_form }
}

/// True iff `p` and `q` differ only in the choice of bound names.
pub fn alpha_equivalent(p: &Process, q: &Process) -> bool {
    alpha_normal(p) == alpha_normal(q)
}

/// Renames binders by depth. Because the positional name depends only on the
/// nesting depth, sibling subterms normalize independently of their order.
pub fn alpha_normal(p: &Process) -> Process {
    let mut env = Vec::new();
    rename_levels(p, &mut env)
}

pub(crate) fn level_name(depth: usize) -> Name {
    static CACHE: OnceLock<Vec<Name>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..64).map(|k| Name::internal(&format!("#{k}"))).collect());
    cache.get(depth).cloned().unwrap_or_else(|| Name::internal(&format!("#{depth}")))
}

fn lookup(env: &[(Name, Name)], n: &Name) -> Name {
    env.iter().rev().find(|(orig, _)| orig == n).map(|(_, new)| new.clone()).unwrap_or_else(|| n.clone())
}

pub(crate) fn rename_levels(p: &Process, env: &mut Vec<(Name, Name)>) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::Call(a) => Process::Call(a.clone()),
        Process::Output { channel, payload, then } => {
            Process::output(lookup(env, channel), lookup(env, payload), rename_levels(then, env))
        }
        Process::Match { lhs, rhs, then } => {
            Process::matching(lookup(env, lhs), lookup(env, rhs), rename_levels(then, env))
        }
        Process::Input { channel, binder, then } => {
            let channel = lookup(env, channel);
            let fresh = level_name(env.len());
            env.push((binder.clone(), fresh.clone()));
            let then = rename_levels(then, env);
            env.pop();
            Process::input(channel, fresh, then)
        }
        Process::Restrict { name, body } => {
            let fresh = level_name(env.len());
            env.push((name.clone(), fresh.clone()));
            let body = rename_levels(body, env);
            env.pop();
            Process::restrict(fresh, body)
        }
        Process::Tau(t) => Process::tau(rename_levels(t, env)),
        Process::SignalEmit { sig, then } => Process::emit(*sig, rename_levels(then, env)),
        Process::Seq(a, b) => Process::seq(rename_levels(a, env), rename_levels(b, env)),
        Process::Sum(a, b) => Process::sum(rename_levels(a, env), rename_levels(b, env)),
        Process::Par(a, b) => Process::par(rename_levels(a, env), rename_levels(b, env)),
        Process::Handler { body, fallback, sig } => {
            Process::handler(rename_levels(body, env), rename_levels(fallback, env), *sig)
        }
    }
}

fn encode(p: &Process, out: &mut Vec<u8>) {
    fn name(n: &Name, out: &mut Vec<u8>) {
        let bytes = n.as_str().as_bytes();
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(bytes);
    }
    match p {
        Process::Nil => out.push(0),
        Process::Seq(a, b) => {
            out.push(1);
            encode(a, out);
            encode(b, out);
        }
        Process::Output { channel, payload, then } => {
            out.push(2);
            name(channel, out);
            name(payload, out);
            encode(then, out);
        }
        Process::Input { channel, binder, then } => {
            out.push(3);
            name(channel, out);
            name(binder, out);
            encode(then, out);
        }
        Process::Tau(t) => {
            out.push(4);
            encode(t, out);
        }
        Process::Sum(a, b) => {
            out.push(5);
            encode(a, out);
            encode(b, out);
        }
        Process::Par(a, b) => {
            out.push(6);
            encode(a, out);
            encode(b, out);
        }
        Process::Restrict { name: n, body } => {
            out.push(7);
            name(n, out);
            encode(body, out);
        }
        Process::Match { lhs, rhs, then } => {
            out.push(8);
            name(lhs, out);
            name(rhs, out);
            encode(then, out);
        }
        Process::SignalEmit { sig, then } => {
            out.push(9);
            out.extend_from_slice(&sig.value().to_le_bytes());
            encode(then, out);
        }
        Process::Handler { body, fallback, sig } => {
            out.push(10);
            out.extend_from_slice(&sig.value().to_le_bytes());
            encode(body, out);
            encode(fallback, out);
        }
        Process::Call(a) => {
            out.push(11);
            name(a, out);
        }
    }
}
