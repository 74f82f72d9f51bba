//! Oracles, generators and fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod gen;
pub mod laws;
pub mod oracle;

use std::collections::BTreeMap;
use std::path::PathBuf;

use picomp_core::authority::UserId;
use picomp_core::generator::CompositionConfig;
use picomp_core::io::{load_aidb, load_wsdb};
use picomp_core::{Name, Process, SignalId};

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/dwsc").join(file)
}

pub fn fixture(file: &str) -> String {
    std::fs::read_to_string(fixture_path(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

pub fn dwsc_config(literal_seq: bool) -> CompositionConfig {
    let wsdb = load_wsdb(&fixture("wsdb.json")).unwrap();
    CompositionConfig {
        services: wsdb.services,
        channels: wsdb.channels,
        authority: load_aidb(&fixture("aidb.json")).unwrap(),
        requester_user: UserId::new("u_req"),
        failure_signal: SignalId::new(1).unwrap(),
        literal_seq,
    }
}

pub fn channel_map() -> BTreeMap<Name, Name> {
    let raw: BTreeMap<String, String> = serde_json::from_str(&fixture("channel_map.json")).unwrap();
    raw.into_iter().map(|(k, v)| (Name::new(&k).unwrap(), Name::new(&v).unwrap())).collect()
}

/// Simultaneous renaming of channel names. Channels in the fixtures are
/// never bound, so no capture can occur.
pub fn rename_channels(p: &Process, map: &BTreeMap<Name, Name>) -> Process {
    let r = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
    let go = |q: &Process| rename_channels(q, map);
    match p {
        Process::Nil | Process::Call(_) => p.clone(),
        Process::Output { channel, payload, then } => Process::output(r(channel), payload.clone(), go(then)),
        Process::Input { channel, binder, then } => Process::input(r(channel), binder.clone(), go(then)),
        Process::Tau(t) => Process::tau(go(t)),
        Process::SignalEmit { sig, then } => Process::emit(*sig, go(then)),
        Process::Match { lhs, rhs, then } => Process::matching(lhs.clone(), rhs.clone(), go(then)),
        Process::Restrict { name, body } => Process::restrict(name.clone(), go(body)),
        Process::Seq(a, b) => Process::seq(go(a), go(b)),
        Process::Sum(a, b) => Process::sum(go(a), go(b)),
        Process::Par(a, b) => Process::par(go(a), go(b)),
        Process::Handler { body, fallback, sig } => Process::handler(go(body), go(fallback), *sig),
    }
}

fn summands(p: &Process, out: &mut Vec<Process>) {
    match p {
        Process::Sum(a, b) => {
            summands(a, out);
            summands(b, out);
        }
        other => out.push(other.clone()),
    }
}

/// Cuts every summand of a definition after its first action (keeping the
/// guard right after an input) and closes it with the recursive call.
pub fn head_abstraction(agent: &Name, body: &Process) -> Process {
    let me = Process::call(agent.clone());
    let mut parts = Vec::new();
    summands(body, &mut parts);
    let heads = parts.into_iter().map(|s| match s {
        Process::Tau(_) => Process::tau(me.clone()),
        Process::Output { channel, payload, .. } => Process::output(channel, payload, me.clone()),
        Process::SignalEmit { sig, .. } => Process::emit(sig, me.clone()),
        Process::Input { channel, binder, then } => match *then {
            Process::Match { lhs, rhs, .. } => {
                Process::input(channel, binder, Process::matching(lhs, rhs, me.clone()))
            }
            _ => Process::input(channel, binder, me.clone()),
        },
        other => other,
    });
    Process::sum_all(heads)
}

/// Whether a reported position points into `src` (or just past its end).
pub fn span_within(src: &str, span: picomp_core::io::Span) -> bool {
    let lines: Vec<&str> = src.split('\n').collect();
    span.line >= 1
        && span.line <= lines.len()
        && span.column >= 1
        && span.column <= lines[span.line - 1].chars().count() + 1
}

/// A random edit that usually breaks the syntax.
pub fn mutate(src: &str, rng: &mut impl rand::Rng) -> String {
    const JUNK: &[char] = &['(', ')', '[', ']', '<', '>', '!', '?', '.', ',', ';', '|', '+', '@', '=', '#', '$', 'x', '0', '\''];
    let chars: Vec<char> = src.chars().collect();
    let at = rng.random_range(0..=chars.len());
    let mut out = chars.clone();
    match rng.random_range(0..4) {
        0 if !chars.is_empty() => {
            out.remove(at.min(chars.len() - 1));
        }
        1 => out.insert(at, JUNK[rng.random_range(0..JUNK.len())]),
        2 => out.truncate(at),
        _ => {
            let end = (at + rng.random_range(1..6)).min(chars.len());
            let piece: Vec<char> = chars[at..end].to_vec();
            out.splice(at..at, piece);
        }
    }
    out.into_iter().collect()
}
