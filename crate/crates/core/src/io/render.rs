use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::model::ModelFile;
use crate::syntax::Process;

const CHOICE: u8 = 1;
const PAR: u8 = 2;
const SEQ: u8 = 3;
const PREFIX: u8 = 4;

/// Renders a process with the fewest parentheses the grammar allows.
/// Binary operators associate to the left.
pub fn render_process(p: &Process) -> String {
    let mut out = String::new();
    write_proc(p, 0, &mut out).expect("writing to a String");
    out
}

/// Canonical file layout: one declaration per line, agents in name order.
pub fn render_model(m: &ModelFile) -> String {
    let mut out = String::new();
    for line in &m.header {
        push_comment(&mut out, line);
    }
    for c in &m.channels {
        let _ = writeln!(out, "chan {c}");
    }
    for s in &m.signals {
        let _ = writeln!(out, "sig {s}");
    }
    for (agent, body) in m.defs.entries() {
        if let Some(notes) = m.agent_notes.get(agent) {
            for line in notes {
                push_comment(&mut out, line);
            }
        }
        let _ = writeln!(out, "agent {agent} = {}", render_process(body));
    }
    let _ = writeln!(out, "main = {}", render_process(&m.main));
    out
}

fn push_comment(out: &mut String, line: &str) {
    if line.is_empty() {
        out.push_str("#\n");
    } else {
        for l in line.lines() {
            out.push_str("# ");
            out.push_str(l);
            out.push('\n');
        }
    }
}

fn write_proc(p: &Process, ctx: u8, out: &mut String) -> fmt::Result {
    let (level, wrap) = match p {
        Process::Sum(..) => (CHOICE, ctx > CHOICE),
        Process::Par(..) => (PAR, ctx > PAR),
        Process::Seq(..) => (SEQ, ctx > SEQ),
        _ => (PREFIX, false),
    };
    if wrap {
        out.push('(');
    }
    match p {
        Process::Nil => out.push('0'),
        Process::Call(a) => out.push_str(a.as_str()),
        Process::Sum(a, b) | Process::Par(a, b) | Process::Seq(a, b) => {
            let op = match level {
                CHOICE => " + ",
                PAR => " | ",
                _ => " ; ",
            };
            write_proc(a, level, out)?;
            out.push_str(op);
            write_proc(b, level + 1, out)?;
        }
        Process::Tau(t) => {
            out.push_str("tau.");
            write_proc(t, PREFIX, out)?;
        }
        Process::Output { channel, payload, then } => {
            write!(out, "{channel}!<{payload}>.")?;
            write_proc(then, PREFIX, out)?;
        }
        Process::Input { channel, binder, then } => {
            write!(out, "{channel}?({binder}).")?;
            write_proc(then, PREFIX, out)?;
        }
        Process::SignalEmit { sig, then } => {
            write!(out, "sig({sig}).")?;
            write_proc(then, PREFIX, out)?;
        }
        Process::Restrict { name, body } => {
            write!(out, "new {name}.")?;
            write_proc(body, PREFIX, out)?;
        }
        Process::Match { lhs, rhs, then } => {
            write!(out, "[{lhs}={rhs}]")?;
            write_proc(then, PREFIX, out)?;
        }
        Process::Handler { body, fallback, sig } => {
            out.push('[');
            write_proc(body, 0, out)?;
            out.push_str(", ");
            write_proc(fallback, 0, out)?;
            write!(out, "]@{sig}")?;
        }
    }
    if wrap {
        out.push(')');
    }
    Ok(())
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_process(self))
    }
}

impl Serialize for Process {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_process(self))
    }
}

impl<'de> Deserialize<'de> for Process {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_process(&text).map_err(serde::de::Error::custom)
    }
}
