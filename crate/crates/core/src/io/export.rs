use std::fmt::Write as _;

use crate::semantics::Lts;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Renders an LTS. Both formats list states and transitions in digest order,
/// so equal LTSs give identical bytes.
pub fn export_lts(lts: &Lts, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => to_dot(lts),
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(lts).expect("LTS serialisation cannot fail");
            s.push('\n');
            s
        }
    }
}

pub fn import_lts_json(text: &str) -> Result<Lts, serde_json::Error> {
    serde_json::from_str(text)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn to_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n  node [shape=circle];\n");
    for d in lts.states.keys() {
        let shape = if *d == lts.initial { " shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  {} [label={}{}];", quote(&d.to_hex()), quote(&d.short()), shape);
    }
    for t in &lts.transitions {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&t.source.to_hex()),
            quote(&t.target.to_hex()),
            quote(&t.label.to_string())
        );
    }
    out.push_str("}\n");
    out
}
