//! A workbench for an extended pi-calculus with sequential composition,
//! signals and handlers: terms, transition systems, a role-based authority
//! model, a composition-model generator and verification procedures.

pub mod authority;
pub mod generator;
pub mod io;
pub mod semantics;
pub mod syntax;
pub mod verify;

pub use io::{parse_model, parse_process, render_model, render_process, ModelFile, ParseError};
pub use semantics::{build_lts, transitions, ExplorationMode, Label, Limits, Lts, Transition};
pub use syntax::{
    canonicalize, normalize, structurally_congruent, substitute, AgentId, CalcError, DefinitionTable,
    Digest, Name, Process, SignalId,
};
