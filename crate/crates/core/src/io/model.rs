use std::collections::{BTreeMap, BTreeSet};

use super::lexer::Span;
use crate::syntax::{AgentId, DefinitionTable, Name, Process, SignalId};

/// A parsed model: declarations, agent definitions and the main process.
///
/// Equality ignores source positions and comments.
#[derive(Clone, Debug, Default)]
pub struct ModelFile {
    pub channels: BTreeSet<Name>,
    pub signals: BTreeSet<SignalId>,
    pub defs: DefinitionTable,
    pub main: Process,
    /// Declaration positions keyed by `chan NAME`, `agent NAME` and `main`.
    pub spans: BTreeMap<String, Span>,
    /// Comment lines rendered at the top of the file.
    pub header: Vec<String>,
    /// Comment lines rendered above individual agent definitions.
    pub agent_notes: BTreeMap<AgentId, Vec<String>>,
}

impl PartialEq for ModelFile {
    fn eq(&self, other: &Self) -> bool {
        self.channels == other.channels
            && self.signals == other.signals
            && self.defs.entries() == other.defs.entries()
            && self.main == other.main
    }
}

impl Eq for ModelFile {}
