//! The term language and its purely syntactic operations.

mod canonical;
mod congruence;
mod defs;
mod name;
mod names;
mod process;
mod subst;

use thiserror::Error;

pub use canonical::{alpha_equivalent, alpha_normal, canonicalize, CanonicalProcess, Digest};
pub use congruence::{is_nil_like, normalize, normalize_with, structurally_congruent};
pub(crate) use congruence::normal_form_with;
pub use defs::DefinitionTable;
pub use name::{fresh_name, is_valid_name, AgentId, Name, SignalId, KEYWORDS};
pub use names::{bound_names, free_names, free_names_opaque, name_analysis};
pub use process::Process;
pub use subst::{occurs_free, substitute};


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("agent `{0}` has no definition")]
    UnresolvedAgent(AgentId),
    #[error("cannot substitute into agent `{0}`: the name is free in its definition")]
    SubstitutionIntoAgent(AgentId),
    #[error("unguarded recursion through agent `{0}`")]
    UnguardedRecursion(AgentId),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("signal numbers start at 1, got {0}")]
    InvalidSignal(u32),
}
