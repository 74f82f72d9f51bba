//! Labelled transition semantics and state-space exploration.

mod label;
mod lts;
mod step;

pub use label::Label;
pub use lts::{build_lts, build_lts_with, Limits, Lts, Transition};
pub use step::{canonical_fresh, transitions, ExplorationMode};
