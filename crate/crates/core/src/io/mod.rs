//! Concrete syntax, model files and data exchange formats.

mod data;
mod export;
mod lexer;
mod model;
mod parser;
mod render;

pub use lexer::Span;
pub use model::ModelFile;
pub use parser::{parse_model, parse_process, ParseError};
pub use render::{render_model, render_process};
pub use data::{load_aidb, load_wsdb, LoadError, WsdbDocument};
pub use export::{export_lts, import_lts_json, ExportFormat};
