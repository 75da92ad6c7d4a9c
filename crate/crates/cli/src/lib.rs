//! Model-file front end for the composite-bundle Hamiltonian library:
//! parse a bundle/Hamiltonian description, run derivation tasks, and emit
//! text, LaTeX, or JSON.

mod emit;
mod lexer;
mod model;
mod parser;
pub mod render;
mod tasks;

pub use emit::{emit, parse_document, Format};
pub use lexer::Pos;
pub use model::{ModelFile, ParseError, SpannedTask, Task};
pub use parser::parse_model;
pub use tasks::{run_checks, run_tasks, OutputDocument, Payload, TaskError, TaskRecord};

/// Default cap on expression size, overridable via `JETHAM_MAX_TERMS`.
pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// Apply the expression-size cap from the environment.
pub fn configure_term_limit() {
    let limit = std::env::var("JETHAM_MAX_TERMS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(DEFAULT_MAX_TERMS);
    jetham_core::symcore::set_max_terms(limit);
}
