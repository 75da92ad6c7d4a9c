//! Output emitters: aligned text, LaTeX fragments, and versioned JSON.

use std::fmt::Write as _;

use crate::tasks::{OutputDocument, Payload};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format `{other}` (expected text, latex, or json)"
            )),
        }
    }
}

pub fn emit(doc: &OutputDocument, format: Format) -> String {
    match format {
        Format::Text => emit_text(doc),
        Format::Latex => emit_latex(doc),
        Format::Json => emit_json(doc),
    }
}

/// Inverse of [`emit`] for the JSON format; `parse(emit(doc)) == doc`.
pub fn parse_document(json: &str) -> Result<OutputDocument, serde_json::Error> {
    serde_json::from_str(json)
}

fn emit_text(doc: &OutputDocument) -> String {
    let mut out = String::new();
    for task in &doc.tasks {
        let _ = writeln!(out, "== {}", task.name);
        match &task.payload {
            Payload::Equations { equations, .. } => {
                let width = equations.iter().map(|e| e.lhs.len()).max().unwrap_or(0);
                for eq in equations {
                    let _ = writeln!(out, "{:>width$} = {}", eq.lhs, eq.rhs, width = width);
                }
            }
            Payload::Forms { forms } => {
                for f in forms {
                    let _ = writeln!(out, "{}", f.text);
                }
            }
            Payload::Note { note } => {
                let _ = writeln!(out, "{note}");
            }
            Payload::Connection { components, .. } => {
                let nonzero: Vec<_> = components.iter().filter(|c| c.value != "0").collect();
                if nonzero.is_empty() {
                    let _ = writeln!(out, "0");
                }
                for c in nonzero {
                    let _ = writeln!(out, "Gamma[{},{}] = {}", c.fiber, c.base, c.value);
                }
            }
            Payload::Check { passed, witness } => {
                let _ = writeln!(out, "{}", if *passed { "PASS" } else { "FAIL" });
                if let Some(w) = witness {
                    let _ = writeln!(out, "witness: {w}");
                }
            }
            Payload::Hamiltonian { density, .. } => {
                let _ = writeln!(out, "H = {density}");
            }
        }
        let _ = writeln!(out);
    }
    out
}

fn emit_latex(doc: &OutputDocument) -> String {
    let mut out = String::new();
    for task in &doc.tasks {
        let _ = writeln!(out, "% {}", task.name);
        match &task.payload {
            Payload::Equations { latex, .. } => {
                let _ = writeln!(out, "{latex}");
            }
            Payload::Forms { forms } => {
                for f in forms {
                    let _ = writeln!(out, "\\[ {} \\]", f.latex);
                }
            }
            Payload::Note { note } => {
                let _ = writeln!(out, "% {note}");
            }
            Payload::Connection { latex, .. } => {
                let _ = writeln!(out, "{latex}");
            }
            Payload::Check { passed, .. } => {
                let _ = writeln!(out, "% {}", if *passed { "PASS" } else { "FAIL" });
            }
            Payload::Hamiltonian { latex, .. } => {
                let _ = writeln!(out, "\\[ \\mathcal{{H}} = {latex} \\]");
            }
        }
        let _ = writeln!(out);
    }
    out
}

fn emit_json(doc: &OutputDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}
