//! The validated model: chart, Hamiltonian, sections, connections, and
//! the task list.

use std::collections::BTreeMap;

use jetham_core::geom::{Connection, SectionSpec};
use jetham_core::ham::{HamiltonianSpec, LegendreChart};
use jetham_core::symcore::Expr;

use crate::lexer::Pos;

/// A parsed and semantically checked model file.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub chart: LegendreChart,
    pub hamiltonian: Option<HamiltonianSpec>,
    pub lagrangian: Option<Expr>,
    pub sections: BTreeMap<String, SectionSpec>,
    pub connections: BTreeMap<String, Connection>,
    pub tasks: Vec<SpannedTask>,
}

#[derive(Debug, Clone)]
pub struct SpannedTask {
    pub task: Task,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    Prolong(usize),
    Hamilton,
    EulerLagrange,
    CheckClosed,
    Restrict { h: String, sigma: Option<String> },
    Legendre,
    ContactForms,
    CompositeConnection { h_theta: String, gamma: String },
    PullbackConnection { h_theta: String, h: String },
    VerticalDifferential { h_theta: String },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Prolong(_) => "prolong",
            Task::Hamilton => "hamilton",
            Task::EulerLagrange => "euler-lagrange",
            Task::CheckClosed => "check-closed",
            Task::Restrict { .. } => "restrict",
            Task::Legendre => "legendre",
            Task::ContactForms => "contact-forms",
            Task::CompositeConnection { .. } => "composite-connection",
            Task::PullbackConnection { .. } => "pullback-connection",
            Task::VerticalDifferential { .. } => "vertical-differential",
        }
    }
}

/// A parse or semantic error with its source position and a fix hint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    pub hint: Option<String>,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error at {}: {}", self.pos, self.message)?;
        if let Some(hint) = &self.hint {
            write!(f, "\n  hint: {hint}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}
