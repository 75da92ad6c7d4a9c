//! Composite-bundle charts, jet calculus, and connections.

mod chart;
mod connection;
mod jets;

pub use chart::{multi_indices, Chart, ChartBuilder};
pub use connection::{
    composite_connection, connection_to_section, integrality_defect, is_integral_section,
    pullback_connection, restrict_to_subbundle, section_to_connection,
    vertical_covariant_differential, Connection, Fibration, SectionSpec, SectionTarget,
    VerticalDifferential,
};
pub use jets::{
    contact_form, contact_forms, holonomic_bindings, horizontal_vertical_split, total_derivative,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("chart dimensions must be positive")]
    EmptyDimension,
    #[error("expected {expected} coordinate names, got {got}")]
    NameCountMismatch { expected: usize, got: usize },
    #[error("duplicate coordinate name `{0}` in chart")]
    DuplicateCoordinate(String),
    #[error("cannot prolong to order {requested}: chart already has order {current}")]
    ProlongBelowOrder { current: usize, requested: usize },
    #[error("jet of `{coordinate}` in direction {direction} is not in the chart; prolong first")]
    MissingJet {
        coordinate: String,
        direction: usize,
    },
    #[error("chart order {actual} is insufficient (need {required})")]
    ChartOrderInsufficient { required: usize, actual: usize },
    #[error("horizontal/vertical splitting needs a 1-form, got degree {0}")]
    SplitDegree(usize),
    #[error("differential of parameter `{0}` has no jet decomposition")]
    ParameterDifferential(String),
    #[error("expression mentions `{0}`, which is not a base coordinate")]
    NotABaseExpression(String),
    #[error("component for (`{fiber}`, `{base}`) is outside the fibration's table")]
    ComponentTableMismatch { fiber: String, base: String },
    #[error("component (`{fiber}`, `{base}`) mentions `{offending}`, outside the total space")]
    ComponentSupport {
        fiber: String,
        base: String,
        offending: String,
    },
    #[error("section assignment for `{fiber}` mentions `{offending}`, outside the base")]
    SectionSupport { fiber: String, offending: String },
    #[error("section assigns `{0}`, which is not a fiber coordinate of the fibration")]
    SectionAssignsNonFiber(String),
    #[error("fibration `{0}` does not carry first-jet coordinates in this chart")]
    NonJetFibration(String),
    #[error("connections live on different charts")]
    ChartMismatch,
    #[error("operation requires a different fibration")]
    FibrationMismatch,
    #[error("chart has no momentum coordinates")]
    MomentaRequired,
    #[error(transparent)]
    Sym(#[from] crate::symcore::SymError),
    #[error(transparent)]
    Calc(#[from] crate::excalc::CalcError),
}
