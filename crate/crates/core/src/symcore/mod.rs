//! Canonical symbolic expressions over bundle coordinates.
//!
//! Everything downstream (forms, jets, Hamiltonian derivations) is algebra
//! over the [`Expr`] type defined here: exact rational coefficients,
//! coordinate atoms, and formal function symbols with commuting partials.

mod calculus;
mod coord;
mod expr;
mod func;
mod raw;

pub use coord::{CoordinateId, MultiIndex, Role};
pub use expr::{set_max_terms, Atom, Bindings, Expr, Monomial, TERM_LIMIT_MSG};
pub use func::{FuncApp, FunctionSymbol};
pub use raw::{embed, make_expr, CoordResolver, RawExpr};

use thiserror::Error;

/// Errors from expression construction and rewriting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("unknown coordinate name `{0}`")]
    UnknownCoordinate(String),
    #[error("division by a non-constant expression")]
    DivisionByNonConstant,
    #[error("division by zero")]
    DivisionByZero,
    #[error(
        "cyclic bindings: replacement for `{coordinate}` mentions bound coordinate `{replacement}`"
    )]
    CyclicBindings {
        coordinate: String,
        replacement: String,
    },
}
