//! Formal function symbols with positional derivative records.
//!
//! A function symbol is declared with a fixed argument signature (chart
//! coordinates). Applications carry a derivative multi-index over the
//! argument positions instead of nested derivative operators, so mixed
//! formal partials commute by construction.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::coord::CoordinateId;
use super::expr::Expr;

/// Declared signature of an abstract scalar function of chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FunctionSymbol {
    name: String,
    args: Vec<CoordinateId>,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, args: Vec<CoordinateId>) -> Arc<Self> {
        Arc::new(FunctionSymbol {
            name: name.into(),
            args,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn declared_args(&self) -> &[CoordinateId] {
        &self.args
    }

    /// The application of the symbol to its declared arguments.
    pub fn apply(self: &Arc<Self>) -> Expr {
        let args = self.args.iter().map(Expr::coord).collect();
        Expr::atom(super::expr::Atom::Func(FuncApp {
            symbol: self.clone(),
            deriv: vec![0; self.args.len()],
            args,
        }))
    }
}

/// An applied (possibly formally differentiated) function symbol.
///
/// `deriv[k]` counts formal partials with respect to argument slot `k`;
/// `args[k]` is the current expression in that slot (the declared
/// coordinate until a substitution rewrites it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncApp {
    symbol: Arc<FunctionSymbol>,
    deriv: Vec<u32>,
    args: Vec<Expr>,
}

impl FuncApp {
    pub fn symbol(&self) -> &Arc<FunctionSymbol> {
        &self.symbol
    }

    pub fn deriv_record(&self) -> &[u32] {
        &self.deriv
    }

    pub fn args(&self) -> &[Expr] {
        &self.args
    }

    /// One more formal partial in argument slot `k`.
    pub(crate) fn bump(&self, k: usize) -> FuncApp {
        let mut deriv = self.deriv.clone();
        deriv[k] += 1;
        FuncApp {
            symbol: self.symbol.clone(),
            deriv,
            args: self.args.clone(),
        }
    }

    pub(crate) fn with_args(&self, args: Vec<Expr>) -> FuncApp {
        FuncApp {
            symbol: self.symbol.clone(),
            deriv: self.deriv.clone(),
            args,
        }
    }

    fn sort_key(&self) -> (&str, &[u32], &[Expr]) {
        (self.symbol.name(), &self.deriv, &self.args)
    }
}

impl PartialOrd for FuncApp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FuncApp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for FuncApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol.name())?;
        if self.deriv.iter().any(|&d| d > 0) {
            write!(f, "^(")?;
            for (i, d) in self.deriv.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{d}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}
