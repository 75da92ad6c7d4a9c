//! Vector fields with finite coordinate support.

use std::collections::BTreeMap;
use std::fmt;

use crate::symcore::{CoordinateId, Expr};

/// A vector field Σ v^c ∂_c stored as its nonzero components.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    components: BTreeMap<CoordinateId, Expr>,
}

impl VectorField {
    pub fn new() -> Self {
        VectorField::default()
    }

    /// The coordinate vector field ∂_c.
    pub fn basis(c: &CoordinateId) -> Self {
        let mut v = VectorField::new();
        v.set(c.clone(), Expr::one());
        v
    }

    pub fn set(&mut self, c: CoordinateId, e: Expr) {
        if e.is_zero() {
            self.components.remove(&c);
        } else {
            self.components.insert(c, e);
        }
    }

    pub fn with(mut self, c: &CoordinateId, e: Expr) -> Self {
        self.set(c.clone(), e);
        self
    }

    pub fn component(&self, c: &CoordinateId) -> Expr {
        self.components.get(c).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn components(&self) -> &BTreeMap<CoordinateId, Expr> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, e)) in self.components.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if e == &Expr::one() {
                write!(f, "∂_{c}")?;
            } else if e.terms().len() > 1 {
                write!(f, "({e})*∂_{c}")?;
            } else {
                write!(f, "{e}*∂_{c}")?;
            }
        }
        Ok(())
    }
}
