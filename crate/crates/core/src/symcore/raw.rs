//! Unnormalized expression trees and their canonicalization.
//!
//! `RawExpr` is the shape a parser (or a test generator) produces: nested
//! arithmetic with named references. `make_expr` resolves names against a
//! coordinate namespace and folds the tree into canonical form.

use num_rational::BigRational;

use super::coord::CoordinateId;
use super::expr::Expr;
use super::SymError;

/// Name resolution interface implemented by charts.
pub trait CoordResolver {
    fn resolve(&self, name: &str) -> Option<CoordinateId>;
}

/// Parse-tree shaped expression, not canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawExpr {
    Int(i64),
    /// Reference to a coordinate or parameter by display name.
    Name(String),
    Add(Box<RawExpr>, Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Mul(Box<RawExpr>, Box<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Neg(Box<RawExpr>),
    Pow(Box<RawExpr>, u32),
}

impl RawExpr {
    pub fn name(n: impl Into<String>) -> Self {
        RawExpr::Name(n.into())
    }
}

/// Fold a raw tree into canonical form, resolving names in `ns`.
///
/// Idempotent: feeding back the embedding of a canonical expression yields
/// the same expression.
pub fn make_expr(raw: &RawExpr, ns: &dyn CoordResolver) -> Result<Expr, SymError> {
    match raw {
        RawExpr::Int(n) => Ok(Expr::int(*n)),
        RawExpr::Name(name) => ns
            .resolve(name)
            .map(|c| Expr::coord(&c))
            .ok_or_else(|| SymError::UnknownCoordinate(name.clone())),
        RawExpr::Add(a, b) => Ok(make_expr(a, ns)? + make_expr(b, ns)?),
        RawExpr::Sub(a, b) => Ok(make_expr(a, ns)? - make_expr(b, ns)?),
        RawExpr::Mul(a, b) => Ok(make_expr(a, ns)? * make_expr(b, ns)?),
        RawExpr::Div(a, b) => make_expr(a, ns)?.checked_div(&make_expr(b, ns)?),
        RawExpr::Neg(a) => Ok(-make_expr(a, ns)?),
        RawExpr::Pow(a, e) => Ok(make_expr(a, ns)?.pow(*e)),
    }
}

/// Structural embedding of a canonical expression back into a raw tree.
/// Function applications have no raw syntax and are rejected.
pub fn embed(e: &Expr) -> Option<RawExpr> {
    fn embed_rational(r: &BigRational) -> Option<RawExpr> {
        let numer: i64 = r.numer().try_into().ok()?;
        let denom: i64 = r.denom().try_into().ok()?;
        let n = RawExpr::Int(numer);
        if denom == 1 {
            Some(n)
        } else {
            Some(RawExpr::Div(Box::new(n), Box::new(RawExpr::Int(denom))))
        }
    }

    let mut acc: Option<RawExpr> = None;
    for (coeff, mono) in e.terms() {
        let mut factor = embed_rational(coeff)?;
        for (atom, exp) in mono.factors() {
            let coord = atom.as_coord()?;
            let mut base = RawExpr::name(coord.name());
            if *exp > 1 {
                base = RawExpr::Pow(Box::new(base), *exp);
            }
            factor = RawExpr::Mul(Box::new(factor), Box::new(base));
        }
        acc = Some(match acc {
            None => factor,
            Some(prev) => RawExpr::Add(Box::new(prev), Box::new(factor)),
        });
    }
    Some(acc.unwrap_or(RawExpr::Int(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    struct Ns(BTreeMap<String, CoordinateId>);

    impl CoordResolver for Ns {
        fn resolve(&self, name: &str) -> Option<CoordinateId> {
            self.0.get(name).cloned()
        }
    }

    fn ns() -> Ns {
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), CoordinateId::base("x", 1));
        m.insert("y".to_string(), CoordinateId::fiber("y", 1));
        Ns(m)
    }

    #[test]
    fn unknown_name_errors() {
        let raw = RawExpr::name("q");
        assert!(matches!(
            make_expr(&raw, &ns()),
            Err(SymError::UnknownCoordinate(_))
        ));
    }

    #[test]
    fn make_expr_is_idempotent_on_canonical_forms() {
        let raw = RawExpr::Sub(
            Box::new(RawExpr::Pow(
                Box::new(RawExpr::Add(
                    Box::new(RawExpr::name("y")),
                    Box::new(RawExpr::name("x")),
                )),
                2,
            )),
            Box::new(RawExpr::Mul(
                Box::new(RawExpr::Int(2)),
                Box::new(RawExpr::Mul(
                    Box::new(RawExpr::name("x")),
                    Box::new(RawExpr::name("y")),
                )),
            )),
        );
        let e = make_expr(&raw, &ns()).unwrap();
        let round = make_expr(&embed(&e).unwrap(), &ns()).unwrap();
        assert_eq!(e, round);
    }
}
