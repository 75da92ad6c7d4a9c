//! Exact differentiation and simultaneous substitution.

use num_rational::BigRational;
use num_traits::FromPrimitive;

use super::coord::CoordinateId;
use super::expr::{normalize, Atom, Bindings, Expr, Monomial};
use super::SymError;

impl Expr {
    /// Exact partial derivative with respect to a coordinate.
    ///
    /// Coordinates are mutually independent symbols: jet coordinates do not
    /// depend on the underlying fiber coordinate and vice versa. Formal
    /// function applications differentiate by the chain rule over their
    /// argument slots.
    pub fn diff(&self, c: &CoordinateId) -> Expr {
        let mut out = Vec::new();
        for (coeff, mono) in self.terms() {
            diff_monomial(coeff, mono, c, &mut out);
        }
        normalize(out)
    }

    /// Simultaneous substitution of coordinates, then canonicalization.
    ///
    /// Bindings must be acyclic: no replacement expression may mention any
    /// substituted coordinate, so a single simultaneous pass eliminates all
    /// of them. Function applications substitute inside their argument
    /// slots; later differentiation then applies the chain rule.
    pub fn subst(&self, bindings: &Bindings) -> Result<Expr, SymError> {
        for (key, replacement) in bindings {
            for other in bindings.keys() {
                if replacement.mentions(other) {
                    return Err(SymError::CyclicBindings {
                        coordinate: key.name().to_string(),
                        replacement: other.name().to_string(),
                    });
                }
            }
        }
        Ok(self.subst_unchecked(bindings))
    }

    pub(crate) fn subst_unchecked(&self, bindings: &Bindings) -> Expr {
        let mut acc = Expr::zero();
        for (coeff, mono) in self.terms() {
            let mut term = Expr::rational(coeff.clone());
            for (atom, exp) in mono.factors() {
                let replaced = match atom {
                    Atom::Coord(c) => match bindings.get(c) {
                        Some(e) => e.clone(),
                        None => Expr::coord(c),
                    },
                    Atom::Func(f) => {
                        let args = f
                            .args()
                            .iter()
                            .map(|a| a.subst_unchecked(bindings))
                            .collect();
                        Expr::atom(Atom::Func(f.with_args(args)))
                    }
                };
                term = term * replaced.pow(*exp);
            }
            acc = acc + term;
        }
        acc
    }
}

fn diff_monomial(
    coeff: &BigRational,
    mono: &Monomial,
    c: &CoordinateId,
    out: &mut Vec<(BigRational, Monomial)>,
) {
    // Leibniz over the factors: coeff * exp * atom^(exp-1) * datom * rest.
    for (k, (atom, exp)) in mono.factors().iter().enumerate() {
        let datom = diff_atom(atom, c);
        if datom.is_zero() {
            continue;
        }
        let mut factor = Expr::rational(coeff * BigRational::from_usize(*exp as usize).unwrap());
        for (j, (a, e)) in mono.factors().iter().enumerate() {
            let e = if j == k { e - 1 } else { *e };
            if e > 0 {
                factor = factor * Expr::atom(a.clone()).pow(e);
            }
        }
        let contribution = factor * datom;
        out.extend(contribution.terms().iter().cloned());
    }
}

fn diff_atom(atom: &Atom, c: &CoordinateId) -> Expr {
    match atom {
        Atom::Coord(d) => {
            if d == c {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Func(f) => {
            // chain rule over argument slots
            let mut acc = Expr::zero();
            for (k, arg) in f.args().iter().enumerate() {
                let darg = arg.diff(c);
                if darg.is_zero() {
                    continue;
                }
                acc = acc + Expr::atom(Atom::Func(f.bump(k))) * darg;
            }
            acc
        }
    }
}
