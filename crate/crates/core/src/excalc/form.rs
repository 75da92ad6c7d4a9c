//! Differential forms in a single chart.
//!
//! A degree-k form is a sorted list of terms, each a canonical coefficient
//! times a strictly increasing wedge word of k coordinate differentials.
//! Antisymmetry is resolved at construction with sign bookkeeping, so form
//! equality is structural equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::symcore::{Bindings, CoordinateId, Expr, Role, SymError};

use super::vector::VectorField;
use super::CalcError;

/// Wedge word: strictly increasing list of coordinate differentials.
pub type Word = Vec<CoordinateId>;

/// Exterior form of a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    degree: usize,
    // invariant: words strictly increasing, sorted between terms, nonzero coeffs
    terms: Vec<(Expr, Word)>,
}

/// Sort a wedge word, returning the permutation sign, or `None` when a
/// coordinate repeats (the term vanishes).
fn sort_word(mut word: Word) -> Option<(i8, Word)> {
    // insertion sort, counting inversions; words are short
    let mut sign = 1i8;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            word.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for pair in word.windows(2) {
        if pair[0] == pair[1] {
            return None;
        }
    }
    Some((sign, word))
}

fn normalize(degree: usize, raw: Vec<(Expr, Word)>) -> Form {
    let mut collected: BTreeMap<Word, Expr> = BTreeMap::new();
    for (coeff, word) in raw {
        debug_assert_eq!(word.len(), degree, "wedge word length must match degree");
        if coeff.is_zero() {
            continue;
        }
        if let Some((sign, sorted)) = sort_word(word) {
            let signed = if sign < 0 { -coeff } else { coeff };
            let entry = collected.entry(sorted).or_insert_with(Expr::zero);
            *entry = &*entry + &signed;
        }
    }
    let terms = collected
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (c, w))
        .collect();
    Form { degree, terms }
}

impl Form {
    pub fn zero(degree: usize) -> Form {
        Form {
            degree,
            terms: Vec::new(),
        }
    }

    /// Degree-0 form wrapping a scalar expression.
    pub fn scalar(e: Expr) -> Form {
        if e.is_zero() {
            Form::zero(0)
        } else {
            Form {
                degree: 0,
                terms: vec![(e, Vec::new())],
            }
        }
    }

    /// The coordinate differential dc. Parameters are constants and have no
    /// differential.
    pub fn differential(c: &CoordinateId) -> Form {
        debug_assert!(c.role() != Role::Parameter, "parameters are constants");
        Form {
            degree: 1,
            terms: vec![(Expr::one(), vec![c.clone()])],
        }
    }

    /// Build a form from raw (coefficient, word) pairs; words are sorted
    /// with sign bookkeeping and like words collected.
    pub fn from_terms(degree: usize, raw: Vec<(Expr, Word)>) -> Form {
        normalize(degree, raw)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(Expr, Word)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar of a degree-0 form.
    pub fn as_scalar(&self) -> Option<&Expr> {
        if self.degree != 0 {
            return None;
        }
        Some(self.terms.first().map(|(c, _)| c).unwrap_or(&ZERO_EXPR))
    }

    /// Coefficient of a given (sorted) wedge word.
    pub fn coefficient(&self, word: &[CoordinateId]) -> Expr {
        self.terms
            .iter()
            .find(|(_, w)| w.as_slice() == word)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(Expr::zero)
    }

    /// Exterior product. Degrees add; graded anticommutativity holds.
    pub fn wedge(&self, other: &Form) -> Form {
        let degree = self.degree + other.degree;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, wa) in &self.terms {
            for (cb, wb) in &other.terms {
                let mut word = wa.clone();
                word.extend(wb.iter().cloned());
                raw.push((ca * cb, word));
            }
        }
        normalize(degree, raw)
    }

    /// Exterior derivative. Parameters are treated as constants.
    pub fn ext_d(&self) -> Form {
        let degree = self.degree + 1;
        let mut raw = Vec::new();
        for (coeff, word) in &self.terms {
            for c in coeff.support() {
                if c.role() == Role::Parameter {
                    continue;
                }
                let dc = coeff.diff(&c);
                if dc.is_zero() {
                    continue;
                }
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(c);
                w.extend(word.iter().cloned());
                raw.push((dc, w));
            }
        }
        normalize(degree, raw)
    }

    /// Interior product (contraction) with a vector field.
    ///
    /// Antiderivation of degree −1; contracting a degree-0 form is an
    /// error.
    pub fn interior(&self, v: &VectorField) -> Result<Form, CalcError> {
        if self.degree == 0 {
            return Err(CalcError::ContractionOfScalar);
        }
        let degree = self.degree - 1;
        let mut raw = Vec::new();
        for (coeff, word) in &self.terms {
            for (pos, c) in word.iter().enumerate() {
                let comp = v.component(c);
                if comp.is_zero() {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let mut w = word.clone();
                w.remove(pos);
                let c = coeff * &comp;
                raw.push((if sign < 0 { -c } else { c }, w));
            }
        }
        Ok(normalize(degree, raw))
    }

    /// Substitute coordinates inside the coefficients only (wedge words are
    /// untouched). Bindings must not hit word coordinates.
    pub fn subst_coefficients(&self, bindings: &Bindings) -> Result<Form, SymError> {
        let mut raw = Vec::with_capacity(self.terms.len());
        for (coeff, word) in &self.terms {
            raw.push((coeff.subst(bindings)?, word.clone()));
        }
        Ok(normalize(self.degree, raw))
    }

    /// Pull back along a point substitution: bound coordinates are replaced
    /// in coefficients, and their differentials are expanded as
    /// d(replacement). Used to restrict forms to (prolonged) sections.
    pub fn pullback(&self, bindings: &Bindings) -> Result<Form, SymError> {
        let mut acc = Form::zero(self.degree);
        for (coeff, word) in &self.terms {
            let mut piece = Form::scalar(coeff.subst(bindings)?);
            for c in word {
                let dc = match bindings.get(c) {
                    Some(replacement) => Form::scalar(replacement.clone()).ext_d(),
                    None => Form::differential(c),
                };
                piece = piece.wedge(&dc);
            }
            acc = &acc + &piece;
        }
        Ok(acc)
    }

    pub fn scale(&self, e: &Expr) -> Form {
        let raw = self.terms.iter().map(|(c, w)| (c * e, w.clone())).collect();
        normalize(self.degree, raw)
    }
}

static ZERO_EXPR: std::sync::LazyLock<Expr> = std::sync::LazyLock::new(Expr::zero);

impl Add for &Form {
    type Output = Form;

    fn add(self, rhs: &Form) -> Form {
        assert_eq!(
            self.degree, rhs.degree,
            "cannot add forms of different degree"
        );
        let mut raw = self.terms.clone();
        raw.extend(rhs.terms.iter().cloned());
        normalize(self.degree, raw)
    }
}

impl Sub for &Form {
    type Output = Form;

    fn sub(self, rhs: &Form) -> Form {
        self + &-rhs
    }
}

impl Neg for &Form {
    type Output = Form;

    fn neg(self) -> Form {
        Form {
            degree: self.degree,
            terms: self.terms.iter().map(|(c, w)| (-c, w.clone())).collect(),
        }
    }
}

impl Mul<&Form> for &Expr {
    type Output = Form;

    fn mul(self, rhs: &Form) -> Form {
        rhs.scale(self)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (coeff, word)) in self.terms.iter().enumerate() {
            let rendered = coeff.to_string();
            // pull the sign out of single-term coefficients
            let (negative, body) = if coeff.terms().len() == 1 && rendered.starts_with('-') {
                (true, rendered[1..].to_string())
            } else {
                (false, rendered)
            };
            match (idx == 0, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if word.is_empty() {
                write!(f, "{body}")?;
            } else {
                if body == "1" {
                    // bare wedge word
                } else if coeff.terms().len() > 1 {
                    write!(f, "({body})*")?;
                } else {
                    write!(f, "{body}*")?;
                }
                for (widx, c) in word.iter().enumerate() {
                    if widx > 0 {
                        write!(f, "∧")?;
                    }
                    write!(f, "d{c}")?;
                }
            }
        }
        Ok(())
    }
}
