//! Forms with value legs.
//!
//! The Liouville and polysymplectic forms carry two formal value legs: a
//! TX leg (a free base index λ paired with ∂_λ) and a VΘ leg (the marker
//! ∂_τ of the one-dimensional Θ fiber). A valued form is a formal sum of
//! parts keyed by leg signature, each part holding one form per TX index
//! (or a single form when no TX leg is present). Legs are never contracted
//! into the form part; `leg_contract` consumes them explicitly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::symcore::{CoordinateId, Expr, Role};

use super::form::Form;
use super::CalcError;

/// Which value legs a part carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LegSig {
    /// No legs: a plain form.
    Scalar,
    /// ⊗ ∂_λ with a free index λ = 1..n.
    Tx,
    /// ⊗ ∂_τ.
    VTheta,
    /// ⊗ ∂_λ ⊗ ∂_τ.
    TxVTheta,
}

impl LegSig {
    pub fn has_tx(self) -> bool {
        matches!(self, LegSig::Tx | LegSig::TxVTheta)
    }

    pub fn has_vtheta(self) -> bool {
        matches!(self, LegSig::VTheta | LegSig::TxVTheta)
    }

    fn without_tx(self) -> LegSig {
        match self {
            LegSig::Tx => LegSig::Scalar,
            LegSig::TxVTheta => LegSig::VTheta,
            other => other,
        }
    }

    fn without_vtheta(self) -> LegSig {
        match self {
            LegSig::VTheta => LegSig::Scalar,
            LegSig::TxVTheta => LegSig::Tx,
            other => other,
        }
    }
}

/// A formal sum of leg-tagged forms over a base of dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedForm {
    n: usize,
    // invariant: TX-legged parts hold exactly n forms (indexed by λ-1),
    // other parts hold exactly one; all-zero parts are dropped
    parts: BTreeMap<LegSig, Vec<Form>>,
}

impl ValuedForm {
    pub fn zero(n: usize) -> ValuedForm {
        ValuedForm {
            n,
            parts: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, form: Form) -> ValuedForm {
        ValuedForm::from_part(n, LegSig::Scalar, vec![form])
    }

    pub fn vtheta(n: usize, form: Form) -> ValuedForm {
        ValuedForm::from_part(n, LegSig::VTheta, vec![form])
    }

    pub fn tx(n: usize, comps: Vec<Form>) -> ValuedForm {
        ValuedForm::from_part(n, LegSig::Tx, comps)
    }

    pub fn tx_vtheta(n: usize, comps: Vec<Form>) -> ValuedForm {
        ValuedForm::from_part(n, LegSig::TxVTheta, comps)
    }

    fn from_part(n: usize, sig: LegSig, comps: Vec<Form>) -> ValuedForm {
        let expected = if sig.has_tx() { n } else { 1 };
        assert_eq!(
            comps.len(),
            expected,
            "component count must match leg signature"
        );
        debug_assert!(
            comps.windows(2).all(|w| w[0].degree() == w[1].degree()),
            "components of one leg signature must share a degree"
        );
        let mut vf = ValuedForm::zero(n);
        if comps.iter().any(|f| !f.is_zero()) {
            vf.parts.insert(sig, comps);
        }
        vf
    }

    pub fn base_dimension(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &BTreeMap<LegSig, Vec<Form>> {
        &self.parts
    }

    /// The components of a given signature (zeros when absent).
    pub fn part(&self, sig: LegSig) -> Vec<Form> {
        match self.parts.get(&sig) {
            Some(comps) => comps.clone(),
            None => {
                let len = if sig.has_tx() { self.n } else { 1 };
                // degree of the zero form is unknowable here; use 0-degree zeros
                vec![Form::zero(0); len]
            }
        }
    }

    /// Componentwise exterior derivative; legs are carried along.
    pub fn ext_d(&self) -> ValuedForm {
        let mut out = ValuedForm::zero(self.n);
        for (sig, comps) in &self.parts {
            let dcomps: Vec<Form> = comps.iter().map(Form::ext_d).collect();
            if dcomps.iter().any(|f| !f.is_zero()) {
                out.parts.insert(*sig, dcomps);
            }
        }
        out
    }

    /// Contract exactly one leg against a 1-form ψ on Θ.
    ///
    /// ψ must be ψ_μ dx^μ + ψ_τ dτ with coefficients depending on base
    /// coordinates only. The dx^λ components pair with the TX leg and the
    /// dτ component with the VΘ leg; the result is the sum of the two
    /// single-contraction parts.
    pub fn leg_contract(&self, psi: &Form) -> Result<ValuedForm, CalcError> {
        if psi.degree() != 1 {
            return Err(CalcError::ContractionFormDegree(psi.degree()));
        }
        let mut psi_x: BTreeMap<usize, Expr> = BTreeMap::new();
        let mut psi_tau = Expr::zero();
        for (coeff, word) in psi.terms() {
            let c = &word[0];
            match c.role() {
                Role::Base => {
                    psi_x.insert(c.contra_index() as usize, coeff.clone());
                }
                Role::ThetaFiber => psi_tau = coeff.clone(),
                _ => return Err(CalcError::NotAThetaForm(c.name().to_string())),
            }
            for s in coeff.support() {
                if !matches!(s.role(), Role::Base | Role::Parameter) {
                    return Err(CalcError::NonBaseContractionCoefficient(
                        s.name().to_string(),
                    ));
                }
            }
        }

        let mut out = ValuedForm::zero(self.n);
        for (sig, comps) in &self.parts {
            if sig.has_tx() {
                // pair λ against ψ_λ, consuming the TX leg
                let mut sum: Option<Form> = None;
                for (idx, comp) in comps.iter().enumerate() {
                    if let Some(c) = psi_x.get(&(idx + 1)) {
                        let scaled = comp.scale(c);
                        sum = Some(match sum {
                            None => scaled,
                            Some(acc) => &acc + &scaled,
                        });
                    }
                }
                if let Some(sum) = sum {
                    out = out + ValuedForm::from_signed(self.n, sig.without_tx(), vec![sum]);
                }
            }
            if sig.has_vtheta() && !psi_tau.is_zero() {
                // pair ∂_τ against ψ_τ, consuming the VΘ leg
                let scaled: Vec<Form> = comps.iter().map(|f| f.scale(&psi_tau)).collect();
                out = out + ValuedForm::from_signed(self.n, sig.without_vtheta(), scaled);
            }
        }
        Ok(out)
    }

    fn from_signed(n: usize, sig: LegSig, comps: Vec<Form>) -> ValuedForm {
        let mut vf = ValuedForm::zero(n);
        if comps.iter().any(|f| !f.is_zero()) {
            vf.parts.insert(sig, comps);
        }
        vf
    }

    /// Convert TX-legged parts to their leg-absorbed representation: each
    /// component must factor as Q_λ ∧ ω, and the result is Σ_λ Q_λ ∧ ω_λ
    /// with the TX leg gone. `base` is the ordered list of base
    /// coordinates defining ω.
    pub fn absorb_tx(&self, base: &[CoordinateId]) -> Result<ValuedForm, CalcError> {
        let mut out = ValuedForm::zero(self.n);
        for (sig, comps) in &self.parts {
            if !sig.has_tx() {
                out = out + ValuedForm::from_signed(self.n, *sig, comps.clone());
                continue;
            }
            let mut acc: Option<Form> = None;
            for (idx, comp) in comps.iter().enumerate() {
                let quotient = divide_by_top_form(comp, base)?;
                let absorbed = quotient.wedge(&omega_lambda(base, idx + 1));
                acc = Some(match acc {
                    None => absorbed,
                    Some(prev) => &prev + &absorbed,
                });
            }
            if let Some(acc) = acc {
                out = out + ValuedForm::from_signed(self.n, sig.without_tx(), vec![acc]);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, e: &Expr) -> ValuedForm {
        let mut out = ValuedForm::zero(self.n);
        for (sig, comps) in &self.parts {
            let scaled: Vec<Form> = comps.iter().map(|f| f.scale(e)).collect();
            if scaled.iter().any(|f| !f.is_zero()) {
                out.parts.insert(*sig, scaled);
            }
        }
        out
    }
}

/// ω = dx^1 ∧ … ∧ dx^n for an ordered base.
pub fn top_form(base: &[CoordinateId]) -> Form {
    let mut omega = Form::scalar(Expr::one());
    for c in base {
        omega = omega.wedge(&Form::differential(c));
    }
    omega
}

/// ω_λ = ∂_λ ⌋ ω.
pub fn omega_lambda(base: &[CoordinateId], lambda: usize) -> Form {
    let omega = top_form(base);
    let v = super::vector::VectorField::basis(&base[lambda - 1]);
    omega.interior(&v).expect("top form has positive degree")
}

/// Factor `form` as Q ∧ ω and return Q. Every wedge word must contain all
/// base differentials.
fn divide_by_top_form(form: &Form, base: &[CoordinateId]) -> Result<Form, CalcError> {
    let n = base.len();
    if form.degree() < n {
        return Err(CalcError::NotDivisibleByTopForm);
    }
    let mut raw = Vec::with_capacity(form.terms().len());
    for (coeff, word) in form.terms() {
        let rest: Vec<CoordinateId> = word.iter().filter(|c| !base.contains(c)).cloned().collect();
        if rest.len() != word.len() - n {
            return Err(CalcError::NotDivisibleByTopForm);
        }
        // sorted word puts the n base differentials first:
        // d(base) ∧ dV = (-1)^(n·|V|) dV ∧ ω
        let sign = (n * rest.len()) % 2 == 1;
        let c = if sign { -coeff } else { coeff.clone() };
        raw.push((c, rest));
    }
    Ok(Form::from_terms(form.degree() - n, raw))
}

impl Add for ValuedForm {
    type Output = ValuedForm;

    fn add(self, rhs: ValuedForm) -> ValuedForm {
        assert_eq!(self.n, rhs.n, "base dimension mismatch");
        let mut parts = self.parts;
        for (sig, comps) in rhs.parts {
            match parts.get_mut(&sig) {
                Some(existing) => {
                    for (a, b) in existing.iter_mut().zip(comps) {
                        *a = &*a + &b;
                    }
                    if existing.iter().all(Form::is_zero) {
                        parts.remove(&sig);
                    }
                }
                None => {
                    parts.insert(sig, comps);
                }
            }
        }
        ValuedForm { n: self.n, parts }
    }
}

impl Sub for ValuedForm {
    type Output = ValuedForm;

    fn sub(self, rhs: ValuedForm) -> ValuedForm {
        self + -rhs
    }
}

impl Neg for ValuedForm {
    type Output = ValuedForm;

    fn neg(self) -> ValuedForm {
        let parts = self
            .parts
            .into_iter()
            .map(|(sig, comps)| (sig, comps.iter().map(|f| -f).collect()))
            .collect();
        ValuedForm { n: self.n, parts }
    }
}

impl fmt::Display for ValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (sig, comps) in &self.parts {
            if sig.has_tx() {
                for (idx, comp) in comps.iter().enumerate() {
                    if comp.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, "  +  ")?;
                    }
                    first = false;
                    write!(f, "({comp}) ⊗ ∂_{}", idx + 1)?;
                    if sig.has_vtheta() {
                        write!(f, " ⊗ ∂_τ")?;
                    }
                }
            } else {
                let comp = &comps[0];
                if !first {
                    write!(f, "  +  ")?;
                }
                first = false;
                if sig.has_vtheta() {
                    write!(f, "({comp}) ⊗ ∂_τ")?;
                } else {
                    write!(f, "{comp}")?;
                }
            }
        }
        Ok(())
    }
}
