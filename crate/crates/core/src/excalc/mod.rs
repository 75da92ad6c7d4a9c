//! Exterior algebra over canonical expressions: forms, vector fields, and
//! forms with TX / VΘ value legs.

mod form;
mod valued;
mod vector;

pub use form::{Form, Word};
pub use valued::{omega_lambda, top_form, LegSig, ValuedForm};
pub use vector::VectorField;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("cannot contract a degree-0 form")]
    ContractionOfScalar,
    #[error("leg contraction needs a 1-form, got degree {0}")]
    ContractionFormDegree(usize),
    #[error("`{0}` is not a Θ coordinate differential")]
    NotAThetaForm(String),
    #[error("contraction coefficient depends on `{0}`, which is not a base coordinate")]
    NonBaseContractionCoefficient(String),
    #[error("form is not divisible by the base top form")]
    NotDivisibleByTopForm,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{CoordinateId, Expr};

    fn x1() -> CoordinateId {
        CoordinateId::base("x1", 1)
    }

    fn x2() -> CoordinateId {
        CoordinateId::base("x2", 2)
    }

    fn tau() -> CoordinateId {
        CoordinateId::theta("tau")
    }

    fn y() -> CoordinateId {
        CoordinateId::fiber("y", 1)
    }

    fn p(l: u16) -> CoordinateId {
        CoordinateId::momentum(format!("p{l}"), "p", l, 1)
    }

    fn dx1() -> Form {
        Form::differential(&x1())
    }

    fn dx2() -> Form {
        Form::differential(&x2())
    }

    fn dy() -> Form {
        Form::differential(&y())
    }

    #[test]
    fn wedge_of_repeated_differential_vanishes() {
        assert!(dx1().wedge(&dx1()).is_zero());
    }

    #[test]
    fn wedge_sign_normalization() {
        let a = dy().wedge(&dx1());
        let b = -&dx1().wedge(&dy());
        assert_eq!(a, b);
    }

    #[test]
    fn wedge_sorts_longer_words_with_permutation_sign() {
        // p·dy ∧ dx1∧dτ: sorting (y, x1, τ) -> (x1, τ, y) is a 2-cycle of
        // adjacent swaps moving y past two smaller letters: sign +1.
        let lhs = Form::differential(&y()).scale(&Expr::coord(&p(1)));
        let rhs = dx1().wedge(&Form::differential(&tau()));
        let w = lhs.wedge(&rhs);
        let expected = Form::from_terms(3, vec![(Expr::coord(&p(1)), vec![x1(), tau(), y()])]);
        assert_eq!(w, expected);
    }

    #[test]
    fn ext_d_of_scalar_coefficient() {
        // d(y dx1) = dy ∧ dx1 = -(dx1 ∧ dy)
        let a = dx1().scale(&Expr::coord(&y()));
        let d = a.ext_d();
        assert_eq!(d, -&dx1().wedge(&dy()));
    }

    #[test]
    fn ext_d_squared_is_zero_on_scalars() {
        let f = Form::scalar(
            Expr::coord(&x1()).pow(3) * Expr::coord(&y()).pow(2)
                + Expr::coord(&tau()) * Expr::coord(&x2()),
        );
        assert!(f.ext_d().ext_d().is_zero());
    }

    #[test]
    fn interior_basis_contractions() {
        let a = dx1().wedge(&dy());
        let vx = VectorField::basis(&x1());
        let vy = VectorField::basis(&y());
        assert_eq!(a.interior(&vx).unwrap(), dy());
        assert_eq!(a.interior(&vy).unwrap(), -&dx1());
        assert!(Form::scalar(Expr::one()).interior(&vx).is_err());
    }

    #[test]
    fn omega_lambda_matches_permutation_sign() {
        let base = [x1(), x2()];
        assert_eq!(omega_lambda(&base, 1), dx2());
        assert_eq!(omega_lambda(&base, 2), -&dx1());
    }

    #[test]
    fn leg_contract_consumes_one_leg() {
        // ϑ = p^λ dy ∧ ω ⊗ ∂_λ ⊗ ∂_τ on n = 2, m = 1
        let base = [x1(), x2()];
        let omega = top_form(&base);
        let comps: Vec<Form> = (1..=2)
            .map(|l| dy().wedge(&omega).scale(&Expr::coord(&p(l))))
            .collect();
        let theta = ValuedForm::tx_vtheta(2, comps.clone());

        // dτ consumes the VΘ leg, leaving the TX family
        let against_dtau = theta.leg_contract(&Form::differential(&tau())).unwrap();
        assert_eq!(against_dtau, ValuedForm::tx(2, comps.clone()));

        // dx1 consumes the TX leg at λ = 1, leaving ∂_τ
        let against_dx1 = theta.leg_contract(&dx1()).unwrap();
        assert_eq!(against_dx1, ValuedForm::vtheta(2, comps[0].clone()));

        // contracting with zero gives zero
        let zero = theta.leg_contract(&Form::zero(1)).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn leg_contract_rejects_bad_psi() {
        let theta = ValuedForm::tx_vtheta(2, vec![Form::zero(2), dy().wedge(&dx1())]);
        assert!(theta.leg_contract(&dy()).is_err());
        assert!(theta.leg_contract(&dx1().wedge(&dx2())).is_err());
        // coefficient depending on a fiber coordinate is rejected
        let bad = dx1().scale(&Expr::coord(&y()));
        assert!(theta.leg_contract(&bad).is_err());
    }

    #[test]
    fn absorb_tx_rewrites_omega_to_omega_lambda() {
        let base = [x1(), x2()];
        let omega = top_form(&base);
        let comps: Vec<Form> = (1..=2)
            .map(|l| dy().wedge(&omega).scale(&Expr::coord(&p(l))))
            .collect();
        let theta = ValuedForm::tx_vtheta(2, comps);
        let absorbed = theta.absorb_tx(&base).unwrap();

        let expected = ValuedForm::vtheta(
            2,
            &dy()
                .wedge(&omega_lambda(&base, 1))
                .scale(&Expr::coord(&p(1)))
                + &dy()
                    .wedge(&omega_lambda(&base, 2))
                    .scale(&Expr::coord(&p(2))),
        );
        assert_eq!(absorbed, expected);
    }

    #[test]
    fn pullback_annihilates_bound_differentials() {
        // pull back dy - x1 dx1 along y = x1^2/2 ... choose y = x1^2
        let mut bindings = crate::symcore::Bindings::new();
        bindings.insert(y(), Expr::coord(&x1()).pow(2));
        let theta = &dy() - &dx1().scale(&(Expr::int(2) * Expr::coord(&x1())));
        let pulled = theta.pullback(&bindings).unwrap();
        assert!(pulled.is_zero());
    }
}
