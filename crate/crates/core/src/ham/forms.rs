//! Liouville and polysymplectic forms, Hamiltonian forms, and Hamiltonian
//! connections on the extended Legendre bundle.

use std::collections::BTreeMap;

use crate::excalc::{Form, ValuedForm};
use crate::geom::{Connection, Fibration};
use crate::symcore::Expr;

use super::{HamError, HamiltonianSpec, LegendreChart};

/// The tangent-valued Liouville form
/// ϑ = p^λ_i dy^i ∧ ω ⊗ ∂_λ ⊗ ∂_τ.
pub fn liouville_form(chart: &LegendreChart) -> ValuedForm {
    let c = chart.chart();
    let omega = c.omega();
    let comps: Vec<Form> = (1..=c.n())
        .map(|lambda| {
            (1..=c.m())
                .map(|i| {
                    Form::differential(c.y(i))
                        .wedge(&omega)
                        .scale(&Expr::coord(chart.momentum(lambda, i)))
                })
                .fold(Form::zero(1 + c.n()), |acc, f| &acc + &f)
        })
        .collect();
    ValuedForm::tx_vtheta(c.n(), comps)
}

/// The polysymplectic form
/// Ω = dp^λ_i ∧ dy^i ∧ ω ⊗ ∂_λ ⊗ ∂_τ.
pub fn polysymplectic_form(chart: &LegendreChart) -> ValuedForm {
    let c = chart.chart();
    let omega = c.omega();
    let comps: Vec<Form> = (1..=c.n())
        .map(|lambda| polysymplectic_component(chart, lambda, &omega))
        .collect();
    ValuedForm::tx_vtheta(c.n(), comps)
}

fn polysymplectic_component(chart: &LegendreChart, lambda: usize, omega: &Form) -> Form {
    let c = chart.chart();
    (1..=c.m())
        .map(|i| {
            Form::differential(chart.momentum(lambda, i))
                .wedge(&Form::differential(c.y(i)))
                .wedge(omega)
        })
        .fold(Form::zero(2 + c.n()), |acc, f| &acc + &f)
}

/// The Hamiltonian form H = p^λ_i dy^i ∧ ω_λ ⊗ ∂_τ − 𝓗 ω ⊗ ∂_τ.
pub fn hamiltonian_form(spec: &HamiltonianSpec) -> ValuedForm {
    let chart = spec.chart();
    let c = chart.chart();
    let mut form = c.omega().scale(&-spec.density().clone());
    for lambda in 1..=c.n() {
        let omega_l = c.omega_lambda(lambda);
        for i in 1..=c.m() {
            form = &form
                + &Form::differential(c.y(i))
                    .wedge(&omega_l)
                    .scale(&Expr::coord(chart.momentum(lambda, i)));
        }
    }
    ValuedForm::vtheta(c.n(), form)
}

/// The contraction γ ⌋ Ω with the leg-matched insertion convention: the
/// horizontal lift v_λ is inserted into the Ω component of TX index λ, and
/// the results are summed:
///
/// γ ⌋ Ω = Σ_λ v_λ ⌋ (dp^λ_i ∧ dy^i ∧ ω) ⊗ ∂_τ
///       = (Σ_λ γ^λ_{iλ}) dy^i ∧ ω − γ^i_λ dp^λ_i ∧ ω + dp^λ_i ∧ dy^i ∧ ω_λ,
/// all ⊗ ∂_τ.
pub fn hamiltonian_connection_contraction(
    gamma: &Connection,
    chart: &LegendreChart,
) -> Result<ValuedForm, HamError> {
    if gamma.fibration() != Fibration::PiOverX {
        return Err(HamError::Geom(crate::geom::GeomError::FibrationMismatch));
    }
    let c = chart.chart();
    let omega = c.omega();
    let mut total = Form::zero(1 + c.n());
    for lambda in 1..=c.n() {
        let component = polysymplectic_component(chart, lambda, &omega);
        let lift = gamma.horizontal_lift(lambda);
        total = &total + &component.interior(&lift)?;
    }
    Ok(ValuedForm::vtheta(c.n(), total))
}

/// d(γ ⌋ Ω): the obstruction to γ being a Hamiltonian connection.
pub fn hamiltonian_connection_defect(
    gamma: &Connection,
    chart: &LegendreChart,
) -> Result<ValuedForm, HamError> {
    Ok(hamiltonian_connection_contraction(gamma, chart)?.ext_d())
}

/// A connection is Hamiltonian iff γ ⌋ Ω is closed.
pub fn is_hamiltonian_connection(
    gamma: &Connection,
    chart: &LegendreChart,
) -> Result<bool, HamError> {
    Ok(hamiltonian_connection_defect(gamma, chart)?.is_zero())
}

/// A Hamiltonian connection γ_H with γ_H ⌋ Ω = dH: velocity components
/// γ^i_λ = ∂𝓗/∂p^λ_i, and the momentum trace distributed uniformly,
/// γ^λ_{iλ} = −(1/n) ∂𝓗/∂y^i with off-trace components zero. The τ row
/// is zero.
pub fn solve_hamiltonian_connection(spec: &HamiltonianSpec) -> Result<Connection, HamError> {
    let chart = spec.chart();
    let c = chart.chart();
    let h = spec.density();
    let mut comps = BTreeMap::new();
    for lambda in 1..=c.n() {
        let x = c.x(lambda);
        for i in 1..=c.m() {
            comps.insert(
                (c.y(i).clone(), x.clone()),
                h.diff(chart.momentum(lambda, i)),
            );
            let trace_share = h
                .diff(c.y(i))
                .checked_div(&Expr::int(-(c.n() as i64)))
                .expect("n is a nonzero constant");
            comps.insert((chart.momentum(lambda, i).clone(), x.clone()), trace_share);
        }
    }
    Ok(Connection::new(c, Fibration::PiOverX, comps)?)
}

/// Check γ ⌋ Ω = dH and return the difference when it fails.
pub fn contraction_identity_defect(
    gamma: &Connection,
    spec: &HamiltonianSpec,
) -> Result<ValuedForm, HamError> {
    let contraction = hamiltonian_connection_contraction(gamma, spec.chart())?;
    let dh = hamiltonian_form(spec).ext_d();
    Ok(contraction - dh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excalc::{top_form, LegSig};
    use crate::symcore::Bindings;

    fn chart11() -> LegendreChart {
        LegendreChart::new(1, 1).unwrap()
    }

    #[test]
    fn liouville_specializes_on_the_line() {
        // n=1, m=1: ϑ = p dy ∧ dx ⊗ ∂_x ⊗ ∂_τ
        let lc = chart11();
        let c = lc.chart();
        let expected = ValuedForm::tx_vtheta(
            1,
            vec![Form::differential(c.y(1))
                .wedge(&Form::differential(c.x(1)))
                .scale(&Expr::coord(lc.momentum(1, 1)))],
        );
        assert_eq!(liouville_form(&lc), expected);
    }

    #[test]
    fn liouville_vanishes_at_zero_momentum() {
        let lc = chart11();
        let theta = liouville_form(&lc);
        let mut bindings = Bindings::new();
        bindings.insert(lc.momentum(1, 1).clone(), Expr::zero());
        let restricted: Vec<Form> = theta
            .part(LegSig::TxVTheta)
            .iter()
            .map(|f| f.subst_coefficients(&bindings).unwrap())
            .collect();
        assert!(restricted.iter().all(Form::is_zero));
    }

    #[test]
    fn polysymplectic_specializes_on_the_line() {
        let lc = chart11();
        let c = lc.chart();
        let expected = ValuedForm::tx_vtheta(
            1,
            vec![Form::differential(lc.momentum(1, 1))
                .wedge(&Form::differential(c.y(1)))
                .wedge(&Form::differential(c.x(1)))],
        );
        assert_eq!(polysymplectic_form(&lc), expected);
    }

    #[test]
    fn absorbed_liouville_derivative_is_absorbed_polysymplectic() {
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
            let lc = LegendreChart::new(n, m).unwrap();
            let base = lc.chart().base();
            let absorbed_theta = liouville_form(&lc).absorb_tx(base).unwrap();
            let absorbed_omega = polysymplectic_form(&lc).absorb_tx(base).unwrap();
            assert_eq!(absorbed_theta.ext_d(), absorbed_omega);
        }
    }

    #[test]
    fn absorbed_liouville_signs_for_n_two() {
        // p^λ dy ∧ ω_λ with ω_1 = dx2, ω_2 = −dx1
        let lc = LegendreChart::new(2, 1).unwrap();
        let c = lc.chart();
        let absorbed = liouville_form(&lc).absorb_tx(c.base()).unwrap();
        let dy = Form::differential(c.y(1));
        let expected = ValuedForm::vtheta(
            2,
            &dy.wedge(&Form::differential(c.x(2)))
                .scale(&Expr::coord(lc.momentum(1, 1)))
                + &dy
                    .wedge(&-&Form::differential(c.x(1)))
                    .scale(&Expr::coord(lc.momentum(2, 1))),
        );
        assert_eq!(absorbed, expected);
        // and ω really is dx1 ∧ dx2
        assert_eq!(c.omega(), top_form(c.base()));
    }

    #[test]
    fn polysymplectic_vtheta_contraction() {
        // Ω ⌋ dτ = dp^λ_i ∧ dy^i ∧ ω ⊗ ∂_λ
        let lc = LegendreChart::new(2, 1).unwrap();
        let c = lc.chart();
        let omega = polysymplectic_form(&lc);
        let contracted = omega.leg_contract(&Form::differential(c.theta())).unwrap();
        let expected = ValuedForm::tx(
            2,
            (1..=2)
                .map(|l| polysymplectic_component(&lc, l, &c.omega()))
                .collect(),
        );
        assert_eq!(contracted, expected);
    }

    #[test]
    fn hamiltonian_form_of_zero_hamiltonian() {
        let lc = chart11();
        let spec = HamiltonianSpec::new(&lc, Expr::zero()).unwrap();
        let h = hamiltonian_form(&spec);
        let c = lc.chart();
        let expected = ValuedForm::vtheta(
            1,
            Form::differential(c.y(1)).scale(&Expr::coord(lc.momentum(1, 1))),
        );
        assert_eq!(h, expected);
    }

    #[test]
    fn hamiltonian_form_free_particle() {
        // n=1, m=1, 𝓗 = p²/2: H = (p dy − p²/2 dx) ⊗ ∂_τ
        let lc = chart11();
        let c = lc.chart();
        let p = Expr::coord(lc.momentum(1, 1));
        let spec = HamiltonianSpec::new(&lc, p.pow(2).checked_div(&Expr::int(2)).unwrap()).unwrap();
        let h = hamiltonian_form(&spec);
        let expected = ValuedForm::vtheta(
            1,
            &Form::differential(c.y(1)).scale(&p)
                - &Form::differential(c.x(1)).scale(&p.pow(2).checked_div(&Expr::int(2)).unwrap()),
        );
        assert_eq!(h, expected);
    }

    #[test]
    fn hamiltonian_form_derivative_matches_displayed_expression() {
        // ext_d(H) against the independently assembled
        // dp^λ_i ∧ dy^i ∧ ω_λ − Σ_c ∂_c𝓗 dc ∧ ω, with the full
        // differential of a symbolic 𝓗(x, τ, y, p)
        let lc = LegendreChart::new(2, 1).unwrap();
        let c = lc.chart();
        let args = vec![
            c.x(1).clone(),
            c.x(2).clone(),
            c.theta().clone(),
            c.y(1).clone(),
            lc.momentum(1, 1).clone(),
            lc.momentum(2, 1).clone(),
        ];
        let spec = HamiltonianSpec::symbolic(&lc, "H", args.clone()).unwrap();

        let mut displayed = Form::zero(c.n() + 1);
        for lambda in 1..=2 {
            displayed = &displayed
                + &Form::differential(lc.momentum(lambda, 1))
                    .wedge(&Form::differential(c.y(1)))
                    .wedge(&c.omega_lambda(lambda));
        }
        for coord in &args {
            displayed = &displayed
                - &Form::differential(coord)
                    .wedge(&c.omega())
                    .scale(&spec.density().diff(coord));
        }
        assert_eq!(
            hamiltonian_form(&spec).ext_d(),
            ValuedForm::vtheta(2, displayed)
        );
    }

    #[test]
    fn contraction_identity_characterizes_components() {
        // γ⌋Ω = dH holds for any trace distribution summing to −∂_i𝓗 and
        // fails as soon as a velocity component is perturbed
        let lc = LegendreChart::new(2, 1).unwrap();
        let c = lc.chart();
        let p1 = Expr::coord(lc.momentum(1, 1));
        let p2 = Expr::coord(lc.momentum(2, 1));
        let y = Expr::coord(c.y(1));
        let spec = HamiltonianSpec::new(&lc, &p1 * &p2 + y.pow(3)).unwrap();

        // put the whole trace on λ = 1 instead of distributing it
        let mut comps = BTreeMap::new();
        for lambda in 1..=2 {
            comps.insert(
                (c.y(1).clone(), c.x(lambda).clone()),
                spec.density().diff(lc.momentum(lambda, 1)),
            );
        }
        comps.insert(
            (lc.momentum(1, 1).clone(), c.x(1).clone()),
            -spec.density().diff(c.y(1)),
        );
        let gamma = Connection::new(c, Fibration::PiOverX, comps.clone()).unwrap();
        assert!(contraction_identity_defect(&gamma, &spec)
            .unwrap()
            .is_zero());
        assert!(is_hamiltonian_connection(&gamma, &lc).unwrap());

        // perturb γ^y_2
        comps.insert(
            (c.y(1).clone(), c.x(2).clone()),
            spec.density().diff(lc.momentum(2, 1)) + Expr::one(),
        );
        let wrong = Connection::new(c, Fibration::PiOverX, comps).unwrap();
        assert!(!contraction_identity_defect(&wrong, &spec)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn zero_connection_contraction_keeps_only_base_insertion() {
        let lc = LegendreChart::new(2, 1).unwrap();
        let c = lc.chart();
        let gamma = Connection::zero(c, Fibration::PiOverX).unwrap();
        let contraction = hamiltonian_connection_contraction(&gamma, &lc).unwrap();
        let mut expected = Form::zero(3);
        for lambda in 1..=2 {
            expected = &expected
                + &Form::differential(lc.momentum(lambda, 1))
                    .wedge(&Form::differential(c.y(1)))
                    .wedge(&c.omega_lambda(lambda));
        }
        assert_eq!(contraction, ValuedForm::vtheta(2, expected));
    }

    #[test]
    fn generic_contraction_has_three_term_expansion() {
        // independent term-wise computation of
        // Σ γ^λ_{iλ} dy^i∧ω − γ^i_λ dp^λ_i∧ω + dp^λ_i∧dy^i∧ω_λ
        let lc = LegendreChart::new(2, 2).unwrap();
        let c = lc.chart();
        let mut comps = BTreeMap::new();
        // polynomial components over Π coordinates
        for lambda in 1..=2 {
            let x = c.x(lambda);
            comps.insert(
                (c.theta().clone(), x.clone()),
                Expr::coord(c.x(1)).pow(lambda as u32),
            );
            for i in 1..=2 {
                comps.insert(
                    (c.y(i).clone(), x.clone()),
                    Expr::coord(lc.momentum(lambda, i)) * Expr::coord(c.y(i)),
                );
                for l2 in 1..=2 {
                    comps.insert(
                        (lc.momentum(l2, i).clone(), x.clone()),
                        Expr::coord(c.y(i)).pow((lambda + l2) as u32) + Expr::coord(c.theta()),
                    );
                }
            }
        }
        let gamma = Connection::new(c, Fibration::PiOverX, comps).unwrap();
        let contraction = hamiltonian_connection_contraction(&gamma, &lc).unwrap();

        let omega = c.omega();
        let mut expected = Form::zero(3);
        for i in 1..=2 {
            let trace: Expr = (1..=2)
                .map(|l| gamma.component(lc.momentum(l, i), c.x(l)))
                .sum();
            expected = &expected + &Form::differential(c.y(i)).wedge(&omega).scale(&trace);
            for lambda in 1..=2 {
                expected = &expected
                    - &Form::differential(lc.momentum(lambda, i))
                        .wedge(&omega)
                        .scale(&gamma.component(c.y(i), c.x(lambda)));
                expected = &expected
                    + &Form::differential(lc.momentum(lambda, i))
                        .wedge(&Form::differential(c.y(i)))
                        .wedge(&c.omega_lambda(lambda));
            }
        }
        assert_eq!(contraction, ValuedForm::vtheta(2, expected));
    }

    #[test]
    fn solved_connection_satisfies_defining_identity() {
        // harmonic oscillator: γ^y_x = p, γ^p_x = −ω₀² y
        let lc = LegendreChart::with_parameters(1, 1, ["omega0"]).unwrap();
        let c = lc.chart();
        let w = Expr::coord(c.param("omega0").unwrap());
        let p = Expr::coord(lc.momentum(1, 1));
        let y = Expr::coord(c.y(1));
        let density = p.pow(2).checked_div(&Expr::int(2)).unwrap()
            + (w.pow(2) * y.pow(2)).checked_div(&Expr::int(2)).unwrap();
        let spec = HamiltonianSpec::new(&lc, density).unwrap();
        let gamma = solve_hamiltonian_connection(&spec).unwrap();
        assert_eq!(gamma.component(c.y(1), c.x(1)), p);
        assert_eq!(gamma.component(lc.momentum(1, 1), c.x(1)), -(w.pow(2) * y));
        assert!(is_hamiltonian_connection(&gamma, &lc).unwrap());
        assert!(contraction_identity_defect(&gamma, &spec)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn zero_connection_is_hamiltonian() {
        let lc = chart11();
        let gamma = Connection::zero(lc.chart(), Fibration::PiOverX).unwrap();
        assert!(is_hamiltonian_connection(&gamma, &lc).unwrap());
    }

    #[test]
    fn non_integrable_connection_reports_witness() {
        // γ^y_x = p·y is not closed under d(γ⌋Ω)
        let lc = chart11();
        let c = lc.chart();
        let mut comps = BTreeMap::new();
        comps.insert(
            (c.y(1).clone(), c.x(1).clone()),
            Expr::coord(lc.momentum(1, 1)) * Expr::coord(c.y(1)),
        );
        let gamma = Connection::new(c, Fibration::PiOverX, comps).unwrap();
        assert!(!is_hamiltonian_connection(&gamma, &lc).unwrap());
        let witness = hamiltonian_connection_defect(&gamma, &lc).unwrap();
        assert!(!witness.is_zero());
    }

    #[test]
    fn tau_dependent_hamiltonian_contraction_residual() {
        // For τ-dependent 𝓗 the identity γ_H ⌋ Ω = dH picks up the exact
        // residual ∂_τ𝓗 dτ ∧ ω, which no connection component can cancel.
        let lc = chart11();
        let c = lc.chart();
        let tau = Expr::coord(c.theta());
        let p = Expr::coord(lc.momentum(1, 1));
        let spec = HamiltonianSpec::new(
            &lc,
            tau.clone() * p.pow(2).checked_div(&Expr::int(2)).unwrap(),
        )
        .unwrap();
        let gamma = solve_hamiltonian_connection(&spec).unwrap();
        let defect = contraction_identity_defect(&gamma, &spec).unwrap();
        let expected = ValuedForm::vtheta(
            1,
            Form::differential(c.theta())
                .wedge(&c.omega())
                .scale(&spec.density().diff(c.theta())),
        );
        assert_eq!(defect, expected);
    }
}
