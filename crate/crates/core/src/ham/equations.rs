//! Hamilton equations, Euler–Lagrange derivations, restriction along Θ
//! sections, and the regular-quadratic Legendre transform.

use num_rational::BigRational;
use num_traits::Zero;

use crate::geom::{total_derivative, Fibration, SectionSpec, SectionTarget};
use crate::symcore::{Bindings, CoordinateId, Expr, Role};

use super::{Equation, EquationSystem, HamError, HamiltonianSpec, LegendreChart};

/// The Lagrangian density L_H = p^λ_i y^i_λ − 𝓗 (the ∂_τ tag rides along
/// as metadata; with a one-dimensional Θ fiber it never enters the
/// algebra).
pub fn lagrangian_density(spec: &HamiltonianSpec) -> Expr {
    let chart = spec.chart();
    let mut l = -spec.density().clone();
    for lambda in 1..=chart.n() {
        for i in 1..=chart.m() {
            l = l + Expr::coord(chart.momentum(lambda, i))
                * Expr::coord(&chart.velocity(i, lambda));
        }
    }
    l
}

/// The Euler–Lagrange system of a first-order density: for each field u,
/// ∂L/∂u − 𝒟_λ(∂L/∂u_λ) = 0, with 𝒟_λ the total derivative over every
/// jet-bearing chart coordinate (so momentum jets appear).
pub fn euler_lagrange(
    chart: &LegendreChart,
    density: &Expr,
    fields: &[CoordinateId],
) -> Result<EquationSystem, HamError> {
    let c = chart.chart();
    if c.jet_order() < 2 {
        return Err(HamError::Geom(
            crate::geom::GeomError::ChartOrderInsufficient {
                required: 2,
                actual: c.jet_order(),
            },
        ));
    }
    // the density must be first order in the listed fields
    for s in density.support() {
        let too_high = fields
            .iter()
            .any(|u| s.role() == jet_role_of(u) && s.stem() == u.stem() && s.jet_order() > 1);
        if too_high {
            return Err(HamError::DensityJetOrder(s.name().to_string()));
        }
    }
    let mut equations = Vec::with_capacity(fields.len());
    for u in fields {
        let mut lhs = density.diff(u);
        for lambda in 1..=c.n() {
            let jet =
                c.jet_successor(u, lambda)
                    .ok_or_else(|| crate::geom::GeomError::MissingJet {
                        coordinate: u.name().to_string(),
                        direction: lambda,
                    })?;
            let momentum_like = density.diff(&jet);
            if !momentum_like.is_zero() {
                lhs = lhs - total_derivative(c, lambda, &momentum_like)?;
            }
        }
        equations.push(Equation::new(
            format!("EL({})", u.name()),
            lhs,
            Expr::zero(),
        ));
    }
    Ok(EquationSystem::new("euler-lagrange", c, equations))
}

fn jet_role_of(u: &CoordinateId) -> Role {
    match u.role() {
        Role::YFiber => Role::Jet,
        Role::Momentum => Role::MomentumJet,
        Role::ThetaFiber => Role::ThetaJet,
        r => r,
    }
}

/// All y and momentum coordinates, the variational fields of L_H.
pub fn hamiltonian_fields(chart: &LegendreChart) -> Vec<CoordinateId> {
    let c = chart.chart();
    let mut fields: Vec<CoordinateId> = c.fibers().to_vec();
    for lambda in 1..=c.n() {
        for i in 1..=c.m() {
            fields.push(chart.momentum(lambda, i).clone());
        }
    }
    fields
}

/// The covariant Hamilton equations
/// y^i_λ = ∂𝓗/∂p^λ_i,  Σ_λ p^λ_{i,λ} = −∂𝓗/∂y^i.
pub fn hamilton_equations(spec: &HamiltonianSpec) -> EquationSystem {
    let chart = spec.chart();
    let c = chart.chart();
    let h = spec.density();
    let mut equations = Vec::new();
    for i in 1..=chart.m() {
        for lambda in 1..=chart.n() {
            let velocity = chart.velocity(i, lambda);
            equations.push(Equation::new(
                velocity.name().to_string(),
                Expr::coord(&velocity),
                h.diff(chart.momentum(lambda, i)),
            ));
        }
    }
    for i in 1..=chart.m() {
        let divergence: Expr = (1..=chart.n())
            .map(|lambda| Expr::coord(chart.momentum_jet(lambda, i, lambda)))
            .sum();
        let label = if chart.m() == 1 && chart.n() == 1 {
            chart.momentum_jet(1, 1, 1).name().to_string()
        } else {
            format!("div(p[{i}])")
        };
        equations.push(Equation::new(label, divergence, -h.diff(c.y(i))));
    }
    EquationSystem::new("hamilton", c, equations)
}

/// Restrict an equation system along a section h of Θ → X (τ ↦ h,
/// τ_λ ↦ ∂_λ h), optionally composing with a section σ of Y → Θ
/// (y^i ↦ σ^i|_{τ=h}, y^i_λ ↦ (∂_λ + ∂_λh ∂_τ)σ^i|_{τ=h}).
pub fn restrict_by_section(
    sys: &EquationSystem,
    h: &SectionSpec,
    sigma: Option<&SectionSpec>,
) -> Result<EquationSystem, HamError> {
    let chart = &sys.chart;
    let tau = chart.theta();
    if !matches!(h.target(), SectionTarget::Bundle(Fibration::ThetaOverX)) {
        return Err(HamError::Geom(crate::geom::GeomError::FibrationMismatch));
    }
    let h_expr = h.assignment(tau);
    let mut bindings = Bindings::new();
    bindings.insert(tau.clone(), h_expr.clone());
    for lambda in 1..=chart.n() {
        bindings.insert(
            chart.theta_jet(lambda).clone(),
            h_expr.diff(chart.x(lambda)),
        );
    }
    if let Some(sigma) = sigma {
        if !matches!(sigma.target(), SectionTarget::Bundle(Fibration::YOverTheta)) {
            return Err(HamError::Geom(crate::geom::GeomError::FibrationMismatch));
        }
        let mut tau_binding = Bindings::new();
        tau_binding.insert(tau.clone(), h_expr.clone());
        for i in 1..=chart.m() {
            let y = chart.y(i);
            let sigma_i = sigma.assignment(y);
            let restricted = sigma_i.subst(&tau_binding)?;
            bindings.insert(y.clone(), restricted);
            for lambda in 1..=chart.n() {
                let jet = chart.jet_successor(y, lambda).ok_or_else(|| {
                    crate::geom::GeomError::MissingJet {
                        coordinate: y.name().to_string(),
                        direction: lambda,
                    }
                })?;
                let d = (sigma_i.diff(chart.x(lambda))
                    + h_expr.diff(chart.x(lambda)) * sigma_i.diff(tau))
                .subst(&tau_binding)?;
                bindings.insert(jet, d);
            }
        }
    }
    let mut out = sys.subst(&bindings)?;
    out.name = format!("{} | restricted", sys.name);
    Ok(out)
}

/// Exact inverse of a square rational matrix by Gauss–Jordan elimination.
fn invert_rational(matrix: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let k = matrix.len();
    let mut aug: Vec<Vec<BigRational>> = matrix
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            for c in 0..k {
                v.push(if r == c {
                    BigRational::from_integer(1.into())
                } else {
                    BigRational::zero()
                });
            }
            v
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for entry in aug[col].iter_mut() {
            *entry /= p.clone();
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, pivot) in row.iter_mut().zip(&pivot_row) {
                *entry -= &factor * pivot;
            }
        }
    }
    Some(aug.into_iter().map(|mut row| row.split_off(k)).collect())
}

/// Solve the affine system v = A u + b for u, where A is an invertible
/// rational matrix and v, b are expression vectors: u = A⁻¹ (v − b).
fn affine_solve(a: &[Vec<BigRational>], v: &[Expr], b: &[Expr]) -> Result<Vec<Expr>, HamError> {
    let inv = invert_rational(a).ok_or(HamError::SingularLegendre)?;
    let k = a.len();
    let mut out = Vec::with_capacity(k);
    for row in inv.iter() {
        let mut acc = Expr::zero();
        for (l, coeff) in row.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            acc = acc + (&v[l] - &b[l]).scale(coeff);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Legendre transform of a density quadratic in the first jets with an
/// invertible constant quadratic part: momenta p^λ_i ≔ ∂L/∂y^i_λ are
/// inverted for the jets, and 𝓗 = p^λ_i y^i_λ − L on the solution.
pub fn legendre_of_lagrangian(
    chart: &LegendreChart,
    density: &Expr,
) -> Result<HamiltonianSpec, HamError> {
    for s in density.support() {
        let ok = match s.role() {
            Role::Base | Role::YFiber | Role::ThetaFiber | Role::Parameter => true,
            Role::Jet => s.jet_order() == 1,
            _ => false,
        };
        if !ok {
            return Err(HamError::BadLagrangianSupport(s.name().to_string()));
        }
    }
    // enumerate the jet variables v_k = y^i_λ
    let jets: Vec<CoordinateId> = (1..=chart.m())
        .flat_map(|i| (1..=chart.n()).map(move |l| (i, l)))
        .map(|(i, l)| chart.velocity(i, l))
        .collect();
    let momenta: Vec<CoordinateId> = (1..=chart.m())
        .flat_map(|i| (1..=chart.n()).map(move |l| (i, l)))
        .map(|(i, l)| chart.momentum(l, i).clone())
        .collect();

    for v in &jets {
        if density.degree_in(v) > 2 {
            return Err(HamError::NotQuadratic(density.degree_in(v)));
        }
    }
    let k = jets.len();
    let mut a = vec![vec![BigRational::zero(); k]; k];
    for (r, vr) in jets.iter().enumerate() {
        for (col, vc) in jets.iter().enumerate() {
            let second = density.diff(vr).diff(vc);
            match second.as_rational() {
                Some(q) => a[r][col] = q.clone(),
                None => {
                    if second.is_zero() {
                        continue;
                    }
                    return Err(HamError::NonConstantQuadraticPart(
                        vr.name().to_string(),
                        vc.name().to_string(),
                    ));
                }
            }
        }
    }
    // p = A v + b with b = ∂L/∂v at v = 0
    let zero_jets: Bindings = jets.iter().map(|v| (v.clone(), Expr::zero())).collect();
    let b: Vec<Expr> = jets
        .iter()
        .map(|v| density.diff(v).subst(&zero_jets))
        .collect::<Result<_, _>>()?;
    let p_exprs: Vec<Expr> = momenta.iter().map(Expr::coord).collect();
    let solved = affine_solve(&a, &p_exprs, &b)?;

    let jet_bindings: Bindings = jets.iter().cloned().zip(solved.iter().cloned()).collect();
    let mut h = -density.subst(&jet_bindings)?;
    for (p, v) in p_exprs.iter().zip(&solved) {
        h = h + p * v;
    }
    HamiltonianSpec::new(chart, h)
}

/// Eliminate the momenta from the covariant Hamilton equations of a
/// Hamiltonian quadratic in p with invertible constant quadratic part:
/// the velocity equations are solved for p, and p with its jets is
/// substituted into the divergence equations. The result is the
/// second-order field system in y alone.
pub fn eliminate_momenta(spec: &HamiltonianSpec) -> Result<EquationSystem, HamError> {
    let chart = spec.chart();
    let c = chart.chart();
    let h = spec.density();

    let momenta: Vec<CoordinateId> = (1..=chart.m())
        .flat_map(|i| (1..=chart.n()).map(move |l| (i, l)))
        .map(|(i, l)| chart.momentum(l, i).clone())
        .collect();
    let velocities: Vec<CoordinateId> = (1..=chart.m())
        .flat_map(|i| (1..=chart.n()).map(move |l| (i, l)))
        .map(|(i, l)| chart.velocity(i, l))
        .collect();

    for p in &momenta {
        if h.degree_in(p) > 2 {
            return Err(HamError::NotQuadratic(h.degree_in(p)));
        }
    }
    let k = momenta.len();
    let mut a = vec![vec![BigRational::zero(); k]; k];
    for (r, pr) in momenta.iter().enumerate() {
        for (col, pc) in momenta.iter().enumerate() {
            let second = h.diff(pr).diff(pc);
            match second.as_rational() {
                Some(q) => a[r][col] = q.clone(),
                None => {
                    if second.is_zero() {
                        continue;
                    }
                    return Err(HamError::NonConstantQuadraticPart(
                        pr.name().to_string(),
                        pc.name().to_string(),
                    ));
                }
            }
        }
    }
    let zero_p: Bindings = momenta.iter().map(|p| (p.clone(), Expr::zero())).collect();
    let b: Vec<Expr> = momenta
        .iter()
        .map(|p| h.diff(p).subst(&zero_p))
        .collect::<Result<_, _>>()?;
    let v_exprs: Vec<Expr> = velocities.iter().map(Expr::coord).collect();
    let solved = affine_solve(&a, &v_exprs, &b)?;

    // bindings: p ↦ p*(x, τ, y, y_λ) and p_{,μ} ↦ 𝒟_μ p*
    let mut bindings: Bindings = momenta
        .iter()
        .cloned()
        .zip(solved.iter().cloned())
        .collect();
    for (p, pstar) in momenta.iter().zip(&solved) {
        let lambda = p.contra_index() as usize;
        let i = p.fiber_index() as usize;
        for mu in 1..=chart.n() {
            let jet = chart.momentum_jet(lambda, i, mu).clone();
            bindings.insert(jet, total_derivative(c, mu, pstar)?);
        }
    }

    let hamilton = hamilton_equations(spec);
    let mut equations = Vec::new();
    for eq in &hamilton.equations {
        // keep only the divergence equations; the velocity equations are
        // consumed by the solve
        let is_velocity = velocities.iter().any(|v| eq.lhs == Expr::coord(v));
        if is_velocity {
            continue;
        }
        equations.push(Equation::new(
            eq.label.clone(),
            eq.lhs.subst(&bindings)?,
            eq.rhs.subst(&bindings)?,
        ));
    }
    Ok(EquationSystem::new(
        "hamilton | momenta eliminated",
        c,
        equations,
    ))
}
