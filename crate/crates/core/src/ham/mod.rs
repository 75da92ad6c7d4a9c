//! The extended Legendre bundle: Liouville and polysymplectic forms,
//! Hamiltonian forms and connections, covariant Hamilton equations, and
//! their restriction to Hamilton–De Donder form.

mod equations;
mod forms;

pub use equations::{
    eliminate_momenta, euler_lagrange, hamilton_equations, hamiltonian_fields, lagrangian_density,
    legendre_of_lagrangian, restrict_by_section,
};
pub use forms::{
    contraction_identity_defect, hamiltonian_connection_contraction, hamiltonian_connection_defect,
    hamiltonian_form, is_hamiltonian_connection, liouville_form, polysymplectic_form,
    solve_hamiltonian_connection,
};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::geom::{Chart, GeomError};
use crate::symcore::{Bindings, CoordinateId, Expr, FunctionSymbol, Role, SymError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamError {
    #[error("Hamiltonian mentions jet coordinate `{0}`")]
    JetInHamiltonian(String),
    #[error("Lagrangian mentions `{0}`, outside (x, τ, y, y_λ)")]
    BadLagrangianSupport(String),
    #[error("Lagrangian is not quadratic in the first jets (degree {0})")]
    NotQuadratic(u32),
    #[error("density mentions `{0}`: it must be first order in the varied fields")]
    DensityJetOrder(String),
    #[error("quadratic part has non-constant coefficient at ({0}, {1})")]
    NonConstantQuadraticPart(String, String),
    #[error("quadratic part is singular: Legendre map not invertible")]
    SingularLegendre,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Calc(#[from] crate::excalc::CalcError),
}

/// A chart with the momentum phase-space inventory guaranteed: momenta
/// p^λ_i with their first jets, τ with τ_λ, and y-jets to order 2 so
/// Euler–Lagrange derivations stay in-chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreChart {
    chart: Chart,
}

impl LegendreChart {
    pub fn new(n: usize, m: usize) -> Result<LegendreChart, HamError> {
        let chart = Chart::builder(n, m).jet_order(2).with_momenta().build()?;
        Ok(LegendreChart { chart })
    }

    pub fn with_parameters<S: Into<String>>(
        n: usize,
        m: usize,
        params: impl IntoIterator<Item = S>,
    ) -> Result<LegendreChart, HamError> {
        let chart = Chart::builder(n, m)
            .jet_order(2)
            .with_momenta()
            .parameters(params)
            .build()?;
        Ok(LegendreChart { chart })
    }

    /// Wrap an existing chart; it must carry momenta and order ≥ 2 jets.
    pub fn from_chart(chart: Chart) -> Result<LegendreChart, HamError> {
        if !chart.has_momenta() {
            return Err(HamError::Geom(GeomError::MomentaRequired));
        }
        if chart.jet_order() < 2 {
            return Err(HamError::Geom(GeomError::ChartOrderInsufficient {
                required: 2,
                actual: chart.jet_order(),
            }));
        }
        Ok(LegendreChart { chart })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn n(&self) -> usize {
        self.chart.n()
    }

    pub fn m(&self) -> usize {
        self.chart.m()
    }

    pub fn momentum(&self, lambda: usize, i: usize) -> &CoordinateId {
        self.chart.momentum(lambda, i).expect("momenta present")
    }

    pub fn momentum_jet(&self, lambda: usize, i: usize, mu: usize) -> &CoordinateId {
        self.chart
            .momentum_jet(lambda, i, mu)
            .expect("momentum jets present")
    }

    /// y^i_λ, the order-1 jet in direction λ.
    pub fn velocity(&self, i: usize, lambda: usize) -> CoordinateId {
        self.chart
            .jet_successor(self.chart.y(i), lambda)
            .expect("order-1 jets present")
    }
}

/// A Hamiltonian: a scalar expression over (x^λ, τ, y^i, p^λ_i) and
/// parameters, with the ∂_τ value tag tracked as metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSpec {
    chart: LegendreChart,
    density: Expr,
}

impl HamiltonianSpec {
    pub fn new(chart: &LegendreChart, density: Expr) -> Result<HamiltonianSpec, HamError> {
        for c in density.support() {
            if matches!(c.role(), Role::Jet | Role::ThetaJet | Role::MomentumJet) {
                return Err(HamError::JetInHamiltonian(c.name().to_string()));
            }
        }
        Ok(HamiltonianSpec {
            chart: chart.clone(),
            density,
        })
    }

    /// An abstract Hamiltonian: a formal function symbol applied to the
    /// given coordinates.
    pub fn symbolic(
        chart: &LegendreChart,
        name: &str,
        args: Vec<CoordinateId>,
    ) -> Result<HamiltonianSpec, HamError> {
        let symbol = FunctionSymbol::new(name, args);
        HamiltonianSpec::new(chart, symbol.apply())
    }

    pub fn chart(&self) -> &LegendreChart {
        &self.chart
    }

    pub fn density(&self) -> &Expr {
        &self.density
    }

    /// The Hamiltonian with τ and τ_λ replaced along a section τ = h(x).
    pub fn restrict_theta(&self, h: &Expr) -> Result<HamiltonianSpec, HamError> {
        let chart = self.chart.chart();
        let mut bindings = Bindings::new();
        bindings.insert(chart.theta().clone(), h.clone());
        for lambda in 1..=chart.n() {
            bindings.insert(chart.theta_jet(lambda).clone(), h.diff(chart.x(lambda)));
        }
        HamiltonianSpec::new(&self.chart, self.density.subst(&bindings)?)
    }
}

/// One labeled equation, stored as lhs = rhs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub label: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Equation {
    pub fn new(label: impl Into<String>, lhs: Expr, rhs: Expr) -> Equation {
        Equation {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    /// Monic canonical residual: (lhs − rhs) rescaled so its leading
    /// coefficient is +1. Two equations are equivalent iff their residuals
    /// coincide.
    pub fn residual(&self) -> Expr {
        (&self.lhs - &self.rhs).monic()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A named system of equations on a chart.
///
/// System comparison is set comparison of monic canonical residuals, so
/// it is invariant under reordering, relabeling, sign flips, and overall
/// rational rescaling of individual equations.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    pub name: String,
    pub chart: Chart,
    pub equations: Vec<Equation>,
}

impl EquationSystem {
    pub fn new(name: impl Into<String>, chart: &Chart, equations: Vec<Equation>) -> Self {
        EquationSystem {
            name: name.into(),
            chart: chart.clone(),
            equations,
        }
    }

    pub fn residuals(&self) -> BTreeSet<Expr> {
        self.equations.iter().map(Equation::residual).collect()
    }

    /// Substitute throughout both sides of every equation.
    pub fn subst(&self, bindings: &Bindings) -> Result<EquationSystem, SymError> {
        let equations = self
            .equations
            .iter()
            .map(|eq| {
                Ok(Equation::new(
                    eq.label.clone(),
                    eq.lhs.subst(bindings)?,
                    eq.rhs.subst(bindings)?,
                ))
            })
            .collect::<Result<_, SymError>>()?;
        Ok(EquationSystem {
            name: self.name.clone(),
            chart: self.chart.clone(),
            equations,
        })
    }
}

impl PartialEq for EquationSystem {
    fn eq(&self, other: &Self) -> bool {
        self.residuals() == other.residuals()
    }
}

impl Eq for EquationSystem {}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.name)?;
        for eq in &self.equations {
            writeln!(f, "  {eq}")?;
        }
        Ok(())
    }
}
