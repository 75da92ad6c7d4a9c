//! Connections as component tables, sections, composite and pull-back
//! connections, and the vertical covariant differential.

use std::collections::BTreeMap;
use std::fmt;

use crate::excalc::{Form, VectorField};
use crate::symcore::{Bindings, CoordinateId, Expr, Role};

use super::chart::Chart;
use super::jets::check_base_only;
use super::GeomError;

/// The fibrations of the composite picture a connection can live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fibration {
    /// Y → X with fiber coordinates (τ, y^i).
    YOverX,
    /// Y → Θ with fiber coordinates y^i over base (x^λ, τ).
    YOverTheta,
    /// Θ → X with fiber coordinate τ.
    ThetaOverX,
    /// Π_Θ → X with fiber coordinates (τ, y^i, p^λ_i).
    PiOverX,
    /// Π_Θ → Y with fiber coordinates p^λ_i over base (x^λ, τ, y^i).
    PiOverY,
    /// The restricted subbundle Y_h → X with fiber coordinates y^i.
    YhOverX,
}

impl Fibration {
    /// Fiber coordinates of the fibration within a chart.
    pub fn fiber_coords(self, chart: &Chart) -> Result<Vec<CoordinateId>, GeomError> {
        let mut out = Vec::new();
        match self {
            Fibration::YOverX => {
                out.push(chart.theta().clone());
                out.extend(chart.fibers().iter().cloned());
            }
            Fibration::YOverTheta | Fibration::YhOverX => {
                out.extend(chart.fibers().iter().cloned());
            }
            Fibration::ThetaOverX => out.push(chart.theta().clone()),
            Fibration::PiOverX => {
                out.push(chart.theta().clone());
                out.extend(chart.fibers().iter().cloned());
                out.extend(momenta(chart)?);
            }
            Fibration::PiOverY => out.extend(momenta(chart)?),
        }
        Ok(out)
    }

    /// Base coordinates of the fibration within a chart.
    pub fn base_coords(self, chart: &Chart) -> Vec<CoordinateId> {
        let mut out: Vec<CoordinateId> = chart.base().to_vec();
        match self {
            Fibration::YOverTheta => out.push(chart.theta().clone()),
            Fibration::PiOverY => {
                out.push(chart.theta().clone());
                out.extend(chart.fibers().iter().cloned());
            }
            _ => {}
        }
        out
    }

    /// Coordinates of the total space (allowed support for components).
    fn total_coords(self, chart: &Chart) -> Result<Vec<CoordinateId>, GeomError> {
        let mut out = self.base_coords(chart);
        out.extend(self.fiber_coords(chart)?);
        Ok(out)
    }
}

fn momenta(chart: &Chart) -> Result<Vec<CoordinateId>, GeomError> {
    if !chart.has_momenta() {
        return Err(GeomError::MomentaRequired);
    }
    let mut out = Vec::new();
    for l in 1..=chart.n() {
        for i in 1..=chart.m() {
            out.push(chart.momentum(l, i).expect("momenta present").clone());
        }
    }
    Ok(out)
}

/// A connection stored as its component table Γ^a_μ, keyed by
/// (fiber coordinate, base coordinate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    chart: Chart,
    fibration: Fibration,
    comps: BTreeMap<(CoordinateId, CoordinateId), Expr>,
}

impl Connection {
    /// Build and validate a connection: the table must cover exactly the
    /// fiber×base pairs of the fibration, and every component may only
    /// mention total-space coordinates (and parameters).
    pub fn new(
        chart: &Chart,
        fibration: Fibration,
        comps: BTreeMap<(CoordinateId, CoordinateId), Expr>,
    ) -> Result<Connection, GeomError> {
        let fibers = fibration.fiber_coords(chart)?;
        let bases = fibration.base_coords(chart);
        let mut full = BTreeMap::new();
        for f in &fibers {
            for b in &bases {
                let key = (f.clone(), b.clone());
                let value = comps.get(&key).cloned().unwrap_or_else(Expr::zero);
                full.insert(key, value);
            }
        }
        for key in comps.keys() {
            if !full.contains_key(key) {
                return Err(GeomError::ComponentTableMismatch {
                    fiber: key.0.name().to_string(),
                    base: key.1.name().to_string(),
                });
            }
        }
        let allowed = fibration.total_coords(chart)?;
        for ((f, b), e) in &full {
            for c in e.support() {
                if c.role() != Role::Parameter && !allowed.contains(&c) {
                    return Err(GeomError::ComponentSupport {
                        fiber: f.name().to_string(),
                        base: b.name().to_string(),
                        offending: c.name().to_string(),
                    });
                }
            }
        }
        Ok(Connection {
            chart: chart.clone(),
            fibration,
            comps: full,
        })
    }

    pub fn zero(chart: &Chart, fibration: Fibration) -> Result<Connection, GeomError> {
        Connection::new(chart, fibration, BTreeMap::new())
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn fibration(&self) -> Fibration {
        self.fibration
    }

    pub fn component(&self, fiber: &CoordinateId, base: &CoordinateId) -> Expr {
        self.comps
            .get(&(fiber.clone(), base.clone()))
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    pub fn components(&self) -> &BTreeMap<(CoordinateId, CoordinateId), Expr> {
        &self.comps
    }

    /// The horizontal lift v_λ = ∂_λ + Γ^a_λ ∂_a of the base direction λ.
    /// Realizes the horizontal tangent-valued 1-form component by
    /// component; pairing v_λ with dx^μ gives δ^μ_λ.
    pub fn horizontal_lift(&self, lambda: usize) -> VectorField {
        let base = self.chart.x(lambda);
        let mut v = VectorField::basis(base);
        for ((fiber, b), e) in &self.comps {
            if b == base && !e.is_zero() {
                v.set(fiber.clone(), e.clone());
            }
        }
        v
    }

    /// Substitute expressions into every component.
    pub fn map_components(
        &self,
        fibration: Fibration,
        f: impl Fn(&CoordinateId, &CoordinateId, &Expr) -> Expr,
    ) -> Result<Connection, GeomError> {
        let mut comps = BTreeMap::new();
        for ((fiber, base), e) in &self.comps {
            comps.insert((fiber.clone(), base.clone()), f(fiber, base, e));
        }
        Connection::new(&self.chart, fibration, comps)
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((fiber, base), e) in &self.comps {
            if e.is_zero() {
                continue;
            }
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "Γ[{fiber},{base}] = {e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// What a section spec assigns: the fibers of a bundle, or the first-jet
/// coordinates over a bundle's total space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionTarget {
    Bundle(Fibration),
    FirstJet(Fibration),
}

/// A section given by polynomial coordinate assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSpec {
    target: SectionTarget,
    assigns: BTreeMap<CoordinateId, Expr>,
}

impl SectionSpec {
    /// A section of a bundle: assigns every fiber coordinate an expression
    /// in the base coordinates of the fibration.
    pub fn bundle(
        chart: &Chart,
        fibration: Fibration,
        assigns: BTreeMap<CoordinateId, Expr>,
    ) -> Result<SectionSpec, GeomError> {
        let fibers = fibration.fiber_coords(chart)?;
        let bases = fibration.base_coords(chart);
        let mut full = BTreeMap::new();
        for f in &fibers {
            let e = assigns.get(f).cloned().unwrap_or_else(Expr::zero);
            for c in e.support() {
                if c.role() != Role::Parameter && !bases.contains(&c) {
                    return Err(GeomError::SectionSupport {
                        fiber: f.name().to_string(),
                        offending: c.name().to_string(),
                    });
                }
            }
            full.insert(f.clone(), e);
        }
        for key in assigns.keys() {
            if !full.contains_key(key) {
                return Err(GeomError::SectionAssignsNonFiber(key.name().to_string()));
            }
        }
        Ok(SectionSpec {
            target: SectionTarget::Bundle(fibration),
            assigns: full,
        })
    }

    /// The section of Θ → X given by τ = h(x).
    pub fn theta_section(chart: &Chart, h: Expr) -> Result<SectionSpec, GeomError> {
        check_base_only(chart, &h)?;
        let mut assigns = BTreeMap::new();
        assigns.insert(chart.theta().clone(), h);
        SectionSpec::bundle(chart, Fibration::ThetaOverX, assigns)
    }

    pub fn target(&self) -> SectionTarget {
        self.target
    }

    pub fn assignment(&self, fiber: &CoordinateId) -> Expr {
        self.assigns.get(fiber).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn assignments(&self) -> &BTreeMap<CoordinateId, Expr> {
        &self.assigns
    }

    /// The assignments as substitution bindings.
    pub fn bindings(&self) -> Bindings {
        self.assigns.clone()
    }
}

/// The section of J_1 → total space corresponding to a connection: each
/// order-1 jet coordinate is assigned the matching component.
pub fn connection_to_section(gamma: &Connection) -> Result<SectionSpec, GeomError> {
    let chart = gamma.chart();
    let fibers = gamma.fibration().fiber_coords(chart)?;
    let bases = gamma.fibration().base_coords(chart);
    let mut assigns = BTreeMap::new();
    for f in &fibers {
        for (idx, b) in bases.iter().enumerate() {
            // the jet coordinate paired with (f, b); only base directions of
            // X carry jets in the inventory
            if b.role() != Role::Base {
                return Err(GeomError::NonJetFibration(format!(
                    "{:?}",
                    gamma.fibration()
                )));
            }
            let lambda = idx + 1;
            let jet = chart
                .jet_successor(f, lambda)
                .ok_or_else(|| GeomError::MissingJet {
                    coordinate: f.name().to_string(),
                    direction: lambda,
                })?;
            assigns.insert(jet, gamma.component(f, b));
        }
    }
    Ok(SectionSpec {
        target: SectionTarget::FirstJet(gamma.fibration()),
        assigns,
    })
}

/// Inverse of [`connection_to_section`].
pub fn section_to_connection(
    chart: &Chart,
    fibration: Fibration,
    section: &SectionSpec,
) -> Result<Connection, GeomError> {
    let SectionTarget::FirstJet(f) = section.target() else {
        return Err(GeomError::NonJetFibration("bundle section".to_string()));
    };
    if f != fibration {
        return Err(GeomError::NonJetFibration(format!("{f:?}")));
    }
    let fibers = fibration.fiber_coords(chart)?;
    let bases = fibration.base_coords(chart);
    let mut comps = BTreeMap::new();
    for fiber in &fibers {
        for (idx, b) in bases.iter().enumerate() {
            let jet = chart
                .jet_successor(fiber, idx + 1)
                .ok_or_else(|| GeomError::MissingJet {
                    coordinate: fiber.name().to_string(),
                    direction: idx + 1,
                })?;
            comps.insert((fiber.clone(), b.clone()), section.assignment(&jet));
        }
    }
    Connection::new(chart, fibration, comps)
}

/// The composite connection γ = 𝔥_Θ ∘ Γ on Y → X:
/// γ^τ_λ = Γ^τ_λ and γ^i_λ = H^i_λ + H^i_τ Γ^τ_λ.
pub fn composite_connection(
    h_theta: &Connection,
    gamma: &Connection,
) -> Result<Connection, GeomError> {
    expect_fibration(h_theta, Fibration::YOverTheta)?;
    expect_fibration(gamma, Fibration::ThetaOverX)?;
    if h_theta.chart() != gamma.chart() {
        return Err(GeomError::ChartMismatch);
    }
    let chart = h_theta.chart();
    let tau = chart.theta();
    let mut comps = BTreeMap::new();
    for lambda in 1..=chart.n() {
        let x = chart.x(lambda);
        let gamma_tau = gamma.component(tau, x);
        comps.insert((tau.clone(), x.clone()), gamma_tau.clone());
        for i in 1..=chart.m() {
            let y = chart.y(i);
            let value = h_theta.component(y, x) + h_theta.component(y, tau) * &gamma_tau;
            comps.insert((y.clone(), x.clone()), value);
        }
    }
    Connection::new(chart, Fibration::YOverX, comps)
}

/// The pull-back connection 𝔥_h on Y_h → X induced by a section h of
/// Θ → X: (𝔥_h)^i_λ = H^i_λ|_{τ=h} + H^i_τ|_{τ=h} ∂_λ h.
pub fn pullback_connection(h_theta: &Connection, h: &SectionSpec) -> Result<Connection, GeomError> {
    expect_fibration(h_theta, Fibration::YOverTheta)?;
    let chart = h_theta.chart();
    let tau = chart.theta();
    expect_theta_section(h)?;
    let bindings = h.bindings();
    let h_expr = h.assignment(tau);
    let mut comps = BTreeMap::new();
    for lambda in 1..=chart.n() {
        let x = chart.x(lambda);
        for i in 1..=chart.m() {
            let y = chart.y(i);
            let value = h_theta.component(y, x).subst(&bindings)?
                + h_theta.component(y, tau).subst(&bindings)? * h_expr.diff(x);
            comps.insert((y.clone(), x.clone()), value);
        }
    }
    Connection::new(chart, Fibration::YhOverX, comps)
}

/// Restrict a connection on Y → X to the subbundle Y_h → X: substitute
/// τ = h(x) into the y-components and drop the τ row.
pub fn restrict_to_subbundle(gamma: &Connection, h: &SectionSpec) -> Result<Connection, GeomError> {
    expect_fibration(gamma, Fibration::YOverX)?;
    expect_theta_section(h)?;
    let chart = gamma.chart();
    let bindings = h.bindings();
    let mut comps = BTreeMap::new();
    for lambda in 1..=chart.n() {
        let x = chart.x(lambda);
        for i in 1..=chart.m() {
            let y = chart.y(i);
            comps.insert(
                (y.clone(), x.clone()),
                gamma.component(y, x).subst(&bindings)?,
            );
        }
    }
    Connection::new(chart, Fibration::YhOverX, comps)
}

/// True iff ∂_λ h^a = Γ^a_λ ∘ h for every fiber coordinate and direction.
pub fn is_integral_section(h: &SectionSpec, gamma: &Connection) -> Result<bool, GeomError> {
    Ok(integrality_defect(h, gamma)?.is_empty())
}

/// The nonzero defects ∂_λ h^a − Γ^a_λ ∘ h, keyed by (fiber, base).
pub fn integrality_defect(
    h: &SectionSpec,
    gamma: &Connection,
) -> Result<BTreeMap<(CoordinateId, CoordinateId), Expr>, GeomError> {
    let SectionTarget::Bundle(fibration) = h.target() else {
        return Err(GeomError::NonJetFibration("jet section".to_string()));
    };
    if fibration != gamma.fibration() {
        return Err(GeomError::FibrationMismatch);
    }
    let chart = gamma.chart();
    let bindings = h.bindings();
    let bases = fibration.base_coords(chart);
    let mut out = BTreeMap::new();
    for fiber in fibration.fiber_coords(chart)? {
        for b in &bases {
            let lhs = h.assignment(&fiber).diff(b);
            let rhs = gamma.component(&fiber, b).subst(&bindings)?;
            let defect = lhs - rhs;
            if !defect.is_zero() {
                out.insert((fiber.clone(), b.clone()), defect);
            }
        }
    }
    Ok(out)
}

/// The vertical covariant differential of a connection on Y → Θ:
/// Δ = dx^λ ⊗ (y^i_λ − H^i_λ − H^i_τ τ_λ) ∂̄_i, stored as one horizontal
/// 1-form per V*_Θ fiber index i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalDifferential {
    chart: Chart,
    comps: Vec<Form>,
}

impl VerticalDifferential {
    pub fn components(&self) -> &[Form] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Form {
        &self.comps[i - 1]
    }

    /// Restrict along a section h of Θ → X: τ ↦ h, τ_λ ↦ ∂_λ h.
    pub fn restrict(&self, h: &SectionSpec) -> Result<VerticalDifferential, GeomError> {
        expect_theta_section(h)?;
        let chart = &self.chart;
        let tau = chart.theta();
        let h_expr = h.assignment(tau);
        let mut bindings = h.bindings();
        for lambda in 1..=chart.n() {
            bindings.insert(
                chart.theta_jet(lambda).clone(),
                h_expr.diff(chart.x(lambda)),
            );
        }
        let comps = self
            .comps
            .iter()
            .map(|f| f.subst_coefficients(&bindings))
            .collect::<Result<_, _>>()?;
        Ok(VerticalDifferential {
            chart: chart.clone(),
            comps,
        })
    }
}

pub fn vertical_covariant_differential(
    h_theta: &Connection,
) -> Result<VerticalDifferential, GeomError> {
    expect_fibration(h_theta, Fibration::YOverTheta)?;
    let chart = h_theta.chart();
    if chart.jet_order() < 1 {
        return Err(GeomError::ChartOrderInsufficient {
            required: 1,
            actual: chart.jet_order(),
        });
    }
    let tau = chart.theta();
    let mut comps = Vec::with_capacity(chart.m());
    for i in 1..=chart.m() {
        let y = chart.y(i);
        let mut form = Form::zero(1);
        for lambda in 1..=chart.n() {
            let x = chart.x(lambda);
            let jet = chart
                .jet_successor(y, lambda)
                .ok_or_else(|| GeomError::MissingJet {
                    coordinate: y.name().to_string(),
                    direction: lambda,
                })?;
            let coeff = Expr::coord(&jet)
                - h_theta.component(y, x)
                - h_theta.component(y, tau) * Expr::coord(chart.theta_jet(lambda));
            form = &form + &Form::differential(x).scale(&coeff);
        }
        comps.push(form);
    }
    Ok(VerticalDifferential {
        chart: chart.clone(),
        comps,
    })
}

fn expect_fibration(c: &Connection, f: Fibration) -> Result<(), GeomError> {
    if c.fibration() != f {
        return Err(GeomError::FibrationMismatch);
    }
    Ok(())
}

fn expect_theta_section(h: &SectionSpec) -> Result<(), GeomError> {
    match h.target() {
        SectionTarget::Bundle(Fibration::ThetaOverX) => Ok(()),
        _ => Err(GeomError::FibrationMismatch),
    }
}
