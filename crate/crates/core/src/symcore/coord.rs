//! Coordinate identities for composite-bundle charts.
//!
//! A coordinate is identified by its display name plus structural data: a
//! role (which stratum of the bundle it belongs to), an optional fiber
//! index, a symmetric base multi-index for jets, and a contravariant base
//! index for momenta. The structural data drives the fixed total order
//! used everywhere for canonical sorting.

use std::fmt;

/// Which stratum of the composite bundle a coordinate lives on.
///
/// The discriminant order is the role rank used by the global atom order:
/// base coordinates sort first, parameters last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// Base coordinate x^λ.
    Base,
    /// Fiber coordinate τ of the line bundle Θ → X.
    ThetaFiber,
    /// First jet τ_λ of the Θ fiber.
    ThetaJet,
    /// Fiber coordinate y^i of Y → Θ.
    YFiber,
    /// Jet coordinate y^i_α with |α| ≥ 1.
    Jet,
    /// Momentum coordinate p^λ_i.
    Momentum,
    /// First jet p^λ_{i,μ} of a momentum.
    MomentumJet,
    /// Declared scalar parameter (a constant for exterior calculus).
    Parameter,
}

/// Symmetric multi-index, stored as the sorted list of base directions
/// with repetition. `[1, 1, 2]` is ∂²/∂x¹∂x¹ ∂/∂x², order 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Build from an unsorted list of directions (1-based).
    pub fn new(mut dirs: Vec<u8>) -> Self {
        dirs.sort_unstable();
        MultiIndex(dirs)
    }

    pub fn single(dir: u8) -> Self {
        MultiIndex(vec![dir])
    }

    /// |α|, the jet order.
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn directions(&self) -> &[u8] {
        &self.0
    }

    /// α + λ: the successor multi-index one order up in direction `dir`.
    pub fn plus(&self, dir: u8) -> Self {
        let mut dirs = self.0.clone();
        let pos = dirs.partition_point(|&d| d <= dir);
        dirs.insert(pos, dir);
        MultiIndex(dirs)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // graded: lower jet order sorts first
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A chart coordinate (or declared parameter).
///
/// Equality and ordering are structural; the display name is generated by
/// the chart that owns the coordinate and is unique within it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordinateId {
    name: String,
    stem: String,
    role: Role,
    fiber: u16,
    multi: MultiIndex,
    contra: u16,
}

impl CoordinateId {
    pub fn base(name: impl Into<String>, lambda: u16) -> Self {
        let name = name.into();
        CoordinateId {
            stem: name.clone(),
            name,
            role: Role::Base,
            fiber: 0,
            multi: MultiIndex::empty(),
            contra: lambda,
        }
    }

    pub fn theta(name: impl Into<String>) -> Self {
        let name = name.into();
        CoordinateId {
            stem: name.clone(),
            name,
            role: Role::ThetaFiber,
            fiber: 0,
            multi: MultiIndex::empty(),
            contra: 0,
        }
    }

    pub fn theta_jet(name: impl Into<String>, stem: impl Into<String>, lambda: u8) -> Self {
        CoordinateId {
            name: name.into(),
            stem: stem.into(),
            role: Role::ThetaJet,
            fiber: 0,
            multi: MultiIndex::single(lambda),
            contra: 0,
        }
    }

    pub fn fiber(name: impl Into<String>, i: u16) -> Self {
        let name = name.into();
        CoordinateId {
            stem: name.clone(),
            name,
            role: Role::YFiber,
            fiber: i,
            multi: MultiIndex::empty(),
            contra: 0,
        }
    }

    pub fn jet(
        name: impl Into<String>,
        stem: impl Into<String>,
        i: u16,
        multi: MultiIndex,
    ) -> Self {
        debug_assert!(multi.order() >= 1);
        CoordinateId {
            name: name.into(),
            stem: stem.into(),
            role: Role::Jet,
            fiber: i,
            multi,
            contra: 0,
        }
    }

    pub fn momentum(name: impl Into<String>, stem: impl Into<String>, lambda: u16, i: u16) -> Self {
        CoordinateId {
            name: name.into(),
            stem: stem.into(),
            role: Role::Momentum,
            fiber: i,
            multi: MultiIndex::empty(),
            contra: lambda,
        }
    }

    pub fn momentum_jet(
        name: impl Into<String>,
        stem: impl Into<String>,
        lambda: u16,
        i: u16,
        mu: u8,
    ) -> Self {
        CoordinateId {
            name: name.into(),
            stem: stem.into(),
            role: Role::MomentumJet,
            fiber: i,
            multi: MultiIndex::single(mu),
            contra: lambda,
        }
    }

    pub fn parameter(name: impl Into<String>) -> Self {
        let name = name.into();
        CoordinateId {
            stem: name.clone(),
            name,
            role: Role::Parameter,
            fiber: 0,
            multi: MultiIndex::empty(),
            contra: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stem(&self) -> &str {
        &self.stem
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Fiber index i (1-based), 0 when not applicable.
    pub fn fiber_index(&self) -> u16 {
        self.fiber
    }

    pub fn multi_index(&self) -> &MultiIndex {
        &self.multi
    }

    /// Contravariant base index λ (1-based), 0 when not applicable.
    pub fn contra_index(&self) -> u16 {
        self.contra
    }

    /// Jet order of the coordinate (0 for non-jets).
    pub fn jet_order(&self) -> usize {
        self.multi.order()
    }

    /// True for roles that are constants under the exterior differential.
    pub fn is_parameter(&self) -> bool {
        self.role == Role::Parameter
    }

    fn sort_key(&self) -> (Role, u16, &MultiIndex, u16, &str, &str) {
        (
            self.role,
            self.fiber,
            &self.multi,
            self.contra,
            &self.name,
            &self.stem,
        )
    }
}

impl PartialOrd for CoordinateId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CoordinateId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for CoordinateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
