//! Charts of composite fibered bundles Y → Θ → X and their jet and
//! Legendre extensions.
//!
//! A chart owns the full coordinate inventory generated from (n, m, r):
//! base coordinates x^λ, the Θ fiber τ with its first jets τ_λ, fiber
//! coordinates y^i with symmetric jets y^i_α up to order r, optionally
//! momenta p^λ_i with their first jets, and declared parameters. Charts
//! are immutable; `prolong` returns an extended copy.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::excalc::{omega_lambda, top_form, Form};
use crate::symcore::{CoordResolver, CoordinateId, Expr, MultiIndex, Role};

use super::GeomError;

#[derive(Debug, PartialEq, Eq)]
struct ChartData {
    n: usize,
    m: usize,
    order: usize,
    with_momenta: bool,
    base: Vec<CoordinateId>,
    theta: CoordinateId,
    theta_jets: Vec<CoordinateId>,
    fibers: Vec<CoordinateId>,
    jets: BTreeMap<(u16, MultiIndex), CoordinateId>,
    momenta: Vec<Vec<CoordinateId>>,            // [λ-1][i-1]
    momentum_jets: Vec<Vec<Vec<CoordinateId>>>, // [λ-1][i-1][μ-1]
    params: Vec<CoordinateId>,
    by_name: BTreeMap<String, CoordinateId>,
}

/// Immutable chart handle; cloning is cheap.
#[derive(Clone, PartialEq, Eq)]
pub struct Chart {
    data: Arc<ChartData>,
}

/// Builder for [`Chart`]. Names default to `x` (or `x1..xn`), `y` (or
/// `y1..ym`), `tau`, and `p` with index decorations.
pub struct ChartBuilder {
    n: usize,
    m: usize,
    order: usize,
    with_momenta: bool,
    base_names: Option<Vec<String>>,
    fiber_names: Option<Vec<String>>,
    theta_name: String,
    momentum_stem: String,
    params: Vec<String>,
}

impl ChartBuilder {
    pub fn new(n: usize, m: usize) -> Self {
        ChartBuilder {
            n,
            m,
            order: 0,
            with_momenta: false,
            base_names: None,
            fiber_names: None,
            theta_name: "tau".to_string(),
            momentum_stem: "p".to_string(),
            params: Vec::new(),
        }
    }

    pub fn jet_order(mut self, r: usize) -> Self {
        self.order = r;
        self
    }

    pub fn with_momenta(mut self) -> Self {
        self.with_momenta = true;
        self
    }

    pub fn base_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.base_names = Some(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn fiber_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.fiber_names = Some(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn theta_name(mut self, name: impl Into<String>) -> Self {
        self.theta_name = name.into();
        self
    }

    pub fn parameters<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.params = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn build(self) -> Result<Chart, GeomError> {
        if self.n == 0 || self.m == 0 {
            return Err(GeomError::EmptyDimension);
        }
        let base_names = match self.base_names {
            Some(names) => {
                if names.len() != self.n {
                    return Err(GeomError::NameCountMismatch {
                        expected: self.n,
                        got: names.len(),
                    });
                }
                names
            }
            None => default_names("x", self.n),
        };
        let fiber_names = match self.fiber_names {
            Some(names) => {
                if names.len() != self.m {
                    return Err(GeomError::NameCountMismatch {
                        expected: self.m,
                        got: names.len(),
                    });
                }
                names
            }
            None => default_names("y", self.m),
        };

        // direction tokens used in jet subscripts: the base name for n = 1,
        // the direction index otherwise
        let tokens: Vec<String> = if self.n == 1 {
            vec![base_names[0].clone()]
        } else {
            (1..=self.n).map(|l| l.to_string()).collect()
        };

        let base: Vec<CoordinateId> = base_names
            .iter()
            .enumerate()
            .map(|(idx, name)| CoordinateId::base(name.clone(), (idx + 1) as u16))
            .collect();
        let theta = CoordinateId::theta(self.theta_name.clone());
        let theta_jets: Vec<CoordinateId> = (1..=self.n)
            .map(|l| {
                CoordinateId::theta_jet(
                    format!("{}_{}", self.theta_name, tokens[l - 1]),
                    self.theta_name.clone(),
                    l as u8,
                )
            })
            .collect();
        let fibers: Vec<CoordinateId> = fiber_names
            .iter()
            .enumerate()
            .map(|(idx, name)| CoordinateId::fiber(name.clone(), (idx + 1) as u16))
            .collect();

        let mut jets = BTreeMap::new();
        for (idx, stem) in fiber_names.iter().enumerate() {
            let i = (idx + 1) as u16;
            for k in 1..=self.order {
                for multi in multi_indices(self.n, k) {
                    let name = jet_name(stem, &multi, &tokens);
                    jets.insert(
                        (i, multi.clone()),
                        CoordinateId::jet(name, stem.clone(), i, multi),
                    );
                }
            }
        }

        let mut momenta = Vec::new();
        let mut momentum_jets = Vec::new();
        if self.with_momenta {
            for l in 1..=self.n {
                let mut row = Vec::new();
                let mut jet_row = Vec::new();
                for i in 1..=self.m {
                    let name = momentum_name(&self.momentum_stem, self.n, self.m, l, i);
                    row.push(CoordinateId::momentum(
                        name.clone(),
                        self.momentum_stem.clone(),
                        l as u16,
                        i as u16,
                    ));
                    let jet_cell: Vec<CoordinateId> = (1..=self.n)
                        .map(|mu| {
                            CoordinateId::momentum_jet(
                                format!("{}_{}", name, tokens[mu - 1]),
                                self.momentum_stem.clone(),
                                l as u16,
                                i as u16,
                                mu as u8,
                            )
                        })
                        .collect();
                    jet_row.push(jet_cell);
                }
                momenta.push(row);
                momentum_jets.push(jet_row);
            }
        }

        let params: Vec<CoordinateId> = self.params.iter().map(CoordinateId::parameter).collect();

        let mut by_name = BTreeMap::new();
        {
            let mut insert = |c: &CoordinateId| -> Result<(), GeomError> {
                if by_name.insert(c.name().to_string(), c.clone()).is_some() {
                    return Err(GeomError::DuplicateCoordinate(c.name().to_string()));
                }
                Ok(())
            };
            for c in &base {
                insert(c)?;
            }
            insert(&theta)?;
            for c in &theta_jets {
                insert(c)?;
            }
            for c in &fibers {
                insert(c)?;
            }
            for c in jets.values() {
                insert(c)?;
            }
            for row in &momenta {
                for c in row {
                    insert(c)?;
                }
            }
            for row in &momentum_jets {
                for cell in row {
                    for c in cell {
                        insert(c)?;
                    }
                }
            }
            for c in &params {
                insert(c)?;
            }
        }

        Ok(Chart {
            data: Arc::new(ChartData {
                n: self.n,
                m: self.m,
                order: self.order,
                with_momenta: self.with_momenta,
                base,
                theta,
                theta_jets,
                fibers,
                jets,
                momenta,
                momentum_jets,
                params,
                by_name,
            }),
        })
    }
}

fn default_names(stem: &str, count: usize) -> Vec<String> {
    if count == 1 {
        vec![stem.to_string()]
    } else {
        (1..=count).map(|i| format!("{stem}{i}")).collect()
    }
}

fn jet_name(stem: &str, multi: &MultiIndex, tokens: &[String]) -> String {
    let subscript: String = multi
        .directions()
        .iter()
        .map(|&d| tokens[(d - 1) as usize].as_str())
        .collect();
    format!("{stem}_{subscript}")
}

fn momentum_name(stem: &str, n: usize, m: usize, lambda: usize, i: usize) -> String {
    match (n, m) {
        (1, 1) => stem.to_string(),
        (_, 1) => format!("{stem}{lambda}"),
        (1, _) => format!("{stem}[{i}]"),
        _ => format!("{stem}[{lambda},{i}]"),
    }
}

/// All symmetric multi-indices of order `k` over `n` directions, in
/// lexicographic order of their sorted direction lists.
pub fn multi_indices(n: usize, k: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, k: usize, min_dir: u8, prefix: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
        if k == 0 {
            out.push(MultiIndex::new(prefix.clone()));
            return;
        }
        for d in min_dir..=(n as u8) {
            prefix.push(d);
            rec(n, k - 1, d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 1, &mut Vec::new(), &mut out);
    out
}

impl Chart {
    pub fn builder(n: usize, m: usize) -> ChartBuilder {
        ChartBuilder::new(n, m)
    }

    pub fn n(&self) -> usize {
        self.data.n
    }

    pub fn m(&self) -> usize {
        self.data.m
    }

    pub fn jet_order(&self) -> usize {
        self.data.order
    }

    pub fn has_momenta(&self) -> bool {
        self.data.with_momenta
    }

    /// Extend the jet inventory to order `r`; existing coordinates are
    /// unchanged.
    pub fn prolong(&self, r: usize) -> Result<Chart, GeomError> {
        if r < self.data.order {
            return Err(GeomError::ProlongBelowOrder {
                current: self.data.order,
                requested: r,
            });
        }
        if r == self.data.order {
            return Ok(self.clone());
        }
        let tokens: Vec<String> = if self.data.n == 1 {
            vec![self.data.base[0].name().to_string()]
        } else {
            (1..=self.data.n).map(|l| l.to_string()).collect()
        };
        let mut data = ChartData {
            n: self.data.n,
            m: self.data.m,
            order: r,
            with_momenta: self.data.with_momenta,
            base: self.data.base.clone(),
            theta: self.data.theta.clone(),
            theta_jets: self.data.theta_jets.clone(),
            fibers: self.data.fibers.clone(),
            jets: self.data.jets.clone(),
            momenta: self.data.momenta.clone(),
            momentum_jets: self.data.momentum_jets.clone(),
            params: self.data.params.clone(),
            by_name: self.data.by_name.clone(),
        };
        for (idx, fiber) in self.data.fibers.iter().enumerate() {
            let i = (idx + 1) as u16;
            let stem = fiber.name().to_string();
            for k in (self.data.order + 1)..=r {
                for multi in multi_indices(self.data.n, k) {
                    let name = jet_name(&stem, &multi, &tokens);
                    let coord = CoordinateId::jet(name.clone(), stem.clone(), i, multi.clone());
                    data.by_name.insert(name, coord.clone());
                    data.jets.insert((i, multi), coord);
                }
            }
        }
        Ok(Chart {
            data: Arc::new(data),
        })
    }

    pub fn base(&self) -> &[CoordinateId] {
        &self.data.base
    }

    pub fn x(&self, lambda: usize) -> &CoordinateId {
        &self.data.base[lambda - 1]
    }

    pub fn theta(&self) -> &CoordinateId {
        &self.data.theta
    }

    pub fn theta_jet(&self, lambda: usize) -> &CoordinateId {
        &self.data.theta_jets[lambda - 1]
    }

    pub fn theta_jets(&self) -> &[CoordinateId] {
        &self.data.theta_jets
    }

    pub fn fibers(&self) -> &[CoordinateId] {
        &self.data.fibers
    }

    pub fn y(&self, i: usize) -> &CoordinateId {
        &self.data.fibers[i - 1]
    }

    /// Jet coordinate y^i_α, if present in the inventory.
    pub fn jet(&self, i: usize, multi: &MultiIndex) -> Option<&CoordinateId> {
        if multi.is_empty() {
            return self.data.fibers.get(i - 1);
        }
        self.data.jets.get(&(i as u16, multi.clone()))
    }

    /// All jets y^i_α with 1 ≤ |α| ≤ r, in canonical order.
    pub fn jets(&self) -> impl Iterator<Item = &CoordinateId> {
        self.data.jets.values()
    }

    pub fn momentum(&self, lambda: usize, i: usize) -> Option<&CoordinateId> {
        self.data
            .momenta
            .get(lambda - 1)
            .and_then(|row| row.get(i - 1))
    }

    pub fn momentum_jet(&self, lambda: usize, i: usize, mu: usize) -> Option<&CoordinateId> {
        self.data
            .momentum_jets
            .get(lambda - 1)
            .and_then(|row| row.get(i - 1))
            .and_then(|cell| cell.get(mu - 1))
    }

    pub fn params(&self) -> &[CoordinateId] {
        &self.data.params
    }

    pub fn param(&self, name: &str) -> Option<&CoordinateId> {
        self.data.params.iter().find(|p| p.name() == name)
    }

    /// Every coordinate and parameter of the chart, in canonical order.
    pub fn coordinates(&self) -> Vec<CoordinateId> {
        let mut all: Vec<CoordinateId> = self.data.by_name.values().cloned().collect();
        all.sort();
        all
    }

    /// The base volume form ω = dx^1 ∧ … ∧ dx^n.
    pub fn omega(&self) -> Form {
        top_form(&self.data.base)
    }

    /// ω_λ = ∂_λ ⌋ ω.
    pub fn omega_lambda(&self, lambda: usize) -> Form {
        omega_lambda(&self.data.base, lambda)
    }

    /// The jet successor of a fiber-like coordinate in direction λ, when
    /// the inventory holds it: y^i_α ↦ y^i_{α+λ}, τ ↦ τ_λ, p^μ_i ↦
    /// p^μ_{i,λ}.
    pub fn jet_successor(&self, c: &CoordinateId, lambda: usize) -> Option<CoordinateId> {
        match c.role() {
            Role::YFiber | Role::Jet => {
                let next = c.multi_index().plus(lambda as u8);
                self.data.jets.get(&(c.fiber_index(), next)).cloned()
            }
            Role::ThetaFiber => self.data.theta_jets.get(lambda - 1).cloned(),
            Role::Momentum => self
                .momentum_jet(c.contra_index() as usize, c.fiber_index() as usize, lambda)
                .cloned(),
            _ => None,
        }
    }

    /// True when the coordinate is fiber-like and *could* have a jet
    /// successor (whether or not the chart holds it).
    pub fn is_jet_bearing(&self, c: &CoordinateId) -> bool {
        matches!(
            c.role(),
            Role::YFiber | Role::Jet | Role::ThetaFiber | Role::Momentum
        )
    }

    /// Expression helper: the coordinate as an expression.
    pub fn expr(&self, c: &CoordinateId) -> Expr {
        Expr::coord(c)
    }
}

impl CoordResolver for Chart {
    fn resolve(&self, name: &str) -> Option<CoordinateId> {
        self.data.by_name.get(name).cloned()
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Chart(n={}, m={}, r={}{})",
            self.data.n,
            self.data.m,
            self.data.order,
            if self.data.with_momenta {
                ", momenta"
            } else {
                ""
            }
        )
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_prolongation_counts() {
        let chart = Chart::builder(2, 1).build().unwrap();
        let j1 = chart.prolong(1).unwrap();
        assert_eq!(j1.jets().count(), 2); // y_1, y_2
        let j2 = j1.prolong(2).unwrap();
        assert_eq!(j2.jets().count(), 2 + 3); // + y_11, y_12, y_22
    }

    #[test]
    fn symmetric_jet_count_matches_stars_and_bars() {
        // independent enumeration oracle: multisets of size k from n
        fn multiset_count(n: usize, k: usize) -> usize {
            fn binom(a: usize, b: usize) -> usize {
                if b > a {
                    return 0;
                }
                let mut r = 1usize;
                for i in 0..b {
                    r = r * (a - i) / (i + 1);
                }
                r
            }
            binom(n + k - 1, k)
        }
        let chart = Chart::builder(3, 2).jet_order(2).build().unwrap();
        let second_order = chart.jets().filter(|c| c.jet_order() == 2).count();
        assert_eq!(second_order, 2 * multiset_count(3, 2));
        assert_eq!(second_order, 12);
    }

    #[test]
    fn prolong_below_order_is_rejected() {
        let chart = Chart::builder(2, 1).jet_order(2).build().unwrap();
        assert!(matches!(
            chart.prolong(1),
            Err(GeomError::ProlongBelowOrder { .. })
        ));
    }

    #[test]
    fn prolong_preserves_existing_coordinates() {
        let chart = Chart::builder(2, 1).jet_order(1).build().unwrap();
        let before: Vec<_> = chart.coordinates();
        let extended = chart.prolong(3).unwrap();
        for c in &before {
            assert_eq!(extended.resolve(c.name()).as_ref(), Some(c));
        }
    }

    #[test]
    fn jet_names_follow_direction_tokens() {
        let c1 = Chart::builder(1, 1).jet_order(2).build().unwrap();
        assert!(c1.resolve("y_x").is_some());
        assert!(c1.resolve("y_xx").is_some());
        let c2 = Chart::builder(2, 1).jet_order(2).build().unwrap();
        assert!(c2.resolve("y_12").is_some());
        assert!(c2.resolve("y_21").is_none()); // symmetric: stored sorted
    }

    #[test]
    fn momentum_naming_scheme() {
        let c = Chart::builder(1, 1).with_momenta().build().unwrap();
        assert!(c.resolve("p").is_some());
        assert!(c.resolve("p_x").is_some());
        let c = Chart::builder(2, 1).with_momenta().build().unwrap();
        assert!(c.resolve("p1").is_some());
        assert!(c.resolve("p2_1").is_some());
        let c = Chart::builder(2, 2).with_momenta().build().unwrap();
        assert!(c.resolve("p[1,2]").is_some());
        assert!(c.resolve("p[1,2]_2").is_some());
    }

    #[test]
    fn omega_contractions() {
        let chart = Chart::builder(2, 1).build().unwrap();
        let omega = chart.omega();
        assert_eq!(omega.degree(), 2);
        assert_eq!(chart.omega_lambda(1), Form::differential(chart.x(2)));
    }
}
