//! Ring and calculus laws of the canonical expression engine.

mod common;

use proptest::prelude::*;
use std::sync::LazyLock;

use common::{arb_poly, chart_atoms};
use jetham_core::geom::Chart;
use jetham_core::symcore::{embed, make_expr, Bindings, CoordinateId, Expr, FunctionSymbol};

static CHART: LazyLock<Chart> = LazyLock::new(|| {
    Chart::builder(2, 1)
        .jet_order(2)
        .with_momenta()
        .parameters(["mu"])
        .build()
        .unwrap()
});

fn atoms() -> Vec<CoordinateId> {
    chart_atoms(&CHART)
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent(e in arb_poly(atoms(), 4)) {
        let raw = embed(&e).unwrap();
        let again = make_expr(&raw, &*CHART).unwrap();
        prop_assert_eq!(e, again);
    }

    #[test]
    fn addition_commutes(a in arb_poly(atoms(), 4), b in arb_poly(atoms(), 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_distributes(
        a in arb_poly(atoms(), 3),
        b in arb_poly(atoms(), 3),
        c in arb_poly(atoms(), 3),
    ) {
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn multiplication_associates(
        a in arb_poly(atoms(), 2),
        b in arb_poly(atoms(), 2),
        c in arb_poly(atoms(), 2),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn leibniz_rule(
        a in arb_poly(atoms(), 3),
        b in arb_poly(atoms(), 3),
        idx in 0usize..8,
    ) {
        let all = atoms();
        let c = &all[idx % all.len()];
        prop_assert_eq!((&a * &b).diff(c), a.diff(c) * &b + &a * b.diff(c));
    }

    #[test]
    fn clairaut_partials_commute(
        e in arb_poly(atoms(), 4),
        i in 0usize..8,
        j in 0usize..8,
    ) {
        let all = atoms();
        let c1 = &all[i % all.len()];
        let c2 = &all[j % all.len()];
        prop_assert_eq!(e.diff(c1).diff(c2), e.diff(c2).diff(c1));
    }

    #[test]
    fn subst_commutes_with_diff_on_disjoint_bindings(
        e in arb_poly(atoms(), 3),
        replacement in arb_poly(vec![CHART.x(1).clone(), CHART.x(2).clone()], 2),
    ) {
        // bind τ to a base-only expression, differentiate along y
        let mut bindings = Bindings::new();
        bindings.insert(CHART.theta().clone(), replacement);
        let c = CHART.y(1);
        let lhs = e.subst(&bindings).unwrap().diff(c);
        let rhs = e.diff(c).subst(&bindings).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Brute-force polynomial arithmetic over name→exponent maps, independent
/// of the canonical engine, used as an expansion oracle.
mod naive {
    use num_rational::BigRational;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    pub type Poly = BTreeMap<BTreeMap<String, u32>, BigRational>;

    pub fn constant(r: BigRational) -> Poly {
        let mut p = Poly::new();
        if !r.is_zero() {
            p.insert(BTreeMap::new(), r);
        }
        p
    }

    pub fn var(name: &str) -> Poly {
        let mut mono = BTreeMap::new();
        mono.insert(name.to_string(), 1);
        let mut p = Poly::new();
        p.insert(mono, BigRational::from_integer(1.into()));
        p
    }

    pub fn add(a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (mono, coeff) in b {
            let entry = out.entry(mono.clone()).or_insert_with(BigRational::zero);
            *entry += coeff;
            if entry.is_zero() {
                out.remove(mono);
            }
        }
        out
    }

    pub fn neg(a: &Poly) -> Poly {
        a.iter().map(|(m, c)| (m.clone(), -c)).collect()
    }

    pub fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let mut mono = ma.clone();
                for (name, exp) in mb {
                    *mono.entry(name.clone()).or_insert(0) += exp;
                }
                let entry = out.entry(mono.clone()).or_insert_with(BigRational::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    out.remove(&mono);
                }
            }
        }
        out
    }

    pub fn pow(a: &Poly, e: u32) -> Poly {
        let mut out = constant(BigRational::from_integer(1.into()));
        for _ in 0..e {
            out = mul(&out, a);
        }
        out
    }
}

fn naive_of_raw(raw: &jetham_core::symcore::RawExpr) -> naive::Poly {
    use jetham_core::symcore::RawExpr;
    use num_rational::BigRational;
    match raw {
        RawExpr::Int(n) => naive::constant(BigRational::from_integer((*n).into())),
        RawExpr::Name(name) => naive::var(name),
        RawExpr::Add(a, b) => naive::add(&naive_of_raw(a), &naive_of_raw(b)),
        RawExpr::Sub(a, b) => naive::add(&naive_of_raw(a), &naive::neg(&naive_of_raw(b))),
        RawExpr::Mul(a, b) => naive::mul(&naive_of_raw(a), &naive_of_raw(b)),
        RawExpr::Div(..) => unreachable!("generator emits no division"),
        RawExpr::Neg(a) => naive::neg(&naive_of_raw(a)),
        RawExpr::Pow(a, e) => naive::pow(&naive_of_raw(a), *e),
    }
}

fn naive_of_expr(e: &Expr) -> naive::Poly {
    let mut out = naive::Poly::new();
    for (coeff, mono) in e.terms() {
        let names: std::collections::BTreeMap<String, u32> = mono
            .factors()
            .iter()
            .map(|(atom, exp)| match atom {
                jetham_core::symcore::Atom::Coord(c) => (c.name().to_string(), *exp),
                jetham_core::symcore::Atom::Func(_) => unreachable!("polynomial atoms only"),
            })
            .collect();
        out.insert(names, coeff.clone());
    }
    out
}

fn arb_raw() -> impl Strategy<Value = jetham_core::symcore::RawExpr> {
    use jetham_core::symcore::RawExpr;
    let leaf = prop_oneof![
        (-5i64..=5).prop_map(RawExpr::Int),
        prop_oneof![Just("x1"), Just("x2"), Just("y"), Just("tau")].prop_map(RawExpr::name),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| RawExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| RawExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| RawExpr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| RawExpr::Neg(Box::new(a))),
            (inner, 0u32..=3).prop_map(|(a, e)| RawExpr::Pow(Box::new(a), e)),
        ]
    })
}

proptest! {
    /// The canonical engine agrees with brute-force expansion, e.g.
    /// (y+x)² − y² − 2xy = x².
    #[test]
    fn canonical_expansion_matches_naive_oracle(raw in arb_raw()) {
        let canonical = make_expr(&raw, &*CHART).unwrap();
        prop_assert_eq!(naive_of_expr(&canonical), naive_of_raw(&raw));
    }
}

#[test]
fn binomial_identity_against_oracle() {
    use jetham_core::symcore::RawExpr;
    // (y+x1)^2 - y^2 - 2*x1*y
    let raw = RawExpr::Sub(
        Box::new(RawExpr::Sub(
            Box::new(RawExpr::Pow(
                Box::new(RawExpr::Add(
                    Box::new(RawExpr::name("y")),
                    Box::new(RawExpr::name("x1")),
                )),
                2,
            )),
            Box::new(RawExpr::Pow(Box::new(RawExpr::name("y")), 2)),
        )),
        Box::new(RawExpr::Mul(
            Box::new(RawExpr::Int(2)),
            Box::new(RawExpr::Mul(
                Box::new(RawExpr::name("x1")),
                Box::new(RawExpr::name("y")),
            )),
        )),
    );
    let oracle = naive_of_raw(&raw);
    assert_eq!(oracle, naive::pow(&naive::var("x1"), 2));
    let canonical = make_expr(&raw, &*CHART).unwrap();
    assert_eq!(canonical, Expr::coord(CHART.x(1)).pow(2));
}

#[test]
fn clairaut_holds_through_function_symbols() {
    let chart = &*CHART;
    let h = FunctionSymbol::new(
        "H",
        vec![chart.y(1).clone(), chart.momentum(1, 1).unwrap().clone()],
    );
    let e = h.apply() * Expr::coord(chart.y(1)).pow(2);
    let a = chart.y(1);
    let b = chart.momentum(1, 1).unwrap();
    assert_eq!(e.diff(a).diff(b), e.diff(b).diff(a));
}
