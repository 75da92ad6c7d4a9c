//! Shared strategies for the property suites: random polynomial
//! expressions and forms over small composite-bundle charts.
#![allow(dead_code)] // each test target uses a subset

use proptest::prelude::*;

use jetham_core::excalc::Form;
use jetham_core::geom::Chart;
use jetham_core::symcore::{CoordinateId, Expr};

/// A random exact rational with small numerator and denominator.
pub fn arb_coeff() -> impl Strategy<Value = Expr> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::frac(n, d))
}

/// A random polynomial over the given atoms: up to `terms` terms, each a
/// product of up to three atom powers.
pub fn arb_poly(atoms: Vec<CoordinateId>, terms: usize) -> impl Strategy<Value = Expr> {
    let atom_count = atoms.len();
    prop::collection::vec(
        (
            arb_coeff(),
            prop::collection::vec((0..atom_count, 1u32..=2), 0..3),
        ),
        0..=terms,
    )
    .prop_map(move |raw_terms| {
        let mut acc = Expr::zero();
        for (coeff, factors) in raw_terms {
            let mut term = coeff;
            for (idx, exp) in factors {
                term = term * Expr::coord(&atoms[idx]).pow(exp);
            }
            acc = acc + term;
        }
        acc
    })
}

/// Every coordinate of the chart that can appear in a polynomial.
pub fn chart_atoms(chart: &Chart) -> Vec<CoordinateId> {
    chart.coordinates()
}

/// A random form of the given degree over a fixed set of word coordinates.
pub fn arb_form(
    word_coords: Vec<CoordinateId>,
    coeff_atoms: Vec<CoordinateId>,
    degree: usize,
) -> BoxedStrategy<Form> {
    if degree > word_coords.len() {
        return Just(Form::zero(degree)).boxed();
    }
    let indices: Vec<usize> = (0..word_coords.len()).collect();
    prop::collection::vec(
        (
            arb_poly(coeff_atoms, 2),
            proptest::sample::subsequence(indices, degree),
        ),
        0..=3,
    )
    .prop_map(move |raw| {
        let terms = raw
            .into_iter()
            .map(|(coeff, picks)| {
                let word: Vec<CoordinateId> =
                    picks.into_iter().map(|i| word_coords[i].clone()).collect();
                (coeff, word)
            })
            .collect();
        Form::from_terms(degree, terms)
    })
    .boxed()
}
