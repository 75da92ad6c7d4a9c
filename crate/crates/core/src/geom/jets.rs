//! Total derivatives, contact forms, and the horizontal/vertical
//! splitting of 1-forms on jet charts.

use crate::excalc::Form;
use crate::symcore::{Bindings, CoordinateId, Expr, Role};

use super::chart::Chart;
use super::GeomError;

/// The total derivative 𝒟_λ e = ∂_λ e + Σ c_{α+λ} ∂e/∂c over all
/// jet-bearing chart coordinates (τ, y-jets, momenta).
///
/// No automatic prolongation happens: if e depends on a coordinate whose
/// successor jet is missing from the chart, the call fails.
pub fn total_derivative(chart: &Chart, lambda: usize, e: &Expr) -> Result<Expr, GeomError> {
    let mut out = e.diff(chart.x(lambda));
    for c in e.support() {
        if !chart.is_jet_bearing(&c) && !matches!(c.role(), Role::Base | Role::Parameter) {
            // τ_λ, momentum jets: coordinates with no successor in any chart
            let partial = e.diff(&c);
            if !partial.is_zero() {
                return Err(GeomError::MissingJet {
                    coordinate: c.name().to_string(),
                    direction: lambda,
                });
            }
            continue;
        }
        if chart.is_jet_bearing(&c) {
            let partial = e.diff(&c);
            if partial.is_zero() {
                continue;
            }
            match chart.jet_successor(&c, lambda) {
                Some(next) => out = out + Expr::coord(&next) * partial,
                None => {
                    return Err(GeomError::MissingJet {
                        coordinate: c.name().to_string(),
                        direction: lambda,
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Contact forms ϑ^j_α = dy^j_α − y^j_{α+λ} dx^λ for all 0 ≤ |α| ≤ r−1,
/// in canonical coordinate order. The τ contact form is available through
/// [`contact_form`] directly.
pub fn contact_forms(chart: &Chart) -> Result<Vec<Form>, GeomError> {
    if chart.jet_order() < 1 {
        return Err(GeomError::ChartOrderInsufficient {
            required: 1,
            actual: chart.jet_order(),
        });
    }
    let mut out = Vec::new();
    for i in 1..=chart.m() {
        out.push(contact_form(chart, chart.y(i))?);
    }
    for jet in chart.jets() {
        if jet.jet_order() < chart.jet_order() {
            out.push(contact_form(chart, jet)?);
        }
    }
    Ok(out)
}

/// The single contact form of a fiber-like coordinate.
pub fn contact_form(chart: &Chart, c: &CoordinateId) -> Result<Form, GeomError> {
    let mut form = Form::differential(c);
    for lambda in 1..=chart.n() {
        let next = chart
            .jet_successor(c, lambda)
            .ok_or_else(|| GeomError::MissingJet {
                coordinate: c.name().to_string(),
                direction: lambda,
            })?;
        form = &form - &Form::differential(chart.x(lambda)).scale(&Expr::coord(&next));
    }
    Ok(form)
}

/// Split a 1-form into its horizontal part (span of dx^λ, coefficients by
/// 𝒟_λ-contraction) and its contact part. The two parts sum back to the
/// input exactly.
pub fn horizontal_vertical_split(chart: &Chart, a: &Form) -> Result<(Form, Form), GeomError> {
    if a.degree() != 1 {
        return Err(GeomError::SplitDegree(a.degree()));
    }
    let mut horizontal = Form::zero(1);
    let mut vertical = Form::zero(1);
    for (coeff, word) in a.terms() {
        let c = &word[0];
        match c.role() {
            Role::Base => {
                horizontal = &horizontal + &Form::differential(c).scale(coeff);
            }
            Role::Parameter => return Err(GeomError::ParameterDifferential(c.name().to_string())),
            _ => {
                // dc = c_{+λ} dx^λ + ϑ_c
                for lambda in 1..=chart.n() {
                    let next =
                        chart
                            .jet_successor(c, lambda)
                            .ok_or_else(|| GeomError::MissingJet {
                                coordinate: c.name().to_string(),
                                direction: lambda,
                            })?;
                    horizontal = &horizontal
                        + &Form::differential(chart.x(lambda))
                            .scale(&(coeff * &Expr::coord(&next)));
                }
                vertical = &vertical + &contact_form(chart, c)?.scale(coeff);
            }
        }
    }
    Ok((horizontal, vertical))
}

/// Bindings sending each jet coordinate of the chart to the corresponding
/// partial derivative of a polynomial section y^i = s^i(x) (and τ to
/// `theta_section` with its derivatives, when given). This is the
/// holonomic prolongation used to restrict forms and equations to
/// concrete sections.
pub fn holonomic_bindings(
    chart: &Chart,
    sections: &[Expr],
    theta_section: Option<&Expr>,
) -> Result<Bindings, GeomError> {
    if sections.len() != chart.m() {
        return Err(GeomError::NameCountMismatch {
            expected: chart.m(),
            got: sections.len(),
        });
    }
    let mut bindings = Bindings::new();
    for (idx, s) in sections.iter().enumerate() {
        let i = idx + 1;
        check_base_only(chart, s)?;
        bindings.insert(chart.y(i).clone(), s.clone());
        for jet in chart.jets() {
            if jet.fiber_index() as usize != i {
                continue;
            }
            let mut d = s.clone();
            for &dir in jet.multi_index().directions() {
                d = d.diff(chart.x(dir as usize));
            }
            bindings.insert(jet.clone(), d);
        }
    }
    if let Some(h) = theta_section {
        check_base_only(chart, h)?;
        bindings.insert(chart.theta().clone(), h.clone());
        for lambda in 1..=chart.n() {
            bindings.insert(chart.theta_jet(lambda).clone(), h.diff(chart.x(lambda)));
        }
    }
    Ok(bindings)
}

pub(crate) fn check_base_only(chart: &Chart, e: &Expr) -> Result<(), GeomError> {
    for c in e.support() {
        if !matches!(c.role(), Role::Base | Role::Parameter) {
            return Err(GeomError::NotABaseExpression(c.name().to_string()));
        }
    }
    let _ = chart;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::MultiIndex;

    fn chart21() -> Chart {
        Chart::builder(2, 1).jet_order(2).build().unwrap()
    }

    #[test]
    fn total_derivative_of_fiber_is_first_jet() {
        let chart = chart21();
        let e = Expr::coord(chart.y(1));
        let d1 = total_derivative(&chart, 1, &e).unwrap();
        assert_eq!(
            d1,
            Expr::coord(chart.jet(1, &MultiIndex::single(1)).unwrap())
        );
    }

    #[test]
    fn total_derivative_of_base_is_kronecker() {
        let chart = chart21();
        let e = Expr::coord(chart.x(2));
        assert!(total_derivative(&chart, 1, &e).unwrap().is_zero());
        assert_eq!(total_derivative(&chart, 2, &e).unwrap(), Expr::one());
    }

    #[test]
    fn total_derivative_is_a_derivation() {
        // D_1(y * y_2) = y_1 y_2 + y y_12
        let chart = chart21();
        let y = Expr::coord(chart.y(1));
        let y1 = Expr::coord(chart.jet(1, &MultiIndex::single(1)).unwrap());
        let y2 = Expr::coord(chart.jet(1, &MultiIndex::single(2)).unwrap());
        let y12 = Expr::coord(chart.jet(1, &MultiIndex::new(vec![1, 2])).unwrap());
        let d = total_derivative(&chart, 1, &(&y * &y2)).unwrap();
        assert_eq!(d, &y1 * &y2 + &y * &y12);
    }

    #[test]
    fn total_derivative_requires_successor_jets() {
        let chart = chart21();
        let y12 = Expr::coord(chart.jet(1, &MultiIndex::new(vec![1, 2])).unwrap());
        assert!(matches!(
            total_derivative(&chart, 1, &y12),
            Err(GeomError::MissingJet { .. })
        ));
    }

    #[test]
    fn contact_form_shape() {
        // n=1, m=1, r=1: ϑ = dy − y_x dx
        let chart = Chart::builder(1, 1).jet_order(1).build().unwrap();
        let theta = contact_form(&chart, chart.y(1)).unwrap();
        let expected = &Form::differential(chart.y(1))
            - &Form::differential(chart.x(1))
                .scale(&Expr::coord(chart.jet(1, &MultiIndex::single(1)).unwrap()));
        assert_eq!(theta, expected);
    }

    #[test]
    fn contact_form_index_shift() {
        // n=2, r=2: ϑ_1 = dy_1 − y_11 dx1 − y_12 dx2
        let chart = chart21();
        let y1c = chart.jet(1, &MultiIndex::single(1)).unwrap().clone();
        let theta = contact_form(&chart, &y1c).unwrap();
        let expected = &(&Form::differential(&y1c)
            - &Form::differential(chart.x(1)).scale(&Expr::coord(
                chart.jet(1, &MultiIndex::new(vec![1, 1])).unwrap(),
            )))
            - &Form::differential(chart.x(2)).scale(&Expr::coord(
                chart.jet(1, &MultiIndex::new(vec![1, 2])).unwrap(),
            ));
        assert_eq!(theta, expected);
    }

    #[test]
    fn contact_forms_require_order_one() {
        let chart = Chart::builder(2, 1).build().unwrap();
        assert!(matches!(
            contact_forms(&chart),
            Err(GeomError::ChartOrderInsufficient { .. })
        ));
    }

    #[test]
    fn holonomic_prolongation_annihilates_contact_forms() {
        let chart = chart21();
        // s(x) = x1^2 x2 + 3 x2
        let s = Expr::coord(chart.x(1)).pow(2) * Expr::coord(chart.x(2))
            + Expr::int(3) * Expr::coord(chart.x(2));
        let h = Expr::coord(chart.x(1)) * Expr::coord(chart.x(2));
        let bindings = holonomic_bindings(&chart, &[s], Some(&h)).unwrap();
        for theta in contact_forms(&chart).unwrap() {
            assert!(theta.pullback(&bindings).unwrap().is_zero());
        }
    }

    #[test]
    fn split_reproduces_jet_decomposition() {
        let chart = chart21();
        let dy = Form::differential(chart.y(1));
        let (h, v) = horizontal_vertical_split(&chart, &dy).unwrap();
        let y1 = Expr::coord(chart.jet(1, &MultiIndex::single(1)).unwrap());
        let y2 = Expr::coord(chart.jet(1, &MultiIndex::single(2)).unwrap());
        let expected_h =
            &Form::differential(chart.x(1)).scale(&y1) + &Form::differential(chart.x(2)).scale(&y2);
        assert_eq!(h, expected_h);
        assert_eq!(v, contact_form(&chart, chart.y(1)).unwrap());
        assert_eq!(&h + &v, dy);
    }

    #[test]
    fn split_of_base_differential_is_horizontal() {
        let chart = chart21();
        let dx1 = Form::differential(chart.x(1));
        let (h, v) = horizontal_vertical_split(&chart, &dx1).unwrap();
        assert_eq!(h, dx1);
        assert!(v.is_zero());
    }

    #[test]
    fn split_of_df_uses_total_derivatives() {
        // f(x, y): df = (D_λ f) dx^λ + (∂f/∂y) ϑ
        let chart = chart21();
        let f = Expr::coord(chart.x(1)) * Expr::coord(chart.y(1)).pow(2);
        let df = Form::scalar(f.clone()).ext_d();
        let (h, v) = horizontal_vertical_split(&chart, &df).unwrap();
        let mut expected_h = Form::zero(1);
        for l in 1..=2 {
            expected_h = &expected_h
                + &Form::differential(chart.x(l)).scale(&total_derivative(&chart, l, &f).unwrap());
        }
        assert_eq!(h, expected_h);
        let expected_v = contact_form(&chart, chart.y(1))
            .unwrap()
            .scale(&f.diff(chart.y(1)));
        assert_eq!(v, expected_v);
        assert_eq!(&h + &v, df);
    }

    #[test]
    fn split_rejects_non_one_forms() {
        let chart = chart21();
        assert!(matches!(
            horizontal_vertical_split(&chart, &chart.omega()),
            Err(GeomError::SplitDegree(2))
        ));
    }
}
