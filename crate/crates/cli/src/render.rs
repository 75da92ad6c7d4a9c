//! LaTeX rendering of expressions, forms, and equation systems.
//!
//! The text format is the library's `Display` output; this module produces
//! compilable LaTeX fragments from the same structural data.

use num_traits::Signed;

use jetham_core::excalc::{Form, LegSig, ValuedForm};
use jetham_core::geom::Connection;
use jetham_core::ham::{Equation, EquationSystem};
use jetham_core::symcore::{Atom, CoordinateId, Expr, Role};

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi",
    "omega", "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Phi", "Psi", "Omega",
];

/// Split a trailing run of digits off an identifier.
fn split_digits(s: &str) -> (&str, &str) {
    let cut = s
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    s.split_at(cut)
}

/// Render a bare identifier: Greek names get a backslash, trailing digits
/// become a subscript, other multi-letter names are set upright.
pub fn latex_ident(name: &str) -> String {
    let (head, digits) = split_digits(name);
    if head.is_empty() {
        return digits.to_string();
    }
    let rendered = if GREEK.contains(&head) {
        format!("\\{head}")
    } else if head.chars().count() == 1 {
        head.to_string()
    } else {
        format!("\\mathrm{{{head}}}")
    };
    if digits.is_empty() {
        rendered
    } else {
        format!("{rendered}_{{{digits}}}")
    }
}

/// The (head, superscript, subscript) parts of a momentum's LaTeX.
fn momentum_parts(c: &CoordinateId) -> (String, String, String) {
    let head = latex_ident(c.stem());
    let name = c.name();
    if let Some(open) = name.find('[') {
        // p[λ,i] or p[i]
        let inner = &name[open + 1..name.find(']').unwrap_or(name.len())];
        let mut parts = inner.split(',');
        let first = parts.next().unwrap_or("");
        match parts.next() {
            Some(second) => (head, format!("^{{{first}}}"), format!("_{{{second}}}")),
            None => (head, String::new(), format!("_{{{first}}}")),
        }
    } else {
        let (_, digits) = split_digits(name);
        if digits.is_empty() {
            (head, String::new(), String::new())
        } else {
            (head, format!("^{{{digits}}}"), String::new())
        }
    }
}

pub fn latex_coord(c: &CoordinateId) -> String {
    match c.role() {
        Role::Base | Role::YFiber => {
            let (head, digits) = split_digits(c.name());
            if digits.is_empty() || head.is_empty() {
                latex_ident(c.name())
            } else {
                format!("{}^{{{digits}}}", latex_ident(head))
            }
        }
        Role::ThetaFiber | Role::Parameter => latex_ident(c.name()),
        Role::ThetaJet | Role::Jet => match c.name().split_once('_') {
            Some((head, sub)) => {
                let (stem, digits) = split_digits(head);
                let rendered = if digits.is_empty() || stem.is_empty() {
                    latex_ident(head)
                } else {
                    format!("{}^{{{digits}}}", latex_ident(stem))
                };
                format!("{rendered}_{{{sub}}}")
            }
            None => latex_ident(c.name()),
        },
        Role::Momentum => {
            let (head, sup, sub) = momentum_parts(c);
            format!("{head}{sup}{sub}")
        }
        Role::MomentumJet => {
            let (momentum_name, jet_sub) = c.name().rsplit_once('_').unwrap_or((c.name(), ""));
            // reconstruct the momentum parts from the head
            let tmp = CoordinateId::momentum(
                momentum_name.to_string(),
                c.stem().to_string(),
                c.contra_index(),
                c.fiber_index(),
            );
            let (head, sup, sub) = momentum_parts(&tmp);
            if sub.is_empty() {
                format!("{head}{sup}_{{,{jet_sub}}}")
            } else {
                let inner = &sub[2..sub.len() - 1];
                format!("{head}{sup}_{{{inner},{jet_sub}}}")
            }
        }
    }
}

fn latex_atom(atom: &Atom) -> String {
    match atom {
        Atom::Coord(c) => latex_coord(c),
        Atom::Func(f) => {
            let mut out = String::new();
            for (k, count) in f.deriv_record().iter().enumerate() {
                if *count == 0 {
                    continue;
                }
                if *count == 1 {
                    out.push_str(&format!(
                        "\\partial_{{{}}}",
                        latex_coord(&f.symbol().declared_args()[k])
                    ));
                } else {
                    out.push_str(&format!(
                        "\\partial_{{{}}}^{{{}}}",
                        latex_coord(&f.symbol().declared_args()[k]),
                        count
                    ));
                }
            }
            out.push_str(&latex_ident(f.symbol().name()));
            let args: Vec<String> = f.args().iter().map(latex_expr).collect();
            out.push_str(&format!("\\left({}\\right)", args.join(", ")));
            out
        }
    }
}

pub fn latex_expr(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (coeff, mono)) in e.terms().iter().enumerate() {
        let negative = coeff.is_negative();
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let abs = coeff.abs();
        let is_one = abs == num_rational::BigRational::from_integer(1.into());
        if mono.is_one() {
            out.push_str(&latex_rational(&abs));
        } else {
            if !is_one {
                out.push_str(&latex_rational(&abs));
                out.push_str("\\,");
            }
            let mut first = true;
            for (atom, exp) in mono.factors() {
                if !first {
                    out.push_str("\\,");
                }
                first = false;
                let rendered = latex_atom(atom);
                if *exp == 1 {
                    out.push_str(&rendered);
                } else if rendered.contains('^') {
                    out.push_str(&format!("{{{rendered}}}^{{{exp}}}"));
                } else {
                    out.push_str(&format!("{rendered}^{{{exp}}}"));
                }
            }
        }
    }
    out
}

fn latex_rational(r: &num_rational::BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

pub fn latex_form(form: &Form) -> String {
    if form.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (coeff, word)) in form.terms().iter().enumerate() {
        let rendered = latex_expr(coeff);
        let (negative, body) = if coeff.terms().len() == 1 && rendered.starts_with('-') {
            (true, rendered[1..].to_string())
        } else {
            (false, rendered)
        };
        match (idx == 0, negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if word.is_empty() {
            out.push_str(&body);
            continue;
        }
        if coeff != &Expr::one() {
            if coeff.terms().len() > 1 {
                out.push_str(&format!("\\left({body}\\right)"));
            } else {
                out.push_str(&body);
            }
            out.push_str("\\,");
        }
        let word_latex: Vec<String> = word
            .iter()
            .map(|c| format!("\\mathrm{{d}}{}", latex_coord(c)))
            .collect();
        out.push_str(&word_latex.join("\\wedge "));
    }
    out
}

pub fn latex_valued_form(vf: &ValuedForm, theta_name: &str) -> String {
    if vf.is_zero() {
        return "0".to_string();
    }
    let tau = latex_ident(theta_name);
    let mut pieces = Vec::new();
    for (sig, comps) in vf.parts() {
        match sig {
            LegSig::Scalar => pieces.push(latex_form(&comps[0])),
            LegSig::VTheta => pieces.push(format!(
                "\\left({}\\right)\\otimes\\partial_{{{tau}}}",
                latex_form(&comps[0])
            )),
            LegSig::Tx | LegSig::TxVTheta => {
                for (idx, comp) in comps.iter().enumerate() {
                    if comp.is_zero() {
                        continue;
                    }
                    let mut piece = format!(
                        "\\left({}\\right)\\otimes\\partial_{{{}}}",
                        latex_form(comp),
                        idx + 1
                    );
                    if sig.has_vtheta() {
                        piece.push_str(&format!("\\otimes\\partial_{{{tau}}}"));
                    }
                    pieces.push(piece);
                }
            }
        }
    }
    pieces.join(" + ")
}

pub fn latex_equation(eq: &Equation) -> String {
    format!("{} &= {}", latex_expr(&eq.lhs), latex_expr(&eq.rhs))
}

pub fn latex_equation_system(sys: &EquationSystem) -> String {
    let rows: Vec<String> = sys.equations.iter().map(latex_equation).collect();
    format!(
        "\\begin{{aligned}}\n{}\n\\end{{aligned}}",
        rows.join("\\\\\n")
    )
}

pub fn latex_connection(conn: &Connection) -> String {
    let mut rows = Vec::new();
    for ((fiber, base), e) in conn.components() {
        if e.is_zero() {
            continue;
        }
        rows.push(format!(
            "\\Gamma^{{{}}}_{{{}}} &= {}",
            latex_coord(fiber),
            latex_coord(base),
            latex_expr(e)
        ));
    }
    if rows.is_empty() {
        return "\\Gamma = 0".to_string();
    }
    format!(
        "\\begin{{aligned}}\n{}\n\\end{{aligned}}",
        rows.join("\\\\\n")
    )
}
