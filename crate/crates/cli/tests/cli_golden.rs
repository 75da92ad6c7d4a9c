//! Golden-output and exit-code tests for the shipped model files.

use std::process::Command;

use jetham::{emit, parse_document, parse_model, run_tasks, Format};

const OSCILLATOR: &str = include_str!("../models/oscillator.jham");
const KLEIN_GORDON: &str = include_str!("../models/klein_gordon.jham");

fn derive(model: &str, format: Format) -> String {
    let model = parse_model(model).expect("model parses");
    let doc = run_tasks(&model).expect("tasks run");
    emit(&doc, format)
}

#[test]
fn oscillator_golden_outputs() {
    assert_eq!(
        derive(OSCILLATOR, Format::Text),
        include_str!("golden/oscillator.txt")
    );
    assert_eq!(
        derive(OSCILLATOR, Format::Latex),
        include_str!("golden/oscillator.tex")
    );
    assert_eq!(
        derive(OSCILLATOR, Format::Json),
        include_str!("golden/oscillator.json")
    );
}

#[test]
fn klein_gordon_golden_outputs() {
    assert_eq!(
        derive(KLEIN_GORDON, Format::Text),
        include_str!("golden/klein_gordon.txt")
    );
    assert_eq!(
        derive(KLEIN_GORDON, Format::Latex),
        include_str!("golden/klein_gordon.tex")
    );
    assert_eq!(
        derive(KLEIN_GORDON, Format::Json),
        include_str!("golden/klein_gordon.json")
    );
}

#[test]
fn output_is_deterministic_across_runs() {
    for model in [OSCILLATOR, KLEIN_GORDON] {
        for format in [Format::Text, Format::Latex, Format::Json] {
            assert_eq!(derive(model, format), derive(model, format));
        }
    }
}

#[test]
fn json_round_trips() {
    for model in [OSCILLATOR, KLEIN_GORDON] {
        let model = parse_model(model).unwrap();
        let doc = run_tasks(&model).unwrap();
        let parsed = parse_document(&emit(&doc, Format::Json)).unwrap();
        assert_eq!(parsed, doc);
    }
}

#[test]
fn parser_is_total_on_fuzzed_inputs() {
    // parse_model either returns a model or a positioned error; it must
    // not panic on arbitrary input
    let samples = [
        "",
        "{}{}{}",
        "bundle",
        "bundle { n = }",
        "bundle { n = 1 m = 1 }",
        "bundle { n = 1\n m = 1 }\nhamiltonian { H = ((p) }",
        "bundle { n = 1\n m = 1 }\ntasks { qux }",
        "\u{1F600} emoji",
        "bundle { n = 99999999999999999999999 }",
        "hamiltonian { H = p^-2 }",
        "bundle { n = 1\n m = 1 }\nhamiltonian { H = 1/0 }",
        "section { }",
        "connection C on A->B { }",
        "tasks { restrict }",
    ];
    for sample in samples {
        let _ = parse_model(sample);
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jetham"))
}

fn model_path(name: &str) -> String {
    format!("{}/models/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn check_exits_zero_on_shipped_models() {
    for model in ["oscillator.jham", "klein_gordon.jham"] {
        let status = bin()
            .args(["check", &model_path(model)])
            .status()
            .expect("binary runs");
        assert_eq!(status.code(), Some(0), "{model}");
    }
}

#[test]
fn parse_errors_exit_one() {
    let output = bin()
        .args(["derive", "/nonexistent/model.jham"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));

    let dir = std::env::temp_dir().join("jetham-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.jham");
    std::fs::write(&bad, "bundle { n = 1\n m = 1 }\nhamiltonian { H = q }").unwrap();
    let output = bin()
        .args(["derive", bad.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown coordinate"), "{stderr}");
}

#[test]
fn failing_property_check_exits_three() {
    // a τ-dependent Hamiltonian with mixed τy dependence is not closed
    // under this library's contraction convention
    let dir = std::env::temp_dir().join("jetham-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tau_mixed.jham");
    std::fs::write(
        &path,
        "bundle { n = 1\n m = 1 }\nhamiltonian { H = tau * y * p }\ntasks { check-closed }",
    )
    .unwrap();
    let output = bin()
        .args(["derive", path.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
    assert!(stdout.contains("witness"), "{stdout}");
}

#[test]
fn composite_bundle_tasks_end_to_end() {
    // h = x1·x2 is an integral section of Γ (∂_λ h = Γ^τ_λ), so the
    // pull-back connection must coincide with the restricted composite
    let source = "\
bundle {
  n = 2
  m = 1
}
connection Hth on Y->Theta {
  y, x1  = x2
  y, tau = y
}
connection Gam on Theta->X {
  tau, x1 = x2
  tau, x2 = x1
}
section h {
  tau = x1 * x2
}
tasks {
  composite-connection Hth Gam
  pullback-connection Hth h
  vertical-differential Hth
}
";
    let expected = "\
== composite-connection
Gamma[tau,x1] = x2
Gamma[tau,x2] = x1
Gamma[y,x1] = x2 + x2*y
Gamma[y,x2] = x1*y

== pullback-connection
Gamma[y,x1] = x2 + x2*y
Gamma[y,x2] = x1*y

== vertical-differential
Delta[y] = (-x2 - tau_1*y + y_1)*dx1 + (-tau_2*y + y_2)*dx2

";
    let model = parse_model(source).unwrap();
    let doc = run_tasks(&model).unwrap();
    let rendered = emit(&doc, Format::Text);
    assert_eq!(rendered, expected);
}

#[test]
fn term_limit_env_var_aborts_runaway_expansion() {
    let dir = std::env::temp_dir().join("jetham-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("big.jham");
    std::fs::write(
        &path,
        "bundle { n = 2\n m = 2 }\nhamiltonian { H = (x1 + x2 + y1 + y2 + tau)^4 }\ntasks { hamilton }",
    )
    .unwrap();
    let output = bin()
        .args(["derive", path.to_str().unwrap()])
        .env("JETHAM_MAX_TERMS", "10")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("term limit"), "{stderr}");

    // and the same model is fine without the cap
    let status = bin()
        .args(["derive", path.to_str().unwrap()])
        .stdout(std::process::Stdio::null())
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(0));
}

#[test]
fn empty_task_list_yields_empty_document() {
    let model = parse_model("bundle { n = 1\n m = 1 }\nhamiltonian { H = p }").unwrap();
    let doc = run_tasks(&model).unwrap();
    assert!(doc.tasks.is_empty());
    assert_eq!(emit(&doc, Format::Text), "");
}

#[test]
fn cli_equations_match_the_library_derivation() {
    use jetham::Payload;
    use jetham_core::ham::{hamilton_equations, HamiltonianSpec, LegendreChart};
    use jetham_core::symcore::Expr;

    let model = parse_model(KLEIN_GORDON).unwrap();
    let doc = run_tasks(&model).unwrap();
    let Payload::Equations { equations, .. } = &doc.tasks[0].payload else {
        panic!("first task is hamilton");
    };

    let lc = LegendreChart::with_parameters(2, 1, ["mu"]).unwrap();
    let c = lc.chart();
    let mu = Expr::coord(c.param("mu").unwrap());
    let p1 = Expr::coord(lc.momentum(1, 1));
    let p2 = Expr::coord(lc.momentum(2, 1));
    let y = Expr::coord(c.y(1));
    let spec = HamiltonianSpec::new(
        &lc,
        (p1.pow(2) - p2.pow(2)).checked_div(&Expr::int(2)).unwrap()
            + (mu.pow(2) * y.pow(2)).checked_div(&Expr::int(2)).unwrap(),
    )
    .unwrap();
    let expected = hamilton_equations(&spec);
    assert_eq!(equations.len(), expected.equations.len());
    for (record, eq) in equations.iter().zip(&expected.equations) {
        assert_eq!(record.lhs, eq.lhs.to_string());
        assert_eq!(record.rhs, eq.rhs.to_string());
    }
}

#[test]
fn derivation_errors_exit_two() {
    // legendre on a singular lagrangian
    let dir = std::env::temp_dir().join("jetham-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("singular.jham");
    std::fs::write(
        &path,
        "bundle { n = 2\n m = 1 }\nlagrangian { L = (y_1 + y_2)^2 / 2 }\ntasks { legendre }",
    )
    .unwrap();
    let output = bin()
        .args(["derive", path.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("singular"), "{stderr}");
}
