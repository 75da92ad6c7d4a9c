//! `jetham` command line: derive covariant Hamilton equations and related
//! structures from a model file, or run the verification battery.
//!
//! Exit codes: 0 success, 1 usage/parse error, 2 derivation error,
//! 3 property-check failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use jetham::{configure_term_limit, emit, parse_model, run_checks, run_tasks, Format};

const USAGE: &str = "\
usage:
  jetham derive <model-file> [--format text|latex|json] [--out <path>]
  jetham check  <model-file>

Runs the task list of a model file (`derive`) or the standard property
battery (`check`). JETHAM_MAX_TERMS caps expression size (default 100000).";

fn main() -> ExitCode {
    configure_term_limit();
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
    }
}

fn run(args: &[String]) -> Result<ExitCode, String> {
    let Some(command) = args.first() else {
        return Err(USAGE.to_string());
    };
    match command.as_str() {
        "derive" => derive(&args[1..]),
        "check" => check(&args[1..]),
        "--help" | "-h" | "help" => {
            println!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown command `{other}`\n{USAGE}")),
    }
}

fn derive(args: &[String]) -> Result<ExitCode, String> {
    let mut path: Option<PathBuf> = None;
    let mut format = Format::Text;
    let mut out_path: Option<PathBuf> = None;
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--format" => {
                let value = it.next().ok_or("--format needs a value\n")?;
                format = value.parse()?;
            }
            "--out" => {
                let value = it.next().ok_or("--out needs a path\n")?;
                out_path = Some(PathBuf::from(value));
            }
            other if !other.starts_with('-') && path.is_none() => {
                path = Some(PathBuf::from(other));
            }
            other => return Err(format!("unexpected argument `{other}`\n{USAGE}")),
        }
    }
    let path = path.ok_or_else(|| format!("derive needs a model file\n{USAGE}"))?;
    let input =
        fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let model = match guarded_parse(&input) {
        Ok(Ok(model)) => model,
        Ok(Err(e)) => {
            return Err(format!("{}: {e}", path.display()));
        }
        Err(message) => {
            eprintln!("{message}");
            return Ok(ExitCode::from(2));
        }
    };
    let doc = match quiet_panics(|| run_tasks(&model)) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(2));
        }
    };
    let rendered = emit(&doc, format);
    match out_path {
        Some(out) => {
            fs::write(&out, rendered).map_err(|e| format!("cannot write {}: {e}", out.display()))?
        }
        None => print!("{rendered}"),
    }
    if !doc.failed_checks().is_empty() {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

/// Run a closure with the default panic printer silenced; every panic
/// inside must be caught by the closure itself.
fn quiet_panics<T>(f: impl FnOnce() -> T) -> T {
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let out = f();
    std::panic::set_hook(hook);
    out
}

/// Folding expressions during parsing can hit the term cap; turn that
/// abort into a derivation error instead of a crash.
fn guarded_parse(input: &str) -> Result<Result<jetham::ModelFile, jetham::ParseError>, String> {
    quiet_panics(|| std::panic::catch_unwind(|| parse_model(input))).map_err(|panic| {
        panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "expression folding aborted".to_string())
    })
}

fn check(args: &[String]) -> Result<ExitCode, String> {
    let [path] = args else {
        return Err(format!("check needs exactly one model file\n{USAGE}"));
    };
    let path = PathBuf::from(path);
    let input =
        fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let model = match guarded_parse(&input) {
        Ok(Ok(model)) => model,
        Ok(Err(e)) => {
            return Err(format!("{}: {e}", path.display()));
        }
        Err(message) => {
            eprintln!("{message}");
            return Ok(ExitCode::from(2));
        }
    };
    let results = match quiet_panics(|| run_checks(&model)) {
        Ok(results) => results,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(2));
        }
    };
    let mut all_passed = true;
    for (label, passed, witness) in &results {
        println!("{} {label}", if *passed { "PASS" } else { "FAIL" });
        if let Some(w) = witness {
            println!("     witness: {w}");
        }
        all_passed &= passed;
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}
