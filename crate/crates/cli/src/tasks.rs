//! Task execution: run the model's task list and collect a stable,
//! serializable document of results.

use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::{Deserialize, Serialize};

use jetham_core::excalc::ValuedForm;
use jetham_core::geom::{
    composite_connection, contact_forms, pullback_connection, vertical_covariant_differential,
    Connection,
};
use jetham_core::ham::{
    euler_lagrange, hamilton_equations, hamiltonian_connection_defect, lagrangian_density,
    legendre_of_lagrangian, restrict_by_section, solve_hamiltonian_connection, EquationSystem,
    HamiltonianSpec, LegendreChart,
};

use crate::model::{ModelFile, Task};
use crate::render;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub version: u32,
    pub tasks: Vec<TaskRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub name: String,
    pub kind: String,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Equations {
        equations: Vec<EquationRecord>,
        latex: String,
    },
    Forms {
        forms: Vec<FormRecord>,
    },
    Note {
        note: String,
    },
    Connection {
        components: Vec<ComponentRecord>,
        latex: String,
    },
    Check {
        passed: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
    },
    Hamiltonian {
        density: String,
        latex: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationRecord {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    pub text: String,
    pub latex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub fiber: String,
    pub base: String,
    pub value: String,
}

#[derive(Debug, thiserror::Error)]
#[error("task `{task}` failed: {message}")]
pub struct TaskError {
    pub task: String,
    pub message: String,
}

/// Execute the tasks in order. Any returned document is deterministic for
/// a given model; property-check failures are recorded in the document
/// (and surfaced through [`OutputDocument::failed_checks`]), while
/// derivation failures abort with a [`TaskError`].
pub fn run_tasks(model: &ModelFile) -> Result<OutputDocument, TaskError> {
    let mut ctx = TaskContext {
        model,
        chart: model.chart.clone(),
    };
    let mut records = Vec::with_capacity(model.tasks.len());
    for spanned in &model.tasks {
        let name = spanned.task.name().to_string();
        let outcome = catch_unwind(AssertUnwindSafe(|| ctx.run(&spanned.task)));
        let record = match outcome {
            Ok(Ok(record)) => record,
            Ok(Err(e)) => {
                return Err(TaskError {
                    task: name,
                    message: e,
                })
            }
            Err(panic) => {
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "computation aborted".to_string());
                return Err(TaskError {
                    task: name,
                    message,
                });
            }
        };
        records.push(record);
    }
    Ok(OutputDocument {
        version: 1,
        tasks: records,
    })
}

impl OutputDocument {
    /// Names of check-style tasks that reported failure.
    pub fn failed_checks(&self) -> Vec<&str> {
        self.tasks
            .iter()
            .filter(|t| matches!(t.payload, Payload::Check { passed: false, .. }))
            .map(|t| t.name.as_str())
            .collect()
    }
}

struct TaskContext<'a> {
    model: &'a ModelFile,
    chart: LegendreChart,
}

impl TaskContext<'_> {
    fn run(&mut self, task: &Task) -> Result<TaskRecord, String> {
        let name = task.name().to_string();
        match task {
            Task::Prolong(r) => {
                let prolonged = self.chart.chart().prolong(*r).map_err(|e| e.to_string())?;
                self.chart = LegendreChart::from_chart(prolonged).map_err(|e| e.to_string())?;
                Ok(TaskRecord {
                    name,
                    kind: "note".to_string(),
                    payload: Payload::Note {
                        note: format!("jet order raised to {r}"),
                    },
                })
            }
            Task::Hamilton => {
                let spec = self.hamiltonian()?;
                Ok(equations_record(name, &hamilton_equations(spec)))
            }
            Task::EulerLagrange => {
                let sys = match (&self.model.lagrangian, &self.model.hamiltonian) {
                    (Some(l), _) => {
                        let fields: Vec<_> = self.chart.chart().fibers().to_vec();
                        euler_lagrange(&self.chart, l, &fields).map_err(|e| e.to_string())?
                    }
                    (None, Some(spec)) => {
                        let fields = jetham_core::ham::hamiltonian_fields(&self.chart);
                        euler_lagrange(&self.chart, &lagrangian_density(spec), &fields)
                            .map_err(|e| e.to_string())?
                    }
                    (None, None) => {
                        return Err("model has neither a lagrangian nor a hamiltonian".into())
                    }
                };
                Ok(equations_record(name, &sys))
            }
            Task::CheckClosed => {
                let spec = self.hamiltonian()?;
                let gamma = solve_hamiltonian_connection(spec).map_err(|e| e.to_string())?;
                let defect = hamiltonian_connection_defect(&gamma, spec.chart())
                    .map_err(|e| e.to_string())?;
                let passed = defect.is_zero();
                Ok(TaskRecord {
                    name,
                    kind: "check".to_string(),
                    payload: Payload::Check {
                        passed,
                        witness: if passed {
                            None
                        } else {
                            Some(defect.to_string())
                        },
                    },
                })
            }
            Task::Restrict { h, sigma } => {
                let spec = self.hamiltonian()?;
                let section = &self.model.sections[h];
                let sigma = sigma.as_ref().map(|s| &self.model.sections[s]);
                let restricted = restrict_by_section(&hamilton_equations(spec), section, sigma)
                    .map_err(|e| e.to_string())?;
                Ok(equations_record(name, &restricted))
            }
            Task::Legendre => {
                let density = self
                    .model
                    .lagrangian
                    .as_ref()
                    .ok_or("model has no lagrangian block")?;
                let spec =
                    legendre_of_lagrangian(&self.chart, density).map_err(|e| e.to_string())?;
                Ok(TaskRecord {
                    name,
                    kind: "hamiltonian".to_string(),
                    payload: Payload::Hamiltonian {
                        density: spec.density().to_string(),
                        latex: render::latex_expr(spec.density()),
                    },
                })
            }
            Task::ContactForms => {
                let forms = contact_forms(self.chart.chart()).map_err(|e| e.to_string())?;
                Ok(TaskRecord {
                    name,
                    kind: "forms".to_string(),
                    payload: Payload::Forms {
                        forms: forms
                            .iter()
                            .map(|f| FormRecord {
                                text: f.to_string(),
                                latex: render::latex_form(f),
                            })
                            .collect(),
                    },
                })
            }
            Task::CompositeConnection { h_theta, gamma } => {
                let composite = composite_connection(
                    &self.model.connections[h_theta],
                    &self.model.connections[gamma],
                )
                .map_err(|e| e.to_string())?;
                Ok(connection_record(name, &composite))
            }
            Task::PullbackConnection { h_theta, h } => {
                let pulled =
                    pullback_connection(&self.model.connections[h_theta], &self.model.sections[h])
                        .map_err(|e| e.to_string())?;
                Ok(connection_record(name, &pulled))
            }
            Task::VerticalDifferential { h_theta } => {
                let delta = vertical_covariant_differential(&self.model.connections[h_theta])
                    .map_err(|e| e.to_string())?;
                let chart = self.chart.chart();
                let forms = delta
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(idx, f)| FormRecord {
                        text: format!("Delta[{}] = {}", chart.y(idx + 1), f),
                        latex: format!(
                            "\\Delta^{{{}}} = {}",
                            render::latex_coord(chart.y(idx + 1)),
                            render::latex_form(f)
                        ),
                    })
                    .collect();
                Ok(TaskRecord {
                    name,
                    kind: "forms".to_string(),
                    payload: Payload::Forms { forms },
                })
            }
        }
    }

    fn hamiltonian(&self) -> Result<&HamiltonianSpec, String> {
        self.model
            .hamiltonian
            .as_ref()
            .ok_or_else(|| "model has no hamiltonian block".to_string())
    }
}

fn equations_record(name: String, sys: &EquationSystem) -> TaskRecord {
    TaskRecord {
        name,
        kind: "equations".to_string(),
        payload: Payload::Equations {
            equations: sys
                .equations
                .iter()
                .map(|eq| EquationRecord {
                    label: eq.label.clone(),
                    lhs: eq.lhs.to_string(),
                    rhs: eq.rhs.to_string(),
                })
                .collect(),
            latex: render::latex_equation_system(sys),
        },
    }
}

fn connection_record(name: String, conn: &Connection) -> TaskRecord {
    TaskRecord {
        name,
        kind: "connection".to_string(),
        payload: Payload::Connection {
            components: conn
                .components()
                .iter()
                .map(|((fiber, base), e)| ComponentRecord {
                    fiber: fiber.name().to_string(),
                    base: base.name().to_string(),
                    value: e.to_string(),
                })
                .collect(),
            latex: render::latex_connection(conn),
        },
    }
}

/// The standard verification battery for `jetham check`: Hamilton/EL
/// equivalence, the defining contraction identity and closedness, the
/// polysymplectic defining relation on basis ψ, and (when a Θ section is
/// declared) the two-path restriction equality.
pub fn run_checks(model: &ModelFile) -> Result<Vec<(String, bool, Option<String>)>, TaskError> {
    let run = |label: &str, f: &dyn Fn() -> Result<(bool, Option<String>), String>| {
        let outcome = catch_unwind(AssertUnwindSafe(f));
        match outcome {
            Ok(Ok((passed, witness))) => Ok((label.to_string(), passed, witness)),
            Ok(Err(message)) => Err(TaskError {
                task: label.to_string(),
                message,
            }),
            Err(_) => Err(TaskError {
                task: label.to_string(),
                message: "computation aborted".to_string(),
            }),
        }
    };

    let spec = match &model.hamiltonian {
        Some(spec) => spec.clone(),
        None => {
            return Err(TaskError {
                task: "check".to_string(),
                message: "model has no hamiltonian block".to_string(),
            })
        }
    };
    let chart = spec.chart().clone();

    let mut results = Vec::new();

    results.push(run(
        "hamilton equations match Euler-Lagrange of L_H",
        &|| {
            let fields = jetham_core::ham::hamiltonian_fields(&chart);
            let el = euler_lagrange(&chart, &lagrangian_density(&spec), &fields)
                .map_err(|e| e.to_string())?;
            Ok((hamilton_equations(&spec) == el, None))
        },
    )?);

    results.push(run(
        "solved connection satisfies gamma .| Omega = dH",
        &|| {
            let gamma = solve_hamiltonian_connection(&spec).map_err(|e| e.to_string())?;
            let defect = jetham_core::ham::contraction_identity_defect(&gamma, &spec)
                .map_err(|e| e.to_string())?;
            Ok((defect.is_zero(), witness_of(&defect)))
        },
    )?);

    results.push(run("gamma .| Omega is closed", &|| {
        let gamma = solve_hamiltonian_connection(&spec).map_err(|e| e.to_string())?;
        let defect = hamiltonian_connection_defect(&gamma, &chart).map_err(|e| e.to_string())?;
        Ok((defect.is_zero(), witness_of(&defect)))
    })?);

    results.push(run(
        "polysymplectic defining relation on basis 1-forms",
        &|| {
            use jetham_core::excalc::Form;
            use jetham_core::ham::{liouville_form, polysymplectic_form};
            let c = chart.chart();
            let theta = liouville_form(&chart);
            let omega = polysymplectic_form(&chart);
            let mut psis = vec![Form::differential(c.theta())];
            for l in 1..=c.n() {
                psis.push(Form::differential(c.x(l)));
            }
            for psi in psis {
                let lhs = theta.leg_contract(&psi).map_err(|e| e.to_string())?.ext_d();
                let rhs = omega.leg_contract(&psi).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Ok((false, Some(format!("fails for psi = {psi}"))));
                }
            }
            Ok((true, None))
        },
    )?);

    for (name, section) in &model.sections {
        use jetham_core::geom::{Fibration, SectionTarget};
        if section.target() != SectionTarget::Bundle(Fibration::ThetaOverX) {
            continue;
        }
        let label = format!("restriction along `{name}` commutes with derivation");
        let section = section.clone();
        let spec = spec.clone();
        results.push(run(&label, &move || {
            let restricted = restrict_by_section(&hamilton_equations(&spec), &section, None)
                .map_err(|e| e.to_string())?;
            let h_expr = section.assignment(spec.chart().chart().theta());
            let direct =
                hamilton_equations(&spec.restrict_theta(&h_expr).map_err(|e| e.to_string())?);
            Ok((restricted == direct, None))
        })?);
    }

    Ok(results)
}

fn witness_of(defect: &ValuedForm) -> Option<String> {
    if defect.is_zero() {
        None
    } else {
        Some(defect.to_string())
    }
}
