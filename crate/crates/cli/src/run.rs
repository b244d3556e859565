//! Task execution and reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use skewgroup::projective::{inertia, projective_isotypics};
use skewgroup::repmod::decompose_regular;
use skewgroup::skew::skew_group_algebra;
use skewgroup::theorems::{
    check_cocycle, check_inertia, check_invariant_theory, check_phi_psi_report, check_semisimple, check_skew_product,
    clifford_correspondence, complete_reducibility, hom_inv_pairs, induced_simplicity, main_theorem,
    VerificationReport,
};

use crate::job::{Job, Task, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskOutcome {
    pub task: TaskKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// True when the error is a numerical breakdown rather than bad input.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub numerical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    /// Wall time; kept out of the serialized report so it stays reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobEcho {
    pub name: String,
    pub algebra_dim: usize,
    pub group_order: usize,
    pub modules: BTreeMap<String, usize>,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub job: JobEcho,
    pub tasks: Vec<TaskOutcome>,
    pub pass: bool,
}

impl Report {
    /// 0 when every task passed, 3 on any numerical breakdown, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.tasks.iter().any(|t| t.numerical) {
            3
        } else if self.pass {
            0
        } else {
            1
        }
    }
}

pub fn echo(job: &Job) -> JobEcho {
    JobEcho {
        name: job.name.clone(),
        algebra_dim: job.algebra().dim(),
        group_order: job.action.group().order(),
        modules: job.modules.iter().map(|(k, m)| (k.clone(), m.dim())).collect(),
        tol: job.tol,
        seed: job.seed,
    }
}

fn prefixed(mut report: VerificationReport, prefix: &str) -> VerificationReport {
    for c in &mut report.checks {
        c.name = format!("{prefix}/{}", c.name);
    }
    report
}

pub fn run_task(job: &Job, task: &Task) -> skewgroup::Result<VerificationReport> {
    let (action, seed) = (&job.action, job.seed);
    let instance = match &task.module {
        Some(m) => format!("{}:{m}", job.name),
        None => job.name.clone(),
    };
    let module = task.module.as_ref().map(|m| &job.modules[m]);
    let m = || module.expect("validated: task has a module");
    match task.kind {
        TaskKind::Semisimple => check_semisimple(action, &instance, seed),
        TaskKind::Inertia => check_inertia(m(), action, &instance, seed),
        TaskKind::Cocycle => check_cocycle(m(), action, &instance, seed),
        TaskKind::Skew => Ok(check_skew_product(&skew_group_algebra(action)?, &instance, seed)),
        TaskKind::PhiPsi => check_phi_psi_report(&skew_group_algebra(action)?, &instance, seed),
        TaskKind::InvariantTheory => check_invariant_theory(&skew_group_algebra(action)?, &instance, seed),
        TaskKind::Clifford => {
            // every simple A # G-module, taken from the regular module
            let s = skew_group_algebra(action)?;
            let (reg, dec) = decompose_regular(s.alg(), seed)?;
            let mut report = VerificationReport::new(&instance, seed, job.tol);
            for (k, class) in dec.classes.iter().enumerate() {
                let n = reg.submodule(&class.rep_basis)?;
                report.extend(prefixed(clifford_correspondence(&n, &s, &instance, seed)?, &format!("class{k}")));
            }
            Ok(report)
        }
        TaskKind::InducedSimplicity => {
            let s = skew_group_algebra(action)?;
            let system = inertia(m(), action, seed)?;
            let iso = projective_isotypics(&system, seed)?;
            let classes = iso.decomposition.classes.len();
            let gammas: Vec<usize> = match task.gamma {
                Some(g) if g >= classes => {
                    return Err(skewgroup::Error::InvalidInput(format!(
                        "gamma {g} out of range: the module has {classes} projective classes"
                    )))
                }
                Some(g) => vec![g],
                None => (0..classes).collect(),
            };
            let mut report = VerificationReport::new(&instance, seed, job.tol);
            for g in gammas {
                report.extend(induced_simplicity(&system, &iso, g, &s, &instance, seed)?);
            }
            Ok(report)
        }
        TaskKind::HomInv => hom_inv_pairs(m(), action, &instance, seed),
        TaskKind::MainTheorem => main_theorem(m(), action, &instance, seed),
        TaskKind::CompleteReducibility => complete_reducibility(m(), action, &instance, seed),
    }
}

/// Runs the job's tasks in order, keeping those whose name is in `filter`
/// (all when empty).
pub fn run_job(job: &Job, filter: &[String]) -> Report {
    let mut tasks = Vec::new();
    for task in &job.tasks {
        if !filter.is_empty() && !filter.iter().any(|f| f == task.kind.name()) {
            continue;
        }
        let start = Instant::now();
        let result = run_task(job, task);
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(report) => TaskOutcome {
                task: task.kind,
                module: task.module.clone(),
                status: if report.pass() { Status::Pass } else { Status::Fail },
                error: None,
                numerical: false,
                report: Some(report),
                elapsed,
            },
            Err(e) => TaskOutcome {
                task: task.kind,
                module: task.module.clone(),
                status: Status::Error,
                error: Some(e.to_string()),
                numerical: e.is_numerical(),
                report: None,
                elapsed,
            },
        };
        tasks.push(outcome);
    }
    let pass = tasks.iter().all(|t| t.status == Status::Pass);
    Report { job: echo(job), tasks, pass }
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn status_tag(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let j = &report.job;
    let modules: Vec<String> = j.modules.iter().map(|(k, d)| format!("{k}({d})")).collect();
    let _ = writeln!(
        out,
        "job {}: A dim {}, G order {}, modules [{}], tol {:e}, seed {}",
        j.name,
        j.algebra_dim,
        j.group_order,
        modules.join(", "),
        j.tol,
        j.seed
    );
    for t in &report.tasks {
        let on = t.module.as_ref().map(|m| format!(" on {m}")).unwrap_or_default();
        let tag = match t.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let _ = writeln!(out, "[{tag}] {}{on}", t.task.name());
        if let Some(e) = &t.error {
            let _ = writeln!(out, "    error: {e}");
        }
        if let Some(r) = &t.report {
            for c in &r.checks {
                let dims: Vec<String> = c.dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let res: Vec<String> = c.residuals.iter().map(|(k, v)| format!("{k}={v:.2e}")).collect();
                let mut line = format!("    {} {}", status_tag(c.pass), c.name);
                if !dims.is_empty() {
                    let _ = write!(line, "  {}", dims.join(" "));
                }
                if !res.is_empty() {
                    let _ = write!(line, "  {}", res.join(" "));
                }
                let _ = writeln!(out, "{line}");
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "        witness: {w}");
                }
            }
        }
    }
    let passed = report.tasks.iter().filter(|t| t.status == Status::Pass).count();
    let _ = writeln!(out, "overall: {} ({passed}/{} tasks)", status_tag(report.pass), report.tasks.len());
    out
}

/// One line per task with its wall time.
pub fn render_timing(report: &Report) -> String {
    let mut out = String::new();
    for t in &report.tasks {
        let on = t.module.as_ref().map(|m| format!(" on {m}")).unwrap_or_default();
        let _ = writeln!(out, "time {}{on}: {:.3}s", t.task.name(), t.elapsed.as_secs_f64());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(status: Status, numerical: bool) -> TaskOutcome {
        TaskOutcome {
            task: TaskKind::Skew,
            module: None,
            status,
            error: None,
            numerical,
            report: None,
            elapsed: Duration::ZERO,
        }
    }

    fn report(tasks: Vec<TaskOutcome>) -> Report {
        let pass = tasks.iter().all(|t| t.status == Status::Pass);
        let job = JobEcho {
            name: "t".into(),
            algebra_dim: 1,
            group_order: 1,
            modules: BTreeMap::new(),
            tol: 1e-9,
            seed: 1,
        };
        Report { job, tasks, pass }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(report(vec![]).exit_code(), 0);
        assert_eq!(report(vec![outcome(Status::Pass, false)]).exit_code(), 0);
        assert_eq!(report(vec![outcome(Status::Pass, false), outcome(Status::Fail, false)]).exit_code(), 1);
        assert_eq!(report(vec![outcome(Status::Error, false)]).exit_code(), 1);
        assert_eq!(report(vec![outcome(Status::Fail, false), outcome(Status::Error, true)]).exit_code(), 3);
    }

    #[test]
    fn wall_time_is_not_serialized() {
        let mut t = outcome(Status::Pass, false);
        t.elapsed = Duration::from_millis(1234);
        let json = render_json(&report(vec![t]));
        assert!(!json.contains("elapsed") && !json.contains("1234"));
        assert!(!json.contains("numerical"));
    }
}
