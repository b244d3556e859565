//! Job files: JSON schema, parsing and construction of the core objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use skewgroup::algebra::{make_algebra, Algebra};
use skewgroup::group_action::{make_action, make_group, AlgebraAction};
use skewgroup::numeric::{Mat, Vector, DEFAULT_SEED, DEFAULT_TOL};
use skewgroup::repmod::{make_module, Module};

use crate::error::CliError;

/// A complex scalar as `[re, im]`.
pub type Scalar = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub unit: Vec<Scalar>,
    /// `[i, j, k, c]`: `b_i * b_j += c * b_k`.
    pub mult: Vec<(usize, usize, usize, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

/// A square matrix, either as a list of rows or flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Rows(Vec<Vec<Scalar>>),
    Flat(Vec<Scalar>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub mats: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub dim: usize,
    pub rho: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    /// Restricts `induced_simplicity` to one projective class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algebra: AlgebraSpec,
    pub group: GroupSpec,
    pub action: ActionSpec,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Semisimple,
    Inertia,
    Cocycle,
    Skew,
    PhiPsi,
    InvariantTheory,
    Clifford,
    InducedSimplicity,
    HomInv,
    MainTheorem,
    CompleteReducibility,
}

pub const TASK_NAMES: [&str; 11] = [
    "semisimple",
    "inertia",
    "cocycle",
    "skew",
    "phi_psi",
    "invariant_theory",
    "clifford",
    "induced_simplicity",
    "hom_inv",
    "main_theorem",
    "complete_reducibility",
];

impl TaskKind {
    pub fn parse(name: &str) -> Option<TaskKind> {
        use TaskKind::*;
        Some(match name {
            "semisimple" => Semisimple,
            "inertia" => Inertia,
            "cocycle" => Cocycle,
            "skew" => Skew,
            "phi_psi" => PhiPsi,
            "invariant_theory" => InvariantTheory,
            "clifford" => Clifford,
            "induced_simplicity" => InducedSimplicity,
            "hom_inv" => HomInv,
            "main_theorem" => MainTheorem,
            "complete_reducibility" => CompleteReducibility,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        TASK_NAMES[self as usize]
    }

    /// Whether the task is about a named `A`-module.
    pub fn needs_module(self) -> bool {
        use TaskKind::*;
        matches!(self, Inertia | Cocycle | InducedSimplicity | HomInv | MainTheorem | CompleteReducibility)
    }
}

/// A validated task.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub kind: TaskKind,
    pub module: Option<String>,
    pub gamma: Option<usize>,
}

/// A job with every object constructed and validated.
#[derive(Debug, Clone)]
pub struct Job {
    pub name: String,
    pub tol: f64,
    pub seed: u64,
    pub action: AlgebraAction,
    pub modules: BTreeMap<String, Module>,
    pub tasks: Vec<Task>,
}

impl Job {
    pub fn algebra(&self) -> &Arc<Algebra> {
        self.action.target()
    }
}

pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_job(path: &str) -> Result<JobSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_job(&text)
}

fn scalar(s: &Scalar) -> Complex64 {
    Complex64::new(s[0], s[1])
}

fn matrix(spec: &MatrixSpec, n: usize, location: &str) -> Result<Mat, CliError> {
    match spec {
        MatrixSpec::Rows(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::invalid(location, format!("expected a {n} x {n} matrix")));
            }
            Ok(Mat::from_fn(n, n, |i, j| scalar(&rows[i][j])))
        }
        MatrixSpec::Flat(flat) => {
            if flat.len() != n * n {
                return Err(CliError::invalid(
                    location,
                    format!("expected {} row-major entries, got {}", n * n, flat.len()),
                ));
            }
            Ok(Mat::from_fn(n, n, |i, j| scalar(&flat[i * n + j])))
        }
    }
}

pub fn matrix_spec(m: &Mat) -> MatrixSpec {
    MatrixSpec::Rows(
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect(),
    )
}

/// Constructs and validates every object of the job. `tol` and `seed`
/// override the values in the file.
pub fn build_job(spec: &JobSpec, tol: Option<f64>, seed: Option<u64>) -> Result<Job, CliError> {
    let tol = tol.or(spec.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::invalid("tol", format!("tolerance must be positive, got {tol}")));
    }
    let seed = seed.or(spec.seed).unwrap_or(DEFAULT_SEED);

    let a = &spec.algebra;
    if a.unit.len() != a.dim {
        return Err(CliError::invalid(
            "algebra.unit",
            format!("expected {} entries, got {}", a.dim, a.unit.len()),
        ));
    }
    let unit = Vector::from_iterator(a.dim, a.unit.iter().map(scalar));
    let mult: Vec<_> = a.mult.iter().map(|&(i, j, k, c)| (i, j, k, scalar(&c))).collect();
    let algebra = Arc::new(make_algebra(a.dim, &mult, unit, tol).map_err(|e| CliError::validation("algebra", e))?);

    let g = &spec.group;
    if g.table.len() != g.order {
        return Err(CliError::invalid(
            "group.table",
            format!("order is {} but the table has {} rows", g.order, g.table.len()),
        ));
    }
    let group = make_group(g.table.clone()).map_err(|e| CliError::validation("group.table", e))?;

    if spec.action.mats.len() != g.order {
        return Err(CliError::invalid(
            "action.mats",
            format!("expected {} matrices, got {}", g.order, spec.action.mats.len()),
        ));
    }
    let mats = spec
        .action
        .mats
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(m, a.dim, &format!("action.mats[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let action = make_action(group, algebra.clone(), mats, tol).map_err(|e| CliError::validation("action", e))?;

    let mut modules = BTreeMap::new();
    for (name, m) in &spec.modules {
        let loc = format!("modules.{name}");
        if m.rho.len() != a.dim {
            return Err(CliError::invalid(
                format!("{loc}.rho"),
                format!("expected {} matrices, got {}", a.dim, m.rho.len()),
            ));
        }
        let rho = m
            .rho
            .iter()
            .enumerate()
            .map(|(i, r)| matrix(r, m.dim, &format!("{loc}.rho[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let module = make_module(algebra.clone(), rho, tol).map_err(|e| CliError::validation(&loc, e))?;
        modules.insert(name.clone(), module);
    }

    let mut tasks = Vec::with_capacity(spec.tasks.len());
    for (i, t) in spec.tasks.iter().enumerate() {
        let loc = format!("tasks[{i}]");
        let kind = TaskKind::parse(&t.task).ok_or_else(|| {
            CliError::invalid(&loc, format!("unknown task '{}', expected one of {}", t.task, TASK_NAMES.join(", ")))
        })?;
        match (&t.module, kind.needs_module()) {
            (None, true) => return Err(CliError::invalid(&loc, format!("task '{}' needs a module", t.task))),
            (Some(_), false) => {
                return Err(CliError::invalid(&loc, format!("task '{}' takes no module", t.task)));
            }
            (Some(name), true) if !modules.contains_key(name) => {
                return Err(CliError::invalid(&loc, format!("unknown module '{name}'")));
            }
            _ => {}
        }
        if t.gamma.is_some() && kind != TaskKind::InducedSimplicity {
            return Err(CliError::invalid(&loc, format!("task '{}' takes no gamma", t.task)));
        }
        tasks.push(Task { kind, module: t.module.clone(), gamma: t.gamma });
    }

    Ok(Job {
        name: spec.name.clone().unwrap_or_else(|| "job".into()),
        tol,
        seed,
        action,
        modules,
        tasks,
    })
}
