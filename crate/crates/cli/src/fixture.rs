//! Built-in instances rendered as job files.

use std::collections::BTreeMap;

use skewgroup::fixtures::{fixture, Instance};
use skewgroup::numeric::{DEFAULT_SEED, DEFAULT_TOL};

use crate::error::CliError;
use crate::job::{matrix_spec, ActionSpec, AlgebraSpec, GroupSpec, JobSpec, ModuleSpec, TaskSpec, TASK_NAMES};

/// Name of the module emitted with every fixture.
pub const FIXTURE_MODULE: &str = "M";

/// The job file of an instance, running every task on its module.
pub fn instance_job(inst: &Instance) -> JobSpec {
    let a = inst.algebra();
    let algebra = AlgebraSpec {
        dim: a.dim(),
        unit: a.unit().iter().map(|z| [z.re, z.im]).collect(),
        mult: a.sparse_mult().into_iter().map(|(i, j, k, z)| (i, j, k, [z.re, z.im])).collect(),
    };
    let group = GroupSpec { order: inst.group().order(), table: inst.group().table().to_vec() };
    let action = ActionSpec { mats: inst.action.mats().iter().map(matrix_spec).collect() };
    let mut modules = BTreeMap::new();
    modules.insert(
        FIXTURE_MODULE.to_string(),
        ModuleSpec { dim: inst.module.dim(), rho: inst.module.rho_all().iter().map(matrix_spec).collect() },
    );
    let tasks = TASK_NAMES
        .iter()
        .map(|&name| {
            let kind = crate::job::TaskKind::parse(name).expect("known task");
            TaskSpec {
                task: name.to_string(),
                module: kind.needs_module().then(|| FIXTURE_MODULE.to_string()),
                gamma: None,
            }
        })
        .collect();
    JobSpec {
        name: Some(inst.name.clone()),
        algebra,
        group,
        action,
        modules,
        tasks,
        tol: Some(DEFAULT_TOL),
        seed: Some(DEFAULT_SEED),
    }
}

pub fn fixture_job(name: &str) -> Result<JobSpec, CliError> {
    match fixture(name, DEFAULT_TOL) {
        Ok(inst) => Ok(instance_job(&inst)),
        Err(skewgroup::Error::UnknownFixture(n)) => Err(CliError::UnknownFixture(n)),
        Err(e) => Err(CliError::validation(format!("fixture {name}"), e)),
    }
}
