//! Job-file driven front end: validate a job, run its tasks, emit fixtures.

pub mod error;
pub mod fixture;
pub mod job;
pub mod run;

pub use error::CliError;
pub use job::{build_job, parse_job, read_job, Job, JobSpec};
pub use run::{render_json, render_text, render_timing, run_job, Report};

/// Overrides taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    /// Task names to run; all when empty.
    pub tasks: Vec<String>,
}

/// Parses and constructs every object of the job file at `path`.
pub fn cmd_validate(path: &str, opts: &RunOptions) -> Result<Job, CliError> {
    let spec = read_job(path)?;
    build_job(&spec, opts.tol, opts.seed)
}

pub fn cmd_run(path: &str, opts: &RunOptions) -> Result<Report, CliError> {
    for name in &opts.tasks {
        if job::TaskKind::parse(name).is_none() {
            return Err(CliError::invalid("--task", format!("unknown task '{name}'")));
        }
    }
    let job = cmd_validate(path, opts)?;
    Ok(run_job(&job, &opts.tasks))
}

/// The named fixture as pretty-printed job JSON.
pub fn cmd_fixture(name: &str) -> Result<String, CliError> {
    let spec = fixture::fixture_job(name)?;
    Ok(serde_json::to_string_pretty(&spec).expect("job serializes"))
}
