use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skewgroup_cli::{cmd_fixture, cmd_run, cmd_validate, render_json, render_text, render_timing, RunOptions};

#[derive(Parser)]
#[command(name = "skewgroup", version, about = "Verify module correspondences for skew group algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a job file and construct every object in it.
    Validate {
        path: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the tasks of a job file and print a report.
    Run {
        path: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print a built-in instance as a job file.
    Fixture { name: String },
}

#[derive(Args)]
struct Flags {
    /// Print the machine-readable JSON report.
    #[arg(long)]
    json: bool,
    /// Override the job tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the job seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Only run tasks with this name (repeatable).
    #[arg(long = "task")]
    tasks: Vec<String>,
    /// No text output; the exit code carries the verdict.
    #[arg(long)]
    quiet: bool,
}

impl Flags {
    fn options(&self) -> RunOptions {
        RunOptions { tol: self.tol, seed: self.seed, tasks: self.tasks.clone() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { path, flags } => match cmd_validate(&path, &flags.options()) {
            Ok(job) => {
                if !flags.quiet {
                    println!(
                        "ok: {} (A dim {}, G order {}, {} modules, {} tasks)",
                        job.name,
                        job.algebra().dim(),
                        job.action.group().order(),
                        job.modules.len(),
                        job.tasks.len()
                    );
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Run { path, flags } => match cmd_run(&path, &flags.options()) {
            Ok(report) => {
                if flags.json {
                    println!("{}", render_json(&report));
                } else if !flags.quiet {
                    print!("{}", render_text(&report));
                }
                if !flags.quiet {
                    eprint!("{}", render_timing(&report));
                }
                report.exit_code()
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Fixture { name } => match cmd_fixture(&name) {
            Ok(json) => {
                println!("{json}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}
