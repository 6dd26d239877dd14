//! `marginal-choice`: test marginal stochastic choice data against choice models.
//!
//! Exit status is 0 when the verdict is positive (or an object was
//! constructed), 1 when it is negative, and 2 on usage or input errors.

mod commands;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use marginal_choice::generators::Model;
use marginal_choice::Error;

#[derive(Parser)]
#[command(name = "marginal-choice", version, about = "Rationalizability tests for marginal stochastic choice data")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,

    /// Convergence tolerance for the Luce inversion; other verdicts are exact.
    #[arg(long, default_value_t = 1e-10, global = true)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Core membership of lambda, with slacks of every inequality.
    Check { file: PathBuf },
    /// Find a conditional choice system or a violated inequality.
    Rationalize { file: PathBuf },
    /// Fit a random utility model.
    Rum { file: PathBuf },
    /// Recover Luce weights.
    Luce { file: PathBuf },
    /// Recover independent consideration probabilities (dataset with `outside_option`).
    Ircs { file: PathBuf },
    /// Test the temptation and self-control model.
    Tsc {
        file: PathBuf,
        /// Feasible menus, e.g. '{a};{c};{a,b}'; overrides the file's `feasible`.
        #[arg(long)]
        feasible: Option<String>,
    },
    /// Test preference for flexibility.
    Pf {
        file: PathBuf,
        #[arg(long)]
        feasible: Option<String>,
    },
    /// Build a menu distribution from availability data (`xi` and `lambda`).
    Avail { file: PathBuf },
    /// Generate a random dataset from a model.
    Gen {
        /// rum, luce, ircs, tsc or avail.
        model: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances, with consecutive seeds.
        #[arg(long, default_value_t = 1)]
        batch: usize,
        /// Write one file per instance into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn run_gen(
    format: OutputFormat,
    model: &str,
    n: usize,
    seed: u64,
    batch: usize,
    out: Option<&Path>,
) -> Result<(), Error> {
    let model: Model = model.parse()?;
    if batch == 0 {
        return Err(Error::InvalidParameters("--batch must be positive".into()));
    }
    let outputs = commands::gen(model, n, seed, batch)?;
    let mut stdout = std::io::stdout().lock();
    for o in &outputs {
        let text = match format {
            OutputFormat::Text => o.file.to_json(),
            OutputFormat::Json => serde_json::to_string_pretty(&json!({
                "seed": o.seed,
                "dataset": o.file,
                "parameters": o.parameters,
            }))
            .expect("plain data serializes"),
        };
        match out {
            Some(dir) => {
                let path = dir.join(format!("{}-n{n}-{}.json", model_name(model), o.seed));
                std::fs::write(&path, text + "\n")
                    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
                let _ = writeln!(stdout, "{}", path.display());
            }
            None => {
                let _ = writeln!(stdout, "{text}");
            }
        }
    }
    Ok(())
}

fn model_name(model: Model) -> &'static str {
    match model {
        Model::Rum => "rum",
        Model::Luce => "luce",
        Model::Ircs => "ircs",
        Model::Tsc => "tsc",
        Model::Availability => "avail",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };

    let (file, command) = match &cli.command {
        Command::Gen {
            model,
            n,
            seed,
            batch,
            out,
        } => {
            return match run_gen(cli.format, model, *n, *seed, *batch, out.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Check { file }
        | Command::Rationalize { file }
        | Command::Rum { file }
        | Command::Luce { file }
        | Command::Ircs { file }
        | Command::Avail { file }
        | Command::Tsc { file, .. }
        | Command::Pf { file, .. } => (file, &cli.command),
    };

    let dataset = match commands::load(file) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let result = match command {
        Command::Check { .. } => commands::check(&dataset),
        Command::Rationalize { .. } => commands::rationalize(&dataset),
        Command::Rum { .. } => commands::rum(&dataset),
        Command::Luce { .. } => commands::luce(&dataset, cli.tolerance),
        Command::Ircs { .. } => commands::ircs(&dataset),
        Command::Tsc { feasible, .. } => commands::tsc(&dataset, feasible.as_deref()),
        Command::Pf { feasible, .. } => commands::pf(&dataset, feasible.as_deref()),
        Command::Avail { .. } => commands::avail(&dataset),
        Command::Gen { .. } => unreachable!("handled above"),
    };
    match result {
        Ok(report) => {
            match cli.format {
                OutputFormat::Text => print!("{}", report.text()),
                OutputFormat::Json => println!("{}", report.json()),
            }
            ExitCode::from(report.verdict.exit_code())
        }
        Err(e) => fail(e),
    }
}
