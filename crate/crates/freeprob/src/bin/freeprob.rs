use clap::{Parser, Subcommand};
use freeprob::report::Report;
use freeprob::scenario::{bundled_scenario, parse_scenario, BUNDLED};
use freeprob::suites::{run_scenario, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_SCHEMA: u8 = 2;

/// Verification runner for operator-valued free probability identities.
#[derive(Parser)]
#[command(name = "freeprob", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a bundled scenario) and print its report.
    Run {
        /// Path to a scenario JSON file.
        path: Option<PathBuf>,
        /// Name of a bundled scenario to run instead of a file.
        #[arg(long, conflicts_with = "path")]
        bundled: Option<String>,
        /// Base random seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Numeric tolerance for norm comparisons.
        #[arg(long)]
        tol: Option<f64>,
        /// Fock truncation depth (default: longest word + 1).
        #[arg(long)]
        depth: Option<usize>,
        /// Trial count for randomized checks.
        #[arg(long)]
        trials: Option<u64>,
        /// Write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the bundled scenarios.
    List,
    /// Print a bundled scenario's JSON.
    Show {
        /// Bundled scenario name.
        name: String,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            path,
            bundled,
            seed,
            tol,
            depth,
            trials,
            out,
        } => {
            let config = RunConfig {
                seed,
                tol,
                depth,
                trials,
            };
            run(path, bundled, config, out)
        }
        Command::List => {
            for &(name, text) in BUNDLED {
                let label = parse_scenario(text)
                    .map(|s| s.name)
                    .unwrap_or_else(|_| "<invalid>".into());
                println!("{name:<14} {label}");
            }
            ExitCode::SUCCESS
        }
        Command::Show { name } => match bundled_scenario(&name) {
            Some(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: no bundled scenario named {name:?}");
                ExitCode::from(EXIT_SCHEMA)
            }
        },
    }
}

fn run(
    path: Option<PathBuf>,
    bundled: Option<String>,
    config: RunConfig,
    out: Option<PathBuf>,
) -> ExitCode {
    let text = match (&path, &bundled) {
        (Some(p), None) => match std::fs::read_to_string(p) {
            Ok(text) => text,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return ExitCode::from(EXIT_SCHEMA);
            }
        },
        (None, Some(name)) => match bundled_scenario(name) {
            Some(text) => text.to_string(),
            None => {
                eprintln!("error: no bundled scenario named {name:?}");
                return ExitCode::from(EXIT_SCHEMA);
            }
        },
        _ => {
            eprintln!("error: give a scenario path or --bundled <name>");
            return ExitCode::from(EXIT_SCHEMA);
        }
    };

    let scenario = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SCHEMA);
        }
    };

    let report = match run_scenario(&scenario, text.as_bytes(), &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SCHEMA);
        }
    };

    if let Some(out_path) = out {
        if let Err(e) = write_report(&report, &out_path) {
            eprintln!("error: cannot write {}: {e}", out_path.display());
            return ExitCode::from(EXIT_SCHEMA);
        }
    }
    print!("{}", report.render_text());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn write_report(report: &Report, path: &PathBuf) -> std::io::Result<()> {
    std::fs::write(path, report.to_json())
}
