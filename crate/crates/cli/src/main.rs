use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polysym_cli::{parse_scenario, render_structured, render_text, run_scenario, SuiteFilter};

#[derive(Parser)]
#[command(name = "polysym", version, about = "Exact checkers for poly-symplectic and poly-Poisson structures on polynomial charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checker suites of one or more scenario files.
    Check(CheckArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Scenario files (strict TOML, see docs/FORMATS.md).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Check groups to run: `all` or a comma-separated list of group names.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    suite: Vec<String>,
    /// Override the sample seed of every scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the sample count of every scenario.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the sample box bound of every scenario.
    #[arg(long, name = "box")]
    box_bound: Option<i64>,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["text", "structured"])]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check(args) => check(args),
    }
}

fn check(args: CheckArgs) -> ExitCode {
    let filter = SuiteFilter::named(args.suite.clone());
    let mut reports = Vec::new();
    let mut internal_error = false;
    for file in &args.files {
        let text = match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", file.display());
                return ExitCode::from(2);
            }
        };
        let mut scenario = match parse_scenario(&text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", file.display());
                return ExitCode::from(2);
            }
        };
        if let Some(seed) = args.seed {
            scenario.sample.seed = seed;
        }
        if let Some(count) = args.samples {
            scenario.sample.count = count;
        }
        if let Some(b) = args.box_bound {
            scenario.sample.box_bound = b;
        }
        match run_scenario(&scenario, &filter) {
            Ok(report) => {
                if report.has_errors() {
                    internal_error = true;
                }
                reports.push(report);
            }
            Err(e) => {
                eprintln!("error: {}: {e}", file.display());
                return ExitCode::from(2);
            }
        }
    }
    let rendered = match args.format.as_str() {
        "structured" => render_structured(&reports),
        _ => render_text(&reports),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    let unexpected = reports.iter().any(|r| !r.unexpected().is_empty());
    if internal_error {
        ExitCode::from(2)
    } else if unexpected {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
