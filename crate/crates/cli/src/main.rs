use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pathint_cli::{list_experiments, parse_overrides, run, ExperimentConfig, OUTPUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(name = "pathint", about = "Run path-integral and free-field experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment from a config file, with optional `--key value` overrides.
    Run {
        /// INI-style config with `experiment = <name>` and parameter lines.
        #[arg(long)]
        config: PathBuf,
        /// Parameter overrides as `--key value` or `--key=value`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
        overrides: Vec<String>,
    },
    /// List experiments with their parameters and defaults.
    #[command(after_help = format!("Output goes to ${OUTPUT_DIR_ENV} unless output_dir is set."))]
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            let mut out = std::io::stdout().lock();
            for (name, params, description) in list_experiments() {
                let _ = writeln!(out, "{name}: {description}");
                for p in params {
                    let _ = writeln!(out, "    {} ({}, default {}): {}", p.name, p.kind.name(), p.default, p.help);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, overrides } => {
            let cfg = parse_overrides(&overrides)
                .and_then(|o| ExperimentConfig::from_file(&config)?.with_overrides(o));
            let cfg = match cfg {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match run(&cfg) {
                Ok(report) => {
                    print!("{}", report.to_text());
                    println!("wall_time = {:.3} s", report.wall_time.as_secs_f64());
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
