use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dyad_cli::{Format, OutputOverride, RunConfig};
use dyad_core::verify::{self, Level};

#[derive(Parser)]
#[command(name = "dyad", version, about = "Two-atom shared-excitation dynamics, forces and emission")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a JSON run config over its (k0R, T) grid
    Run {
        config: PathBuf,
        /// Overrides output.path from the config
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the self-check suites
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run {
            config,
            output,
            format,
            threads,
        } => {
            let out = OutputOverride {
                path: output,
                format: format.map(|f| match f {
                    FormatArg::Csv => Format::Csv,
                    FormatArg::Json => Format::Json,
                }),
            };
            match RunConfig::load(&config).and_then(|cfg| dyad_cli::run(&cfg, &out, threads)) {
                Ok(summary) => {
                    println!("{summary}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}", e.to_json());
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Command::Verify { level, json } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = verify::run(level);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
            } else {
                print!("{report}");
                let passed = report.checks.iter().filter(|c| c.passed).count();
                println!("{passed} of {} checks passed", report.checks.len());
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
    }
}
