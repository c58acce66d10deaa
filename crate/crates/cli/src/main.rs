use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilborn::NormKind;
use nilborn_cli::commands::{self, CliError, Outcome};
use nilborn_cli::report::render_table;

#[derive(Parser)]
#[command(
    name = "nilborn",
    version,
    about = "Exact finite Born sums for acyclic transition graphs"
)]
struct Cli {
    /// Operator and vector norm used in truncation reports.
    #[arg(long, global = true, default_value = "inf", value_parser = parse_norm)]
    norm: NormKind,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Acyclicity, depth, determinant and norms of a system file.
    Analyze { spec: PathBuf },
    /// Solve (I - T)|psi> = |phi>, exactly or truncated at --order.
    Solve {
        spec: PathBuf,
        /// 1-based basis index, or a TOML file with `amplitudes = [{ re, im }, ...]`.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Interference regime of a four-level diamond.
    Classify { spec: PathBuf },
    /// Time the finite sum against dense LU on a seeded random DAG.
    Bench {
        #[arg(long, default_value_t = 200)]
        dim: usize,
        #[arg(long, default_value_t = 0.01)]
        density: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Print a bundled system file: cascade, diamond or double-diamond.
    Scenario { name: String },
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse::<NormKind>().map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze { spec } => Ok(commands::analyze(&commands::load_system(spec)?)),
        Command::Solve { spec, phi, order } => {
            let system = commands::load_system(spec)?;
            let phi = commands::parse_phi(phi, system.transfer.dim())?;
            commands::solve(&system, &phi, *order, cli.norm)
        }
        Command::Classify { spec } => commands::classify(&commands::load_system(spec)?),
        Command::Bench { dim, density, seed } => commands::run_bench(*dim, *density, *seed),
        Command::Scenario { .. } => unreachable!("handled before dispatch"),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for cyclic systems here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Command::Scenario { name } = &cli.command {
        return match commands::scenario_text(name) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        };
    }
    match run(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).expect("report serializes")
                ),
                Format::Table => print!("{}", render_table(&outcome.report)),
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
