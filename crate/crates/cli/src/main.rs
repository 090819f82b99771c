use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spg_builder::Strategy;
use spg_cli::{run_check, run_export, run_matrix, run_solve_pg, run_stats, CliError, Config, Report};
use spg_model::generate::{gen_buffer, gen_connect_four, gen_tictactoe};

#[derive(Parser)]
#[command(name = "spg", version, about = "Symbolic parity game model checking for linear processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a benchmark specification
    Gen {
        #[command(subcommand)]
        model: Model,
        /// Output file (standard output if omitted)
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Instantiate and solve; the last line is `result: true|false`
    Check {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the dependency matrix
    Matrix {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the instantiated game in PGSolver format
    Export {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Largest game to write
        #[arg(long, default_value_t = spg_cli::DEFAULT_EXPLICIT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        explicit_cap: u64,
    },
    /// Solve a PGSolver file explicitly
    SolvePg { file: PathBuf },
    /// Instantiate only and report sizes
    Stats {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum Model {
    /// One-place-per-slot FIFO buffer
    Buffer {
        #[arg(long, default_value_t = 2)]
        capacity: usize,
        #[arg(long, default_value_t = 2)]
        domain: usize,
    },
    /// Tic Tac Toe
    Tictactoe,
    /// Connect Four
    Four {
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, default_value_t = 4)]
        rows: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Partition {
    Simple,
    Split,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Translate with fresh equations per summand (default)
    #[arg(long, conflicts_with = "unstructured")]
    structured: bool,
    /// Translate with one equation per fixpoint
    #[arg(long)]
    unstructured: bool,
    #[arg(long, value_enum, default_value_t = Partition::Simple)]
    partition: Partition,
    /// Abort instantiation beyond this many vertices
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: Option<u64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Formula name from the specification, or formula text
    #[arg(long)]
    formula: Option<String>,
}

impl RunArgs {
    fn config(&self) -> Config {
        let strategy = match self.partition {
            Partition::Simple => Strategy::Simple,
            Partition::Split => Strategy::Split,
        };
        if !self.unstructured && strategy == Strategy::Split {
            eprintln!("warning: the structured translation already gives one group per summand; split adds nothing");
        }
        Config {
            structured: !self.unstructured,
            strategy,
            max_states: self.max_states,
            formula: self.formula.clone(),
            ..Config::default()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError {
        phase: "read",
        kind: spg_cli::ErrorKind::Input,
        msg: format!("{}: {e}", path.display()),
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError {
            phase: "write",
            kind: spg_cli::ErrorKind::Input,
            msg: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(r: &Report, format: ReportFormat) {
    match format {
        ReportFormat::Text => print!("{}", r.text()),
        ReportFormat::Json => println!("{}", r.json()),
    }
}

fn verdict(v: bool) {
    println!("result: {v}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { model, output } => {
            let text = match model {
                Model::Buffer { capacity, domain } => gen_buffer(capacity, domain),
                Model::Tictactoe => Ok(gen_tictactoe()),
                Model::Four { cols, rows } => gen_connect_four(cols, rows),
            }
            .map_err(|e| CliError {
                phase: "gen",
                kind: spg_cli::ErrorKind::Input,
                msg: e.to_string(),
            })?;
            write_out(output.as_deref(), &text)
        }
        Command::Check { spec, run } => {
            let r = run_check(&read(&spec)?, &run.config())?;
            print_report(&r, run.report);
            verdict(r.verdict.expect("check reports a verdict"));
            Ok(())
        }
        Command::Matrix { spec, run } => write_out(None, &run_matrix(&read(&spec)?, &run.config())?),
        Command::Export {
            spec,
            run,
            output,
            explicit_cap,
        } => {
            let config = Config {
                explicit_cap,
                ..run.config()
            };
            write_out(output.as_deref(), &run_export(&read(&spec)?, &config)?)
        }
        Command::SolvePg { file } => {
            verdict(run_solve_pg(&read(&file)?)?);
            Ok(())
        }
        Command::Stats { spec, run } => {
            let r = run_stats(&read(&spec)?, &run.config())?;
            print_report(&r, run.report);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
