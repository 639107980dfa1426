use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ces_core::cli::{
    potential_table, scatter_table, solve_table, verify_table, zero_energy_table, Format, Table,
};
use ces_core::oracle::{GridSpec, Spacing};
use ces_core::potentials::Sign;
use ces_core::solutions::{Branch, Coordinate};
use ces_core::verify::{all_passed, run_suite, Strictness, VerifyConfig};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Tabulate the exponential-type partner potentials, their exact
/// solutions and scattering amplitudes, and verify them numerically.
#[derive(Parser)]
#[command(name = "ces", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output format: csv or json.
    #[arg(long, default_value = "csv", global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Grid {
    /// Sample range as start:end:count.
    #[arg(long, visible_alias = "x", allow_hyphen_values = true)]
    grid: String,
    /// Space the samples logarithmically.
    #[arg(long)]
    log: bool,
}

impl Grid {
    fn spec(&self) -> ces_core::Result<GridSpec> {
        let spacing = if self.log {
            Spacing::Log
        } else {
            Spacing::Uniform
        };
        GridSpec::parse(&self.grid, spacing)
    }
}

#[derive(Subcommand)]
enum Command {
    /// W, V+, V- and a Hulthén reference on an x grid.
    Potential {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// One exact solution and its local equation residual.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        /// I or II.
        #[arg(long, default_value = "I")]
        branch: Branch,
        /// plus or minus.
        #[arg(long, default_value = "plus")]
        sign: Sign,
        /// Sampling variable: x, z or v.
        #[arg(long, default_value = "z")]
        var: Coordinate,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Scattering amplitudes of both partners over an omega range.
    Scatter {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        /// Omega range as start:end:count.
        #[arg(long, visible_alias = "grid", allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        output: Output,
    },
    /// The zero-energy pair in closed and hypergeometric form.
    #[command(name = "zero-energy")]
    ZeroEnergy {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Run the verification suite; exits 1 if any check fails.
    Verify {
        /// Comma-separated couplings.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        m: Option<Vec<f64>>,
        /// Comma-separated frequencies.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        omega: Option<Vec<f64>>,
        /// strict or loose (tolerances x100).
        #[arg(long, default_value = "strict")]
        strictness: Strictness,
        /// Shift c1 in the solutions by this amount (negative control).
        #[arg(long, hide = true, num_args = 0..=1, default_missing_value = "1e-3")]
        inject_fault: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(table: &Table, output: &Output) -> io::Result<()> {
    // CSV has no room for metadata, so it goes to stderr
    if output.format == Format::Csv && !table.meta().is_empty() {
        eprintln!("# {}", serde_json::Value::Object(table.meta().clone()));
    }
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    table.write_to(output.format, &mut sink)?;
    sink.flush()
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<ces_core::Error> for Failure {
    fn from(e: ces_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Potential { m, grid, output } => {
            emit(&potential_table(m, &grid.spec()?)?, &output)?
        }
        Command::Solve {
            m,
            omega,
            branch,
            sign,
            var,
            grid,
            output,
        } => emit(
            &solve_table(m, omega, branch, sign, var, &grid.spec()?)?,
            &output,
        )?,
        Command::Scatter {
            m,
            omega,
            log,
            output,
        } => {
            let spacing = if log { Spacing::Log } else { Spacing::Uniform };
            emit(
                &scatter_table(m, &GridSpec::parse(&omega, spacing)?)?,
                &output,
            )?
        }
        Command::ZeroEnergy { m, grid, output } => {
            emit(&zero_energy_table(m, &grid.spec()?)?, &output)?
        }
        Command::Verify {
            m,
            omega,
            strictness,
            inject_fault,
            output,
        } => {
            let mut cfg = VerifyConfig::from_env()?;
            if let Some(ms) = m {
                cfg.ms = ms;
            }
            if let Some(omegas) = omega {
                cfg.omegas = omegas;
            }
            cfg.strictness = strictness;
            cfg.fault = inject_fault;
            let reports = run_suite(&cfg);
            for r in reports.iter().filter(|r| !r.passed) {
                eprintln!("{r}");
            }
            emit(&verify_table(&reports)?, &output)?;
            if !all_passed(&reports) {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY_FAILED),
    }
}
