use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geophase::sweep::{parse_angle, phase_row, run_sweep, write_csv, SweepSpec};
use geophase::validate::{run_validation, Tolerances};
use geophase::{figures, Dynamics, Error, ModelParams};

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Geometric phase of a damped two-level atom under four master equations.
#[derive(Parser)]
#[command(name = "geophase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phase after one quasi-period for a single polar angle.
    Phase {
        #[command(flatten)]
        model: ModelArgs,
        /// Polar angle: radians or a pi multiple such as `0.5pi`.
        #[arg(long, value_parser = angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Phase over a grid of polar angles, written as CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = angle, default_value = "0.01pi")]
        theta_start: f64,
        #[arg(long, value_parser = angle, default_value = "0.99pi")]
        theta_end: f64,
        #[arg(long, default_value_t = 99)]
        theta_count: usize,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        /// Output file; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// The six figure datasets, one CSV per figure.
    Figures {
        #[arg(long, default_value = "figures")]
        output: PathBuf,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Oracle, limit and positivity checks; exit 1 on any failure.
    Validate {
        /// Override a limit, e.g. `--tol rk4=1e-7` (repeatable).
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tol: Vec<String>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Markovian,
    Correlated,
    Memory,
    Post,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Markovian decay rate.
    #[arg(long)]
    gamma2: Option<f64>,
    /// Band rate (correlated) or inverse memory time (memory, post).
    #[arg(long)]
    gamma: Option<f64>,
    /// Dissipation constant (memory, post).
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

impl ModelArgs {
    fn build(&self) -> Result<ModelParams, Error> {
        let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required for this model")));
        let forbid = |v: Option<f64>, flag: &str| match v {
            Some(_) => Err(usage(format!("--{flag} does not apply to this model"))),
            None => Ok(()),
        };
        let dynamics = match self.model {
            ModelKind::Markovian => {
                forbid(self.gamma, "gamma")?;
                forbid(self.gamma0, "gamma0")?;
                Dynamics::MarkovianProjection { gamma2: need(self.gamma2, "gamma2")? }
            }
            ModelKind::Correlated => {
                forbid(self.gamma2, "gamma2")?;
                forbid(self.gamma0, "gamma0")?;
                Dynamics::CorrelatedProjection { gamma: need(self.gamma, "gamma")? }
            }
            ModelKind::Memory | ModelKind::Post => {
                forbid(self.gamma2, "gamma2")?;
                let gamma0 = need(self.gamma0, "gamma0")?;
                let gamma = need(self.gamma, "gamma")?;
                if matches!(self.model, ModelKind::Memory) {
                    Dynamics::MemoryKernel { gamma0, gamma }
                } else {
                    Dynamics::PostMarkovian { gamma0, gamma }
                }
            }
        };
        ModelParams::new(dynamics, self.omega)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::InvalidAngle(_)
        | Error::NegativeTime(_)
        | Error::InvalidParameter { .. }
        | Error::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Phase { model, theta, steps } => {
            let row = phase_row(&model.build()?, theta, steps)?;
            write_csv(&[row], output(None)?)?;
        }
        Command::Sweep { model, theta_start, theta_end, theta_count, steps, output: path, threads } => {
            let spec = SweepSpec { model: model.build()?, theta_start, theta_end, theta_count, steps };
            spec.validate()?;
            let rows = run_sweep(&spec, threads)?;
            write_csv(&rows, output(path.as_ref())?)?;
        }
        Command::Figures { output: dir, steps, threads } => {
            for path in figures::write_figures(&dir, steps, threads)? {
                println!("{}", path.display());
            }
        }
        Command::Validate { tol, threads } => {
            let mut tolerances = Tolerances::default();
            for spec in &tol {
                tolerances.apply(spec)?;
            }
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| usage(format!("thread pool: {e}")))?;
            }
            let report = run_validation(&tolerances)?;
            report.write_table(io::stdout().lock())?;
            if !report.passed() {
                for failure in report.failures() {
                    eprintln!("failed: {}", failure.name);
                }
                return Ok(EXIT_VALIDATION);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
