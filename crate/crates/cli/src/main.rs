//! `feynpath`: runs one experiment and writes plot-ready CSV or a JSON summary.
//!
//! Exit codes: 0 success, 2 invalid input (bad flags, config or parameters),
//! 3 numerical failure (tolerance not met, blow-up, backend disagreement).

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod params;
mod selftest;

use clap::{Parser, Subcommand, ValueEnum};
use feynpath::io::KeyValues;
use feynpath::{Error, ErrorKind, Result};
use output::Report;
use params::Params;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "feynpath", version, about = "Path-integral propagators, PIMC and quantum-optics calculators")]
struct Cli {
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for the stochastic subcommands (pimc, dpa --samples)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; defaults to FEYNPATH_THREADS, then to all cores
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key = value file; keys are the subcommand's long flag names (pimc uses its native keys)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run the built-in oracle checks and exit
    #[arg(long)]
    self_test: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form free or oscillator kernel
    #[command(allow_negative_numbers = true)]
    Kernel(commands::KernelArgs),
    /// Time-sliced kernel compared with the closed form
    #[command(allow_negative_numbers = true)]
    Lattice(commands::LatticeArgs),
    /// Evolve a Gaussian packet on a grid
    #[command(allow_negative_numbers = true)]
    Evolve(commands::EvolveArgs),
    /// Two-slit detector pattern
    #[command(allow_negative_numbers = true)]
    DoubleSlit(commands::DoubleSlitArgs),
    /// Paraxial beam through a graded-index medium
    #[command(allow_negative_numbers = true)]
    Grin(commands::GrinArgs),
    /// Degenerate parametric amplifier in the coherent-state representation
    #[command(allow_negative_numbers = true)]
    Dpa(commands::DpaArgs),
    /// Path-integral Monte Carlo for a particle in a 1D potential
    #[command(allow_negative_numbers = true)]
    Pimc(commands::PimcArgs),
    /// Pair-generation probability in a lossy nonlinear slab
    #[command(allow_negative_numbers = true)]
    Spdc(commands::SpdcArgs),
    /// Spontaneous emission rate in an absorbing dielectric
    #[command(allow_negative_numbers = true)]
    Emission(commands::EmissionArgs),
    /// Effective dielectric function over a frequency range
    #[command(allow_negative_numbers = true)]
    Dielectric(commands::DielectricArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Kernel(_) => "kernel",
            Command::Lattice(_) => "lattice",
            Command::Evolve(_) => "evolve",
            Command::DoubleSlit(_) => "double-slit",
            Command::Grin(_) => "grin",
            Command::Dpa(_) => "dpa",
            Command::Pimc(_) => "pimc",
            Command::Spdc(_) => "spdc",
            Command::Emission(_) => "emission",
            Command::Dielectric(_) => "dielectric",
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Validation => EXIT_VALIDATION,
        ErrorKind::Numerical => EXIT_NUMERICAL,
    }
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("FEYNPATH_THREADS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| Error::InvalidInput(format!("FEYNPATH_THREADS: cannot parse {v:?}")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(Error::InvalidInput("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn load_config(path: Option<&Path>) -> Result<(KeyValues, PathBuf)> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            Ok((KeyValues::parse(&text)?, base))
        }
        None => Ok((KeyValues::default(), PathBuf::from("."))),
    }
}

fn execute(command: Command, cli: &Cli, report: &mut Report) -> Result<()> {
    let (kv, base) = load_config(cli.config.as_deref())?;
    if let Command::Pimc(a) = command {
        return commands::pimc(a, kv, cli.seed, &base, report);
    }
    let mut p = Params::new(kv);
    match command {
        Command::Kernel(a) => commands::kernel(a, &mut p, report)?,
        Command::Lattice(a) => commands::lattice(a, &mut p, report)?,
        Command::Evolve(a) => commands::evolve(a, &mut p, report)?,
        Command::DoubleSlit(a) => commands::double_slit(a, &mut p, report)?,
        Command::Grin(a) => commands::grin(a, &mut p, &base, report)?,
        Command::Dpa(a) => commands::dpa(a, &mut p, cli.seed, report)?,
        Command::Spdc(a) => commands::spdc(a, &mut p, report)?,
        Command::Emission(a) => commands::emission(a, &mut p, report)?,
        Command::Dielectric(a) => commands::dielectric(a, &mut p, report)?,
        Command::Pimc(_) => unreachable!("handled above"),
    }
    report.params = p.finish()?;
    Ok(())
}

fn emit(report: &Report, cli: &Cli) -> Result<()> {
    let text = match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    if cli.self_test {
        return if selftest::run() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NUMERICAL) };
    }
    let Some(command) = cli.command.take() else {
        eprintln!("error: a subcommand or --self-test is required (see --help)");
        return ExitCode::from(EXIT_VALIDATION);
    };
    let mut report = Report::new(command.name());
    let outcome = execute(command, &cli, &mut report);
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
        report.errors.push(e.to_string());
        report.columns.clear();
        report.rows.clear();
        // a failed run still leaves a machine-readable record in JSON mode
        if cli.format == Format::Csv {
            return ExitCode::from(exit_code(e));
        }
    }
    if let Err(e) = emit(&report, &cli) {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => ExitCode::from(exit_code(&e)),
    }
}
