//! Batch CLI over the library pipelines. Exit codes: 0 success, 2 config,
//! 3 certificate rejection, 4 non-convergence, 5 failed hard assertion.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use rtmc::config::{fixture, ExperimentConfig, FIXTURE_NAMES};
use rtmc::error::Error;
use rtmc::runner::{run, RunOptions, Subcommand as Stage};

#[derive(Parser)]
#[command(
    name = "rtmc",
    version,
    about = "Random topological Markov chains: pressure, conformal measures, and Perron-Frobenius data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a big-images/preimages certificate.
    CheckBip(RunArgs),
    /// Estimate the relative Gurevič pressure and run divergence diagnostics.
    Pressure(RunArgs),
    /// Eigenvalues, eigenfunction, operator convergence, and recurrence.
    Rpf(RunArgs),
    /// Random conformal measures by two independent constructions.
    Conformal(RunArgs),
    /// Two-sided Gibbs bounds over all short cylinders.
    Gibbs(RunArgs),
    /// Random Perron-Frobenius triples for the matrix cocycle.
    MatrixPf(RunArgs),
    /// Stationary distributions of a Markov chain in a random environment.
    Stationary(RunArgs),
    /// Every stage in sequence, sharing intermediate results.
    All(RunArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
struct RunArgs {
    /// Path to a JSON experiment config.
    #[arg(long, group = "source", value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in fixture name (FS2, FS2-BERNOULLI, GM, GEO, P2, P2-STOCHASTIC,
    /// DS3, NOBIP).
    #[arg(long, group = "source", value_name = "NAME")]
    fixture: Option<String>,
    /// Output directory (default: config `output.dir`, then `out/<name>`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for the parallel stages.
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
    /// Override the config seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match exec(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn exec(cli: Cli) -> Result<(), Error> {
    let (stage, args) = match &cli.cmd {
        Cmd::CheckBip(a) => (Stage::CheckBip, a),
        Cmd::Pressure(a) => (Stage::Pressure, a),
        Cmd::Rpf(a) => (Stage::Rpf, a),
        Cmd::Conformal(a) => (Stage::Conformal, a),
        Cmd::Gibbs(a) => (Stage::Gibbs, a),
        Cmd::MatrixPf(a) => (Stage::MatrixPf, a),
        Cmd::Stationary(a) => (Stage::Stationary, a),
        Cmd::All(a) => (Stage::All, a),
    };

    let config = load(args)?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(config.name.to_ascii_lowercase()));
    let opts = RunOptions { out_dir: out_dir.clone(), threads: args.threads, seed: args.seed };

    let report = run(&config, stage, &opts)?;
    println!("{} on {}: ok", stage.name(), report.name);
    if let Some(p) = &report.pressure {
        println!("  pressure {:.12} (gap {:.3e})", p.value, p.gap);
    }
    if let Some(l) = &report.lambda {
        for row in &l.rows {
            println!("  state {}: lambda {:.12}", row.state, row.lambda);
        }
    }
    if let Some(c) = &report.conformal {
        println!("  conformality residual {:.3e}", c.residual_max);
    }
    if let Some(m) = &report.matrix_pf {
        println!("  average log lambda {:.12}", m.average_log_lambda);
    }
    println!(
        "  {} checks passed; report in {}",
        report.assertions.len(),
        out_dir.join("report.json").display()
    );
    Ok(())
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    match (&args.config, &args.fixture) {
        (Some(path), None) => ExperimentConfig::from_path(path),
        (None, Some(name)) => fixture(name).map_err(|e| match e {
            Error::UnknownFixture(n) => Error::UnknownFixture(format!(
                "{n} (available: {})",
                FIXTURE_NAMES.join(", ")
            )),
            other => other,
        }),
        // clap's arg group guarantees exactly one source
        _ => unreachable!("argument group enforces one source"),
    }
}
