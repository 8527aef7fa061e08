use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schwinger_verify::{catalog, run, RunConfig, Selection};

/// Checks the closed forms of the six-oscillator SU(3) construction against
/// brute-force oracles on truncated Fock spaces.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Suite to run: algebra, lowdim, orbits, h0, kappa, class-e, appendix, induced or all.
    #[arg(long, default_value = "all")]
    suite: Selection,

    /// Six-mode cutoff; every check uses its own default when omitted.
    #[arg(long)]
    cutoff: Option<usize>,

    /// Largest p + q in SU(3) tables; every check uses its own default when omitted.
    #[arg(long)]
    pmax: Option<u32>,

    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 50_000)]
    samples: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Multiplies every tolerance.
    #[arg(long = "tol-scale", default_value_t = 1.0)]
    tol_scale: f64,

    /// JSON report path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Optional CSV projection (id, status, value, expected).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the checks of a suite with their anchors.
    Describe {
        /// Suite name or all.
        suite: Selection,
    },
}

fn write_report(cli: &Cli, report: &schwinger_verify::Report) -> io::Result<()> {
    let json = report.to_json().map_err(io::Error::other)?;
    match &cli.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(json.as_bytes())?;
            f.write_all(b"\n")?;
            f.flush()?;
        }
        None => println!("{json}"),
    }
    if let Some(path) = &cli.csv {
        report.write_csv(File::create(path)?).map_err(io::Error::other)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(Command::Describe { suite }) = &cli.command {
        print!("{}", catalog::describe(&suite.suites()));
        return ExitCode::SUCCESS;
    }
    let cfg = RunConfig {
        suites: cli.suite.suites(),
        cutoff: cli.cutoff,
        p_max: cli.pmax,
        samples: cli.samples,
        seed: cli.seed,
        tol_scale: cli.tol_scale,
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_report(&cli, &report) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    let s = &report.body.summary;
    eprintln!("{} checks, {} passed, {} failed", s.total, s.passed, s.failed);
    for r in report.body.records.iter().filter(|r| !r.passed()) {
        eprintln!("FAIL {}:{} [{}] {}", r.suite, r.id, r.anchor, r.diagnostics.as_deref().unwrap_or(""));
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
