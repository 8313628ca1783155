//! Command-line front end for the annulus-harmonics library: certified
//! eigenvalue tables, kernel-expansion demos, Green-function evaluation and
//! extension, and identity verification suites.
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 verification failure,
//! 3 requested truncation cannot meet the tail tolerance.  Errors are
//! reported as a single JSON object on stderr.

mod commands;
mod config;
mod emit;
mod fault;
mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{PointArg, PoleArg, RangeArg};
use fault::CliError;

#[derive(Parser)]
#[command(
    name = "annulus-harmonics",
    version,
    about = "Eigenvalues, expansions, and the Green function of an annular cylinder"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: config::Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified table of the radial eigenvalues rho_{nu,m}
    Zeros {
        /// Order nu >= 0 of the cross product
        #[arg(long)]
        nu: f64,
        /// Number of consecutive eigenvalues, starting at m = 1
        #[arg(long)]
        count: u32,
    },
    /// Partial sums of the tent-kernel expansion against its closed form
    Series {
        /// Order nu >= 0 of the expansion
        #[arg(long)]
        nu: f64,
        /// Peak location of the tent kernel, 1 < s < b
        #[arg(long)]
        s: f64,
        /// Number of expansion terms
        #[arg(long, default_value_t = 200)]
        m_terms: u32,
        /// Evaluation points spread evenly over [1, b]
        #[arg(long, default_value_t = 50)]
        points: u32,
    },
    /// Green function of the annular cylinder at a single point
    Eval {
        /// Pole position `ry,zy` with 1 < ry < b
        #[arg(long, allow_hyphen_values = true)]
        pole: PoleArg,
        /// Field point `r,gamma,z`: radius, cosine of the angular
        /// separation from the pole, axial position
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
    },
    /// Green function on a rectangular grid of field points
    Field {
        /// Pole position `ry,zy` with 1 < ry < b
        #[arg(long, allow_hyphen_values = true)]
        pole: PoleArg,
        /// Radial samples `lo:hi:count`
        #[arg(long, allow_hyphen_values = true)]
        r: RangeArg,
        /// Angular-cosine samples `lo:hi:count`
        #[arg(long, allow_hyphen_values = true)]
        gamma: RangeArg,
        /// Axial samples `lo:hi:count`
        #[arg(long, allow_hyphen_values = true)]
        z: RangeArg,
    },
    /// Harmonic extension of the Green function beyond the walls
    Extend {
        /// Pole position `ry,zy` with 1 < ry < b
        #[arg(long, allow_hyphen_values = true)]
        pole: PoleArg,
        /// Extended-region point `r,gamma,z`
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
    },
    /// Identity suites with a machine-readable pass/fail report
    #[command(long_about = verify::long_help())]
    Verify {
        /// Run a single suite by name (default: all suites)
        #[arg(long)]
        suite: Option<String>,
    },
}

fn fail(e: CliError) -> i32 {
    // render() already ends with a newline.
    eprint!("{}", e.to_json().render());
    e.exit_code()
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let file_text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => return fail(CliError::Io(format!("reading {}: {e}", path.display()))),
        },
        None => None,
    };
    let cfg = match config::RunConfig::resolve(file_text.as_deref(), &cli.overrides) {
        Ok(cfg) => cfg,
        Err(msg) => return fail(CliError::Config(msg)),
    };

    let result = match &cli.command {
        Command::Zeros { nu, count } => commands::zeros(&cfg, *nu, *count),
        Command::Series {
            nu,
            s,
            m_terms,
            points,
        } => commands::series(&cfg, *nu, *s, *m_terms, *points),
        Command::Eval { pole, point } => commands::eval(&cfg, pole, point),
        Command::Field { pole, r, gamma, z } => commands::field(&cfg, pole, r, gamma, z),
        Command::Extend { pole, point } => commands::extend(&cfg, pole, point),
        Command::Verify { suite } => verify::verify(&cfg, suite.as_deref()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => fail(e),
    }
}

fn main() {
    std::process::exit(run());
}
