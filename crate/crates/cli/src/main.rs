//! `pcf`: sieve, verify and classify quadratic PCF maps over the rationals.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Overrides, RunConfig};
use crate::error::CliResult;

#[derive(Parser, Debug)]
#[command(name = "pcf", version, about = "Search for and certify post-critically finite quadratic maps over Q")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Use the first N odd primes.
    #[arg(long, global = true, value_name = "N")]
    primes: Option<usize>,
    /// Explicit comma-separated prime list (overrides --primes).
    #[arg(long, global = true, value_delimiter = ',', value_name = "P,..")]
    prime_list: Option<Vec<u32>>,
    /// Height bound on sigma1.
    #[arg(long, global = true)]
    h1: Option<u64>,
    /// Height bound on sigma2.
    #[arg(long, global = true)]
    h2: Option<u64>,
    /// Verifier iteration budget per critical orbit.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Verifier height cutoff.
    #[arg(long, global = true)]
    height_cutoff: Option<u64>,
    /// Preperiodic search: height bound on starting points.
    #[arg(long, global = true)]
    height_bound: Option<u64>,
    /// Preperiodic search: steps per starting point.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Preperiodic search: height at which an orbit counts as wandering.
    #[arg(long, global = true)]
    preper_cutoff: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write artifacts into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Period database file.
    #[arg(long, global = true, env = "PCF_SIEVE_DB", value_name = "FILE")]
    db: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct MapArg {
    /// Map as "[f2,f1,f0]/[g2,g1,g0]".
    #[arg(long, allow_hyphen_values = true)]
    map: Option<String>,
    /// Normal form with the given sigma-pair, "s1,s2".
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the period database for the configured primes.
    BuildDb {
        /// Destination file (default: --db).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the line-oriented text format.
        #[arg(long)]
        text: bool,
    },
    /// Sieve all sigma-pairs within the height bounds; survivors as TSV.
    Sieve,
    /// Certify one map as PCF by exact critical-orbit iteration.
    Verify {
        #[command(flatten)]
        target: MapArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sieve, then verify every survivor.
    Pipeline,
    /// Critical-orbit portrait of one map.
    Portrait {
        #[command(flatten)]
        target: MapArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Rational preperiodic points of one map.
    Preper {
        #[command(flatten)]
        target: MapArg,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Classify a twist of z^2 or a map conjugate to 1/z^2.
    ClassifyTwist {
        /// Twist z/2 + b/z of z^2; give b with -b.
        #[arg(long, conflicts_with = "psi2", requires = "b")]
        psi1: bool,
        #[arg(short = 'b', allow_hyphen_values = true)]
        b: Option<String>,
        /// A map conjugate to 1/z^2, given by --theta, --t or --map.
        #[arg(long)]
        psi2: bool,
        /// Parameters "d,k" of (kz^2-2dz+dk)/(z^2-2kz+d).
        #[arg(long, allow_hyphen_values = true, requires = "psi2")]
        theta: Option<String>,
        /// The map t/z^2.
        #[arg(long, allow_hyphen_values = true, requires = "psi2")]
        t: Option<String>,
        /// Explicit map "[f2,f1,f0]/[g2,g1,g0]".
        #[arg(long, allow_hyphen_values = true, requires = "psi2")]
        map: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List the reference structure catalog.
    Catalog {
        /// Show one class, e.g. T4.empty.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Skip the criteria that need a period database.
        #[arg(long)]
        offline: bool,
    },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            primes: self.primes,
            prime_list: self.prime_list.clone(),
            h1: self.h1,
            h2: self.h2,
            budget: self.budget,
            height_cutoff: self.height_cutoff,
            height_bound: self.height_bound,
            steps: self.steps,
            preper_cutoff: self.preper_cutoff,
            workers: self.workers,
            output_dir: self.out_dir.clone(),
            db_path: self.db.clone(),
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    cfg.apply(cli.overrides())?;
    if let Some(n) = cfg.workers {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::BuildDb { output, text } => commands::build_db(&cfg, output, text),
        Command::Sieve => commands::sieve(&cfg),
        Command::Verify { target, format } => commands::verify(&cfg, &target, format),
        Command::Pipeline => commands::pipeline(&cfg),
        Command::Portrait { target, format } => commands::portrait(&cfg, &target, format),
        Command::Preper { target, format } => commands::preper(&cfg, &target, format),
        Command::ClassifyTwist { psi1, b, psi2, theta, t, map, format } => {
            commands::classify_twist(&cfg, psi1, b, psi2, theta, t, map, format)
        }
        Command::Catalog { id, format } => commands::catalog(&cfg, id.as_deref(), format),
        Command::Selftest { offline } => commands::selftest(&cfg, offline),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (cat, code) = e.category();
            eprintln!("error[{cat}]: {e}");
            ExitCode::from(code)
        }
    }
}
