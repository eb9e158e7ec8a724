use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Check, compose and solve finite open dynamics written as laxdyn/1 documents.
///
/// Exit status: 0 clean, 1 law violations, 2 usage or parse error, 3 oracle disagreement.
#[derive(Debug, Parser)]
#[command(name = "laxdyn", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document and check its structural invariants.
    Validate { file: PathBuf },
    /// Report every law violation and the determinism class.
    Check {
        file: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compose two transitions (F ⊙ G) or two dynamorphisms (F ∘ G); G is applied first.
    Compose {
        f: PathBuf,
        g: PathBuf,
        /// Where to write the result; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a dynamorphism or open dynamorphism.
    Morphism {
        file: PathBuf,
        /// Source dynamic, if the document does not import one.
        #[arg(long)]
        source: Option<PathBuf>,
        /// Target dynamic, if the document does not import one.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the realizations of an open dynamic.
    Realize {
        file: PathBuf,
        /// Only realizations defined at every clock state.
        #[arg(long)]
        total: bool,
        /// Only realizations that no other realization extends.
        #[arg(long)]
        maximal: bool,
        /// Stop after this many realizations.
        #[arg(long)]
        limit: Option<usize>,
        /// Cross-check against the brute-force enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sample one trajectory of an open dynamic.
    Run {
        file: PathBuf,
        #[arg(long = "lambda")]
        lam: String,
        #[arg(long)]
        start: String,
        /// Comma-separated arrows, applied left to right.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(status) => ExitCode::from(status as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
