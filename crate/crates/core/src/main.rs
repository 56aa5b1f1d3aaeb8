//! Command-line front end: parse JSON inputs, dispatch to the library, emit
//! machine-readable reports on stdout and diagnostics on stderr.
//!
//! Exit codes: 0 pass, 1 verification failure or internal disagreement,
//! 2 input error, 3 enumeration budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use tamebrauer::oracle::DEFAULT_BUDGET;
use tamebrauer::report::{
    self, ClassInput, ExtensionInput, SymbolInput, TowerRunConfig, VerifyMode,
};
use tamebrauer::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tamebrauer", version, about = "Exact criteria and invariants for tame totally ramified division algebras over strictly Henselian fields", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the symbol-algebra division criterion for a JSON input file.
    Symbol {
        /// JSON file: {"schema":1, "field": {...}, "symbol": {...}}
        input: PathBuf,
        /// Re-derive the verdict with the enumeration oracle and compare.
        #[arg(long)]
        oracle: bool,
        /// Enumeration budget (overrides TAMEBRAUER_BUDGET; default 10^6).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Report invariants, Draxl decomposition and primary parts of a class.
    Class {
        /// JSON file: {"schema":1, "field": {...}, "level": N, "form": [[...]]}
        input: PathBuf,
        /// Cross-check the index with the enumeration oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Scalar-extend a class along an extension field and report both
    /// division verdicts (index preservation and the lattice criterion).
    Extend {
        /// Class JSON file.
        class: PathBuf,
        /// Extension field JSON file: {"schema":1, "field": {...}}.
        extension: PathBuf,
    },
    /// Build tower levels and verify the unique-centre and
    /// centre-intersection claims.
    Tower {
        /// The tower prime.
        #[arg(long)]
        p: u64,
        /// Number of levels to construct.
        #[arg(long)]
        levels: usize,
        /// Which verifications to run: all, center, or intersection.
        #[arg(long, default_value = "all")]
        verify: String,
        /// Re-run every unique-centre sweep oracle-backed and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        budget: Option<u64>,
        /// Residue characteristic of the base field (0 or a prime != p).
        #[arg(long, default_value_t = 0)]
        residue_char: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(EXIT_BUDGET),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Symbol { input, oracle, budget } => {
            let parsed: SymbolInput = read_json(&input)?;
            let budget = if oracle { Some(resolve_budget(budget)?) } else { None };
            let report = report::symbol_report(parsed, budget)?;
            emit(&report)?;
            Ok(agreement_code(report.oracle_agrees))
        }
        Command::Class { input, oracle, budget } => {
            let parsed: ClassInput = read_json(&input)?;
            let class = parsed.into_class()?;
            let budget = if oracle { Some(resolve_budget(budget)?) } else { None };
            let report = report::class_report(&class, budget)?;
            emit(&report)?;
            Ok(agreement_code(report.oracle_agrees))
        }
        Command::Extend { class, extension } => {
            let class = read_json::<ClassInput>(&class)?.into_class()?;
            let target = read_json::<ExtensionInput>(&extension)?.into_field()?;
            let report = report::extend_report(&class, &target)?;
            emit(&report)?;
            if report.consistent() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("error: division verdict and lattice criterion disagree (bug signal)");
                Ok(ExitCode::from(EXIT_VERIFY))
            }
        }
        Command::Tower { p, levels, verify, oracle, budget, residue_char } => {
            let cfg = TowerRunConfig {
                p,
                levels,
                verify: verify.parse::<VerifyMode>()?,
                oracle,
                budget: resolve_budget(budget)?,
                residue_char,
            };
            let report = report::tower_report(&cfg)?;
            emit(&report)?;
            if report.oracle_agrees == Some(false) {
                eprintln!("error: oracle-backed sweep disagrees with the verifier (bug signal)");
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed: see the survivors / intersection entries");
                Ok(ExitCode::from(EXIT_VERIFY))
            }
        }
    }
}

fn agreement_code(oracle_agrees: Option<bool>) -> ExitCode {
    if oracle_agrees == Some(false) {
        eprintln!("error: oracle disagrees with the implementation (bug signal)");
        ExitCode::from(EXIT_VERIFY)
    } else {
        ExitCode::SUCCESS
    }
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("TAMEBRAUER_BUDGET") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| Error::InvalidInput(format!("TAMEBRAUER_BUDGET is not a number: {text}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        Error::InvalidInput(format!("{} at field `{}`: {}", path.display(), e.path(), e.inner()))
    })
}

fn emit<T: Serialize>(report: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}
