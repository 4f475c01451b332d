//! `tripleroot`: command-line access to root numbers, orbit combinatorics,
//! the Weil-pairing invariant and Gauss sums, with JSON or text reports.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use tripleroot::Error;

#[derive(Parser, Debug)]
#[command(name = "tripleroot", version, about)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Seed for the auxiliary point sequences used by pairing evaluations.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Text => "text",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Global root number and conductor of the (twisted) triple product.
    RootNumber(RootNumberArgs),
    /// SL2 orbits of marking triples, diamond and Galois actions.
    Orbits(OrbitsArgs),
    /// The pairing invariant o(E; C1, C2, C3) on an automatically chosen curve.
    OInvariant(OInvariantArgs),
    /// Exact Gauss sum of a character of F_q^x.
    Gauss(GaussArgs),
}

#[derive(Args, Debug)]
pub struct RootNumberArgs {
    #[arg(long)]
    pub p: u64,
    /// Eigenvalues a_p(f_i), e.g. "+,-,+".
    #[arg(long, allow_hyphen_values = true, default_value = "+,+,+")]
    pub signs: String,
    /// Twist by the quadratic character modulo p.
    #[arg(long)]
    pub twisted: bool,
}

#[derive(Args, Debug)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub p: u64,
    /// Largest p for which orbits are enumerated.
    #[arg(long, default_value_t = tripleroot::orbits::DEFAULT_ORBIT_BOUND)]
    pub orbit_bound: u64,
}

#[derive(Args, Debug)]
pub struct OInvariantArgs {
    #[arg(long)]
    pub p: u64,
    /// Coefficients (a_i, b_i) of the generators a_i P + b_i Q.
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value = "(1,0);(0,1);(-1,-1)"
    )]
    pub coeffs: String,
    /// Largest base prime tried in the curve search.
    #[arg(long, default_value_t = tripleroot::pairing::DEFAULT_MAX_ELL)]
    pub max_ell: u64,
    /// Largest extension degree tried in the curve search.
    #[arg(long, default_value_t = tripleroot::pairing::DEFAULT_MAX_DEGREE)]
    pub max_k: u32,
    /// Write the selected curve to this file as JSON.
    #[arg(long)]
    pub manifest: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct GaussArgs {
    /// Prime modulus; without --char-exponent the Legendre character is used.
    #[arg(long, conflicts_with = "q")]
    pub p: Option<u64>,
    /// Prime modulus (same as --p).
    #[arg(long)]
    pub q: Option<u64>,
    /// Exponent e of the character g^k -> exp(2 pi i e k / (q - 1)).
    #[arg(long, allow_hyphen_values = true)]
    pub char_exponent: Option<i64>,
}

/// A finished command: everything that goes into the report.
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub results: Map<String, Value>,
    pub warnings: Vec<String>,
    pub anchor: Map<String, Value>,
}

/// Failure of a command, with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconsistency(_) | Error::NumericInstability(_) => 3,
            Error::ResourceLimit(_) | Error::RetryExhausted(_) => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn inconsistent(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

fn render(report: &Report, format: Format, seed: u64) -> String {
    let mut config = report.config.clone();
    config.insert("format".into(), json!(format.as_str()));
    config.insert("seed".into(), json!(seed));
    match format {
        Format::Json => {
            let doc = json!({
                "command": report.command,
                "config": config,
                "results": report.results,
                "warnings": report.warnings,
                "paper_anchor": report.anchor,
            });
            serde_json::to_string_pretty(&doc).expect("JSON values serialize")
        }
        Format::Text => {
            let mut out = format!("command: {}\n", report.command);
            for (section, map) in [("config", &config), ("results", &report.results)] {
                out.push_str(&format!("{section}:\n"));
                for (k, v) in map {
                    out.push_str(&format!("  {k}: {v}\n"));
                }
            }
            for w in &report.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            for (k, v) in &report.anchor {
                out.push_str(&format!("anchor {k}: {}\n", v.as_str().unwrap_or_default()));
            }
            out.trim_end().to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::RootNumber(args) => commands::root_number(args),
        Command::Orbits(args) => commands::orbits(args),
        Command::OInvariant(args) => commands::o_invariant(args, cli.seed),
        Command::Gauss(args) => commands::gauss(args),
    };
    match outcome {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", render(&report, cli.format, cli.seed)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
