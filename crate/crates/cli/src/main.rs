//! `osg`: quantum products, invariant suites and the uniqueness certifier
//! for IG(2, 2n+1) from the command line.
//!
//! Exit status is 0 on success, 1 when the computation ran but came out
//! negative (a failed suite, an inconclusive certificate, a deformation
//! violating positivity) and 2 for bad input. In JSON mode nothing is written
//! to stdout unless the whole result is ready.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use osg_core::Error;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "osg", version, about = "Quantum cohomology of IG(2, 2n+1) and a deformation certifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Common {
    /// Rank n of IG(2, 2n+1).
    #[arg(long = "n", value_name = "INT")]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    PerPair,
    PerMu,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fm,
    Replay,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteArg {
    #[value(alias = "lemma23")]
    Identities,
    Assoc,
    Pairing,
    Betti,
    Negativity,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialArg {
    #[value(name = "1")]
    One,
    #[value(name = "11")]
    OneOne,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List Schubert classes, optionally of one degree.
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: Option<i64>,
    },
    /// Evaluate a class expression such as "tau[1,1]*tau[5,2] + 2*q".
    Mult {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// Expand a product by tau_1 or tau_(1,1) with the Pieri rules.
    Pieri {
        #[command(flatten)]
        common: Common,
        #[arg(long = "class", value_enum)]
        class: SpecialArg,
        #[arg(long = "with", value_parser = commands::parse_index, value_name = "L1,L2")]
        with: (i64, i64),
    },
    /// One Gromov–Witten structure constant.
    Gw {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = commands::parse_index, allow_hyphen_values = true)]
        lambda: (i64, i64),
        #[arg(long, value_parser = commands::parse_index, allow_hyphen_values = true)]
        mu: (i64, i64),
        #[arg(long, value_parser = commands::parse_index, allow_hyphen_values = true)]
        nu: (i64, i64),
        #[arg(long)]
        d: u32,
    },
    /// Run an invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Random triples for associativity beyond n = 3.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Certify that positivity forces the trivial deformation.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::PerPair)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Method::Fm)]
        method: Method,
        #[arg(long, value_name = "PATH")]
        emit_certificate: Option<PathBuf>,
        /// Ceiling on intermediate constraints during elimination.
        #[arg(long, default_value_t = 200_000)]
        max_constraints: usize,
    },
    /// Check positivity of products by sigma_(1,1) for a deformation file.
    CheckStar {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
    },
    /// Build a multiplication table file, or load and check one.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH", conflicts_with = "load")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        load: Option<PathBuf>,
        #[arg(long, requires = "load")]
        revalidate: bool,
    },
}

impl Command {
    fn common(&self) -> Common {
        match self {
            Command::Basis { common, .. }
            | Command::Mult { common, .. }
            | Command::Pieri { common, .. }
            | Command::Gw { common, .. }
            | Command::Verify { common, .. }
            | Command::Certify { common, .. }
            | Command::CheckStar { common, .. }
            | Command::Table { common, .. } => *common,
        }
    }
}

/// Why a command could not produce a result.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Math(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Math(_) => "math",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Math(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnsupportedRank { .. }
            | Error::InvalidIndex { .. }
            | Error::RankMismatch { .. }
            | Error::Syntax { .. }
            | Error::InvalidRational(_)
            | Error::InvalidDocument(_)
            | Error::MalformedDeformation(_)
            | Error::Json(_) => Failure::Usage(msg),
            _ => Failure::Math(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.command.common().format;
    match commands::run(&cli.command) {
        Ok(out) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize"),
                Format::Text => out.text,
                Format::Latex => out.latex,
            };
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{body}");
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(f) => {
            if format == Format::Json {
                let doc = json!({ "error": { "kind": f.kind(), "message": f.message() } });
                eprintln!("{doc}");
            } else {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
