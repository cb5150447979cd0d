//! `biprod` command-line front end.

mod commands;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use biprod::perm_search::{BruteCap, Strategy, Target};
use biprod::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "biprod", version, about = "Hopf automorphisms of biproducts and the permutation sets Aut_σ ⊆ Γ ⊆ Sym_σ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// JSON document, inline (starting with `{` or `[`) or a file path.
    #[arg(long)]
    input: Option<String>,
    /// Largest |G| for which Sym(G) may be scanned.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    brute_cap: u64,
    /// Also allow scanning Sym(G) for |G| = 9.
    #[arg(long)]
    allow_nine: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orders, σ-orbits, fixed subgroup and its cosets.
    GroupReport {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate Aut_σ, Γ or Sym_σ^± for one or more instances.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "gamma", value_parser = ["aut-sigma", "gamma", "sym-minus", "sym-plus"])]
        target: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Constrained)]
        strategy: StrategyArg,
    },
    /// Run a theorem suite over the instance library.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = verify::THEOREMS)]
        theorem: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Constrained,
    Brute,
}

/// Fully resolved run configuration, embedded in every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    pub brute_cap: usize,
    pub allow_nine: bool,
    pub format: Format,
    pub deterministic: bool,
}

impl RunConfig {
    pub fn cap(&self) -> BruteCap {
        BruteCap { cap: self.brute_cap, allow_nine: self.allow_nine }
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Resource(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Config(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap(_) => Failure::Resource(e.to_string()),
            Error::InternalInconsistency(_) => Failure::Verification(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

/// Rendered report plus whether every check passed.
pub struct Rendered {
    pub json: Value,
    pub tsv: String,
    pub passed: bool,
}

fn read_input(src: &Option<String>) -> Outcome<Value> {
    let Some(src) = src else { return Ok(Value::Null) };
    let trimmed = src.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        src.clone()
    } else {
        fs::read_to_string(src).map_err(|e| Failure::Config(format!("cannot read {src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("malformed JSON input: {e}")))
}

fn run(cli: Cli) -> Outcome<(Rendered, Common)> {
    let (common, command, target, theorem, strategy) = match cli.command {
        Command::GroupReport { common } => (common, "group-report", None, None, None),
        Command::Enumerate { common, target, strategy } => {
            let s = match strategy {
                StrategyArg::Constrained => Strategy::Constrained,
                StrategyArg::Brute => Strategy::Brute,
            };
            (common, "enumerate", Some(target), None, Some(s))
        }
        Command::Verify { common, theorem } => (common, "verify", None, Some(theorem), None),
    };
    let cfg = RunConfig {
        command: command.into(),
        input: read_input(&common.input)?,
        target,
        theorem,
        strategy,
        brute_cap: common.brute_cap as usize,
        allow_nine: common.allow_nine,
        format: common.format,
        deterministic: true,
    };
    let rendered = match command {
        "group-report" => commands::group_report(&cfg)?,
        "enumerate" => {
            let target = Target::parse(cfg.target.as_deref().unwrap_or("gamma"))
                .ok_or_else(|| Failure::Config("unknown target".into()))?;
            commands::enumerate(&cfg, target)?
        }
        _ => verify::run(&cfg)?,
    };
    Ok((rendered, common))
}

fn emit(r: &Rendered, common: &Common) -> Outcome<()> {
    let text = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.json).map_err(|e| Failure::Config(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Tsv => r.tsv.clone(),
    };
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
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
    let result = run(cli).and_then(|(r, common)| {
        emit(&r, &common)?;
        if r.passed {
            Ok(())
        } else {
            Err(Failure::Verification("one or more checks failed".into()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Config(m) => format!("configuration error: {m}"),
                Failure::Resource(m) => m.clone(),
                Failure::Verification(m) => format!("verification failed: {m}"),
            };
            eprintln!("biprod: {msg}");
            ExitCode::from(f.code())
        }
    }
}
