mod commands;
mod error;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use speclimit::config::{Analysis, RunConfig, SCHEMA_VERSION};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::commands::{Context, Outcome};
use crate::error::CliError;

const DEFAULT_OUT_DIR: &str = "speclimit-out";
const RECORD_FILE: &str = "run_record.json";

#[derive(Parser)]
#[command(name = "speclimit", about = "Level resolvability by classical period measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output_dir`.
    #[arg(long, env = "SPECLIMIT_OUT_DIR")]
    out: Option<PathBuf>,
    /// RNG seed; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels and classical periods.
    Spectrum(RunArgs),
    /// y(n) table, threshold and plot data.
    Criterion(RunArgs),
    /// Measurement-noise ensembles and the standard quantum limit.
    Noise(RunArgs),
    /// Monte Carlo period-timing sweep.
    Simulate(RunArgs),
    /// All of the above.
    Report(RunArgs),
}

impl Command {
    fn split(self) -> (Analysis, RunArgs) {
        match self {
            Command::Spectrum(a) => (Analysis::Spectrum, a),
            Command::Criterion(a) => (Analysis::Criterion, a),
            Command::Noise(a) => (Analysis::Noise, a),
            Command::Simulate(a) => (Analysis::Simulate, a),
            Command::Report(a) => (Analysis::Report, a),
        }
    }
}

#[derive(Serialize)]
struct FileDigest {
    name: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    toolkit: &'static str,
    version: &'static str,
    schema_version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a RunConfig,
    started_at: String,
    finished_at: String,
    files: Vec<FileDigest>,
}

fn now() -> String {
    OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_default()
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Output { path, source })
}

fn execute(analysis: Analysis, args: RunArgs) -> Result<Vec<String>, CliError> {
    let started_at = now();
    let text = fs::read_to_string(&args.config)
        .map_err(|source| CliError::ConfigRead { path: args.config.clone(), source })?;
    let (config, model) = RunConfig::load(&text)?;
    if let Some(requested) = config.analysis {
        if requested != analysis {
            return Err(CliError::AnalysisMismatch { config: requested.name(), command: analysis.name() });
        }
    }
    let seed = args.seed.unwrap_or(config.seed);
    let dir = args
        .out
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));

    let ctx = Context { config: &config, model: &model, seed };
    let Outcome { files, mut lines } = commands::run(analysis, &ctx)?;

    fs::create_dir_all(&dir).map_err(|source| CliError::Output { path: dir.clone(), source })?;
    let mut digests = Vec::with_capacity(files.len());
    for f in &files {
        write(&dir, &f.name, &f.contents)?;
        digests.push(FileDigest {
            name: f.name.clone(),
            bytes: f.contents.len(),
            sha256: hex::encode(Sha256::digest(f.contents.as_bytes())),
        });
    }
    let record = RunRecord {
        toolkit: "speclimit",
        version: env!("CARGO_PKG_VERSION"),
        schema_version: SCHEMA_VERSION,
        command: analysis.name(),
        seed,
        config: &config,
        started_at,
        finished_at: now(),
        files: digests,
    };
    write(&dir, RECORD_FILE, &speclimit::io::to_json(&record)?)?;
    lines.push(format!("wrote {} files and {RECORD_FILE} to {}", files.len(), dir.display()));
    Ok(lines)
}

fn main() -> ExitCode {
    let version = format!("{} (config schema {SCHEMA_VERSION})", env!("CARGO_PKG_VERSION"));
    let matches = match Cli::command().version(version).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let (analysis, args) = cli.command.split();

    std::panic::set_hook(Box::new(|_| {}));
    let result = std::panic::catch_unwind(|| execute(analysis, args)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(CliError::Internal(msg))
    });
    match result {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
