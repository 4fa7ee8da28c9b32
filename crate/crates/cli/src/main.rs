// SPDX-License-Identifier: Apache-2.0

//! `oraclec`: compiles a classical i1 function into a quantum oracle.
//!
//! Exit status: 0 on success, 1 on any input or compilation error, 2 when
//! verification finds a mismatch.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use oracle_core::ir::{parse_module, IfConversion};
use oracle_core::opt::{OptimizeOptions, Pass, XagDatabase, COLLAPSE_LIMIT};
use oracle_core::pipeline::{compile_function, PipelineOptions};
use oracle_core::qir::{emit_dot, emit_qir, lint, operation_name, EmitConfig};
use oracle_core::sim::{VerifyMode, DEFAULT_SAMPLES};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Qir,
    Dot,
    Stats,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IfConv {
    /// Expand every branch path (one MUX per conditional branch visit).
    Paths,
    /// Merge definitions at join points using reaching conditions.
    Merge,
}

#[derive(Debug, Parser)]
#[command(
    name = "oraclec",
    version,
    about = "Compile an i1 IR function into a reversible quantum oracle"
)]
struct Cli {
    /// Input IR file, or `-` for stdin.
    input: PathBuf,
    /// Function to compile; may be omitted when the module defines one.
    #[arg(long)]
    function: Option<String>,
    #[arg(long, value_enum, default_value = "qir")]
    emit: Emit,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=4))]
    cut_size: u8,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..))]
    cuts_per_node: u16,
    /// Collapse networks with at most this many inputs (at most 8).
    #[arg(long, default_value_t = COLLAPSE_LIMIT as u8, value_parser = clap::value_parser!(u8).range(0..=8))]
    collapse_threshold: u8,
    /// Comma-separated optimization passes, run in order.
    #[arg(long, value_delimiter = ',', default_value = "collapse,rewrite")]
    passes: Vec<String>,
    #[arg(long, value_enum, default_value = "paths")]
    if_conversion: IfConv,
    /// Check the oracle on every input against the IR interpreter.
    #[arg(long)]
    verify: bool,
    /// Check random inputs instead of all of them (4096 when no count is given).
    #[arg(long, value_name = "COUNT")]
    verify_samples: Option<Option<usize>>,
    /// Seed for sampled verification.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the verification report as JSON.
    #[arg(long)]
    verify_report: Option<PathBuf>,
    /// Template database cache file.
    #[arg(long)]
    db_path: Option<PathBuf>,
    /// Rebuild the template database even if the cache is valid.
    #[arg(long)]
    rebuild_db: bool,
}

fn default_db_path() -> PathBuf {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("oraclec").join("xag-db-v1.txt")
}

fn load_database(path: &Path, rebuild: bool) -> Result<XagDatabase, String> {
    if !rebuild {
        match XagDatabase::load(path) {
            Ok(db) if db.len() == oracle_core::opt::npn::npn_classes().len() => return Ok(db),
            Ok(_) => eprintln!(
                "oraclec: database {} is incomplete; rebuilding",
                path.display()
            ),
            Err(_) => {}
        }
    }
    let db = XagDatabase::build().map_err(|e| e.to_string())?;
    if let Err(e) = db.save(path) {
        eprintln!(
            "oraclec: warning: could not cache database at {}: {e}",
            path.display()
        );
    }
    Ok(db)
}

enum Failure {
    Error(String),
    Verification,
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Error(s)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let text = if cli.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(&cli.input).map_err(|e| format!("{}: {e}", cli.input.display()))?
    };
    let source = cli.input.display().to_string();
    let module = parse_module(&text).map_err(|e| format!("{source}: {e}"))?;
    let names = module.function_names();
    let func = match &cli.function {
        Some(name) => module.function(name).ok_or_else(|| {
            format!(
                "{source}: no function `{name}`; available: {}",
                names.join(", ")
            )
        })?,
        None if module.functions.len() == 1 => &module.functions[0],
        None => {
            return Err(format!(
                "{source}: module defines {} functions, pick one with --function: {}",
                names.len(),
                names.join(", ")
            )
            .into())
        }
    };

    let passes = cli
        .passes
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<Pass>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let verify = match (
        cli.verify_samples,
        cli.verify || cli.verify_report.is_some(),
    ) {
        (Some(samples), _) => Some(VerifyMode::Sampled {
            samples: samples.unwrap_or(DEFAULT_SAMPLES),
            seed: cli.seed,
        }),
        (None, true) => Some(VerifyMode::Exhaustive),
        (None, false) => None,
    };
    let opts = PipelineOptions {
        if_conversion: match cli.if_conversion {
            IfConv::Paths => IfConversion::PathExpansion,
            IfConv::Merge => IfConversion::ReachingConditions,
        },
        optimize: OptimizeOptions {
            passes,
            cut_size: cli.cut_size as usize,
            cuts_per_node: cli.cuts_per_node as usize,
            collapse_threshold: cli.collapse_threshold as usize,
        },
        verify,
    };

    let db_path = cli.db_path.clone().unwrap_or_else(default_db_path);
    let db = load_database(&db_path, cli.rebuild_db)?;
    let compiled = compile_function(func, &opts, &db).map_err(|e| format!("{}: {e}", func.name))?;

    let name = operation_name(&func.name);
    let output = match cli.emit {
        Emit::Qir => {
            let text = emit_qir(
                &compiled.circuit,
                &EmitConfig {
                    name: name.to_string(),
                },
            )
            .map_err(|e| e.to_string())?;
            if let Some(issue) = lint(&text).first() {
                return Err(format!(
                    "internal error: emitted QIR fails lint at line {}: {}",
                    issue.line, issue.message
                )
                .into());
            }
            text
        }
        Emit::Dot => emit_dot(&compiled.optimized, name),
        Emit::Stats => compiled.stats.to_text(),
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &output).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(output.as_bytes())
            .map_err(|e| format!("stdout: {e}"))?,
    }

    if let Some(report) = &compiled.report {
        if let Some(path) = &cli.verify_report {
            let json = serde_json::to_string_pretty(report).map_err(|e| e.to_string())? + "\n";
            std::fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        if report.passed() {
            eprintln!(
                "oraclec: verification passed ({} basis states)",
                report.checked
            );
        } else {
            eprintln!(
                "oraclec: verification FAILED: {} mismatches over {} basis states",
                report.failure_count, report.checked
            );
            for f in &report.failures {
                eprintln!(
                    "  {:?} x={:#x} b={:#x} qubit {}: expected {} got {}",
                    f.kind, f.x, f.b, f.qubit, f.expected as u8, f.actual as u8
                );
            }
            return Err(Failure::Verification);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(msg)) => {
            eprintln!("oraclec: error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}
