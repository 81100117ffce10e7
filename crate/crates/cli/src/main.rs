//! `graphstore`: classify, construct and verify storage codes for
//! source-labeled graphs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 resource or enumeration limit, 4 no applicable construction.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use graphstore_core::structure::analyze;
use graphstore_core::verify::{
    decoder, oracle_exhaustive_decode, verify_code_parallel, verify_edge,
};
use graphstore_core::{
    classify_capacity, construct, parse_code, parse_graph, ClassifyOptions, Error, LinearCode,
    StorageGraph, TargetRate, DEFAULT_ORACLE_CAP, DEFAULT_PATH_LIMIT,
};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "graphstore",
    version,
    about = "Storage codes over source-labeled graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Node classes, components and internal edges of a graph.
    Analyze { graph: PathBuf },
    /// Capacity verdict with witnesses and a certified code.
    Classify { graph: PathBuf },
    /// Build and verify a code for the graph.
    Construct { graph: PathBuf },
    /// Check every decoding constraint of a code against a graph.
    Verify { graph: PathBuf, code: PathBuf },
    /// Compare the rank criterion with exhaustive decoding, edge by edge.
    Oracle { graph: PathBuf, code: PathBuf },
}

#[derive(Debug, Args)]
struct Options {
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Target rate for `construct`: auto, 2, 3/2 or 4/3.
    #[arg(long, global = true, default_value = "auto")]
    rate: String,
    /// Write the JSON result here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Maximum residing paths enumerated per edge.
    #[arg(long, global = true, default_value_t = DEFAULT_PATH_LIMIT)]
    path_limit: usize,
    /// Maximum source vectors the exhaustive oracle may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: u128,
    /// Count special nodes on every residing path, not only all-2-color ones.
    #[arg(long, global = true)]
    strict_thm4: bool,
    /// Include an explicit decoding matrix for every decodable edge.
    #[arg(long, global = true)]
    emit_decoder: bool,
    /// Worker threads for per-edge verification.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PathOverflow { .. } | Error::CapExceeded { .. } => 3,
            Error::Precondition(_) | Error::Inapplicable(_) => 4,
            Error::ConstructionFailed { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

fn invalid(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(invalid)
}

fn load_graph(path: &Path) -> Result<StorageGraph, Failure> {
    parse_graph(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(invalid)
}

fn load_code(path: &Path) -> Result<LinearCode, Failure> {
    parse_code(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(invalid)
}

impl Options {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            eprintln!("warning: no --seed given, using seed 0");
            0
        })
    }

    fn emit(&self, value: &Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
        match &self.output {
            Some(path) => fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(invalid),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn cmd_analyze(graph: &Path, opts: &Options) -> Outcome {
    let g = load_graph(graph)?;
    let report = analyze(&g, opts.path_limit)?;
    opts.emit(&serde_json::to_value(report).expect("reports serialize"))?;
    Ok(0)
}

fn cmd_classify(graph: &Path, opts: &Options) -> Outcome {
    let g = load_graph(graph)?;
    let verdict = classify_capacity(
        &g,
        &ClassifyOptions {
            seed: opts.seed(),
            path_limit: opts.path_limit,
            strict_thm4: opts.strict_thm4,
        },
    )?;
    opts.emit(&verdict.to_value())?;
    if verdict.limit_exceeded {
        eprintln!("path enumeration limit reached; the verdict is incomplete");
        return Ok(3);
    }
    Ok(0)
}

fn cmd_construct(graph: &Path, opts: &Options) -> Outcome {
    let g = load_graph(graph)?;
    let target: TargetRate = opts.rate.parse()?;
    let seed = opts.seed();
    let built = construct(&g, target, seed, opts.path_limit)?;
    if !built.report.pass {
        return Err(Failure {
            code: 1,
            error: anyhow::anyhow!("constructed code failed verification"),
        });
    }
    let code = &built.code;
    eprintln!(
        "rule {}, rate {}/{}, p = {}, {} attempt(s), seed {seed}",
        built.rule.name(),
        code.lw(),
        code.lv(),
        code.p(),
        built.attempts
    );
    opts.emit(&serde_json::to_value(code.to_document()).expect("codes serialize"))?;
    Ok(0)
}

fn cmd_verify(graph: &Path, code: &Path, opts: &Options) -> Outcome {
    let g = load_graph(graph)?;
    let code = load_code(code)?;
    let report = verify_code_parallel(&code, &g, opts.jobs.max(1))?;
    let mut value = serde_json::to_value(&report).expect("reports serialize");
    if opts.emit_decoder {
        let mut decoders = Vec::new();
        for e in g.edges() {
            if let Some(d) = decoder(&code, &g, e)? {
                decoders.push(json!({
                    "u": g.name(e.u),
                    "v": g.name(e.v),
                    "w": e.source,
                    "decoder": d.to_rows(),
                }));
            }
        }
        value["decoders"] = Value::Array(decoders);
    }
    opts.emit(&value)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_oracle(graph: &Path, code: &Path, opts: &Options) -> Outcome {
    let g = load_graph(graph)?;
    let code = load_code(code)?;
    let mut edges = Vec::new();
    let mut agree = true;
    for e in g.edges() {
        let rank = verify_edge(&code, &g, e)?;
        let brute = oracle_exhaustive_decode(&code, &g, e, opts.oracle_cap)?;
        agree &= rank == brute;
        edges.push(json!({
            "u": g.name(e.u),
            "v": g.name(e.v),
            "w": e.source,
            "rank_criterion": rank,
            "oracle": brute,
            "agree": rank == brute,
        }));
    }
    opts.emit(&json!({"agree": agree, "edges": edges}))?;
    Ok(if agree { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = &cli.opts;
    let outcome = match &cli.command {
        Command::Analyze { graph } => cmd_analyze(graph, opts),
        Command::Classify { graph } => cmd_classify(graph, opts),
        Command::Construct { graph } => cmd_construct(graph, opts),
        Command::Verify { graph, code } => cmd_verify(graph, code, opts),
        Command::Oracle { graph, code } => cmd_oracle(graph, code, opts),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
