//! `pinch`: certification sweeps, slice tables, reaction-flow runs and
//! pointwise curvature decompositions.

mod dims;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pinch_core::certify::{
    certify_dims, timofte_certify, timofte_slice, CertifyConfig, TimofteSlice,
};
use pinch_core::flow::{run, InitialH, ModelKind, NamedH, RunConfig};
use pinch_core::tensor::{pinch_p, weyl_of, TensorDocument};
use serde::Serialize;

use dims::parse_dims;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(
    name = "pinch",
    version,
    about = "Pinching-estimate certificates and reaction-flow telemetry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify Q >= 0 and P >= 0 by randomized sweeps plus the exact slice reduction.
    Certify(CertifyArgs),
    /// Print the closed-form slice quadratics for dimension n.
    Phi(PhiArgs),
    /// Integrate the reaction system and emit CSV telemetry.
    Evolve(Box<EvolveArgs>),
    /// Decompose curvature from a tensor document and evaluate P.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// Dimensions as `A..B` (inclusive) or `a,b,c`.
    #[arg(long, default_value = "3..10")]
    dims: String,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative nonnegativity slack.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the certificate JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the certificate JSON on stdout instead of a summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PhiArgs {
    #[arg(long)]
    n: usize,
    /// Only this slice index (1..=n-1).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EvolveArgs {
    /// Run-config JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    #[arg(long)]
    n: Option<usize>,
    /// Initial metric, comma-separated row-major entries.
    #[arg(long, value_parser = parse_list)]
    g: Option<List>,
    #[arg(long)]
    kappa0: Option<f64>,
    #[arg(long, value_parser = parse_list)]
    ricci: Option<List>,
    #[arg(long, value_parser = parse_list)]
    riemann: Option<List>,
    /// `metric`, `ricci`, or comma-separated row-major entries.
    #[arg(long, value_parser = parse_h0)]
    h0: Option<InitialH>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    c_exponent: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Telemetry CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON path; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Tensor document (JSON).
    path: PathBuf,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown model `{s}` (expected sphere, lcf or frozen)"))
}

/// Comma-separated numbers from the command line.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
struct List(Vec<f64>);

fn parse_list(s: &str) -> Result<List, String> {
    parse_numbers(s).map(List)
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect()
}

fn parse_h0(s: &str) -> Result<InitialH, String> {
    match s {
        "metric" => Ok(InitialH::Named(NamedH::Metric)),
        "ricci" => Ok(InitialH::Named(NamedH::Ricci)),
        _ => parse_numbers(s).map(InitialH::Components),
    }
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Io(String),
}

impl From<pinch_core::Error> for Failure {
    fn from(e: pinch_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_in(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn cmd_certify(args: CertifyArgs) -> CmdResult {
    let cfg = CertifyConfig {
        dims: parse_dims(&args.dims).map_err(Failure::Invalid)?,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
    };
    let report = certify_dims(&cfg)?;
    let doc = to_json(&report);
    if let Some(path) = &args.out {
        write_out(path, &doc)?;
    }
    let mut stdout = io::stdout().lock();
    if args.json {
        stdout.write_all(doc.as_bytes())?;
    } else {
        for r in &report.results {
            writeln!(
                stdout,
                "n={:<3} verdict={:<5} min_eig={:+.3e} q={:+.3e} P={:+.3e} oracle={:.3e} slices={}",
                r.n,
                r.verdict,
                r.spectrum.min_eig_margin,
                r.q.min_margin,
                r.p_min_margin,
                r.spectrum.oracle_mismatch,
                if r.timofte_verdict { "ok" } else { "FAIL" },
            )?;
        }
        match &report.counterexample {
            None => writeln!(
                stdout,
                "certified: {} trials per dimension, seed {}",
                cfg.trials, cfg.seed
            )?,
            Some(c) => writeln!(
                stdout,
                "counterexample candidate: n={} trial={} check={} value={:e}\n  h={:?}\n  r={:?}",
                c.n, c.trial, c.check, c.value, c.h, c.r
            )?,
        }
    }
    Ok(report.exit_status() as u8)
}

fn cmd_phi(args: PhiArgs) -> CmdResult {
    let n = args.n;
    let slices: Vec<TimofteSlice> = match args.k {
        Some(k) => vec![timofte_slice(n, k)?],
        None => timofte_certify(n)?.slices,
    };
    let verdict = slices
        .iter()
        .all(|s| s.discriminant_identity && s.min_on_interval >= 0.0);
    let mut out = io::stdout().lock();
    if args.json {
        #[derive(Serialize)]
        struct PhiTable<'a> {
            n: usize,
            slices: &'a [TimofteSlice],
            verdict: bool,
        }
        out.write_all(
            to_json(&PhiTable {
                n,
                slices: &slices,
                verdict,
            })
            .as_bytes(),
        )?;
    } else {
        writeln!(
            out,
            "{:>4} {:>14} {:>14} {:>14} {:>18} {:>12} {:>8}",
            "k", "a1", "b1", "c1", "discriminant", "min[-1,1]", "argmin"
        )?;
        for s in &slices {
            writeln!(
                out,
                "{:>4} {:>14} {:>14} {:>14} {:>18} {:>12.6} {:>8.4}",
                s.k, s.a1, s.b1, s.c1, s.discriminant, s.min_on_interval, s.argmin
            )?;
        }
        if args.k.is_none() && n == 3 {
            writeln!(
                out,
                "note: n = 3 has no interior slices (2 <= k <= n-2 is empty)"
            )?;
        }
    }
    Ok(if verdict { EXIT_OK } else { EXIT_VIOLATION })
}

fn put<T: Serialize>(
    obj: &mut serde_json::Map<String, serde_json::Value>,
    key: &str,
    v: &Option<T>,
) {
    if let Some(v) = v {
        obj.insert(
            key.to_string(),
            serde_json::to_value(v).expect("flag values serialize"),
        );
    }
}

fn evolve_config(args: &EvolveArgs) -> Result<RunConfig, Failure> {
    let mut value = match &args.config {
        Some(path) => serde_json::from_str::<serde_json::Value>(&read_in(path)?)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        None => serde_json::json!({}),
    };
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Failure::Invalid("run config must be a JSON object".into()))?;
    put(obj, "model", &args.model);
    put(obj, "n", &args.n);
    put(obj, "g", &args.g);
    put(obj, "kappa0", &args.kappa0);
    put(obj, "ricci", &args.ricci);
    put(obj, "riemann", &args.riemann);
    put(obj, "h0", &args.h0);
    put(obj, "dt", &args.dt);
    put(obj, "t_end", &args.t_end);
    put(obj, "stride", &args.stride);
    put(obj, "c_exponent", &args.c_exponent);
    put(obj, "tol", &args.tol);
    serde_json::from_value(value).map_err(|e| Failure::Invalid(format!("run config: {e}")))
}

fn cmd_evolve(args: EvolveArgs) -> CmdResult {
    let cfg = evolve_config(&args)?;
    let outcome = run(&cfg)?;
    let csv = outcome.telemetry.to_csv_string()?;
    match &args.out {
        Some(path) => write_out(path, &csv)?,
        None => io::stdout().lock().write_all(csv.as_bytes())?,
    }
    let summary = to_json(&outcome.summary);
    match &args.summary {
        Some(path) => write_out(path, &summary)?,
        None => io::stderr().lock().write_all(summary.as_bytes())?,
    }
    Ok(match (&outcome.summary.fault, outcome.summary.passed) {
        (Some(_), _) => EXIT_INVALID,
        (None, true) => EXIT_OK,
        (None, false) => EXIT_VIOLATION,
    })
}

#[derive(Serialize)]
struct Decomposition {
    n: usize,
    #[serde(rename = "R")]
    scalar: f64,
    ricci: Vec<f64>,
    weyl_norm: f64,
    #[serde(rename = "P")]
    p: f64,
}

fn cmd_decompose(args: DecomposeArgs) -> CmdResult {
    let doc = TensorDocument::from_json(&read_in(&args.path)?)?;
    let t = doc.resolve()?;
    let report = weyl_of(&t.frame, &t.rm)?;
    let p = pinch_p(&t.frame, &report.ricci, &t.h)?;
    let out = Decomposition {
        n: doc.n,
        scalar: report.scalar,
        ricci: report.ricci.to_row_major(),
        weyl_norm: report.weyl_norm,
        p,
    };
    io::stdout().lock().write_all(to_json(&out).as_bytes())?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Certify(a) => cmd_certify(a),
        Command::Phi(a) => cmd_phi(a),
        Command::Evolve(a) => cmd_evolve(*a),
        Command::Decompose(a) => cmd_decompose(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
