//! `oscphase` command line: parse an equation, classify it, expand its
//! phase, predict and measure zeros, and verify the predictions.
//!
//! Exit codes: 0 pass, 1 verification failure (including unreliable
//! integration), 2 usage or parse error, 3 numeric failure.

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use oscphase::diffops::{canonical_potential, Equation};
use oscphase::exactalg::{AlgError, RatFun};
use oscphase::numlab::{figure_data, integrate, verify, CheckStatus, NumError, Predictions, VerifyOptions, ZeroReport, ZeroRow};
use oscphase::oscillate::{classify, OscVerdict};
use oscphase::phaseseries::{solve_z_from_potential, z_to_phase, PhaseError, PhaseExpansion};

pub use config::{Format, JobArgs, JobConfig, Source};

#[derive(Parser, Debug)]
#[command(name = "oscphase", version, about = "Oscillation, phase asymptotics and zeros of Y'' + aY' + bY = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether solutions oscillate at infinity
    Classify(JobArgs),
    /// Reduce Y'' + aY' + bY = 0 to Y'' + qY = 0
    Reduce(JobArgs),
    /// Asymptotic expansion of the phase
    Phase(JobArgs),
    /// Predicted and measured zeros
    Zeros(JobArgs),
    /// Check every prediction against numerical integration
    Verify(JobArgs),
    /// Write report.json, zeros.csv and figure.dat into the --out directory
    Report(JobArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &JobArgs) {
        match self {
            Command::Classify(a) => ("classify", a),
            Command::Reduce(a) => ("reduce", a),
            Command::Phase(a) => ("phase", a),
            Command::Zeros(a) => ("zeros", a),
            Command::Verify(a) => ("verify", a),
            Command::Report(a) => ("report", a),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {what}: {err}")]
    Parse { what: &'static str, err: AlgError },
    #[error("{0}")]
    Unreliable(NumError),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn parse(what: &'static str, err: AlgError) -> Self {
        CliError::Parse { what, err }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unreliable(_) => 1,
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        match e {
            NumError::ToleranceOutOfRange(_)
            | NumError::StepUnderflow(_)
            | NumError::NonFinite(_)
            | NumError::WronskianDrift { .. } => CliError::Unreliable(e),
            NumError::InvalidWindow(..) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<PhaseError> for CliError {
    fn from(e: PhaseError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

/// Output of one command: what to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// JSON envelope; `data` is deterministic, `metadata` carries run info.
#[derive(Serialize, Deserialize, Debug)]
pub struct Envelope<T> {
    pub command: String,
    pub data: T,
    pub metadata: Metadata,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub elapsed_ms: f64,
    pub config: serde_json::Value,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct Reduction {
    pub a: RatFun,
    pub b: RatFun,
    pub q: RatFun,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ZeroTable {
    pub q: RatFun,
    pub window: (f64, f64),
    pub predictions: Predictions,
    pub zeros: Vec<f64>,
    pub rows: Vec<ZeroRow>,
}

struct Ctx {
    command: &'static str,
    config: JobConfig,
    start: Instant,
}

impl Ctx {
    fn json<T: Serialize>(&self, data: &T) -> String {
        let env = Envelope {
            command: self.command.to_string(),
            data,
            metadata: Metadata {
                tool: "oscphase".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
                config: serde_json::to_value(&self.config).expect("config serializes"),
            },
        };
        let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
        s.push('\n');
        s
    }

    fn no_csv(&self) -> CliError {
        CliError::Usage(format!("csv output is not available for `{}`", self.command))
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (command, args) = cli.command.parts();
    let ctx = Ctx {
        command,
        config: JobConfig::resolve(args)?,
        start: Instant::now(),
    };
    let eq = ctx.config.equation()?;
    let (stdout, code) = match &cli.command {
        Command::Classify(_) => (cmd_classify(&ctx, &eq)?, 0),
        Command::Reduce(_) => (cmd_reduce(&ctx, &eq)?, 0),
        Command::Phase(_) => (cmd_phase(&ctx, &eq)?, 0),
        Command::Zeros(_) => (cmd_zeros(&ctx, &eq)?, 0),
        Command::Verify(_) => cmd_verify(&ctx, &eq)?,
        Command::Report(_) => cmd_report(&ctx, &eq)?,
    };
    let stdout = match (&ctx.config.out, command) {
        (Some(path), c) if c != "report" => {
            write(path, &stdout)?;
            String::new()
        }
        _ => stdout,
    };
    Ok(Outcome { stdout, code })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn potential(eq: &Equation) -> RatFun {
    canonical_potential(eq).q
}

pub fn verdict_text(v: &OscVerdict) -> String {
    match &v.leading {
        Some(lf) => format!("{:?} ({:?}): q ~ {}·x^{}", v.verdict, v.rule, lf.c, lf.k),
        None => format!("{:?} ({:?}): q = 0", v.verdict, v.rule),
    }
}

fn cmd_classify(ctx: &Ctx, eq: &Equation) -> Result<String, CliError> {
    let v = classify(&potential(eq));
    match ctx.config.format {
        Format::Json => Ok(ctx.json(&v)),
        Format::Text => Ok(verdict_text(&v) + "\n"),
        Format::Csv => Err(ctx.no_csv()),
    }
}

fn cmd_reduce(ctx: &Ctx, eq: &Equation) -> Result<String, CliError> {
    let r = Reduction {
        a: eq.a.clone(),
        b: eq.b.clone(),
        q: potential(eq),
    };
    match ctx.config.format {
        Format::Json => Ok(ctx.json(&r)),
        Format::Text => Ok(format!("{}\n", r.q)),
        Format::Csv => Err(ctx.no_csv()),
    }
}

pub fn phase_of(q: &RatFun, order: usize) -> Result<PhaseExpansion, CliError> {
    Ok(z_to_phase(&solve_z_from_potential(q, order)?))
}

fn cmd_phase(ctx: &Ctx, eq: &Equation) -> Result<String, CliError> {
    let ph = phase_of(&potential(eq), ctx.config.order)?;
    match ctx.config.format {
        Format::Json => Ok(ctx.json(&ph)),
        Format::Text => Ok(format!("{ph}\n")),
        Format::Csv => Err(ctx.no_csv()),
    }
}

fn run_verify(ctx: &Ctx, eq: &Equation) -> Result<ZeroReport, CliError> {
    let q = potential(eq);
    let pr = Predictions::for_potential(&q, ctx.config.order);
    let opts = VerifyOptions {
        tol: ctx.config.tol,
        report_last: ctx.config.report_last,
    };
    Ok(verify(eq, &pr, ctx.config.window_for(eq), &opts)?)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10}")).unwrap_or_else(|| "-".into())
}

fn rows_text(rows: &[ZeroRow]) -> String {
    let mut out = format!("{:>8} {:>20} {:>20} {:>20} {:>16} {:>16}\n", "n", "s_n", "s_hat_n", "t_n", "|y(t_n)|", "v(t_n)");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8} {:>20.10} {:>20} {:>20} {:>16} {:>16}",
            r.n,
            r.s_n,
            opt(r.s_hat_n),
            opt(r.t_n),
            opt(r.abs_y_t_n),
            opt(r.v_t_n)
        );
    }
    out
}

fn cmd_zeros(ctx: &Ctx, eq: &Equation) -> Result<String, CliError> {
    let r = run_verify(ctx, eq)?;
    let table = ZeroTable {
        q: r.q.clone(),
        window: r.window,
        predictions: r.predictions.clone(),
        zeros: r.zeros.clone(),
        rows: r.rows.clone(),
    };
    Ok(match ctx.config.format {
        Format::Json => ctx.json(&table),
        Format::Csv => r.to_csv(),
        Format::Text => format!(
            "q = {}\nwindow [{}, {}]: {} zeros\n{}",
            r.q,
            r.window.0,
            r.window.1,
            r.zeros.len(),
            rows_text(&r.rows)
        ),
    })
}

pub fn summary_text(r: &ZeroReport) -> String {
    let mut out = format!(
        "q = {}\n{}\nwindow [{}, {}], tol {:e}: {} zeros, {} critical points, max Wronskian drift {:.2e}\n",
        r.q,
        verdict_text(&r.predictions.verdict),
        r.window.0,
        r.window.1,
        r.tol,
        r.zeros.len(),
        r.critical_points.len(),
        r.max_wronskian_drift
    );
    for c in &r.checks {
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        let value = match (c.value, c.threshold) {
            (Some(v), Some(t)) => format!(" {v:.3e} < {t:.1e}"),
            _ => String::new(),
        };
        let _ = writeln!(out, "{status} {:<18}{value}  {}", c.name, c.detail);
    }
    let _ = writeln!(out, "result: {}", if r.passed { "PASS" } else { "FAIL" });
    out
}

fn cmd_verify(ctx: &Ctx, eq: &Equation) -> Result<(String, i32), CliError> {
    let r = run_verify(ctx, eq)?;
    let code = if r.passed { 0 } else { 1 };
    let out = match ctx.config.format {
        Format::Json => ctx.json(&r),
        Format::Csv => r.to_csv(),
        Format::Text => summary_text(&r),
    };
    Ok((out, code))
}

pub const REPORT_FILES: [&str; 3] = ["report.json", "zeros.csv", "figure.dat"];

fn cmd_report(ctx: &Ctx, eq: &Equation) -> Result<(String, i32), CliError> {
    let dir = ctx.config.out.clone().unwrap_or_else(|| PathBuf::from("oscphase-report"));
    let r = run_verify(ctx, eq)?;
    let q = potential(eq);
    let (t0, t1) = r.window;
    let pair = integrate(&Equation::canonical(q), t0, t1, ctx.config.tol)?;
    let fig = figure_data(&pair, 2001)?;
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let [json, csv, dat] = REPORT_FILES.map(|f| dir.join(f));
    write(&json, &ctx.json(&r))?;
    write(&csv, &r.to_csv())?;
    write(&dat, &fig)?;
    let mut out = summary_text(&r);
    for p in [json, csv, dat] {
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok((out, if r.passed { 0 } else { 1 }))
}
