//! Job configuration: an optional TOML file overridden by flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use oscphase::diffops::Equation;
use oscphase::exactalg::parse_ratfun;
use oscphase::numlab::{default_window, parse_window};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct JobArgs {
    /// Potential q of Y'' + qY = 0
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// First-order coefficient a of Y'' + aY' + bY = 0
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Zeroth-order coefficient b of Y'' + aY' + bY = 0
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Truncation order of the phase expansion
    #[arg(long)]
    pub order: Option<usize>,
    /// Integration window T0:T1
    #[arg(long)]
    pub window: Option<String>,
    /// Integration tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for `report`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trailing zeros used for eventual properties and table rows
    #[arg(long)]
    pub report_last: Option<usize>,
    /// TOML file with any of the keys above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a config file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q: Option<String>,
    a: Option<String>,
    b: Option<String>,
    order: Option<usize>,
    window: Option<String>,
    tol: Option<f64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    report_last: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Source {
    Potential { q: String },
    Coefficients { a: String, b: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JobConfig {
    pub source: Source,
    pub order: usize,
    pub window: Option<(f64, f64)>,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub report_last: usize,
}

pub const DEFAULT_ORDER: usize = 4;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_REPORT_LAST: usize = 50;

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl JobConfig {
    pub fn resolve(args: &JobArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let pick = |flag: &Option<String>, key: &Option<String>| flag.clone().or_else(|| key.clone());
        let q = pick(&args.q, &file.q);
        let a = pick(&args.a, &file.a);
        let b = pick(&args.b, &file.b);
        let source = match (q, a, b) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::Usage("give either --q or --a/--b, not both".into()))
            }
            (Some(q), None, None) => Source::Potential { q },
            (None, None, None) => return Err(CliError::Usage("missing equation: --q or --a/--b".into())),
            (None, a, b) => Source::Coefficients {
                a: a.unwrap_or_else(|| "0".into()),
                b: b.unwrap_or_else(|| "0".into()),
            },
        };
        let window = match pick(&args.window, &file.window) {
            Some(w) => Some(
                parse_window(&w).ok_or_else(|| CliError::Usage(format!("invalid window {w:?}, expected T0:T1 with T1 > T0")))?,
            ),
            None => None,
        };
        Ok(JobConfig {
            source,
            order: args.order.or(file.order).unwrap_or(DEFAULT_ORDER),
            window,
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            format: args.format.or(file.format).unwrap_or(Format::Text),
            out: args.out.clone().or(file.out),
            report_last: args.report_last.or(file.report_last).unwrap_or(DEFAULT_REPORT_LAST),
        })
    }

    pub fn equation(&self) -> Result<Equation, CliError> {
        Ok(match &self.source {
            Source::Potential { q } => Equation::canonical(parse_ratfun(q).map_err(|e| CliError::parse("q", e))?),
            Source::Coefficients { a, b } => Equation::new(
                parse_ratfun(a).map_err(|e| CliError::parse("a", e))?,
                parse_ratfun(b).map_err(|e| CliError::parse("b", e))?,
            ),
        })
    }

    pub fn window_for(&self, eq: &Equation) -> (f64, f64) {
        self.window.unwrap_or_else(|| default_window(eq))
    }
}
