//! Command-line driver: `analyze`, `profile` and `validate` over `bps 1`
//! state files.
//!
//! Exit status is 0 when a verdict is reached (separable or entangled), 2 when
//! the analysis is inconclusive and 1 on any error.

use std::io::Write;
use std::path::{Path, PathBuf};

use bps_core::format::parse_state_file;
use bps_core::report::{emit_report, num17, Analysis, ReportFormat, REPORT_SINGULAR_VALUES};
use bps_core::spectral::convergence_profile;
use bps_core::{
    CoefficientSource, Error, TruncationConfig, DEFAULT_DELTA, DEFAULT_NORMALIZATION_TOL,
    DEFAULT_TOL,
};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

/// Target tail bound for the default truncation of closed-form sources.
pub const DEFAULT_TAIL_TARGET: f64 = 1e-8;
/// Largest default truncation size.
pub const DEFAULT_SIZE_CAP: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "bps",
    version,
    about = "Certify separability of bipartite pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncate, classify and report.
    Analyze {
        file: PathBuf,
        /// Rows kept (default: smallest size with tail bound <= 1e-8).
        #[arg(long)]
        rows: Option<usize>,
        /// Columns kept.
        #[arg(long)]
        cols: Option<usize>,
        /// Separability radius.
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        /// Rank-one detection tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// List every singular value instead of the top 16.
        #[arg(long)]
        full: bool,
    },
    /// Singular values and tail bounds of square truncations.
    Profile {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        full: bool,
    },
    /// Check that the total squared mass is 1.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NORMALIZATION_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn load(path: &Path) -> Result<CoefficientSource, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_state_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn core(e: Error) -> String {
    e.to_string()
}

fn io(e: std::io::Error) -> String {
    format!("writing output: {e}")
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32, String> {
    match cmd {
        Command::Analyze {
            file,
            rows,
            cols,
            delta,
            tol,
            format,
            full,
        } => {
            let src = load(file)?;
            let (dn, dm) = src.default_truncation(DEFAULT_TAIL_TARGET, DEFAULT_SIZE_CAP);
            let (n, m) = (rows.unwrap_or(dn), cols.unwrap_or(dm));
            let state = src
                .truncate(n, m, &TruncationConfig::default())
                .map_err(core)?;
            let analysis = Analysis::run(&state, *delta, *tol).map_err(core)?;
            out.write_all(emit_report(&analysis, (*format).into(), *full).as_bytes())
                .map_err(io)?;
            Ok(if analysis.verdict.is_inconclusive() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        Command::Profile { file, sizes, full } => {
            let src = load(file)?;
            let profile =
                convergence_profile(&src, sizes, &TruncationConfig::default()).map_err(core)?;
            for entry in profile {
                let keep = if *full {
                    entry.singular_values.len()
                } else {
                    REPORT_SINGULAR_VALUES
                };
                let sv: Vec<String> = entry
                    .singular_values
                    .iter()
                    .take(keep)
                    .map(|&s| num17(s))
                    .collect();
                writeln!(
                    out,
                    "n={} tail_bound={} singular_values={}",
                    entry.size,
                    entry.tail_op_bound,
                    sv.join(",")
                )
                .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Validate { file, tol } => {
            let src = load(file)?;
            let report = src.validate(*tol).map_err(core)?;
            if !report.passed {
                return Err(core(Error::Normalization {
                    mass: report.mass,
                    tol: report.tol,
                }));
            }
            writeln!(
                out,
                "ok: total squared mass {} (tol {})",
                report.mass, report.tol
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}
