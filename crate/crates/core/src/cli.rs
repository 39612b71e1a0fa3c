//! Command-line front end.
//!
//! JSON results go to stdout (or `--out`), one document per invocation;
//! human-readable summaries go to stderr. Exit codes: 0 success, 1 property
//! violated or search inconclusive, 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::collinearity::verify_claim1_with;
use crate::construction::{prefix_edges, PairIndex, PointSet};
use crate::extraction::{extract, verify_general_position, EdgeSubset};
use crate::numeric::{certify_with_resampling, export_numeric, ExportFormat, NumericError, Rendering};
use crate::oracle::{OracleRegistry, OracleSettings};
use crate::partition::{halving_bound, iterative_halving_partition, lower_bound_certificate, min_colors, MinColors};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nocollinear",
    version,
    about = "Point sets whose collinear triples are the triangles of K_n"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the symbolic points of the K_n prefix as JSON.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every edge triple of K_n: collinear exactly for triangles.
    VerifyClaim {
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Collinearity oracle compared against the triangle pattern.
        #[arg(long, default_value = "symbolic")]
        oracle: String,
    },
    /// Extract a general-position subset of at least half the input points.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a point set into general-position classes by iterated extraction.
    #[command(group(ArgGroup::new("source").required(true).args(["input", "full_prefix"])))]
    Partition {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        full_prefix: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fewest colors for a coloring of K_n with no monochromatic triangle.
    MinColors {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Draw rational values for t_1..t_n and certify the collinearity structure.
    Certify {
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        bits: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 5)]
        max_resamples: u32,
    },
    /// Export certified numeric coordinates.
    Export {
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        bits: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Decimal digits; omit for exact p/q rationals.
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

type CmdResult = Result<Outcome, CliError>;

/// A document to emit plus whether the checked property held.
struct Outcome {
    body: String,
    out: Option<PathBuf>,
    ok: bool,
    summary: String,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, out: Option<PathBuf>, ok: bool, summary: String) -> Self {
        let mut body = serde_json::to_string(value).expect("result serializes");
        body.push('\n');
        Self { body, out, ok, summary }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn read_edges(path: &Path) -> Result<EdgeSubset, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let edges: Vec<PairIndex> =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(edges.into_iter().collect())
}

fn run_command(command: Command) -> CmdResult {
    match command {
        Command::Gen { n, out } => {
            let set = PointSet::full_prefix(n).map_err(usage)?;
            let summary = format!("generated {} points for K_{n}", set.len());
            Ok(Outcome::json(&set, out, true, summary))
        }
        Command::VerifyClaim { n, jobs, oracle } => {
            let settings = OracleSettings {
                n: n.max(2),
                ..Default::default()
            };
            let oracle = OracleRegistry::builtin()
                .create(&oracle, &settings)
                .map_err(|e| match e {
                    crate::oracle::OracleError::Unknown { .. } => usage(e),
                    other => CliError::Failed(other.to_string()),
                })?;
            let report = verify_claim1_with(n, oracle.as_ref(), jobs);
            let summary = format!(
                "K_{n}: {} triples, {} patterns seen, {} violations ({} oracle)",
                report.triples_checked,
                report.patterns_witnessed(),
                report.violations.len(),
                oracle.name()
            );
            Ok(Outcome::json(&report, None, report.passed(), summary))
        }
        Command::Extract { input, seed, out } => {
            let p = read_edges(&input)?;
            let result = extract(&p, seed);
            let ok = result.output_size >= p.len().div_ceil(2) && verify_general_position(&result.edges);
            let summary = format!(
                "kept {} of {} points in general position",
                result.output_size, result.input_size
            );
            Ok(Outcome::json(&result, out, ok, summary))
        }
        Command::Partition {
            input,
            full_prefix,
            seed,
        } => {
            let p = match (input, full_prefix) {
                (Some(path), _) => read_edges(&path)?,
                (None, Some(n)) if n >= 2 => prefix_edges(n).into_iter().collect(),
                (None, Some(n)) => return Err(CliError::Usage(format!("--full-prefix must be at least 2, got {n}"))),
                (None, None) => return Err(CliError::Usage("one of --in or --full-prefix is required".into())),
            };
            let result = iterative_halving_partition(&p, seed);
            let bound = halving_bound(p.len());
            let ok =
                result.classes.len() <= bound && result.is_partition_of(&p) && result.all_classes_general_position();
            let lower = lower_bound_certificate(p.len());
            let summary = format!(
                "{} points split into {} classes (halving bound {bound}, forced at least {})",
                p.len(),
                result.classes.len(),
                lower.forced_classes
            );
            let doc = json!({
                "source_size": result.source_size,
                "class_count": result.classes.len(),
                "halving_bound": bound,
                "lower_bound": lower,
                "classes": result.classes,
            });
            Ok(Outcome::json(&doc, None, ok, summary))
        }
        Command::MinColors { n, budget } => {
            let outcome = min_colors(n, budget).map_err(usage)?;
            let (doc, ok, summary) = match outcome {
                MinColors::Found { m, witness, refuted } => (
                    json!({"n": n, "min_colors": m, "witness": witness, "refuted": refuted}),
                    true,
                    format!("K_{n} needs exactly {m} colors"),
                ),
                MinColors::Unknown { budget, refuted } => (
                    json!({"n": n, "min_colors": null, "budget": budget, "refuted": refuted}),
                    false,
                    format!("K_{n} needs more than {budget} colors"),
                ),
            };
            Ok(Outcome::json(&doc, None, ok, summary))
        }
        Command::Certify {
            n,
            seed,
            bits,
            jobs,
            max_resamples,
        } => match certify_with_resampling(n, seed, bits, max_resamples, jobs) {
            Ok((cert, resamples)) => {
                let values: Vec<String> = cert
                    .instantiation()
                    .values()
                    .values()
                    .map(|v| format!("{}/{}", v.numer(), v.denom()))
                    .collect();
                let doc = json!({
                    "certified": true,
                    "resamples": resamples,
                    "report": cert.report(),
                    "values": values,
                });
                let summary = format!(
                    "certified seed {} after {resamples} resamples ({} triples)",
                    cert.report().seed,
                    cert.report().triples_checked
                );
                Ok(Outcome::json(&doc, None, true, summary))
            }
            Err(NumericError::ResamplesExhausted(r)) => {
                let doc = json!({"certified": false, "resamples": r});
                Ok(Outcome::json(
                    &doc,
                    None,
                    false,
                    format!("no certified draw within {r} resamples"),
                ))
            }
            Err(e @ (NumericError::TooFewVariables(_) | NumericError::BadBitSize(_))) => Err(usage(e)),
            Err(e) => Err(CliError::Failed(e.to_string())),
        },
        Command::Export {
            n,
            seed,
            bits,
            format,
            precision,
            out,
        } => {
            let (cert, resamples) = certify_with_resampling(n, seed, bits, 5, 1).map_err(|e| match e {
                NumericError::TooFewVariables(_) | NumericError::BadBitSize(_) => usage(e),
                other => CliError::Failed(other.to_string()),
            })?;
            let rendering = match precision {
                Some(precision) => Rendering::Decimal { precision },
                None => Rendering::Exact,
            };
            let format = match format {
                Format::Csv => ExportFormat::Csv,
                Format::Json => ExportFormat::Json,
            };
            let body = export_numeric(&cert, format, rendering);
            let summary = format!(
                "exported {} points (seed {}, {resamples} resamples)",
                n * (n - 1) / 2,
                cert.report().seed
            );
            Ok(Outcome {
                body,
                out,
                ok: true,
                summary,
            })
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { EXIT_OK } else { EXIT_USAGE };
        }
    };

    match run_command(cli.command) {
        Ok(outcome) => {
            if let Some(path) = &outcome.out {
                if let Err(e) = fs::write(path, &outcome.body) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_FAILED;
                }
            } else if let Err(e) = stdout.write_all(outcome.body.as_bytes()) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_FAILED;
            }
            let _ = writeln!(stderr, "{}", outcome.summary);
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILED
        }
    }
}
