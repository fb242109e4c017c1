//! Command-line front end: `homology`, `solve`, `sweep` and `compare`.
//!
//! Exit codes: 0 success, 2 parse failure, 3 semantic failure, 4 numeric
//! failure.

mod census;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub use census::{diagram_hash, Census, CensusEntry, CENSUS_ENV, DEFAULT_CENSUS};
pub use report::{Comparable, JsjFile, SolveReport, SweepOutput, JSJ_SCHEMA, SOLVE_SCHEMA, SWEEP_SCHEMA};

use crate::diagram::{parse_pd, parse_pd_json, LinkDiagram};
use crate::geometry::{
    fill_sweep_diagram, round15, sig15, solve_diagram, Classification, Filling, GeometryError, SlopeFamily, SolverConfig,
};
use crate::surgery::{distinct_by_volume, Coefficient, FramedLink};
use crate::triangulation::TriangulationError;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "surgerylab", version, about = "Dehn surgery and hyperbolic Dehn filling on link diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First homology of the surgered manifold.
    Homology {
        #[arg(long)]
        diagram: PathBuf,
        /// One coefficient per component: `p/q`, `p` or `*`.
        #[arg(long, allow_hyphen_values = true)]
        fill: String,
    },
    /// Triangulate and solve; writes a JSON report and caches it.
    Solve {
        #[arg(long)]
        diagram: PathBuf,
        /// One filling per component; all `*` when omitted.
        #[arg(long, allow_hyphen_values = true)]
        fill: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fill one cusp along a slope family and report volumes.
    Sweep {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        cusp: usize,
        /// Slope family in `n`, e.g. `-1/n`.
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        /// Inclusive range `a..b`.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Fillings of the other cusps; the entry at `--cusp` is ignored.
        #[arg(long, allow_hyphen_values = true)]
        fill: Option<String>,
        /// Tolerance for the monotonicity verdicts.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Volume the family should approach; prints the gap at the last row.
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare two solve reports or JSJ assemblies by volume.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(m: impl ToString) -> Self {
        CliError { code: EXIT_PARSE, message: m.to_string() }
    }

    fn semantic(m: impl ToString) -> Self {
        CliError { code: EXIT_SEMANTIC, message: m.to_string() }
    }

    fn numeric(m: impl ToString) -> Self {
        CliError { code: EXIT_NUMERIC, message: m.to_string() }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::FillingCount { .. }
            | GeometryError::BadSlope { .. }
            | GeometryError::FilledCusp(_)
            | GeometryError::NoSuchCusp(_)
            | GeometryError::BadFamily(_) => CliError::semantic(e),
            GeometryError::Triangulation(t) => t.into(),
            _ => CliError::numeric(e),
        }
    }
}

impl From<TriangulationError> for CliError {
    fn from(e: TriangulationError) -> Self {
        match e {
            TriangulationError::FiniteVertices => CliError::numeric(e),
            _ => CliError::semantic(e),
        }
    }
}

/// Parses `args` (including the program name) and runs, using the census
/// named by `SURGERYLAB_CENSUS`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &Census::from_env(), out, err)
}

pub fn run_with<I, T>(args: I, census: &Census, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    match execute(cli.command, census, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(cmd: Command, census: &Census, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Homology { diagram, fill } => {
            let d = read_diagram(&diagram)?;
            let coeffs = parse_fill(&fill)?;
            let fl = FramedLink::new(d, coeffs).map_err(CliError::semantic)?;
            let h = fl.first_homology().map_err(CliError::semantic)?;
            writeln!(out, "{h}").map_err(CliError::numeric)
        }
        Command::Solve { diagram, fill, out: path } => {
            let d = read_diagram(&diagram)?;
            let fillings = fillings_for(&d, fill.as_deref())?;
            let key: Vec<String> = fillings.iter().map(Filling::to_string).collect();
            let hash = diagram_hash(&d);
            let filling_key = key.join(",");
            let cached = census.lookup(&hash, &filling_key).unwrap_or_else(|e| {
                log::warn!("census unreadable: {e}");
                None
            });
            let (value, class) = match cached {
                Some(entry) => (entry.report, entry.classification),
                None => {
                    let cfg = SolverConfig::default();
                    let solved = solve_diagram(&d, &fillings, &cfg)?;
                    let report = SolveReport::new(d.name(), &hash, key, &solved);
                    let value = serde_json::to_value(&report).map_err(CliError::numeric)?;
                    let entry = CensusEntry {
                        diagram_hash: hash.clone(),
                        filling: filling_key,
                        classification: report.classification,
                        volume: report.volume,
                        residual: report.residual,
                        timestamp: census::now(),
                        report: value.clone(),
                    };
                    if let Err(e) = census.append(&entry) {
                        log::warn!("could not write census {}: {e}", census.path().display());
                    }
                    (value, report.classification)
                }
            };
            let text = serde_json::to_string_pretty(&value).map_err(CliError::numeric)? + "\n";
            emit(&text, path.as_deref(), out)?;
            if class == Classification::Failed {
                return Err(CliError::numeric("solve FAILED"));
            }
            Ok(())
        }
        Command::Sweep { diagram, cusp, family, range, fill, tol, target, out: path, format } => {
            let d = read_diagram(&diagram)?;
            let family = SlopeFamily::parse(&family)?;
            let range = parse_range(&range)?;
            if range.is_empty() {
                return Err(CliError::semantic("empty range"));
            }
            let fillings = fillings_for(&d, fill.as_deref())?;
            if cusp >= fillings.len() {
                return Err(GeometryError::NoSuchCusp(cusp).into());
            }
            let cfg = SolverConfig::default();
            let report = fill_sweep_diagram(&d, cusp, &family, range, &fillings, &cfg, tol)?;
            let text = match format {
                Format::Csv => report.to_csv(),
                Format::Json => {
                    let o = SweepOutput {
                        schema: SWEEP_SCHEMA.into(),
                        diagram: d.name().map(str::to_string),
                        diagram_hash: diagram_hash(&d),
                        report: rounded(report.clone()),
                    };
                    serde_json::to_string_pretty(&o).map_err(CliError::numeric)? + "\n"
                }
            };
            emit(&text, path.as_deref(), out)?;
            // The verdict goes next to the report's destination without mixing into it.
            let mut lines = vec![report.verdict_line()];
            if let Some(tv) = target {
                let last = report.rows.iter().rev().find_map(|r| r.volume);
                lines.push(match last {
                    Some(v) => format!("target delta: {} (last volume {} vs target {})", sig15(v - tv), sig15(v), sig15(tv)),
                    None => format!("target delta: none (no solved rows; target {})", sig15(tv)),
                });
            }
            let sink: &mut dyn Write = if path.is_some() { out } else { err };
            for l in lines {
                writeln!(sink, "{l}").map_err(CliError::numeric)?;
            }
            Ok(())
        }
        Command::Compare { a, b, tol } => {
            let ca = read_comparable(&a)?;
            let cb = read_comparable(&b)?;
            if ca.schema() != cb.schema() {
                return Err(CliError::semantic(format!("schema mismatch: `{}` vs `{}`", ca.schema(), cb.schema())));
            }
            if ![SOLVE_SCHEMA, JSJ_SCHEMA].contains(&ca.schema()) {
                return Err(CliError::semantic(format!("unsupported schema version `{}`", ca.schema())));
            }
            let (Some(x), Some(y)) = (ca.assembly(), cb.assembly()) else {
                return Err(CliError::semantic("a report has no hyperbolic volume to compare"));
            };
            writeln!(out, "{}", distinct_by_volume(&x, &y, tol)).map_err(CliError::numeric)
        }
    }
}

fn rounded(mut r: crate::geometry::SweepReport) -> crate::geometry::SweepReport {
    r.complete_volume = r.complete_volume.map(round15);
    for row in &mut r.rows {
        row.volume = row.volume.map(round15);
        row.residual = round15(row.residual);
    }
    r
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::numeric(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(CliError::numeric),
    }
}

/// PD text or its JSON mirror, told apart by the first character.
pub fn read_diagram(path: &Path) -> Result<LinkDiagram, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') { parse_pd_json(&text) } else { parse_pd(&text) };
    parsed.map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn read_comparable(path: &Path) -> Result<Comparable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Comparable::from_json(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn parse_fill(s: &str) -> Result<Vec<Coefficient>, CliError> {
    s.split(',').map(|c| c.trim().parse::<Coefficient>().map_err(CliError::parse)).collect()
}

fn fillings_for(d: &LinkDiagram, fill: Option<&str>) -> Result<Vec<Filling>, CliError> {
    let n = d.num_components();
    let coeffs = match fill {
        Some(s) => parse_fill(s)?,
        None => vec![Coefficient::Unfilled; n],
    };
    if coeffs.len() != n {
        return Err(GeometryError::FillingCount { expected: n, got: coeffs.len() }.into());
    }
    Ok(coeffs
        .into_iter()
        .map(|c| match c {
            Coefficient::Unfilled => Filling::Complete,
            Coefficient::Filled(s) => Filling::Slope { p: s.p(), q: s.q() },
        })
        .collect())
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<i64>, CliError> {
    let (a, b) = s.split_once("..").ok_or_else(|| CliError::parse(format!("range `{s}` is not `a..b`")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| CliError::parse(format!("range `{s}` is not `a..b`")));
    Ok(num(a)?..=num(b)?)
}
