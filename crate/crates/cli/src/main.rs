//! `lconn` — exact symbolic verifier for nonlinear connections induced by
//! semisprays on tangent-like structures.
//!
//! Subcommands: `check` (validate an instance), `derive` (print every
//! derived object), `verify` (run the identity suite and emit a report),
//! `nullity` (curvature nullity space at a point).
//!
//! Exit codes: 0 — everything passed; 1 — at least one identity failed or
//! the instance was rejected; 2 — input or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lconn_core::hermitian::{extend_metric, kahler_form, AlmostComplex, VerticalMetric};
use lconn_core::ratpoly::{MultiPoly, Point};

use lconn_cli::expr::parse_rational;
use lconn_cli::instance::Instance;
use lconn_cli::manifest::{CliError, Manifest};
use lconn_cli::report::{Format, Report};
use lconn_cli::suite::{self, render_point, run_suite};

#[derive(Parser)]
#[command(
    name = "lconn",
    version,
    about = "Exact symbolic verifier for semispray-induced nonlinear connections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate the structure, the semispray, the declared strong torsion,
    /// and the metric; print nothing else.
    Check {
        manifest: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of extra seeded sample points for pointwise checks.
        #[arg(long, default_value_t = 0)]
        points: usize,
    },
    /// Print the derived objects: connection, projectors, torsion,
    /// curvature, almost-complex structure, coefficients, and metric data.
    Derive {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        points: usize,
    },
    /// Run the full identity suite and emit a report.
    Verify {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        points: usize,
        /// Record per-check durations (disables byte-stable output).
        #[arg(long)]
        timings: bool,
    },
    /// Curvature nullity space at one rational point.
    Nullity {
        manifest: PathBuf,
        /// The point as 2n comma-separated rationals, e.g. "0,0,0,1".
        #[arg(long)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        points: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Check { manifest, seed, points } => {
            let inst = load(&manifest, seed, points)?;
            inst.connection()?;
            validated_metric(&inst)?;
            println!(
                "ok: structure, semispray, {} metric validated (n = {})",
                if inst.strong_torsion.is_some() {
                    "strong torsion,"
                } else {
                    "connection,"
                },
                inst.n
            );
            Ok(0)
        }
        Command::Derive { manifest, out, format, seed, points } => {
            let inst = load(&manifest, seed, points)?;
            let derived = DeriveOutput::build(&inst)?;
            emit(&derived.render(format.into()), out.as_deref())?;
            Ok(0)
        }
        Command::Verify { manifest, out, format, seed, points, timings } => {
            let inst = load(&manifest, seed, points)?;
            let records = run_suite(&inst, timings);
            let report = Report::new(inst.seed, inst.n, records);
            let all_pass = report.all_pass();
            emit(&report.render(format.into()), out.as_deref())?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Nullity { manifest, point, out, format, seed, points } => {
            let inst = load(&manifest, seed, points)?;
            let z = parse_point(&point, 2 * inst.n)?;
            let conn = inst.connection()?;
            let nullity = conn
                .nullity(&z, &inst.ts)
                .map_err(|e| CliError::Rejected(e.to_string()))?;
            let rendered = match Format::from(format) {
                Format::Json => {
                    let value = NullityOutput {
                        point: nullity.point.iter().map(|r| r.to_string()).collect(),
                        mu: nullity.mu,
                        basis: nullity
                            .basis
                            .iter()
                            .map(|v| v.iter().map(|r| r.to_string()).collect())
                            .collect(),
                    };
                    let mut text =
                        serde_json::to_string_pretty(&value).expect("nullity serializes");
                    text.push('\n');
                    text
                }
                Format::Text => {
                    let mut text = format!(
                        "point: {}\nmu: {}\n",
                        render_point(&nullity.point),
                        nullity.mu
                    );
                    if nullity.basis.is_empty() {
                        text.push_str("basis: (none)\n");
                    } else {
                        for (i, vec) in nullity.basis.iter().enumerate() {
                            let parts: Vec<String> =
                                vec.iter().map(|r| r.to_string()).collect();
                            text.push_str(&format!("basis[{i}]: ({})\n", parts.join(", ")));
                        }
                    }
                    text
                }
            };
            emit(&rendered, out.as_deref())?;
            Ok(0)
        }
    }
}

fn load(path: &Path, seed: Option<u64>, points: usize) -> Result<Instance, CliError> {
    let manifest = Manifest::load(path)?;
    Instance::build(&manifest, seed, points)
}

fn validated_metric(inst: &Instance) -> Result<VerticalMetric, CliError> {
    let n = inst.n;
    let nv = 2 * n;
    let entries = match &inst.metric_entries {
        Some(entries) => entries.clone(),
        None => {
            let mut id = vec![vec![MultiPoly::zero(nv); n]; n];
            for (i, row) in id.iter_mut().enumerate() {
                row[i] = MultiPoly::one(nv);
            }
            id
        }
    };
    VerticalMetric::validate(entries, &inst.ts, &inst.points)
        .map_err(|e| CliError::Rejected(e.to_string()))
}

fn parse_point(src: &str, expected: usize) -> Result<Point, CliError> {
    let parts: Vec<&str> = src.split(',').map(str::trim).collect();
    if parts.len() != expected {
        return Err(CliError::Input(format!(
            "--point has {} coordinates (want {expected})",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            parse_rational(p).map_err(|e| CliError::Input(format!("--point \"{p}\": {e}")))
        })
        .collect()
}

fn emit(rendered: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct NullityOutput {
    point: Vec<String>,
    mu: usize,
    basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct DeriveOutput {
    n: usize,
    structure: String,
    semispray_class: String,
    homogeneous: bool,
    gamma: String,
    h: String,
    v: String,
    torsion: String,
    strong_torsion: String,
    curvature: String,
    almost_complex: String,
    /// `Γ^i_α` on the canonical chart; absent for explicit structures.
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<Vec<String>>>,
    extended_metric: Vec<Vec<String>>,
    kahler: String,
}

impl DeriveOutput {
    fn build(inst: &Instance) -> Result<Self, CliError> {
        let ts = &inst.ts;
        let conn = inst.connection()?;
        let data = conn.torsion(&inst.semispray, ts);
        let r = conn.curvature(ts);
        let f = AlmostComplex::associated(&conn, &inst.semispray, ts);
        let metric = validated_metric(inst)?;
        let gm = extend_metric(&metric, &conn, ts);
        let kahler = kahler_form(&gm, &f, ts);
        let coefficients = conn.coefficients(ts).ok().map(|rows| {
            rows.iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect()
        });
        Ok(DeriveOutput {
            n: inst.n,
            structure: if ts.is_canonical() {
                "canonical".to_string()
            } else {
                "explicit".to_string()
            },
            semispray_class: suite::classify_semispray(&inst.semispray).to_string(),
            homogeneous: conn.is_homogeneous(),
            gamma: conn.gamma().to_string(),
            h: conn.h().to_string(),
            v: conn.v().to_string(),
            torsion: data.torsion.to_string(),
            strong_torsion: data.strong.to_string(),
            curvature: r.to_string(),
            almost_complex: f.form().to_string(),
            coefficients,
            extended_metric: gm
                .matrix()
                .iter()
                .map(|row| row.iter().map(|p| p.to_string()).collect())
                .collect(),
            kahler: kahler.to_string(),
        })
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("derive serializes");
                text.push('\n');
                text
            }
            Format::Text => {
                let mut out = String::new();
                out.push_str(&format!(
                    "structure: {} (n = {}), semispray class: {}, homogeneous: {}\n",
                    self.structure, self.n, self.semispray_class, self.homogeneous
                ));
                out.push_str(&format!("gamma = {}\n", self.gamma));
                out.push_str(&format!("h = {}\n", self.h));
                out.push_str(&format!("v = {}\n", self.v));
                out.push_str(&format!("torsion = {}\n", self.torsion));
                out.push_str(&format!("strong_torsion = {}\n", self.strong_torsion));
                out.push_str(&format!("curvature = {}\n", self.curvature));
                out.push_str(&format!("F = {}\n", self.almost_complex));
                match &self.coefficients {
                    Some(rows) => {
                        for (i, row) in rows.iter().enumerate() {
                            for (a, entry) in row.iter().enumerate() {
                                out.push_str(&format!(
                                    "coefficient[{}][{}] = {}\n",
                                    i + 1,
                                    a + 1,
                                    entry
                                ));
                            }
                        }
                    }
                    None => out.push_str("coefficients: not available for an explicit structure\n"),
                }
                for (a, row) in self.extended_metric.iter().enumerate() {
                    out.push_str(&format!("g[{a}] = [{}]\n", row.join(", ")));
                }
                out.push_str(&format!("kahler = {}\n", self.kahler));
                out
            }
        }
    }
}
