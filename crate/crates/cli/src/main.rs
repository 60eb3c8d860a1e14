//! `polyshell`: concave (multi)polygon extraction from unordered 2D point
//! sets, plus a validity audit and a benchmark harness.
//!
//! Exit codes: 0 success, 1 input parse failure, 2 invalid parameters,
//! 3 extraction or validation failure.

mod bench;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand};
use polyshell::extract::ExtractionReport;
use polyshell::metrics::{
    suggest_alpha, validate_multipolygon, RingId, RingViolation, ViolationKind,
};
use polyshell::{extract_multipolygon, FilterConfig};

#[derive(Parser)]
#[command(
    name = "polyshell",
    version,
    about = "Concave (multi)polygon extraction from unordered 2D point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a concave (multi)polygon from a point file
    Extract(ExtractArgs),
    /// Time the pipeline stages over a suite of cases, writing CSV
    Benchmark(BenchmarkArgs),
    /// Audit GeoJSON polygons for OGC validity
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ExtractArgs {
    /// Point file: CSV (`x,y` per line) or GeoJSON points
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted
    #[arg(long, value_enum)]
    format: Option<input::InputFormat>,
    /// Keep triangles whose circumradius is at most this
    #[arg(long)]
    alpha: Option<f64>,
    /// Keep triangles whose longest edge is at most this
    #[arg(long)]
    lmax: Option<f64>,
    /// Derive alpha from the input's point density
    #[arg(long)]
    auto_alpha: bool,
    /// Drop regions with fewer triangles than this
    #[arg(long, default_value_t = 1)]
    min_region_size: usize,
    /// Write the geometry here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Geometry output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Wkt)]
    out_format: OutputFormat,
    /// Also render an SVG picture to this path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Significant digits for serialized coordinates
    #[arg(long, default_value_t = 9)]
    precision: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Wkt,
    Geojson,
    Svg,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Suite configuration file (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Extraction runs per case
    #[arg(long, default_value_t = 10)]
    reps: u32,
    /// Master seed for generated cases
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the CSV report here instead of standard output
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// GeoJSON file holding Polygon or MultiPolygon geometry
    #[arg(long)]
    input: PathBuf,
}

/// Failure category, mapped one-to-one onto the documented exit codes.
enum CliError {
    Parse(anyhow::Error),
    Params(anyhow::Error),
    Extraction(anyhow::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Params(_) => 2,
            CliError::Extraction(_) => 3,
        }
    }

    fn inner(&self) -> &anyhow::Error {
        match self {
            CliError::Parse(e) | CliError::Params(e) | CliError::Extraction(e) => e,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Benchmark(args) => bench::cmd_benchmark(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.inner());
            ExitCode::from(e.code())
        }
    }
}

fn ms3(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn report_json(r: &ExtractionReport) -> String {
    serde_json::json!({
        "n_points": r.n_points,
        "n_triangles": r.n_triangles,
        "n_retained": r.n_retained,
        "n_regions": r.n_regions,
        "n_polygons": r.n_polygons,
        "n_holes": r.n_holes,
        "triangulation_ms": ms3(r.triangulation),
        "shape_ms": ms3(r.shape_extraction),
        "polygon_ms": ms3(r.polygon_extraction),
        "total_ms": ms3(r.total),
    })
    .to_string()
}

fn cmd_extract(args: ExtractArgs) -> Result<(), CliError> {
    if args.alpha.is_some() && args.auto_alpha {
        return Err(CliError::Params(anyhow!("--alpha conflicts with --auto-alpha")));
    }
    if args.alpha.is_none() && args.lmax.is_none() && !args.auto_alpha {
        return Err(CliError::Params(anyhow!(
            "pass at least one filter criterion: --alpha, --lmax, or --auto-alpha"
        )));
    }
    if args.precision == 0 {
        return Err(CliError::Params(anyhow!("--precision must be at least 1")));
    }

    let format = input::detect_format(&args.input, args.format);
    let points = input::parse_points(&args.input, format).map_err(CliError::Parse)?;

    let alpha = if args.auto_alpha {
        Some(suggest_alpha(&points).map_err(|e| CliError::Params(anyhow!("{e}")))?)
    } else {
        args.alpha
    };
    let config = FilterConfig::new(alpha, args.lmax)
        .map_err(|e| CliError::Params(e.into()))?
        .with_min_region_size(args.min_region_size);

    let (mp, report) =
        extract_multipolygon(&points, &config).map_err(|e| CliError::Extraction(e.into()))?;

    let geometry = match args.out_format {
        OutputFormat::Wkt => output::to_wkt(&mp, &points, args.precision) + "\n",
        OutputFormat::Geojson => output::to_geojson(&mp, &points, args.precision) + "\n",
        OutputFormat::Svg => output::to_svg(&mp, &points),
    };
    let write = |path: &PathBuf, data: &str| {
        std::fs::write(path, data)
            .map_err(|e| CliError::Extraction(anyhow!("cannot write {}: {e}", path.display())))
    };
    match &args.out {
        Some(path) => write(path, &geometry)?,
        None => print!("{geometry}"),
    }
    if let Some(path) = &args.svg {
        write(path, &output::to_svg(&mp, &points))?;
    }
    println!("{}", report_json(&report));
    Ok(())
}

fn ring_label(ring: RingId) -> String {
    match ring {
        RingId::Shell => "shell".to_string(),
        RingId::Hole(i) => format!("hole {i}"),
    }
}

fn violation_label(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::TooShort => "too-short",
        ViolationKind::DegenerateEdge => "degenerate-edge",
        ViolationKind::SelfIntersection => "self-intersection",
        ViolationKind::BadWinding => "bad-winding",
        ViolationKind::HoleOutsideShell => "hole-outside-shell",
        ViolationKind::HoleInHole => "hole-in-hole",
    }
}

fn violation_json(v: &RingViolation) -> serde_json::Value {
    serde_json::json!({
        "ring": ring_label(v.ring),
        "kind": violation_label(v.kind),
    })
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Parse(anyhow!("cannot read {}: {e}", args.input.display())))?;
    let (mp, ps) = input::parse_polygons(&text).map_err(CliError::Parse)?;
    if mp.is_empty() {
        return Err(CliError::Parse(anyhow!("no polygons in {}", args.input.display())));
    }

    let mut invalid = 0usize;
    for (i, report) in validate_multipolygon(&mp, &ps).iter().enumerate() {
        if !report.is_valid() {
            invalid += 1;
        }
        let violations: Vec<serde_json::Value> =
            report.violations.iter().map(violation_json).collect();
        println!(
            "{}",
            serde_json::json!({
                "polygon": i,
                "valid": report.is_valid(),
                "violations": violations,
            })
        );
    }
    if invalid > 0 {
        return Err(CliError::Extraction(anyhow!(
            "{invalid} of {} polygons invalid",
            mp.len()
        )));
    }
    Ok(())
}
