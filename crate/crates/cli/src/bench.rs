//! Benchmark harness: runs the extraction pipeline repeatedly over a suite
//! of configured cases and reports per-stage timing statistics as CSV.
//! Cases either load a point file or generate a random polygon and sample
//! it; generated cases also get a shape-error column against their ground
//! truth. Parsing and generation happen outside the timed section.

use std::path::PathBuf;

use anyhow::{anyhow, Context};
use polyshell::metrics::{l2_error, suggest_alpha, validate_multipolygon};
use polyshell::synth::{generate_random_polygon, sample_points_in_polygon};
use polyshell::{extract_multipolygon, FilterConfig, MultiPolygon, PointSet};
use serde::Deserialize;

use crate::input;
use crate::{BenchmarkArgs, CliError};

pub const CSV_HEADER: &str = "case,n_points,triangulation_ms_mean,triangulation_ms_std,\
shape_ms_mean,shape_ms_std,polygon_ms_mean,polygon_ms_std,total_ms_mean,total_ms_std,\
l2_error,valid";

#[derive(Debug, Deserialize)]
struct Suite {
    cases: Vec<CaseConfig>,
}

/// One benchmark case. With `path` set, points come from that file and the
/// generator fields are ignored; otherwise a polygon with `n_vertices` and
/// `holes` is generated and sampled to `n_points`, normalized to unit
/// point density. Omitting both `alpha` and `lmax` uses the suggested
/// alpha for the point set.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseConfig {
    name: String,
    #[serde(default)]
    path: Option<PathBuf>,
    #[serde(default)]
    n_points: Option<usize>,
    #[serde(default = "default_vertices")]
    n_vertices: usize,
    #[serde(default)]
    holes: usize,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    lmax: Option<f64>,
    #[serde(default = "default_min_region_size")]
    min_region_size: usize,
}

fn default_vertices() -> usize {
    24
}

fn default_min_region_size() -> usize {
    1
}

pub fn cmd_benchmark(args: BenchmarkArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Params(anyhow!("--reps must be at least 1")));
    }
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))
        .map_err(CliError::Parse)?;
    let suite: Suite = serde_json::from_str(&text)
        .context("invalid suite configuration")
        .map_err(CliError::Parse)?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for (index, case) in suite.cases.iter().enumerate() {
        csv.push_str(&run_case(case, index, args.reps, args.seed)?);
        csv.push('\n');
    }

    match &args.report {
        Some(path) => std::fs::write(path, csv)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(CliError::Extraction)?,
        None => print!("{csv}"),
    }
    Ok(())
}

struct CasePoints {
    points: PointSet,
    truth: Option<(MultiPolygon, PointSet)>,
}

fn case_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn scale(ps: &PointSet, s: f64) -> anyhow::Result<PointSet> {
    PointSet::from_coords(ps.points().iter().map(|p| (p.x * s, p.y * s)))
        .map_err(|e| anyhow!("scaling collapsed points: {e}"))
}

fn prepare(case: &CaseConfig, index: usize, seed: u64) -> Result<CasePoints, CliError> {
    if let Some(path) = &case.path {
        let format = input::detect_format(path, None);
        let points = input::parse_points(path, format)
            .with_context(|| format!("case {:?}", case.name))
            .map_err(CliError::Parse)?;
        return Ok(CasePoints { points, truth: None });
    }

    let n = case.n_points.ok_or_else(|| {
        CliError::Params(anyhow!("case {:?}: a generated case needs n_points", case.name))
    })?;
    if n < 3 || case.n_vertices < 3 {
        return Err(CliError::Params(anyhow!(
            "case {:?}: n_points and n_vertices must be at least 3",
            case.name
        )));
    }
    let cs = case_seed(seed, index);
    let fail = |e: anyhow::Error| CliError::Extraction(e.context(format!("case {:?}", case.name)));
    let (poly, ps) =
        generate_random_polygon(case.n_vertices, case.holes, cs).map_err(|e| fail(e.into()))?;
    let raw =
        sample_points_in_polygon(&poly, &ps, n, cs ^ 0x5A17).map_err(|e| fail(e.into()))?;
    let unit_density = (n as f64 / raw.bounds().expect("samples are nonempty").area()).sqrt();
    let points = scale(&raw, unit_density).map_err(fail)?;
    let gt_ps = scale(&ps, unit_density).map_err(fail)?;
    Ok(CasePoints {
        points,
        truth: Some((MultiPolygon::new(vec![poly]), gt_ps)),
    })
}

fn mean_std(ms: &[f64]) -> (f64, f64) {
    let n = ms.len() as f64;
    let mean = ms.iter().sum::<f64>() / n;
    if ms.len() < 2 {
        return (mean, 0.0);
    }
    let var = ms.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn csv_field(name: &str) -> String {
    if name.contains([',', '"', '\n']) {
        format!("\"{}\"", name.replace('"', "\"\""))
    } else {
        name.to_string()
    }
}

fn run_case(case: &CaseConfig, index: usize, reps: u32, seed: u64) -> Result<String, CliError> {
    let prepared = prepare(case, index, seed)?;
    let alpha = match (case.alpha, case.lmax) {
        (None, None) => Some(
            suggest_alpha(&prepared.points)
                .map_err(|e| CliError::Params(anyhow!("case {:?}: {e}", case.name)))?,
        ),
        (alpha, _) => alpha,
    };
    let config = FilterConfig::new(alpha, case.lmax)
        .map_err(|e| CliError::Params(anyhow!("case {:?}: {e}", case.name)))?
        .with_min_region_size(case.min_region_size);

    let mut stages: [Vec<f64>; 4] = Default::default();
    let mut extracted: Option<MultiPolygon> = None;
    for _ in 0..reps {
        let (mp, report) = extract_multipolygon(&prepared.points, &config)
            .map_err(|e| CliError::Extraction(anyhow!("case {:?}: {e}", case.name)))?;
        for (bucket, duration) in stages.iter_mut().zip([
            report.triangulation,
            report.shape_extraction,
            report.polygon_extraction,
            report.total,
        ]) {
            bucket.push(duration.as_secs_f64() * 1e3);
        }
        extracted.get_or_insert(mp);
    }
    let mp = extracted.expect("reps is at least 1");

    let valid = validate_multipolygon(&mp, &prepared.points)
        .iter()
        .all(|r| r.is_valid());
    let l2_cell = match &prepared.truth {
        Some((gt, gt_ps)) => {
            let est = l2_error(gt, &mp, gt_ps, &prepared.points, 20_000, case_seed(seed, index))
                .map_err(|e| CliError::Extraction(anyhow!("case {:?}: {e}", case.name)))?;
            format!("{:.6}", est.l2_error)
        }
        None => String::new(),
    };

    let mut row = format!("{},{}", csv_field(&case.name), prepared.points.len());
    for bucket in &stages {
        let (mean, std) = mean_std(bucket);
        row.push_str(&format!(",{mean:.3},{std:.3}"));
    }
    row.push_str(&format!(",{l2_cell},{valid}"));
    Ok(row)
}
