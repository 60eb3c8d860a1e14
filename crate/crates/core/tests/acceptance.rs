//! End-to-end acceptance checks for the extraction pipeline and its
//! evaluation machinery. Each test covers one release criterion and prints
//! a single `ACCEPTANCE <name>: PASS` line with the measured numbers, so a
//! `--nocapture` run doubles as a report.
//!
//! Fixtures are scaled to unit point density (bounding-box area equals the
//! point count) before extraction, which pins the suggested alpha near 2
//! regardless of the generator's coordinate scale.

use std::collections::{BTreeSet, HashMap};
use std::time::Duration;

use polyshell::extract::{extract_multipolygon, BoundaryIndex, ExtractionReport};
use polyshell::geom::{incircle, CirclePosition, LinearRing, MultiPolygon, PointSet, Polygon};
use polyshell::mesh::{halfedges_of_triangle, triangulate};
use polyshell::metrics::{convexity, l2_error, suggest_alpha, validate_multipolygon};
use polyshell::shape::{extract_regions, FilterConfig, FilteredSet};
use polyshell::synth::{generate_random_polygon, sample_points_in_polygon};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scaled(ps: &PointSet, s: f64) -> Option<PointSet> {
    PointSet::from_coords(ps.points().iter().map(|p| (p.x * s, p.y * s))).ok()
}

struct Fixture {
    gt: MultiPolygon,
    gt_ps: PointSet,
    samples: PointSet,
    cv: f64,
}

fn build_fixture(
    n_vertices: usize,
    holes: usize,
    n_samples: usize,
    seed: u64,
) -> Option<Fixture> {
    let (poly, ps) = generate_random_polygon(n_vertices, holes, seed).ok()?;
    let cv = convexity(&poly, &ps).ok()?;
    let raw = sample_points_in_polygon(&poly, &ps, n_samples, seed ^ 0x5EED_5EED).ok()?;
    let s = (n_samples as f64 / raw.bounds()?.area()).sqrt();
    Some(Fixture {
        gt: MultiPolygon::new(vec![poly]),
        gt_ps: scaled(&ps, s)?,
        samples: scaled(&raw, s)?,
        cv,
    })
}

fn run_extraction(samples: &PointSet) -> (MultiPolygon, ExtractionReport) {
    let alpha = suggest_alpha(samples).expect("fixture bounding box is nondegenerate");
    let cfg = FilterConfig::by_alpha(alpha).expect("suggested alpha is positive");
    extract_multipolygon(samples, &cfg).expect("extraction succeeds on fixture")
}

fn random_point_set(rng: &mut ChaCha8Rng, n: usize, extent: f64) -> PointSet {
    PointSet::from_coords(
        (0..n).map(|_| (rng.random_range(-extent..extent), rng.random_range(-extent..extent))),
    )
    .expect("random floats collide with negligible probability")
}

/// Over 1,000 randomized fixtures (half with 1 to 5 holes, convexity
/// spanning the low/mid/hi bands), every extracted multipolygon passes the
/// validity audit.
#[test]
fn validity_over_one_thousand_randomized_fixtures() {
    let mut done = 0u32;
    let mut skipped = 0u32;
    let mut bands = [0u32; 3];
    let (mut cv_min, mut cv_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut seed = 0u64;
    while done < 1000 {
        seed += 1;
        let holes = if done.is_multiple_of(2) { 0 } else { 1 + (seed % 5) as usize };
        let n_vertices = 8 + (seed % 33) as usize;
        let Some(fx) = build_fixture(n_vertices, holes, 8_000, seed) else {
            skipped += 1;
            assert!(skipped < 20, "fixture generator failed {skipped} times");
            continue;
        };
        cv_min = cv_min.min(fx.cv);
        cv_max = cv_max.max(fx.cv);
        bands[if fx.cv < 0.5 {
            0
        } else if fx.cv < 0.75 {
            1
        } else {
            2
        }] += 1;

        let (mp, _) = run_extraction(&fx.samples);
        for (i, report) in validate_multipolygon(&mp, &fx.samples).iter().enumerate() {
            assert!(
                report.is_valid(),
                "seed {seed}: polygon {i} invalid: {:?}",
                report.violations
            );
        }
        done += 1;
    }
    assert!(cv_min < 0.5 && cv_max > 0.85, "cv range [{cv_min:.2}, {cv_max:.2}] too narrow");
    assert!(bands.iter().all(|&c| c >= 25), "convexity bands unbalanced: {bands:?}");
    println!(
        "ACCEPTANCE validity: PASS - 1000/1000 extractions valid, cv {cv_min:.2}-{cv_max:.2}, \
         bands low/mid/hi = {}/{}/{}",
        bands[0], bands[1], bands[2]
    );
}

/// On high-convexity fixtures (cv >= 0.75) the shape error stays small:
/// mean at most 10%, max at most 20%. Across the convexity bands the mean
/// error grows as convexity falls.
#[test]
fn accuracy_tracks_convexity_bands() {
    const CAPS: [usize; 3] = [40, 40, 100];
    let mut errs: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut seed = 10_000u64;
    while errs.iter().zip(CAPS).any(|(v, cap)| v.len() < cap) {
        seed += 1;
        assert!(
            seed < 25_000,
            "ran out of seeds filling convexity bands: {:?}",
            errs.iter().map(Vec::len).collect::<Vec<_>>()
        );
        let n_vertices = 8 + (seed % 33) as usize;
        let Some((poly, ps)) = generate_random_polygon(n_vertices, 0, seed).ok() else {
            continue;
        };
        let cv = convexity(&poly, &ps).expect("generated shells are nondegenerate");
        let band = if cv < 0.5 {
            0
        } else if cv < 0.75 {
            1
        } else {
            2
        };
        if errs[band].len() >= CAPS[band] {
            continue;
        }
        let Some(fx) = build_fixture(n_vertices, 0, 8_000, seed) else { continue };
        let (mp, _) = run_extraction(&fx.samples);
        let est = l2_error(&fx.gt, &mp, &fx.gt_ps, &fx.samples, 20_000, seed ^ 0xACC)
            .expect("extracted shape has positive area");
        errs[band].push(est.l2_error);
    }

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (low, mid, hi) = (mean(&errs[0]), mean(&errs[1]), mean(&errs[2]));
    let hi_max = errs[2].iter().fold(0.0f64, |a, &b| a.max(b));
    assert!(hi <= 0.10, "hi-band mean l2 {hi:.4} exceeds 10%");
    assert!(hi_max <= 0.20, "hi-band max l2 {hi_max:.4} exceeds 20%");
    assert!(
        low >= mid && mid >= hi && low > hi,
        "error does not grow as convexity falls: low {low:.4}, mid {mid:.4}, hi {hi:.4}"
    );
    println!(
        "ACCEPTANCE accuracy-bands: PASS - mean l2 low/mid/hi = {low:.3}/{mid:.3}/{hi:.3}, \
         hi max {hi_max:.3} over {}/{}/{} fixtures",
        errs[0].len(),
        errs[1].len(),
        errs[2].len()
    );
}

fn ring_coords(cx: f64, cy: f64, r: f64, m: usize, clockwise: bool) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = (0..m)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64) / (m as f64);
            (cx + r * t.cos(), cy + r * t.sin())
        })
        .collect();
    if clockwise {
        pts.into_iter().rev().collect()
    } else {
        pts
    }
}

fn hole_fixture_case(
    name: &str,
    shell: Vec<(f64, f64)>,
    hole: Vec<(f64, f64)>,
    seed: u64,
) -> (usize, usize, f64) {
    let n_shell = shell.len();
    let mut coords = shell;
    coords.extend(hole);
    let ps = PointSet::from_coords(coords).unwrap();
    let shell_ring = LinearRing::new((0..n_shell).collect()).unwrap();
    let hole_ring = LinearRing::new((n_shell..ps.len()).collect()).unwrap();
    let poly = Polygon::new(shell_ring, vec![hole_ring]);

    let n = 25_000;
    let raw = sample_points_in_polygon(&poly, &ps, n, seed).unwrap();
    let s = (n as f64 / raw.bounds().unwrap().area()).sqrt();
    let samples = scaled(&raw, s).unwrap();
    let gt_ps = scaled(&ps, s).unwrap();
    let gt = MultiPolygon::new(vec![poly]);

    let (mp, _) = run_extraction(&samples);
    let n_polys = mp.len();
    let n_holes = mp.iter().map(|p| p.holes.len()).sum();
    let est = l2_error(&gt, &mp, &gt_ps, &samples, 100_000, seed + 1).unwrap();
    assert_eq!(n_polys, 1, "{name}: expected one polygon, got {n_polys}");
    assert_eq!(n_holes, 1, "{name}: expected one hole, got {n_holes}");
    assert!(est.l2_error <= 0.05, "{name}: l2 {:.4} exceeds 5%", est.l2_error);
    (n_polys, n_holes, est.l2_error)
}

/// The annulus and square-with-void fixtures come back as exactly one
/// polygon with exactly one hole, within 5% shape error of ground truth.
#[test]
fn hole_reconstruction_on_analytic_fixtures() {
    let (_, _, l2_annulus) = hole_fixture_case(
        "annulus",
        ring_coords(0.0, 0.0, 10.0, 64, false),
        ring_coords(0.0, 0.0, 5.0, 64, true),
        9_001,
    );
    let square = |x0: f64, y0: f64, side: f64| {
        vec![(x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side)]
    };
    let void_hole: Vec<(f64, f64)> = square(12.0, 12.0, 6.0).into_iter().rev().collect();
    let (_, _, l2_void) =
        hole_fixture_case("square-with-void", square(0.0, 0.0, 30.0), void_hole, 9_002);
    println!(
        "ACCEPTANCE hole-reconstruction: PASS - annulus l2 {l2_annulus:.4}, \
         square-with-void l2 {l2_void:.4}, both 1 polygon / 1 hole"
    );
}

/// For 100 random point sets, every triangle's circumcircle is empty under
/// the exact predicate and the triangle count matches 2n - h - 2.
#[test]
fn delaunay_audit_is_exact_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut triangles_checked = 0usize;
    for case in 0..100 {
        let n = rng.random_range(3..=500);
        let ps = random_point_set(&mut rng, n, 1e3);
        let mesh = triangulate(&ps).unwrap();
        for t in 0..mesh.num_triangles() {
            let [a, b, c] = mesh.triangle_vertices(t);
            for pi in 0..ps.len() {
                if pi == a || pi == b || pi == c {
                    continue;
                }
                assert_ne!(
                    incircle(ps[a], ps[b], ps[c], ps[pi]),
                    CirclePosition::Inside,
                    "case {case}: point {pi} lies inside circumcircle of triangle {t}"
                );
            }
        }
        triangles_checked += mesh.num_triangles();
        assert_eq!(
            mesh.num_triangles(),
            2 * ps.len() - mesh.hull.len() - 2,
            "case {case}: Euler count"
        );
    }
    println!(
        "ACCEPTANCE delaunay-oracle: PASS - 100 point sets, {triangles_checked} triangles, \
         exact circumcircle emptiness and Euler counts"
    );
}

/// For 100 random regions, the boundary half-edge set equals the set
/// derived from undirected edge incidence counts.
#[test]
fn boundary_set_matches_incidence_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut checked = 0usize;
    'outer: while checked < 100 {
        let n = rng.random_range(50..=400);
        let ps = random_point_set(&mut rng, n, 100.0);
        let mesh = triangulate(&ps).unwrap();
        let keep_p = rng.random_range(0.4..0.85);
        let mut kept = FilteredSet::empty(mesh.num_triangles());
        for t in 0..mesh.num_triangles() {
            if rng.random_bool(keep_p) {
                kept.insert(t);
            }
        }
        for region in extract_regions(&mesh, &kept, 1).iter() {
            // Count how many region triangles share each undirected edge;
            // the boundary is exactly the count-one edges.
            let mut incidence: HashMap<(usize, usize), usize> = HashMap::new();
            for &t in region.triangles() {
                for he in halfedges_of_triangle(t) {
                    let (a, b) = (mesh.origin(he), mesh.dest(he));
                    *incidence.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                }
            }
            let mut want = BTreeSet::new();
            for &t in region.triangles() {
                for he in halfedges_of_triangle(t) {
                    let (a, b) = (mesh.origin(he), mesh.dest(he));
                    if incidence[&(a.min(b), a.max(b))] == 1 {
                        want.insert(he);
                    }
                }
            }
            let got: BTreeSet<usize> = BoundaryIndex::new(&mesh, region).remaining().collect();
            assert_eq!(got, want, "boundary set mismatch on region of {}", region.len());
            checked += 1;
            if checked == 100 {
                break 'outer;
            }
        }
    }
    println!(
        "ACCEPTANCE boundary-oracle: PASS - 100 regions, boundary half-edge sets equal \
         the incidence oracle"
    );
}

fn perf_fixture(n: usize) -> PointSet {
    let (poly, ps) = generate_random_polygon(24, 2, 31_415).unwrap();
    let raw = sample_points_in_polygon(&poly, &ps, n, 2_718).unwrap();
    let s = (n as f64 / raw.bounds().unwrap().area()).sqrt();
    scaled(&raw, s).unwrap()
}

/// A 64,000-point extraction finishes well under a second, and total time
/// grows sub-quadratically: an 8x point increase costs at most 16x time.
/// Runs of the two sizes are interleaved so background load cancels out.
#[test]
fn extraction_time_at_scale() {
    let small = perf_fixture(8_000);
    let large = perf_fixture(64_000);
    let reps = 5u32;
    let (mut small_total, mut large_total) = (Duration::ZERO, Duration::ZERO);
    for _ in 0..reps {
        small_total += run_extraction(&small).1.total;
        large_total += run_extraction(&large).1.total;
    }
    let large_mean = large_total / reps;
    let ratio = large_total.as_secs_f64() / small_total.as_secs_f64();
    assert!(large_mean < Duration::from_secs(1), "64k mean {large_mean:?} not under 1 s");
    assert!(ratio <= 16.0, "time(64k)/time(8k) = {ratio:.1} exceeds 16");
    println!(
        "ACCEPTANCE performance: PASS - 64k mean {:.1} ms, time(64k)/time(8k) = {ratio:.1}",
        large_mean.as_secs_f64() * 1e3
    );
}

/// Polygon extraction works on the region boundary rather than its area,
/// so at 64,000 points it stays a small slice of the pipeline.
#[test]
fn polygon_stage_is_a_small_share_at_scale() {
    let samples = perf_fixture(64_000);
    let (mut poly_stage, mut total) = (Duration::ZERO, Duration::ZERO);
    for _ in 0..3 {
        let report = run_extraction(&samples).1;
        poly_stage += report.polygon_extraction;
        total += report.total;
    }
    let share = poly_stage.as_secs_f64() / total.as_secs_f64();
    assert!(share < 0.15, "polygon stage is {:.1}% of total", share * 100.0);
    println!(
        "ACCEPTANCE stage-share: PASS - polygon stage {:.2}% of total at 64k points",
        share * 100.0
    );
}

/// The Monte-Carlo error estimate lands within 0.05 of the analytic truth
/// at 100,000 samples for at least 99 of 100 seeds on each fixture.
#[test]
fn error_estimator_is_calibrated() {
    let square = |x0: f64, y0: f64, side: f64| -> (MultiPolygon, PointSet) {
        let ps = PointSet::from_coords([
            (x0, y0),
            (x0 + side, y0),
            (x0 + side, y0 + side),
            (x0, y0 + side),
        ])
        .unwrap();
        let poly = Polygon::new(LinearRing::new(vec![0, 1, 2, 3]).unwrap(), vec![]);
        (MultiPolygon::new(vec![poly]), ps)
    };
    let square_with_hole = || -> (MultiPolygon, PointSet) {
        let ps = PointSet::from_coords([
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.25, 0.25),
            (0.75, 0.25),
            (0.75, 0.75),
            (0.25, 0.75),
        ])
        .unwrap();
        let shell = LinearRing::new(vec![0, 1, 2, 3]).unwrap();
        let hole = LinearRing::new(vec![7, 6, 5, 4]).unwrap();
        (MultiPolygon::new(vec![Polygon::new(shell, vec![hole])]), ps)
    };

    let unit = square(0.0, 0.0, 1.0);
    let shifted = square(0.5, 0.0, 1.0);
    let hole = square_with_hole();
    let cases = [
        ("identical", &unit, &unit, 0.0),
        ("shifted", &unit, &shifted, 1.0),
        ("hole", &unit, &hole, 1.0 / 3.0),
    ];

    let mut hit_counts = Vec::new();
    for (name, gt, cs, truth) in cases {
        let hits = (0..100)
            .filter(|&seed| {
                let est = l2_error(&gt.0, &cs.0, &gt.1, &cs.1, 100_000, seed).unwrap();
                (est.l2_error - truth).abs() <= 0.05
            })
            .count();
        assert!(hits >= 99, "{name}: only {hits}/100 seeds within 0.05 of {truth}");
        hit_counts.push(hits);
    }
    println!(
        "ACCEPTANCE estimator-calibration: PASS - {}/{}/{} of 100 seeds within 0.05 \
         on the identical/shifted/hole fixtures",
        hit_counts[0], hit_counts[1], hit_counts[2]
    );
}
