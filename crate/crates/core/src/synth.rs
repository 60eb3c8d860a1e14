//! Seeded generators for evaluation fixtures: random concave polygons with
//! optional holes, and uniform point samples drawn from a polygon's
//! interior. Everything is deterministic in the seed, so test suites built
//! on these reproduce bit-for-bit.

use std::collections::HashSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{Bounds, LinearRing, Point, PointSet, Polygon};
use crate::metrics::{point_in_polygon, ring_contains, validate_polygon, Containment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("polygon generator needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("could not build a valid polygon with {requested} holes in {attempts} attempts")]
    HolePlacement { requested: usize, attempts: usize },
    #[error("shell bounding box is degenerate")]
    DegenerateBounds,
    #[error("rejection acceptance rate fell below 1e-4; polygon too thin for its bounding box")]
    LowAcceptance,
}

const SCALE: f64 = 10.0;
const REBUILDS: usize = 64;

/// A random simple polygon: vertices at jittered ascending angles around
/// the origin with radii in a per-seed band (star-shaped, hence simple), plus
/// `holes` circular holes placed fully inside with a safety margin and
/// pairwise disjoint. The result always passes [`validate_polygon`]; seeds
/// reproduce exactly.
///
/// Narrow radius bands give nearly convex outlines, wide bands give spiky
/// concave ones, so sweeping seeds covers the whole convexity range.
pub fn generate_random_polygon(
    n_vertices: usize,
    holes: usize,
    seed: u64,
) -> Result<(Polygon, PointSet), SynthError> {
    if n_vertices < 3 {
        return Err(SynthError::TooFewVertices(n_vertices));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = std::f64::consts::TAU;

    'rebuild: for _ in 0..REBUILDS {
        // Jittered regular angles: ascending by construction, with a
        // guaranteed gap of at least 0.3 steps between neighbours.
        let phase = rng.random_range(0.0..tau);
        let step = tau / n_vertices as f64;
        let angles: Vec<f64> = (0..n_vertices)
            .map(|i| phase + step * (i as f64 + rng.random_range(0.15..0.85)))
            .collect();

        let lo = rng.random_range(0.05..0.9);
        let shell_pts: Vec<Point> = angles
            .iter()
            .map(|&t| {
                let r = rng.random_range(lo * SCALE..SCALE);
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let Ok(shell_ps) = PointSet::new(shell_pts.clone()) else {
            continue 'rebuild;
        };
        let shell_ring = LinearRing::new((0..n_vertices).collect())
            .expect("distinct angles give distinct vertices");

        // Place each hole as a circle that clears the shell (probed with a
        // margin) and every hole placed before it.
        let mut placed: Vec<(Point, f64)> = Vec::new();
        let mut hole_pts: Vec<Vec<Point>> = Vec::new();
        for _ in 0..holes {
            let mut done = false;
            'place: for _ in 0..200 {
                let rh = rng.random_range(0.04 * SCALE..0.12 * SCALE);
                let margin = 0.3 * rh;
                let c = Point::new(
                    rng.random_range(-SCALE..SCALE),
                    rng.random_range(-SCALE..SCALE),
                );
                for k in 0..24 {
                    let t = tau * (k as f64) / 24.0;
                    let probe = Point::new(
                        c.x + (rh + margin) * t.cos(),
                        c.y + (rh + margin) * t.sin(),
                    );
                    if ring_contains(&shell_ring, &shell_ps, probe) != Containment::Inside {
                        continue 'place;
                    }
                }
                let too_close = placed.iter().any(|&(c2, r2)| {
                    let (dx, dy) = (c.x - c2.x, c.y - c2.y);
                    (dx * dx + dy * dy).sqrt() < 1.3 * (rh + r2)
                });
                if too_close {
                    continue 'place;
                }

                let m = rng.random_range(12..=20);
                let pts: Vec<Point> = (0..m)
                    .map(|j| {
                        let t = tau * (j as f64) / (m as f64);
                        Point::new(c.x + rh * t.cos(), c.y + rh * t.sin())
                    })
                    .collect();
                placed.push((c, rh));
                hole_pts.push(pts);
                done = true;
                break;
            }
            if !done {
                continue 'rebuild;
            }
        }

        let mut all_pts = shell_pts;
        let mut hole_rings = Vec::with_capacity(holes);
        for pts in hole_pts {
            let start = all_pts.len();
            let m = pts.len();
            all_pts.extend(pts);
            // Circle points were generated counter-clockwise; holes wind
            // clockwise, so reverse.
            let ids: Vec<usize> = (start..start + m).rev().collect();
            hole_rings.push(LinearRing::new(ids).expect("circle vertices are distinct"));
        }
        let Ok(ps) = PointSet::new(all_pts) else {
            continue 'rebuild;
        };
        let poly = Polygon::new(shell_ring, hole_rings);
        if validate_polygon(&poly, &ps).is_valid() {
            return Ok((poly, ps));
        }
    }
    Err(SynthError::HolePlacement { requested: holes, attempts: REBUILDS })
}

fn shell_bounds(poly: &Polygon, ps: &PointSet) -> Option<Bounds> {
    let mut it = poly.shell.indices().iter().map(|&pi| ps[pi]);
    let first = it.next()?;
    let mut b = Bounds { min: first, max: first };
    for p in it {
        b.min = Point::new(b.min.x.min(p.x), b.min.y.min(p.y));
        b.max = Point::new(b.max.x.max(p.x), b.max.y.max(p.y));
    }
    Some(b)
}

/// Exactly `n` distinct points uniform over the polygon's interior
/// (boundary included), by rejection from the shell bounding box.
/// Deterministic per seed. Fails when fewer than one in ten thousand box
/// samples lands inside, which signals a degenerate sliver of a polygon.
pub fn sample_points_in_polygon(
    poly: &Polygon,
    ps: &PointSet,
    n: usize,
    seed: u64,
) -> Result<PointSet, SynthError> {
    assert!(n >= 1, "need a positive sample budget");
    let b = shell_bounds(poly, ps).ok_or(SynthError::DegenerateBounds)?;
    if !(b.width() > 0.0 && b.height() > 0.0) {
        return Err(SynthError::DegenerateBounds);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(n);
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut attempts: usize = 0;
    while out.len() < n {
        attempts += 1;
        if attempts.is_multiple_of(10_000) && (out.len() as f64) < 1e-4 * attempts as f64 {
            return Err(SynthError::LowAcceptance);
        }
        let p = Point::new(
            rng.random_range(b.min.x..b.max.x),
            rng.random_range(b.min.y..b.max.y),
        );
        if point_in_polygon(p, poly, ps) && seen.insert((p.x.to_bits(), p.y.to_bits())) {
            out.push((p.x, p.y));
        }
    }
    Ok(PointSet::from_coords(out).expect("deduplicated finite samples"))
}
