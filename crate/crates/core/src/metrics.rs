//! Validity auditing and quality metrics.
//!
//! [`validate_polygon`] is an OGC-style audit used to check every pipeline
//! output: ring structure, simplicity, winding, and hole placement, all
//! decided with exact predicates. [`convexity`] and [`l2_error`] quantify
//! how concave a result is and how far it deviates from a reference shape;
//! [`suggest_alpha`] is the density heuristic for picking a filter
//! threshold.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{
    convex_hull, orient2d, signed_area, Bounds, LinearRing, MultiPolygon, Orientation, Point,
    PointSet, Polygon,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("shell is degenerate (all hull candidates collinear); convexity undefined")]
    DegenerateShell,
    #[error("candidate hit zero samples; its area is too small for the sample budget")]
    ZeroCandidateArea,
    #[error("point set bounding box has zero area")]
    ZeroBoundingBox,
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
}

/// Which ring of a polygon a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RingId {
    Shell,
    Hole(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// Fewer than 3 vertices.
    TooShort,
    /// A zero-length edge (repeated consecutive vertex).
    DegenerateEdge,
    /// The ring crosses or touches itself.
    SelfIntersection,
    /// Shell not counter-clockwise, or hole not clockwise.
    BadWinding,
    /// Part of the hole lies outside the shell.
    HoleOutsideShell,
    /// The hole is nested inside another hole.
    HoleInHole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RingViolation {
    pub ring: RingId,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    pub violations: Vec<RingViolation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Where a point sits relative to a closed ring, by even-odd crossing
/// parity. Orientation of the ring does not matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient2d(a, b, p) == Orientation::Collinear
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Exact point-vs-ring test: boundary is detected explicitly, and each
/// crossing of the rightward ray is decided by an orientation sign, with the
/// half-open vertical rule so edges through a vertex are not counted twice.
pub fn ring_contains(ring: &LinearRing, ps: &PointSet, p: Point) -> Containment {
    let mut inside = false;
    for (i, j) in ring.edges() {
        let (a, b) = (ps[i], ps[j]);
        if on_segment(a, b, p) {
            return Containment::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let hit = if b.y > a.y {
                orient2d(a, b, p) == Orientation::CounterClockwise
            } else {
                orient2d(a, b, p) == Orientation::Clockwise
            };
            if hit {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// Membership test for the polygon's closed point set: inside the shell and
/// not strictly inside any hole. Points on any ring count as inside.
pub fn point_in_polygon(p: Point, poly: &Polygon, ps: &PointSet) -> bool {
    match ring_contains(&poly.shell, ps, p) {
        Containment::Outside => return false,
        Containment::Boundary => return true,
        Containment::Inside => {}
    }
    for hole in &poly.holes {
        match ring_contains(hole, ps, p) {
            Containment::Inside => return false,
            Containment::Boundary => return true,
            Containment::Outside => {}
        }
    }
    true
}

fn multipolygon_contains(p: Point, mp: &MultiPolygon, ps: &PointSet) -> bool {
    mp.iter().any(|poly| point_in_polygon(p, poly, ps))
}

/// How two closed segments relate; shared endpoints are mere touches,
/// anything with a shared interior point is a cross.
#[derive(PartialEq, Eq, Clone, Copy)]
enum SegRel {
    Disjoint,
    Touch,
    Cross,
}

fn segment_relation(a: Point, b: Point, c: Point, d: Point) -> SegRel {
    use Orientation::Collinear;
    // Cheap reject: disjoint bounding boxes.
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return SegRel::Disjoint;
    }

    let o1 = orient2d(a, b, c);
    let o2 = orient2d(a, b, d);
    let o3 = orient2d(c, d, a);
    let o4 = orient2d(c, d, b);

    if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return if o1 != o2 && o3 != o4 {
            SegRel::Cross
        } else {
            SegRel::Disjoint
        };
    }

    if o1 == Collinear && o2 == Collinear {
        // Both segments on one line: overlap of positive length is a cross,
        // sharing a single endpoint is a touch.
        let (amin, amax, cmin, cmax) = if a.x == b.x && c.x == d.x {
            (a.y.min(b.y), a.y.max(b.y), c.y.min(d.y), c.y.max(d.y))
        } else {
            (a.x.min(b.x), a.x.max(b.x), c.x.min(d.x), c.x.max(d.x))
        };
        return if amax < cmin || cmax < amin {
            SegRel::Disjoint
        } else if amax == cmin || cmax == amin {
            SegRel::Touch
        } else {
            SegRel::Cross
        };
    }

    // Exactly one endpoint is collinear with the other segment; if it lies
    // on it, the segments touch at a point (possibly mid-edge), otherwise a
    // straddle test decides.
    let touching = (o1 == Collinear && on_segment(a, b, c))
        || (o2 == Collinear && on_segment(a, b, d))
        || (o3 == Collinear && on_segment(c, d, a))
        || (o4 == Collinear && on_segment(c, d, b));
    if touching {
        SegRel::Touch
    } else {
        SegRel::Disjoint
    }
}

/// A ring crosses itself when two non-adjacent edges share any point, or
/// when adjacent edges fold back onto each other.
fn ring_self_intersects(ring: &LinearRing, ps: &PointSet) -> bool {
    let idx = ring.indices();
    let s = idx.len();
    let edge = |k: usize| (ps[idx[k]], ps[idx[(k + 1) % s]]);

    for i in 0..s {
        let (a, b) = edge(i);
        for j in (i + 1)..s {
            let adjacent = j == i + 1 || (i == 0 && j == s - 1);
            if adjacent {
                // A shared vertex is fine; folding back along the same line
                // is not: the neighbors must not lie on the same ray from
                // the shared vertex.
                let (p_prev, p_v, p_next) = if j == i + 1 {
                    (a, b, edge(j).1)
                } else {
                    (edge(j).0, a, b)
                };
                if orient2d(p_prev, p_v, p_next) == Orientation::Collinear {
                    let back = (p_prev.x - p_v.x) * (p_next.x - p_v.x)
                        + (p_prev.y - p_v.y) * (p_next.y - p_v.y);
                    if back > 0.0 {
                        return true;
                    }
                }
            } else {
                let (c, d) = edge(j);
                if segment_relation(a, b, c, d) != SegRel::Disjoint {
                    return true;
                }
            }
        }
    }
    false
}

/// True when some edge of `r1` properly crosses or collinearly overlaps an
/// edge of `r2`. Touching at isolated points is allowed (regions pinched at
/// a vertex produce exactly that).
fn rings_cross(r1: &LinearRing, r2: &LinearRing, ps: &PointSet) -> bool {
    for (i, j) in r1.edges() {
        for (k, l) in r2.edges() {
            if segment_relation(ps[i], ps[j], ps[k], ps[l]) == SegRel::Cross {
                return true;
            }
        }
    }
    false
}

fn ring_structure_violations(ring: &LinearRing, ps: &PointSet, id: RingId, out: &mut Vec<RingViolation>) -> bool {
    let idx = ring.indices();
    if idx.len() < 3 {
        out.push(RingViolation { ring: id, kind: ViolationKind::TooShort });
        return false;
    }
    let mut sound = true;
    for k in 0..idx.len() {
        let (i, j) = (idx[k], idx[(k + 1) % idx.len()]);
        if i == j || ps[i] == ps[j] {
            out.push(RingViolation { ring: id, kind: ViolationKind::DegenerateEdge });
            sound = false;
            break;
        }
    }
    if sound && ring_self_intersects(ring, ps) {
        out.push(RingViolation { ring: id, kind: ViolationKind::SelfIntersection });
        sound = false;
    }
    sound
}

/// OGC-style polygon audit.
///
/// Checks, in order: every ring has at least 3 vertices and no zero-length
/// edge; rings are simple (no self-crossing, no repeated vertex, no
/// fold-back spike); the shell is counter-clockwise and every hole
/// clockwise; every hole lies inside the shell (vertices inside or on it,
/// edges never crossing it); no hole nested in another. Rings touching at
/// isolated vertices are accepted, matching what pinched regions produce.
pub fn validate_polygon(poly: &Polygon, ps: &PointSet) -> ValidityReport {
    let mut violations = Vec::new();

    let shell_sound = ring_structure_violations(&poly.shell, ps, RingId::Shell, &mut violations);
    if shell_sound && signed_area(&poly.shell, ps) <= 0.0 {
        violations.push(RingViolation { ring: RingId::Shell, kind: ViolationKind::BadWinding });
    }

    let mut hole_sound = vec![false; poly.holes.len()];
    for (h, hole) in poly.holes.iter().enumerate() {
        let id = RingId::Hole(h);
        hole_sound[h] = ring_structure_violations(hole, ps, id, &mut violations);
        if !hole_sound[h] {
            continue;
        }
        if signed_area(hole, ps) >= 0.0 {
            violations.push(RingViolation { ring: id, kind: ViolationKind::BadWinding });
        }
        if shell_sound {
            let escapes = hole
                .indices()
                .iter()
                .any(|&pi| ring_contains(&poly.shell, ps, ps[pi]) == Containment::Outside)
                || rings_cross(hole, &poly.shell, ps);
            if escapes {
                violations.push(RingViolation { ring: id, kind: ViolationKind::HoleOutsideShell });
            }
        }
    }

    for h in 0..poly.holes.len() {
        if !hole_sound[h] {
            continue;
        }
        for (g, &g_sound) in hole_sound.iter().enumerate() {
            if g == h || !g_sound {
                continue;
            }
            // h nested in g: fully inside with no edge crossing. At least
            // one strictly interior vertex distinguishes nesting from a
            // legal shared-vertex touch.
            let (hole, other) = (&poly.holes[h], &poly.holes[g]);
            if rings_cross(hole, other, ps) {
                if h < g {
                    violations.push(RingViolation {
                        ring: RingId::Hole(h),
                        kind: ViolationKind::HoleInHole,
                    });
                }
                continue;
            }
            let mut strictly_inside = false;
            let mut outside = false;
            for &pi in hole.indices() {
                match ring_contains(other, ps, ps[pi]) {
                    Containment::Inside => strictly_inside = true,
                    Containment::Outside => outside = true,
                    Containment::Boundary => {}
                }
            }
            if strictly_inside && !outside {
                violations.push(RingViolation {
                    ring: RingId::Hole(h),
                    kind: ViolationKind::HoleInHole,
                });
            }
        }
    }

    violations.sort();
    violations.dedup();
    ValidityReport { violations }
}

/// Convenience: audit every polygon of a multipolygon; reports are in
/// polygon order.
pub fn validate_multipolygon(mp: &MultiPolygon, ps: &PointSet) -> Vec<ValidityReport> {
    mp.iter().map(|poly| validate_polygon(poly, ps)).collect()
}

/// Ratio of the shell's area to the area of its convex hull, in (0, 1];
/// 1 means the shell is convex. Holes are ignored by choice: the metric
/// grades the outline itself.
pub fn convexity(poly: &Polygon, ps: &PointSet) -> Result<f64, MetricsError> {
    let shell_pts: Vec<Point> = poly.shell.indices().iter().map(|&pi| ps[pi]).collect();
    let shell_ps = PointSet::new(shell_pts).map_err(|_| MetricsError::DegenerateShell)?;
    let hull = convex_hull(&shell_ps).map_err(|_| MetricsError::DegenerateShell)?;
    let hull_area = signed_area(&hull, &shell_ps);
    if hull_area <= 0.0 {
        return Err(MetricsError::DegenerateShell);
    }
    Ok(signed_area(&poly.shell, ps) / hull_area)
}

/// Monte-Carlo estimate of the relative symmetric-difference area.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEstimate {
    /// area(ground_truth XOR candidate) / area(candidate), estimated.
    pub l2_error: f64,
    pub samples_used: usize,
    pub seed: u64,
}

fn rings_bounds<'a>(
    rings: impl Iterator<Item = (&'a LinearRing, &'a PointSet)>,
) -> Option<Bounds> {
    let mut bounds: Option<Bounds> = None;
    for (ring, ps) in rings {
        for &pi in ring.indices() {
            let p = ps[pi];
            bounds = Some(match bounds {
                None => Bounds { min: p, max: p },
                Some(b) => Bounds {
                    min: Point::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                    max: Point::new(b.max.x.max(p.x), b.max.y.max(p.y)),
                },
            });
        }
    }
    bounds
}

/// Estimates area(gt XOR cs) / area(cs) by uniform sampling over the joint
/// bounding box of both geometries. The box area cancels out, so the result
/// is simply (samples in exactly one) / (samples in cs). Deterministic for
/// a given seed.
///
/// Errors when no sample lands in `cs`: the ratio is then undefined at this
/// sample budget.
pub fn l2_error(
    gt: &MultiPolygon,
    cs: &MultiPolygon,
    ps_gt: &PointSet,
    ps_cs: &PointSet,
    n_samples: usize,
    seed: u64,
) -> Result<ErrorEstimate, MetricsError> {
    assert!(n_samples >= 1, "need at least one sample");
    let shells_gt = gt.iter().map(|p| (&p.shell, ps_gt));
    let shells_cs = cs.iter().map(|p| (&p.shell, ps_cs));
    let bounds = rings_bounds(shells_gt.chain(shells_cs))
        .ok_or(MetricsError::ZeroCandidateArea)?;
    if !(bounds.width() > 0.0 && bounds.height() > 0.0) {
        return Err(MetricsError::ZeroCandidateArea);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xor_count = 0usize;
    let mut cs_count = 0usize;
    for _ in 0..n_samples {
        let p = Point::new(
            rng.random_range(bounds.min.x..bounds.max.x),
            rng.random_range(bounds.min.y..bounds.max.y),
        );
        let in_gt = multipolygon_contains(p, gt, ps_gt);
        let in_cs = multipolygon_contains(p, cs, ps_cs);
        if in_cs {
            cs_count += 1;
        }
        if in_gt != in_cs {
            xor_count += 1;
        }
    }

    if cs_count == 0 {
        return Err(MetricsError::ZeroCandidateArea);
    }
    Ok(ErrorEstimate {
        l2_error: xor_count as f64 / cs_count as f64,
        samples_used: n_samples,
        seed,
    })
}

/// Density heuristic for the alpha threshold: with p_d = n / bbox_area,
/// returns 2 / p_d.
///
/// Taken verbatim from practice; note the unit anomaly: the value scales
/// with the square of the coordinate scale although it is compared against
/// a length, so it only lands in a useful range when the point density is
/// around one point per unit area. Treat it as a starting value to
/// calibrate, not an optimum.
pub fn suggest_alpha(ps: &PointSet) -> Result<f64, MetricsError> {
    if ps.len() < 3 {
        return Err(MetricsError::TooFewPoints(ps.len()));
    }
    let bounds = ps.bounds().expect("nonempty");
    if bounds.area() <= 0.0 {
        return Err(MetricsError::ZeroBoundingBox);
    }
    Ok(2.0 * bounds.area() / ps.len() as f64)
}
