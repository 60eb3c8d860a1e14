//! Plane primitives shared by the whole pipeline: validated point storage,
//! index-based rings and polygons, and exact geometric predicates.
//!
//! Every ring and polygon refers to points by index (a "PI") into a
//! [`PointSet`]; geometry is never copied out of the set. The two predicates
//! that decide anything ([`orient2d`], [`incircle`]) are evaluated with
//! adaptive-precision arithmetic, so their signs are exact for all finite
//! inputs.

use std::collections::HashMap;

use thiserror::Error;

/// A point in the plane. Coordinates are finite once inside a [`PointSet`].
///
/// Also doubles as a plain 2D vector where a direction is needed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

fn coord(p: Point) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

pub(crate) fn dist_sq(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Sign of the orientation determinant of an ordered point triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

/// Exact orientation of (a, b, c): `CounterClockwise` when c lies to the left
/// of the directed line a -> b (positive determinant, y axis up).
pub fn orient2d(a: Point, b: Point, c: Point) -> Orientation {
    let det = robust::orient2d(coord(a), coord(b), coord(c));
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// Position of a query point relative to the circle through three others.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirclePosition {
    Inside,
    On,
    Outside,
}

/// Exact in-circle test: position of d relative to the circumcircle of
/// (a, b, c). The triple must be counter-clockwise; a clockwise triple flips
/// Inside and Outside.
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> CirclePosition {
    let det = robust::incircle(coord(a), coord(b), coord(c), coord(d));
    if det > 0.0 {
        CirclePosition::Inside
    } else if det < 0.0 {
        CirclePosition::Outside
    } else {
        CirclePosition::On
    }
}

/// Circumcenter of triangle (a, b, c), or `None` for an exactly collinear
/// triple. Center coordinates are ordinary floating point (not exact); only
/// the collinearity decision is.
pub fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    if orient2d(a, b, c) == Orientation::Collinear {
        return None;
    }
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let ex = c.x - a.x;
    let ey = c.y - a.y;
    let bl = dx * dx + dy * dy;
    let cl = ex * ex + ey * ey;
    let d = 0.5 / (dx * ey - dy * ex);
    Some(Point::new(
        a.x + (ey * bl - dy * cl) * d,
        a.y + (dx * cl - ex * bl) * d,
    ))
}

/// Squared circumradius of triangle (a, b, c). Exactly collinear triples get
/// `+inf`, so they can never pass a radius threshold.
pub fn circumradius_sq(a: Point, b: Point, c: Point) -> f64 {
    match circumcenter(a, b, c) {
        Some(center) => dist_sq(center, a),
        None => f64::INFINITY,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("zero-length direction vector")]
    ZeroVector,
    #[error("convex hull is degenerate (fewer than 3 points or all collinear)")]
    DegenerateHull,
}

/// Counter-clockwise angle in [0, 2*pi) that rotates `v_ref` onto `v_cand`.
/// Both arguments are direction vectors; a zero vector is an error.
pub fn ccw_angle(v_ref: Point, v_cand: Point) -> Result<f64, GeomError> {
    if (v_ref.x == 0.0 && v_ref.y == 0.0) || (v_cand.x == 0.0 && v_cand.y == 0.0) {
        return Err(GeomError::ZeroVector);
    }
    let cross = v_ref.x * v_cand.y - v_ref.y * v_cand.x;
    let dot = v_ref.x * v_cand.x + v_ref.y * v_cand.y;
    let angle = cross.atan2(dot);
    Ok(if angle < 0.0 {
        angle + 2.0 * std::f64::consts::PI
    } else {
        angle
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointSetError {
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("point {index} duplicates point {first}")]
    Duplicate { index: usize, first: usize },
}

/// Validated, immutable point storage.
///
/// Construction rejects NaN and infinite coordinates as well as exact
/// coordinate duplicates (-0.0 and +0.0 count as the same coordinate), which
/// keeps downstream index arithmetic free of degenerate zero-length edges.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, PointSetError> {
        let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(PointSetError::NonFinite { index });
            }
            // +0.0 folds -0.0 into +0.0 before keying on the bit pattern.
            let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
            if let Some(&first) = seen.get(&key) {
                return Err(PointSetError::Duplicate { index, first });
            }
            seen.insert(key, index);
        }
        Ok(PointSet { points })
    }

    pub fn from_coords<I>(coords: I) -> Result<Self, PointSetError>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::new(coords.into_iter().map(Point::from).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, pi: usize) -> Option<Point> {
        self.points.get(pi).copied()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.points.iter().copied()
    }

    /// Axis-aligned bounding box, or `None` for an empty set.
    pub fn bounds(&self) -> Option<Bounds> {
        let first = *self.points.first()?;
        let mut b = Bounds { min: first, max: first };
        for p in &self.points[1..] {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;

    fn index(&self, pi: usize) -> &Point {
        &self.points[pi]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Point,
    pub max: Point,
}

impl Bounds {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("ring repeats a vertex across the edge starting at position {0}")]
    DegenerateEdge(usize),
}

/// A closed ring of vertices stored as point indices. The closing edge from
/// the last vertex back to the first is implicit; the first index is not
/// repeated at the end.
///
/// Construction checks only local shape (length, no zero-length edges).
/// Simplicity is a property of how rings are produced and is checked by the
/// validity audit, not here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRing {
    indices: Vec<usize>,
}

impl LinearRing {
    pub fn new(indices: Vec<usize>) -> Result<Self, RingError> {
        if indices.len() < 3 {
            return Err(RingError::TooShort(indices.len()));
        }
        for i in 0..indices.len() {
            if indices[i] == indices[(i + 1) % indices.len()] {
                return Err(RingError::DegenerateEdge(i));
            }
        }
        Ok(LinearRing { indices })
    }

    /// Skips validation. For ingesting external geometry that the validity
    /// audit will inspect afterwards.
    pub fn new_unchecked(indices: Vec<usize>) -> Self {
        LinearRing { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Consecutive vertex index pairs, closing pair included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.indices.len();
        (0..n).map(move |i| (self.indices[i], self.indices[(i + 1) % n]))
    }
}

/// Signed area of a ring: positive for counter-clockwise winding, negative
/// for clockwise. Shoelace sum anchored at the first vertex for stability far
/// from the origin.
pub fn signed_area(ring: &LinearRing, ps: &PointSet) -> f64 {
    let idx = ring.indices();
    if idx.len() < 3 {
        return 0.0;
    }
    let origin = ps[idx[0]];
    let mut sum = 0.0;
    for i in 1..idx.len() - 1 {
        let p = ps[idx[i]];
        let q = ps[idx[i + 1]];
        sum += (p.x - origin.x) * (q.y - origin.y) - (p.y - origin.y) * (q.x - origin.x);
    }
    0.5 * sum
}

/// One shell ring plus zero or more hole rings.
///
/// Pipeline output satisfies the OGC-style winding convention: the shell has
/// positive signed area (counter-clockwise), holes negative (clockwise).
/// Fields are public so that external geometry, valid or not, can be
/// represented and then audited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub shell: LinearRing,
    pub holes: Vec<LinearRing>,
}

impl Polygon {
    pub fn new(shell: LinearRing, holes: Vec<LinearRing>) -> Self {
        Polygon { shell, holes }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPolygon {
    pub polygons: Vec<Polygon>,
}

impl MultiPolygon {
    pub fn new(polygons: Vec<Polygon>) -> Self {
        MultiPolygon { polygons }
    }

    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polygon> {
        self.polygons.iter()
    }
}

/// Convex hull of the set as a counter-clockwise ring of point indices,
/// starting at the lexicographically smallest point. Collinear boundary
/// points are excluded, so every hull vertex is a strict corner.
///
/// Errors with [`GeomError::DegenerateHull`] when fewer than 3 points are
/// given or all points are collinear.
pub fn convex_hull(ps: &PointSet) -> Result<LinearRing, GeomError> {
    let n = ps.len();
    if n < 3 {
        return Err(GeomError::DegenerateHull);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| {
        ps[i]
            .x
            .total_cmp(&ps[j].x)
            .then_with(|| ps[i].y.total_cmp(&ps[j].y))
    });

    // Andrew's monotone chain, strict left turns only.
    let mut hull: Vec<usize> = Vec::with_capacity(n + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &pi in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if orient2d(ps[a], ps[b], ps[pi]) == Orientation::CounterClockwise {
                    break;
                }
                hull.pop();
            }
            hull.push(pi);
        }
        hull.pop(); // endpoint repeats as the start of the other chain
    }
    if hull.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }
    Ok(LinearRing::new(hull).expect("hull vertices are distinct"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use num::Signed;
    use proptest::prelude::*;
    use rand::rngs::SmallRng;
    use rand::{RngExt, SeedableRng};

    fn rational(x: f64) -> BigRational {
        BigRational::from_float(x).expect("finite")
    }

    /// Sign of the orientation determinant in exact rational arithmetic.
    fn orient2d_oracle(a: Point, b: Point, c: Point) -> Orientation {
        let det = (rational(b.x) - rational(a.x)) * (rational(c.y) - rational(a.y))
            - (rational(b.y) - rational(a.y)) * (rational(c.x) - rational(a.x));
        if det.is_positive() {
            Orientation::CounterClockwise
        } else if det.is_negative() {
            Orientation::Clockwise
        } else {
            Orientation::Collinear
        }
    }

    /// Sign of the 3x3 in-circle determinant in exact rational arithmetic.
    fn incircle_oracle(a: Point, b: Point, c: Point, d: Point) -> CirclePosition {
        let row = |p: Point| {
            let x = rational(p.x) - rational(d.x);
            let y = rational(p.y) - rational(d.y);
            let m = x.clone() * x.clone() + y.clone() * y.clone();
            [x, y, m]
        };
        let m = [row(a), row(b), row(c)];
        let det = m[0][0].clone()
            * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone()
                * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone()
                * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone());
        if det.is_positive() {
            CirclePosition::Inside
        } else if det.is_negative() {
            CirclePosition::Outside
        } else {
            CirclePosition::On
        }
    }

    fn nudge(x: f64, ulps: i64) -> f64 {
        let mut v = x;
        for _ in 0..ulps.abs() {
            v = if ulps > 0 {
                f64::from_bits(v.to_bits() + 1)
            } else {
                f64::from_bits(v.to_bits() - 1)
            };
        }
        v
    }

    #[test]
    fn orient2d_basic_signs() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert_eq!(orient2d(a, b, Point::new(0.0, 1.0)), Orientation::CounterClockwise);
        assert_eq!(orient2d(a, b, Point::new(0.0, -1.0)), Orientation::Clockwise);
        assert_eq!(orient2d(a, b, Point::new(2.0, 0.0)), Orientation::Collinear);
    }

    #[test]
    fn orient2d_matches_rational_oracle_near_degeneracy() {
        let mut rng = SmallRng::seed_from_u64(17);
        for _ in 0..4000 {
            let a = Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let b = Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            // c sits (nearly) on the segment a-b, off by a few ulps at most.
            let t: f64 = rng.random_range(0.0..1.0);
            let mut c = Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            c.x = nudge(c.x, rng.random_range(-3..=3));
            c.y = nudge(c.y, rng.random_range(-3..=3));
            assert_eq!(orient2d(a, b, c), orient2d_oracle(a, b, c), "a={a:?} b={b:?} c={c:?}");
        }
    }

    #[test]
    fn incircle_basic_positions() {
        let a = Point::new(1.0, 0.0);
        let b = Point::new(0.0, 1.0);
        let c = Point::new(-1.0, 0.0);
        assert_eq!(incircle(a, b, c, Point::new(0.0, 0.0)), CirclePosition::Inside);
        assert_eq!(incircle(a, b, c, Point::new(0.0, -1.0)), CirclePosition::On);
        assert_eq!(incircle(a, b, c, Point::new(2.0, 0.0)), CirclePosition::Outside);
    }

    #[test]
    fn incircle_matches_rational_oracle_near_cocircularity() {
        let mut rng = SmallRng::seed_from_u64(23);
        for _ in 0..3000 {
            let cx: f64 = rng.random_range(-2.0..2.0);
            let cy: f64 = rng.random_range(-2.0..2.0);
            let r: f64 = rng.random_range(0.1..3.0);
            let mut angs: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
            angs.sort_by(f64::total_cmp);
            // First three counter-clockwise on the circle, query nearly on it.
            let pt = |t: f64| Point::new(cx + r * t.cos(), cy + r * t.sin());
            let (a, b, c) = (pt(angs[0]), pt(angs[1]), pt(angs[2]));
            let mut d = pt(angs[3]);
            d.x = nudge(d.x, rng.random_range(-2..=2));
            d.y = nudge(d.y, rng.random_range(-2..=2));
            if orient2d(a, b, c) != Orientation::CounterClockwise {
                continue;
            }
            assert_eq!(incircle(a, b, c, d), incircle_oracle(a, b, c, d));
        }
    }

    #[test]
    fn incircle_exact_on_integer_cocircularity() {
        // Four integer points exactly on one circle: the determinant is zero.
        let a = Point::new(0.0, 0.0);
        let b = Point::new(4.0, 0.0);
        let c = Point::new(4.0, 4.0);
        let d = Point::new(0.0, 4.0);
        assert_eq!(incircle(a, b, c, d), CirclePosition::On);
        assert_eq!(incircle_oracle(a, b, c, d), CirclePosition::On);
    }

    #[test]
    fn circumcenter_equidistant_and_radius() {
        let mut rng = SmallRng::seed_from_u64(5);
        for _ in 0..500 {
            let a = Point::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let b = Point::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let c = Point::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let Some(center) = circumcenter(a, b, c) else {
                continue;
            };
            let r2 = circumradius_sq(a, b, c);
            for v in [a, b, c] {
                let d2 = dist_sq(center, v);
                assert!((d2 - r2).abs() <= 1e-9 * r2.max(1.0), "r2={r2} d2={d2}");
            }
        }
    }

    #[test]
    fn circumradius_345_triangle() {
        // Right triangle: circumradius is half the hypotenuse.
        let r2 = circumradius_sq(Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(3.0, 4.0));
        assert!((r2 - 6.25).abs() < 1e-12);
    }

    #[test]
    fn circumradius_collinear_is_infinite() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 1.0);
        let c = Point::new(2.0, 2.0);
        assert_eq!(circumcenter(a, b, c), None);
        assert!(circumradius_sq(a, b, c).is_infinite());
    }

    #[test]
    fn signed_area_unit_square() {
        let ps = PointSet::from_coords([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let ccw = LinearRing::new(vec![0, 1, 2, 3]).unwrap();
        let cw = LinearRing::new(vec![3, 2, 1, 0]).unwrap();
        assert_eq!(signed_area(&ccw, &ps), 1.0);
        assert_eq!(signed_area(&cw, &ps), -1.0);
    }

    #[test]
    fn ccw_angle_frozen_values() {
        let e = Point::new(1.0, 0.0);
        assert_eq!(ccw_angle(e, Point::new(0.0, 1.0)).unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(ccw_angle(e, e).unwrap(), 0.0);
        assert_eq!(
            ccw_angle(e, Point::new(0.0, -1.0)).unwrap(),
            3.0 * std::f64::consts::FRAC_PI_2
        );
        assert_eq!(ccw_angle(e, Point::new(0.0, 0.0)), Err(GeomError::ZeroVector));
    }

    #[test]
    fn point_set_rejects_duplicates_and_non_finite() {
        let err = PointSet::from_coords([(0.0, 0.0), (1.0, 2.0), (0.0, -0.0)]).unwrap_err();
        assert_eq!(err, PointSetError::Duplicate { index: 2, first: 0 });
        let err = PointSet::from_coords([(0.0, 0.0), (f64::NAN, 1.0)]).unwrap_err();
        assert_eq!(err, PointSetError::NonFinite { index: 1 });
        let ps = PointSet::from_coords([(3.0, 4.0), (-1.0, 2.0)]).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[1], Point::new(-1.0, 2.0));
        let b = ps.bounds().unwrap();
        assert_eq!((b.min.x, b.min.y, b.max.x, b.max.y), (-1.0, 2.0, 3.0, 4.0));
        assert_eq!(b.area(), 8.0);
    }

    #[test]
    fn linear_ring_validation() {
        assert_eq!(LinearRing::new(vec![0, 1]).unwrap_err(), RingError::TooShort(2));
        assert_eq!(LinearRing::new(vec![0, 1, 1]).unwrap_err(), RingError::DegenerateEdge(1));
        assert_eq!(LinearRing::new(vec![0, 1, 2, 0]).unwrap_err(), RingError::DegenerateEdge(3));
        let ring = LinearRing::new(vec![0, 1, 2]).unwrap();
        let edges: Vec<_> = ring.edges().collect();
        assert_eq!(edges, vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn convex_hull_square_with_interior_points() {
        let ps = PointSet::from_coords([
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 2.0),
            (0.0, 2.0),
            (1.0, 1.0),
            (0.5, 1.2),
        ])
        .unwrap();
        let hull = convex_hull(&ps).unwrap();
        assert_eq!(hull.indices(), &[0, 1, 2, 3]);
        assert!(signed_area(&hull, &ps) > 0.0);
    }

    #[test]
    fn convex_hull_excludes_collinear_boundary_points() {
        let ps = PointSet::from_coords([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0)]).unwrap();
        let hull = convex_hull(&ps).unwrap();
        assert_eq!(hull.indices(), &[0, 2, 3]);
    }

    #[test]
    fn convex_hull_degenerate_inputs() {
        let two = PointSet::from_coords([(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert_eq!(convex_hull(&two), Err(GeomError::DegenerateHull));
        let line = PointSet::from_coords([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        assert_eq!(convex_hull(&line), Err(GeomError::DegenerateHull));
    }

    #[test]
    fn convex_hull_matches_brute_force_edge_set() {
        let mut rng = SmallRng::seed_from_u64(99);
        for _ in 0..60 {
            let n = rng.random_range(5..40);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let ps = PointSet::from_coords(pts).unwrap();
            let hull = convex_hull(&ps).unwrap();

            // Brute force: a directed pair (i, j) is a hull edge when every
            // other point lies strictly to its left (random data, so no
            // collinear triples in practice).
            let mut oracle = std::collections::HashSet::new();
            for i in 0..ps.len() {
                for j in 0..ps.len() {
                    if i == j {
                        continue;
                    }
                    let all_left = (0..ps.len()).filter(|&k| k != i && k != j).all(|k| {
                        orient2d(ps[i], ps[j], ps[k]) == Orientation::CounterClockwise
                    });
                    if all_left {
                        oracle.insert((i, j));
                    }
                }
            }
            let got: std::collections::HashSet<_> = hull.edges().collect();
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn convex_hull_contains_disk_sample() {
        let mut rng = SmallRng::seed_from_u64(3);
        let mut pts = Vec::new();
        while pts.len() < 1000 {
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random_range(-1.0..1.0);
            if x * x + y * y <= 1.0 {
                pts.push((x, y));
            }
        }
        let ps = PointSet::from_coords(pts).unwrap();
        let hull = convex_hull(&ps).unwrap();
        for (a, b) in hull.edges() {
            for k in 0..ps.len() {
                assert_ne!(orient2d(ps[a], ps[b], ps[k]), Orientation::Clockwise);
            }
        }
        let area = signed_area(&hull, &ps);
        assert!(area > 0.0 && area <= std::f64::consts::PI);
    }

    proptest! {
        #[test]
        fn orient2d_antisymmetric(ax in -1e3f64..1e3, ay in -1e3f64..1e3,
                                  bx in -1e3f64..1e3, by in -1e3f64..1e3,
                                  cx in -1e3f64..1e3, cy in -1e3f64..1e3) {
            let (a, b, c) = (Point::new(ax, ay), Point::new(bx, by), Point::new(cx, cy));
            let flipped = match orient2d(a, b, c) {
                Orientation::CounterClockwise => Orientation::Clockwise,
                Orientation::Clockwise => Orientation::CounterClockwise,
                Orientation::Collinear => Orientation::Collinear,
            };
            prop_assert_eq!(orient2d(b, a, c), flipped);
            // Cyclic rotation preserves the sign.
            prop_assert_eq!(orient2d(b, c, a), orient2d(a, b, c));
        }

        #[test]
        fn incircle_swap_flips(ax in -1e2f64..1e2, ay in -1e2f64..1e2,
                               bx in -1e2f64..1e2, by in -1e2f64..1e2,
                               cx in -1e2f64..1e2, cy in -1e2f64..1e2,
                               dx in -1e2f64..1e2, dy in -1e2f64..1e2) {
            let (a, b) = (Point::new(ax, ay), Point::new(bx, by));
            let (c, d) = (Point::new(cx, cy), Point::new(dx, dy));
            let flipped = match incircle(a, b, c, d) {
                CirclePosition::Inside => CirclePosition::Outside,
                CirclePosition::Outside => CirclePosition::Inside,
                CirclePosition::On => CirclePosition::On,
            };
            prop_assert_eq!(incircle(b, a, c, d), flipped);
        }

        #[test]
        fn signed_area_reverses_sign(coords in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 3..20)) {
            let Ok(ps) = PointSet::from_coords(coords) else {
                return Ok(()); // duplicate draw, skip
            };
            let fwd = LinearRing::new_unchecked((0..ps.len()).collect());
            let rev = LinearRing::new_unchecked((0..ps.len()).rev().collect());
            let af = signed_area(&fwd, &ps);
            let ar = signed_area(&rev, &ps);
            prop_assert!((af + ar).abs() <= 1e-9 * af.abs().max(1.0));
        }

        #[test]
        fn ccw_angle_in_range(rx in -10.0f64..10.0, ry in -10.0f64..10.0,
                              cx in -10.0f64..10.0, cy in -10.0f64..10.0) {
            prop_assume!((rx != 0.0 || ry != 0.0) && (cx != 0.0 || cy != 0.0));
            let a = ccw_angle(Point::new(rx, ry), Point::new(cx, cy)).unwrap();
            prop_assert!((0.0..2.0 * std::f64::consts::PI).contains(&a));
        }
    }
}
