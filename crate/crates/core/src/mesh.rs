//! Delaunay triangulation as flat half-edge arrays.
//!
//! The mesh is three parallel arrays. Half-edge `he` belongs to triangle
//! `triangle_of(he) = he / 3`; its two companions inside the triangle are
//! `next_halfedge(he)` and `prev_halfedge(he)`.
//!
//! * `triangles[he]` is the point index (PI) the half-edge starts from.
//! * `halfedges[he]` is the opposite half-edge in the adjacent triangle, or
//!   [`NONE`] when the edge lies on the convex hull.
//!
//! Every triangle is wound counter-clockwise (positive orientation
//! determinant, y axis up), which downstream stages rely on: a half-edge
//! always has its own triangle on the left.
//!
//! Construction is the sweep-hull method: points are inserted in order of
//! distance from the seed triangle's circumcenter, each insertion stitches
//! visible hull edges into new triangles, and edge flips restore the empty
//! circumcircle property. All orientation and in-circle decisions go through
//! the exact predicates in [`crate::geom`], so degenerate inputs (collinear
//! runs, cocircular grids) are decided by sign, never by tolerance. The
//! result is deterministic: insertion order ties are broken lexicographically
//! by (x, y).

use thiserror::Error;

use crate::geom::{
    circumcenter, circumradius_sq, dist_sq, incircle, orient2d, CirclePosition, Orientation,
    Point, PointSet,
};

/// Sentinel for "no adjacent half-edge": the edge borders the area outside
/// the triangulation. Rendered as -1 in debug dumps.
pub const NONE: usize = usize::MAX;

/// Next half-edge within the same triangle.
pub fn next_halfedge(he: usize) -> usize {
    if he % 3 == 2 {
        he - 2
    } else {
        he + 1
    }
}

/// Previous half-edge within the same triangle.
pub fn prev_halfedge(he: usize) -> usize {
    if he.is_multiple_of(3) {
        he + 2
    } else {
        he - 1
    }
}

/// Triangle index owning a half-edge.
pub fn triangle_of(he: usize) -> usize {
    he / 3
}

/// The three half-edges of a triangle.
pub fn halfedges_of_triangle(t: usize) -> [usize; 3] {
    [3 * t, 3 * t + 1, 3 * t + 2]
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("triangulation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("input points are all collinear")]
    DegenerateInput,
}

/// Delaunay triangulation of a [`PointSet`], borrowed.
#[derive(Debug, Clone)]
pub struct HalfEdgeMesh<'p> {
    points: &'p PointSet,
    /// Point index each half-edge starts from; length `3 * num_triangles`.
    pub triangles: Vec<usize>,
    /// Opposite half-edge per half-edge, [`NONE`] on the hull.
    pub halfedges: Vec<usize>,
    /// Point indices on the convex hull, counter-clockwise.
    pub hull: Vec<usize>,
}

impl<'p> HalfEdgeMesh<'p> {
    pub fn point_set(&self) -> &'p PointSet {
        self.points
    }

    /// Number of triangles.
    pub fn num_triangles(&self) -> usize {
        self.triangles.len() / 3
    }

    /// Vertex indices of triangle `t`, counter-clockwise.
    pub fn triangle_vertices(&self, t: usize) -> [usize; 3] {
        [
            self.triangles[3 * t],
            self.triangles[3 * t + 1],
            self.triangles[3 * t + 2],
        ]
    }

    /// Point index a half-edge starts from.
    pub fn origin(&self, he: usize) -> usize {
        self.triangles[he]
    }

    /// Point index a half-edge points to.
    pub fn dest(&self, he: usize) -> usize {
        self.triangles[next_halfedge(he)]
    }

    /// One line per half-edge: `he, triangles[he], halfedges[he]`, with
    /// [`NONE`] printed as -1.
    pub fn debug_dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for he in 0..self.triangles.len() {
            let twin = self.halfedges[he];
            let twin = if twin == NONE { -1 } else { twin as i64 };
            writeln!(out, "{}, {}, {}", he, self.triangles[he], twin).unwrap();
        }
        out
    }

    fn with_capacity(points: &'p PointSet) -> Self {
        let n = points.len();
        let max_triangles = if n > 2 { 2 * n - 5 } else { 0 };
        HalfEdgeMesh {
            points,
            triangles: Vec::with_capacity(max_triangles * 3),
            halfedges: Vec::with_capacity(max_triangles * 3),
            hull: Vec::new(),
        }
    }

    fn add_triangle(
        &mut self,
        i0: usize,
        i1: usize,
        i2: usize,
        a: usize,
        b: usize,
        c: usize,
    ) -> usize {
        let t = self.triangles.len();
        self.triangles.push(i0);
        self.triangles.push(i1);
        self.triangles.push(i2);
        self.halfedges.push(a);
        self.halfedges.push(b);
        self.halfedges.push(c);
        if a != NONE {
            self.halfedges[a] = t;
        }
        if b != NONE {
            self.halfedges[b] = t + 1;
        }
        if c != NONE {
            self.halfedges[c] = t + 2;
        }
        t
    }

    /// Flip edges around `a` until the empty circumcircle condition holds.
    /// Iterative with an explicit stack; returns the half-edge that ends up
    /// where `prev_halfedge(a)` was, which the caller tracks as the hull
    /// triangle of the freshly inserted point.
    fn legalize(&mut self, mut a: usize, pts: &[Point], hull: &mut Hull) -> usize {
        let mut ar;
        loop {
            let b = self.halfedges[a];
            ar = prev_halfedge(a);

            let illegal = b != NONE && {
                let al = next_halfedge(a);
                let bl = prev_halfedge(b);
                let p0 = self.triangles[ar];
                let pr = self.triangles[a];
                let pl = self.triangles[al];
                let p1 = self.triangles[bl];
                // (p0, pr, pl) is this triangle counter-clockwise; the edge
                // is illegal exactly when the opposite point sits strictly
                // inside its circumcircle.
                incircle(pts[p0], pts[pr], pts[pl], pts[p1]) == CirclePosition::Inside
            };

            if !illegal {
                match hull.edge_stack.pop() {
                    Some(next) => a = next,
                    None => return ar,
                }
                continue;
            }

            let b = self.halfedges[a];
            let bl = prev_halfedge(b);
            let p1 = self.triangles[bl];
            let p0 = self.triangles[ar];

            self.triangles[a] = p1;
            self.triangles[b] = p0;

            let hbl = self.halfedges[bl];
            let har = self.halfedges[ar];

            // The flipped edge may have been a hull triangle reference; fix it.
            if hbl == NONE {
                let mut e = hull.start;
                loop {
                    if hull.tri[e] == bl {
                        hull.tri[e] = a;
                        break;
                    }
                    e = hull.prev[e];
                    if e == hull.start {
                        break;
                    }
                }
            }

            self.halfedges[a] = hbl;
            self.halfedges[b] = har;
            self.halfedges[ar] = bl;
            if hbl != NONE {
                self.halfedges[hbl] = a;
            }
            if har != NONE {
                self.halfedges[har] = b;
            }
            if bl != NONE {
                self.halfedges[bl] = ar;
            }

            hull.edge_stack.push(next_halfedge(b));
        }
    }
}

/// Advancing convex hull of the incremental construction, kept as a doubly
/// linked list over point indices plus an angular hash for fast lookup of a
/// hull vertex near a given direction from the sort center.
struct Hull {
    prev: Vec<usize>,
    next: Vec<usize>,
    /// Hull half-edge (pointing away from the key vertex) per hull vertex.
    tri: Vec<usize>,
    hash: Vec<usize>,
    start: usize,
    center: Point,
    edge_stack: Vec<usize>,
}

impl Hull {
    fn new(n: usize, center: Point, i0: usize, i1: usize, i2: usize, pts: &[Point]) -> Self {
        let hash_len = (n as f64).sqrt() as usize;
        let mut hull = Hull {
            prev: vec![0; n],
            next: vec![0; n],
            tri: vec![0; n],
            hash: vec![NONE; hash_len],
            start: i0,
            center,
            edge_stack: Vec::new(),
        };

        hull.next[i0] = i1;
        hull.prev[i2] = i1;
        hull.next[i1] = i2;
        hull.prev[i0] = i2;
        hull.next[i2] = i0;
        hull.prev[i1] = i0;

        hull.tri[i0] = 0;
        hull.tri[i1] = 1;
        hull.tri[i2] = 2;

        hull.hash_edge(pts[i0], i0);
        hull.hash_edge(pts[i1], i1);
        hull.hash_edge(pts[i2], i2);

        hull
    }

    fn hash_key(&self, p: Point) -> usize {
        let dx = p.x - self.center.x;
        // Negated so that bucket order follows the counter-clockwise hull
        // chain; the pseudo-angle itself only needs to be monotone.
        let dy = -(p.y - self.center.y);
        let f = dx / (dx.abs() + dy.abs());
        let a = (if dy > 0.0 { 3.0 - f } else { 1.0 + f }) / 4.0;
        let len = self.hash.len();
        (((len as f64) * a).floor() as usize) % len
    }

    fn hash_edge(&mut self, p: Point, i: usize) {
        let key = self.hash_key(p);
        self.hash[key] = i;
    }

    /// Finds a hull edge `e -> next[e]` that `p` lies strictly to the right
    /// of. The bool reports whether the search wrapped to the chain start,
    /// in which case the caller also walks backward.
    fn find_visible_edge(&self, p: Point, pts: &[Point]) -> (usize, bool) {
        let mut start: usize = 0;
        let key = self.hash_key(p);
        let len = self.hash.len();
        for j in 0..len {
            start = self.hash[(key + j) % len];
            if start != NONE && self.next[start] != NONE {
                break;
            }
        }
        start = self.prev[start];
        let mut e = start;

        while orient2d(p, pts[e], pts[self.next[e]]) != Orientation::Clockwise {
            e = self.next[e];
            if e == start {
                return (NONE, false);
            }
        }
        (e, e == start)
    }
}

fn bbox_center(pts: &[Point]) -> Point {
    let mut min = pts[0];
    let mut max = pts[0];
    for p in &pts[1..] {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    Point::new((min.x + max.x) / 2.0, (min.y + max.y) / 2.0)
}

/// Closest point to `p0` by squared distance, zero distances excluded; ties
/// broken lexicographically by (x, y).
fn find_closest_point(pts: &[Point], p0: Point) -> Option<usize> {
    let mut min_dist = f64::INFINITY;
    let mut k = NONE;
    for (i, &p) in pts.iter().enumerate() {
        let d = dist_sq(p0, p);
        if d == 0.0 || d > min_dist {
            continue;
        }
        if k == NONE || d < min_dist || lex_less(p, pts[k]) {
            k = i;
            min_dist = d;
        }
    }
    (k != NONE).then_some(k)
}

fn lex_less(a: Point, b: Point) -> bool {
    (a.x, a.y) < (b.x, b.y)
}

/// Seed triangle: a point near the bbox center, its nearest neighbor, and
/// the third point minimizing the circumradius, ordered counter-clockwise.
/// `None` when every candidate triple is collinear.
fn find_seed_triangle(pts: &[Point]) -> Option<(usize, usize, usize)> {
    let i0 = find_closest_point(pts, bbox_center(pts))?;
    let p0 = pts[i0];
    let i1 = find_closest_point(pts, p0)?;
    let p1 = pts[i1];

    let mut min_radius = f64::INFINITY;
    let mut i2 = NONE;
    for (i, &p) in pts.iter().enumerate() {
        if i == i0 || i == i1 {
            continue;
        }
        let r = circumradius_sq(p0, p1, p);
        if r < min_radius || (r == min_radius && i2 != NONE && lex_less(p, pts[i2])) {
            i2 = i;
            min_radius = r;
        }
    }

    if min_radius.is_infinite() {
        return None;
    }
    Some(match orient2d(p0, p1, pts[i2]) {
        Orientation::Clockwise => (i0, i2, i1),
        _ => (i0, i1, i2),
    })
}

/// Delaunay triangulation of the point set.
///
/// Errors: fewer than 3 points, or all points collinear. Duplicate points
/// cannot occur because [`PointSet`] rejects them.
pub fn triangulate(ps: &PointSet) -> Result<HalfEdgeMesh<'_>, TriangulationError> {
    if ps.len() < 3 {
        return Err(TriangulationError::TooFewPoints(ps.len()));
    }
    let pts = ps.points();

    let (i0, i1, i2) =
        find_seed_triangle(pts).ok_or(TriangulationError::DegenerateInput)?;
    let center = circumcenter(pts[i0], pts[i1], pts[i2]).expect("seed triangle not collinear");

    let mut mesh = HalfEdgeMesh::with_capacity(ps);
    mesh.add_triangle(i0, i1, i2, NONE, NONE, NONE);

    // Insertion order: distance from the seed circumcenter, ties broken
    // lexicographically so equal-distance rings (e.g. grid points) insert
    // deterministically.
    let mut dists: Vec<(usize, f64)> = pts
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, dist_sq(center, p)))
        .collect();
    dists.sort_unstable_by(|&(i, da), &(j, db)| {
        da.total_cmp(&db)
            .then_with(|| pts[i].x.total_cmp(&pts[j].x))
            .then_with(|| pts[i].y.total_cmp(&pts[j].y))
    });

    let mut hull = Hull::new(ps.len(), center, i0, i1, i2, pts);

    for &(i, _) in &dists {
        if i == i0 || i == i1 || i == i2 {
            continue;
        }
        let p = pts[i];

        let (mut e, walk_back) = hull.find_visible_edge(p, pts);
        if e == NONE {
            // Only reachable for a point already on the hull, which the
            // insertion order rules out: a point strictly closer to the sort
            // center than both endpoints of a hull edge cannot lie on that
            // edge, and duplicates were rejected at ingestion.
            debug_assert!(false, "no visible hull edge for point {i}");
            continue;
        }

        // First triangle from the new point to the visible edge.
        let t = mesh.add_triangle(e, i, hull.next[e], NONE, NONE, hull.tri[e]);
        hull.tri[i] = mesh.legalize(t + 2, pts, &mut hull);
        hull.tri[e] = t;

        // Walk forward along the hull while its edges stay visible from p,
        // filling each with a triangle.
        let mut n = hull.next[e];
        loop {
            let q = hull.next[n];
            if orient2d(p, pts[n], pts[q]) != Orientation::Clockwise {
                break;
            }
            let t = mesh.add_triangle(n, i, q, hull.tri[i], NONE, hull.tri[n]);
            hull.tri[i] = mesh.legalize(t + 2, pts, &mut hull);
            hull.next[n] = NONE; // vertex swallowed by the new triangles
            n = q;
        }

        // If the visible edge was found at the chain start, also walk backward.
        if walk_back {
            loop {
                let q = hull.prev[e];
                if orient2d(p, pts[q], pts[e]) != Orientation::Clockwise {
                    break;
                }
                let t = mesh.add_triangle(q, i, e, NONE, hull.tri[e], hull.tri[q]);
                mesh.legalize(t + 2, pts, &mut hull);
                hull.tri[q] = t;
                hull.next[e] = NONE;
                e = q;
            }
        }

        hull.prev[i] = e;
        hull.next[i] = n;
        hull.prev[n] = i;
        hull.next[e] = i;
        hull.start = e;

        hull.hash_edge(p, i);
        hull.hash_edge(pts[e], e);
    }

    let mut e = hull.start;
    loop {
        mesh.hull.push(e);
        e = hull.next[e];
        if e == hull.start {
            break;
        }
    }

    mesh.triangles.shrink_to_fit();
    mesh.halfedges.shrink_to_fit();

    Ok(mesh)
}
