//! Boundary walking: regions of triangles to polygons with holes.
//!
//! Stage three. The boundary of a region is the set of half-edges whose twin
//! is missing or lies outside the region. Because triangles are wound
//! counter-clockwise, every boundary half-edge has the region on its left,
//! so following them forward traces the outer shell counter-clockwise and
//! each hole clockwise. The only decision point is a vertex with several
//! outgoing boundary edges (the region pinches there); [`select_edge`]
//! resolves it by always continuing around the same complement face, which
//! keeps every ring free of repeated vertices.
//!
//! Cost is proportional to the boundary length, not the region area: the
//! walk touches each boundary half-edge once.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::geom::{
    orient2d, LinearRing, MultiPolygon, Orientation, PointSet, Polygon,
};
use crate::mesh::{
    halfedges_of_triangle, triangle_of, triangulate, HalfEdgeMesh, TriangulationError, NONE,
};
use crate::shape::{extract_regions, filter_triangles, FilterConfig, Region};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("boundary walk failed to close a ring; region adjacency is corrupt")]
    CorruptBoundary,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// Reference direction for [`select_edge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeReference {
    /// Ring start at the rightmost boundary point: a virtual incoming edge
    /// pointing `[0, 1]`.
    Start,
    /// The boundary half-edge the walk arrived on.
    Incoming(usize),
}

/// Picks the boundary half-edge to continue on when several leave a vertex.
///
/// The walk keeps the complement face it is tracing on the right, so the
/// continuation is the candidate at the smallest counter-clockwise angle
/// from the reversed incoming direction. Angles never need computing: a
/// candidate is classified by which side of the reference ray its
/// destination falls on (an exact orientation test), and candidates on the
/// same side compare by a second orientation test.
///
/// Choosing instead e.g. the angularly farthest candidate would jump across
/// the pinch vertex into a different complement face and weld two rings into
/// a self-intersecting one.
pub fn select_edge(
    mesh: &HalfEdgeMesh,
    reference: EdgeReference,
    candidates: &[usize],
) -> Result<usize, ExtractError> {
    let first = *candidates.first().ok_or(ExtractError::CorruptBoundary)?;
    if candidates.len() == 1 {
        return Ok(first);
    }

    let ps = mesh.point_set();
    let v = match reference {
        EdgeReference::Start => mesh.origin(first),
        EdgeReference::Incoming(he) => mesh.dest(he),
    };
    debug_assert!(candidates.iter().all(|&c| mesh.origin(c) == v));

    // 0 while the candidate is within (0, pi) counter-clockwise of the
    // reference ray, 1 from pi up to (but excluding) a full turn. Angle 0 is
    // impossible: it would mean two collinear overlapping edges at v.
    let half = |cand: usize| -> u8 {
        let d = ps[mesh.dest(cand)];
        let ccw_side = match reference {
            // Reference ray [0, -1]: the (0, pi) side is east of v.
            EdgeReference::Start => d.x > ps[v].x,
            EdgeReference::Incoming(he) => {
                orient2d(ps[v], ps[mesh.origin(he)], d) == Orientation::CounterClockwise
            }
        };
        if ccw_side {
            0
        } else {
            1
        }
    };

    let best = candidates[1..].iter().fold(first, |best, &cand| {
        let (hb, hc) = (half(best), half(cand));
        let cand_wins = hc < hb
            || (hc == hb
                && orient2d(ps[v], ps[mesh.dest(cand)], ps[mesh.dest(best)])
                    == Orientation::CounterClockwise);
        if cand_wins {
            cand
        } else {
            best
        }
    });
    Ok(best)
}

/// Boundary state of one region: the half-edges not yet walked, grouped by
/// origin point, plus the rightmost boundary point where the shell starts.
#[derive(Debug, Clone)]
pub struct BoundaryIndex {
    he_set: BTreeSet<usize>,
    out_edges: HashMap<usize, Vec<usize>>,
    extreme_pi: usize,
}

impl BoundaryIndex {
    /// Collects the boundary half-edges of `region`: those whose twin is
    /// absent or belongs to a triangle outside the region.
    pub fn new(mesh: &HalfEdgeMesh, region: &Region) -> Self {
        let ps = mesh.point_set();
        let mut he_set = BTreeSet::new();
        let mut out_edges: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut extreme_pi = NONE;

        // Constant-time membership keeps this pass linear in the region.
        let mut member = vec![0u64; mesh.num_triangles().div_ceil(64)];
        for &t in region.triangles() {
            member[t / 64] |= 1 << (t % 64);
        }

        for &t in region.triangles() {
            for he in halfedges_of_triangle(t) {
                let twin = mesh.halfedges[he];
                if twin != NONE {
                    let tt = triangle_of(twin);
                    if member[tt / 64] & (1 << (tt % 64)) != 0 {
                        continue;
                    }
                }
                let pi = mesh.origin(he);
                he_set.insert(he);
                out_edges.entry(pi).or_default().push(he);
                // Rightmost boundary point, topmost on a tie, so the shell
                // start is unique and has no boundary point due east.
                if extreme_pi == NONE
                    || (ps[pi].x, ps[pi].y) > (ps[extreme_pi].x, ps[extreme_pi].y)
                {
                    extreme_pi = pi;
                }
            }
        }
        BoundaryIndex { he_set, out_edges, extreme_pi }
    }

    /// Boundary half-edges not yet consumed by a walk, ascending.
    pub fn remaining(&self) -> impl Iterator<Item = usize> + '_ {
        self.he_set.iter().copied()
    }

    pub fn remaining_len(&self) -> usize {
        self.he_set.len()
    }

    /// The rightmost (then topmost) boundary point.
    pub fn extreme_point(&self) -> usize {
        self.extreme_pi
    }

    /// Unvisited boundary half-edges leaving `pi`.
    pub fn outgoing(&self, pi: usize) -> &[usize] {
        self.out_edges.get(&pi).map(Vec::as_slice).unwrap_or(&[])
    }

    fn take(&mut self, he: usize, origin: usize) -> bool {
        if !self.he_set.remove(&he) {
            return false;
        }
        if let Some(list) = self.out_edges.get_mut(&origin) {
            if let Some(pos) = list.iter().position(|&e| e == he) {
                list.swap_remove(pos);
            }
            if list.is_empty() {
                self.out_edges.remove(&origin);
            }
        }
        true
    }

    /// Walks the boundary cycle containing `start_he`, consuming its edges,
    /// and returns it as an open ring. The cycle is closed when the walk
    /// returns to the start point; rings never repeat a vertex because the
    /// walk stays on one complement face.
    pub fn extract_linear_ring(
        &mut self,
        mesh: &HalfEdgeMesh,
        start_he: usize,
    ) -> Result<LinearRing, ExtractError> {
        let start_pi = mesh.origin(start_he);
        if !self.take(start_he, start_pi) {
            return Err(ExtractError::CorruptBoundary);
        }
        let mut ring = vec![start_pi];
        let mut he = start_he;
        loop {
            let v = mesh.dest(he);
            if v == start_pi {
                break;
            }
            ring.push(v);
            let next = select_edge(mesh, EdgeReference::Incoming(he), self.outgoing(v))?;
            self.take(next, v);
            he = next;
        }
        LinearRing::new(ring).map_err(|_| ExtractError::CorruptBoundary)
    }

    /// Extracts the outer shell, starting at the extreme point with the
    /// virtual `[0, 1]` incoming direction. Counter-clockwise by
    /// construction.
    pub fn extract_shell(&mut self, mesh: &HalfEdgeMesh) -> Result<LinearRing, ExtractError> {
        let first = select_edge(mesh, EdgeReference::Start, self.outgoing(self.extreme_pi))?;
        self.extract_linear_ring(mesh, first)
    }

    /// Drains the remaining boundary cycles after the shell: the holes,
    /// each clockwise. Seeded from the smallest remaining half-edge id so
    /// hole order is deterministic.
    pub fn extract_holes(&mut self, mesh: &HalfEdgeMesh) -> Result<Vec<LinearRing>, ExtractError> {
        let mut holes = Vec::new();
        while let Some(&he) = self.he_set.first() {
            holes.push(self.extract_linear_ring(mesh, he)?);
        }
        Ok(holes)
    }
}

/// Converts one region into a polygon: shell first, then every hole.
pub fn extract_polygon(mesh: &HalfEdgeMesh, region: &Region) -> Result<Polygon, ExtractError> {
    let mut bi = BoundaryIndex::new(mesh, region);
    let shell = bi.extract_shell(mesh)?;
    let holes = bi.extract_holes(mesh)?;
    Ok(Polygon::new(shell, holes))
}

/// Counts and per-stage wall-clock times for one pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionReport {
    pub n_points: usize,
    pub n_triangles: usize,
    pub n_retained: usize,
    pub n_regions: usize,
    pub n_polygons: usize,
    pub n_holes: usize,
    pub triangulation: Duration,
    pub shape_extraction: Duration,
    pub polygon_extraction: Duration,
    pub total: Duration,
}

/// The full pipeline: triangulate, filter and group, walk every region.
///
/// An empty [`MultiPolygon`] is a legitimate result when the filter rejects
/// everything.
pub fn extract_multipolygon(
    ps: &PointSet,
    cfg: &FilterConfig,
) -> Result<(MultiPolygon, ExtractionReport), ExtractError> {
    let t0 = Instant::now();
    let mesh = triangulate(ps)?;
    let t1 = Instant::now();
    let kept = filter_triangles(&mesh, cfg);
    let regions = extract_regions(&mesh, &kept, cfg.min_region_size());
    let t2 = Instant::now();
    let polygons = regions
        .iter()
        .map(|region| extract_polygon(&mesh, region))
        .collect::<Result<Vec<_>, _>>()?;
    let t3 = Instant::now();

    let report = ExtractionReport {
        n_points: ps.len(),
        n_triangles: mesh.num_triangles(),
        n_retained: kept.len(),
        n_regions: regions.len(),
        n_polygons: polygons.len(),
        n_holes: polygons.iter().map(|p| p.holes.len()).sum(),
        triangulation: t1 - t0,
        shape_extraction: t2 - t1,
        polygon_extraction: t3 - t2,
        total: t3 - t0,
    };
    Ok((MultiPolygon::new(polygons), report))
}
