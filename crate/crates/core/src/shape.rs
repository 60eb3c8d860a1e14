//! Triangle filtering and region growing.
//!
//! Stage two of the pipeline: decide which Delaunay triangles belong to the
//! shape, then group the survivors into edge-connected regions. A triangle
//! is kept when it passes every enabled criterion:
//!
//! * circumradius at most `alpha` (the classic alpha-shape test), and/or
//! * longest edge at most `l_max`.
//!
//! Both tests compare squared lengths, so no square roots are taken. Regions
//! are grown by flood fill across shared edges; two triangles meeting only
//! at a vertex end up in different regions, which keeps the extracted
//! boundaries simple.

use thiserror::Error;

use crate::geom::{circumradius_sq, dist_sq};
use crate::mesh::{halfedges_of_triangle, triangle_of, HalfEdgeMesh, NONE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("filter needs at least one criterion (alpha or l_max)")]
    NoCriterion,
    #[error("filter threshold {name} must be positive and finite, got {value}")]
    BadThreshold { name: &'static str, value: f64 },
}

/// Which triangles to keep and how small a region may be.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    alpha: Option<f64>,
    l_max: Option<f64>,
    min_region_size: usize,
}

impl FilterConfig {
    /// At least one of `alpha`, `l_max` must be given; thresholds must be
    /// positive and finite.
    pub fn new(alpha: Option<f64>, l_max: Option<f64>) -> Result<Self, FilterError> {
        if alpha.is_none() && l_max.is_none() {
            return Err(FilterError::NoCriterion);
        }
        for (name, v) in [("alpha", alpha), ("l_max", l_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(FilterError::BadThreshold { name, value: v });
                }
            }
        }
        Ok(FilterConfig { alpha, l_max, min_region_size: 1 })
    }

    pub fn by_alpha(alpha: f64) -> Result<Self, FilterError> {
        Self::new(Some(alpha), None)
    }

    pub fn by_max_edge(l_max: f64) -> Result<Self, FilterError> {
        Self::new(None, Some(l_max))
    }

    /// Regions with fewer triangles than this are discarded. Default 1.
    pub fn with_min_region_size(mut self, n: usize) -> Self {
        self.min_region_size = n;
        self
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn l_max(&self) -> Option<f64> {
        self.l_max
    }

    pub fn min_region_size(&self) -> usize {
        self.min_region_size
    }
}

/// Subset of a mesh's triangles, as a bit mask.
///
/// [`filter_triangles`] builds one from a [`FilterConfig`], but any
/// predicate can: start from [`FilteredSet::empty`] and [`insert`] the
/// triangles that pass.
///
/// [`insert`]: FilteredSet::insert
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredSet {
    bits: Vec<u64>,
    num_triangles: usize,
    count: usize,
}

impl FilteredSet {
    pub fn empty(num_triangles: usize) -> Self {
        FilteredSet {
            bits: vec![0; num_triangles.div_ceil(64)],
            num_triangles,
            count: 0,
        }
    }

    pub fn insert(&mut self, t: usize) {
        assert!(t < self.num_triangles, "triangle index {t} out of range");
        let (word, bit) = (t / 64, 1u64 << (t % 64));
        if self.bits[word] & bit == 0 {
            self.bits[word] |= bit;
            self.count += 1;
        }
    }

    pub fn contains(&self, t: usize) -> bool {
        t < self.num_triangles && self.bits[t / 64] & (1 << (t % 64)) != 0
    }

    /// Number of triangles in the subset.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Size of the universe, i.e. the mesh's triangle count.
    pub fn num_triangles(&self) -> usize {
        self.num_triangles
    }

    /// Member triangle indices, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_triangles).filter(|&t| self.contains(t))
    }

    #[cfg(test)]
    fn is_subset_of(&self, other: &FilteredSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(&a, &b)| a & !b == 0)
    }
}

/// Applies the configured criteria to every triangle.
pub fn filter_triangles(mesh: &HalfEdgeMesh, cfg: &FilterConfig) -> FilteredSet {
    let ps = mesh.point_set();
    let alpha_sq = cfg.alpha.map(|a| a * a);
    let l_max_sq = cfg.l_max.map(|l| l * l);

    let mut kept = FilteredSet::empty(mesh.num_triangles());
    for t in 0..mesh.num_triangles() {
        let [a, b, c] = mesh.triangle_vertices(t);
        let (pa, pb, pc) = (ps[a], ps[b], ps[c]);

        if let Some(limit) = alpha_sq {
            if circumradius_sq(pa, pb, pc) > limit {
                continue;
            }
        }
        if let Some(limit) = l_max_sq {
            let longest = dist_sq(pa, pb).max(dist_sq(pb, pc)).max(dist_sq(pc, pa));
            if longest > limit {
                continue;
            }
        }
        kept.insert(t);
    }
    kept
}

/// Edge-connected component of kept triangles. Indices are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    triangles: Vec<usize>,
}

impl Region {
    pub fn triangles(&self) -> &[usize] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.triangles.binary_search(&t).is_ok()
    }
}

/// The regions of a filtered mesh, ordered by smallest triangle index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSet {
    pub regions: Vec<Region>,
}

impl RegionSet {
    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Region> {
        self.regions.iter()
    }
}

/// Flood-fills kept triangles across shared (twin) edges and drops regions
/// smaller than `min_region_size`.
///
/// Deterministic: seeds are scanned in ascending index order, so each
/// region's position in the result is fixed by its smallest member.
pub fn extract_regions(
    mesh: &HalfEdgeMesh,
    kept: &FilteredSet,
    min_region_size: usize,
) -> RegionSet {
    const UNASSIGNED: usize = usize::MAX;
    let mut region_of = vec![UNASSIGNED; mesh.num_triangles()];
    let mut regions = Vec::new();
    let mut stack = Vec::new();

    for seed in kept.iter() {
        if region_of[seed] != UNASSIGNED {
            continue;
        }
        let id = regions.len();
        region_of[seed] = id;
        stack.push(seed);
        let mut triangles = Vec::new();
        while let Some(t) = stack.pop() {
            triangles.push(t);
            for he in halfedges_of_triangle(t) {
                let twin = mesh.halfedges[he];
                if twin == NONE {
                    continue;
                }
                let u = triangle_of(twin);
                if kept.contains(u) && region_of[u] == UNASSIGNED {
                    region_of[u] = id;
                    stack.push(u);
                }
            }
        }
        triangles.sort_unstable();
        regions.push(Region { triangles });
    }

    regions.retain(|r| r.len() >= min_region_size);
    RegionSet { regions }
}
