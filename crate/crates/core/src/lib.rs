//! Concave (multi)polygon extraction from unordered 2D point sets.
//!
//! The pipeline has three stages:
//!
//! 1. **Triangulation** ([`mesh`]): Delaunay triangulation as flat half-edge
//!    arrays.
//! 2. **Shape extraction** ([`shape`]): filter triangles by circumradius
//!    and/or longest edge, then flood-fill the survivors into edge-connected
//!    regions.
//! 3. **Polygon extraction** ([`extract`]): follow each region's boundary
//!    half-edges into an outer shell ring and interior hole rings.
//!
//! The result is a [`geom::MultiPolygon`] whose shells wind counter-clockwise
//! and holes clockwise. [`metrics`] provides a validity audit, a convexity
//! measure, and a Monte-Carlo shape-error estimate; [`synth`] generates
//! random test polygons and point samples.
//!
//! # Example
//!
//! ```
//! use polyshell::{extract_multipolygon, FilterConfig, PointSet};
//!
//! let grid = (0..10).flat_map(|i| (0..10).map(move |j| (i as f64, j as f64)));
//! let points = PointSet::from_coords(grid)?;
//! let config = FilterConfig::by_max_edge(1.5)?;
//! let (shape, report) = extract_multipolygon(&points, &config)?;
//!
//! assert_eq!(shape.len(), 1);
//! assert!(shape.polygons[0].holes.is_empty());
//! assert_eq!(report.n_points, 100);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
pub mod extract;
pub mod geom;
pub mod mesh;
pub mod metrics;
pub mod shape;
pub mod synth;

pub use extract::{extract_multipolygon, ExtractionReport};
pub use geom::{MultiPolygon, Point, PointSet, Polygon};
pub use shape::FilterConfig;
