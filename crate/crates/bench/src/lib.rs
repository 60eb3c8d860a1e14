//! Shared fixtures for the pipeline benchmarks.

use polyshell::synth::{generate_random_polygon, sample_points_in_polygon};
use polyshell::PointSet;

/// A sampled concave test shape, rescaled to unit point density so a fixed
/// alpha of 2 is a sensible filter threshold at every size.
pub fn bench_points(n: usize, seed: u64) -> PointSet {
    let (poly, ps) = generate_random_polygon(24, 1, seed).expect("generator");
    let samples = sample_points_in_polygon(&poly, &ps, n, seed ^ 0xB0B).expect("sampler");
    let b = samples.bounds().expect("non-empty");
    let s = (n as f64 / b.area()).sqrt();
    PointSet::from_coords(samples.iter().map(|p| (p.x * s, p.y * s))).expect("rescale")
}
