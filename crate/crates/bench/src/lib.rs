//! Criterion benchmarks for the persistence pipeline live in `benches/`.
//! This crate only hosts the shared input builders.

use phtk::distance::GroundMetric;
use phtk::pointcloud::{gen_circle, gen_gaussian_blob};
use phtk::{PersistenceDiagram, PointCloud};
use rand::Rng;

pub fn image_scale_cloud(n: usize, seed: u64) -> PointCloud {
    gen_gaussian_blob(n, 100, 1.0, seed).expect("valid blob")
}

pub fn noisy_circle(n: usize, seed: u64) -> PointCloud {
    gen_circle(n, 1.0, 0.05, seed).expect("valid circle")
}

/// Deterministic pseudo-random finite diagram with `m` points.
pub fn synthetic_diagram(m: usize, seed: u64) -> PersistenceDiagram {
    let mut rng = phtk::rng::seeded(seed);
    let points = (0..m)
        .map(|_| {
            let b: f64 = rng.random();
            (b, b + rng.random::<f64>())
        })
        .collect();
    PersistenceDiagram::new(1, points).expect("finite points")
}

/// Ground metric used by the distance benchmarks.
pub const GROUND: GroundMetric = GroundMetric::LInf;
