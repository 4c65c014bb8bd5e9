//! Point clouds, Euclidean distance matrices and the synthetic generators
//! used by the experiment pipelines.
//!
//! Point-cloud CSV: one point per line, comma-separated decimal coordinates,
//! no header. Lines starting with `#` are comments and are skipped on read.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::seeded;

/// `n` points in `R^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidCloud("no points".into()))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidCloud(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a cloud from row-major coordinates (`coords.len()` must be a
    /// positive multiple of `dim`).
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCloud("dimension must be at least 1".into()));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidCloud(format!(
                "{} coordinates do not form whole {dim}-dimensional points",
                coords.len()
            )));
        }
        if let Some(k) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidCloud(format!(
                "non-finite coordinate in point {}",
                k / dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Row-major coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Adds `offset` to every point.
    pub fn translated(&self, offset: &[f64]) -> Result<Self> {
        if offset.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "offset has {} coordinates, cloud has dimension {}",
                offset.len(),
                self.dim
            )));
        }
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(offset).map(|(x, o)| x + o))
            .collect();
        Self::from_flat(self.dim, coords)
    }

    pub fn pairwise_distances(&self) -> DistanceMatrix {
        pairwise_distances(self)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        msg: format!("{tok:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if let Some(first) = points.first().map(Vec::len) {
                if row.len() != first {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("ragged row: {} fields, expected {first}", row.len()),
                    });
                }
            }
            points.push(row);
        }
        Self::new(points)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }

    /// CSV text, optionally preceded by `# `-prefixed comment lines.
    pub fn to_csv_string(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(comment) = comment {
            for line in comment.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        for p in self.points() {
            for (k, x) in p.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                // `{:?}` on f64 is the shortest round-tripping representation.
                let _ = write!(out, "{x:?}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>, comment: Option<&str>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv_string(comment)).map_err(|e| Error::io(path, e))
    }
}

/// Symmetric `n × n` matrix of pairwise distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major matrix, checking symmetry, zero diagonal and
    /// non-negativity. The triangle inequality is not checked.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "distance matrix needs {n}x{n} entries, got {}",
                entries.len()
            )));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let a = entries[i * n + j];
                if !(a.is_finite() && a >= 0.0) || a != entries[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) is negative, non-finite or asymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn pairwise_distances(cloud: &PointCloud) -> DistanceMatrix {
    let n = cloud.n();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(cloud.point(i), cloud.point(j));
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    DistanceMatrix { n, entries }
}

fn normal(sd: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, sd).map_err(|e| Error::InvalidArgument(format!("normal sd {sd}: {e}")))
}

/// `n` points at angles `2πk/n` on a circle, each coordinate jittered by
/// Gaussian noise with standard deviation `noise_sd`.
pub fn gen_circle(n: usize, radius: f64, noise_sd: f64, seed: u64) -> Result<PointCloud> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("circle needs n >= 3, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise sd must be >= 0, got {noise_sd}")));
    }
    let noise = normal(noise_sd)?;
    let mut rng = seeded(seed);
    let mut coords = Vec::with_capacity(2 * n);
    for k in 0..n {
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        coords.push(radius * theta.cos() + noise.sample(&mut rng));
        coords.push(radius * theta.sin() + noise.sample(&mut rng));
    }
    PointCloud::from_flat(2, coords)
}

/// `n` i.i.d. centered isotropic Gaussian points in `R^dim`.
pub fn gen_gaussian_blob(n: usize, dim: usize, sd: f64, seed: u64) -> Result<PointCloud> {
    if n == 0 || dim == 0 {
        return Err(Error::InvalidArgument("blob needs n >= 1 and dim >= 1".into()));
    }
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::InvalidArgument(format!("blob sd must be positive, got {sd}")));
    }
    let dist = normal(sd)?;
    let mut rng = seeded(seed);
    let coords = (0..n * dim).map(|_| dist.sample(&mut rng)).collect();
    PointCloud::from_flat(dim, coords)
}

/// Displaces every point by an independent vector drawn uniformly from the
/// ball of radius `delta`.
pub fn perturb(cloud: &PointCloud, delta: f64, seed: u64) -> Result<PointCloud> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
    }
    if delta == 0.0 {
        return Ok(cloud.clone());
    }
    let dim = cloud.dim();
    let mut rng = seeded(seed);
    let mut coords = cloud.coords().to_vec();
    let mut dir = vec![0.0; dim];
    for p in coords.chunks_exact_mut(dim) {
        let norm = loop {
            for d in dir.iter_mut() {
                *d = StandardNormal.sample(&mut rng);
            }
            let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
            if norm > 0.0 {
                break norm;
            }
        };
        let r = delta * rng.random::<f64>().powf(1.0 / dim as f64);
        for (x, d) in p.iter_mut().zip(&dir) {
            *x += r * d / norm;
        }
    }
    PointCloud::from_flat(dim, coords)
}

/// A circular hole cut out of the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hole {
    pub center: [f64; 2],
    pub radius: f64,
}

/// The two-hole disk used for topology-matching demos.
pub fn two_hole_layout() -> [Hole; 2] {
    [
        Hole { center: [-0.45, 0.0], radius: 0.25 },
        Hole { center: [0.45, 0.0], radius: 0.25 },
    ]
}

const DISK_ATTEMPTS_PER_POINT: usize = 10_000;

/// `n` points rejection-sampled uniformly from the unit disk minus `holes`.
pub fn gen_disk_with_holes(n: usize, holes: &[Hole], seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidArgument("disk needs n >= 1".into()));
    }
    for h in holes {
        let [cx, cy] = h.center;
        if !(h.radius > 0.0) || (cx * cx + cy * cy).sqrt() + h.radius > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "hole {h:?} must have positive radius and lie inside the unit disk"
            )));
        }
    }
    let mut rng = seeded(seed);
    let max_attempts = DISK_ATTEMPTS_PER_POINT.saturating_mul(n);
    let mut coords = Vec::with_capacity(2 * n);
    let mut attempts = 0;
    while coords.len() < 2 * n {
        if attempts == max_attempts {
            return Err(Error::SamplingFailed { attempts });
        }
        attempts += 1;
        let x = rng.random_range(-1.0..=1.0);
        let y = rng.random_range(-1.0..=1.0);
        if x * x + y * y > 1.0 {
            continue;
        }
        let in_hole = holes.iter().any(|h| {
            let (dx, dy) = (x - h.center[0], y - h.center[1]);
            dx * dx + dy * dy <= h.radius * h.radius
        });
        if !in_hole {
            coords.push(x);
            coords.push(y);
        }
    }
    PointCloud::from_flat(2, coords)
}
