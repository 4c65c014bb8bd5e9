//! Persistent homology over Z/2 by boundary-matrix reduction.

mod boundary;
mod h0;
mod reduce;
mod stats;

pub use boundary::{boundary_matrix, BoundaryMatrix};
pub use h0::{h0_unionfind, UnionFind};
pub use reduce::reduce;
pub use stats::{lifetime_stats, LifetimeStats};

use crate::error::{Error, Result};
use crate::filtration::{build_rips, Filtration, Radius};
use crate::pointcloud::DistanceMatrix;

/// A homology class born at `birth` (when `creator` enters) and killed at
/// `death` (when `destroyer` enters). Essential classes have `death = ∞` and
/// no destroyer. Simplices are referenced by filtration index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
    pub creator: usize,
    pub destroyer: Option<usize>,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.destroyer.is_none()
    }

    pub fn lifetime(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of `(birth, death)` points of one homology dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    dim: usize,
    points: Vec<(f64, f64)>,
}

impl PersistenceDiagram {
    pub fn new(dim: usize, points: Vec<(f64, f64)>) -> Result<Self> {
        for &(b, d) in &points {
            if !b.is_finite() || d.is_nan() || d < b {
                return Err(Error::DiagramFormat(format!(
                    "invalid point ({b}, {d}): need finite birth and death >= birth"
                )));
            }
        }
        Ok(Self { dim, points })
    }

    pub(crate) fn from_points_unchecked(dim: usize, points: Vec<(f64, f64)>) -> Self {
        Self { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn essential_count(&self) -> usize {
        self.points.iter().filter(|p| p.1.is_infinite()).count()
    }

    /// Points ordered by `(birth, death)`.
    pub fn sorted_points(&self) -> Vec<(f64, f64)> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pts
    }

    /// Multiset equality.
    pub fn same_points(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sorted_points() == other.sorted_points()
    }

    /// Drops essential points.
    pub fn finite(&self) -> Self {
        Self {
            dim: self.dim,
            points: self.points.iter().copied().filter(|p| p.1.is_finite()).collect(),
        }
    }

    /// Replaces `death = ∞` with `cap` (clamped to at least the birth).
    pub fn cap_essential(&self, cap: f64) -> Self {
        Self {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|&(b, d)| if d.is_infinite() { (b, cap.max(b)) } else { (b, d) })
                .collect(),
        }
    }
}

/// The points of dimension `dim`. Zero-persistence pairs are dropped unless
/// `include_zero`; essential pairs are dropped unless `include_essential`.
pub fn diagram(
    pairs: &[PersistencePair],
    dim: usize,
    include_zero: bool,
    include_essential: bool,
) -> PersistenceDiagram {
    let points = pairs
        .iter()
        .filter(|p| p.dim == dim)
        .filter(|p| include_essential || !p.is_essential())
        .filter(|p| include_zero || p.death > p.birth)
        .map(|p| (p.birth, p.death))
        .collect();
    PersistenceDiagram { dim, points }
}

/// Betti number of dimension `dim` at scale `eps`: classes with
/// `birth <= eps < death`.
pub fn betti_curve(pairs: &[PersistencePair], dim: usize, eps: f64) -> usize {
    pairs
        .iter()
        .filter(|p| p.dim == dim && p.birth <= eps && eps < p.death)
        .count()
}

/// A filtration together with its persistence pairs.
#[derive(Debug, Clone)]
pub struct Persistence {
    pub filtration: Filtration,
    pub pairs: Vec<PersistencePair>,
}

impl Persistence {
    pub fn compute(dm: &DistanceMatrix, max_dim: usize, radius: Radius) -> Result<Self> {
        let filtration = build_rips(dm, max_dim, radius)?;
        Ok(Self::from_filtration(filtration))
    }

    pub fn from_filtration(filtration: Filtration) -> Self {
        let bm = boundary_matrix(&filtration);
        let pairs = reduce(&bm, &filtration);
        Self { filtration, pairs }
    }

    /// Default diagram: no zero-persistence points, no essential points.
    pub fn diagram(&self, dim: usize) -> PersistenceDiagram {
        diagram(&self.pairs, dim, false, false)
    }

    /// Homology dimensions whose classes are fully resolved by the filtration
    /// (all dimensions below the top simplex dimension).
    pub fn complete_dims(&self) -> std::ops::Range<usize> {
        0..self.filtration.max_dim()
    }
}
