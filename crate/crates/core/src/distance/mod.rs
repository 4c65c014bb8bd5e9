//! Distances between persistence diagrams.
//!
//! Partial matchings are encoded as square assignment problems on the
//! augmented index set: rows are the points of the first diagram followed by
//! one diagonal slot per point of the second; columns are the points of the
//! second diagram followed by one diagonal slot per point of the first.
//! A point matched to any diagonal slot pays its projection cost and
//! diagonal-to-diagonal matches are free.

pub mod assignment;
pub mod matching;
mod sinkhorn;

use std::fmt;
use std::str::FromStr;

pub use sinkhorn::{sinkhorn, SinkhornConfig};

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// Ground metric between diagram points, viewed as points of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundMetric {
    /// `max(|Δb|, |Δd|)`; projection of `(b, d)` to the diagonal costs `(d−b)/2`.
    #[default]
    LInf,
    /// Euclidean; projection costs `(d−b)/√2`.
    L2,
}

impl GroundMetric {
    pub fn cost(self, p: (f64, f64), q: (f64, f64)) -> f64 {
        let (db, dd) = (p.0 - q.0, p.1 - q.1);
        match self {
            GroundMetric::LInf => db.abs().max(dd.abs()),
            GroundMetric::L2 => db.hypot(dd),
        }
    }

    pub fn diagonal_cost(self, p: (f64, f64)) -> f64 {
        let life = p.1 - p.0;
        match self {
            GroundMetric::LInf => life / 2.0,
            GroundMetric::L2 => life / std::f64::consts::SQRT_2,
        }
    }

    /// `(∂/∂b, ∂/∂d)` of [`cost`](Self::cost) with respect to `p`. Where the
    /// L∞ maximum is attained by both coordinates the birth coordinate takes it.
    pub fn cost_grad(self, p: (f64, f64), q: (f64, f64)) -> (f64, f64) {
        let (db, dd) = (p.0 - q.0, p.1 - q.1);
        match self {
            GroundMetric::LInf => {
                if db.abs() >= dd.abs() {
                    (sign(db), 0.0)
                } else {
                    (0.0, sign(dd))
                }
            }
            GroundMetric::L2 => {
                let c = db.hypot(dd);
                if c > 0.0 {
                    (db / c, dd / c)
                } else {
                    (0.0, 0.0)
                }
            }
        }
    }

    /// `(∂/∂b, ∂/∂d)` of [`diagonal_cost`](Self::diagonal_cost).
    pub fn diagonal_grad(self) -> (f64, f64) {
        match self {
            GroundMetric::LInf => (-0.5, 0.5),
            GroundMetric::L2 => (-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl FromStr for GroundMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linf" | "l-inf" | "inf" => Ok(GroundMetric::LInf),
            "l2" | "euclidean" => Ok(GroundMetric::L2),
            _ => Err(Error::InvalidArgument(format!("unknown ground metric {s:?}"))),
        }
    }
}

impl fmt::Display for GroundMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroundMetric::LInf => "linf",
            GroundMetric::L2 => "l2",
        })
    }
}

/// Options shared by all diagram distances.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransportConfig {
    pub ground: GroundMetric,
    /// Finite death value substituted for essential points. Without it,
    /// diagrams carrying essential points are rejected.
    pub essential_cap: Option<f64>,
}

/// Square cost matrix over the augmented index set.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedCost {
    pub m1: usize,
    pub m2: usize,
    /// Row-major `(m1+m2) × (m2+m1)`.
    pub matrix: Vec<f64>,
}

impl AugmentedCost {
    pub fn size(&self) -> usize {
        self.m1 + self.m2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.size() + j]
    }
}

pub(crate) fn finite_points(d: &PersistenceDiagram, cap: Option<f64>) -> Result<Vec<(f64, f64)>> {
    if d.essential_count() == 0 {
        return Ok(d.points().to_vec());
    }
    match cap {
        Some(c) if c.is_finite() => Ok(d.cap_essential(c).points().to_vec()),
        Some(c) => Err(Error::InvalidArgument(format!("essential cap must be finite, got {c}"))),
        None => Err(Error::EssentialWithoutCap),
    }
}

pub fn augmented_cost(p1: &[(f64, f64)], p2: &[(f64, f64)], ground: GroundMetric) -> AugmentedCost {
    let (m1, m2) = (p1.len(), p2.len());
    let size = m1 + m2;
    let mut matrix = vec![0.0; size * size];
    for (i, &p) in p1.iter().enumerate() {
        let row = &mut matrix[i * size..(i + 1) * size];
        for (j, &q) in p2.iter().enumerate() {
            row[j] = ground.cost(p, q);
        }
        row[m2..].fill(ground.diagonal_cost(p));
    }
    for k in 0..m2 {
        let row = &mut matrix[(m1 + k) * size..(m1 + k + 1) * size];
        for (j, &q) in p2.iter().enumerate() {
            row[j] = ground.diagonal_cost(q);
        }
    }
    AugmentedCost { m1, m2, matrix }
}

/// How mass moves between the augmented index sets.
#[derive(Debug, Clone, PartialEq)]
pub enum TransportPlan {
    /// `assign[row] = col`, a perfect matching.
    Matching(Vec<usize>),
    /// Dense row-major coupling with (approximately) unit marginals.
    Coupling { size: usize, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    pub distance: f64,
    pub plan: TransportPlan,
    pub cost: AugmentedCost,
    pub converged: bool,
    pub iterations: usize,
    /// Largest absolute row/column marginal error of the plan.
    pub marginal_violation: f64,
}

impl Transport {
    /// `⟨plan, cost⟩` recomputed from the plan.
    pub fn plan_cost(&self) -> f64 {
        match &self.plan {
            TransportPlan::Matching(assign) => {
                assign.iter().enumerate().map(|(i, &j)| self.cost.get(i, j)).sum()
            }
            TransportPlan::Coupling { weights, .. } => {
                weights.iter().zip(&self.cost.matrix).map(|(p, c)| p * c).sum()
            }
        }
    }

    /// Mass sent from row `i` to column `j`.
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        match &self.plan {
            TransportPlan::Matching(assign) => f64::from(u8::from(assign[i] == j)),
            TransportPlan::Coupling { size, weights } => weights[i * size + j],
        }
    }
}

fn check_dims(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<()> {
    if d1.dim() != d2.dim() {
        return Err(Error::DimensionMismatch(d1.dim(), d2.dim()));
    }
    Ok(())
}

/// Exact 1-Wasserstein distance: min-cost perfect matching on the augmented
/// cost matrix.
pub fn wasserstein_exact(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    cfg: &TransportConfig,
) -> Result<Transport> {
    check_dims(d1, d2)?;
    let p1 = finite_points(d1, cfg.essential_cap)?;
    let p2 = finite_points(d2, cfg.essential_cap)?;
    let cost = augmented_cost(&p1, &p2, cfg.ground);
    let assign = assignment::solve(cost.size(), &cost.matrix);
    let mut t = Transport {
        distance: 0.0,
        plan: TransportPlan::Matching(assign),
        cost,
        converged: true,
        iterations: 0,
        marginal_violation: 0.0,
    };
    t.iterations = t.cost.size();
    t.distance = t.plan_cost();
    Ok(t)
}

/// Bottleneck distance: the smallest threshold admitting a perfect matching
/// of the augmented graph, found by binary search over the distinct costs.
pub fn bottleneck(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    cfg: &TransportConfig,
) -> Result<f64> {
    check_dims(d1, d2)?;
    let p1 = finite_points(d1, cfg.essential_cap)?;
    let p2 = finite_points(d2, cfg.essential_cap)?;
    let cost = augmented_cost(&p1, &p2, cfg.ground);
    let n = cost.size();
    if n == 0 {
        return Ok(0.0);
    }
    let mut candidates = cost.matrix.clone();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let feasible = |t: f64| {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| cost.get(i, j) <= t).collect())
            .collect();
        matching::max_matching(&adj, n) == n
    };
    // The largest candidate is always feasible.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}
