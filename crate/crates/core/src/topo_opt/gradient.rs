use super::attribution::{attribute, Edge, PairAttribution};
use super::functional::{lifetime_order, persistence_term, transport_to_target, DiagramFunctional, Direction, FunctionalKind};
use crate::distance::GroundMetric;
use crate::error::{Error, Result};
use crate::filtration::Radius;
use crate::persistence::Persistence;
use crate::pointcloud::{DistanceMatrix, PointCloud};

/// Per-point gradient, same shape as the cloud it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    dim: usize,
    data: Vec<f64>,
}

impl GradientField {
    pub fn zeros(n: usize, dim: usize) -> Self {
        Self { dim, data: vec![0.0; n * dim] }
    }

    pub fn n(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    fn add_scaled(&mut self, other: &GradientField, w: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += w * b;
        }
    }
}

/// Filtration settings used when recomputing persistence from coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub max_dim: usize,
    pub max_radius: Radius,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { max_dim: 2, max_radius: Radius::Auto }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradResult {
    pub value: f64,
    pub grad: GradientField,
    /// Terms dropped because their governing edge had zero length.
    pub degenerate_edges: usize,
}

/// Weighted sum of diagram functionals sharing one optimization direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub terms: Vec<(f64, FunctionalKind)>,
    pub direction: Direction,
}

impl From<DiagramFunctional> for Objective {
    fn from(f: DiagramFunctional) -> Self {
        Self { terms: vec![(1.0, f.kind)], direction: f.direction }
    }
}

impl Objective {
    pub fn validate(&self, cfg: &PipelineConfig) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidArgument("objective has no terms".into()));
        }
        for (w, kind) in &self.terms {
            if !w.is_finite() {
                return Err(Error::InvalidArgument(format!("term weight {w} is not finite")));
            }
            kind.validate()?;
            // Destroyers of dimension-k classes are (k+1)-simplices.
            if kind.dim() + 1 > cfg.max_dim {
                return Err(Error::InvalidArgument(format!(
                    "functional on H{} needs max_dim >= {}, got {}",
                    kind.dim(),
                    kind.dim() + 1,
                    cfg.max_dim
                )));
            }
        }
        Ok(())
    }

    /// Value and coordinate gradient of the objective at `cloud`.
    pub fn value_and_grad(&self, cloud: &PointCloud, cfg: &PipelineConfig) -> Result<GradResult> {
        self.validate(cfg)?;
        let dm = cloud.pairwise_distances();
        let ph = Persistence::compute(&dm, cfg.max_dim, cfg.max_radius)?;
        let att = attribute(&ph.pairs, &ph.filtration, &dm);
        let mut total = GradResult {
            value: 0.0,
            grad: GradientField::zeros(cloud.n(), cloud.dim()),
            degenerate_edges: 0,
        };
        for (w, kind) in &self.terms {
            let term = term_value_and_grad(kind, cloud, &dm, &ph, &att)?;
            total.value += w * term.value;
            total.grad.add_scaled(&term.grad, *w);
            total.degenerate_edges += term.degenerate_edges;
        }
        Ok(total)
    }
}

/// Gradient of one functional with respect to the coordinates of `cloud`.
pub fn grad(cloud: &PointCloud, spec: &DiagramFunctional, cfg: &PipelineConfig) -> Result<GradResult> {
    Objective::from(spec.clone()).value_and_grad(cloud, cfg)
}

/// One finite, positive-persistence point of the functional's dimension.
struct Term {
    birth: f64,
    death: f64,
    birth_edge: Option<Edge>,
    death_edge: Option<Edge>,
}

fn term_value_and_grad(
    kind: &FunctionalKind,
    cloud: &PointCloud,
    dm: &DistanceMatrix,
    ph: &Persistence,
    att: &PairAttribution,
) -> Result<GradResult> {
    let dim = kind.dim();
    // Same points, in the same order, as `Persistence::diagram(dim)`.
    let terms: Vec<Term> = ph
        .pairs
        .iter()
        .zip(&att.entries)
        .filter(|(p, _)| p.dim == dim && !p.is_essential() && p.death > p.birth)
        .map(|(p, a)| Term {
            birth: p.birth,
            death: p.death,
            birth_edge: a.birth_edge,
            death_edge: a.death_edge,
        })
        .collect();
    let points: Vec<(f64, f64)> = terms.iter().map(|t| (t.birth, t.death)).collect();

    // ∂E/∂b_i, ∂E/∂d_i
    let mut dbirth = vec![0.0; terms.len()];
    let mut ddeath = vec![0.0; terms.len()];
    let value = match kind {
        FunctionalKind::TotalPersistence { p, q, i0, .. } => {
            let mut value = 0.0;
            for k in lifetime_order(&points).into_iter().skip(*i0) {
                let (v, gb, gd) = persistence_term(points[k].0, points[k].1, *p, *q);
                value += v;
                dbirth[k] = gb;
                ddeath[k] = gd;
            }
            value
        }
        FunctionalKind::WassersteinToTarget { target, ground, .. } => {
            let t = transport_to_target(&points, kind)?;
            let m2 = target.len();
            let size = t.cost.size();
            // The plan is held fixed (envelope rule); only source rows move.
            for (i, &p) in points.iter().enumerate() {
                for j in 0..size {
                    let mass = t.mass(i, j);
                    if mass == 0.0 {
                        continue;
                    }
                    let (gb, gd) = if j < m2 {
                        ground.cost_grad(p, target.points()[j])
                    } else {
                        GroundMetric::diagonal_grad(*ground)
                    };
                    dbirth[i] += mass * gb;
                    ddeath[i] += mass * gd;
                }
            }
            t.distance
        }
    };

    let mut out = GradResult {
        value,
        grad: GradientField::zeros(cloud.n(), cloud.dim()),
        degenerate_edges: 0,
    };
    for (k, t) in terms.iter().enumerate() {
        for (edge, coeff) in [(t.birth_edge, dbirth[k]), (t.death_edge, ddeath[k])] {
            let Some((u, v)) = edge else { continue };
            if coeff == 0.0 {
                continue;
            }
            let (u, v) = (u as usize, v as usize);
            let len = dm.get(u, v);
            if len == 0.0 {
                out.degenerate_edges += 1;
                continue;
            }
            let dim = cloud.dim();
            let (xu, xv) = (cloud.point(u), cloud.point(v));
            for c in 0..dim {
                let unit = (xu[c] - xv[c]) / len;
                out.grad.data[u * dim + c] += coeff * unit;
                out.grad.data[v * dim + c] -= coeff * unit;
            }
        }
    }
    Ok(out)
}
