use crate::distance::{sinkhorn, wasserstein_exact, GroundMetric, SinkhornConfig, Transport, TransportConfig};
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl Direction {
    /// `+1` for descent, `-1` for ascent: the factor multiplying `lr · g`
    /// subtracted from the coordinates.
    pub fn step_sign(self) -> f64 {
        match self {
            Direction::Minimize => 1.0,
            Direction::Maximize => -1.0,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" | "minimize" => Ok(Direction::Minimize),
            "max" | "maximize" => Ok(Direction::Maximize),
            _ => Err(Error::InvalidArgument(format!("unknown direction {s:?}"))),
        }
    }
}

/// A scalar function of one homology dimension's diagram.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalKind {
    /// `Σ_{i ≥ i0} |d_i − b_i|^p ((d_i + b_i)/2)^q` over the finite points
    /// sorted by descending lifetime, so `i0` skips the `i0` most persistent.
    TotalPersistence { p: f64, q: f64, i0: usize, dim: usize },
    /// 1-Wasserstein distance to a fixed finite target diagram, exact when
    /// `alpha` is `None`, Sinkhorn-regularized otherwise.
    WassersteinToTarget {
        target: PersistenceDiagram,
        dim: usize,
        alpha: Option<f64>,
        ground: GroundMetric,
    },
}

impl FunctionalKind {
    pub fn dim(&self) -> usize {
        match self {
            FunctionalKind::TotalPersistence { dim, .. } => *dim,
            FunctionalKind::WassersteinToTarget { dim, .. } => *dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionalKind::TotalPersistence { p, q, .. } => {
                if !(*p >= 0.0 && *q >= 0.0) {
                    return Err(Error::InvalidArgument(format!("need p, q >= 0, got p={p} q={q}")));
                }
            }
            FunctionalKind::WassersteinToTarget { target, dim, alpha, .. } => {
                if target.essential_count() > 0 {
                    return Err(Error::InvalidArgument("target diagram must be finite".into()));
                }
                if target.dim() != *dim {
                    return Err(Error::DimensionMismatch(target.dim(), *dim));
                }
                if let Some(a) = alpha {
                    if !(*a > 0.0) {
                        return Err(Error::InvalidArgument(format!("alpha must be positive, got {a}")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramFunctional {
    pub kind: FunctionalKind,
    pub direction: Direction,
}

impl DiagramFunctional {
    pub fn minimize(kind: FunctionalKind) -> Self {
        Self { kind, direction: Direction::Minimize }
    }

    pub fn maximize(kind: FunctionalKind) -> Self {
        Self { kind, direction: Direction::Maximize }
    }
}

/// Indices of `points` ordered by descending lifetime, ties by ascending
/// `(birth, death)` and then by position.
pub(crate) fn lifetime_order(points: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        (pb.1 - pb.0)
            .total_cmp(&(pa.1 - pa.0))
            .then(pa.0.total_cmp(&pb.0))
            .then(pa.1.total_cmp(&pb.1))
            .then(a.cmp(&b))
    });
    idx
}

/// `l^p m^q` and its partials `(∂/∂b, ∂/∂d)` with `l = d − b`, `m = (d + b)/2`.
pub(crate) fn persistence_term(b: f64, d: f64, p: f64, q: f64) -> (f64, f64, f64) {
    let (l, m) = (d - b, (d + b) / 2.0);
    let lp = l.powf(p);
    let mq = m.powf(q);
    // 0 · x^(−1) must stay 0 when an exponent vanishes.
    let dl = if p == 0.0 { 0.0 } else { p * l.powf(p - 1.0) * mq };
    let dm = if q == 0.0 { 0.0 } else { q * lp * m.powf(q - 1.0) };
    (lp * mq, -dl + 0.5 * dm, dl + 0.5 * dm)
}

pub(crate) fn transport_to_target(
    points: &[(f64, f64)],
    kind: &FunctionalKind,
) -> Result<Transport> {
    let FunctionalKind::WassersteinToTarget { target, dim, alpha, ground } = kind else {
        unreachable!("caller checked the kind")
    };
    let source = PersistenceDiagram::new(*dim, points.to_vec())?;
    let cfg = TransportConfig { ground: *ground, essential_cap: None };
    match alpha {
        None => wasserstein_exact(&source, target, &cfg),
        Some(a) => sinkhorn(&source, target, &SinkhornConfig { alpha: *a, ..Default::default() }, &cfg),
    }
}

/// Value of `spec` on a diagram. Essential points are ignored.
pub fn eval_functional(d: &PersistenceDiagram, spec: &DiagramFunctional) -> Result<f64> {
    spec.kind.validate()?;
    if d.dim() != spec.kind.dim() {
        return Err(Error::DimensionMismatch(d.dim(), spec.kind.dim()));
    }
    let finite = d.finite();
    match &spec.kind {
        FunctionalKind::TotalPersistence { p, q, i0, .. } => {
            let pts = finite.points();
            Ok(lifetime_order(pts)
                .into_iter()
                .skip(*i0)
                .map(|k| persistence_term(pts[k].0, pts[k].1, *p, *q).0)
                .sum())
        }
        kind @ FunctionalKind::WassersteinToTarget { .. } => {
            Ok(transport_to_target(finite.points(), kind)?.distance)
        }
    }
}
