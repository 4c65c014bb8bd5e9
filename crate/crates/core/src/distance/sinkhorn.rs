//! Entropy-regularized transport between diagrams, by log-domain Sinkhorn
//! scaling on the augmented cost matrix with unit marginals.
//!
//! The regularization is annealed geometrically from the largest cost down
//! to `alpha` (warm-starting the dual potentials at every stage); only the
//! final stage is run to the requested tolerance.

use super::{
    augmented_cost, check_dims, finite_points, GroundMetric, Transport, TransportConfig, TransportPlan,
};
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkhornConfig {
    /// Entropic regularization strength.
    pub alpha: f64,
    pub max_iters: usize,
    /// Target for the largest absolute marginal error.
    pub tol: f64,
}

impl Default for SinkhornConfig {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            max_iters: 100_000,
            tol: 1e-6,
        }
    }
}

/// Anneal stops once the marginal error at an intermediate strength falls
/// below this.
const STAGE_TOL: f64 = 1e-3;

pub fn sinkhorn(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    cfg: &SinkhornConfig,
    transport: &TransportConfig,
) -> Result<Transport> {
    check_dims(d1, d2)?;
    if !(cfg.alpha > 0.0 && cfg.alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {}", cfg.alpha)));
    }
    if !(cfg.tol > 0.0) || cfg.max_iters == 0 {
        return Err(Error::InvalidArgument("sinkhorn needs tol > 0 and max_iters >= 1".into()));
    }
    let p1 = finite_points(d1, transport.essential_cap)?;
    let p2 = finite_points(d2, transport.essential_cap)?;
    let cost = augmented_cost(&p1, &p2, transport.ground);
    let n = cost.size();
    if n == 0 {
        return Ok(Transport {
            distance: 0.0,
            plan: TransportPlan::Coupling { size: 0, weights: Vec::new() },
            cost,
            converged: true,
            iterations: 0,
            marginal_violation: 0.0,
        });
    }

    let (m1, m2) = (cost.m1, cost.m2);
    let compact = Compact::new(&p1, &p2, transport.ground);
    let (rows, cols) = (compact.rows, compact.cols);
    let k = &compact.cost;
    let (log_a, log_b): (Vec<f64>, Vec<f64>) =
        (compact.a.iter().map(|x| x.ln()).collect(), compact.b.iter().map(|x| x.ln()).collect());
    let mut f = vec![0.0; rows];
    let mut g = vec![0.0; cols];
    let mut f_next = vec![0.0; rows];
    let c_max = k.iter().copied().fold(0.0, f64::max);
    let mut eps = c_max.max(cfg.alpha);
    let mut iterations = 0;
    let mut violation;
    loop {
        let last_stage = eps <= cfg.alpha;
        let stage_tol = if last_stage { cfg.tol } else { STAGE_TOL.max(cfg.tol) };
        loop {
            violation = update_rows(k, cols, &g, &log_a, eps, &f, &mut f_next);
            if (iterations > 0 && violation <= stage_tol) || iterations >= cfg.max_iters {
                break;
            }
            iterations += 1;
            std::mem::swap(&mut f, &mut f_next);
            update_cols(k, rows, cols, &f, &log_b, eps, &mut g);
        }
        if last_stage || iterations >= cfg.max_iters {
            break;
        }
        eps = (eps * 0.5).max(cfg.alpha);
    }

    let converged = eps <= cfg.alpha && violation <= cfg.tol;
    let compact_plan: Vec<f64> = (0..rows * cols)
        .map(|ij| ((f[ij / cols] + g[ij % cols] - k[ij]) / eps).exp())
        .collect();
    let n = m1 + m2;
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        let (ci, ri) = if i < m1 { (i, 1.0) } else { (m1, m2 as f64) };
        for j in 0..n {
            let (cj, rj) = if j < m2 { (j, 1.0) } else { (m2, m1 as f64) };
            weights[i * n + j] = compact_plan[ci * cols + cj] / (ri * rj);
        }
    }
    let mut t = Transport {
        distance: 0.0,
        plan: TransportPlan::Coupling { size: n, weights },
        cost,
        converged,
        iterations,
        marginal_violation: violation,
    };
    t.distance = t.plan_cost();
    Ok(t)
}

/// The augmented problem with all diagonal copies of a diagram merged into
/// one slot whose mass is the copy count. Sinkhorn iterates on identical rows
/// stay identical, so this is the same computation on a smaller matrix.
struct Compact {
    rows: usize,
    cols: usize,
    cost: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Compact {
    fn new(p1: &[(f64, f64)], p2: &[(f64, f64)], ground: GroundMetric) -> Self {
        let (m1, m2) = (p1.len(), p2.len());
        let rows = m1 + usize::from(m2 > 0);
        let cols = m2 + usize::from(m1 > 0);
        let mut cost = vec![0.0; rows * cols];
        for (i, &p) in p1.iter().enumerate() {
            for (j, &q) in p2.iter().enumerate() {
                cost[i * cols + j] = ground.cost(p, q);
            }
            cost[i * cols + m2] = ground.diagonal_cost(p);
        }
        if m2 > 0 {
            for (j, &q) in p2.iter().enumerate() {
                cost[m1 * cols + j] = ground.diagonal_cost(q);
            }
        }
        let mut a = vec![1.0; rows];
        let mut b = vec![1.0; cols];
        if m2 > 0 {
            a[m1] = m2 as f64;
        }
        if m1 > 0 {
            b[m2] = m1 as f64;
        }
        Self { rows, cols, cost, a, b }
    }
}

/// `f_i = ε log a_i − ε log Σ_j exp((g_j − C_ij)/ε)` into `next`. Returns the
/// largest relative row-marginal error of the plan built from `f`.
fn update_rows(
    c: &[f64],
    cols: usize,
    g: &[f64],
    log_a: &[f64],
    eps: f64,
    f: &[f64],
    next: &mut [f64],
) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, fi) in next.iter_mut().enumerate() {
        let row = &c[i * cols..(i + 1) * cols];
        let m = row.iter().zip(g).map(|(cij, gj)| gj - cij).fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = row.iter().zip(g).map(|(cij, gj)| ((gj - cij - m) / eps).exp()).sum();
        *fi = eps * log_a[i] - (m + eps * s.ln());
        worst = worst.max((((f[i] - *fi) / eps).exp() - 1.0).abs());
    }
    worst
}

fn update_cols(c: &[f64], rows: usize, cols: usize, f: &[f64], log_b: &[f64], eps: f64, g: &mut [f64]) {
    for (j, gj) in g.iter_mut().enumerate() {
        let m = (0..rows).map(|i| f[i] - c[i * cols + j]).fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = (0..rows).map(|i| ((f[i] - c[i * cols + j] - m) / eps).exp()).sum();
        *gj = eps * log_b[j] - (m + eps * s.ln());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::wasserstein_exact;

    fn dg(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(1, points.to_vec()).unwrap()
    }

    fn run(a: &PersistenceDiagram, b: &PersistenceDiagram, alpha: f64) -> Transport {
        let cfg = SinkhornConfig { alpha, ..Default::default() };
        sinkhorn(a, b, &cfg, &TransportConfig::default()).unwrap()
    }

    #[test]
    fn identical_diagrams_vanish_with_alpha() {
        let d = dg(&[(0.0, 1.0), (0.2, 0.9), (0.5, 2.0)]);
        let t = run(&d, &d, 1e-3);
        assert!(t.converged);
        assert!(t.distance < 1e-2, "{}", t.distance);
        assert!(run(&d, &d, 0.1).distance > t.distance);
    }

    #[test]
    fn close_to_exact_on_simple_pair() {
        let (a, b) = (dg(&[(0.0, 1.0)]), dg(&[(0.0, 2.0)]));
        let t = run(&a, &b, 0.01);
        let exact = wasserstein_exact(&a, &b, &TransportConfig::default()).unwrap().distance;
        assert_eq!(exact, 1.0);
        assert!((t.distance - exact).abs() / exact <= 0.05);
        assert!(t.marginal_violation <= 1e-6);
    }

    #[test]
    fn plan_marginals() {
        let (a, b) = (dg(&[(0.0, 1.0), (0.3, 0.8)]), dg(&[(0.1, 1.4)]));
        let t = run(&a, &b, 0.05);
        let TransportPlan::Coupling { size, weights } = &t.plan else { panic!() };
        for i in 0..*size {
            let row: f64 = weights[i * size..(i + 1) * size].iter().sum();
            let col: f64 = (0..*size).map(|k| weights[k * size + i]).sum();
            assert!((row - 1.0).abs() <= 1e-6 && (col - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn non_convergence_is_flagged() {
        let (a, b) = (dg(&[(0.0, 1.0), (0.3, 0.8)]), dg(&[(0.1, 1.4)]));
        let cfg = SinkhornConfig { alpha: 1e-3, max_iters: 2, tol: 1e-12 };
        let t = sinkhorn(&a, &b, &cfg, &TransportConfig::default()).unwrap();
        assert!(!t.converged);
        assert_eq!(t.iterations, 2);
        assert!(t.distance.is_finite());
    }

    #[test]
    fn rejects_bad_alpha() {
        let d = dg(&[]);
        let cfg = SinkhornConfig { alpha: 0.0, ..Default::default() };
        assert!(sinkhorn(&d, &d, &cfg, &TransportConfig::default()).is_err());
    }
}
