use super::gradient::{Objective, PipelineConfig};
use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeConfig {
    pub lr: f64,
    pub steps: usize,
    /// Snapshot period in steps; the final cloud is always kept.
    pub record_every: usize,
    pub pipeline: PipelineConfig,
}

/// Objective values of every step and periodic cloud snapshots.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub values: Vec<(usize, f64)>,
    pub snapshots: Vec<(usize, PointCloud)>,
}

impl Trajectory {
    pub fn initial_value(&self) -> Option<f64> {
        self.values.first().map(|v| v.1)
    }

    pub fn final_value(&self) -> Option<f64> {
        self.values.last().map(|v| v.1)
    }

    pub fn final_cloud(&self) -> Option<&PointCloud> {
        self.snapshots.last().map(|s| &s.1)
    }

    /// `step,value` lines, optionally preceded by `# ` comment lines.
    pub fn to_csv(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            for line in c.lines() {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push_str("step,value\n");
        for (s, v) in &self.values {
            out.push_str(&format!("{s},{v:?}\n"));
        }
        out
    }
}

/// Plain gradient descent (or ascent) on point coordinates, recomputing the
/// filtration, pairing and attribution at every step. Values are recorded
/// for steps `0..=steps`.
///
/// A non-finite value, gradient or coordinate, or a cloud whose RMS spread
/// about its centroid exceeds [`MAX_SPREAD_GROWTH`] times the initial
/// spread, aborts with [`Error::Diverged`]. The error carries the trajectory
/// up to the last valid state.
pub fn optimize(cloud: &PointCloud, objective: &Objective, cfg: &OptimizeConfig) -> Result<Trajectory> {
    if !(cfg.lr > 0.0 && cfg.lr.is_finite()) || cfg.steps == 0 || cfg.record_every == 0 {
        return Err(Error::InvalidArgument(format!(
            "need lr > 0, steps >= 1, record_every >= 1 (got {}, {}, {})",
            cfg.lr, cfg.steps, cfg.record_every
        )));
    }
    objective.validate(&cfg.pipeline)?;
    let sign = objective.direction.step_sign();
    let mut traj = Trajectory::default();
    let mut current = cloud.clone();
    let spread_limit = MAX_SPREAD_GROWTH * rms_spread(cloud);
    for step in 0..=cfg.steps {
        let r = objective.value_and_grad(&current, &cfg.pipeline)?;
        if !r.value.is_finite() || !r.grad.is_finite() {
            return Err(diverged(step, traj, current));
        }
        traj.values.push((step, r.value));
        if step == cfg.steps {
            traj.snapshots.push((step, current));
            break;
        }
        if step % cfg.record_every == 0 {
            traj.snapshots.push((step, current.clone()));
        }
        let next: Vec<f64> = current
            .coords()
            .iter()
            .zip(r.grad.data())
            .map(|(x, g)| x - sign * cfg.lr * g)
            .collect();
        match PointCloud::from_flat(current.dim(), next) {
            Ok(c) if spread_limit == 0.0 || rms_spread(&c) <= spread_limit => current = c,
            _ => return Err(diverged(step + 1, traj, current)),
        }
    }
    Ok(traj)
}

pub const MAX_SPREAD_GROWTH: f64 = 1e2;

fn rms_spread(cloud: &PointCloud) -> f64 {
    let (n, dim) = (cloud.n(), cloud.dim());
    let mut centroid = vec![0.0; dim];
    for p in cloud.points() {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x / n as f64;
        }
    }
    let ss: f64 = cloud.points().map(|p| p.iter().zip(&centroid).map(|(x, c)| (x - c).powi(2)).sum::<f64>()).sum();
    (ss / n as f64).sqrt()
}

fn diverged(step: usize, mut traj: Trajectory, last_valid: PointCloud) -> Error {
    let last_step = step.saturating_sub(1);
    if traj.snapshots.last().map(|s| s.0) != Some(last_step) {
        traj.snapshots.push((last_step, last_valid));
    }
    Error::Diverged { step, partial: Box::new(traj) }
}
