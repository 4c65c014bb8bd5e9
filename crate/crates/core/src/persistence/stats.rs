use serde::Serialize;

use super::PersistenceDiagram;
use crate::error::{Error, Result};

/// Lifetime summary of one diagram. Means, maxima and the histogram cover
/// finite points only; essential points are counted separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifetimeStats {
    pub dim: usize,
    pub count: usize,
    pub essential_count: usize,
    pub mean_lifetime: f64,
    pub max_lifetime: f64,
    pub bin_width: f64,
    /// Left-closed bins `[k·w, (k+1)·w)`; the last bin also absorbs overflow.
    pub histogram: Vec<usize>,
}

pub fn lifetime_stats(d: &PersistenceDiagram, bins: usize, bin_width: f64) -> Result<LifetimeStats> {
    if bins == 0 || !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "histogram needs bins >= 1 and a positive width, got {bins} x {bin_width}"
        )));
    }
    let mut histogram = vec![0; bins];
    let (mut count, mut essential_count) = (0, 0);
    let (mut sum, mut max) = (0.0, 0.0f64);
    for &(b, dth) in d.points() {
        if dth.is_infinite() {
            essential_count += 1;
            continue;
        }
        let life = dth - b;
        count += 1;
        sum += life;
        max = max.max(life);
        let k = ((life / bin_width).floor() as usize).min(bins - 1);
        histogram[k] += 1;
    }
    Ok(LifetimeStats {
        dim: d.dim(),
        count,
        essential_count,
        mean_lifetime: if count > 0 { sum / count as f64 } else { 0.0 },
        max_lifetime: max,
        bin_width,
        histogram,
    })
}
