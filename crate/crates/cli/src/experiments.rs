//! Monte-Carlo crop experiments on image sets.
//!
//! `exp1` compares lifetime statistics of centre and corner crops of the same
//! sampled images. `exp2` draws two disjoint image samples per repeat and
//! measures the 1-Wasserstein distance between their diagrams for centre,
//! corner and pixel-shuffled centre crops.

use phtk::distance::{wasserstein_exact, TransportConfig};
use phtk::ingest::{crop_indices_to_cloud, crop_to_cloud, sample_indices, shuffle_pixels};
use phtk::persistence::{diagram, lifetime_stats};
use phtk::rng::derive_seed;
use phtk::{ImageSet, LifetimeStats, Persistence, PointCloud};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Common, Exp1Args, Exp2Args, Region};
use crate::commands::{crop_spec, load_images, stats_header, stats_row};
use crate::output::{config_line, csv_text, json_text, num, write_all};
use crate::{svg, CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; absent for a single repeat.
    pub sd: Option<f64>,
}

fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.len() > 1).then(|| (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    Summary { mean, sd }
}

#[derive(Debug, Clone, Serialize)]
pub struct LifetimeCondition {
    pub condition: String,
    /// `per_repeat[r][k]`: statistics of dimension `k` in repeat `r`.
    pub per_repeat: Vec<Vec<LifetimeStats>>,
    /// Mean lifetime per dimension across repeats.
    pub mean_lifetime: Vec<Summary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Exp1Report {
    pub config: Value,
    pub conditions: Vec<LifetimeCondition>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceCondition {
    pub condition: String,
    /// `per_repeat[r][k]`: distance between the two samples' dim-`k` diagrams.
    pub per_repeat: Vec<Vec<f64>>,
    pub distance: Vec<Summary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Exp2Report {
    pub config: Value,
    pub conditions: Vec<DistanceCondition>,
}

fn check_repeats(repeats: usize) -> CliResult<()> {
    if repeats == 0 {
        return Err(CliError::Config("--repeats must be at least 1".into()));
    }
    Ok(())
}

fn persistence(cloud: &PointCloud, c: &Common) -> CliResult<Persistence> {
    Ok(Persistence::compute(&cloud.pairwise_distances(), c.max_dim, c.max_radius)?)
}

pub fn exp1_report(c: &Common, a: &Exp1Args, config: Value) -> CliResult<Exp1Report> {
    check_repeats(a.repeats)?;
    let images = load_images(&a.images, c.seed)?;
    if a.n > images.count() {
        return Err(CliError::Config(format!("need {} images per repeat, dataset has {}", a.n, images.count())));
    }
    let regions = [Region::Center, Region::Corner];
    let jobs: Vec<(usize, Region)> = (0..a.repeats).flat_map(|r| regions.map(|g| (r, g))).collect();
    // Both regions of a repeat crop the same images with the same noise.
    let results = jobs
        .par_iter()
        .map(|&(r, region)| {
            let cloud =
                crop_to_cloud(&images, crop_spec(region, a.crop_size), a.n, a.noise_sd, derive_seed(c.seed, r as u64))?;
            let ph = persistence(&cloud, c)?;
            ph.complete_dims()
                .map(|k| Ok(lifetime_stats(&diagram(&ph.pairs, k, false, true), a.histogram.bins, a.histogram.bin_width)?))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let conditions = regions
        .iter()
        .enumerate()
        .map(|(g, region)| {
            let per_repeat: Vec<Vec<LifetimeStats>> = (0..a.repeats).map(|r| results[r * 2 + g].clone()).collect();
            let dims = per_repeat[0].len();
            let mean_lifetime = (0..dims)
                .map(|k| summarize(&per_repeat.iter().map(|s| s[k].mean_lifetime).collect::<Vec<_>>()))
                .collect();
            LifetimeCondition { condition: region_name(*region).into(), per_repeat, mean_lifetime }
        })
        .collect();
    Ok(Exp1Report { config, conditions })
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::Center => "center",
        Region::Corner => "corner",
    }
}

pub fn exp1(c: &Common, a: &Exp1Args, config: Value) -> CliResult<()> {
    let report = exp1_report(c, a, config.clone())?;
    let line = config_line(&config);
    let mut header = vec!["condition".to_string(), "repeat".to_string()];
    header.extend(stats_header(a.histogram.bins));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    for cond in &report.conditions {
        for (r, stats) in cond.per_repeat.iter().enumerate() {
            for s in stats {
                let mut row = vec![cond.condition.clone(), r.to_string()];
                row.extend(stats_row(s));
                rows.push(row);
            }
        }
    }
    let mut files = vec![
        (c.out_dir.join("exp1_report.json"), json_text(&serde_json::to_value(&report).expect("serializable"))),
        (c.out_dir.join("exp1_lifetimes.csv"), csv_text(&config, &header, &rows)),
    ];
    let dims = report.conditions[0].per_repeat[0].len();
    let w = a.histogram.bin_width;
    let categories: Vec<String> = (0..a.histogram.bins).map(|b| format!("{:.2}", b as f64 * w)).collect();
    for k in 0..dims {
        let series: Vec<(String, Vec<f64>)> = report
            .conditions
            .iter()
            .map(|cond| {
                let mut counts = vec![0.0; a.histogram.bins];
                for stats in &cond.per_repeat {
                    for (acc, &n) in counts.iter_mut().zip(&stats[k].histogram) {
                        *acc += n as f64;
                    }
                }
                (cond.condition.clone(), counts)
            })
            .collect();
        let chart = svg::bar_chart(
            &format!("H{k} lifetime frequency over {} repeats", a.repeats),
            "lifetime (bin start)",
            "count",
            &categories,
            &series,
            &line,
        );
        files.push((c.out_dir.join(format!("exp1_hist_dim{k}.svg")), chart));
    }
    write_all(&files)
}

const EXP2_CONDITIONS: [&str; 3] = ["center", "corner", "shuffle"];

fn exp2_clouds(
    images: &ImageSet,
    a: &Exp2Args,
    seed: u64,
    condition: &str,
) -> CliResult<(PointCloud, PointCloud)> {
    let picked = sample_indices(images.count(), if a.same_sample { a.n } else { 2 * a.n }, derive_seed(seed, 0))?;
    let (first, second) = if a.same_sample { (&picked[..], &picked[..]) } else { picked.split_at(a.n) };
    let noise_b = if a.same_sample { derive_seed(seed, 1) } else { derive_seed(seed, 2) };
    let region = if condition == "corner" { Region::Corner } else { Region::Center };
    let spec = crop_spec(region, a.crop_size);
    let x = crop_indices_to_cloud(images, first, spec, a.noise_sd, derive_seed(seed, 1))?;
    let y = crop_indices_to_cloud(images, second, spec, a.noise_sd, noise_b)?;
    if condition == "shuffle" {
        let shuffle_b = if a.same_sample { derive_seed(seed, 3) } else { derive_seed(seed, 4) };
        return Ok((shuffle_pixels(&x, derive_seed(seed, 3)), shuffle_pixels(&y, shuffle_b)));
    }
    Ok((x, y))
}

pub fn exp2_report(c: &Common, a: &Exp2Args, config: Value) -> CliResult<Exp2Report> {
    check_repeats(a.repeats)?;
    let images = load_images(&a.images, c.seed)?;
    let needed = if a.same_sample { a.n } else { 2 * a.n };
    if a.n == 0 || needed > images.count() {
        return Err(CliError::Config(format!(
            "need {needed} distinct images per repeat, dataset has {}",
            images.count()
        )));
    }
    let cfg = TransportConfig { ground: a.transport.ground, essential_cap: a.transport.essential_cap };
    let jobs: Vec<(usize, &str)> = (0..a.repeats).flat_map(|r| EXP2_CONDITIONS.map(|g| (r, g))).collect();
    let results = jobs
        .par_iter()
        .map(|&(r, condition)| {
            let (x, y) = exp2_clouds(&images, a, derive_seed(c.seed, r as u64), condition)?;
            let (px, py) = (persistence(&x, c)?, persistence(&y, c)?);
            px.complete_dims()
                .map(|k| Ok(wasserstein_exact(&px.diagram(k), &py.diagram(k), &cfg)?.distance))
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let conditions = EXP2_CONDITIONS
        .iter()
        .enumerate()
        .map(|(g, name)| {
            let per_repeat: Vec<Vec<f64>> =
                (0..a.repeats).map(|r| results[r * EXP2_CONDITIONS.len() + g].clone()).collect();
            let distance = (0..per_repeat[0].len())
                .map(|k| summarize(&per_repeat.iter().map(|d| d[k]).collect::<Vec<_>>()))
                .collect();
            DistanceCondition { condition: (*name).into(), per_repeat, distance }
        })
        .collect();
    Ok(Exp2Report { config, conditions })
}

pub fn exp2(c: &Common, a: &Exp2Args, config: Value) -> CliResult<()> {
    let report = exp2_report(c, a, config.clone())?;
    let line = config_line(&config);
    let mut rows = Vec::new();
    for cond in &report.conditions {
        for (r, ds) in cond.per_repeat.iter().enumerate() {
            for (k, d) in ds.iter().enumerate() {
                rows.push(vec![cond.condition.clone(), r.to_string(), k.to_string(), num(*d)]);
            }
        }
    }
    let dims = report.conditions[0].per_repeat[0].len();
    let categories: Vec<String> = (0..dims).map(|k| format!("H{k}")).collect();
    let series: Vec<(String, Vec<f64>)> = report
        .conditions
        .iter()
        .map(|cond| (cond.condition.clone(), cond.distance.iter().map(|s| s.mean).collect()))
        .collect();
    let chart = svg::bar_chart(
        &format!("Mean 1-Wasserstein distance between samples ({} repeats)", a.repeats),
        "homology dimension",
        "distance",
        &categories,
        &series,
        &line,
    );
    let summary = json!(report);
    write_all(&[
        (c.out_dir.join("exp2_report.json"), json_text(&summary)),
        (c.out_dir.join("exp2_distances.csv"), csv_text(&config, &["condition", "repeat", "dim", "distance"], &rows)),
        (c.out_dir.join("exp2_distances.svg"), chart),
    ])
}
