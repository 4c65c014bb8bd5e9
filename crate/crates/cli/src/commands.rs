use std::path::PathBuf;

use phtk::distance::{bottleneck, sinkhorn, wasserstein_exact, SinkhornConfig, TransportConfig};
use phtk::ingest::{crop_to_cloud, gen_structured_center_images, read_idx, shuffle_pixels};
use phtk::io::{diagram_to_json, read_diagram};
use phtk::persistence::lifetime_stats;
use phtk::pointcloud::{gen_circle, gen_disk_with_holes, gen_gaussian_blob, two_hole_layout};
use phtk::topo_opt::{optimize, FunctionalKind, Objective, OptimizeConfig, PipelineConfig, Trajectory};
use phtk::{CropRegion, CropSpec, Direction, Error, ImageSet, LifetimeStats, Persistence, PointCloud};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{config_line, csv_text, json_text, num, run_config, write_all};
use crate::{experiments, svg, CliError, CliResult};

/// Augmented problem size beyond which the exact solver gets slow.
const EXACT_WARN_SIZE: usize = 500;

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    let c = &cli.common;
    let cmd = &cli.command;
    match cmd {
        Command::Gen(a) => gen(c, a, run_config(cmd, c, a)),
        Command::Ingest(a) => ingest(c, a, run_config(cmd, c, a)),
        Command::Persist(a) => persist(c, a, run_config(cmd, c, a)),
        Command::Distance(a) => distance(c, a, run_config(cmd, c, a)),
        Command::Lifetimes(a) => lifetimes(c, a, run_config(cmd, c, a)),
        Command::Optimize(a) => optimize_cmd(c, a, run_config(cmd, c, a)),
        Command::Exp1(a) => experiments::exp1(c, a, run_config(cmd, c, a)),
        Command::Exp2(a) => experiments::exp2(c, a, run_config(cmd, c, a)),
    }
}

pub fn generate(g: &Generator, seed: u64) -> CliResult<PointCloud> {
    let shape = g.shape.ok_or_else(|| CliError::Config("no --shape given".into()))?;
    Ok(match shape {
        Shape::Circle => gen_circle(g.n, g.radius, g.noise_sd, seed)?,
        Shape::Blob => gen_gaussian_blob(g.n, g.dim, g.sd, seed)?,
        Shape::DiskHoles => gen_disk_with_holes(g.n, &two_hole_layout(), seed)?,
    })
}

fn load_source(s: &Source, seed: u64) -> CliResult<PointCloud> {
    match (&s.input, s.generator.shape) {
        (Some(path), _) => Ok(PointCloud::read_csv(path)?),
        (None, Some(_)) => generate(&s.generator, seed),
        (None, None) => Err(CliError::Config("give --input FILE or --shape".into())),
    }
}

pub fn load_images(src: &ImageSource, seed: u64) -> CliResult<ImageSet> {
    match &src.input {
        Some(path) => Ok(read_idx(path)?),
        None => Ok(gen_structured_center_images(src.synthetic_count, src.synthetic_side, seed)?),
    }
}

pub fn crop_spec(region: Region, size: usize) -> CropSpec {
    let region = match region {
        Region::Center => CropRegion::Center,
        Region::Corner => CropRegion::CornerTopLeft,
    };
    CropSpec::new(region, size)
}

fn gen(c: &Common, a: &GenArgs, config: Value) -> CliResult<()> {
    let cloud = generate(&a.generator, c.seed)?;
    let text = cloud.to_csv_string(Some(&config_line(&config)));
    write_all(&[(c.out_dir.join(&a.output), text)])
}

fn ingest(c: &Common, a: &IngestArgs, config: Value) -> CliResult<()> {
    let images = load_images(&a.images, c.seed)?;
    let mut cloud = crop_to_cloud(&images, crop_spec(a.region, a.crop_size), a.sample_n, a.noise_sd, c.seed)?;
    if a.shuffle {
        cloud = shuffle_pixels(&cloud, phtk::rng::derive_seed(c.seed, 1));
    }
    let text = cloud.to_csv_string(Some(&config_line(&config)));
    write_all(&[(c.out_dir.join(&a.output), text)])
}

pub fn stats_header(bins: usize) -> Vec<String> {
    let mut h: Vec<String> =
        ["dim", "count", "essential_count", "mean_lifetime", "max_lifetime", "bin_width"].map(String::from).into();
    h.extend((0..bins).map(|k| format!("bin_{k}")));
    h
}

pub fn stats_row(s: &LifetimeStats) -> Vec<String> {
    let mut r = vec![
        s.dim.to_string(),
        s.count.to_string(),
        s.essential_count.to_string(),
        num(s.mean_lifetime),
        num(s.max_lifetime),
        num(s.bin_width),
    ];
    r.extend(s.histogram.iter().map(usize::to_string));
    r
}

fn stats_csv(config: &Value, stats: &[LifetimeStats], bins: usize) -> String {
    let header = stats_header(bins);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = stats.iter().map(stats_row).collect();
    csv_text(config, &header, &rows)
}

fn persist(c: &Common, a: &PersistArgs, config: Value) -> CliResult<()> {
    let cloud = load_source(&a.source, c.seed)?;
    let ph = Persistence::compute(&cloud.pairwise_distances(), c.max_dim, c.max_radius)?;
    let mut files = Vec::new();
    let mut stats = Vec::new();
    for dim in ph.complete_dims() {
        // Essential classes are kept in the file and in the statistics.
        let d = phtk::persistence::diagram(&ph.pairs, dim, false, true);
        stats.push(lifetime_stats(&d, a.histogram.bins, a.histogram.bin_width)?);
        files.push((c.out_dir.join(format!("diagram_dim{dim}.json")), json_text(&diagram_to_json(&d, Some(&config)))));
    }
    files.push((c.out_dir.join("lifetimes.csv"), stats_csv(&config, &stats, a.histogram.bins)));
    write_all(&files)
}

fn transport_config(t: &crate::args::Transport) -> TransportConfig {
    TransportConfig { ground: t.ground, essential_cap: t.essential_cap }
}

fn distance(c: &Common, a: &DistanceArgs, config: Value) -> CliResult<()> {
    let (mut da, mut db) = (read_diagram(&a.a)?, read_diagram(&a.b)?);
    let cfg = transport_config(&a.transport);
    // Without a cap, essential classes are left out of the comparison.
    if cfg.essential_cap.is_none() {
        (da, db) = (da.finite(), db.finite());
    }
    let (value, converged, iters) = match a.method {
        Method::Exact => {
            if da.len() + db.len() > EXACT_WARN_SIZE {
                eprintln!(
                    "phtk: warning: {} augmented points; the exact solver is cubic, consider --method sinkhorn",
                    da.len() + db.len()
                );
            }
            (wasserstein_exact(&da, &db, &cfg)?.distance, true, 0)
        }
        Method::Bottleneck => (bottleneck(&da, &db, &cfg)?, true, 0),
        Method::Sinkhorn => {
            let sk = SinkhornConfig { alpha: a.alpha, max_iters: a.max_iters, tol: a.tol };
            let t = sinkhorn(&da, &db, &sk, &cfg)?;
            if !t.converged {
                eprintln!(
                    "phtk: warning: sinkhorn did not converge in {} iterations (marginal error {:e})",
                    t.iterations, t.marginal_violation
                );
            }
            (t.distance, t.converged, t.iterations)
        }
    };
    let record = json!({
        "method": a.method.as_str(),
        "dim": da.dim(),
        "distance": value,
        "converged": converged,
        "iters": iters,
        "config": config,
    });
    let text = json_text(&record);
    print!("{text}");
    write_all(&[(c.out_dir.join(&a.output), text)])
}

fn lifetimes(c: &Common, a: &LifetimesArgs, config: Value) -> CliResult<()> {
    let stats = a
        .diagrams
        .iter()
        .map(|p| Ok(lifetime_stats(&read_diagram(p)?, a.histogram.bins, a.histogram.bin_width)?))
        .collect::<CliResult<Vec<_>>>()?;
    write_all(&[(c.out_dir.join(&a.output), stats_csv(&config, &stats, a.histogram.bins))])
}

fn objective(a: &OptimizeArgs) -> CliResult<Objective> {
    if a.dims.is_empty() {
        return Err(CliError::Config("--dims is empty".into()));
    }
    let weights = if a.weights.is_empty() { vec![1.0; a.dims.len()] } else { a.weights.clone() };
    if weights.len() != a.dims.len() {
        return Err(CliError::Config(format!("{} weights for {} dims", weights.len(), a.dims.len())));
    }
    let mut terms = Vec::new();
    for (&dim, &w) in a.dims.iter().zip(&weights) {
        let kind = match a.functional {
            FunctionalName::Total => FunctionalKind::TotalPersistence { p: a.p, q: a.q, i0: a.i0, dim },
            FunctionalName::Wasserstein => {
                let mut found = None;
                for path in &a.target {
                    let d = read_diagram(path)?;
                    if d.dim() == dim {
                        found = Some(d.finite());
                    }
                }
                let target =
                    found.ok_or_else(|| CliError::Config(format!("no --target diagram of dim {dim}")))?;
                FunctionalKind::WassersteinToTarget { target, dim, alpha: a.alpha, ground: a.ground }
            }
        };
        terms.push((w, kind));
    }
    let direction = match a.direction {
        DirectionArg::Min => Direction::Minimize,
        DirectionArg::Max => Direction::Maximize,
    };
    Ok(Objective { terms, direction })
}

fn trajectory_files(c: &Common, config: &Value, t: &Trajectory) -> Vec<(PathBuf, String)> {
    let line = config_line(config);
    let mut files = vec![(c.out_dir.join("trajectory.csv"), t.to_csv(Some(&line)))];
    for (step, cloud) in &t.snapshots {
        files.push((c.out_dir.join("snapshots").join(format!("step_{step:06}.csv")), cloud.to_csv_string(Some(&line))));
    }
    let points: Vec<(f64, f64)> = t.values.iter().map(|&(s, v)| (s as f64, v)).collect();
    files.push((c.out_dir.join("value.svg"), svg::line_chart("Objective value", "step", "value", &points, &line)));
    files
}

fn optimize_cmd(c: &Common, a: &OptimizeArgs, config: Value) -> CliResult<()> {
    let cloud = load_source(&a.source, c.seed)?;
    let obj = objective(a)?;
    let cfg = OptimizeConfig {
        lr: a.lr,
        steps: a.steps,
        record_every: a.record_every,
        pipeline: PipelineConfig { max_dim: c.max_dim, max_radius: c.max_radius },
    };
    match optimize(&cloud, &obj, &cfg) {
        Ok(t) => write_all(&trajectory_files(c, &config, &t)),
        Err(Error::Diverged { step, partial }) => {
            write_all(&trajectory_files(c, &config, &partial))?;
            Err(CliError::Numerical(format!(
                "optimization diverged at step {step}; partial trajectory written to {}",
                c.out_dir.display()
            )))
        }
        Err(e) => Err(e.into()),
    }
}
