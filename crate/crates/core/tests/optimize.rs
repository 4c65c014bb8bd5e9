use phtk::distance::GroundMetric;
use phtk::pointcloud::{gen_circle, gen_gaussian_blob};
use phtk::topo_opt::{optimize, DiagramFunctional, FunctionalKind, Objective, OptimizeConfig, PipelineConfig};
use phtk::{Error, Persistence, PersistenceDiagram, Radius};

fn circle_target() -> PersistenceDiagram {
    let c = gen_circle(40, 1.0, 0.0, 0).unwrap();
    Persistence::compute(&c.pairwise_distances(), 2, Radius::Auto).unwrap().diagram(1)
}

fn to_circle() -> Objective {
    Objective::from(DiagramFunctional::minimize(FunctionalKind::WassersteinToTarget {
        target: circle_target(),
        dim: 1,
        alpha: None,
        ground: GroundMetric::LInf,
    }))
}

fn config(lr: f64, steps: usize) -> OptimizeConfig {
    OptimizeConfig { lr, steps, record_every: 10, pipeline: PipelineConfig::default() }
}

#[test]
fn zero_gradient_leaves_cloud_alone() {
    let blob = gen_gaussian_blob(20, 2, 1.0, 1).unwrap();
    let obj = Objective::from(DiagramFunctional::minimize(FunctionalKind::TotalPersistence {
        p: 0.0,
        q: 0.0,
        i0: 0,
        dim: 1,
    }));
    let t = optimize(&blob, &obj, &config(0.1, 25)).unwrap();
    assert_eq!(t.final_cloud().unwrap(), &blob);
    assert!(t.values.iter().all(|v| v.1 == t.values[0].1));
    assert_eq!(t.values.len(), 26);
    let steps: Vec<usize> = t.snapshots.iter().map(|s| s.0).collect();
    assert_eq!(steps, [0, 10, 20, 25]);
}

#[test]
fn blob_moves_toward_circle_diagram() {
    let blob = gen_gaussian_blob(40, 2, 1.0, 0).unwrap();
    let t = optimize(&blob, &to_circle(), &config(0.1, 200)).unwrap();
    let (v0, v1) = (t.initial_value().unwrap(), t.final_value().unwrap());
    assert!(v1 <= 0.5 * v0, "{v0} -> {v1}");
}

#[test]
fn ascent_increases_total_persistence() {
    let circle = gen_circle(40, 1.0, 0.05, 0).unwrap();
    let obj = Objective::from(DiagramFunctional::maximize(FunctionalKind::TotalPersistence {
        p: 1.0,
        q: 0.0,
        i0: 0,
        dim: 1,
    }));
    let t = optimize(&circle, &obj, &config(0.01, 100)).unwrap();
    assert!(t.final_value().unwrap() > t.initial_value().unwrap());
}

#[test]
fn huge_step_diverges_with_partial_trajectory() {
    let blob = gen_gaussian_blob(40, 2, 1.0, 0).unwrap();
    let err = optimize(&blob, &to_circle(), &config(1e3, 200)).unwrap_err();
    let Error::Diverged { step, partial } = err else { panic!("{err}") };
    assert!(step >= 1 && step <= 200);
    assert_eq!(partial.values.len(), step);
    let v0 = to_circle().value_and_grad(&blob, &PipelineConfig::default()).unwrap().value;
    assert_eq!(partial.values[0], (0, v0));
    assert_eq!(partial.snapshots.last().unwrap().0, step - 1);
}

#[test]
fn rejects_bad_config() {
    let blob = gen_gaussian_blob(10, 2, 1.0, 0).unwrap();
    for cfg in [config(0.0, 10), config(0.1, 0), OptimizeConfig { record_every: 0, ..config(0.1, 10) }] {
        assert!(matches!(optimize(&blob, &to_circle(), &cfg), Err(Error::InvalidArgument(_))));
    }
    let shallow = OptimizeConfig { pipeline: PipelineConfig { max_dim: 1, max_radius: Radius::Auto }, ..config(0.1, 10) };
    assert!(optimize(&blob, &to_circle(), &shallow).is_err());
}
