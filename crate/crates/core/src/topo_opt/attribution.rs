use crate::filtration::{Filtration, Simplex};
use crate::persistence::PersistencePair;
use crate::pointcloud::DistanceMatrix;

/// Vertex pair `(u, v)`, `u < v`, whose distance equals a simplex's
/// filtration value.
pub type Edge = (u32, u32);

/// The longest edge of `s`; ties go to the lexicographically smallest vertex
/// pair. Vertices have no governing edge.
pub fn governing_edge(s: &Simplex, dm: &DistanceMatrix) -> Option<Edge> {
    let v = s.vertices();
    let mut best: Option<(f64, Edge)> = None;
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            let d = dm.get(v[a] as usize, v[b] as usize);
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, (v[a], v[b])));
            }
        }
    }
    best.map(|(_, e)| e)
}

/// Creator / destroyer simplices of one pair and the edges that govern
/// its birth and death values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attribution {
    pub creator: usize,
    pub destroyer: Option<usize>,
    pub birth_edge: Option<Edge>,
    pub death_edge: Option<Edge>,
}

/// One [`Attribution`] per persistence pair, in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAttribution {
    pub entries: Vec<Attribution>,
}

pub fn attribute(pairs: &[PersistencePair], f: &Filtration, dm: &DistanceMatrix) -> PairAttribution {
    let entries = pairs
        .iter()
        .map(|p| Attribution {
            creator: p.creator,
            destroyer: p.destroyer,
            birth_edge: governing_edge(f.simplex(p.creator), dm),
            death_edge: p.destroyer.and_then(|t| governing_edge(f.simplex(t), dm)),
        })
        .collect();
    PairAttribution { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Radius;
    use crate::persistence::Persistence;
    use crate::pointcloud::{gen_gaussian_blob, PointCloud};

    #[test]
    fn dim0_pair_is_governed_by_its_merging_edge() {
        let dm = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap().pairwise_distances();
        let p = Persistence::compute(&dm, 1, Radius::Auto).unwrap();
        let att = attribute(&p.pairs, &p.filtration, &dm);
        let finite = p.pairs.iter().position(|q| !q.is_essential()).unwrap();
        assert_eq!(att.entries[finite].birth_edge, None);
        assert_eq!(att.entries[finite].death_edge, Some((0, 1)));
    }

    #[test]
    fn unit_square_loop() {
        let dm = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]])
            .unwrap()
            .pairwise_distances();
        let p = Persistence::compute(&dm, 2, Radius::Auto).unwrap();
        let att = attribute(&p.pairs, &p.filtration, &dm);
        let k = p.pairs.iter().position(|q| q.dim == 1 && q.death > q.birth).unwrap();
        let a = att.entries[k];
        assert_eq!(a.birth_edge, Some((2, 3)));
        let death_edge = a.death_edge.unwrap();
        assert!(death_edge == (0, 2) || death_edge == (1, 3));
        assert_eq!(dm.get(death_edge.0 as usize, death_edge.1 as usize), 2f64.sqrt());
    }

    #[test]
    fn governing_edges_realize_values() {
        for seed in 0..10 {
            let dm = gen_gaussian_blob(10, 2, 1.0, seed).unwrap().pairwise_distances();
            let p = Persistence::compute(&dm, 2, Radius::Auto).unwrap();
            for s in 0..p.filtration.len() {
                let simplex = p.filtration.simplex(s);
                match governing_edge(simplex, &dm) {
                    None => assert_eq!(simplex.dim(), 0),
                    Some((u, v)) => {
                        assert!(simplex.vertices().contains(&u) && simplex.vertices().contains(&v));
                        let d = dm.get(u as usize, v as usize);
                        assert!((d - p.filtration.value(s)).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn ties_take_the_smallest_pair() {
        let dm = crate::pointcloud::DistanceMatrix::from_entries(
            3,
            vec![0., 1., 1., 1., 0., 1., 1., 1., 0.],
        )
        .unwrap();
        assert_eq!(governing_edge(&Simplex::new(&[0, 1, 2]).unwrap(), &dm), Some((0, 1)));
    }
}
