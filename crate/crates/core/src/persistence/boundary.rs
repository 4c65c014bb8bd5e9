use std::collections::HashMap;

use crate::filtration::{Filtration, Simplex};

/// Z/2 boundary matrix of a filtration in compressed-column form.
///
/// Column `j` lists, in ascending order, the filtration indices of the
/// codimension-1 faces of simplex `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    col_start: Vec<usize>,
    rows: Vec<u32>,
}

impl BoundaryMatrix {
    pub fn n_cols(&self) -> usize {
        self.col_start.len() - 1
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.rows[self.col_start[j]..self.col_start[j + 1]]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.n_cols()).map(|j| self.column(j))
    }
}

/// Maps simplices back to filtration positions. Vertices and edges use dense
/// tables; higher simplices go through a hash map.
pub(crate) struct SimplexIndex {
    n: usize,
    vertex: Vec<u32>,
    edge: Vec<u32>,
    higher: HashMap<Simplex, u32>,
}

impl SimplexIndex {
    pub(crate) fn new(f: &Filtration) -> Self {
        let n = f
            .simplices()
            .iter()
            .filter(|s| s.dim() == 0)
            .map(|s| s.vertices()[0] as usize + 1)
            .max()
            .unwrap_or(0);
        let mut vertex = vec![u32::MAX; n];
        let mut edge = vec![u32::MAX; n * n];
        let mut higher = HashMap::new();
        for (k, s) in f.simplices().iter().enumerate() {
            let v = s.vertices();
            match v.len() {
                1 => vertex[v[0] as usize] = k as u32,
                2 => edge[v[0] as usize * n + v[1] as usize] = k as u32,
                _ => {
                    // Only faces of top-dimensional simplices are ever looked up.
                    if s.dim() < f.max_dim() {
                        higher.insert(s.clone(), k as u32);
                    }
                }
            }
        }
        Self { n, vertex, edge, higher }
    }

    pub(crate) fn get(&self, s: &Simplex) -> Option<usize> {
        let v = s.vertices();
        let k = match v.len() {
            1 => *self.vertex.get(v[0] as usize)?,
            2 => *self.edge.get(v[0] as usize * self.n + v[1] as usize)?,
            _ => *self.higher.get(s)?,
        };
        (k != u32::MAX).then_some(k as usize)
    }
}

pub fn boundary_matrix(f: &Filtration) -> BoundaryMatrix {
    let index = SimplexIndex::new(f);
    let mut col_start = Vec::with_capacity(f.len() + 1);
    col_start.push(0);
    let mut rows = Vec::new();
    for s in f.simplices() {
        let start = rows.len();
        rows.extend(s.faces().map(|face| {
            index
                .get(&face)
                .expect("filtration is closed under faces") as u32
        }));
        rows[start..].sort_unstable();
        col_start.push(rows.len());
    }
    BoundaryMatrix { col_start, rows }
}

/// Symmetric difference of two ascending index lists, written into `out`.
pub(crate) fn xor_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{build_rips, Radius};
    use crate::pointcloud::{gen_gaussian_blob, DistanceMatrix, PointCloud};

    #[test]
    fn single_vertex_has_empty_column() {
        let dm = DistanceMatrix::from_entries(1, vec![0.0]).unwrap();
        let bm = boundary_matrix(&build_rips(&dm, 2, Radius::Auto).unwrap());
        assert_eq!(bm.n_cols(), 1);
        assert!(bm.column(0).is_empty());
    }

    #[test]
    fn edge_column() {
        let dm = DistanceMatrix::from_entries(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let bm = boundary_matrix(&build_rips(&dm, 1, Radius::Auto).unwrap());
        assert_eq!(bm.column(2), &[0, 1]);
    }

    #[test]
    fn hollow_triangle_cycle_has_no_boundary() {
        let cloud = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.4, 0.9]]).unwrap();
        let f = build_rips(&cloud.pairwise_distances(), 1, Radius::Finite(10.0)).unwrap();
        let bm = boundary_matrix(&f);
        let edges: Vec<usize> = (0..f.len()).filter(|&j| f.dim_of(j) == 1).collect();
        assert_eq!(edges.len(), 3);
        let mut acc = Vec::new();
        let mut tmp = Vec::new();
        for &e in &edges {
            assert_eq!(bm.column(e).len(), 2);
            xor_into(&acc, bm.column(e), &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
        }
        assert!(acc.is_empty());
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        for seed in 0..10 {
            let dm = gen_gaussian_blob(7, 3, 1.0, seed).unwrap().pairwise_distances();
            let f = build_rips(&dm, 3, Radius::Auto).unwrap();
            let bm = boundary_matrix(&f);
            let mut acc = Vec::new();
            let mut tmp = Vec::new();
            for j in 0..bm.n_cols() {
                for &i in bm.column(j) {
                    assert!((i as usize) < j);
                }
                acc.clear();
                for &face in bm.column(j) {
                    xor_into(&acc, bm.column(face as usize), &mut tmp);
                    std::mem::swap(&mut acc, &mut tmp);
                }
                assert!(acc.is_empty(), "∂∂ ≠ 0 at column {j}");
            }
        }
    }
}
