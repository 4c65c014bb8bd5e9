use super::PersistenceDiagram;
use crate::pointcloud::DistanceMatrix;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Dimension-0 persistence by Kruskal's algorithm: edges in ascending
/// `(length, i, j)` order, each merge killing one component born at 0.
pub fn h0_unionfind(
    dm: &DistanceMatrix,
    include_zero: bool,
    include_essential: bool,
) -> PersistenceDiagram {
    let n = dm.n();
    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((dm.get(i, j), i as u32, j as u32));
        }
    }
    edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut uf = UnionFind::new(n);
    let mut points = Vec::with_capacity(n);
    let mut components = n;
    for (d, i, j) in edges {
        if components == 1 {
            break;
        }
        if uf.union(i as usize, j as usize) {
            components -= 1;
            if include_zero || d > 0.0 {
                points.push((0.0, d));
            }
        }
    }
    if include_essential {
        points.extend(std::iter::repeat_n((0.0, f64::INFINITY), components));
    }
    PersistenceDiagram::from_points_unchecked(0, points)
}
