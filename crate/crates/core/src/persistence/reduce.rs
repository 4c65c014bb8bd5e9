//! Column reduction of the boundary matrix over Z/2.
//!
//! Dimensions are processed from the top down ("twist"): once a column of
//! dimension `d` is reduced to lowest index `i`, simplex `i` is known to be a
//! creator and its own column is cleared without being reduced. Among the
//! triangles the sweep stops as soon as every creator edge has been paired,
//! because the remaining columns can only reduce to zero.
//! Neither shortcut changes the pairing produced by the plain left-to-right
//! algorithm.

use super::boundary::{xor_into, BoundaryMatrix};
use super::h0::UnionFind;
use super::PersistencePair;
use crate::filtration::Filtration;

const NONE: u32 = u32::MAX;

pub fn reduce(bm: &BoundaryMatrix, f: &Filtration) -> Vec<PersistencePair> {
    let len = f.len();
    assert_eq!(bm.n_cols(), len, "boundary matrix does not match filtration");
    let top = f.simplices().iter().map(|s| s.dim()).max().unwrap_or(0);

    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
    for (j, s) in f.simplices().iter().enumerate() {
        by_dim[s.dim()].push(j as u32);
    }

    // Creators of dimension d-1 that can still be paired, when cheaply known.
    // rank ∂_1 = #vertices − #components, from union-find on the edges.
    let positive_edges = (top >= 2).then(|| {
        let mut uf = UnionFind::new(by_dim[0].len());
        let merges = by_dim[1]
            .iter()
            .filter(|&&e| {
                let v = f.simplex(e as usize).vertices();
                uf.union(v[0] as usize, v[1] as usize)
            })
            .count();
        by_dim[1].len() - merges
    });

    let mut pivot_col = vec![NONE; len];
    let mut cleared = vec![false; len];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); len];
    let mut pairs_found: Vec<(u32, u32)> = Vec::new();
    let mut work = Vec::new();
    let mut scratch = Vec::new();

    for d in (1..=top).rev() {
        let bound = if d == 2 { positive_edges } else { None };
        let mut paired_here = 0usize;
        for &j in &by_dim[d] {
            if bound == Some(paired_here) {
                break;
            }
            if cleared[j as usize] {
                continue;
            }
            work.clear();
            work.extend_from_slice(bm.column(j as usize));
            while let Some(&low) = work.last() {
                let k = pivot_col[low as usize];
                if k == NONE {
                    break;
                }
                xor_into(&work, &reduced[k as usize], &mut scratch);
                std::mem::swap(&mut work, &mut scratch);
            }
            if let Some(&low) = work.last() {
                pivot_col[low as usize] = j;
                cleared[low as usize] = true;
                reduced[j as usize] = work.clone();
                pairs_found.push((low, j));
                paired_here += 1;
            }
        }
    }

    let mut in_pair = vec![false; len];
    let mut pairs: Vec<PersistencePair> = Vec::with_capacity(len - pairs_found.len());
    for &(i, j) in &pairs_found {
        let (i, j) = (i as usize, j as usize);
        in_pair[i] = true;
        in_pair[j] = true;
        pairs.push(PersistencePair {
            dim: f.dim_of(i),
            birth: f.value(i),
            death: f.value(j),
            creator: i,
            destroyer: Some(j),
        });
    }
    for (i, _) in in_pair.iter().enumerate().filter(|(_, &p)| !p) {
        pairs.push(PersistencePair {
            dim: f.dim_of(i),
            birth: f.value(i),
            death: f64::INFINITY,
            creator: i,
            destroyer: None,
        });
    }
    pairs.sort_unstable_by_key(|p| p.creator);
    pairs
}
