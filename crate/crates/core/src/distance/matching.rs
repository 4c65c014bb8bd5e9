//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Size of a maximum matching in the bipartite graph whose left vertex `i`
/// is adjacent to the right vertices `adj[i]`.
pub fn max_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    let n_left = adj.len();
    let mut match_l = vec![FREE; n_left];
    let mut match_r = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for i in 0..n_left {
            if match_l[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let k = match_r[j];
                if k == FREE {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            return size;
        }
        for i in 0..n_left {
            if match_l[i] == FREE && augment(i, adj, &mut match_l, &mut match_r, &mut dist) {
                size += 1;
            }
        }
    }
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &j in &adj[i] {
        let k = match_r[j];
        if k == FREE || (dist[k] == dist[i] + 1 && augment(k, adj, match_l, match_r, dist)) {
            match_l[i] = j;
            match_r[j] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}
