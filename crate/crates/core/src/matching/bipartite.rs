//! Hopcroft-Karp on the bipartite double cover, and the König vertex cover.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;
const INF: usize = usize::MAX;

/// Maximum matching of a bipartite graph whose left vertex `u` sees the right
/// vertices `adj[u]`. Returns `(mate_left, mate_right)` with `usize::MAX` for exposed.
pub(crate) fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> (Vec<usize>, Vec<usize>) {
    let n_left = adj.len();
    let mut mate_l = vec![NONE; n_left];
    let mut mate_r = vec![NONE; n_right];
    let mut dist = vec![INF; n_left];
    let mut next_edge = vec![0usize; n_left];
    let mut queue = VecDeque::new();
    loop {
        queue.clear();
        for u in 0..n_left {
            if mate_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mate_r[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        next_edge.fill(0);
        for u in 0..n_left {
            if mate_l[u] == NONE {
                augment(u, adj, &mut mate_l, &mut mate_r, &mut dist, &mut next_edge);
            }
        }
    }
    (mate_l, mate_r)
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[u] < adj[u].len() {
        let v = adj[u][next_edge[u]];
        next_edge[u] += 1;
        let w = mate_r[v];
        let ok = w == NONE
            || (dist[w] != INF
                && dist[w] == dist[u] + 1
                && augment(w, adj, mate_l, mate_r, dist, next_edge));
        if ok {
            mate_l[u] = v;
            mate_r[v] = u;
            return true;
        }
    }
    dist[u] = INF;
    false
}

/// Minimum vertex cover from a maximum matching: with `Z` the vertices reachable
/// from exposed left vertices by alternating paths, the cover is
/// `(left \ Z) ∪ (right ∩ Z)`. Returns membership flags `(left, right)`.
pub(crate) fn konig_cover(
    adj: &[Vec<usize>],
    mate_l: &[usize],
    mate_r: &[usize],
) -> (Vec<bool>, Vec<bool>) {
    let n_left = adj.len();
    let mut reach_l = vec![false; n_left];
    let mut reach_r = vec![false; mate_r.len()];
    let mut queue: VecDeque<usize> = (0..n_left).filter(|&u| mate_l[u] == NONE).collect();
    for &u in &queue {
        reach_l[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if reach_r[v] {
                continue;
            }
            reach_r[v] = true;
            let w = mate_r[v];
            debug_assert!(
                w != NONE,
                "an exposed right vertex would give an augmenting path"
            );
            if w != NONE && !reach_l[w] {
                reach_l[w] = true;
                queue.push_back(w);
            }
        }
    }
    (reach_l.iter().map(|&r| !r).collect(), reach_r)
}
