//! Brute-force references for the matching computations. None of them shares
//! code with the algorithms they check.

use super::VerifyError;
use crate::graph::Graph;
use crate::half::HalfIntegral;

pub const BETA_STAR_EDGE_LIMIT: usize = 18;
pub const BETA_EDGE_LIMIT: usize = 24;
pub const TRANSVERSAL_VERTEX_LIMIT: usize = 12;
pub const SUBSET_VERTEX_LIMIT: usize = 20;

/// `β*` as the maximum of the doubled weights in `{0, 1, 2}^E` with every vertex
/// sum at most 2. Needs `m <= 18`.
pub fn oracle_beta_star(g: &Graph) -> Result<HalfIntegral, VerifyError> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() > BETA_STAR_EDGE_LIMIT {
        return Err(VerifyError::TooManyEdges {
            m: edges.len(),
            limit: BETA_STAR_EDGE_LIMIT,
        });
    }
    let n = g.order();
    // remaining[i][v]: edges at index >= i touching v
    let mut remaining = vec![vec![0u32; n]; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        remaining[i] = remaining[i + 1].clone();
        remaining[i][edges[i].0] += 1;
        remaining[i][edges[i].1] += 1;
    }
    let mut cap = vec![2u32; n];
    let mut best = 0;
    weights_dfs(&edges, &remaining, 0, 0, &mut cap, &mut best);
    Ok(HalfIntegral::from_doubled(best as u64))
}

fn weights_dfs(
    edges: &[(usize, usize)],
    remaining: &[Vec<u32>],
    i: usize,
    total: u32,
    cap: &mut [u32],
    best: &mut u32,
) {
    if total > *best {
        *best = total;
    }
    if i == edges.len() {
        return;
    }
    // each unit of weight uses two units of capacity among still-reachable vertices
    let open: u32 = (0..cap.len())
        .filter(|&v| remaining[i][v] > 0)
        .map(|v| cap[v])
        .sum();
    if total + open / 2 <= *best {
        return;
    }
    let (u, v) = edges[i];
    for w in (0..=2u32.min(cap[u]).min(cap[v])).rev() {
        cap[u] -= w;
        cap[v] -= w;
        weights_dfs(edges, remaining, i + 1, total + w, cap, best);
        cap[u] += w;
        cap[v] += w;
    }
}

/// `β` as the largest set of pairwise disjoint edges. Needs `m <= 24`.
pub fn oracle_beta(g: &Graph) -> Result<usize, VerifyError> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() > BETA_EDGE_LIMIT {
        return Err(VerifyError::TooManyEdges {
            m: edges.len(),
            limit: BETA_EDGE_LIMIT,
        });
    }
    let mut best = 0;
    edge_subset_dfs(&edges, 0, 0, 0, g.order(), &mut best);
    Ok(best)
}

fn edge_subset_dfs(
    edges: &[(usize, usize)],
    i: usize,
    used: u64,
    size: usize,
    n: usize,
    best: &mut usize,
) {
    if size > *best {
        *best = size;
    }
    if i == edges.len() {
        return;
    }
    let free = n - used.count_ones() as usize;
    if size + free / 2 <= *best || size + (edges.len() - i) <= *best {
        return;
    }
    let (u, v) = edges[i];
    if used >> u & 1 == 0 && used >> v & 1 == 0 {
        edge_subset_dfs(edges, i + 1, used | 1 << u | 1 << v, size + 1, n, best);
    }
    edge_subset_dfs(edges, i + 1, used, size, n, best);
}

/// `β` by dynamic programming over vertex subsets: the lowest vertex of a set is
/// either left exposed or matched to one of its neighbours in the set. Needs `n <= 20`.
pub fn oracle_beta_by_subsets(g: &Graph) -> Result<usize, VerifyError> {
    let n = g.order();
    if n > SUBSET_VERTEX_LIMIT {
        return Err(VerifyError::TooManyVertices {
            n,
            limit: SUBSET_VERTEX_LIMIT,
        });
    }
    let masks: Vec<u32> = (0..n).map(|u| g.neighbor_mask(u) as u32).collect();
    let mut best = vec![0u8; 1 << n];
    for set in 1u32..(1 << n) {
        let v = set.trailing_zeros() as usize;
        let rest = set & !(1 << v);
        let mut b = best[rest as usize];
        let mut partners = masks[v] & rest;
        while partners != 0 {
            let u = partners.trailing_zeros();
            partners &= partners - 1;
            b = b.max(1 + best[(rest & !(1 << u)) as usize]);
        }
        best[set as usize] = b;
    }
    Ok(best[(1usize << n) - 1] as usize)
}

/// Minimum fractional transversal over `{0, 1/2, 1}^V`, which equals `β*` by
/// duality and half-integrality. Needs `n <= 12`.
pub fn oracle_transversal_number(g: &Graph) -> Result<HalfIntegral, VerifyError> {
    let n = g.order();
    if n > TRANSVERSAL_VERTEX_LIMIT {
        return Err(VerifyError::TooManyVertices {
            n,
            limit: TRANSVERSAL_VERTEX_LIMIT,
        });
    }
    let mut weights = vec![0u32; n];
    let mut best = 2 * n as u32;
    cover_dfs(g, 0, 0, &mut weights, &mut best);
    Ok(HalfIntegral::from_doubled(best as u64))
}

fn cover_dfs(g: &Graph, v: usize, total: u32, weights: &mut [u32], best: &mut u32) {
    if total >= *best {
        return;
    }
    if v == weights.len() {
        *best = total;
        return;
    }
    for w in 0..=2u32 {
        // edges to earlier vertices are decided once v is
        if (0..v).all(|u| !g.has_edge(u, v) || weights[u] + w >= 2) {
            weights[v] = w;
            cover_dfs(g, v + 1, total + w, weights, best);
        }
    }
    weights[v] = 0;
}
