//! Simple undirected graphs stored as packed adjacency bit rows.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Largest order accepted by [`Graph::is_isomorphic`].
pub const MAX_ISOMORPHISM_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("operation requires at least one vertex")]
    Empty,
    #[error("isomorphism test is limited to n <= {MAX_ISOMORPHISM_ORDER}, got n = {0}")]
    TooLargeForIsomorphism(usize),
}

/// A subset of the vertex range `0..n` of some graph, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn range(start: usize, end: usize) -> Self {
        VertexSet((start..end).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Simple undirected graph on the vertex labels `0..n`.
///
/// Row `u` is a bitset of the neighbours of `u`, `words` 64-bit words long.
/// Values are immutable once built; every constructor returns a fresh graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from unordered pairs. Duplicate pairs collapse to one edge.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Graph whose edges are the set bits of `code`, where bit `k` stands for the
    /// `k`-th pair in column order `(0,1), (0,2), (1,2), (0,3), ...`.
    pub fn from_upper_bits(n: usize, code: u64) -> Self {
        debug_assert!(n * n.saturating_sub(1) / 2 <= 64);
        let mut g = Graph::empty(n);
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if code >> k & 1 == 1 {
                    g.set_edge(u, v);
                }
                k += 1;
            }
        }
        g
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    /// Copy of this graph with the edge `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        let mut g = self.clone();
        g.set_edge(u, v);
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    /// Neighbours of `u` in increasing order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Low 64 neighbour bits of `u`; the whole row when `n <= 64`.
    pub fn neighbor_mask(&self, u: usize) -> u64 {
        self.rows[u * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        (0..self.n)
            .map(|u| self.degree(u))
            .min()
            .ok_or(GraphError::Empty)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// True when the adjacency relation is symmetric and irreflexive and no bit
    /// beyond `n` is set.
    pub fn is_well_formed(&self) -> bool {
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            for (wi, &word) in self.row(u).iter().enumerate() {
                let lo = wi * 64;
                if lo + 64 > self.n {
                    let valid = self.n.saturating_sub(lo);
                    let mask = if valid >= 64 {
                        u64::MAX
                    } else {
                        (1u64 << valid) - 1
                    };
                    if word & !mask != 0 {
                        return false;
                    }
                }
            }
            if self.neighbors(u).any(|v| !self.has_edge(v, u)) {
                return false;
            }
        }
        true
    }

    /// Disjoint union; vertex `v` of `other` becomes `self.order() + v`.
    pub fn union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + off, v + off);
        }
        g
    }

    /// Disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.union(other);
        for u in 0..self.n {
            for v in 0..other.n {
                g.set_edge(u, self.n + v);
            }
        }
        g
    }

    /// Connected components, each listed once, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(u) = queue.pop_front() {
                members.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            out.push(VertexSet::new(members));
        }
        out
    }

    /// A graph is connected when it has exactly one component. The null graph is not.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        if self.n <= 64 {
            let full = if self.n == 64 {
                u64::MAX
            } else {
                (1u64 << self.n) - 1
            };
            let mut reached = 1u64;
            let mut frontier = 1u64;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let u = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.rows[u * self.words];
                }
                frontier = next & !reached;
                reached |= next;
            }
            return reached == full;
        }
        self.components().len() == 1
    }

    /// Subgraph induced by `set`, relabelled by the sorted order of its members.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<Graph, GraphError> {
        if let Some(&bad) = set.as_slice().iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange {
                vertex: bad,
                n: self.n,
            });
        }
        let members = set.as_slice();
        let mut g = Graph::empty(members.len());
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(
            perm.len(),
            self.n,
            "permutation length must equal the order"
        );
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    /// Exact isomorphism test by backtracking over degree-compatible bijections.
    ///
    /// Limited to `n <= 10`; larger inputs are rejected instead of answered heuristically.
    pub fn is_isomorphic(&self, other: &Graph) -> Result<bool, GraphError> {
        for g in [self, other] {
            if g.n > MAX_ISOMORPHISM_ORDER {
                return Err(GraphError::TooLargeForIsomorphism(g.n));
            }
        }
        if self.n != other.n || self.edge_count() != other.edge_count() {
            return Ok(false);
        }
        let inv_a = vertex_invariants(self);
        let inv_b = vertex_invariants(other);
        let mut sorted_a = inv_a.clone();
        let mut sorted_b = inv_b.clone();
        sorted_a.sort();
        sorted_b.sort();
        if sorted_a != sorted_b {
            return Ok(false);
        }

        // Map vertices of `self` in order of decreasing degree, preferring vertices
        // adjacent to ones already placed so that consistency checks prune early.
        let n = self.n;
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let linked = order.iter().filter(|&&u| self.has_edge(u, v)).count();
                    (linked, self.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            placed[next] = true;
            order.push(next);
        }

        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        Ok(extend_mapping(
            self, other, &inv_a, &inv_b, &order, 0, &mut image, &mut used,
        ))
    }
}

/// Degree plus sorted neighbour degrees; equal for vertices related by any isomorphism.
fn vertex_invariants(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    let deg = g.degrees();
    (0..g.order())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn extend_mapping(
    a: &Graph,
    b: &Graph,
    inv_a: &[(usize, Vec<usize>)],
    inv_b: &[(usize, Vec<usize>)],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.order() {
        if used[w] || inv_a[v] != inv_b[w] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| a.has_edge(u, v) == b.has_edge(image[u], w));
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if extend_mapping(a, b, inv_a, inv_b, order, depth + 1, image, used) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn edge_list_construction() {
        let k3 = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert!(k3.is_well_formed());
        let e3 = Graph::from_edge_list(3, &[]).unwrap();
        assert_eq!(e3.edge_count(), 0);
        assert_eq!(
            Graph::from_edge_list(4, &[(0, 0)]),
            Err(GraphError::LoopEdge(0))
        );
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        let dup = Graph::from_edge_list(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn complete_and_empty() {
        assert_eq!(Graph::complete(4).edge_count(), 6);
        assert_eq!(Graph::empty(5).edge_count(), 0);
        assert_eq!(Graph::complete(1).edge_count(), 0);
        assert_eq!(Graph::complete(0).order(), 0);
        let big = Graph::complete(130);
        assert_eq!(big.edge_count(), 130 * 129 / 2);
        assert!(big.is_well_formed());
        assert_eq!(big.neighbors(129).count(), 129);
    }

    #[test]
    fn union_and_join() {
        let g = Graph::complete(3).union(&Graph::complete(2));
        assert_eq!((g.order(), g.edge_count(), g.components().len()), (5, 4, 2));
        let c4 = cycle(4);
        assert_eq!(c4.union(&Graph::empty(0)), c4);
        let two_k3_k1 = Graph::complete(3)
            .union(&Graph::complete(3))
            .union(&Graph::empty(1));
        assert_eq!((two_k3_k1.order(), two_k3_k1.edge_count()), (7, 6));

        let star = Graph::complete(1).join(&Graph::empty(3));
        assert_eq!(star.degrees(), vec![3, 1, 1, 1]);
        let g = Graph::complete(1).join(&Graph::complete(5).union(&Graph::empty(2)));
        assert_eq!((g.order(), g.edge_count()), (8, 17));
        let k22 = Graph::empty(2).join(&Graph::empty(2));
        assert!(k22.is_isomorphic(&c4).unwrap());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::complete(5).is_connected());
        let g = Graph::complete(4).union(&Graph::empty(2));
        assert_eq!(g.components().len(), 3);
        assert!(!g.is_connected());
        assert!(Graph::empty(0).components().is_empty());
        assert!(!Graph::empty(0).is_connected());
        assert!(Graph::empty(1).is_connected());
        let long = path(100);
        assert!(long.is_connected());
        assert!(!long.union(&path(3)).is_connected());
    }

    #[test]
    fn induced() {
        let k3 = Graph::complete(5)
            .induced_subgraph(&VertexSet::new([0, 1, 2]))
            .unwrap();
        assert_eq!(k3, Graph::complete(3));
        let none = cycle(6).induced_subgraph(&VertexSet::default()).unwrap();
        assert_eq!(none.order(), 0);
        let p3 = cycle(5)
            .induced_subgraph(&VertexSet::new([0, 1, 2]))
            .unwrap();
        assert_eq!(p3, path(3));
        assert!(cycle(5).induced_subgraph(&VertexSet::new([7])).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(Graph::complete(4).min_degree(), Ok(3));
        assert_eq!(
            Graph::complete(1).join(&Graph::empty(3)).min_degree(),
            Ok(1)
        );
        assert_eq!(cycle(5).min_degree(), Ok(2));
        assert_eq!(Graph::empty(0).min_degree(), Err(GraphError::Empty));
    }

    #[test]
    fn isomorphism_basics() {
        let k22 = Graph::empty(2).join(&Graph::empty(2));
        assert!(cycle(4).is_isomorphic(&k22).unwrap());
        let star = Graph::complete(1).join(&Graph::empty(3));
        assert!(!star.is_isomorphic(&path(4)).unwrap());
        assert!(!cycle(6)
            .is_isomorphic(&Graph::complete(3).union(&Graph::complete(3)))
            .unwrap());
        assert!(!cycle(4).is_isomorphic(&cycle(5)).unwrap());
        assert_eq!(
            Graph::complete(11).is_isomorphic(&Graph::complete(11)),
            Err(GraphError::TooLargeForIsomorphism(11))
        );
    }

    #[test]
    fn upper_bits_order() {
        // bit 0 = (0,1), bit 1 = (0,2), bit 2 = (1,2)
        assert_eq!(Graph::from_upper_bits(3, 0b101), path(3));
        assert_eq!(Graph::from_upper_bits(3, 0b111), Graph::complete(3));
        assert!(Graph::from_upper_bits(4, 1 << 5).has_edge(2, 3));
    }
}
