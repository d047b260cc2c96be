//! Matching number, fractional matching number with half-integral witnesses, and
//! fractional transversals.
//!
//! Fractional quantities are exact: weights are stored doubled, so `1/2` is `1`
//! and `1` is `2`.

mod bipartite;
mod blossom;

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
pub use crate::half::HalfIntegral;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge {u}-{v} is not covered: weights {wu}/2 + {wv}/2 < 1")]
    UncoveredEdge { u: usize, v: usize, wu: u8, wv: u8 },
    #[error("weight {weight}/2 is outside {{0, 1/2, 1}}")]
    BadWeight { weight: u8 },
    #[error("expected {expected} vertex weights, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("{u}-{v} is not an edge of the graph")]
    NotAnEdge { u: usize, v: usize },
    #[error("vertex {vertex} is overloaded: incident weight {load}/2 > 1")]
    Overloaded { vertex: usize, load: u32 },
    #[error("fractional matching has total {total}, a perfect one needs n/2 = {half_n}")]
    NotPerfect {
        total: HalfIntegral,
        half_n: HalfIntegral,
    },
    #[error("fractional matching is not canonical: {0}")]
    NotCanonical(String),
}

/// A maximum matching with its edges `(u, v)`, `u < v`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Every pair is an edge of `g` and no vertex is used twice.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.order()];
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) || used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }
}

fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.order()).map(|u| g.neighbors(u).collect()).collect()
}

/// Maximum matching by Edmonds' blossom algorithm.
pub fn matching_number(g: &Graph) -> Matching {
    let mate = blossom::maximum_matching(&adjacency(g));
    let edges = mate
        .iter()
        .enumerate()
        .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| (u, v)))
        .collect();
    Matching { edges }
}

/// Bipartite graph on `2n` vertices: `v` stands for `v+` and `n + v` for `v-`;
/// each edge `uv` gives `u+ v-` and `v+ u-`.
pub fn bipartite_double_cover(g: &Graph) -> Graph {
    let n = g.order();
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for (u, v) in g.edges() {
        edges.push((u, n + v));
        edges.push((v, n + u));
    }
    Graph::from_edge_list(2 * n, &edges).expect("double cover edges are in range")
}

struct CoverMatching {
    adj: Vec<Vec<usize>>,
    mate_l: Vec<usize>,
    mate_r: Vec<usize>,
}

fn double_cover_matching(g: &Graph) -> CoverMatching {
    let adj = adjacency(g);
    let (mate_l, mate_r) = bipartite::hopcroft_karp(&adj, g.order());
    CoverMatching {
        adj,
        mate_l,
        mate_r,
    }
}

/// `β*(G)`: half the maximum matching size of the bipartite double cover.
pub fn fractional_matching_number(g: &Graph) -> HalfIntegral {
    let m = double_cover_matching(g);
    HalfIntegral::from_doubled(m.mate_l.iter().filter(|&&v| v != NONE).count() as u64)
}

pub fn has_fractional_perfect_matching(g: &Graph) -> bool {
    fractional_matching_number(g).doubled() == g.order() as u64
}

/// Fractional matching with weights in `{0, 1/2, 1}`, listed for every edge of
/// the graph it was built for (`(u, v, doubled weight)`, `u < v`, edge order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    weights: Vec<(usize, usize, u8)>,
}

impl FractionalMatching {
    /// Builds a matching on `g` from doubled weights of selected edges; unlisted
    /// edges get weight 0. Checks edges, weights and vertex loads.
    pub fn from_doubled(g: &Graph, entries: &[(usize, usize, u8)]) -> Result<Self, MatchingError> {
        let mut weights: Vec<(usize, usize, u8)> = g.edges().map(|(u, v)| (u, v, 0)).collect();
        for &(a, b, w) in entries {
            if w > 2 {
                return Err(MatchingError::BadWeight { weight: w });
            }
            let (u, v) = (a.min(b), a.max(b));
            let slot = weights
                .binary_search_by(|&(x, y, _)| (x, y).cmp(&(u, v)))
                .map_err(|_| MatchingError::NotAnEdge { u, v })?;
            weights[slot].2 = w;
        }
        let m = FractionalMatching { weights };
        m.check_loads(g.order())?;
        Ok(m)
    }

    pub fn weights(&self) -> &[(usize, usize, u8)] {
        &self.weights
    }

    /// Doubled weight of edge `uv`; 0 for non-edges.
    pub fn weight(&self, u: usize, v: usize) -> u8 {
        let key = (u.min(v), u.max(v));
        self.weights
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&key))
            .map(|i| self.weights[i].2)
            .unwrap_or(0)
    }

    pub fn total(&self) -> HalfIntegral {
        HalfIntegral::from_doubled(self.weights.iter().map(|&(_, _, w)| w as u64).sum())
    }

    fn loads(&self, n: usize) -> Vec<u32> {
        let mut load = vec![0u32; n];
        for &(u, v, w) in &self.weights {
            load[u] += w as u32;
            load[v] += w as u32;
        }
        load
    }

    fn check_loads(&self, n: usize) -> Result<(), MatchingError> {
        match self.loads(n).iter().position(|&l| l > 2) {
            Some(vertex) => Err(MatchingError::Overloaded {
                vertex,
                load: self.loads(n)[vertex],
            }),
            None => Ok(()),
        }
    }

    /// Every weighted edge is an edge of `g` and no vertex carries more than 1.
    pub fn is_feasible(&self, g: &Graph) -> bool {
        self.weights
            .iter()
            .all(|&(u, v, w)| w <= 2 && (w == 0 || g.has_edge(u, v)))
            && self.loads(g.order()).iter().all(|&l| l <= 2)
    }

    fn half_adjacency(&self, n: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &self.weights {
            if w == 1 {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// The edges of weight `1/2` form vertex-disjoint odd cycles.
    pub fn is_canonical(&self, n: usize) -> bool {
        self.non_canonical_reason(n).is_none()
    }

    fn non_canonical_reason(&self, n: usize) -> Option<String> {
        let adj = self.half_adjacency(n);
        if let Some(v) = (0..n).find(|&v| !adj[v].is_empty() && adj[v].len() != 2) {
            return Some(format!(
                "vertex {v} meets {} half-weight edges",
                adj[v].len()
            ));
        }
        for cycle in half_cycles(&adj) {
            if cycle.len() % 2 == 0 {
                return Some(format!(
                    "half-weight cycle through {} has even length",
                    cycle[0]
                ));
            }
        }
        None
    }

    /// Lines `edge u v w` for every edge of positive weight.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for &(u, v, w) in &self.weights {
            if w > 0 {
                writeln!(s, "edge {u} {v} {}", HalfIntegral::from_doubled(w as u64)).unwrap();
            }
        }
        s
    }
}

/// Cycles of a graph whose vertices all have degree 0 or 2, each listed from its
/// lowest vertex towards the smaller neighbour, in order of lowest vertex.
fn half_cycles(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if seen[start] || adj[start].len() != 2 {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let (mut prev, mut cur) = (start, adj[start][0]);
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            let next = if adj[cur][0] == prev {
                adj[cur][1]
            } else {
                adj[cur][0]
            };
            prev = cur;
            cur = next;
        }
        out.push(cycle);
    }
    out
}

/// A maximum fractional matching whose half-weight edges form disjoint odd cycles.
///
/// The double-cover matching is pulled back (edge `uv` gets one half per matched
/// copy `u+v-`, `v+u-`). Half-weight paths and even cycles are then rewritten as
/// alternating 1/0 weights: components in order of their lowest vertex, paths from
/// the lower endpoint, cycles from the lowest vertex towards its smaller neighbour,
/// weight 1 first.
pub fn optimal_fractional_matching(g: &Graph) -> FractionalMatching {
    let n = g.order();
    let cm = double_cover_matching(g);
    let mut m = FractionalMatching {
        weights: g
            .edges()
            .map(|(u, v)| {
                (
                    u,
                    v,
                    u8::from(cm.mate_l[u] == v) + u8::from(cm.mate_l[v] == u),
                )
            })
            .collect(),
    };
    let adj = m.half_adjacency(n);
    let mut seen = vec![false; n];
    let mut rewrites: Vec<(usize, usize, u8)> = Vec::new();
    for start in 0..n {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        // collect the component and find a path endpoint, if any
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        let endpoint = comp.iter().copied().filter(|&v| adj[v].len() == 1).min();
        let (first, second, is_cycle) = match endpoint {
            Some(e) => (e, adj[e][0], false),
            None => {
                let low = *comp.iter().min().expect("non-empty");
                (low, adj[low][0], true)
            }
        };
        let edges_in_comp = if is_cycle { comp.len() } else { comp.len() - 1 };
        if edges_in_comp % 2 == 1 {
            // odd cycles stay; odd paths cannot occur in a maximum solution
            debug_assert!(is_cycle, "odd half-weight path in an optimal matching");
            continue;
        }
        let (mut prev, mut cur) = (first, second);
        let mut weight = 2u8;
        rewrites.push((prev, cur, weight));
        for _ in 1..edges_in_comp {
            let next = adj[cur]
                .iter()
                .copied()
                .find(|&x| x != prev)
                .expect("walk continues");
            weight = 2 - weight;
            rewrites.push((cur, next, weight));
            prev = cur;
            cur = next;
        }
    }
    for (a, b, w) in rewrites {
        let key = (a.min(b), a.max(b));
        let i = m
            .weights
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&key))
            .expect("support edge");
        m.weights[i].2 = w;
    }
    m
}

/// Fractional transversal with weights in `{0, 1/2, 1}`, stored doubled per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    weights: Vec<u8>,
}

impl Transversal {
    pub fn from_doubled(weights: Vec<u8>) -> Result<Self, MatchingError> {
        if let Some(&w) = weights.iter().find(|&&w| w > 2) {
            return Err(MatchingError::BadWeight { weight: w });
        }
        Ok(Transversal { weights })
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn total(&self) -> HalfIntegral {
        HalfIntegral::from_doubled(self.weights.iter().map(|&w| w as u64).sum())
    }

    fn part(&self, w: u8) -> VertexSet {
        VertexSet::new((0..self.weights.len()).filter(|&v| self.weights[v] == w))
    }

    /// Vertices of weight 1.
    pub fn w(&self) -> VertexSet {
        self.part(2)
    }

    /// Vertices of weight 0.
    pub fn r(&self) -> VertexSet {
        self.part(0)
    }

    /// Vertices of weight 1/2.
    pub fn c(&self) -> VertexSet {
        self.part(1)
    }

    /// First edge whose endpoint weights sum to less than 1, if any.
    pub fn check_feasible(&self, g: &Graph) -> Result<(), MatchingError> {
        if self.weights.len() != g.order() {
            return Err(MatchingError::WrongLength {
                expected: g.order(),
                found: self.weights.len(),
            });
        }
        for (u, v) in g.edges() {
            let (wu, wv) = (self.weights[u], self.weights[v]);
            if wu + wv < 2 {
                return Err(MatchingError::UncoveredEdge { u, v, wu, wv });
            }
        }
        Ok(())
    }

    /// Lines `vertex v g`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, &w) in self.weights.iter().enumerate() {
            writeln!(s, "vertex {v} {}", HalfIntegral::from_doubled(w as u64)).unwrap();
        }
        s
    }
}

/// Minimum fractional transversal read off the König cover of the double cover:
/// `g(v)` is half the number of covered copies of `v`.
pub fn fractional_transversal(g: &Graph) -> Transversal {
    let cm = double_cover_matching(g);
    let (left, right) = bipartite::konig_cover(&cm.adj, &cm.mate_l, &cm.mate_r);
    Transversal {
        weights: (0..g.order())
            .map(|v| u8::from(left[v]) + u8::from(right[v]))
            .collect(),
    }
}

/// Structure of a transversal `T` with parts `W` (weight 1), `R` (weight 0) and
/// `C` (weight 1/2), `s = |W|`, `t = |R|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrcReport {
    pub w: VertexSet,
    pub r: VertexSet,
    pub c: VertexSet,
    pub s: usize,
    pub t: usize,
    pub total: HalfIntegral,
    /// No edge inside `R`.
    pub r_independent: bool,
    /// No edge between `R` and `C`.
    pub no_r_c_edge: bool,
    /// For connected `G` on at least two vertices: `s` and `t` are both zero or
    /// both positive. `None` otherwise.
    pub connected_balance: Option<bool>,
    /// `T` has the minimum total, `β*(G)`.
    pub optimal: bool,
    /// `2 total = n - (t - s)`; holds for every transversal with weights in `{0, 1/2, 1}`.
    pub total_identity: bool,
    pub t_at_least_s: bool,
}

impl WrcReport {
    /// Every check that an optimal transversal must pass.
    pub fn all_hold(&self) -> bool {
        self.r_independent
            && self.no_r_c_edge
            && self.connected_balance != Some(false)
            && self.optimal
            && self.total_identity
            && self.t_at_least_s
    }
}

pub fn wrc_decomposition(g: &Graph, t: &Transversal) -> Result<WrcReport, MatchingError> {
    t.check_feasible(g)?;
    let (w, r, c) = (t.w(), t.r(), t.c());
    let r_independent = !g.edges().any(|(a, b)| r.contains(a) && r.contains(b));
    let no_r_c_edge = !g
        .edges()
        .any(|(a, b)| (r.contains(a) && c.contains(b)) || (c.contains(a) && r.contains(b)));
    let (s, tt) = (w.len(), r.len());
    let connected_balance = (g.order() >= 2 && g.is_connected()).then_some((s == 0) == (tt == 0));
    let total = t.total();
    let optimal = total == fractional_matching_number(g);
    let total_identity = total.doubled() as i64 == g.order() as i64 - (tt as i64 - s as i64);
    Ok(WrcReport {
        w,
        r,
        c,
        s,
        t: tt,
        total,
        r_independent,
        no_r_c_edge,
        connected_balance,
        optimal,
        total_identity,
        t_at_least_s: tt >= s,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    K2(usize, usize),
    /// Vertices in cyclic order, starting at the lowest.
    OddCycle(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpmPartition {
    pub parts: Vec<Part>,
}

impl FpmPartition {
    /// Checks that the parts cover `V(G)` exactly, `K2` parts are edges and cycle
    /// parts are odd cycles of `G` in the recorded order.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let mut count = vec![0u32; g.order()];
        let mut mark = |v: usize| -> Result<(), String> {
            if v >= g.order() {
                return Err(format!("vertex {v} out of range"));
            }
            count[v] += 1;
            Ok(())
        };
        for part in &self.parts {
            match part {
                Part::K2(u, v) => {
                    mark(*u)?;
                    mark(*v)?;
                    if !g.has_edge(*u, *v) {
                        return Err(format!("K2 part {u}-{v} is not an edge"));
                    }
                }
                Part::OddCycle(vs) => {
                    if vs.len() < 3 || vs.len() % 2 == 0 {
                        return Err(format!("cycle part of length {}", vs.len()));
                    }
                    for (i, &v) in vs.iter().enumerate() {
                        mark(v)?;
                        let next = vs[(i + 1) % vs.len()];
                        if !g.has_edge(v, next) {
                            return Err(format!("cycle part misses edge {v}-{next}"));
                        }
                    }
                }
            }
        }
        match count.iter().position(|&c| c != 1) {
            Some(v) => Err(format!("vertex {v} lies in {} parts", count[v])),
            None => Ok(()),
        }
    }

    /// Lines `part K2 u v` and `part CYCLE v1 ... vk`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for part in &self.parts {
            match part {
                Part::K2(u, v) => writeln!(s, "part K2 {u} {v}").unwrap(),
                Part::OddCycle(vs) => {
                    let body: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                    writeln!(s, "part CYCLE {}", body.join(" ")).unwrap()
                }
            }
        }
        s
    }
}

/// Splits a canonical fractional perfect matching into edges of weight 1 and the
/// odd cycles of its half-weight support.
pub fn fpm_partition(g: &Graph, m: &FractionalMatching) -> Result<FpmPartition, MatchingError> {
    let n = g.order();
    for &(u, v, w) in &m.weights {
        if w > 2 {
            return Err(MatchingError::BadWeight { weight: w });
        }
        if w > 0 && !g.has_edge(u, v) {
            return Err(MatchingError::NotAnEdge { u, v });
        }
    }
    m.check_loads(n)?;
    let total = m.total();
    if total.doubled() != n as u64 {
        return Err(MatchingError::NotPerfect {
            total,
            half_n: HalfIntegral::from_doubled(n as u64),
        });
    }
    if let Some(reason) = m.non_canonical_reason(n) {
        return Err(MatchingError::NotCanonical(reason));
    }
    let mut parts: Vec<Part> = m
        .weights
        .iter()
        .filter(|&&(_, _, w)| w == 2)
        .map(|&(u, v, _)| Part::K2(u, v))
        .collect();
    parts.extend(
        half_cycles(&m.half_adjacency(n))
            .into_iter()
            .map(Part::OddCycle),
    );
    let p = FpmPartition { parts };
    debug_assert!(p.validate(g).is_ok());
    Ok(p)
}
