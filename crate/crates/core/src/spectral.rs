//! Spectral radius by power iteration, quotient matrices of equitable partitions,
//! and the characteristic polynomials of the extremal families.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::half::HalfIntegral;
use crate::poly::{berkowitz_char_poly, IntPoly, Rational};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest order accepted by [`exact_char_poly`].
pub const MAX_EXACT_ORDER: usize = 16;

/// Iterations between Rayleigh-quotient and residual checks.
const CHECK_EVERY: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("spectral radius of the null graph is undefined")]
    EmptyGraph,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("power iteration did not converge in {iterations} iterations (estimate {estimate}, residual {residual:e})")]
    NotConverged {
        estimate: f64,
        residual: f64,
        iterations: usize,
    },
    #[error("partition is not equitable: vertex {vertex} has {found} neighbours in cell {cell}, expected {expected}")]
    NotEquitable {
        vertex: usize,
        cell: usize,
        found: u64,
        expected: u64,
    },
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("invalid quotient matrix: {0}")]
    BadQuotient(String),
    #[error("exact characteristic polynomial is limited to n <= {MAX_EXACT_ORDER}, got n = {0}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoResult {
    pub value: f64,
    /// `max |(Ax)_i - value * x_i|` for the returned vector scaled to `max x_i = 1`.
    pub residual: f64,
    pub iterations: usize,
    /// Index into [`Graph::components`] of the component attaining the maximum.
    pub component_index: usize,
}

pub fn iteration_cap(n: usize) -> usize {
    200 * n + 10_000
}

/// Spectral radius of the adjacency matrix.
///
/// Each component is iterated separately on `A + I`, which keeps bipartite
/// components from oscillating; the shift is removed from the reported value.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<RhoResult, SpectralError> {
    if g.order() == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::BadTolerance(tol));
    }
    let mut best: Option<RhoResult> = None;
    let mut total_iterations = 0;
    for (ci, comp) in g.components().iter().enumerate() {
        let (value, residual, iterations) = if comp.len() == 1 {
            (0.0, 0.0, 0)
        } else {
            let adj = local_adjacency(g, comp);
            component_radius(&adj, tol)?
        };
        total_iterations += iterations;
        if best.is_none_or(|b| value > b.value) {
            best = Some(RhoResult {
                value,
                residual,
                iterations: 0,
                component_index: ci,
            });
        }
    }
    let mut best = best.expect("at least one component");
    best.iterations = total_iterations;
    Ok(best)
}

fn local_adjacency(g: &Graph, comp: &VertexSet) -> Vec<Vec<usize>> {
    let members = comp.as_slice();
    members
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .map(|v| {
                    members
                        .binary_search(&v)
                        .expect("neighbour in the same component")
                })
                .collect()
        })
        .collect()
}

fn component_radius(adj: &[Vec<usize>], tol: f64) -> Result<(f64, f64, usize), SpectralError> {
    let k = adj.len();
    let cap = iteration_cap(k);
    let mut x = vec![1.0f64; k];
    let mut y = vec![0.0f64; k];
    let mut estimate = 0.0;
    let mut residual = f64::INFINITY;
    for it in 0..=cap {
        for (i, nb) in adj.iter().enumerate() {
            y[i] = nb.iter().map(|&j| x[j]).sum();
        }
        if it % CHECK_EVERY == 0 {
            let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let xx: f64 = x.iter().map(|a| a * a).sum();
            estimate = xy / xx;
            let scale = x.iter().fold(0.0f64, |m, &a| m.max(a.abs()));
            residual = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (b - estimate * a).abs())
                .fold(0.0, f64::max)
                / scale;
            if residual <= tol {
                return Ok((estimate, residual, it));
            }
        }
        // x <- (A + I) x, scaled to unit maximum
        let mut top = 0.0f64;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
            top = top.max(*yi);
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / top;
        }
    }
    Err(SpectralError::NotConverged {
        estimate,
        residual,
        iterations: cap,
    })
}

/// Matrix of an equitable partition: `entries[i][j]` neighbours in cell `j` for
/// every vertex of cell `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    entries: Vec<Vec<u64>>,
    cell_sizes: Vec<usize>,
}

impl QuotientMatrix {
    /// Checks that the entries could come from some graph: `b_ij <= |V_j|`
    /// (`|V_i| - 1` on the diagonal) and `b_ij |V_i| = b_ji |V_j|`.
    pub fn new(entries: Vec<Vec<u64>>, cell_sizes: Vec<usize>) -> Result<Self, SpectralError> {
        let k = cell_sizes.len();
        if k == 0 {
            return Err(SpectralError::BadQuotient("no cells".into()));
        }
        if entries.len() != k || entries.iter().any(|r| r.len() != k) {
            return Err(SpectralError::BadQuotient(format!(
                "entries must be {k} x {k}"
            )));
        }
        if let Some(i) = cell_sizes.iter().position(|&s| s == 0) {
            return Err(SpectralError::BadQuotient(format!("cell {i} is empty")));
        }
        for i in 0..k {
            for j in 0..k {
                let cap = cell_sizes[j] as u64 - u64::from(i == j);
                if entries[i][j] > cap {
                    return Err(SpectralError::BadQuotient(format!(
                        "b[{i}][{j}] = {} exceeds {cap}",
                        entries[i][j]
                    )));
                }
                if entries[i][j] * cell_sizes[i] as u64 != entries[j][i] * cell_sizes[j] as u64 {
                    return Err(SpectralError::BadQuotient(format!(
                        "edge counts between cells {i} and {j} disagree"
                    )));
                }
            }
        }
        Ok(QuotientMatrix {
            entries,
            cell_sizes,
        })
    }

    pub fn k(&self) -> usize {
        self.cell_sizes.len()
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn cell_sizes(&self) -> &[usize] {
        &self.cell_sizes
    }

    pub fn order(&self) -> usize {
        self.cell_sizes.iter().sum()
    }

    /// `det(xI - Q)` with exact integer coefficients.
    pub fn char_poly(&self) -> IntPoly {
        let m: Vec<Vec<i64>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&b| b as i64).collect())
            .collect();
        berkowitz_char_poly(&m).expect("quotient entries are small")
    }
}

/// Quotient matrix of `partition`, after dropping empty cells.
pub fn adjacency_quotient(
    g: &Graph,
    partition: &[VertexSet],
) -> Result<QuotientMatrix, SpectralError> {
    let cells: Vec<&VertexSet> = partition.iter().filter(|c| !c.is_empty()).collect();
    let n = g.order();
    let mut owner = vec![usize::MAX; n];
    for (ci, cell) in cells.iter().enumerate() {
        for v in cell.iter() {
            if v >= n {
                return Err(SpectralError::BadPartition(format!(
                    "vertex {v} out of range"
                )));
            }
            if owner[v] != usize::MAX {
                return Err(SpectralError::BadPartition(format!(
                    "vertex {v} lies in two cells"
                )));
            }
            owner[v] = ci;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(SpectralError::BadPartition(format!(
            "vertex {v} is in no cell"
        )));
    }
    let k = cells.len();
    let counts = |v: usize| {
        let mut c = vec![0u64; k];
        for u in g.neighbors(v) {
            c[owner[u]] += 1;
        }
        c
    };
    let mut entries = Vec::with_capacity(k);
    for cell in &cells {
        let rep = cell.first().expect("non-empty cell");
        let row = counts(rep);
        for v in cell.iter().skip(1) {
            let c = counts(v);
            if let Some(j) = (0..k).find(|&j| c[j] != row[j]) {
                return Err(SpectralError::NotEquitable {
                    vertex: v,
                    cell: j,
                    found: c[j],
                    expected: row[j],
                });
            }
        }
        entries.push(row);
    }
    QuotientMatrix::new(entries, cells.iter().map(|c| c.len()).collect())
}

/// Largest eigenvalue of `Q`.
///
/// `Q` is similar to the symmetric matrix with entries `sqrt(b_ij b_ji)`, which
/// is power-iterated with a unit shift from the all-ones vector.
pub fn quotient_spectral_radius(q: &QuotientMatrix, tol: f64) -> f64 {
    let k = q.k();
    let s: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| ((q.entries[i][j] * q.entries[j][i]) as f64).sqrt())
                .collect()
        })
        .collect();
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let mut x = vec![1.0f64; k];
    let mut estimate = 0.0;
    for it in 0..=iteration_cap(k) {
        let y: Vec<f64> = s
            .iter()
            .map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        if it % CHECK_EVERY == 0 {
            let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let xx: f64 = x.iter().map(|a| a * a).sum();
            estimate = xy / xx;
            let scale = x.iter().fold(0.0f64, |m, &a| m.max(a));
            let residual = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (b - estimate * a).abs())
                .fold(0.0, f64::max)
                / scale;
            if residual <= tol {
                break;
            }
        }
        let top = y.iter().zip(&x).map(|(a, b)| a + b).fold(0.0f64, f64::max);
        x = y.iter().zip(&x).map(|(a, b)| (a + b) / top).collect();
    }
    estimate
}

/// Four times the cubic `f(x, s)` of the family `K_s ∨ (K_{2β*-2s} ∪ t K_1)`:
///
/// `x^3 - (2β*-s-2) x^2 + (2β*s - s^2 - 2β* + s - sn + 1) x`
/// `- 4β*^2 s + 2β*ns + 6β*s^2 - 2ns^2 - 2s^3 + 2sβ* - sn - s^2`.
///
/// The factor four makes every coefficient an integer.
pub fn f_poly_times4(n: u64, beta_star: HalfIntegral, s: u64) -> IntPoly {
    let (n, d, s) = (n as i128, beta_star.doubled() as i128, s as i128);
    IntPoly::from_descending(&[
        4,
        -4 * (d - s - 2),
        4 * (d * s - s * s - d + s - s * n + 1),
        -4 * d * d * s + 4 * d * n * s + 12 * d * s * s - 8 * n * s * s - 8 * s * s * s + 4 * s * d
            - 4 * s * n
            - 4 * s * s,
    ])
}

pub fn char_poly_f(x: f64, n: u64, beta_star: HalfIntegral, s: u64) -> f64 {
    f_poly_times4(n, beta_star, s).eval_f64(x) / 4.0
}

pub fn char_poly_f_exact(x: Rational, n: u64, beta_star: HalfIntegral, s: u64) -> Rational {
    f_poly_times4(n, beta_star, s).eval_exact(x) / Rational::from_integer(4)
}

/// `x^2 - (b - 1) x - b (n - b)`, the quotient polynomial of `K_b ∨ (n - b) K_1`.
pub fn g_poly(n: u64, b: u64) -> IntPoly {
    let (n, b) = (n as i128, b as i128);
    IntPoly::from_descending(&[1, -(b - 1), -b * (n - b)])
}

pub fn char_poly_g(x: f64, n: u64, b: u64) -> f64 {
    g_poly(n, b).eval_f64(x)
}

/// Quotient matrix of `K_s ∨ (K_m ∪ t K_1)` on the cells (clique `K_s`, clique
/// `K_m`, isolated part), with empty cells dropped.
pub fn family_quotient(s: u64, m: u64, t: u64) -> Result<QuotientMatrix, SpectralError> {
    let sizes = [s, m, t];
    let full = [
        [s.saturating_sub(1), m, t],
        [s, m.saturating_sub(1), 0],
        [s, 0, 0],
    ];
    let keep: Vec<usize> = (0..3).filter(|&i| sizes[i] > 0).collect();
    let entries = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| full[i][j]).collect())
        .collect();
    QuotientMatrix::new(entries, keep.iter().map(|&i| sizes[i] as usize).collect())
}

/// A coefficient-wise disagreement between two derivations of the same polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expanded form {expanded} differs from quotient determinant {quotient}")]
pub struct PolyMismatch {
    pub expanded: IntPoly,
    pub quotient: IntPoly,
}

/// Compares `4 f(x, s)` with four times `det(xI - Q)` for the three-cell quotient
/// of `K_s ∨ (K_{2β*-2s} ∪ t K_1)`, `t = n + s - 2β*`. Needs `1 <= s`,
/// `2s <= 2β*` and `t >= 0`; both sides are compared as formal polynomials.
pub fn check_f_against_quotient(
    n: u64,
    beta_star: HalfIntegral,
    s: u64,
) -> Result<(), PolyMismatch> {
    let (ni, d, si) = (n as i64, beta_star.doubled() as i64, s as i64);
    let m = d - 2 * si;
    let t = ni + si - d;
    let q = vec![vec![si - 1, m, t], vec![si, m - 1, 0], vec![si, 0, 0]];
    let det = berkowitz_char_poly(&q).expect("small entries");
    let quotient = IntPoly::new(det.coeffs().iter().map(|c| 4 * c).collect());
    let expanded = f_poly_times4(n, beta_star, s);
    if quotient == expanded {
        Ok(())
    } else {
        Err(PolyMismatch { expanded, quotient })
    }
}

/// `det(xI - A(G))` with exact integer coefficients.
pub fn exact_char_poly(g: &Graph) -> Result<IntPoly, SpectralError> {
    let n = g.order();
    if n > MAX_EXACT_ORDER {
        return Err(SpectralError::TooLarge(n));
    }
    let m: Vec<Vec<i64>> = (0..n)
        .map(|u| (0..n).map(|v| i64::from(g.has_edge(u, v))).collect())
        .collect();
    Ok(berkowitz_char_poly(&m).expect("0/1 matrices of order <= 16 fit in i128"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(g: &Graph) -> f64 {
        spectral_radius(g, DEFAULT_TOL).unwrap().value
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn small_graphs() {
        assert!((rho(&Graph::complete(4)) - 3.0).abs() < 1e-9);
        assert!((rho(&cycle(5)) - 2.0).abs() < 1e-9);
        assert!((rho(&cycle(6)) - 2.0).abs() < 1e-9);
        let star = Graph::complete(1).join(&Graph::empty(3));
        assert!((rho(&star) - 3f64.sqrt()).abs() < 1e-9);
        let g = Graph::complete(1).join(&Graph::complete(5).union(&Graph::empty(2)));
        assert!((rho(&g) - 5.07).abs() < 0.01);
        let g = Graph::complete(1).join(
            &Graph::complete(3)
                .union(&Graph::complete(3))
                .union(&Graph::empty(1)),
        );
        assert!((rho(&g) - 3.73).abs() < 0.01);
        assert_eq!(rho(&Graph::empty(3)), 0.0);
        assert_eq!(
            spectral_radius(&Graph::empty(0), 1e-10),
            Err(SpectralError::EmptyGraph)
        );
        assert!(matches!(
            spectral_radius(&Graph::complete(2), 0.0),
            Err(SpectralError::BadTolerance(_))
        ));
    }

    #[test]
    fn component_bookkeeping() {
        let g = Graph::complete(2)
            .union(&Graph::complete(4))
            .union(&Graph::complete(4));
        let r = spectral_radius(&g, DEFAULT_TOL).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9);
        assert_eq!(r.component_index, 1);
        assert!(r.residual <= DEFAULT_TOL);
    }

    #[test]
    fn slow_paths_report_non_convergence() {
        let n = 400;
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let path = Graph::from_edge_list(n, &edges).unwrap();
        match spectral_radius(&path, 1e-15) {
            Err(SpectralError::NotConverged { estimate, .. }) => {
                assert!((estimate - 2.0).abs() < 1e-3)
            }
            Ok(r) => assert!(r.residual <= 1e-15),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn quotients() {
        let g = Graph::complete(2).join(&Graph::empty(5));
        let q = adjacency_quotient(&g, &[VertexSet::range(0, 2), VertexSet::range(2, 7)]).unwrap();
        assert_eq!(q.entries(), &[vec![1, 5], vec![2, 0]]);
        let r = quotient_spectral_radius(&q, DEFAULT_TOL);
        assert!((r - (1.0 + 41f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!((r - rho(&g)).abs() < 1e-9);
        assert_eq!(q.char_poly(), g_poly(7, 2));

        let c5 = cycle(5);
        let q = adjacency_quotient(&c5, &[VertexSet::range(0, 5)]).unwrap();
        assert_eq!(q.entries(), &[vec![2]]);
        assert!((quotient_spectral_radius(&q, DEFAULT_TOL) - 2.0).abs() < 1e-12);

        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let q = adjacency_quotient(&p3, &[VertexSet::new([0, 2]), VertexSet::new([1])]).unwrap();
        assert_eq!(q.entries(), &[vec![0, 1], vec![2, 0]]);

        let with_empty =
            adjacency_quotient(&c5, &[VertexSet::default(), VertexSet::range(0, 5)]).unwrap();
        assert_eq!(with_empty.k(), 1);
    }

    #[test]
    fn quotient_rejections() {
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let err =
            adjacency_quotient(&p3, &[VertexSet::new([0, 1]), VertexSet::new([2])]).unwrap_err();
        assert!(matches!(err, SpectralError::NotEquitable { vertex: 1, .. }));
        assert!(matches!(
            adjacency_quotient(&p3, &[VertexSet::new([0, 1])]),
            Err(SpectralError::BadPartition(_))
        ));
        assert!(matches!(
            adjacency_quotient(&p3, &[VertexSet::new([0, 1]), VertexSet::new([1, 2])]),
            Err(SpectralError::BadPartition(_))
        ));
        assert!(QuotientMatrix::new(vec![vec![0, 3], vec![1, 0]], vec![1, 2]).is_err());
        assert!(QuotientMatrix::new(vec![vec![2]], vec![2]).is_err());
    }

    #[test]
    fn family_quotient_matches_graph() {
        let (s, m, t) = (2u64, 3u64, 4u64);
        let g = Graph::complete(2).join(&Graph::complete(3).union(&Graph::empty(4)));
        let cells = [
            VertexSet::range(0, 2),
            VertexSet::range(2, 5),
            VertexSet::range(5, 9),
        ];
        assert_eq!(
            adjacency_quotient(&g, &cells).unwrap(),
            family_quotient(s, m, t).unwrap()
        );
    }

    #[test]
    fn expanded_f_is_the_quotient_determinant() {
        for n in 2..=30u64 {
            for d in 2..=n {
                for s in 1..=d / 2 {
                    if n + s < d {
                        continue;
                    }
                    check_f_against_quotient(n, HalfIntegral::from_doubled(d), s).unwrap();
                }
            }
        }
    }

    #[test]
    fn f_at_s_one_and_at_the_top() {
        for n in 3..=40u64 {
            for d in 2..n {
                let bs = HalfIntegral::from_doubled(d);
                let (ni, di) = (n as i128, d as i128);
                // 4 (x^3 - (2β*-3) x^2 - (n-1) x - 4β*^2 + 2β* n + 8β* - 3n - 3)
                let cubic = IntPoly::from_descending(&[
                    4,
                    -4 * (di - 3),
                    -4 * (ni - 1),
                    -4 * di * di + 4 * di * ni + 16 * di - 12 * ni - 12,
                ]);
                assert_eq!(f_poly_times4(n, bs, 1), cubic);
            }
            let top = f_poly_times4(n, HalfIntegral::from_doubled(n - 1), 1);
            let ni = n as i128;
            assert_eq!(
                top,
                IntPoly::from_descending(&[4, -4 * (ni - 4), -4 * (ni - 1), 8 * (ni - 4)])
            );
        }
        assert_eq!(
            char_poly_f_exact(
                Rational::from_integer(0),
                8,
                HalfIntegral::from_doubled(7),
                1
            ),
            Rational::from_integer(8)
        );
    }

    #[test]
    fn g_roots() {
        let root = |n, b| {
            let bf = b as f64;
            (bf - 1.0 + ((bf - 1.0).powi(2) + 4.0 * bf * (n as f64 - bf)).sqrt()) / 2.0
        };
        for n in 1..30u64 {
            for b in 0..=n {
                assert!(char_poly_g(root(n, b), n, b).abs() < 1e-8 * (1.0 + (n * n) as f64));
            }
        }
        assert!((root(6, 2) - (1.0 + 33f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((root(4, 1) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exact_polys() {
        assert_eq!(
            exact_char_poly(&Graph::complete(3)).unwrap().to_string(),
            "x^3 - 3x - 2"
        );
        assert_eq!(
            exact_char_poly(&Graph::empty(2)).unwrap().to_string(),
            "x^2"
        );
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_char_poly(&p3).unwrap().to_string(), "x^3 - 2x");
        assert_eq!(
            exact_char_poly(&Graph::empty(17)),
            Err(SpectralError::TooLarge(17))
        );
        assert!(exact_char_poly(&Graph::complete(16)).is_ok());
    }
}
