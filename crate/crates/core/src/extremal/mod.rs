//! Extremal families `K_s ∨ (K_m ∪ t K_1)`, their spectral thresholds, and the
//! regime tables that predict the largest spectral radius at a given (fractional)
//! matching number.

mod roots;

use std::fmt::Write as _;

use thiserror::Error;

pub use roots::{largest_real_root, RootError, BRACKET_WIDTH};

use crate::formats::to_graph6;
use crate::graph::{Graph, VertexSet};
use crate::half::HalfIntegral;
use crate::numfmt::sig12;
use crate::poly::IntPoly;
use crate::spectral::{family_quotient, g_poly, quotient_spectral_radius, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("invalid family parameters: {0}")]
    InvalidSpec(String),
    #[error("2β* = {doubled} exceeds n = {n}")]
    BetaStarTooLarge { doubled: u64, n: u64 },
    #[error("β* must be positive")]
    BetaStarZero,
    #[error("β = {beta} must satisfy 1 <= β <= n/2 = {n}/2")]
    InvalidBeta { beta: u64, n: u64 },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Parameters of `K_s ∨ (K_{2β*-2s} ∪ t K_1)` with `t = n + s - 2β*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalSpec {
    pub n: u64,
    pub beta_star: HalfIntegral,
    pub s: u64,
}

impl ExtremalSpec {
    pub fn new(n: u64, beta_star: HalfIntegral, s: u64) -> Result<Self, ExtremalError> {
        let spec = ExtremalSpec { n, beta_star, s };
        spec.validate()?;
        Ok(spec)
    }

    /// Size of the middle clique, `2β* - 2s`.
    pub fn middle(&self) -> u64 {
        self.beta_star.doubled() - 2 * self.s
    }

    /// Number of isolated vertices in the union part, `n + s - 2β*`.
    pub fn t(&self) -> u64 {
        self.n + self.s - self.beta_star.doubled()
    }

    pub fn validate(&self) -> Result<(), ExtremalError> {
        let d = self.beta_star.doubled();
        if d > self.n {
            return Err(ExtremalError::InvalidSpec(format!(
                "2β* = {d} exceeds n = {}",
                self.n
            )));
        }
        if 2 * self.s > d {
            return Err(ExtremalError::InvalidSpec(format!(
                "s = {} exceeds β* = {}",
                self.s, self.beta_star
            )));
        }
        // t >= s is equivalent to 2β* <= n, checked above
        if d - 2 * self.s == 1 {
            return Err(ExtremalError::InvalidSpec(format!(
                "middle clique 2β* - 2s = 1 would be a single vertex, giving fractional matching number {} instead of {}",
                self.s, self.beta_star
            )));
        }
        Ok(())
    }

    /// Cells (`K_s`, middle clique, isolated part); some may be empty.
    pub fn cells(&self) -> [VertexSet; 3] {
        let (s, m) = (self.s as usize, self.middle() as usize);
        let n = self.n as usize;
        [
            VertexSet::range(0, s),
            VertexSet::range(s, s + m),
            VertexSet::range(s + m, n),
        ]
    }
}

/// `K_s ∨ (K_m ∪ t K_1)` with `K_s` on `0..s`, `K_m` next, isolated vertices last.
pub fn family_graph(s: u64, m: u64, t: u64) -> Graph {
    Graph::complete(s as usize).join(&Graph::complete(m as usize).union(&Graph::empty(t as usize)))
}

pub fn build_extremal(spec: ExtremalSpec) -> Result<Graph, ExtremalError> {
    spec.validate()?;
    Ok(family_graph(spec.s, spec.middle(), spec.t()))
}

/// `2β*` of `K_s ∨ (K_m ∪ t K_1)`, as the minimum fractional transversal.
///
/// Averaging over the automorphisms makes some optimal transversal constant on
/// each of the three cells, and half-integrality leaves 27 candidates.
pub fn family_doubled_beta_star(s: u64, m: u64, t: u64) -> u64 {
    let mut best = u64::MAX;
    for a in 0..=2u64 {
        for b in 0..=2u64 {
            for c in 0..=2u64 {
                let covered = (s < 2 || a >= 1)
                    && (m < 2 || b >= 1)
                    && (s == 0 || m == 0 || a + b >= 2)
                    && (s == 0 || t == 0 || a + c >= 2);
                if covered {
                    best = best.min(s * a + m * b + t * c);
                }
            }
        }
    }
    best
}

/// Matching number of `K_s ∨ (K_m ∪ t K_1)`.
pub fn family_beta(s: u64, m: u64, t: u64) -> u64 {
    let n = s + m + t;
    // each vertex of K_s covers one isolated vertex, the rest pair up inside the cliques
    let absorbed = s.min(t);
    (2 * absorbed + (s - absorbed + m)).min(n) / 2
}

/// Largest root of `x^3 - (2β*-3) x^2 - (n-1) x - 4β*^2 + 2β*n + 8β* - 3n - 3`,
/// scaled by four to clear the halves.
pub fn theta_cubic_poly(n: u64, beta_star: HalfIntegral) -> IntPoly {
    let (n, d) = (n as i128, beta_star.doubled() as i128);
    IntPoly::from_descending(&[
        4,
        -4 * (d - 3),
        -4 * (n - 1),
        -4 * d * d + 4 * d * n + 16 * d - 12 * n - 12,
    ])
}

pub fn theta_cubic(n: u64, beta_star: HalfIntegral) -> Result<f64, ExtremalError> {
    if beta_star.doubled() + 1 > n {
        return Err(ExtremalError::Precondition(format!(
            "θ(n, β*) needs 2β* + 1 <= n, got n = {n}, β* = {beta_star}"
        )));
    }
    Ok(largest_real_root(&theta_cubic_poly(n, beta_star))?)
}

/// `x^3 - (n-4) x^2 - (n-1) x + 2(n-4)`.
pub fn theta_n_poly(n: u64) -> IntPoly {
    let n = n as i128;
    IntPoly::from_descending(&[1, -(n - 4), -(n - 1), 2 * (n - 4)])
}

pub fn theta_n(n: u64) -> Result<f64, ExtremalError> {
    if n < 3 {
        return Err(ExtremalError::Precondition(format!(
            "θ(n) needs n >= 3, got {n}"
        )));
    }
    Ok(largest_real_root(&theta_n_poly(n))?)
}

/// Spectral radius of `K_b ∨ (n - b) K_1`: `(b - 1 + sqrt((b-1)^2 + 4b(n-b))) / 2`.
pub fn rho_join_formula(n: u64, b: u64) -> f64 {
    let (n, b) = (n as f64, b as f64);
    (b - 1.0 + ((b - 1.0).powi(2) + 4.0 * b * (n - b)).sqrt()) / 2.0
}

/// Quotient cubic of `K_1 ∨ (K_{2β-1} ∪ (n-2β) K_1)`:
/// `x^3 - (2β-2) x^2 - (n-1) x + 2(β-1)(n-2β)`.
pub fn matching_theta_poly(n: u64, beta: u64) -> IntPoly {
    let (n, b) = (n as i128, beta as i128);
    IntPoly::from_descending(&[1, -(2 * b - 2), -(n - 1), 2 * (b - 1) * (n - 2 * b)])
}

/// The alternative reading with two linear terms and no quadratic term:
/// `x^3 - (2β-2) x + (1-n) x + 2(β-1)(n-2β)`.
pub fn matching_theta_poly_two_linear_terms(n: u64, beta: u64) -> IntPoly {
    let (n, b) = (n as i128, beta as i128);
    IntPoly::from_descending(&[1, 0, -(2 * b - 2) + (1 - n), 2 * (b - 1) * (n - 2 * b)])
}

/// Spectral radius of `K_1 ∨ (K_{2β-1} ∪ (n-2β) K_1)`, from its quotient matrix.
pub fn matching_theta(n: u64, beta: u64) -> Result<f64, ExtremalError> {
    if beta == 0 || 2 * beta > n {
        return Err(ExtremalError::InvalidBeta { beta, n });
    }
    let q = family_quotient(1, 2 * beta - 1, n - 2 * beta).expect("valid family quotient");
    Ok(quotient_spectral_radius(&q, DEFAULT_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `K_n`, bound `n - 1`.
    Complete,
    /// `K_1 ∨ (K_m ∪ t K_1)` with a cubic threshold.
    ApexCubic,
    /// `K_{c} ∪ (n - c) K_1`, bound `c - 1`.
    CliquePlusIsolated,
    /// Both the clique-plus-isolated graph and the join graph reach the bound.
    Tie,
    /// `K_b ∨ (n - b) K_1`, bound from the join quadratic.
    Join,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Complete => "complete",
            Regime::ApexCubic => "apex-cubic",
            Regime::CliquePlusIsolated => "clique-plus-isolated",
            Regime::Tie => "tie",
            Regime::Join => "join",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalGraph {
    pub label: String,
    pub graph: Graph,
    /// The graph has the (fractional) matching number of the class it is predicted for.
    pub in_class: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimePrediction {
    pub regime: Regime,
    pub bound: f64,
    pub extremal: Vec<ExtremalGraph>,
    /// Some listed graph lies in the class, so the bound is reached there.
    pub bound_is_attained: bool,
}

impl RegimePrediction {
    fn new(regime: Regime, bound: f64, extremal: Vec<ExtremalGraph>) -> Self {
        let bound_is_attained = extremal.iter().any(|e| e.in_class);
        RegimePrediction {
            regime,
            bound,
            extremal,
            bound_is_attained,
        }
    }

    /// Extremal graphs that belong to the class.
    pub fn in_class_graphs(&self) -> impl Iterator<Item = &ExtremalGraph> {
        self.extremal.iter().filter(|e| e.in_class)
    }

    /// `regime`, `bound` and one `extremal` line per graph (graph6, or the
    /// order for graphs too large to encode) with its class membership.
    pub fn to_record(&self) -> String {
        let mut s = format!(
            "regime {}\nbound {}\n",
            self.regime.tag(),
            sig12(self.bound)
        );
        for e in &self.extremal {
            let code = to_graph6(&e.graph).unwrap_or_else(|_| format!("n={}", e.graph.order()));
            let membership = if e.in_class {
                "in-class"
            } else {
                "out-of-class"
            };
            writeln!(s, "extremal {code} {membership} {}", e.label).unwrap();
        }
        s
    }
}

fn complete_entry(n: u64, in_class: bool) -> ExtremalGraph {
    ExtremalGraph {
        label: format!("K_{n}"),
        graph: Graph::complete(n as usize),
        in_class,
    }
}

fn clique_plus_isolated(c: u64, n: u64) -> Graph {
    family_graph(0, c, n - c)
}

fn join_graph(b: u64, n: u64) -> Graph {
    family_graph(b, 0, n - b)
}

fn check_beta_star(n: u64, beta_star: HalfIntegral) -> Result<u64, ExtremalError> {
    let d = beta_star.doubled();
    if d == 0 {
        return Err(ExtremalError::BetaStarZero);
    }
    if d > n {
        return Err(ExtremalError::BetaStarTooLarge { doubled: d, n });
    }
    Ok(d)
}

/// Largest spectral radius among connected graphs on `n` vertices with
/// fractional matching number `β*`, with the graphs predicted to reach it.
pub fn predicted_maximizer_connected(
    n: u64,
    beta_star: HalfIntegral,
) -> Result<RegimePrediction, ExtremalError> {
    let d = check_beta_star(n, beta_star)?;
    let ceil = beta_star.ceil();
    if n == d {
        return Ok(RegimePrediction::new(
            Regime::Complete,
            (n - 1) as f64,
            vec![complete_entry(n, n >= 2)],
        ));
    }
    if n < (3 * ceil).saturating_sub(3) {
        let (m, t) = (d - 2, n - d + 1);
        let bound = theta_cubic(n, beta_star)?;
        return Ok(RegimePrediction::new(
            Regime::ApexCubic,
            bound,
            vec![ExtremalGraph {
                label: format!("K_1 v (K_{m} u {t}K_1)"),
                graph: family_graph(1, m, t),
                in_class: family_doubled_beta_star(1, m, t) == d,
            }],
        ));
    }
    Ok(join_prediction(n, d))
}

fn join_prediction(n: u64, d: u64) -> RegimePrediction {
    let b = d / 2;
    RegimePrediction::new(
        Regime::Join,
        rho_join_formula(n, b),
        vec![ExtremalGraph {
            label: format!("K_{b} v {}K_1", n - b),
            graph: join_graph(b, n),
            in_class: family_doubled_beta_star(b, 0, n - b) == d,
        }],
    )
}

/// Largest spectral radius among all graphs on `n` vertices with fractional
/// matching number `β*`. The clique-plus-isolated and tie regimes use the bound
/// `2β* - 1`, the spectral radius of `K_{2β*}`.
pub fn predicted_maximizer_general(
    n: u64,
    beta_star: HalfIntegral,
) -> Result<RegimePrediction, ExtremalError> {
    let d = check_beta_star(n, beta_star)?;
    let cutoff = (3 * beta_star.ceil()).saturating_sub(1);
    if n == d {
        return Ok(RegimePrediction::new(
            Regime::Complete,
            (n - 1) as f64,
            vec![complete_entry(n, n >= 2)],
        ));
    }
    let clique = || ExtremalGraph {
        label: format!("K_{d} u {}K_1", n - d),
        graph: clique_plus_isolated(d, n),
        in_class: family_doubled_beta_star(0, d, n - d) == d,
    };
    if n < cutoff {
        return Ok(RegimePrediction::new(
            Regime::CliquePlusIsolated,
            (d - 1) as f64,
            vec![clique()],
        ));
    }
    if n == cutoff {
        let join = join_prediction(n, d).extremal.remove(0);
        return Ok(RegimePrediction::new(
            Regime::Tie,
            (d - 1) as f64,
            vec![join, clique()],
        ));
    }
    Ok(join_prediction(n, d))
}

fn check_beta(n: u64, beta: u64) -> Result<(), ExtremalError> {
    if beta == 0 || 2 * beta > n {
        return Err(ExtremalError::InvalidBeta { beta, n });
    }
    Ok(())
}

fn beta_join(n: u64, beta: u64) -> RegimePrediction {
    RegimePrediction::new(
        Regime::Join,
        rho_join_formula(n, beta),
        vec![ExtremalGraph {
            label: format!("K_{beta} v {}K_1", n - beta),
            graph: join_graph(beta, n),
            in_class: family_beta(beta, 0, n - beta) == beta,
        }],
    )
}

/// Largest spectral radius among all graphs on `n` vertices with matching number `β`.
pub fn matching_bound_general(n: u64, beta: u64) -> Result<RegimePrediction, ExtremalError> {
    check_beta(n, beta)?;
    if n == 2 * beta || n == 2 * beta + 1 {
        return Ok(RegimePrediction::new(
            Regime::Complete,
            (n - 1) as f64,
            vec![complete_entry(n, true)],
        ));
    }
    let c = 2 * beta + 1;
    let clique = || ExtremalGraph {
        label: format!("K_{c} u {}K_1", n - c),
        graph: clique_plus_isolated(c, n),
        in_class: family_beta(0, c, n - c) == beta,
    };
    if n < 3 * beta + 2 {
        return Ok(RegimePrediction::new(
            Regime::CliquePlusIsolated,
            (2 * beta) as f64,
            vec![clique()],
        ));
    }
    if n == 3 * beta + 2 {
        let join = beta_join(n, beta).extremal.remove(0);
        return Ok(RegimePrediction::new(
            Regime::Tie,
            (2 * beta) as f64,
            vec![join, clique()],
        ));
    }
    Ok(beta_join(n, beta))
}

/// Largest spectral radius among connected graphs on `n` vertices with matching
/// number `β`. The middle regime's threshold is the spectral radius of
/// `K_1 ∨ (K_{2β-1} ∪ (n-2β) K_1)`, computed from its quotient matrix.
pub fn matching_bound_connected(n: u64, beta: u64) -> Result<RegimePrediction, ExtremalError> {
    check_beta(n, beta)?;
    if n == 2 * beta || n == 2 * beta + 1 {
        return Ok(RegimePrediction::new(
            Regime::Complete,
            (n - 1) as f64,
            vec![complete_entry(n, true)],
        ));
    }
    if n < 3 * beta {
        let (m, t) = (2 * beta - 1, n - 2 * beta);
        return Ok(RegimePrediction::new(
            Regime::ApexCubic,
            matching_theta(n, beta)?,
            vec![ExtremalGraph {
                label: format!("K_1 v (K_{m} u {t}K_1)"),
                graph: family_graph(1, m, t),
                in_class: family_beta(1, m, t) == beta,
            }],
        ));
    }
    Ok(beta_join(n, beta))
}

/// Largest root of the join quadratic, as a polynomial, for cross-checks.
pub fn join_poly(n: u64, b: u64) -> IntPoly {
    g_poly(n, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{fractional_matching_number, matching_number};
    use crate::spectral::spectral_radius;

    fn rho(g: &Graph) -> f64 {
        spectral_radius(g, DEFAULT_TOL).unwrap().value
    }

    fn h(d: u64) -> HalfIntegral {
        HalfIntegral::from_doubled(d)
    }

    #[test]
    fn builds_named_graphs() {
        let g = build_extremal(ExtremalSpec::new(8, h(7), 1).unwrap()).unwrap();
        assert!(g
            .is_isomorphic(&Graph::complete(1).join(&Graph::complete(5).union(&Graph::empty(2))))
            .unwrap());
        let g = build_extremal(ExtremalSpec::new(6, h(4), 0).unwrap()).unwrap();
        assert!(g
            .is_isomorphic(&Graph::complete(4).union(&Graph::empty(2)))
            .unwrap());
        let g = build_extremal(ExtremalSpec::new(7, h(4), 2).unwrap()).unwrap();
        assert!(g
            .is_isomorphic(&Graph::complete(2).join(&Graph::empty(5)))
            .unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ExtremalSpec::new(5, h(6), 0).is_err());
        assert!(ExtremalSpec::new(8, h(4), 3).is_err());
        let err = ExtremalSpec::new(8, h(5), 2).unwrap_err();
        assert!(err.to_string().contains("middle clique"), "{err}");
    }

    #[test]
    fn family_closed_forms_match_matching_module() {
        for s in 0..5 {
            for m in 0..6 {
                for t in 0..6 {
                    let g = family_graph(s, m, t);
                    assert_eq!(
                        fractional_matching_number(&g).doubled(),
                        family_doubled_beta_star(s, m, t),
                        "s={s} m={m} t={t}"
                    );
                    assert_eq!(
                        matching_number(&g).size() as u64,
                        family_beta(s, m, t),
                        "s={s} m={m} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn thresholds() {
        assert!((theta_n(8).unwrap() - 5.07).abs() < 0.01);
        assert!((theta_n(4).unwrap() - 3f64.sqrt()).abs() < 1e-9);
        assert!((rho_join_formula(6, 2) - (1.0 + 33f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((rho_join_formula(4, 1) - 3f64.sqrt()).abs() < 1e-12);
        assert!((rho_join_formula(8, 2) - 4.0).abs() < 1e-12);
        assert!(theta_n(2).is_err());
        assert!(theta_cubic(9, h(9)).is_err());
        let t = theta_cubic(10, h(9)).unwrap();
        assert!((t - rho(&family_graph(1, 7, 2))).abs() < 1e-8);
    }

    #[test]
    fn two_linear_term_cubic_differs_from_quotient_cubic() {
        let q = matching_theta(8, 3).unwrap();
        assert!((largest_real_root(&matching_theta_poly(8, 3)).unwrap() - q).abs() < 1e-9);
        assert!(
            (largest_real_root(&matching_theta_poly_two_linear_terms(8, 3)).unwrap() - q).abs()
                > 0.1
        );
    }

    #[test]
    fn connected_regimes() {
        let p = predicted_maximizer_connected(6, h(6)).unwrap();
        assert_eq!((p.regime, p.bound), (Regime::Complete, 5.0));
        let p = predicted_maximizer_connected(10, h(9)).unwrap();
        assert_eq!(p.regime, Regime::ApexCubic);
        assert!(p.extremal[0]
            .graph
            .is_isomorphic(&family_graph(1, 7, 2))
            .unwrap());
        let p = predicted_maximizer_connected(10, h(6)).unwrap();
        assert_eq!(p.regime, Regime::Join);
        assert!((p.bound - (2.0 + 88f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(predicted_maximizer_connected(5, h(6)).is_err());
    }

    #[test]
    fn general_regimes() {
        let p = predicted_maximizer_general(8, h(5)).unwrap();
        assert_eq!((p.regime, p.bound, p.extremal.len()), (Regime::Tie, 4.0, 2));
        assert_eq!(
            p.extremal.iter().map(|e| e.in_class).collect::<Vec<_>>(),
            vec![false, true]
        );
        let p = predicted_maximizer_general(7, h(5)).unwrap();
        assert_eq!((p.regime, p.bound), (Regime::CliquePlusIsolated, 4.0));
        let p = predicted_maximizer_general(4, h(4)).unwrap();
        assert_eq!((p.regime, p.bound), (Regime::Complete, 3.0));
        let p = predicted_maximizer_general(8, h(6)).unwrap();
        assert_eq!(p.regime, Regime::Tie);
        assert!(p.extremal.iter().all(|e| e.in_class));
    }

    #[test]
    fn matching_regimes() {
        let p = matching_bound_general(8, 2).unwrap();
        assert_eq!((p.regime, p.bound, p.extremal.len()), (Regime::Tie, 4.0, 2));
        let p = matching_bound_connected(12, 3).unwrap();
        assert_eq!(p.regime, Regime::Join);
        assert!((p.bound - rho_join_formula(12, 3)).abs() < 1e-15);
        let p = matching_bound_general(6, 3).unwrap();
        assert_eq!((p.regime, p.bound), (Regime::Complete, 5.0));
        assert!(matching_bound_general(5, 3).is_err());
    }

    #[test]
    fn attainment_up_to_forty() {
        for n in 1..=40u64 {
            for d in 1..=n {
                for p in [
                    predicted_maximizer_connected(n, h(d)),
                    predicted_maximizer_general(n, h(d)),
                ] {
                    let p = p.unwrap();
                    for e in &p.extremal {
                        assert!(
                            (rho(&e.graph) - p.bound).abs() < 1e-8,
                            "n={n} d={d} {}",
                            e.label
                        );
                    }
                }
            }
            for beta in 1..=n / 2 {
                for p in [
                    matching_bound_general(n, beta),
                    matching_bound_connected(n, beta),
                ] {
                    let p = p.unwrap();
                    for e in &p.extremal {
                        assert!(
                            (rho(&e.graph) - p.bound).abs() < 1e-8,
                            "n={n} β={beta} {}",
                            e.label
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn record_text() {
        let p = predicted_maximizer_general(7, h(5)).unwrap();
        let rec = p.to_record();
        assert!(
            rec.starts_with("regime clique-plus-isolated\nbound 4.00000000000\n"),
            "{rec}"
        );
        assert!(rec.contains("in-class K_5 u 2K_1"));
    }
}
