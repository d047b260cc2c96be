//! Spectral sufficient conditions for (fractional) matchings, applied to a graph.
//!
//! Each certificate compares `ρ(G)` with a threshold that depends only on `n`
//! (and a target value). Comparisons keep a guard band: a certificate fires only
//! when the strict inequality holds by more than [`GUARD`] plus the numerical
//! error of `ρ`; values within [`GUARD`] of the threshold are reported as equal.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::extremal::{matching_theta, rho_join_formula, theta_cubic, theta_n};
use crate::formats::to_graph6;
use crate::graph::Graph;
use crate::half::HalfIntegral;
use crate::matching::{fractional_matching_number, matching_number};
use crate::spectral::{spectral_radius, SpectralError, DEFAULT_TOL};

pub const GUARD: f64 = 1e-9;

/// Truth values are computed by default up to this order.
pub const DEFAULT_TRUTH_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NotApplicable,
    Fired,
    /// `ρ` equals the threshold within the guard band.
    AtThreshold,
    /// The inequality holds, but not by more than the error of `ρ`.
    Inconclusive,
    NotFired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    FractionalPerfectMatching,
    PerfectMatching,
    BetaStarAtLeast(HalfIntegral),
    BetaAtLeast(u64),
}

impl Guarantee {
    pub fn holds(self, n: usize, beta: usize, beta_star: HalfIntegral) -> bool {
        match self {
            Guarantee::FractionalPerfectMatching => beta_star.doubled() == n as u64,
            Guarantee::PerfectMatching => 2 * beta == n,
            Guarantee::BetaStarAtLeast(h) => beta_star >= h,
            Guarantee::BetaAtLeast(b) => beta as u64 >= b,
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarantee::FractionalPerfectMatching => write!(f, "beta_star = n/2"),
            Guarantee::PerfectMatching => write!(f, "beta = n/2"),
            Guarantee::BetaStarAtLeast(h) => write!(f, "beta_star >= {h}"),
            Guarantee::BetaAtLeast(b) => write!(f, "beta >= {b}"),
        }
    }
}

impl Serialize for Guarantee {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub name: String,
    pub applicable: bool,
    pub fired: bool,
    pub guarantee: Guarantee,
    /// Whether the guarantee holds for this graph, when ground truth was computed.
    pub truth: Option<bool>,
    pub threshold: Option<f64>,
    pub status: Status,
}

impl CertificateRecord {
    pub fn is_unsound(&self) -> bool {
        self.fired && self.truth == Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    /// graph6 code, absent for graphs too large to encode.
    pub graph: Option<String>,
    pub n: usize,
    pub connected: bool,
    pub delta: Option<usize>,
    pub rho: Option<f64>,
    /// Bound on the error of `rho` used in the guard band.
    pub rho_tol: f64,
    pub beta: usize,
    pub beta_star_doubled: u64,
    pub certificates: Vec<CertificateRecord>,
    /// No fired certificate has a false guarantee.
    pub sound: bool,
}

impl CertificateReport {
    pub fn unsound(&self) -> impl Iterator<Item = &CertificateRecord> {
        self.certificates.iter().filter(|c| c.is_unsound())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy)]
enum Direction {
    Below,
    Above,
}

/// Thresholds for one order `n`, computed once and reused across graphs.
#[derive(Debug, Clone)]
pub struct Certifier {
    n: usize,
    fpm: Option<f64>,
    pm: Option<f64>,
    /// Indexed by `2β*`, for `1 <= 2β* <= n - 1`.
    beta_star: Vec<Option<(f64, &'static str)>>,
    /// Indexed by `β`, for `1 <= β <= (n - 2) / 2`.
    beta: Vec<Option<(f64, &'static str)>>,
}

impl Certifier {
    pub fn new(n: usize) -> Self {
        let nu = n as u64;
        let fpm = match n {
            0..=2 => None,
            3..=7 | 9 => Some(rho_join_formula(nu, (nu - 1) / 2)),
            _ => Some(theta_n(nu).expect("n >= 8")),
        };
        let pm = match n {
            4 => Some(3f64.sqrt()),
            6 => Some((1.0 + 33f64.sqrt()) / 2.0),
            n if n >= 8 && n % 2 == 0 => Some(theta_n(nu).expect("n >= 8")),
            _ => None,
        };
        let beta_star = (0..n).map(|k| beta_star_threshold(nu, k as u64)).collect();
        let beta = (0..=n.saturating_sub(2) / 2)
            .map(|b| beta_threshold(nu, b as u64))
            .collect();
        Certifier {
            n,
            fpm,
            pm,
            beta_star,
            beta,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Threshold of the fractional-perfect-matching certificate.
    pub fn fpm_threshold(&self) -> Option<f64> {
        self.fpm
    }

    /// Threshold of the perfect-matching certificate (even `n`).
    pub fn pm_threshold(&self) -> Option<f64> {
        self.pm
    }

    /// Threshold and case for target `β*` with `2β* = k`, `1 <= k <= n - 1`.
    pub fn beta_star_threshold(&self, k: u64) -> Option<(f64, &'static str)> {
        self.beta_star.get(k as usize).copied().flatten()
    }

    pub fn beta_threshold(&self, beta: u64) -> Option<(f64, &'static str)> {
        self.beta.get(beta as usize).copied().flatten()
    }

    /// Runs every certificate: the minimum-degree condition, the fractional and
    /// integral perfect matching conditions, `β* >= k/2 + 1/2` for every
    /// `1 <= k <= n - 1`, and `β >= b + 1` for every `1 <= b <= (n - 2)/2`.
    pub fn certify(&self, g: &Graph, verify_truth: bool) -> CertificateReport {
        assert_eq!(g.order(), self.n, "certifier built for another order");
        let n = self.n;
        let connected = g.is_connected();
        let delta = g.min_degree().ok();
        let (rho, rho_tol) = match spectral_radius(g, DEFAULT_TOL) {
            Ok(r) => (Some(r.value), error_bound(n, r.residual)),
            Err(SpectralError::NotConverged {
                estimate, residual, ..
            }) => (Some(estimate), error_bound(n, residual)),
            Err(_) => (None, 0.0),
        };
        let beta = matching_number(g).size();
        let beta_star = fractional_matching_number(g);
        let truth = |gu: Guarantee| verify_truth.then(|| gu.holds(n, beta, beta_star));
        let record = |name: String, threshold: Option<f64>, dir: Direction, gu: Guarantee| {
            let status = match (threshold, rho) {
                (Some(th), Some(r)) => compare(r, th, rho_tol, dir),
                _ => Status::NotApplicable,
            };
            CertificateRecord {
                name,
                applicable: status != Status::NotApplicable,
                fired: status == Status::Fired,
                guarantee: gu,
                truth: truth(gu),
                threshold,
                status,
            }
        };

        let mut certs = Vec::new();
        let min_degree = (connected && n >= 2).then(|| {
            let d = delta.expect("n >= 2") as f64;
            d * ((n as f64 + 1.0) / (n as f64 - 1.0)).sqrt()
        });
        certs.push(record(
            "min_degree_fpm".into(),
            min_degree,
            Direction::Below,
            Guarantee::FractionalPerfectMatching,
        ));
        certs.push(record(
            "spectral_fpm".into(),
            self.fpm.filter(|_| connected),
            Direction::Above,
            Guarantee::FractionalPerfectMatching,
        ));
        certs.push(record(
            "spectral_pm".into(),
            self.pm.filter(|_| connected),
            Direction::Above,
            Guarantee::PerfectMatching,
        ));
        for k in 1..n as u64 {
            let target = HalfIntegral::from_doubled(k);
            let th = self
                .beta_star_threshold(k)
                .filter(|_| connected)
                .map(|(t, _)| t);
            certs.push(record(
                format!("spectral_beta_star:{target}"),
                th,
                Direction::Above,
                Guarantee::BetaStarAtLeast(target.next()),
            ));
        }
        for b in 1..=(n.saturating_sub(2) / 2) as u64 {
            let th = self.beta_threshold(b).filter(|_| connected).map(|(t, _)| t);
            certs.push(record(
                format!("spectral_beta:{b}"),
                th,
                Direction::Above,
                Guarantee::BetaAtLeast(b + 1),
            ));
        }
        let sound = !certs.iter().any(|c| c.is_unsound());
        CertificateReport {
            graph: to_graph6(g).ok(),
            n,
            connected,
            delta,
            rho,
            rho_tol,
            beta,
            beta_star_doubled: beta_star.doubled(),
            certificates: certs,
            sound,
        }
    }
}

/// A Rayleigh quotient with infinity-norm residual `r` (vector scaled to unit
/// maximum) lies within `sqrt(n) r` of an eigenvalue.
fn error_bound(n: usize, residual: f64) -> f64 {
    (n as f64).sqrt() * residual
}

fn compare(rho: f64, threshold: f64, err: f64, dir: Direction) -> Status {
    let margin = match dir {
        Direction::Above => rho - threshold,
        Direction::Below => threshold - rho,
    };
    if margin.abs() <= GUARD {
        Status::AtThreshold
    } else if margin > GUARD + err {
        Status::Fired
    } else if margin > 0.0 {
        Status::Inconclusive
    } else {
        Status::NotFired
    }
}

/// Threshold for `β*(G) >= β* + 1/2` with `k = 2β*`, by case:
/// `k` even with `(n+3)/3 < β* <= (n-1)/2` and `n >= 11`, or `k` odd with
/// `(2n+3)/6 < β* <= (n-1)/2`, `n >= 8`, `n != 9`, use `θ(n, β*)`;
/// `⌈β*⌉ <= (n+3)/3` uses the join value with `⌊β*⌋`. Anything else has no threshold.
fn beta_star_threshold(n: u64, k: u64) -> Option<(f64, &'static str)> {
    if n < 3 || k == 0 || k > n - 1 {
        return None;
    }
    let target = HalfIntegral::from_doubled(k);
    if k.is_multiple_of(2) && 2 * (n + 3) < 3 * k && n >= 11 {
        return Some((theta_cubic(n, target).ok()?, "cubic-even"));
    }
    if k % 2 == 1 && 2 * n + 3 < 3 * k && n >= 8 && n != 9 {
        return Some((theta_cubic(n, target).ok()?, "cubic-odd"));
    }
    if 3 * target.ceil() <= n + 3 {
        return Some((rho_join_formula(n, target.floor()), "join"));
    }
    None
}

/// Threshold for `β(G) >= β + 1`: `(n+1)/3 <= β <= (n-2)/2` with `n >= 8` uses
/// the spectral radius of `K_1 ∨ (K_{2β-1} ∪ (n-2β) K_1)`; `β <= n/3` uses the
/// join value.
fn beta_threshold(n: u64, beta: u64) -> Option<(f64, &'static str)> {
    if beta == 0 || 2 * beta + 2 > n {
        return None;
    }
    if 3 * beta > n && n >= 8 {
        return Some((matching_theta(n, beta).ok()?, "cubic"));
    }
    if 3 * beta <= n {
        return Some((rho_join_formula(n, beta), "join"));
    }
    None
}

/// Every certificate for `g`; see [`Certifier::certify`].
pub fn certify_all(g: &Graph, verify_truth: bool) -> CertificateReport {
    Certifier::new(g.order()).certify(g, verify_truth)
}

/// [`certify_all`] with ground truth for `n <= 12`.
pub fn certify_default(g: &Graph) -> CertificateReport {
    certify_all(g, g.order() <= DEFAULT_TRUTH_LIMIT)
}
