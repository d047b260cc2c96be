//! Soundness of the certificates, structural audits of the matching module, and
//! agreement of the matching algorithms with the brute-force oracles.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{check_order, graphs_in_range, run_sharded};
use super::oracle::{
    oracle_beta, oracle_beta_by_subsets, oracle_beta_star, oracle_transversal_number,
    BETA_EDGE_LIMIT, BETA_STAR_EDGE_LIMIT, TRANSVERSAL_VERTEX_LIMIT,
};
use super::VerifyError;
use crate::certify::{Certifier, Status};
use crate::formats::to_graph6;
use crate::graph::Graph;
use crate::matching::{
    fpm_partition, fractional_matching_number, fractional_transversal, matching_number,
    optimal_fractional_matching, wrc_decomposition,
};

const MAX_EXAMPLES: usize = 10;

fn g6(g: &Graph) -> String {
    to_graph6(g).unwrap_or_else(|_| format!("n={}", g.order()))
}

fn push_example(list: &mut Vec<String>, s: String) {
    if list.len() < MAX_EXAMPLES {
        list.push(s);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CertificateTally {
    pub name: String,
    pub applicable: u64,
    pub fired: u64,
    /// Fired and the guarantee holds.
    pub sound: u64,
    pub unsound: u64,
    pub at_threshold: u64,
    pub inconclusive: u64,
}

impl CertificateTally {
    fn merge(&mut self, other: &CertificateTally) {
        self.applicable += other.applicable;
        self.fired += other.fired;
        self.sound += other.sound;
        self.unsound += other.unsound;
        self.at_threshold += other.at_threshold;
        self.inconclusive += other.inconclusive;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateAudit {
    pub n: usize,
    /// Connected labelled graphs examined.
    pub graphs: u64,
    pub certificates: Vec<CertificateTally>,
    /// `graph6 name` of unsound firings.
    pub unsound_examples: Vec<String>,
}

impl CertificateAudit {
    pub fn unsound_total(&self) -> u64 {
        self.certificates.iter().map(|c| c.unsound).sum()
    }

    pub fn fired_total(&self) -> u64 {
        self.certificates.iter().map(|c| c.fired).sum()
    }

    pub fn is_sound(&self) -> bool {
        self.unsound_total() == 0
    }

    pub fn tally(&self, name: &str) -> Option<&CertificateTally> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit serializes")
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "certificates n={} connected graphs={}\n",
            self.n, self.graphs
        );
        for c in &self.certificates {
            s.push_str(&format!(
                "{} applicable={} fired={} sound={} unsound={} at_threshold={} inconclusive={}\n",
                c.name, c.applicable, c.fired, c.sound, c.unsound, c.at_threshold, c.inconclusive
            ));
        }
        for e in &self.unsound_examples {
            s.push_str(&format!("unsound: {e}\n"));
        }
        s
    }
}

fn certificate_shard(certifier: &Certifier, n: usize, codes: Range<u64>) -> CertificateAudit {
    let mut audit = CertificateAudit {
        n,
        graphs: 0,
        certificates: Vec::new(),
        unsound_examples: Vec::new(),
    };
    for (_, g) in graphs_in_range(n, codes, true) {
        audit.graphs += 1;
        let report = certifier.certify(&g, true);
        if audit.certificates.is_empty() {
            audit.certificates = report
                .certificates
                .iter()
                .map(|c| CertificateTally {
                    name: c.name.clone(),
                    ..Default::default()
                })
                .collect();
        }
        for (tally, rec) in audit.certificates.iter_mut().zip(&report.certificates) {
            tally.applicable += u64::from(rec.applicable);
            match rec.status {
                Status::Fired => {
                    tally.fired += 1;
                    if rec.is_unsound() {
                        tally.unsound += 1;
                        push_example(
                            &mut audit.unsound_examples,
                            format!("{} {}", g6(&g), rec.name),
                        );
                    } else {
                        tally.sound += 1;
                    }
                }
                Status::AtThreshold => tally.at_threshold += 1,
                Status::Inconclusive => tally.inconclusive += 1,
                Status::NotFired | Status::NotApplicable => {}
            }
        }
    }
    audit
}

/// Runs every certificate with ground truth on every connected labelled graph on
/// `n` vertices and counts firings per certificate. `n = 8` needs `long_run`.
pub fn verify_certificates(
    n: usize,
    jobs: usize,
    long_run: bool,
) -> Result<CertificateAudit, VerifyError> {
    check_order(n, long_run)?;
    if n >= 8 && !long_run {
        return Err(VerifyError::NeedsLongRun(n));
    }
    let certifier = Certifier::new(n);
    let shards = run_sharded(n, jobs, |codes| certificate_shard(&certifier, n, codes))?;
    let mut total = CertificateAudit {
        n,
        graphs: 0,
        certificates: Vec::new(),
        unsound_examples: Vec::new(),
    };
    for s in shards {
        total.graphs += s.graphs;
        if total.certificates.is_empty() {
            total.certificates = s
                .certificates
                .iter()
                .map(|c| CertificateTally {
                    name: c.name.clone(),
                    ..Default::default()
                })
                .collect();
        }
        for (a, b) in total.certificates.iter_mut().zip(&s.certificates) {
            a.merge(b);
        }
        for e in s.unsound_examples {
            push_example(&mut total.unsound_examples, e);
        }
    }
    Ok(total)
}

/// Failure counts of the structural checks over all labelled graphs on `n` vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructureAudit {
    pub n: usize,
    pub graphs: u64,
    pub connected: u64,
    /// Minimum transversal total differs from `β*`, or the transversal is infeasible.
    pub duality_failures: u64,
    /// The canonical optimal fractional matching is infeasible, suboptimal, or has
    /// half-weight support other than disjoint odd cycles.
    pub canonical_failures: u64,
    /// Graphs with `2β* = n`.
    pub fpm_graphs: u64,
    /// Partition missing or invalid when `2β* = n`, or produced when `2β* < n`.
    pub fpm_failures: u64,
    /// `2β* < n` but the transversal oracle allows `n/2`.
    pub oracle_failures: u64,
    /// W/R/C properties or the identity `2β* = n - (|R| - |W|)` fail on a connected graph.
    pub wrc_failures: u64,
    pub examples: Vec<String>,
}

impl StructureAudit {
    pub fn passed(&self) -> bool {
        self.duality_failures == 0
            && self.canonical_failures == 0
            && self.fpm_failures == 0
            && self.oracle_failures == 0
            && self.wrc_failures == 0
    }

    fn merge(&mut self, o: StructureAudit) {
        self.graphs += o.graphs;
        self.connected += o.connected;
        self.duality_failures += o.duality_failures;
        self.canonical_failures += o.canonical_failures;
        self.fpm_graphs += o.fpm_graphs;
        self.fpm_failures += o.fpm_failures;
        self.oracle_failures += o.oracle_failures;
        self.wrc_failures += o.wrc_failures;
        for e in o.examples {
            push_example(&mut self.examples, e);
        }
    }
}

fn structure_shard(n: usize, codes: Range<u64>) -> StructureAudit {
    let mut a = StructureAudit {
        n,
        ..Default::default()
    };
    for (_, g) in graphs_in_range(n, codes, false) {
        a.graphs += 1;
        let beta_star = fractional_matching_number(&g);
        let t = fractional_transversal(&g);
        if t.check_feasible(&g).is_err() || t.total() != beta_star {
            a.duality_failures += 1;
            push_example(&mut a.examples, format!("{} duality", g6(&g)));
        }
        let m = optimal_fractional_matching(&g);
        if !m.is_feasible(&g) || m.total() != beta_star || !m.is_canonical(n) {
            a.canonical_failures += 1;
            push_example(&mut a.examples, format!("{} canonical", g6(&g)));
        }
        let perfect = beta_star.doubled() == n as u64;
        let partition = fpm_partition(&g, &m);
        if perfect {
            a.fpm_graphs += 1;
            if !partition.is_ok_and(|p| p.validate(&g).is_ok()) {
                a.fpm_failures += 1;
                push_example(&mut a.examples, format!("{} fpm partition", g6(&g)));
            }
        } else {
            if partition.is_ok() {
                a.fpm_failures += 1;
                push_example(
                    &mut a.examples,
                    format!("{} partition without perfect matching", g6(&g)),
                );
            }
            // any fractional matching is bounded by any transversal
            if n <= TRANSVERSAL_VERTEX_LIMIT
                && oracle_transversal_number(&g).is_ok_and(|tau| tau.doubled() >= n as u64)
            {
                a.oracle_failures += 1;
                push_example(&mut a.examples, format!("{} oracle", g6(&g)));
            }
        }
        if g.is_connected() {
            a.connected += 1;
            if !wrc_decomposition(&g, &t).is_ok_and(|r| r.all_hold()) {
                a.wrc_failures += 1;
                push_example(&mut a.examples, format!("{} wrc", g6(&g)));
            }
        }
    }
    a
}

/// Duality, canonical witnesses, the perfect-matching partition and the W/R/C
/// decomposition on every labelled graph on `n <= 8` vertices (`n = 8` needs `long_run`).
pub fn audit_structure(
    n: usize,
    jobs: usize,
    long_run: bool,
) -> Result<StructureAudit, VerifyError> {
    check_order(n, long_run)?;
    if n >= 8 && !long_run {
        return Err(VerifyError::NeedsLongRun(n));
    }
    let shards = run_sharded(n, jobs, |codes| structure_shard(n, codes))?;
    let mut total = StructureAudit {
        n,
        ..Default::default()
    };
    for s in shards {
        total.merge(s);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub exhaustive: bool,
    pub checked: u64,
    pub agree: u64,
    /// Comparisons of `β*` that used the dual oracle because of the edge limit.
    pub beta_star_by_transversal: u64,
    /// Comparisons of `β` that used the subset oracle because of the edge limit.
    pub beta_by_subsets: u64,
    pub mismatches: Vec<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.checked == self.agree
    }

    pub fn summary(&self) -> String {
        format!(
            "n={} {} agree={}/{}{}",
            self.n,
            if self.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            },
            self.agree,
            self.checked,
            self.mismatches
                .iter()
                .map(|m| format!("\nmismatch: {m}"))
                .collect::<String>()
        )
    }
}

/// Largest order checked exhaustively.
pub const CROSS_CHECK_EXHAUSTIVE_ORDER: usize = 6;
/// Largest order checked on random graphs.
pub const CROSS_CHECK_MAX_ORDER: usize = 10;

/// Compares `β*` and `β` with the oracles: every labelled graph for `n <= 6`,
/// `samples` random graphs (edge density itself random) for `7 <= n <= 10`.
/// Dense random graphs beyond the edge oracles' limits use the transversal
/// oracle for `β*` and the subset oracle for `β`.
pub fn cross_check_matching_implementations(
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<CrossCheckReport, VerifyError> {
    if n > CROSS_CHECK_MAX_ORDER {
        return Err(VerifyError::OrderTooLarge {
            n,
            limit: CROSS_CHECK_MAX_ORDER,
            long_run: false,
        });
    }
    let exhaustive = n <= CROSS_CHECK_EXHAUSTIVE_ORDER;
    let mut report = CrossCheckReport {
        n,
        exhaustive,
        checked: 0,
        agree: 0,
        beta_star_by_transversal: 0,
        beta_by_subsets: 0,
        mismatches: Vec::new(),
    };
    let check = |g: &Graph, report: &mut CrossCheckReport| -> Result<(), VerifyError> {
        let m = g.edge_count();
        let expected_star = if m <= BETA_STAR_EDGE_LIMIT {
            oracle_beta_star(g)?
        } else {
            report.beta_star_by_transversal += 1;
            oracle_transversal_number(g)?
        };
        let expected_beta = if m <= BETA_EDGE_LIMIT {
            oracle_beta(g)?
        } else {
            report.beta_by_subsets += 1;
            oracle_beta_by_subsets(g)?
        };
        let star = fractional_matching_number(g);
        let beta = matching_number(g).size();
        report.checked += 1;
        if star == expected_star && beta == expected_beta {
            report.agree += 1;
        } else {
            push_example(
                &mut report.mismatches,
                format!(
                    "{}: β* {star} vs {expected_star}, β {beta} vs {expected_beta}",
                    g6(g)
                ),
            );
        }
        Ok(())
    };
    if exhaustive {
        for (_, g) in graphs_in_range(n, 0..super::enumerate::code_count(n), false) {
            check(&g, &mut report)?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        for _ in 0..samples {
            let p: f64 = rng.gen();
            let mut edges = Vec::new();
            for v in 1..n {
                for u in 0..v {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edge_list(n, &edges).expect("valid pairs");
            check(&g, &mut report)?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificates_small_orders() {
        let a3 = verify_certificates(3, 1, false).unwrap();
        assert_eq!(a3.graphs, 4);
        assert!(a3.is_sound());
        assert_eq!(a3.tally("spectral_pm").unwrap().applicable, 0);
        let a4 = verify_certificates(4, 1, false).unwrap();
        assert_eq!(a4.graphs, 38);
        assert!(a4.is_sound());
    }

    #[test]
    fn structure_small_orders() {
        for n in 1..=5 {
            let a = audit_structure(n, 1, false).unwrap();
            assert!(a.passed(), "{a:?}");
            assert_eq!(a.graphs, super::super::enumerate::code_count(n));
        }
    }

    #[test]
    fn cross_check_small() {
        let r = cross_check_matching_implementations(5, 0, 1).unwrap();
        assert_eq!((r.checked, r.agree), (1024, 1024));
        let r = cross_check_matching_implementations(8, 50, 7).unwrap();
        assert!(r.passed());
        assert!(!r.exhaustive);
    }
}
