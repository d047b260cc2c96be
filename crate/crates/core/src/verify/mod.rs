//! Exhaustive small-graph checks: enumeration, brute-force oracles, class-by-class
//! comparison of spectral radii with the predicted bounds, and soundness audits.

use thiserror::Error;

use crate::extremal::ExtremalError;

pub mod audit;
pub mod enumerate;
pub mod oracle;
pub mod sweep;

pub use audit::{
    audit_structure, cross_check_matching_implementations, verify_certificates, CertificateAudit,
    CertificateTally, CrossCheckReport, StructureAudit,
};
pub use enumerate::{enumerate_graphs, enumerate_graphs_long_run, MAX_LONG_RUN_ORDER, MAX_ORDER};
pub use oracle::{
    oracle_beta, oracle_beta_by_subsets, oracle_beta_star, oracle_transversal_number,
};
pub use sweep::{
    sample_class, verify_theorem, ClassRecord, SweepOptions, Theorem, VerificationReport, RHO_TOL,
};

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("n = {n} is above the enumeration limit {limit}{}", if *long_run { "" } else { " (larger orders need the long-run flag)" })]
    OrderTooLarge {
        n: usize,
        limit: usize,
        long_run: bool,
    },
    #[error("n = {0} requires the long-run flag")]
    NeedsLongRun(usize),
    #[error("{m} edges is above the oracle limit {limit}")]
    TooManyEdges { m: usize, limit: usize },
    #[error("{n} vertices is above the oracle limit {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("no prediction for class {0}")]
    NoSuchClass(u64),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("output: {0}")]
    Io(String),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
}
