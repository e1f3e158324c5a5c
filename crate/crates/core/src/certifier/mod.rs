//! Congruence catalog, numeric verification and modular certification.

pub mod catalog;
pub mod certify;
pub mod expr;
pub mod normalize;
pub mod sturm;

use rayon::prelude::*;
use serde::Serialize;

pub use catalog::{catalog, find_claim, find_plan, proof_plans, CongruenceClaim, ProofPlan, Shape};
pub use certify::{certify, certify_with, CertifyError, CertifyOptions, ProofCertificate, Verdict};

/// Result of comparing both sides of a claim on `q^0 .. q^{terms-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericOutcome {
    pub id: String,
    pub terms: usize,
    pub passed: bool,
    pub first_mismatch: Option<u64>,
}

pub fn numeric_verify(claim: &CongruenceClaim, terms: usize) -> NumericOutcome {
    let lhs = expr::expand_side(&claim.lhs, terms);
    let rhs = expr::expand_side(&claim.rhs, terms);
    let first_mismatch = lhs
        .first_mismatch(&rhs)
        .expect("both sides start at q^0")
        .map(|e24| (e24 / 24) as u64);
    NumericOutcome {
        id: claim.id.clone(),
        terms,
        passed: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// Certifies every progression congruence, in catalog order.
pub fn certify_all() -> Vec<ProofCertificate> {
    proof_plans().par_iter().map(certify).collect()
}
