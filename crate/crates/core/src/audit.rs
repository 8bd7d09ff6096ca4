//! Printed-versus-derived comparison rows.

use serde::{Deserialize, Serialize};

use crate::C64;

/// Relative agreement threshold for a `Match`.
pub const AUDIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditStatus {
    Match,
    Flagged,
    /// The quantity is used but no printed formula exists for it.
    Unprinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    /// Printed formula id, e.g. "k1" or "stage2-solution".
    pub formula: String,
    pub quantity: String,
    pub printed: Option<C64>,
    pub derived: C64,
    /// |printed − derived| / (1 + |derived|); absent for unprinted rows.
    pub rel_diff: Option<f64>,
    pub status: AuditStatus,
}

impl AuditRow {
    pub fn compare(formula: &str, quantity: &str, printed: C64, derived: C64) -> Self {
        let rel = (printed - derived).norm() / (1.0 + derived.norm());
        let status = if rel <= AUDIT_TOL {
            AuditStatus::Match
        } else {
            AuditStatus::Flagged
        };
        Self {
            formula: formula.to_owned(),
            quantity: quantity.to_owned(),
            printed: Some(printed),
            derived,
            rel_diff: Some(rel),
            status,
        }
    }

    pub fn unprinted(formula: &str, quantity: &str, derived: C64) -> Self {
        Self {
            formula: formula.to_owned(),
            quantity: quantity.to_owned(),
            printed: None,
            derived,
            rel_diff: None,
            status: AuditStatus::Unprinted,
        }
    }
}
