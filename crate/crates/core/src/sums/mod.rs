//! The sum theorems as executable procedures.
//!
//! * [`sum_identity_threshold`] / [`verify_sum_identity`] — the rotation-free
//!   identity `⊕ₙE = n·conv(F)`: threshold arithmetic, raster pipeline, and
//!   a two-sided Hausdorff verdict at a stated tolerance.
//! * [`expand_word_families`] — the greedy word-family expansion whose
//!   comparability invariant drives the identity's proof; runnable and
//!   checked step by step.
//! * [`certify_nonmembership`] — a machine-checkable certificate that
//!   `(1/2, 0)` is missing from every n-fold sum of the rotating
//!   counterexample system, with explicit margins.
//! * [`ball_hierarchy_probe`] — a desk-scale raster probe of the
//!   ball-hierarchy monotonicity step behind the thick-sum interior
//!   theorem (one refinement step; the full threshold is far beyond desk
//!   scale and is reported by arithmetic only).

mod counterexample;
mod probe;
mod identity;
mod words;

pub use counterexample::{
    certify_nonmembership, rotating_counterexample_ifs, invariant_triangle, CertificateStep, CertificateCfg,
    NonMembershipCertificate,
};
pub use probe::{ball_hierarchy_probe, SumProbeReport, ProbeCfg};
pub use identity::{sum_identity_threshold, verify_invariant_region, verify_sum_identity, IdentityCheckCfg};
pub use words::{expand_word_families, WordFamilyTuple};

use thiserror::Error;

use crate::geom::GeomError;
use crate::grid::GridError;
use crate::ifs::IfsError;
use crate::thickness::ThicknessError;

#[derive(Error, Debug)]
pub enum SumsError {
    #[error("system is not a similitude system with exact ratios")]
    NotSimilitude,
    #[error("n = {n} is below the sum-identity threshold {threshold}; pass force to probe anyway")]
    ThresholdNotMet { n: u64, threshold: u64 },
    #[error("word-family comparability invariant violated at step {step}: min {min} < ρ_min·max {bound} (internal error)")]
    InvariantViolated { step: usize, min: f64, bound: f64 },
    #[error("certificate failed at step {step} ({name}) with margin {margin}")]
    CertificateFailed { step: usize, name: &'static str, margin: f64 },
    #[error("probe needs n ≥ 2, got {0}")]
    BadCount(u64),
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Thickness(#[from] ThicknessError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
        }
    }
}

/// Outcome of a sum-identity verification run.
#[derive(Clone, Debug)]
pub struct SumIdentityReport {
    pub n: u64,
    pub depth: u32,
    pub delta: f64,
    /// Two-sided Hausdorff distance between the rasterized n-fold sum and
    /// the rasterized n·conv(F), in spatial units.
    pub d_h_measured: f64,
    /// n·eps(k) + n·δ·√d + one cell diagonal.
    pub tolerance: f64,
    pub cover_eps: f64,
    /// Exact bit containment ⊕ₙ(inner) ⊆ OUTER(n·conv(F)).
    pub containment_ok: bool,
    pub verdict: Verdict,
    /// Set when n is below the threshold and the run was forced; the
    /// identity may still hold (the threshold is sufficient, not
    /// necessary) but the report is advisory only.
    pub informational: bool,
    pub threshold: u64,
}

#[cfg(test)]
mod tests;
