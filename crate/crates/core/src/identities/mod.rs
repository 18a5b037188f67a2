//! A declarative catalogue of theta-function and generating-function
//! identities, with numeric and exact verifiers.
//!
//! Every identity is an [`IdentityDescriptor`]: an id, a verification mode,
//! a sampling domain and a pair of side builders. Numeric checks draw seeded
//! [`NumericSample`]s and compare `|LHS - RHS| / max(1, |LHS|, |RHS|)` to a
//! tolerance; exact checks expand both sides as [`crate::PuiseuxSeries`] and
//! compare coefficients through a cutoff.

mod catalog;
mod sample;
mod verify;

pub use catalog::{register_all, registry_by_id};
pub use sample::{NumericDomain, NumericSample};
pub use verify::{consistency_violations, run_all, verify_exact, verify_numeric, verify_numeric_at, VerifyError};

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::qseries::{PuiseuxSeries, QSeriesError};
use crate::theta::{ThetaError, TruncationPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Numeric,
    Exact,
    Both,
}

impl Mode {
    pub fn permits(self, wanted: Mode) -> bool {
        self == Mode::Both || self == wanted
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    SkippedDegenerate,
}

/// Numeric side pairs `(lhs, rhs)` evaluated at one sample.
pub type NumericCheck = fn(&NumericSample, &TruncationPolicy) -> Result<Vec<(Complex64, Complex64)>, ThetaError>;

/// One exact comparison: both sides agree through `upto` (capped by the
/// requested cutoff).
#[derive(Debug, Clone)]
pub struct ExactCase {
    pub label: String,
    pub lhs: PuiseuxSeries,
    pub rhs: PuiseuxSeries,
    pub upto: Option<Rational64>,
}

/// Builds the exact cases for a cutoff; the seed feeds identities that sample
/// their parameters.
pub type ExactCheck = Arc<dyn Fn(Rational64, u64) -> Result<Vec<ExactCase>, QSeriesError> + Send + Sync>;

#[derive(Clone)]
pub struct IdentityDescriptor {
    pub id: &'static str,
    pub mode: Mode,
    /// What the identity says, in words.
    pub statement: &'static str,
    pub domain: NumericDomain,
    /// Description of the exact-mode parameter set.
    pub exact_domain: &'static str,
    pub tolerance: f64,
    pub cutoff: Rational64,
    /// Descriptors in the same group draw identical sample streams.
    pub sample_group: &'static str,
    /// Resample when both sides are numerically zero.
    pub skip_degenerate: bool,
    /// `false` for literal transcriptions kept to record whether they hold.
    pub expected_to_hold: bool,
    pub numeric: Option<NumericCheck>,
    pub exact: Option<ExactCheck>,
}

impl std::fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityDescriptor")
            .field("id", &self.id)
            .field("mode", &self.mode)
            .field("statement", &self.statement)
            .field("tolerance", &self.tolerance)
            .field("cutoff", &self.cutoff)
            .finish_non_exhaustive()
    }
}

impl IdentityDescriptor {
    /// Sampling or parameter description for the given mode.
    pub fn parameter_domain(&self, mode: Mode) -> String {
        match mode {
            Mode::Exact => self.exact_domain.to_string(),
            _ => self.domain.describe(),
        }
    }

    /// Modes a full run executes, numeric first.
    pub fn modes(&self) -> Vec<Mode> {
        match self.mode {
            Mode::Both => vec![Mode::Numeric, Mode::Exact],
            m => vec![m],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SamplesOrCutoff {
    Samples(usize),
    Cutoff(String),
}

/// Outcome of one verification. Serialises to exactly the report record
/// fields; `note` and `skipped` are in-memory only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub mode: Mode,
    pub params_digest: String,
    pub samples_or_cutoff: SamplesOrCutoff,
    pub max_residual: Option<f64>,
    pub first_mismatch_exponent: Option<String>,
    pub mismatch_lhs_coeff: Option<String>,
    pub mismatch_rhs_coeff: Option<String>,
    pub status: Status,
    pub millis: Option<u64>,
    #[serde(skip)]
    pub note: Option<String>,
    #[serde(skip)]
    pub skipped: usize,
}

/// Settings for [`run_all`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub n_samples: usize,
    /// Overrides every descriptor's tolerance when set.
    pub tol: Option<f64>,
    pub cutoff: Rational64,
    /// Restrict to these ids; empty means all.
    pub ids: Vec<String>,
    /// Fill `millis` with wall time. Off by default so reports are
    /// reproducible byte for byte.
    pub record_timings: bool,
    pub policy: TruncationPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_samples: 50,
            tol: None,
            cutoff: Rational64::from_integer(20),
            ids: Vec::new(),
            record_timings: false,
            policy: TruncationPolicy::default(),
        }
    }
}
