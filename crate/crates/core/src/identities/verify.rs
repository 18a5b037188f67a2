use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::catalog::register_all;
use super::{IdentityDescriptor, Mode, NumericSample, RunConfig, SamplesOrCutoff, Status, VerificationReport};
use crate::qseries::QSeriesError;
use crate::qseries::series::fmt_exponent;
use crate::theta::TruncationPolicy;

/// Both sides below this magnitude count as a degenerate sample.
const DEGENERATE: f64 = 1e-14;
/// Redraws allowed per sample slot before it is reported as skipped.
const RESAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("identity {0}: sampling domain is empty")]
    DomainEmpty(String),
    #[error("identity {id} has no {mode:?} check")]
    ModeNotSupported { id: String, mode: Mode },
    #[error(transparent)]
    QSeries(#[from] QSeriesError),
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed for a sample group: descriptors sharing a group see the same draws.
fn stream_seed(seed: u64, group: &str) -> u64 {
    seed ^ fnv1a(group)
}

fn digest(parts: &[String]) -> String {
    let hash = Sha256::digest(parts.join("|").as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// `|l - r| / max(1, |l|, |r|)`; non-finite values count as infinite.
fn residual(l: Complex64, r: Complex64) -> f64 {
    let res = (l - r).norm() / 1f64.max(l.norm()).max(r.norm());
    if res.is_finite() {
        res
    } else {
        f64::INFINITY
    }
}

fn degenerate(pairs: &[(Complex64, Complex64)]) -> bool {
    pairs.iter().all(|(l, r)| l.norm() < DEGENERATE && r.norm() < DEGENERATE)
}

fn report(d: &IdentityDescriptor, mode: Mode, digest: String, soc: SamplesOrCutoff, status: Status) -> VerificationReport {
    VerificationReport {
        id: d.id.to_string(),
        mode,
        params_digest: digest,
        samples_or_cutoff: soc,
        max_residual: None,
        first_mismatch_exponent: None,
        mismatch_lhs_coeff: None,
        mismatch_rhs_coeff: None,
        status,
        millis: None,
        note: None,
        skipped: 0,
    }
}

fn numeric_check(d: &IdentityDescriptor) -> Result<super::NumericCheck, VerifyError> {
    match d.numeric {
        Some(check) if d.mode.permits(Mode::Numeric) => Ok(check),
        _ => Err(VerifyError::ModeNotSupported {
            id: d.id.to_string(),
            mode: Mode::Numeric,
        }),
    }
}

/// Checks `d` at `n_samples` seeded points with the default truncation policy.
pub fn verify_numeric(d: &IdentityDescriptor, n_samples: usize, tol: f64, seed: u64) -> Result<VerificationReport, VerifyError> {
    numeric_with_policy(d, n_samples, tol, seed, &TruncationPolicy::default())
}

fn numeric_with_policy(
    d: &IdentityDescriptor,
    n_samples: usize,
    tol: f64,
    seed: u64,
    policy: &TruncationPolicy,
) -> Result<VerificationReport, VerifyError> {
    let check = numeric_check(d)?;
    if d.domain.is_empty() {
        return Err(VerifyError::DomainEmpty(d.id.to_string()));
    }
    let dig = digest(&[
        d.id.to_string(),
        "NUMERIC".into(),
        format!("seed={seed}"),
        format!("samples={n_samples}"),
        format!("tol={tol:e}"),
        d.domain.describe(),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, d.sample_group));
    let mut out = report(d, Mode::Numeric, dig, SamplesOrCutoff::Samples(n_samples), Status::Pass);
    let mut max_res = 0f64;
    let mut evaluated = 0usize;

    'slots: for _ in 0..n_samples {
        for _ in 0..=RESAMPLES {
            let sample = d.domain.draw(&mut rng);
            match check(&sample, policy) {
                Err(e) => {
                    out.status = Status::Fail;
                    out.note = Some(format!("evaluation failed: {e}"));
                    max_res = f64::INFINITY;
                    break 'slots;
                }
                Ok(pairs) if d.skip_degenerate && degenerate(&pairs) => continue,
                Ok(pairs) => {
                    let res = pairs.iter().map(|&(l, r)| residual(l, r)).fold(0.0, f64::max);
                    max_res = max_res.max(res);
                    evaluated += 1;
                    continue 'slots;
                }
            }
        }
        out.skipped += 1;
    }

    out.max_residual = Some(max_res).filter(|r| r.is_finite());
    if out.status != Status::Fail {
        out.status = if evaluated == 0 {
            Status::SkippedDegenerate
        } else if max_res <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
    }
    Ok(out)
}

/// Checks `d` at one given sample.
pub fn verify_numeric_at(
    d: &IdentityDescriptor,
    sample: &NumericSample,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<VerificationReport, VerifyError> {
    let check = numeric_check(d)?;
    let dig = digest(&[d.id.to_string(), "NUMERIC".into(), format!("{sample:?}"), format!("tol={tol:e}")]);
    let mut out = report(d, Mode::Numeric, dig, SamplesOrCutoff::Samples(1), Status::Pass);
    match check(sample, policy) {
        Err(e) => {
            out.status = Status::Fail;
            out.note = Some(format!("evaluation failed: {e}"));
        }
        Ok(pairs) if d.skip_degenerate && degenerate(&pairs) => {
            out.status = Status::SkippedDegenerate;
            out.skipped = 1;
        }
        Ok(pairs) => {
            let res = pairs.iter().map(|&(l, r)| residual(l, r)).fold(0.0, f64::max);
            out.max_residual = Some(res).filter(|r| r.is_finite());
            out.status = if res <= tol { Status::Pass } else { Status::Fail };
        }
    }
    Ok(out)
}

/// Expands both sides of every case through `cutoff` and reports the first
/// differing coefficient.
pub fn verify_exact(d: &IdentityDescriptor, cutoff: Rational64, seed: u64) -> Result<VerificationReport, VerifyError> {
    let build = match &d.exact {
        Some(b) if d.mode.permits(Mode::Exact) => b,
        _ => {
            return Err(VerifyError::ModeNotSupported {
                id: d.id.to_string(),
                mode: Mode::Exact,
            })
        }
    };
    let dig = digest(&[
        d.id.to_string(),
        "EXACT".into(),
        format!("seed={seed}"),
        format!("cutoff={cutoff}"),
        d.exact_domain.to_string(),
    ]);
    let mut out = report(d, Mode::Exact, dig, SamplesOrCutoff::Cutoff(cutoff.to_string()), Status::Pass);
    for case in build(cutoff, seed)? {
        let upto = case.upto.map_or(cutoff, |u| u.min(cutoff));
        if case.lhs.cutoff() < upto || case.rhs.cutoff() < upto {
            out.status = Status::Fail;
            out.note = Some(format!("{}: expansion stops before q^({upto})", case.label));
            return Ok(out);
        }
        if let Some(m) = case.lhs.first_mismatch(&case.rhs, upto)? {
            out.status = Status::Fail;
            out.first_mismatch_exponent = Some(fmt_exponent(m.exponent));
            out.mismatch_lhs_coeff = Some(m.lhs.to_string());
            out.mismatch_rhs_coeff = Some(m.rhs.to_string());
            out.note = Some(case.label);
            return Ok(out);
        }
    }
    Ok(out)
}

fn run_one(d: &IdentityDescriptor, mode: Mode, config: &RunConfig) -> VerificationReport {
    let start = Instant::now();
    let result = match mode {
        Mode::Exact => verify_exact(d, config.cutoff, config.seed),
        _ => numeric_with_policy(d, config.n_samples, config.tol.unwrap_or(d.tolerance), config.seed, &config.policy),
    };
    let mut out = result.unwrap_or_else(|e| {
        let soc = match mode {
            Mode::Exact => SamplesOrCutoff::Cutoff(config.cutoff.to_string()),
            _ => SamplesOrCutoff::Samples(config.n_samples),
        };
        let mut r = report(d, mode, digest(&[d.id.to_string(), format!("{mode:?}")]), soc, Status::Fail);
        r.note = Some(e.to_string());
        r
    });
    if config.record_timings {
        out.millis = Some(start.elapsed().as_millis() as u64);
    }
    if !d.expected_to_hold && out.status == Status::Fail && out.note.is_none() {
        out.note = Some("literal transcription; does not hold as written".into());
    }
    out
}

/// Runs every selected descriptor in each of its modes, in parallel. Failures
/// of any kind become `FAIL` reports. The result is sorted by `(id, mode)`.
pub fn run_all(config: &RunConfig) -> Vec<VerificationReport> {
    let jobs: Vec<(IdentityDescriptor, Mode)> = register_all()
        .into_iter()
        .filter(|d| config.ids.is_empty() || config.ids.iter().any(|id| id == d.id))
        .flat_map(|d| d.modes().into_iter().map(move |m| (d.clone(), m)))
        .collect();
    let mut reports: Vec<VerificationReport> = jobs.par_iter().map(|(d, m)| run_one(d, *m, config)).collect();
    reports.sort_by(|a, b| (&a.id, a.mode).cmp(&(&b.id, b.mode)));
    for v in consistency_violations(&reports) {
        if let Some(r) = reports.iter_mut().find(|r| r.id == "corollary_4_2_3") {
            r.note = Some(v);
        }
    }
    reports
}

/// Logical implications between reports that fail to hold. Items (1) and (2)
/// of the order-two corollary together imply item (3).
pub fn consistency_violations(reports: &[VerificationReport]) -> Vec<String> {
    let status = |id: &str| reports.iter().find(|r| r.id == id).map(|r| r.status);
    match (status("corollary_4_2_1"), status("corollary_4_2_2"), status("corollary_4_2_3")) {
        (Some(Status::Pass), Some(Status::Pass), Some(s)) if s != Status::Pass => {
            vec!["corollary_4_2_1 and corollary_4_2_2 pass but their product corollary_4_2_3 does not".into()]
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::registry_by_id;

    #[test]
    fn residual_scale() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(residual(one, one), 0.0);
        assert!((residual(one * 1e6, one * (1e6 + 1.0)) - 1.0 / (1e6 + 1.0)).abs() < 1e-18);
        assert_eq!(residual(one * f64::NAN, one), f64::INFINITY);
    }

    #[test]
    fn group_streams_are_shared() {
        assert_eq!(stream_seed(1, "dft2"), stream_seed(1, "dft2"));
        assert_ne!(stream_seed(1, "dft2"), stream_seed(1, "dft3"));
    }

    #[test]
    fn mode_errors() {
        let d = registry_by_id("lemma_4_1_1").unwrap();
        assert!(matches!(
            verify_exact(&d, Rational64::from_integer(5), 0),
            Err(VerifyError::ModeNotSupported { .. })
        ));
        let mut d = registry_by_id("theta_symmetry").unwrap();
        d.domain.max_abs_ab = 2.0;
        assert!(matches!(verify_numeric(&d, 3, 1e-9, 0), Err(VerifyError::DomainEmpty(_))));
    }

    #[test]
    fn vanishing_is_not_skipped() {
        let d = registry_by_id("theta_vanishing").unwrap();
        let r = verify_numeric(&d, 10, d.tolerance, 42).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.skipped, 0);
    }

    #[test]
    fn consistency_rule() {
        let mk = |id: &str, s| {
            let mut r = report(&registry_by_id(id).unwrap(), Mode::Numeric, String::new(), SamplesOrCutoff::Samples(1), s);
            r.id = id.into();
            r
        };
        let ok = vec![
            mk("corollary_4_2_1", Status::Pass),
            mk("corollary_4_2_2", Status::Pass),
            mk("corollary_4_2_3", Status::Pass),
        ];
        assert!(consistency_violations(&ok).is_empty());
        let mut bad = ok.clone();
        bad[2].status = Status::Fail;
        assert_eq!(consistency_violations(&bad).len(), 1);
    }
}
