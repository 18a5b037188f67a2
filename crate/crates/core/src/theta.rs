//! Double-precision evaluation of theta-type series and infinite products.
//!
//! All two-sided series are summed symmetrically outward from `m = 0`. The
//! window `[-M, M]` grows until three consecutive pairs of boundary terms are
//! both below `term_tol * (1 + max |partial sum|)` and no longer growing.
//!
//! Fractional powers only ever appear in [`eval_f_char`], and they are taken
//! through caller-supplied logarithms (`a^w := exp(w * log_a)`), so the branch
//! is always explicit.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("series diverges: {0}")]
    Divergent(&'static str),
    /// The summation window hit `max_terms` before the stop rule fired.
    /// `partial` holds the value accumulated so far.
    #[error("truncation exhausted after {terms} terms (partial value {partial})")]
    TruncationExhausted { partial: Complex64, terms: usize },
    #[error("argument outside the supported domain: {0}")]
    ArgDomain(&'static str),
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(&'static str),
}

/// Stop rule for adaptive summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub term_tol: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            term_tol: 1e-18,
            max_terms: 10_000,
        }
    }
}

impl TruncationPolicy {
    pub fn new(term_tol: f64, max_terms: usize) -> Result<Self, ThetaError> {
        let policy = Self {
            term_tol,
            max_terms,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<(), ThetaError> {
        if !(self.term_tol > 0.0 && self.term_tol < 1.0) {
            return Err(ThetaError::InvalidPolicy("term_tol must lie in (0, 1)"));
        }
        if self.max_terms < 8 {
            return Err(ThetaError::InvalidPolicy("max_terms must be at least 8"));
        }
        Ok(())
    }
}

/// Plain arguments `(a, b, x)` of a theta series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgs {
    pub a: Complex64,
    pub b: Complex64,
    pub x: Complex64,
}

impl ThetaArgs {
    pub fn new(a: Complex64, b: Complex64, x: Complex64) -> Result<Self, ThetaError> {
        if (a * b).norm() >= 1.0 {
            return Err(ThetaError::Divergent("|ab| >= 1"));
        }
        Ok(Self { a, b, x })
    }

    /// Principal-branch logarithms of `a` and `b`.
    pub fn to_log(&self) -> Result<LogThetaArgs, ThetaError> {
        LogThetaArgs::new(self.a.ln(), self.b.ln(), self.x)
    }
}

/// Arguments in logarithmic form: `a = exp(log_a)`, `b = exp(log_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogThetaArgs {
    pub log_a: Complex64,
    pub log_b: Complex64,
    pub x: Complex64,
}

impl LogThetaArgs {
    pub fn new(log_a: Complex64, log_b: Complex64, x: Complex64) -> Result<Self, ThetaError> {
        let args = Self { log_a, log_b, x };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<(), ThetaError> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(self.log_a) || !finite(self.log_b) || !finite(self.x) {
            // log 0 = -inf lands here; a = 0 or b = 0 has no logarithm.
            return Err(ThetaError::ArgDomain(
                "logarithms and phase must be finite (a = 0 or b = 0 is not representable)",
            ));
        }
        if self.log_a.re + self.log_b.re >= 0.0 {
            return Err(ThetaError::Divergent("Re(log a + log b) >= 0"));
        }
        Ok(())
    }

    /// Arguments `(a^{1/s}, b^{1/s}, x/s)` with the root taken along the
    /// supplied logarithms.
    pub fn root(&self, s: f64) -> Self {
        Self {
            log_a: self.log_a / s,
            log_b: self.log_b / s,
            x: self.x / s,
        }
    }

    pub fn a(&self) -> Complex64 {
        self.log_a.exp()
    }

    pub fn b(&self) -> Complex64 {
        self.log_b.exp()
    }
}

/// Characteristics `(α, β, c)` of the generalised theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Characteristics {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub c: i64,
}

impl Characteristics {
    pub fn new(alpha: Rational64, beta: Rational64, c: i64) -> Result<Self, ThetaError> {
        if c == 0 {
            return Err(ThetaError::ArgDomain("characteristic c must be nonzero"));
        }
        Ok(Self { alpha, beta, c })
    }

    /// `(0, 0, 1)`: reduces to the plain Ramanujan theta function.
    pub fn plain() -> Self {
        Self {
            alpha: Rational64::zero(),
            beta: Rational64::zero(),
            c: 1,
        }
    }
}

/// Sum `t(0) + Σ_{M≥1} [t(M) + t(-M)]` with the adaptive stop rule.
///
/// `pos(M)` and `neg(M)` are called with `M = 1, 2, ...` in order, so they may
/// carry state between calls.
pub(crate) fn symmetric_sum(
    policy: &TruncationPolicy,
    center: Complex64,
    mut pos: impl FnMut(usize) -> Complex64,
    mut neg: impl FnMut(usize) -> Complex64,
) -> Result<Complex64, ThetaError> {
    policy.validate()?;
    let mut sum = center;
    let mut scale = sum.norm();
    let mut prev = (center.norm(), center.norm());
    let mut quiet = 0;
    for m in 1..=policy.max_terms {
        let tp = pos(m);
        let tn = neg(m);
        sum += tp + tn;
        scale = scale.max(sum.norm());
        let (ap, an) = (tp.norm(), tn.norm());
        let bound = policy.term_tol * (1.0 + scale);
        let small = ap < bound && an < bound && ap <= prev.0 && an <= prev.1;
        quiet = if small { quiet + 1 } else { 0 };
        prev = (ap, an);
        if quiet >= 3 {
            return Ok(sum);
        }
    }
    Err(ThetaError::TruncationExhausted {
        partial: sum,
        terms: 2 * policy.max_terms + 1,
    })
}

/// Ramanujan's `f(a, b) = Σ_{m∈ℤ} a^{m(m+1)/2} b^{m(m-1)/2}`.
///
/// Only integer powers occur, so any complex `a`, `b` with `|ab| < 1` is
/// accepted, including `a = 0` or `b = 0`.
pub fn eval_f(a: Complex64, b: Complex64, policy: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    let ab = a * b;
    if !(ab.norm() < 1.0) {
        return Err(ThetaError::Divergent("|ab| >= 1"));
    }
    // t(m+1) = t(m) * a * (ab)^m for m >= 0, and symmetrically in b for m < 0.
    let one = Complex64::new(1.0, 0.0);
    let (mut tp, mut abp_pos) = (one, one);
    let (mut tn, mut abp_neg) = (one, one);
    symmetric_sum(
        policy,
        one,
        |_| {
            tp *= a * abp_pos;
            abp_pos *= ab;
            tp
        },
        |_| {
            tn *= b * abp_neg;
            abp_neg *= ab;
            tn
        },
    )
}

fn rat(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `f_(α,β,c)(a, b, x) = Σ_m a^{(m+α)(m+α+1/c)/2} b^{(m+α)(m+α-1/c)/2} e^{2πi(m+α)(x+β)}`.
pub fn eval_f_char(
    chars: &Characteristics,
    args: &LogThetaArgs,
    policy: &TruncationPolicy,
) -> Result<Complex64, ThetaError> {
    if chars.c == 0 {
        return Err(ThetaError::ArgDomain("characteristic c must be nonzero"));
    }
    args.validate()?;
    let alpha = rat(chars.alpha);
    let inv_c = 1.0 / chars.c as f64;
    let phase = Complex64::new(0.0, 2.0 * PI) * (args.x + rat(chars.beta));
    let term = |m: f64| -> Complex64 {
        let s = m + alpha;
        let e = args.log_a * (s * (s + inv_c) / 2.0) + args.log_b * (s * (s - inv_c) / 2.0) + phase * s;
        e.exp()
    };
    symmetric_sum(policy, term(0.0), |m| term(m as f64), |m| term(-(m as f64)))
}

/// Jacobi theta series `θ(z, τ) = Σ_m e^{πiτm²} e^{2πimz}`.
pub fn eval_jacobi_theta(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    if !(tau.im > 0.0) {
        return Err(ThetaError::Divergent("Im(tau) <= 0"));
    }
    let quad = Complex64::new(0.0, PI) * tau;
    let lin = Complex64::new(0.0, 2.0 * PI) * z;
    let term = |m: f64| (quad * (m * m) + lin * m).exp();
    symmetric_sum(policy, Complex64::new(1.0, 0.0), |m| term(m as f64), |m| term(-(m as f64)))
}

/// `(α : β)_∞ = Π_{k≥0} (1 - α β^k)`, stopping once `|α| |β|^{k+1} < term_tol`.
pub fn eval_pochhammer(alpha: Complex64, beta: Complex64, policy: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    policy.validate()?;
    let rb = beta.norm();
    if !(rb < 1.0) {
        return Err(ThetaError::Divergent("|beta| >= 1"));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut prod = one;
    let mut factor = alpha;
    for _ in 0..policy.max_terms {
        prod *= one - factor;
        factor *= beta;
        if factor.norm() < policy.term_tol {
            return Ok(prod);
        }
    }
    Err(ThetaError::TruncationExhausted {
        partial: prod,
        terms: policy.max_terms,
    })
}

/// Product side of the Jacobi triple product, `(-a:ab)_∞ (-b:ab)_∞ (ab:ab)_∞`.
pub fn eval_triple_product(a: Complex64, b: Complex64, policy: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    let ab = a * b;
    if !(ab.norm() < 1.0) {
        return Err(ThetaError::Divergent("|ab| >= 1"));
    }
    Ok(eval_pochhammer(-a, ab, policy)? * eval_pochhammer(-b, ab, policy)? * eval_pochhammer(ab, ab, policy)?)
}
