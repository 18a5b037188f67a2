//! The unitary DFT matrix `A_{jk} = e^{2πijk/n} / √n`, its spectrum, and
//! eigenvector constructions from two-sided series.
//!
//! Since `A⁴ = I` every eigenvalue is one of `1, i, -1, -i`. The eigenvector
//! builders here never diagonalise anything: they periodise an absolutely
//! convergent sequence `g_m` and combine it with its discrete transform so that
//! `A v = i^k v` holds by construction. [`residual`] checks that claim.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::theta::{eval_f_char, Characteristics, LogThetaArgs, ThetaError, TruncationPolicy};

/// Largest order [`build_dft`] will materialise.
pub const MAX_ORDER: usize = 4096;

/// Vectors with sup-norm below this carry no spectral information.
pub const DEGENERATE_NORM: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DftError {
    #[error("DFT order must be at least 1")]
    EmptyOrder,
    #[error("DFT order {0} exceeds the limit of {MAX_ORDER}")]
    SizeLimit(usize),
    #[error("eigenvalue {0} is not within the cluster tolerance of 1, -1, i or -i")]
    UnclusteredEigenvalue(Complex64),
    #[error("eigensolver did not return a triangular Schur form")]
    EigensolverFailed,
    #[error("constructed vector is numerically zero (sup norm {0:e})")]
    Degenerate(f64),
    #[error("eigenvalue class must be in 0..4, got {0}")]
    BadClass(i64),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DftMatrix {
    n: usize,
    entries: DMatrix<Complex64>,
}

impl DftMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.entries * v
    }

    /// `‖A A* − I‖∞` (max-abs entry).
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.entries * self.entries.adjoint();
        max_abs(&(prod - DMatrix::identity(self.n, self.n)))
    }

    /// `‖A⁴ − I‖∞` (max-abs entry).
    pub fn fourth_power_defect(&self) -> f64 {
        let sq = &self.entries * &self.entries;
        let p4 = &sq * &sq;
        max_abs(&(p4 - DMatrix::identity(self.n, self.n)))
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn sup_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `e^{2πi p/n}` with `p` reduced mod `n` first, which keeps the angle small.
fn root_of_unity(p: i64, n: usize) -> Complex64 {
    let r = p.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

pub fn build_dft(n: usize) -> Result<DftMatrix, DftError> {
    if n == 0 {
        return Err(DftError::EmptyOrder);
    }
    if n > MAX_ORDER {
        return Err(DftError::SizeLimit(n));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let entries = DMatrix::from_fn(n, n, |j, k| root_of_unity((j * k) as i64, n) * scale);
    Ok(DftMatrix { n, entries })
}

/// Eigenvalue class `i^k`, `k ∈ {0, 1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigClass(u8);

impl EigClass {
    pub const ALL: [EigClass; 4] = [EigClass(0), EigClass(1), EigClass(2), EigClass(3)];

    pub fn new(k: i64) -> Result<Self, DftError> {
        if (0..4).contains(&k) {
            Ok(Self(k as u8))
        } else {
            Err(DftError::BadClass(k))
        }
    }

    pub fn k(self) -> u8 {
        self.0
    }

    /// `i^k`, exact.
    pub fn eigenvalue(self) -> Complex64 {
        i_pow(self.0 as i64)
    }
}

/// `i^p` for any integer `p`, exact.
fn i_pow(p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Eigenvalue counts in the order `1, -1, i, -i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Multiplicities {
    pub one: usize,
    pub minus_one: usize,
    pub i: usize,
    pub minus_i: usize,
}

impl Multiplicities {
    pub fn total(&self) -> usize {
        self.one + self.minus_one + self.i + self.minus_i
    }

    pub fn of(&self, k: EigClass) -> usize {
        match k.k() {
            0 => self.one,
            1 => self.i,
            2 => self.minus_one,
            _ => self.minus_i,
        }
    }
}

impl fmt::Display for Multiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.one, self.minus_one, self.i, self.minus_i)
    }
}

/// `([(n+4)/4], [(n+2)/4], [(n+1)/4], [(n-1)/4])` for `1, -1, i, -i`.
pub fn expected_multiplicities(n: usize) -> Multiplicities {
    Multiplicities {
        one: (n + 4) / 4,
        minus_one: (n + 2) / 4,
        i: (n + 1) / 4,
        minus_i: n.saturating_sub(1) / 4,
    }
}

/// Counts eigenvalues of `a` by nearest fourth root of unity.
///
/// Eigenvalues come from a complex Schur decomposition. Any eigenvalue farther
/// than `cluster_tol` from all of `1, -1, i, -i` is an error.
pub fn measured_multiplicities(a: &DftMatrix, cluster_tol: f64) -> Result<Multiplicities, DftError> {
    let schur = nalgebra::linalg::Schur::new(a.entries.clone());
    let eigs = schur.eigenvalues().ok_or(DftError::EigensolverFailed)?;
    let mut counts = Multiplicities::default();
    for lambda in eigs.iter() {
        let (k, dist) = (0..4)
            .map(|k| (k, (lambda - i_pow(k)).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("four candidates");
        if dist > cluster_tol {
            return Err(DftError::UnclusteredEigenvalue(*lambda));
        }
        match k {
            0 => counts.one += 1,
            1 => counts.i += 1,
            2 => counts.minus_one += 1,
            _ => counts.minus_i += 1,
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigReport {
    pub n: usize,
    pub expected: Multiplicities,
    pub measured: Multiplicities,
    pub fourth_power_defect: f64,
}

impl EigReport {
    pub fn consistent(&self) -> bool {
        self.expected == self.measured
    }
}

pub fn eig_report(n: usize) -> Result<EigReport, DftError> {
    let a = build_dft(n)?;
    Ok(EigReport {
        n,
        expected: expected_multiplicities(n),
        measured: measured_multiplicities(&a, 1e-6)?,
        fourth_power_defect: a.fourth_power_defect(),
    })
}

/// An absolutely convergent two-sided sequence `m ↦ g_m` together with a
/// declared geometric decay rate `r < 1`, `|g_m| ≤ C r^{|m|}`.
pub struct SeriesTermOracle<F> {
    pub term: F,
    pub decay_bound: f64,
}

impl<F: Fn(i64) -> Complex64> SeriesTermOracle<F> {
    pub fn new(term: F, decay_bound: f64) -> Self {
        Self { term, decay_bound }
    }
}

/// Tabulates `g_l` for `l ∈ [-L, L]`. `L` starts at the window implied by the
/// declared decay rate and grows until the boundary terms settle below the
/// policy tolerance.
fn tabulate<F: Fn(i64) -> Complex64>(
    g: &SeriesTermOracle<F>,
    n: usize,
    policy: &TruncationPolicy,
) -> Result<(usize, Vec<Complex64>), DftError> {
    policy.validate()?;
    let cap = policy.max_terms.saturating_mul(n.max(1));
    let floor = if g.decay_bound > 0.0 && g.decay_bound < 1.0 {
        (policy.term_tol.ln() / g.decay_bound.ln()).ceil() as usize
    } else {
        0
    };
    let floor = floor.min(cap);

    let mut pos = vec![(g.term)(0)];
    let mut neg = vec![Complex64::new(0.0, 0.0)];
    let mut scale = pos[0].norm();
    let mut prev = (f64::INFINITY, f64::INFINITY);
    let mut quiet = 0;
    let mut l = 0usize;
    loop {
        l += 1;
        if l > cap {
            let partial: Complex64 = pos.iter().chain(neg.iter()).sum();
            return Err(ThetaError::TruncationExhausted {
                partial,
                terms: 2 * cap + 1,
            }
            .into());
        }
        let (tp, tn) = ((g.term)(l as i64), (g.term)(-(l as i64)));
        pos.push(tp);
        neg.push(tn);
        scale = scale.max(tp.norm()).max(tn.norm());
        let bound = policy.term_tol * (1.0 + scale);
        let small = tp.norm() < bound && tn.norm() < bound && tp.norm() <= prev.0 && tn.norm() <= prev.1;
        quiet = if small { quiet + 1 } else { 0 };
        prev = (tp.norm(), tn.norm());
        if l >= floor && quiet >= 3 {
            break;
        }
    }
    // Layout: index l + L holds g_l.
    let mut table: Vec<Complex64> = neg[1..].iter().rev().copied().collect();
    table.extend(pos);
    Ok((l, table))
}

fn degenerate_check(v: DVector<Complex64>) -> Result<DVector<Complex64>, DftError> {
    let norm = sup_norm(&v);
    if norm < DEGENERATE_NORM {
        Err(DftError::Degenerate(norm))
    } else {
        Ok(v)
    }
}

/// Eigenvector for `i^k` from a generic sequence `g`:
///
/// `v_j = Σ_m (g_{mn+j} + (-1)^k g_{mn-j}) + n^{-1/2} Σ_m [(-i)^k g_m + i^k g_{-m}] e^{2πimj/n}`.
pub fn matveev_vector<F: Fn(i64) -> Complex64>(
    g: &SeriesTermOracle<F>,
    n: usize,
    k: EigClass,
    policy: &TruncationPolicy,
) -> Result<DVector<Complex64>, DftError> {
    if n == 0 {
        return Err(DftError::EmptyOrder);
    }
    let (big_l, table) = tabulate(g, n, policy)?;
    let at = |l: i64| table[(l + big_l as i64) as usize];
    let kk = k.k() as i64;
    let sign = i_pow(2 * kk);
    let (c_pos, c_neg) = (i_pow(-kk), i_pow(kk));
    let scale = 1.0 / (n as f64).sqrt();
    let lmax = big_l as i64;
    let ni = n as i64;

    let v = DVector::from_fn(n, |j, _| {
        let j = j as i64;
        let mut periodic = Complex64::new(0.0, 0.0);
        let mut mirrored = Complex64::new(0.0, 0.0);
        let mut spectral = Complex64::new(0.0, 0.0);
        for l in -lmax..=lmax {
            if (l - j).rem_euclid(ni) == 0 {
                periodic += at(l);
            }
            if (l + j).rem_euclid(ni) == 0 {
                mirrored += at(l);
            }
            spectral += (c_pos * at(l) + c_neg * at(-l)) * root_of_unity(l * j, n);
        }
        periodic + sign * mirrored + spectral * scale
    });
    degenerate_check(v)
}

/// Eigenvector for `i^k` assembled from four theta functions with
/// characteristics:
///
/// `v_j = f_(j/n,0,n)(a,b,x) + (-1)^k f_(-j/n,0,n)(a,b,x)
///        + n^{-1/2} [(-i)^k f_(0,j/n,1)(a',b',x/n) + i^k f_(0,-j/n,1)(a',b',x/n)]`
///
/// with `a' = exp(log_a / n²)`, `b' = exp(log_b / n²)`.
pub fn theta_vector(
    n: usize,
    k: EigClass,
    args: &LogThetaArgs,
    policy: &TruncationPolicy,
) -> Result<DVector<Complex64>, DftError> {
    if n == 0 {
        return Err(DftError::EmptyOrder);
    }
    args.validate()?;
    let ni = n as i64;
    let kk = k.k() as i64;
    let sign = i_pow(2 * kk);
    let (c_pos, c_neg) = (i_pow(-kk), i_pow(kk));
    let scale = 1.0 / (n as f64).sqrt();
    let fine = LogThetaArgs {
        log_a: args.log_a / (n * n) as f64,
        log_b: args.log_b / (n * n) as f64,
        x: args.x / n as f64,
    };
    let zero = Rational64::from_integer(0);

    let mut v = DVector::zeros(n);
    for j in 0..ni {
        let frac = Rational64::new(j, ni);
        let shifted = |alpha: Rational64| Characteristics {
            alpha,
            beta: zero,
            c: ni,
        };
        let phased = |beta: Rational64| Characteristics { alpha: zero, beta, c: 1 };
        let direct = eval_f_char(&shifted(frac), args, policy)? + sign * eval_f_char(&shifted(-frac), args, policy)?;
        let dual = c_pos * eval_f_char(&phased(frac), &fine, policy)? + c_neg * eval_f_char(&phased(-frac), &fine, policy)?;
        v[j as usize] = direct + dual * scale;
    }
    degenerate_check(v)
}

/// The sequence `g_m = a^{m(m+1)/(2n²)} b^{m(m-1)/(2n²)} e^{2πimx/n}` whose
/// periodisation reproduces [`theta_vector`].
pub fn theta_oracle(n: usize, args: LogThetaArgs) -> SeriesTermOracle<impl Fn(i64) -> Complex64> {
    let n2 = (n * n) as f64;
    let decay = ((args.log_a.re + args.log_b.re) / (2.0 * n2)).exp();
    let term = move |m: i64| {
        let m = m as f64;
        let e = args.log_a * (m * (m + 1.0) / (2.0 * n2))
            + args.log_b * (m * (m - 1.0) / (2.0 * n2))
            + Complex64::new(0.0, 2.0 * PI) * args.x * (m / n as f64);
        e.exp()
    };
    SeriesTermOracle::new(term, decay)
}

/// `‖A v − i^k v‖∞ / max(1, ‖v‖∞)`.
pub fn residual(a: &DftMatrix, v: &DVector<Complex64>, k: EigClass) -> f64 {
    let diff = a.apply(v) - v * k.eigenvalue();
    sup_norm(&diff) / sup_norm(v).max(1.0)
}
