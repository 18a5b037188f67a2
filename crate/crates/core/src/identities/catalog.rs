use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ExactCase, ExactCheck, IdentityDescriptor, Mode, NumericCheck, NumericDomain, NumericSample};
use crate::qseries::{
    f_series, general_product_form, pentagonal_fifth_power, polygonal_gf, product_form, quadratic_rhs,
    sum_of_pentagonals_by_counting, theta_sum, triple_product_q, PolygonalSpec, PuiseuxSeries, QMonomial,
    QSeriesError, QuadraticForm, Side,
};
use crate::theta::{
    eval_f, eval_f_char, eval_jacobi_theta, eval_pochhammer, eval_triple_product, symmetric_sum, Characteristics,
    LogThetaArgs, ThetaError, TruncationPolicy,
};

type Pairs = Result<Vec<(Complex64, Complex64)>, ThetaError>;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e^{2πi w}`.
fn cis2pi(w: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * w).exp()
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// `2√3 / (1 + √3)`.
fn c_three() -> f64 {
    2.0 * sqrt3() / (1.0 + sqrt3())
}

/// `2 / (1 + √3)`.
fn c_two() -> f64 {
    2.0 / (1.0 + sqrt3())
}

fn fc(alpha: Rational64, beta: Rational64, cc: i64, args: &LogThetaArgs, p: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    eval_f_char(&Characteristics { alpha, beta, c: cc }, args, p)
}

/// Arguments `(a^{1/n²}, b^{1/n²}, x/n)` along the sampled logarithms.
fn fine_args(s: &NumericSample, n: f64) -> LogThetaArgs {
    LogThetaArgs {
        log_a: s.log_a / (n * n),
        log_b: s.log_b / (n * n),
        x: s.x / n,
    }
}

/// Components of the order-`n` theta eigenvectors used by the DFT identities:
/// `f = f_(0,0,n)`, `g = f_(1/n,0,n) + f_(-1/n,0,n)` at `(a, b, x)`, and
/// `h = f_(0,0,1)`, `k = f_(0,1/n,1) + f_(0,-1/n,1)` at the `1/n²` roots.
struct DftParts {
    f: Complex64,
    g: Complex64,
    h: Complex64,
    k: Complex64,
}

fn dft_parts(s: &NumericSample, n: i64, p: &TruncationPolicy) -> Result<DftParts, ThetaError> {
    let args = s.theta_args();
    let fine = fine_args(s, n as f64);
    let z = Rational64::zero();
    Ok(DftParts {
        f: fc(z, z, n, &args, p)?,
        g: fc(r(1, n), z, n, &args, p)? + fc(r(-1, n), z, n, &args, p)?,
        h: fc(z, z, 1, &fine, p)?,
        k: fc(z, r(1, n), 1, &fine, p)? + fc(z, r(-1, n), 1, &fine, p)?,
    })
}

fn lemma_4_1_1(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let d = dft_parts(s, 2, p)?;
    Ok(vec![(2.0 * d.f + d.g, 2.0 * d.h)])
}

fn lemma_4_1_2(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let d = dft_parts(s, 2, p)?;
    Ok(vec![(2.0 * d.f - d.g, d.k)])
}

fn corollary_4_2_1(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let d = dft_parts(s, 2, p)?;
    Ok(vec![(4.0 * d.f, 2.0 * d.h + d.k)])
}

fn corollary_4_2_2(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let d = dft_parts(s, 2, p)?;
    Ok(vec![(2.0 * d.g, 2.0 * d.h - d.k)])
}

fn corollary_4_2_3(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let d = dft_parts(s, 2, p)?;
    Ok(vec![(4.0 * d.f * d.f - d.g * d.g, 2.0 * d.h * d.k)])
}

fn dft3_lhs(d: &DftParts) -> Complex64 {
    c_three() * d.f - sqrt3() * d.g
}

fn lemma_4_3_characteristics(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let d = dft_parts(s, 3, p)?;
    Ok(vec![(dft3_lhs(&d), d.k - c_two() * d.h)])
}

/// `f(a^{1/9} e^{2πiw}, b^{1/9} e^{-2πiw})` through the plain series.
fn twisted_f(s: &NumericSample, w: Complex64, p: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    let a = (s.log_a / 9.0).exp() * cis2pi(w);
    let b = (s.log_b / 9.0).exp() * cis2pi(-w);
    eval_f(a, b, p)
}

fn lemma_4_3_with_last_phase(s: &NumericSample, p: &TruncationPolicy, last: Complex64) -> Pairs {
    let d = dft_parts(s, 3, p)?;
    let rhs = twisted_f(s, (s.x + 1.0) / 3.0, p)? + twisted_f(s, (s.x - 1.0) / 3.0, p)? - c_two() * twisted_f(s, last, p)?;
    Ok(vec![(dft3_lhs(&d), rhs)])
}

fn lemma_4_3(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    lemma_4_3_with_last_phase(s, p, s.x / 3.0)
}

fn lemma_4_3_printed_phase(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    lemma_4_3_with_last_phase(s, p, s.x)
}

/// `Σ_{m∈ℤ} a^{pa(m)} b^{pb(m)} e^{2πi (m + shift) x}` with integer exponents,
/// for `a = exp(la)`, `b = exp(lb)`.
fn integer_power_sum(
    la: Complex64,
    lb: Complex64,
    x: Complex64,
    pa: fn(i64) -> i64,
    pb: fn(i64) -> i64,
    shift: f64,
    p: &TruncationPolicy,
) -> Result<Complex64, ThetaError> {
    let term = |m: i64| (la * pa(m) as f64 + lb * pb(m) as f64 + Complex64::new(0.0, 2.0 * PI) * x * (m as f64 + shift)).exp();
    symmetric_sum(p, term(0), |m| term(m as i64), |m| term(-(m as i64)))
}

/// The three-term statement with sums written in integer powers of
/// `a = exp(log_a / 9)`, `b = exp(log_b / 9)` and the right side as products
/// `(ab, -a e^{2πiw}, -b e^{-2πiw} : ab)_∞`. `last_sign` and `last_phase`
/// select the final product's coefficient and phase.
fn lemma_4_3_products(s: &NumericSample, p: &TruncationPolicy, last_sign: f64, last_phase: Complex64) -> Pairs {
    let (la, lb) = (s.log_a / 9.0, s.log_b / 9.0);
    let s1 = integer_power_sum(la, lb, s.x, |m| 3 * m * (3 * m + 1) / 2, |m| 3 * m * (3 * m - 1) / 2, 0.0, p)?;
    let s2 = integer_power_sum(
        la,
        lb,
        s.x,
        |m| (3 * m + 1) * (3 * m + 2) / 2,
        |m| 3 * m * (3 * m + 1) / 2,
        1.0 / 3.0,
        p,
    )?;
    let s3 = integer_power_sum(
        la,
        lb,
        s.x,
        |m| 3 * m * (3 * m - 1) / 2,
        |m| (3 * m - 1) * (3 * m - 2) / 2,
        -1.0 / 3.0,
        p,
    )?;
    let lhs = c_three() * s1 - sqrt3() * (s2 + s3);

    let (a, b) = (la.exp(), lb.exp());
    let ab = a * b;
    let euler = eval_pochhammer(ab, ab, p)?;
    let prod = |w: Complex64| -> Result<Complex64, ThetaError> {
        Ok(euler * eval_pochhammer(-a * cis2pi(w), ab, p)? * eval_pochhammer(-b * cis2pi(-w), ab, p)?)
    };
    let rhs = prod((s.x + 1.0) / 3.0)? + prod((s.x - 1.0) / 3.0)? + last_sign * c_two() * prod(last_phase)?;
    Ok(vec![(lhs, rhs)])
}

fn lemma_4_3_statement(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    // "- (-2/(1+√3)) (ab, -a e^{2πix}, -b e^{-2πix} : ab)_∞" as written.
    lemma_4_3_products(s, p, 1.0, s.x)
}

fn lemma_4_3_statement_sign(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    lemma_4_3_products(s, p, 1.0, s.x / 3.0)
}

fn lemma_4_3_products_corrected(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    lemma_4_3_products(s, p, -1.0, s.x / 3.0)
}

fn theta(z: Complex64, tau: Complex64, p: &TruncationPolicy) -> Result<Complex64, ThetaError> {
    eval_jacobi_theta(z, tau, p)
}

fn lemma_4_4_1(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let (t, f, x) = (s.tau, s.f_tau, s.x);
    let i_pi = Complex64::new(0.0, PI);
    let lhs = 2.0 * theta((f - t) / 4.0 + x, t, p)? - 2.0 * theta((f - t) / 8.0 + (x + 1.0) / 2.0, t / 4.0, p)?;
    let rhs = (i_pi * (f / 4.0 + x)).exp() * theta((f + t) / 4.0 + x, t, p)?
        + (i_pi * ((2.0 * t - f) / 4.0 - x)).exp() * theta((f - 3.0 * t) / 4.0 + x, t, p)?;
    Ok(vec![(lhs, rhs)])
}

fn lemma_4_4_2(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let (t, f, x) = (s.tau, s.f_tau, s.x);
    let i_pi3 = Complex64::new(0.0, PI / 3.0);
    let lhs = c_three() * theta((f - t) / 6.0 + x, t, p)?
        - sqrt3()
            * ((i_pi3 * (f / 3.0 + 2.0 * x)).exp() * theta((f + t) / 6.0 + x, t, p)?
                + (i_pi3 * ((2.0 * t - f) / 3.0 - 2.0 * x)).exp() * theta((f - 3.0 * t) / 6.0 + x, t, p)?);
    let t9 = t / 9.0;
    let base = (f - t) / 18.0;
    let rhs = theta(base + (x + 1.0) / 3.0, t9, p)? + theta(base + (x - 1.0) / 3.0, t9, p)?
        - c_two() * theta(base + x / 3.0, t9, p)?;
    Ok(vec![(lhs, rhs)])
}

fn theta_symmetry(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    Ok(vec![(eval_f(s.a, s.b, p)?, eval_f(s.b, s.a, p)?)])
}

fn theta_doubling(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    Ok(vec![(eval_f(c(1.0), s.z, p)?, 2.0 * eval_f(s.z, s.z.powi(3), p)?)])
}

fn theta_vanishing(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    Ok(vec![(eval_f(c(-1.0), s.z, p)?, Complex64::zero())])
}

fn theta_quasi_periodicity(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let (a, b) = (s.a, s.b);
    let ab = a * b;
    let lhs = eval_f(a, b, p)?;
    (-3i32..=3)
        .map(|n| {
            let pre = a.powi(n * (n + 1) / 2) * b.powi(n * (n - 1) / 2);
            Ok((lhs, pre * eval_f(a * ab.powi(n), b * ab.powi(-n), p)?))
        })
        .collect()
}

fn triple_product_numeric(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    Ok(vec![(eval_f(s.a, s.b, p)?, eval_triple_product(s.a, s.b, p)?)])
}

/// The six forms `k1 m² + k2 m` checked against the half-sum of products.
pub(crate) fn lemma_5_1_forms() -> Vec<QuadraticForm> {
    [(r(1, 1), r(0, 1)), (r(1, 2), r(1, 2)), (r(3, 2), r(-1, 2)), (r(2, 1), r(-1, 1)), (r(5, 2), r(-3, 2)), (r(3, 1), r(-2, 1))]
        .into_iter()
        .map(|(k1, k2)| QuadraticForm::pure(k1, k2).expect("k1 > 0"))
        .collect()
}

fn lemma_5_1_shifted_forms() -> Vec<QuadraticForm> {
    [(r(1, 1), r(1, 1), r(2, 1)), (r(3, 2), r(-1, 2), r(1, 3)), (r(1, 2), r(1, 2), r(-1, 4)), (r(2, 1), r(-1, 1), r(5, 2))]
        .into_iter()
        .map(|(k1, k2, k3)| QuadraticForm::new(k1, k2, k3).expect("k1 > 0"))
        .collect()
}

fn rf(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn lemma_5_1_numeric(s: &NumericSample, p: &TruncationPolicy) -> Pairs {
    let q = s.q;
    lemma_5_1_forms()
        .iter()
        .map(|f| {
            let (k1, k2) = (rf(f.k1), rf(f.k2));
            let lhs = eval_f(c(q.powf(k1 + k2)), c(q.powf(k1 - k2)), p)?;
            let ea = q.powf((k1 + 2.0 * k2) / 4.0);
            let eb = q.powf((k1 - 2.0 * k2) / 4.0);
            let rhs = 0.5 * (eval_triple_product(c(-ea), c(-eb), p)? + eval_triple_product(c(ea), c(eb), p)?);
            Ok((lhs, rhs))
        })
        .collect()
}

fn quadratic_cases(forms: Vec<QuadraticForm>, cutoff: Rational64) -> Result<Vec<ExactCase>, QSeriesError> {
    forms
        .iter()
        .map(|f| {
            Ok(ExactCase {
                label: format!("form {f}"),
                lhs: theta_sum(f, cutoff)?,
                rhs: quadratic_rhs(f, cutoff)?,
                upto: None,
            })
        })
        .collect()
}

/// Seeded monomial pairs `(c_a q^{e_a}, c_b q^{e_b})` with `e_a + e_b ≥ 1/4`.
pub(crate) fn monomial_pairs(seed: u64, count: usize) -> Vec<(QMonomial, QMonomial)> {
    let coeffs = [r(1, 1), r(-1, 1), r(2, 1), r(-2, 1), r(1, 2), r(3, 1), r(-1, 3)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6f_6e6f_6d69_616c);
    let pick = |rng: &mut ChaCha8Rng| {
        let c = coeffs[rng.random_range(0..coeffs.len())];
        BigRational::new((*c.numer()).into(), (*c.denom()).into())
    };
    (0..count)
        .map(|_| {
            let ea = rng.random_range(-4i64..=16);
            let total = rng.random_range(2i64..=20);
            let a = QMonomial::new(pick(&mut rng), r(ea, 8));
            let b = QMonomial::new(pick(&mut rng), r(total - ea, 8));
            (a, b)
        })
        .collect()
}

fn fmt_monomial(m: &QMonomial) -> String {
    format!("{}*q^({})", m.coeff, m.exponent)
}

fn triple_product_cases(cutoff: Rational64, seed: u64) -> Result<Vec<ExactCase>, QSeriesError> {
    monomial_pairs(seed, 10)
        .iter()
        .map(|(a, b)| {
            Ok(ExactCase {
                label: format!("a = {}, b = {}", fmt_monomial(a), fmt_monomial(b)),
                lhs: triple_product_q(a, b, cutoff)?,
                rhs: f_series(a, b, 1, cutoff)?,
                upto: None,
            })
        })
        .collect()
}

const PRINTED_FIFTH_POWER: [i64; 10] = [1, 5, 15, 30, 45, 56, 65, 85, 115, 150];

fn fifth_power_cases(cutoff: Rational64, _seed: u64) -> Result<Vec<ExactCase>, QSeriesError> {
    let series = pentagonal_fifth_power(cutoff)?;
    let n_max = cutoff.floor().to_integer().max(0) as u64;
    let counted = PuiseuxSeries::from_terms(
        sum_of_pentagonals_by_counting(n_max)
            .into_iter()
            .enumerate()
            .map(|(n, k)| (r(n as i64, 1), BigRational::from_integer(k.into()))),
        cutoff,
    )?;
    let printed = PuiseuxSeries::from_terms(
        PRINTED_FIFTH_POWER.iter().enumerate().map(|(n, &k)| (r(n as i64, 1), BigRational::from_integer(k.into()))),
        r(9, 1),
    )?;
    Ok(vec![
        ExactCase {
            label: "fifth power vs five-part counting".into(),
            lhs: series.clone(),
            rhs: counted,
            upto: None,
        },
        ExactCase {
            label: "fifth power vs listed coefficients".into(),
            lhs: series,
            rhs: printed,
            upto: Some(r(9, 1)),
        },
    ])
}

fn polygonal_cases(rs: &[i64], rhs_side: fn(PolygonalSpec, Rational64) -> Result<PuiseuxSeries, QSeriesError>, cutoff: Rational64) -> Result<Vec<ExactCase>, QSeriesError> {
    rs.iter()
        .map(|&rr| {
            let spec = PolygonalSpec::new(rr)?;
            Ok(ExactCase {
                label: format!("r = {rr}"),
                lhs: polygonal_gf(spec, Side::Lhs, cutoff)?,
                rhs: rhs_side(spec, cutoff)?,
                upto: None,
            })
        })
        .collect()
}

fn half_sum_side(spec: PolygonalSpec, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    polygonal_gf(spec, Side::HalfSum, cutoff)
}

fn base(id: &'static str, mode: Mode, statement: &'static str) -> IdentityDescriptor {
    IdentityDescriptor {
        id,
        mode,
        statement,
        domain: NumericDomain::default(),
        exact_domain: "",
        tolerance: 1e-9,
        cutoff: r(20, 1),
        sample_group: id,
        skip_degenerate: true,
        expected_to_hold: true,
        numeric: None,
        exact: None,
    }
}

fn numeric(id: &'static str, statement: &'static str, group: &'static str, check: NumericCheck) -> IdentityDescriptor {
    IdentityDescriptor {
        sample_group: group,
        numeric: Some(check),
        ..base(id, Mode::Numeric, statement)
    }
}

fn exact(id: &'static str, statement: &'static str, domain: &'static str, check: ExactCheck) -> IdentityDescriptor {
    IdentityDescriptor {
        exact_domain: domain,
        exact: Some(check),
        ..base(id, Mode::Exact, statement)
    }
}

fn probe(d: IdentityDescriptor) -> IdentityDescriptor {
    IdentityDescriptor {
        expected_to_hold: false,
        ..d
    }
}

fn theta_property(d: IdentityDescriptor) -> IdentityDescriptor {
    IdentityDescriptor { tolerance: 1e-10, ..d }
}

const POLYGON_NAMES: [&str; 6] = ["triangular", "square", "pentagonal", "hexagonal", "heptagonal", "octagonal"];

fn corollary_items() -> Vec<IdentityDescriptor> {
    const IDS: [(&str, &str); 6] = [
        ("corollary_5_2_item1", "corollary_5_2_item1_printed"),
        ("corollary_5_2_item2", "corollary_5_2_item2_printed"),
        ("corollary_5_2_item3", "corollary_5_2_item3_printed"),
        ("corollary_5_2_item4", "corollary_5_2_item4_printed"),
        ("corollary_5_2_item5", "corollary_5_2_item5_printed"),
        ("corollary_5_2_item6", "corollary_5_2_item6_printed"),
    ];
    const HALF: [&str; 6] = [
        "2 Σ q^{m(m+1)/2} equals twice the half-sum of triple products",
        "2 Σ q^{m²} equals twice the half-sum of triple products",
        "2 Σ q^{m(3m-1)/2} equals twice the half-sum of triple products",
        "2 Σ q^{m(2m-1)} equals twice the half-sum of triple products",
        "2 Σ q^{m(5m-3)/2} equals twice the half-sum of triple products",
        "2 Σ q^{3m²-2m} equals twice the half-sum of triple products",
    ];
    const PRODUCT: [&str; 6] = [
        "2 Σ q^{m(m+1)/2} = Π(1-q^{(k+1)/4}) [Π(1-q^{(2k+3)/8})(1-q^{(2k-1)/8}) + Π(1+q^{(2k+3)/8})(1+q^{(2k-1)/8})]",
        "2 + 4 Σ_{m≥1} q^{m²} = Π(1-q^{(k+1)/2}) [Π(1-q^{(2k+1)/4})² + Π(1+q^{(2k+1)/4})²]",
        "2 Σ q^{m(3m-1)/2} = Π(1-q^{3(k+1)/4}) [Π(1-q^{(6k+1)/8})(1-q^{(6k+5)/8}) + Π(1+q^{(6k+1)/8})(1+q^{(6k+5)/8})]",
        "2 Σ q^{m(2m-1)} = Π(1-q^{2k+2})(1+q^k)",
        "2 Σ q^{m(5m-3)/2} = Π(1-q^{5(k+1)/4}) [Π(1-q^{(10k-1)/8})(1-q^{(10k+11)/8}) + Π(1+q^{(10k-1)/8})(1+q^{(10k+11)/8})]",
        "2 Σ q^{3m²-2m} = Π(1-q^{3(k+1)/2}) [Π(1-q^{(6k-1)/4})(1-q^{(6k+7)/4}) + Π(1+q^{(6k-1)/4})(1+q^{(6k+7)/4})]",
    ];
    let mut out = Vec::new();
    for (i, (half_id, product_id)) in IDS.iter().enumerate() {
        let rr = i as i64 + 3;
        let half: ExactCheck = Arc::new(move |cutoff, _| polygonal_cases(&[rr], half_sum_side, cutoff));
        let product: ExactCheck = Arc::new(move |cutoff, _| polygonal_cases(&[rr], product_form, cutoff));
        out.push(exact(half_id, HALF[i], POLYGON_NAMES[i], half));
        out.push(exact(product_id, PRODUCT[i], POLYGON_NAMES[i], product));
    }
    let general: Vec<i64> = (3..=12).collect();
    let g1 = general.clone();
    out.push(exact(
        "corollary_5_2_item7",
        "2 Σ q^{((r-2)m² + (4-r)m)/2} equals twice the half-sum of triple products",
        "r = 3..12",
        Arc::new(move |cutoff, _| polygonal_cases(&g1, half_sum_side, cutoff)),
    ));
    out.push(exact(
        "corollary_5_2_item7_printed",
        "2 Σ q^{((r-2)m² + (4-r)m)/2} = (q^{(r-2)/4}, q^{(6-r)/8}, q^{(3r-10)/8} : q^{(r-2)/4})_∞ + (q^{(r-2)/4}, -q^{(6-r)/8}, -q^{(3r-10)/8} : q^{(r-2)/4})_∞",
        "r = 3..12",
        Arc::new(move |cutoff, _| polygonal_cases(&general, general_product_form, cutoff)),
    ));
    out
}

/// Every registered identity, sorted by id.
pub fn register_all() -> Vec<IdentityDescriptor> {
    let mut all = vec![
        numeric("lemma_4_1_1", "2 f_(0,0,2)(a,b,x) + f_(1/2,0,2)(a,b,x) + f_(-1/2,0,2)(a,b,x) = 2 f_(0,0,1)(a^{1/4},b^{1/4},x/2)", "dft2", lemma_4_1_1),
        numeric("lemma_4_1_2", "2 f_(0,0,2)(a,b,x) - [f_(1/2,0,2) + f_(-1/2,0,2)](a,b,x) = [f_(0,1/2,1) + f_(0,-1/2,1)](a^{1/4},b^{1/4},x/2)", "dft2", lemma_4_1_2),
        numeric("corollary_4_2_1", "4 f_(0,0,2)(a,b,x) = 2 f_(0,0,1)(a',b',x/2) + [f_(0,1/2,1) + f_(0,-1/2,1)](a',b',x/2), a' = a^{1/4}", "dft2", corollary_4_2_1),
        numeric("corollary_4_2_2", "2 [f_(1/2,0,2) + f_(-1/2,0,2)](a,b,x) = 2 f_(0,0,1)(a',b',x/2) - [f_(0,1/2,1) + f_(0,-1/2,1)](a',b',x/2)", "dft2", corollary_4_2_2),
        numeric("corollary_4_2_3", "4 f_(0,0,2)² - [f_(1/2,0,2) + f_(-1/2,0,2)]² = 2 f_(0,0,1)(a',b',x/2) [f_(0,1/2,1) + f_(0,-1/2,1)](a',b',x/2)", "dft2", corollary_4_2_3),
        numeric("lemma_4_3", "c f_(0,0,3) - √3 [f_(1/3,0,3) + f_(-1/3,0,3)] = f(a'e^{2πi(x+1)/3}, b'e^{-2πi(x+1)/3}) + f(a'e^{2πi(x-1)/3}, b'e^{-2πi(x-1)/3}) - 2/(1+√3) f(a'e^{2πix/3}, b'e^{-2πix/3}), c = 2√3/(1+√3), a' = a^{1/9}", "dft3", lemma_4_3),
        numeric("lemma_4_3_r2_5", "c f_(0,0,3) - √3 [f_(1/3,0,3) + f_(-1/3,0,3)](a,b,x) = [f_(0,1/3,1) + f_(0,-1/3,1)](a',b',x/3) - 2/(1+√3) f_(0,0,1)(a',b',x/3)", "dft3", lemma_4_3_characteristics),
        probe(numeric("lemma_4_3_printed_phase", "as lemma_4_3 but with the last term taken literally as f(a'e^{2πix}, b'e^{-2πix})", "dft3", lemma_4_3_printed_phase)),
        probe(numeric("lemma_4_3_statement", "three-term statement in integer powers with the last product taken literally: - (-2/(1+√3)) (ab, -ae^{2πix}, -be^{-2πix} : ab)_∞", "dft3", lemma_4_3_statement)),
        probe(numeric("lemma_4_3_statement_sign", "three-term statement with the last product's phase at x/3 but its coefficient still + 2/(1+√3)", "dft3", lemma_4_3_statement_sign)),
        numeric("lemma_4_3_products", "three-term statement in integer powers with product right side, last product at phase x/3 with coefficient -2/(1+√3)", "dft3", lemma_4_3_products_corrected),
        numeric("lemma_4_4_1", "2θ((f-τ)/4+x, τ) - 2θ((f-τ)/8+(x+1)/2, τ/4) = e^{πi(f/4+x)} θ((f+τ)/4+x, τ) + e^{πi((2τ-f)/4-x)} θ((f-3τ)/4+x, τ)", "jacobi", lemma_4_4_1),
        numeric("lemma_4_4_2", "c θ((f-τ)/6+x, τ) - √3 [e^{πi(f/3+2x)/3} θ((f+τ)/6+x, τ) + e^{πi((2τ-f)/3-2x)/3} θ((f-3τ)/6+x, τ)] = θ((f-τ)/18+(x+1)/3, τ/9) + θ((f-τ)/18+(x-1)/3, τ/9) - 2/(1+√3) θ((f-τ)/18+x/3, τ/9)", "jacobi", lemma_4_4_2),
        theta_property(numeric("theta_symmetry", "f(a,b) = f(b,a)", "plain", theta_symmetry)),
        theta_property(numeric("theta_doubling", "f(1,z) = 2 f(z,z³)", "plain", theta_doubling)),
        theta_property(IdentityDescriptor {
            skip_degenerate: false,
            ..numeric("theta_vanishing", "f(-1,z) = 0", "plain", theta_vanishing)
        }),
        theta_property(numeric("theta_quasi_periodicity", "f(a,b) = a^{n(n+1)/2} b^{n(n-1)/2} f(a(ab)^n, b(ab)^{-n}) for n = -3..3", "plain", theta_quasi_periodicity)),
        IdentityDescriptor {
            mode: Mode::Both,
            tolerance: 1e-10,
            numeric: Some(triple_product_numeric),
            sample_group: "plain",
            ..exact("triple_product", "f(a,b) = (-a:ab)_∞ (-b:ab)_∞ (ab:ab)_∞", "10 seeded monomial pairs c_a q^{e_a}, c_b q^{e_b}", Arc::new(triple_product_cases))
        },
        IdentityDescriptor {
            mode: Mode::Both,
            numeric: Some(lemma_5_1_numeric),
            sample_group: "nome",
            ..exact(
                "lemma_5_1",
                "Σ q^{k1 m² + k2 m} = ½[(q^{(k1+2k2)/4}, q^{(k1-2k2)/4}, q^{k1/2} : q^{k1/2})_∞ + (-q^{(k1+2k2)/4}, -q^{(k1-2k2)/4}, q^{k1/2} : q^{k1/2})_∞]",
                "(k1, k2) in (1,0), (1/2,1/2), (3/2,-1/2), (2,-1), (5/2,-3/2), (3,-2)",
                Arc::new(|cutoff, _| quadratic_cases(lemma_5_1_forms(), cutoff)),
            )
        },
        exact(
            "lemma_5_1_shifted",
            "Σ q^{k1 m² + k2 m + k3} = q^{k3} times the half-sum of triple products",
            "(k1, k2, k3) in (1,1,2), (3/2,-1/2,1/3), (1/2,1/2,-1/4), (2,-1,5/2)",
            Arc::new(|cutoff, _| quadratic_cases(lemma_5_1_shifted_forms(), cutoff)),
        ),
        exact(
            "pentagonal_fifth_power",
            "(Σ q^{m(3m-1)/2})⁵ = 1 + 5q + 15q² + 30q³ + 45q⁴ + 56q⁵ + 65q⁶ + 85q⁷ + 115q⁸ + 150q⁹ + …",
            "five-part counting oracle through the cutoff; listed coefficients through q^9",
            Arc::new(fifth_power_cases),
        ),
    ];
    all.extend(corollary_items());
    all.sort_by(|a, b| a.id.cmp(b.id));
    all
}

pub fn registry_by_id(id: &str) -> Option<IdentityDescriptor> {
    register_all().into_iter().find(|d| d.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_are_unique_and_sorted() {
        let all = register_all();
        assert!(all.len() >= 16);
        let ids: HashSet<_> = all.iter().map(|d| d.id).collect();
        assert_eq!(ids.len(), all.len());
        assert!(all.windows(2).all(|w| w[0].id < w[1].id));
    }

    #[test]
    fn catalogue_content() {
        assert_eq!(registry_by_id("lemma_4_1_2").unwrap().mode, Mode::Numeric);
        assert_eq!(registry_by_id("corollary_5_2_item4").unwrap().mode, Mode::Exact);
        for d in register_all() {
            assert_eq!(d.mode.permits(Mode::Numeric), d.numeric.is_some(), "{}", d.id);
            assert_eq!(d.mode.permits(Mode::Exact), d.exact.is_some(), "{}", d.id);
        }
    }

    #[test]
    fn monomial_pairs_are_convergent_and_seeded() {
        let a = monomial_pairs(1, 10);
        assert_eq!(a, monomial_pairs(1, 10));
        assert_ne!(a, monomial_pairs(2, 10));
        for (x, y) in &a {
            assert!(x.exponent + y.exponent >= r(1, 4));
        }
    }
}
