//! Theta sums, q-Pochhammer products and the two sides of the triple product.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::series::{lattice_of, PuiseuxSeries};
use super::{QMonomial, QSeriesError, QuadraticForm};

/// Integer range guaranteed to contain every `m` with `s m² + d m + c ≤ 0`
/// (`s > 0`); callers re-check each candidate exactly.
fn quadratic_window(s: Rational64, d: Rational64, c: Rational64) -> Option<(i64, i64)> {
    let (s, d, c) = (s.to_f64()?, d.to_f64()?, c.to_f64()?);
    let disc = d * d - 4.0 * s * c;
    if disc < -1e-9 {
        return None;
    }
    let root = disc.max(0.0).sqrt();
    let lo = ((-d - root) / (2.0 * s)).floor() as i64 - 1;
    let hi = ((-d + root) / (2.0 * s)).ceil() as i64 + 1;
    Some((lo, hi))
}

/// `Σ_{m∈ℤ} q^{k1 m² + k2 m + k3}` by direct enumeration.
pub fn theta_sum(form: &QuadraticForm, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    if !form.k1.is_positive() {
        return Err(QSeriesError::FormDivergent(form.k1));
    }
    let denom = lattice_of(&[form.k1, form.k2, form.k3])?;
    let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
    if let Some((lo, hi)) = quadratic_window(form.k1, form.k2, form.k3 - cutoff) {
        for m in lo..=hi {
            let e = form.value(m);
            if e <= cutoff {
                let num = (e * Rational64::from_integer(denom)).to_integer();
                *coeffs.entry(num).or_insert_with(BigRational::zero) += BigRational::one();
            }
        }
    }
    Ok(PuiseuxSeries::from_parts(denom, cutoff, coeffs))
}

/// Sum of the exponents of all factors with negative exponent; a lower bound
/// on the valuation of `Π_k (1 - c b^k q^{e0 + k·step})`.
fn negative_mass(e0: Rational64, step: Rational64) -> Rational64 {
    let mut total = Rational64::zero();
    let mut e = e0;
    while e.is_negative() {
        total += e;
        e += step;
    }
    total
}

/// `Π_{k≥0} (1 - c · base^k · q^{e0 + k·step})` exact through `cutoff`.
///
/// Only factors with exponent up to `cutoff` plus the total negative mass
/// contribute; the rest are `1` modulo the cutoff. A factor `1 - q^0` makes
/// the whole product exactly zero.
pub fn pochhammer_q_scaled(
    c: &BigRational,
    e0: Rational64,
    base: &BigRational,
    step: Rational64,
    cutoff: Rational64,
) -> Result<PuiseuxSeries, QSeriesError> {
    if !step.is_positive() {
        return Err(QSeriesError::StepNonpositive(step));
    }
    let denom = lattice_of(&[e0, step])?;
    if c.is_zero() {
        return Ok(PuiseuxSeries::one(cutoff));
    }
    let work = cutoff - negative_mass(e0, step);
    let mut acc = PuiseuxSeries::one(work).rebase(denom);
    let d = Rational64::from_integer(denom);
    let mut coeff = c.clone();
    let mut e = e0;
    while e <= work {
        if coeff.is_zero() {
            break;
        }
        acc.mul_binomial(&coeff, (e * d).to_integer());
        if acc.is_zero() {
            return Ok(PuiseuxSeries::zero(cutoff).rebase(denom));
        }
        coeff *= base;
        e += step;
    }
    Ok(acc.truncate(cutoff))
}

/// `(c q^{e0} : q^{step})_∞`.
pub fn pochhammer_q(
    c: &BigRational,
    e0: Rational64,
    step: Rational64,
    cutoff: Rational64,
) -> Result<PuiseuxSeries, QSeriesError> {
    pochhammer_q_scaled(c, e0, &BigRational::one(), step, cutoff)
}

/// One factor `(c q^{e0} : base q^{step})_∞^power` of a product of Pochhammers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PochFactor {
    pub coeff: BigRational,
    pub e0: Rational64,
    pub base: BigRational,
    pub step: Rational64,
    pub power: u32,
}

impl PochFactor {
    /// `(c q^{e0} : q^{step})_∞` with unit base coefficient.
    pub fn new(c: i64, e0: Rational64, step: Rational64) -> Self {
        Self {
            coeff: BigRational::from_integer(c.into()),
            e0,
            base: BigRational::one(),
            step,
            power: 1,
        }
    }

    pub fn pow(mut self, power: u32) -> Self {
        self.power = power;
        self
    }
}

/// Product of Pochhammer factors exact through `cutoff`. Each factor is
/// expanded far enough past the cutoff to absorb the negative exponents of
/// all the others.
pub fn pochhammer_product(factors: &[PochFactor], cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    let mut pad = Rational64::zero();
    for f in factors {
        if !f.step.is_positive() {
            return Err(QSeriesError::StepNonpositive(f.step));
        }
        pad -= negative_mass(f.e0, f.step) * Rational64::from_integer(f.power as i64);
    }
    let work = cutoff + pad;
    let mut acc = PuiseuxSeries::one(work);
    for f in factors {
        let s = pochhammer_q_scaled(&f.coeff, f.e0, &f.base, f.step, work)?;
        for _ in 0..f.power {
            acc = acc.mul(&s)?;
        }
    }
    Ok(acc.truncate(cutoff))
}

/// Product side of the triple product, `(-a:ab)_∞ (-b:ab)_∞ (ab:ab)_∞`.
pub fn triple_product_q(a: &QMonomial, b: &QMonomial, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    let ab = a.mul(b);
    if !ab.exponent.is_positive() {
        return Err(QSeriesError::NotConvergent(ab.exponent));
    }
    let factor = |m: &QMonomial| PochFactor {
        coeff: m.coeff.clone(),
        e0: m.exponent,
        base: ab.coeff.clone(),
        step: ab.exponent,
        power: 1,
    };
    pochhammer_product(&[factor(&a.neg()), factor(&b.neg()), factor(&ab)], cutoff)
}

/// Series side `Σ_m a^{m(m+1)/2} b^{m(m-1)/2} · twist^m` by enumeration, with
/// `twist ∈ {1, -1}`.
pub fn f_series(
    a: &QMonomial,
    b: &QMonomial,
    twist: i8,
    cutoff: Rational64,
) -> Result<PuiseuxSeries, QSeriesError> {
    assert!(twist == 1 || twist == -1, "sign twist must be 1 or -1");
    let sum = a.exponent + b.exponent;
    if !sum.is_positive() {
        return Err(QSeriesError::NotConvergent(sum));
    }
    let denom = lattice_of(&[a.exponent, b.exponent])?;
    let half = Rational64::new(1, 2);
    let quad = sum * half;
    let lin = (a.exponent - b.exponent) * half;
    let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
    if let Some((lo, hi)) = quadratic_window(quad, lin, -cutoff) {
        for m in lo..=hi {
            let mr = Rational64::from_integer(m);
            let e = quad * mr * mr + lin * mr;
            if e > cutoff {
                continue;
            }
            let pa = (m * (m + 1) / 2) as usize;
            let pb = (m * (m - 1) / 2) as usize;
            let mut c = num_traits::pow(a.coeff.clone(), pa) * num_traits::pow(b.coeff.clone(), pb);
            if twist < 0 && m % 2 != 0 {
                c = -c;
            }
            if c.is_zero() {
                continue;
            }
            let num = (e * Rational64::from_integer(denom)).to_integer();
            *coeffs.entry(num).or_insert_with(BigRational::zero) += c;
        }
    }
    Ok(PuiseuxSeries::from_parts(denom, cutoff, coeffs))
}

/// Half-sum of triple products generating `Σ_m q^{k1 m² + k2 m + k3}`:
///
/// `q^{k3} · ½[(q^{eA}, q^{eB}, q^s : q^s)_∞ + (-q^{eA}, -q^{eB}, q^s : q^s)_∞]`
/// with `eA = (k1+2k2)/4`, `eB = (k1-2k2)/4`, `s = k1/2`.
pub fn quadratic_rhs(form: &QuadraticForm, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    if !form.k1.is_positive() {
        return Err(QSeriesError::FormDivergent(form.k1));
    }
    let (ea, eb, step) = half_sum_exponents(form);
    let inner = cutoff - form.k3;
    let plus = pochhammer_product(
        &[PochFactor::new(1, ea, step), PochFactor::new(1, eb, step), PochFactor::new(1, step, step)],
        inner,
    )?;
    let minus = pochhammer_product(
        &[PochFactor::new(-1, ea, step), PochFactor::new(-1, eb, step), PochFactor::new(1, step, step)],
        inner,
    )?;
    let half = BigRational::new(1.into(), 2.into());
    plus.add(&minus)?.scale(&half).shift(form.k3)
}

/// `((k1+2k2)/4, (k1-2k2)/4, k1/2)`.
pub(crate) fn half_sum_exponents(form: &QuadraticForm) -> (Rational64, Rational64, Rational64) {
    let two = Rational64::from_integer(2);
    let four = Rational64::from_integer(4);
    ((form.k1 + two * form.k2) / four, (form.k1 - two * form.k2) / four, form.k1 / two)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn b(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn form(k1: Rational64, k2: Rational64) -> QuadraticForm {
        QuadraticForm::pure(k1, k2).unwrap()
    }

    fn coeff_list(s: &PuiseuxSeries) -> Vec<(Rational64, i64)> {
        s.terms().map(|(e, c)| (e, c.to_integer().try_into().unwrap())).collect()
    }

    #[test]
    fn squares() {
        let s = theta_sum(&form(r(1, 1), r(0, 1)), r(9, 1)).unwrap();
        assert_eq!(s.to_string(), "1 + 2*q^(1) + 2*q^(4) + 2*q^(9)");
    }

    #[test]
    fn triangular_and_pentagonal_exponents() {
        let s = theta_sum(&form(r(1, 2), r(1, 2)), r(10, 1)).unwrap();
        let want: Vec<_> = [0, 1, 3, 6, 10].iter().map(|&e| (r(e, 1), 2)).collect();
        assert_eq!(coeff_list(&s), want);

        let s = theta_sum(&form(r(3, 2), r(-1, 2)), r(15, 1)).unwrap();
        let want: Vec<_> = [0, 1, 2, 5, 7, 12, 15].iter().map(|&e| (r(e, 1), 1)).collect();
        assert_eq!(coeff_list(&s), want);
    }

    #[test]
    fn nonpositive_leading_coefficient() {
        assert!(QuadraticForm::pure(r(0, 1), r(1, 1)).is_err());
        let bad = QuadraticForm {
            k1: r(-1, 1),
            k2: r(0, 1),
            k3: r(0, 1),
        };
        assert!(matches!(theta_sum(&bad, r(4, 1)), Err(QSeriesError::FormDivergent(_))));
    }

    #[test]
    fn euler_pentagonal_pattern() {
        let s = pochhammer_q(&b(1), r(1, 1), r(1, 1), r(7, 1)).unwrap();
        assert_eq!(s.to_string(), "1 - 1*q^(1) - 1*q^(2) + 1*q^(5) + 1*q^(7)");
    }

    #[test]
    fn pochhammer_zero_and_doubling() {
        assert!(pochhammer_q(&b(1), r(0, 1), r(1, 1), r(5, 1)).unwrap().is_zero());
        let s = pochhammer_q(&b(-1), r(0, 1), r(1, 1), r(3, 1)).unwrap();
        assert_eq!(s.to_string(), "2 + 2*q^(1) + 2*q^(2) + 4*q^(3)");
        assert!(matches!(
            pochhammer_q(&b(1), r(0, 1), r(0, 1), r(3, 1)),
            Err(QSeriesError::StepNonpositive(_))
        ));
    }

    #[test]
    fn pochhammer_with_negative_first_factor() {
        // (q^{-1/8} : q^{1/4})_∞ through q^1, against a hand expansion of the
        // five factors that reach that far.
        let s = pochhammer_q(&b(1), r(-1, 8), r(1, 4), r(1, 1)).unwrap();
        assert_eq!(s.cutoff(), r(1, 1));
        let mut direct = PuiseuxSeries::one(r(2, 1));
        for k in 0..6 {
            let f = PuiseuxSeries::from_terms([(r(0, 1), b(1)), (r(-1, 8) + r(k, 4), b(-1))], r(2, 1)).unwrap();
            direct = direct.mul(&f).unwrap();
        }
        assert!(s.first_mismatch(&direct, r(1, 1)).unwrap().is_none());
        assert_eq!(s.valuation(), Some(r(-1, 8)));
    }

    #[test]
    fn triple_product_squares() {
        let q = QMonomial::q(r(1, 1));
        let p = triple_product_q(&q, &q, r(16, 1)).unwrap();
        let t = theta_sum(&form(r(1, 1), r(0, 1)), r(16, 1)).unwrap();
        assert!(p.first_mismatch(&t, r(16, 1)).unwrap().is_none());
        assert_eq!(p.cutoff(), r(16, 1));
    }

    #[test]
    fn triple_product_with_negative_exponent() {
        let a = QMonomial::q(r(3, 8));
        let bm = QMonomial::q(r(-1, 8));
        let p = triple_product_q(&a, &bm, r(6, 1)).unwrap();
        let f = f_series(&a, &bm, 1, r(6, 1)).unwrap();
        assert!(p.first_mismatch(&f, r(6, 1)).unwrap().is_none());
        assert_eq!(p.valuation(), Some(r(-1, 8)));
    }

    #[test]
    fn triple_product_vanishes_at_minus_one() {
        let a = QMonomial::new(b(-1), r(0, 1));
        let p = triple_product_q(&a, &QMonomial::q(r(1, 1)), r(10, 1)).unwrap();
        assert!(p.is_zero());
        assert!(triple_product_q(&QMonomial::q(r(-1, 1)), &QMonomial::q(r(1, 1)), r(3, 1)).is_err());
    }

    #[test]
    fn f_series_twists() {
        let q = QMonomial::q(r(1, 1));
        let plus = f_series(&q, &q, 1, r(16, 1)).unwrap();
        let minus = f_series(&q, &q, -1, r(16, 1)).unwrap();
        assert_eq!(plus.to_string(), "1 + 2*q^(1) + 2*q^(4) + 2*q^(9) + 2*q^(16)");
        assert_eq!(minus.to_string(), "1 - 2*q^(1) + 2*q^(4) - 2*q^(9) + 2*q^(16)");
        let avg = plus.add(&minus).unwrap().scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(avg.to_string(), "1 + 2*q^(4) + 2*q^(16)");
    }

    #[test]
    fn quadratic_rhs_matches_enumeration() {
        for (k1, k2) in [(r(1, 1), r(0, 1)), (r(2, 1), r(-1, 1)), (r(1, 2), r(1, 2))] {
            let f = form(k1, k2);
            let lhs = theta_sum(&f, r(12, 1)).unwrap();
            let rhs = quadratic_rhs(&f, r(12, 1)).unwrap();
            assert_eq!(rhs.cutoff(), r(12, 1));
            assert!(lhs.first_mismatch(&rhs, r(12, 1)).unwrap().is_none(), "form {f}");
        }
    }

    #[test]
    fn shifted_form() {
        let f = QuadraticForm::new(r(1, 1), r(1, 1), r(1, 3)).unwrap();
        let lhs = theta_sum(&f, r(7, 1)).unwrap();
        assert_eq!(lhs.to_string(), "2*q^(1/3) + 2*q^(7/3) + 2*q^(19/3)");
        let rhs = quadratic_rhs(&f, r(7, 1)).unwrap();
        assert!(lhs.first_mismatch(&rhs, r(7, 1)).unwrap().is_none());
    }
}
