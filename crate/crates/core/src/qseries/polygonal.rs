//! Generating functions for polygonal numbers.
//!
//! The `r`-gonal numbers `((r-2)m² + (4-r)m)/2` are the quadratic form with
//! `k1 = (r-2)/2`, `k2 = (4-r)/2`. Each generating function is available three
//! ways: by enumeration, as twice the half-sum of triple products, and as the
//! closed product written out factor by factor for `r = 3..8` (plus a general
//! `r` closed form).

use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use super::products::{pochhammer_product, quadratic_rhs, theta_sum, PochFactor};
use super::{PuiseuxSeries, QSeriesError, QuadraticForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolygonalSpec {
    r: i64,
}

impl PolygonalSpec {
    pub fn new(r: i64) -> Result<Self, QSeriesError> {
        if r < 3 {
            return Err(QSeriesError::BadPolygon(r));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn form(&self) -> QuadraticForm {
        QuadraticForm {
            k1: Rational64::new(self.r - 2, 2),
            k2: Rational64::new(4 - self.r, 2),
            k3: Rational64::zero(),
        }
    }
}

/// Which expression of the generating function to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `2 Σ_{m∈ℤ} q^{((r-2)m² + (4-r)m)/2}` by enumeration.
    Lhs,
    /// Twice the half-sum of triple products for the mapped quadratic form.
    HalfSum,
    /// The closed product, transcribed factor by factor.
    ClosedProduct,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

/// A sum of products of Pochhammer factors.
fn sum_of_products(products: &[Vec<PochFactor>], cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    let mut acc = PuiseuxSeries::zero(cutoff);
    for p in products {
        acc = acc.add(&pochhammer_product(p, cutoff)?)?;
    }
    Ok(acc)
}

/// `outer · [Π(1 - q^{e1+k·s})(1 - q^{e2+k·s}) + Π(1 + q^{e1+k·s})(1 + q^{e2+k·s})]`
fn bracketed(outer: PochFactor, e1: Rational64, e2: Rational64, step: Rational64) -> Vec<Vec<PochFactor>> {
    vec![
        vec![outer.clone(), PochFactor::new(1, e1, step), PochFactor::new(1, e2, step)],
        vec![outer, PochFactor::new(-1, e1, step), PochFactor::new(-1, e2, step)],
    ]
}

/// The closed product for `r = 3..8`, each transcribed literally; other `r`
/// fall back to [`general_product_form`].
pub fn product_form(spec: PolygonalSpec, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    let products = match spec.r {
        // Π(1-q^{(k+1)/4}) [Π(1-q^{(2k+3)/8})(1-q^{(2k-1)/8}) + Π(1+…)(1+…)]
        3 => bracketed(PochFactor::new(1, r(1, 4), r(1, 4)), r(3, 8), r(-1, 8), r(1, 4)),
        // Π(1-q^{(k+1)/2}) [Π(1-q^{(2k+1)/4})² + Π(1+q^{(2k+1)/4})²]
        4 => vec![
            vec![PochFactor::new(1, r(1, 2), r(1, 2)), PochFactor::new(1, r(1, 4), r(1, 2)).pow(2)],
            vec![PochFactor::new(1, r(1, 2), r(1, 2)), PochFactor::new(-1, r(1, 4), r(1, 2)).pow(2)],
        ],
        // Π(1-q^{3(k+1)/4}) [Π(1-q^{(6k+1)/8})(1-q^{(6k+5)/8}) + …]
        5 => bracketed(PochFactor::new(1, r(3, 4), r(3, 4)), r(1, 8), r(5, 8), r(3, 4)),
        // Π(1-q^{2k+2})(1+q^k)
        6 => vec![vec![PochFactor::new(1, r(2, 1), r(2, 1)), PochFactor::new(-1, r(0, 1), r(1, 1))]],
        // Π(1-q^{5(k+1)/4}) [Π(1-q^{(10k-1)/8})(1-q^{(10k+11)/8}) + …]
        7 => bracketed(PochFactor::new(1, r(5, 4), r(5, 4)), r(-1, 8), r(11, 8), r(5, 4)),
        // Π(1-q^{3(k+1)/2}) [Π(1-q^{(6k-1)/4})(1-q^{(6k+7)/4}) + …]
        8 => bracketed(PochFactor::new(1, r(3, 2), r(3, 2)), r(-1, 4), r(7, 4), r(3, 2)),
        _ => return general_product_form(spec, cutoff),
    };
    sum_of_products(&products, cutoff)
}

/// `(q^s, q^{(6-r)/8}, q^{(3r-10)/8} : q^s)_∞ + (q^s, -q^{(6-r)/8}, -q^{(3r-10)/8} : q^s)_∞`
/// with `s = (r-2)/4`.
pub fn general_product_form(spec: PolygonalSpec, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    let s = r(spec.r - 2, 4);
    let products = bracketed(PochFactor::new(1, s, s), r(6 - spec.r, 8), r(3 * spec.r - 10, 8), s);
    sum_of_products(&products, cutoff)
}

pub fn polygonal_gf(spec: PolygonalSpec, side: Side, cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    match side {
        Side::Lhs => Ok(theta_sum(&spec.form(), cutoff)?.scale(&two())),
        Side::HalfSum => Ok(quadratic_rhs(&spec.form(), cutoff)?.scale(&two())),
        Side::ClosedProduct => product_form(spec, cutoff),
    }
}

/// `(Σ_{m∈ℤ} q^{m(3m-1)/2})^5`.
pub fn pentagonal_fifth_power(cutoff: Rational64) -> Result<PuiseuxSeries, QSeriesError> {
    let pent = QuadraticForm {
        k1: r(3, 2),
        k2: r(-1, 2),
        k3: Rational64::zero(),
    };
    theta_sum(&pent, cutoff)?.pow(5)
}

/// Number of ordered 5-tuples `(m1..m5) ∈ ℤ⁵` with `Σ m_i(3m_i-1)/2 = n`, for
/// `n = 0..=n_max`, by nested enumeration.
pub fn sum_of_pentagonals_by_counting(n_max: u64) -> Vec<u64> {
    let mut parts = Vec::new();
    for m in -(n_max as i64) - 1..=(n_max as i64) + 1 {
        let p = m * (3 * m - 1) / 2;
        if p >= 0 && p as u64 <= n_max {
            parts.push(p as u64);
        }
    }
    let mut counts = vec![0u64; n_max as usize + 1];
    fn go(parts: &[u64], left: usize, total: u64, n_max: u64, counts: &mut [u64]) {
        if left == 0 {
            counts[total as usize] += 1;
            return;
        }
        for &p in parts {
            if total + p <= n_max {
                go(parts, left - 1, total + p, n_max, counts);
            }
        }
    }
    go(&parts, 5, 0, n_max, &mut counts);
    counts
}
