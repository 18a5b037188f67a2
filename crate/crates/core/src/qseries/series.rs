use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{QSeriesError, MAX_LATTICE_DENOM};

/// A truncated series `Σ c_e q^e` with exponents in `(1/D)ℤ`.
///
/// The lattice `D` describes where the represented object lives: every
/// exponent off the lattice has coefficient zero. Coefficients are known
/// exactly for all exponents `e ≤ cutoff`; nothing is claimed beyond that.
/// Only finitely many exponents may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    denom: i64,
    cutoff: Rational64,
    /// Exponent numerators over `denom`; no stored zeros, all `≤ cutoff`.
    coeffs: BTreeMap<i64, BigRational>,
}

/// The first exponent at which two series disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: Rational64,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

fn lcm_checked(a: i64, b: i64) -> Result<i64, QSeriesError> {
    let l = a.lcm(&b);
    if l > MAX_LATTICE_DENOM {
        Err(QSeriesError::LatticeOverflow(l))
    } else {
        Ok(l)
    }
}

/// Least common lattice of a set of rational exponents.
pub(crate) fn lattice_of(exponents: &[Rational64]) -> Result<i64, QSeriesError> {
    exponents.iter().try_fold(1i64, |d, e| lcm_checked(d, *e.denom()))
}

/// `floor(r * d)`.
fn floor_on(r: Rational64, d: i64) -> i64 {
    (r * Rational64::from_integer(d)).floor().to_integer()
}

/// `e * d`, which must be integral.
fn num_on(e: Rational64, d: i64) -> i64 {
    let v = e * Rational64::from_integer(d);
    debug_assert!(v.is_integer(), "exponent {e} is not on lattice 1/{d}");
    v.to_integer()
}

impl PuiseuxSeries {
    pub fn zero(cutoff: Rational64) -> Self {
        Self {
            denom: 1,
            cutoff,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(cutoff: Rational64) -> Self {
        Self::monomial(BigRational::one(), Rational64::zero(), cutoff)
    }

    /// `c q^e`, or the zero series if `e > cutoff`.
    pub fn monomial(c: BigRational, e: Rational64, cutoff: Rational64) -> Self {
        let denom = *e.denom();
        let mut coeffs = BTreeMap::new();
        if e <= cutoff && !c.is_zero() {
            coeffs.insert(num_on(e, denom), c);
        }
        Self { denom, cutoff, coeffs }
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(terms: I, cutoff: Rational64) -> Result<Self, QSeriesError>
    where
        I: IntoIterator<Item = (Rational64, BigRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let exps: Vec<Rational64> = terms.iter().map(|t| t.0).collect();
        let denom = lattice_of(&exps)?;
        let mut out = Self {
            denom,
            cutoff,
            coeffs: BTreeMap::new(),
        };
        for (e, c) in terms {
            if e <= cutoff {
                out.accumulate(num_on(e, denom), c);
            }
        }
        Ok(out)
    }

    pub(crate) fn from_parts(denom: i64, cutoff: Rational64, coeffs: BTreeMap<i64, BigRational>) -> Self {
        let mut s = Self {
            denom,
            cutoff,
            coeffs,
        };
        s.normalize();
        s
    }

    fn accumulate(&mut self, num: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(num).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&num);
        }
    }

    fn normalize(&mut self) {
        let limit = self.cutoff_num();
        self.coeffs.retain(|&e, c| e <= limit && !c.is_zero());
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn cutoff(&self) -> Rational64 {
        self.cutoff
    }

    /// Largest lattice numerator covered by the cutoff, `floor(cutoff * D)`.
    pub fn cutoff_num(&self) -> i64 {
        floor_on(self.cutoff, self.denom)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational64> {
        self.coeffs.keys().next().map(|&e| Rational64::new(e, self.denom))
    }

    pub fn coeff(&self, e: Rational64) -> BigRational {
        let scaled = e * Rational64::from_integer(self.denom);
        if !scaled.is_integer() {
            return BigRational::zero();
        }
        self.coeffs.get(&scaled.to_integer()).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &BigRational)> + '_ {
        let d = self.denom;
        self.coeffs.iter().map(move |(&e, c)| (Rational64::new(e, d), c))
    }

    /// Same object on the finer lattice `1/denom`, which must be a multiple of
    /// the current one.
    pub fn rebase(&self, denom: i64) -> Self {
        assert!(denom % self.denom == 0, "lattice {denom} does not refine {}", self.denom);
        let f = denom / self.denom;
        Self {
            denom,
            cutoff: self.cutoff,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e * f, c.clone())).collect(),
        }
    }

    fn common(&self, other: &Self) -> Result<(Self, Self), QSeriesError> {
        let d = lcm_checked(self.denom, other.denom)?;
        Ok((self.rebase(d), other.rebase(d)))
    }

    /// Drops everything above `cutoff` (a no-op if the cutoff is not lower).
    pub fn truncate(&self, cutoff: Rational64) -> Self {
        let mut out = self.clone();
        out.cutoff = out.cutoff.min(cutoff);
        out.normalize();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, QSeriesError> {
        let (mut a, b) = self.common(other)?;
        a.cutoff = a.cutoff.min(b.cutoff);
        for (e, c) in b.coeffs {
            a.accumulate(e, c);
        }
        a.normalize();
        Ok(a)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QSeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.cutoff);
        }
        Self {
            denom: self.denom,
            cutoff: self.cutoff,
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiplies by `q^e`; the cutoff moves with the series.
    pub fn shift(&self, e: Rational64) -> Result<Self, QSeriesError> {
        let d = lcm_checked(self.denom, *e.denom())?;
        let base = self.rebase(d);
        let off = num_on(e, d);
        Ok(Self {
            denom: d,
            cutoff: self.cutoff + e,
            coeffs: base.coeffs.into_iter().map(|(k, c)| (k + off, c)).collect(),
        })
    }

    /// Lower bound on the valuation of the represented object: exact when
    /// nonzero, otherwise the cutoff (the object is `O(q^{>cutoff})`).
    fn valuation_bound(&self) -> Rational64 {
        self.valuation().unwrap_or(self.cutoff)
    }

    /// Product, exact through `min(cutoff₁ + val₂, cutoff₂ + val₁)`.
    pub fn mul(&self, other: &Self) -> Result<Self, QSeriesError> {
        let (a, b) = self.common(other)?;
        let cutoff = (a.cutoff + b.valuation_bound()).min(b.cutoff + a.valuation_bound());
        let d = a.denom;
        if a.is_zero() || b.is_zero() {
            return Ok(Self {
                denom: d,
                cutoff,
                coeffs: BTreeMap::new(),
            });
        }
        let limit = floor_on(cutoff, d);
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (&e1, c1) in &a.coeffs {
            for (&e2, c2) in &b.coeffs {
                let e = e1 + e2;
                if e > limit {
                    break;
                }
                let prod = c1 * c2;
                match acc.get_mut(&e) {
                    Some(slot) => *slot += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        Ok(Self::from_parts(d, cutoff, acc))
    }

    /// In-place multiplication by the binomial `1 - c q^{e}` where `e = num/denom`
    /// is on this series' lattice. A negative exponent lowers the cutoff by `|e|`.
    pub(crate) fn mul_binomial(&mut self, c: &BigRational, num: i64) {
        if c.is_zero() {
            return;
        }
        if num < 0 {
            self.cutoff += Rational64::new(num, self.denom);
        }
        if num == 0 {
            let f = BigRational::one() - c;
            if f.is_zero() {
                self.coeffs.clear();
            } else {
                for v in self.coeffs.values_mut() {
                    *v *= &f;
                }
            }
            return;
        }
        let limit = self.cutoff_num();
        let shifted: Vec<(i64, BigRational)> = self
            .coeffs
            .iter()
            .map(|(&e, v)| (e + num, -(v * c)))
            .filter(|(e, _)| *e <= limit)
            .collect();
        for (e, v) in shifted {
            self.accumulate(e, v);
        }
        self.normalize();
    }

    /// Multiplicative inverse. Requires a nonzero series; the result is exact
    /// through `cutoff - 2·val`.
    pub fn inverse(&self) -> Result<Self, QSeriesError> {
        let v = self.valuation().ok_or(QSeriesError::NotInvertible)?;
        let lead = self.coeff(v);
        let inv_lead = lead.recip();
        // self = lead q^v (1 + t) with val(t) > 0.
        let unit = self.shift(-v)?.scale(&inv_lead);
        let t = unit.sub(&Self::one(unit.cutoff))?;
        let mut sum = Self::one(unit.cutoff);
        if let Some(vt) = t.valuation() {
            let neg_t = t.neg();
            let steps = (unit.cutoff / vt).floor().to_integer().max(0);
            let mut power = Self::one(unit.cutoff);
            for _ in 0..steps {
                power = power.mul(&neg_t)?.truncate(unit.cutoff);
                sum = sum.add(&power)?;
            }
        }
        Ok(sum.truncate(unit.cutoff).shift(-v)?.scale(&inv_lead))
    }

    /// `self^n`; negative `n` goes through [`Self::inverse`].
    pub fn pow(&self, n: i64) -> Result<Self, QSeriesError> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut result = Self::one(self.cutoff);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// First disagreement with `other` at exponents `≤ upto` (further capped
    /// by both cutoffs).
    pub fn first_mismatch(&self, other: &Self, upto: Rational64) -> Result<Option<Mismatch>, QSeriesError> {
        let (a, b) = self.common(other)?;
        let limit = floor_on(upto.min(a.cutoff).min(b.cutoff), a.denom);
        let keys: std::collections::BTreeSet<i64> =
            a.coeffs.keys().chain(b.coeffs.keys()).copied().filter(|&e| e <= limit).collect();
        let zero = BigRational::zero();
        for e in keys {
            let (x, y) = (a.coeffs.get(&e).unwrap_or(&zero), b.coeffs.get(&e).unwrap_or(&zero));
            if x != y {
                return Ok(Some(Mismatch {
                    exponent: Rational64::new(e, a.denom),
                    lhs: x.clone(),
                    rhs: y.clone(),
                }));
            }
        }
        Ok(None)
    }

    /// Numeric value of the stored terms at a real `q > 0`.
    pub fn eval_f64(&self, q: f64) -> f64 {
        self.terms()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * q.powf(e.to_f64().unwrap_or(f64::NAN)))
            .sum()
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<(Rational64, BigInt)>> {
        self.terms().map(|(e, c)| c.is_integer().then(|| (e, c.to_integer()))).collect()
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn fmt_exponent(e: Rational64) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Canonical text form: increasing exponents, `c*q^(p/D)` terms, constant
/// term printed bare, e.g. `1 - 1*q^(1/8) + 2*q^(1/4)`.
impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mag = fmt_rational(&c.abs());
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e.is_zero() {
                f.write_str(&mag)?;
            } else {
                write!(f, "{mag}*q^({})", fmt_exponent(e))?;
            }
        }
        Ok(())
    }
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

    fn series(terms: &[(i64, i64, i64)], cutoff: Rational64) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(terms.iter().map(|&(c, n, d)| (r(n, d), b(c))), cutoff).unwrap()
    }

    #[test]
    fn monomials() {
        let one = PuiseuxSeries::monomial(b(1), r(0, 1), r(10, 1));
        assert_eq!(one.to_string(), "1");
        let m = PuiseuxSeries::monomial(b(-1), r(-1, 8), r(10, 1));
        assert_eq!(m.denom(), 8);
        assert_eq!(m.valuation(), Some(r(-1, 8)));
        assert_eq!(m.to_string(), "-1*q^(-1/8)");
        let gone = PuiseuxSeries::monomial(BigRational::new(3.into(), 2.into()), r(5, 4), r(1, 1));
        assert!(gone.is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let c = r(10, 1);
        let p = series(&[(1, 0, 1), (1, 1, 2)], c);
        let m = series(&[(1, 0, 1), (-1, 1, 2)], c);
        assert_eq!(p.mul(&m).unwrap().to_string(), "1 - 1*q^(1)");
    }

    #[test]
    fn square_of_binomial() {
        let s = series(&[(1, 0, 1), (1, 1, 1)], r(10, 1));
        assert_eq!(s.pow(2).unwrap().to_string(), "1 + 2*q^(1) + 1*q^(2)");
        assert_eq!(s.pow(0).unwrap().to_string(), "1");
    }

    #[test]
    fn negative_exponents_lower_the_cutoff() {
        let s = series(&[(1, -1, 8), (1, 0, 1)], r(2, 1));
        let t = series(&[(1, 0, 1), (3, 1, 1)], r(2, 1));
        let p = s.mul(&t).unwrap();
        assert_eq!(p.cutoff(), r(15, 8));
        assert_eq!(p.to_string(), "1*q^(-1/8) + 1 + 3*q^(7/8) + 3*q^(1)");
    }

    #[test]
    fn mixed_lattices_add() {
        let s = series(&[(1, 1, 4)], r(3, 1));
        let t = series(&[(2, 1, 3)], r(2, 1));
        let u = s.add(&t).unwrap();
        assert_eq!(u.denom(), 12);
        assert_eq!(u.cutoff(), r(2, 1));
        assert_eq!(u.to_string(), "1*q^(1/4) + 2*q^(1/3)");
        assert!(u.sub(&u).unwrap().is_zero());
    }

    #[test]
    fn lattice_overflow() {
        let s = series(&[(1, 1, 999_983)], r(3, 1));
        let t = series(&[(1, 1, 999_979)], r(3, 1));
        assert!(matches!(s.add(&t), Err(QSeriesError::LatticeOverflow(_))));
    }

    #[test]
    fn inverse_of_euler_product_counts_partitions() {
        // (q;q)_∞ through q^10, inverted: partition numbers.
        let c = r(10, 1);
        let mut e = PuiseuxSeries::one(c);
        for k in 1..=10 {
            e.mul_binomial(&b(1), k);
        }
        let p = e.inverse().unwrap();
        let want = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(p.coeff(r(n as i64, 1)), b(*w), "p({n})");
        }
        assert_eq!(e.pow(-1).unwrap(), p);
    }

    #[test]
    fn inverse_tracks_valuation() {
        let s = series(&[(2, -1, 2), (1, 0, 1)], r(3, 1));
        let inv = s.inverse().unwrap();
        assert_eq!(inv.cutoff(), r(4, 1));
        let one = s.mul(&inv).unwrap();
        assert!(one.first_mismatch(&PuiseuxSeries::one(r(3, 1)), r(3, 1)).unwrap().is_none());
        assert!(matches!(PuiseuxSeries::zero(r(1, 1)).inverse(), Err(QSeriesError::NotInvertible)));
    }

    #[test]
    fn binomial_with_zero_exponent() {
        let mut s = series(&[(1, 0, 1), (1, 1, 1)], r(4, 1));
        s.mul_binomial(&b(-1), 0);
        assert_eq!(s.to_string(), "2 + 2*q^(1)");
        s.mul_binomial(&b(1), 0);
        assert!(s.is_zero());
    }

    #[test]
    fn mismatch_reports_first_exponent() {
        let s = series(&[(1, 0, 1), (2, 1, 2), (5, 2, 1)], r(3, 1));
        let t = series(&[(1, 0, 1), (3, 1, 2), (4, 2, 1)], r(3, 1));
        let m = s.first_mismatch(&t, r(3, 1)).unwrap().unwrap();
        assert_eq!(m.exponent, r(1, 2));
        assert_eq!((m.lhs, m.rhs), (b(2), b(3)));
        assert!(s.first_mismatch(&t, r(1, 4)).unwrap().is_none());
    }
}
