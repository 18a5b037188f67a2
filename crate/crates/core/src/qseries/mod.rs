//! Exact truncated q-series over arbitrary-precision rationals.
//!
//! Exponents live on a rational lattice `(1/D)ℤ` and may be negative (finitely
//! many terms), which is what products such as `Π (1 - q^{(2k-1)/8})` need.
//! Every constructor takes a rational `cutoff` and returns a series whose
//! coefficients are exact for all exponents `≤ cutoff`.

mod polygonal;
mod products;
pub(crate) mod series;

pub use polygonal::{
    general_product_form, pentagonal_fifth_power, polygonal_gf, product_form, sum_of_pentagonals_by_counting,
    PolygonalSpec, Side,
};
pub use products::{
    f_series, pochhammer_q, pochhammer_q_scaled, quadratic_rhs, theta_sum, triple_product_q, PochFactor,
    pochhammer_product,
};
pub use series::{Mismatch, PuiseuxSeries};

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Largest exponent lattice denominator the engine will create.
pub const MAX_LATTICE_DENOM: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    #[error("exponent lattice denominator {0} exceeds {MAX_LATTICE_DENOM}")]
    LatticeOverflow(i64),
    #[error("q-Pochhammer step must be positive, got {0}")]
    StepNonpositive(Rational64),
    #[error("quadratic form needs k1 > 0, got {0}")]
    FormDivergent(Rational64),
    #[error("theta series needs exponent(a) + exponent(b) > 0, got {0}")]
    NotConvergent(Rational64),
    #[error("polygonal numbers need r >= 3, got {0}")]
    BadPolygon(i64),
    #[error("the zero series has no inverse")]
    NotInvertible,
}

/// `c q^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMonomial {
    pub coeff: BigRational,
    pub exponent: Rational64,
}

impl QMonomial {
    pub fn new(coeff: BigRational, exponent: Rational64) -> Self {
        Self { coeff, exponent }
    }

    /// `q^e` with coefficient 1.
    pub fn q(exponent: Rational64) -> Self {
        Self::new(BigRational::from_integer(1.into()), exponent)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.coeff * &other.coeff, self.exponent + other.exponent)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.coeff.clone(), self.exponent)
    }
}

/// The quadratic `k1 m² + k2 m + k3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticForm {
    pub k1: Rational64,
    pub k2: Rational64,
    pub k3: Rational64,
}

impl QuadraticForm {
    pub fn new(k1: Rational64, k2: Rational64, k3: Rational64) -> Result<Self, QSeriesError> {
        if !k1.is_positive() {
            return Err(QSeriesError::FormDivergent(k1));
        }
        Ok(Self { k1, k2, k3 })
    }

    /// `k1 m² + k2 m` with `k3 = 0`.
    pub fn pure(k1: Rational64, k2: Rational64) -> Result<Self, QSeriesError> {
        Self::new(k1, k2, Rational64::zero())
    }

    pub fn value(&self, m: i64) -> Rational64 {
        let m = Rational64::from_integer(m);
        self.k1 * m * m + self.k2 * m + self.k3
    }
}

impl std::fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.k1, self.k2, self.k3)
    }
}
