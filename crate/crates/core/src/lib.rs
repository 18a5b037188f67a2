//! Ramanujan theta functions with characteristics, eigenvectors of the unitary
//! DFT built from theta series, and an exact Puiseux q-series engine.
//!
//! The crate is organised in four layers:
//!
//! - [`theta`]: double-precision evaluation of `f(a, b)`, the characteristic
//!   generalisation `f_(α,β,c)(a, b, x)`, the Jacobi theta series and
//!   q-Pochhammer products.
//! - [`dft`]: the DFT matrix, its eigenvalue multiplicities and the two
//!   eigenvector constructions (periodised series and theta characteristics).
//! - [`qseries`]: exact truncated series in rational powers of `q` with
//!   arbitrary-precision rational coefficients.
//! - [`identities`]: a catalogue of theta-function and generating-function
//!   identities with numeric and exact verifiers.

pub mod dft;
pub mod identities;
pub mod qseries;
pub mod theta;

pub use dft::{DftError, DftMatrix, EigClass, Multiplicities};
pub use identities::{IdentityDescriptor, Mode, RunConfig, Status, VerificationReport};
pub use qseries::{PuiseuxSeries, QMonomial, QSeriesError, QuadraticForm};
pub use theta::{Characteristics, LogThetaArgs, ThetaArgs, ThetaError, TruncationPolicy};

pub use num_complex::Complex64;
pub use num_rational::{BigRational, Rational64};
