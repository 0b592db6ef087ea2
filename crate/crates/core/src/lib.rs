// SPDX-License-Identifier: Apache-2.0

//! Verification toolkit for hypercomplex and HKT geometry on 4-manifolds.
//!
//! The crate has two halves:
//!
//! * an exact half ([`quaternion`], [`exterior`], [`hermitian`], [`hopf`]) that
//!   works with Gaussian-rational differential forms on the chart `ℍ ∖ {0}` and
//!   certifies identities by exact zero tests;
//! * a numerical half ([`torus`], [`bundle`]) that builds su(n) gauge fields on
//!   a periodic spectral grid, computes horizontal slices of the instanton
//!   deformation complex and checks the induced quaternionic structures.
//!
//! [`checks`] assembles both halves into [`report::VerificationReport`]s.

pub mod bundle;
pub mod checks;
pub mod conventions;
pub mod error;
pub mod exterior;
pub mod hermitian;
pub mod hopf;
pub mod quaternion;
pub mod report;
pub mod torus;

pub use error::{Error, Result};
pub use exterior::{ConstantMetric, Gaussian, Poly, RationalForm, ScalarField};
pub use hermitian::{HKTReport, Metric, TorsionReport};
pub use hopf::{HopfGeometry, HopfSpec};
pub use quaternion::{AxisTriple, HypercomplexFrame, Quaternion, RatMat4, Side};
pub use report::{CheckStatus, Defect, VerificationReport};
pub use torus::{Connection, LatticeField, TangentBasis, TorusSpec};

/// Exact rational scalar used throughout the symbolic half.
pub type Rational = num_rational::BigRational;

/// Build a rational from a numerator and denominator.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
