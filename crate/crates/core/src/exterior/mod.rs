// SPDX-License-Identifier: Apache-2.0

//! Exact exterior calculus on `ℝ⁴ ∖ {0}`.
//!
//! Coefficients live in the ring of Gaussian-rational polynomials localized at
//! `φ = |x|²`. That ring is closed under `d` and under every operation used on
//! the Hopf chart, so each identity becomes an exact zero test.

pub mod basis;
mod form;
mod ops;
mod poly;
mod scalar;

pub use form::RationalForm;
pub use ops::{
    del, del_from_twisted, euclidean_inner, hodge_star, lambda_contract, linear_action, pq_project, structure_action,
    twisted_d, ConstantMetric,
};
pub use poly::{gaussian, imag_unit, real, Monomial, Poly};
pub use scalar::ScalarField;

/// Gaussian rational `a + b√−1`.
pub type Gaussian = num_complex::Complex<crate::Rational>;

/// `d` as a free function.
pub fn exterior_d(alpha: &RationalForm) -> crate::Result<RationalForm> {
    alpha.exterior_d()
}

/// `α ∧ β` as a free function.
pub fn wedge(alpha: &RationalForm, beta: &RationalForm) -> crate::Result<RationalForm> {
    alpha.wedge(beta)
}

/// Pullback along `x ↦ q·x` as a free function.
pub fn scale_pullback(alpha: &RationalForm, q: &crate::Rational) -> crate::Result<RationalForm> {
    alpha.scale_pullback(q)
}
