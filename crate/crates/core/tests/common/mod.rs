// SPDX-License-Identifier: Apache-2.0

//! Seeded generators of exact forms and structures shared by the test targets.

#![allow(dead_code)]

use hkt_core::exterior::{basis, gaussian, Poly};
use hkt_core::quaternion::structure_matrix;
use hkt_core::{rat, AxisTriple, RatMat4, RationalForm, ScalarField, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational<R: Rng>(rng: &mut R) -> hkt_core::Rational {
    rat(rng.random_range(-5..=5), rng.random_range(1..=4))
}

/// Polynomial with up to three monomials of total degree at most 3 and
/// Gaussian-rational coefficients, divided by `φ^k` with `k ≤ 2`.
pub fn random_scalar<R: Rng>(rng: &mut R) -> ScalarField {
    let mut p = Poly::zero();
    for _ in 0..rng.random_range(1..=3) {
        let mut exp = [0u8; 4];
        for _ in 0..rng.random_range(0..=3) {
            exp[rng.random_range(0..4)] += 1;
        }
        let c = if rng.random_bool(0.3) {
            gaussian(small_rational(rng), small_rational(rng))
        } else {
            gaussian(small_rational(rng), rat(0, 1))
        };
        p = &p + &Poly::monomial(exp, c);
    }
    ScalarField::new(p, rng.random_range(0..=2))
}

pub fn random_form<R: Rng>(rng: &mut R, degree: usize) -> RationalForm {
    let mut terms = Vec::new();
    for m in basis::masks(degree) {
        if rng.random_bool(0.7) {
            terms.push((m, random_scalar(rng)));
        }
    }
    RationalForm::from_terms(degree, terms)
}

/// Structure `aI + bJ + cK` for a random rational point of the unit sphere.
pub fn random_structure<R: Rng>(rng: &mut R) -> RatMat4 {
    let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
    let axis = AxisTriple::stereographic(small_rational(rng), small_rational(rng));
    structure_matrix(side, &axis)
}

pub fn random_axis<R: Rng>(rng: &mut R) -> AxisTriple {
    AxisTriple::stereographic(small_rational(rng), small_rational(rng))
}

/// Constant diagonal metric with square entries, so that `√det` is rational.
pub fn random_square_diagonal<R: Rng>(rng: &mut R) -> [hkt_core::Rational; 4] {
    std::array::from_fn(|_| {
        let r = rat(rng.random_range(1..=4), rng.random_range(1..=3));
        &r * &r
    })
}
