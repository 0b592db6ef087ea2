// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{real, Poly};
use super::Gaussian;
use crate::Rational;

/// A function `P / φᵏ` on `ℝ⁴ ∖ {0}` with `φ = x₀² + x₁² + x₂² + x₃²`.
///
/// Kept canonical: `φ ∤ P` whenever `k > 0`, and zero is stored as `0 / φ⁰`,
/// so structural equality decides equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarField {
    num: Poly,
    k: u32,
}

impl ScalarField {
    pub fn new(num: Poly, k: u32) -> Self {
        let mut s = Self { num, k };
        s.normalize();
        s
    }

    pub fn zero() -> Self {
        Self { num: Poly::zero(), k: 0 }
    }

    pub fn one() -> Self {
        Self::constant(Gaussian::one())
    }

    pub fn constant(c: Gaussian) -> Self {
        Self::new(Poly::constant(c), 0)
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(real(c))
    }

    pub fn poly(p: Poly) -> Self {
        Self::new(p, 0)
    }

    pub fn var(i: usize) -> Self {
        Self::poly(Poly::var(i))
    }

    pub fn phi() -> Self {
        Self::poly(Poly::phi())
    }

    /// `φ^(-k)`.
    pub fn phi_inverse_power(k: u32) -> Self {
        Self::new(Poly::one(), k)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.k
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_phi() {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real()
    }

    pub fn as_constant(&self) -> Option<Gaussian> {
        if self.k == 0 {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn lift(&self, k: u32) -> Poly {
        debug_assert!(k >= self.k);
        &self.num * &Poly::phi().pow(k - self.k)
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        Self::new(self.num.scale(c), self.k)
    }

    pub fn scale_real(&self, c: &Rational) -> Self {
        self.scale(&real(c.clone()))
    }

    /// `∂/∂xᵢ (P/φᵏ) = (∂ᵢP·φ − k·P·∂ᵢφ) / φᵏ⁺¹`.
    pub fn partial(&self, i: usize) -> Self {
        if self.k == 0 {
            return Self::poly(self.num.partial(i));
        }
        let phi = Poly::phi();
        let dphi = phi.partial(i);
        let kk = real(Rational::from_integer(self.k.into()));
        let top = &(&self.num.partial(i) * &phi) - &(&self.num * &dphi).scale(&kk);
        Self::new(top, self.k + 1)
    }

    /// Pullback along `x ↦ q·x`.
    pub fn pullback_scale(&self, q: &Rational) -> Self {
        let den = num_traits::pow(q.clone(), 2 * self.k as usize);
        Self::new(self.num.pullback_scale(q).scale_real(&(Rational::one() / den)), self.k)
    }

    pub fn conj(&self) -> Self {
        Self { num: self.num.conj(), k: self.k }
    }

    /// Multiplicative inverse, available only for `c / φᵏ` with constant `c ≠ 0`.
    pub fn inverse(&self) -> Option<Self> {
        let c = self.num.as_constant()?;
        if c.is_zero() {
            return None;
        }
        Some(Self::new(Poly::phi().pow(self.k).scale(&(Gaussian::one() / c)), 0))
    }

    /// Evaluate at a rational point with `φ ≠ 0`.
    pub fn eval(&self, x: &[Rational; 4]) -> Gaussian {
        let phi: Rational = x.iter().map(|v| v * v).sum();
        self.num.eval(x) / real(num_traits::pow(phi, self.k as usize))
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        if self.k == rhs.k {
            return ScalarField::new(&self.num + &rhs.num, self.k);
        }
        let k = self.k.max(rhs.k);
        ScalarField::new(&self.lift(k) + &rhs.lift(k), k)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self + &(-rhs)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField { num: -&self.num, k: self.k }
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() || rhs.is_zero() {
            return ScalarField::zero();
        }
        ScalarField::new(&self.num * &rhs.num, self.k + rhs.k)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({}) / phi", self.num),
            k => write!(f, "({}) / phi^{k}", self.num),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn canonical_form_cancels_phi() {
        let s = ScalarField::new(&Poly::phi() * &Poly::var(2), 1);
        assert_eq!(s, ScalarField::var(2));
        assert_eq!(s.denominator_exponent(), 0);
        let t = ScalarField::new(Poly::phi(), 3);
        assert_eq!(t, ScalarField::phi_inverse_power(2));
    }

    #[test]
    fn derivative_of_inverse_phi() {
        // ∂₀(1/φ) = −2x₀/φ²
        let d = ScalarField::phi_inverse_power(1).partial(0);
        assert_eq!(d, ScalarField::new(Poly::var(0).scale_real(&rat(-2, 1)), 2));
    }

    #[test]
    fn sum_over_mixed_denominators() {
        let a = ScalarField::phi_inverse_power(1);
        let b = ScalarField::phi();
        let s = &(&a * &b) - &ScalarField::one();
        assert!(s.is_zero());
    }

    #[test]
    fn degree_zero_homogeneous_is_scale_invariant() {
        let f = ScalarField::new(&Poly::var(0) * &Poly::var(3), 1);
        assert_eq!(f.pullback_scale(&rat(7, 3)), f);
    }
}
