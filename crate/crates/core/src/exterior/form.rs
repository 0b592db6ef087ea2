// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::basis::{self, DIM};
use super::poly::real;
use super::{Gaussian, ScalarField};
use crate::{Error, Rational, Result};

/// Homogeneous differential form of degree `m` on `ℝ⁴ ∖ {0}` with
/// [`ScalarField`] coefficients on the sorted basis `dx_{i₁} ∧ … ∧ dx_{iₘ}`.
///
/// Zero coefficients are not stored; equality is exact equality of forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalForm {
    degree: usize,
    coeffs: BTreeMap<u8, ScalarField>,
}

impl RationalForm {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "form degree {degree} exceeds {DIM}");
        Self { degree, coeffs: BTreeMap::new() }
    }

    pub fn function(f: ScalarField) -> Self {
        let mut out = Self::zero(0);
        out.add_term(0, f);
        out
    }

    /// `f · dx_{idx}`; `idx` need not be sorted (the sign is applied) but must
    /// not repeat.
    pub fn monomial(idx: &[usize], f: ScalarField) -> Self {
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), idx.len(), "repeated index in {idx:?}");
        let sign = basis::perm_sign(&idx.iter().map(|i| sorted.iter().position(|s| s == i).unwrap_or(0)).collect::<Vec<_>>());
        let f = if sign < 0 { -&f } else { f };
        let mut out = Self::zero(idx.len());
        out.add_term(basis::mask_of(&sorted), f);
        out
    }

    /// Basis form `dx_{idx}` with unit coefficient.
    pub fn basis(idx: &[usize]) -> Self {
        Self::monomial(idx, ScalarField::one())
    }

    pub fn dx(i: usize) -> Self {
        Self::basis(&[i])
    }

    /// `dx₀ ∧ dx₁ ∧ dx₂ ∧ dx₃`.
    pub fn volume() -> Self {
        Self::basis(&[0, 1, 2, 3])
    }

    /// Build from `(mask, coefficient)` pairs of a fixed degree.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (u8, ScalarField)>) -> Self {
        let mut out = Self::zero(degree);
        for (m, f) in terms {
            assert_eq!(basis::degree(m), degree);
            out.add_term(m, f);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, mask: u8) -> ScalarField {
        self.coeffs.get(&mask).cloned().unwrap_or_else(ScalarField::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, &ScalarField)> {
        self.coeffs.iter().map(|(m, f)| (*m, f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(ScalarField::is_real)
    }

    pub(crate) fn add_term(&mut self, mask: u8, f: ScalarField) {
        if f.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&mask) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.coeffs.insert(mask, sum);
        }
    }

    /// Multiply by a function.
    pub fn scale(&self, f: &ScalarField) -> Self {
        Self::from_terms(self.degree, self.coeffs.iter().map(|(m, c)| (*m, c * f)))
    }

    pub fn scale_gaussian(&self, c: &Gaussian) -> Self {
        Self::from_terms(self.degree, self.coeffs.iter().map(|(m, f)| (*m, f.scale(c))))
    }

    pub fn scale_real(&self, c: &Rational) -> Self {
        self.scale_gaussian(&real(c.clone()))
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.degree, self.coeffs.iter().map(|(m, f)| (*m, f.conj())))
    }

    fn check_same_degree(&self, other: &Self) {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
    }

    /// Exterior product. Fails when `deg α + deg β > 4`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let degree = self.degree + other.degree;
        if degree > DIM {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let mut out = Self::zero(degree);
        for (ma, fa) in &self.coeffs {
            for (mb, fb) in &other.coeffs {
                if let Some(sign) = basis::wedge_sign(*ma, *mb) {
                    let prod = fa * fb;
                    out.add_term(ma | mb, if sign < 0 { -&prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative; defined for degree ≤ 3.
    pub fn exterior_d(&self) -> Result<Self> {
        if self.degree >= DIM {
            return Err(Error::WrongDegree { expected: DIM - 1, found: self.degree });
        }
        let mut out = Self::zero(self.degree + 1);
        for (m, f) in &self.coeffs {
            for j in 0..DIM {
                if m & (1 << j) != 0 {
                    continue;
                }
                let df = f.partial(j);
                if df.is_zero() {
                    continue;
                }
                let sign = basis::wedge_sign(1 << j, *m).unwrap_or(0);
                out.add_term(m | (1 << j), if sign < 0 { -&df } else { df });
            }
        }
        Ok(out)
    }

    /// Pullback along `x ↦ q·x`.
    pub fn scale_pullback(&self, q: &Rational) -> Result<Self> {
        if num_traits::Zero::is_zero(q) {
            return Err(Error::ZeroScale);
        }
        let factor = num_traits::pow(q.clone(), self.degree);
        Ok(Self::from_terms(
            self.degree,
            self.coeffs.iter().map(|(m, f)| (*m, f.pullback_scale(q).scale_real(&factor))),
        ))
    }

    /// The coefficient of the top form, for degree 4.
    pub fn top_coefficient(&self) -> Result<ScalarField> {
        if self.degree != DIM {
            return Err(Error::WrongDegree { expected: DIM, found: self.degree });
        }
        Ok(self.coeff(0b1111))
    }

    /// Evaluate all coefficients at a rational point.
    pub fn eval(&self, x: &[Rational; 4]) -> BTreeMap<u8, Gaussian> {
        self.coeffs.iter().map(|(m, f)| (*m, f.eval(x))).collect()
    }
}

impl Add for &RationalForm {
    type Output = RationalForm;
    fn add(self, rhs: &RationalForm) -> RationalForm {
        self.check_same_degree(rhs);
        let mut out = self.clone();
        for (m, f) in &rhs.coeffs {
            out.add_term(*m, f.clone());
        }
        out
    }
}

impl Sub for &RationalForm {
    type Output = RationalForm;
    fn sub(self, rhs: &RationalForm) -> RationalForm {
        self + &(-rhs)
    }
}

impl Neg for &RationalForm {
    type Output = RationalForm;
    fn neg(self) -> RationalForm {
        RationalForm::from_terms(self.degree, self.coeffs.iter().map(|(m, f)| (*m, -f)))
    }
}

impl fmt::Display for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 [degree {}]", self.degree);
        }
        let mut masks: Vec<&u8> = self.coeffs.keys().collect();
        masks.sort_by_key(|m| basis::indices(**m));
        let parts: Vec<String> = masks
            .into_iter()
            .map(|m| {
                let name: Vec<String> = basis::indices(*m).iter().map(|i| format!("dx{i}")).collect();
                if name.is_empty() {
                    format!("{}", self.coeffs[m])
                } else {
                    format!("[{}] {}", self.coeffs[m], name.join("^"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
