// SPDX-License-Identifier: Apache-2.0

//! Operations coupling forms to constant linear data: structure actions, the
//! twisted differential, type projections, Hodge star and Λ-contraction.

use num_traits::{One, Signed, Zero};

use super::basis::{self, DIM};
use super::poly::{imag_unit, real};
use super::{Gaussian, RationalForm, ScalarField};
use crate::conventions::TWIST_SIGN;
use crate::quaternion::{is_almost_complex, RatMat4};
use crate::{rat, Error, Rational, Result};

/// Constant symmetric positive-definite metric on the chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstantMetric {
    g: RatMat4,
    inv: RatMat4,
    sqrt_det: Option<Rational>,
}

fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

impl ConstantMetric {
    pub fn new(g: RatMat4) -> Result<Self> {
        if !g.is_symmetric() || g.leading_minors().iter().any(|m| !m.is_positive()) {
            return Err(Error::NotPositiveDefinite);
        }
        let det = g.det();
        let inv = RatMat4::from_fn(|r, c| {
            // adjugate entry (r, c) is the (c, r) cofactor
            let rows = 0b1111 & !(1u8 << c);
            let cols = 0b1111 & !(1u8 << r);
            let cof = basis::minor(&g.0, rows, cols);
            let cof = if (r + c) % 2 == 0 { cof } else { -cof };
            cof / &det
        });
        let sqrt_det = exact_sqrt(&det);
        Ok(Self { g, inv, sqrt_det })
    }

    pub fn euclidean() -> Self {
        Self::new(RatMat4::identity()).unwrap_or_else(|_| unreachable!("identity is positive definite"))
    }

    pub fn diagonal(d: [Rational; 4]) -> Result<Self> {
        Self::new(RatMat4::diag(d))
    }

    pub fn matrix(&self) -> &RatMat4 {
        &self.g
    }

    pub fn inverse(&self) -> &RatMat4 {
        &self.inv
    }

    /// Exact check of `g(LX, LY) = g(X, Y)`, i.e. `Lᵀ g L = g`.
    pub fn is_hermitian(&self, l: &RatMat4) -> bool {
        &(&l.transpose() * &self.g) * l == self.g
    }
}

/// Pullback-style action `(Mα)(X₁,…,Xₘ) = α(MX₁,…,MXₘ)` for any constant `M`.
/// Coefficients transform by the m-th compound of `M`.
pub fn linear_action(m: &RatMat4, alpha: &RationalForm) -> RationalForm {
    let deg = alpha.degree();
    let mut out = RationalForm::zero(deg);
    for target in basis::masks(deg) {
        for (src, f) in alpha.terms() {
            let c = if deg == 0 { Rational::one() } else { basis::minor(&m.0, src, target) };
            if !c.is_zero() {
                out.add_term(target, f.scale_real(&c));
            }
        }
    }
    out
}

/// Action of an almost-complex structure `L` on forms.
pub fn structure_action(l: &RatMat4, alpha: &RationalForm) -> Result<RationalForm> {
    if !is_almost_complex(l) {
        return Err(Error::NotAlmostComplex);
    }
    Ok(linear_action(l, alpha))
}

/// `d^c_L α = σ · (−1)^m L d L α` with the global sign `σ` fixed in
/// [`crate::conventions`].
pub fn twisted_d(l: &RatMat4, alpha: &RationalForm) -> Result<RationalForm> {
    let la = structure_action(l, alpha)?;
    let dla = la.exterior_d()?;
    let out = linear_action(l, &dla);
    let sign = TWIST_SIGN * if alpha.degree() % 2 == 0 { 1 } else { -1 };
    Ok(if sign < 0 { -&out } else { out })
}

type GMatrix = Vec<Vec<Gaussian>>;

/// Matrix (rows = output mask, cols = input mask) of the derivation extension
/// of `L` to `Λᵐ`, whose eigenvalue on type `(p, q)` is `√−1 (p − q)`.
fn derivation_matrix(l: &RatMat4, m: usize) -> GMatrix {
    let masks = basis::masks(m);
    let pos = |mask: u8| masks.iter().position(|&x| x == mask).unwrap_or(usize::MAX);
    let mut d = vec![vec![Gaussian::zero(); masks.len()]; masks.len()];
    for (col, &src) in masks.iter().enumerate() {
        let idx = basis::indices(src);
        for k in 0..idx.len() {
            // L(dx_i) = Σ_b L[i][b] dx_b
            for b in 0..DIM {
                let coeff = l.get(idx[k], b);
                if coeff.is_zero() {
                    continue;
                }
                let mut seq = idx.clone();
                seq[k] = b;
                let mut sorted = seq.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != seq.len() {
                    continue;
                }
                let perm: Vec<usize> = seq.iter().map(|x| sorted.iter().position(|s| s == x).unwrap_or(0)).collect();
                let sign = basis::perm_sign(&perm);
                let row = pos(basis::mask_of(&sorted));
                let v = real(if sign < 0 { -coeff.clone() } else { coeff.clone() });
                d[row][col] = &d[row][col] + &v;
            }
        }
    }
    d
}

fn gm_mul(a: &GMatrix, b: &GMatrix) -> GMatrix {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).fold(Gaussian::zero(), |acc, k| acc + &a[r][k] * &b[k][c])).collect())
        .collect()
}

/// Projector onto type `(p, q)` on `Λᵐ`, `m = p + q`, as a polynomial in the
/// derivation matrix (Lagrange interpolation over the candidate eigenvalues
/// `√−1 (m − 2j)`, `j = 0..m`).
fn type_projector(l: &RatMat4, p: usize, q: usize) -> GMatrix {
    let m = p + q;
    let d = derivation_matrix(l, m);
    let n = d.len();
    let eig = |j: usize| Gaussian::new(Rational::zero(), rat(m as i64 - 2 * j as i64, 1));
    let target = eig(q);
    let mut proj: GMatrix = (0..n)
        .map(|r| (0..n).map(|c| if r == c { Gaussian::one() } else { Gaussian::zero() }).collect())
        .collect();
    for j in (0..=m).filter(|&j| j != q) {
        let lam = eig(j);
        let denom = &target - &lam;
        let factor: GMatrix = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let diag = if r == c { lam.clone() } else { Gaussian::zero() };
                        (&d[r][c] - &diag) / &denom
                    })
                    .collect()
            })
            .collect();
        proj = gm_mul(&factor, &proj);
    }
    proj
}

/// Component of type `(p, q)` with respect to `L` of a (complexified) form.
pub fn pq_project(l: &RatMat4, alpha: &RationalForm, p: usize, q: usize) -> Result<RationalForm> {
    if p + q != alpha.degree() {
        return Err(Error::TypeMismatch { p, q, degree: alpha.degree() });
    }
    if !is_almost_complex(l) {
        return Err(Error::NotAlmostComplex);
    }
    let masks = basis::masks(p + q);
    let proj = type_projector(l, p, q);
    let mut out = RationalForm::zero(p + q);
    for (row, &target) in masks.iter().enumerate() {
        for (src, f) in alpha.terms() {
            let col = masks.iter().position(|&x| x == src).unwrap_or(0);
            let c = &proj[row][col];
            if !c.is_zero() {
                out.add_term(target, f.scale(c));
            }
        }
    }
    Ok(out)
}

/// `∂α`, assembled from the `(p + 1, q)` parts of `d` applied to each type
/// component of `α`.
pub fn del(l: &RatMat4, alpha: &RationalForm) -> Result<RationalForm> {
    let m = alpha.degree();
    let mut out = RationalForm::zero(m + 1);
    for p in 0..=m {
        let piece = pq_project(l, alpha, p, m - p)?;
        if piece.is_zero() {
            continue;
        }
        out = &out + &pq_project(l, &piece.exterior_d()?, p + 1, m - p)?;
    }
    Ok(out)
}

/// `½ (dα + √−1 d^c_L α)`; agrees with [`del`] for constant integrable `L`.
pub fn del_from_twisted(l: &RatMat4, alpha: &RationalForm) -> Result<RationalForm> {
    let sum = &alpha.exterior_d()? + &twisted_d(l, alpha)?.scale_gaussian(&imag_unit());
    Ok(sum.scale_real(&rat(1, 2)))
}

/// Hodge star for a constant metric and orientation `dx₀ ∧ dx₁ ∧ dx₂ ∧ dx₃`.
pub fn hodge_star(g: &ConstantMetric, alpha: &RationalForm) -> Result<RationalForm> {
    let sqrt_det = g.sqrt_det.as_ref().ok_or(Error::IrrationalVolume)?;
    let m = alpha.degree();
    let mut out = RationalForm::zero(DIM - m);
    for raised_mask in basis::masks(m) {
        // α^I = Σ_K det(g⁻¹[I, K]) α_K
        let mut raised = ScalarField::zero();
        for (k, f) in alpha.terms() {
            let c = if m == 0 { Rational::one() } else { basis::minor(&g.inv.0, raised_mask, k) };
            if !c.is_zero() {
                raised = &raised + &f.scale_real(&c);
            }
        }
        if raised.is_zero() {
            continue;
        }
        let (comp, eps) = basis::complement(raised_mask);
        out.add_term(comp, raised.scale_real(&(sqrt_det * rat(eps as i64, 1))));
    }
    Ok(out)
}

/// `Λα` defined by `α ∧ ω = (Λα) · ½ ω ∧ ω`.
pub fn lambda_contract(omega: &RationalForm, alpha: &RationalForm) -> Result<ScalarField> {
    for f in [omega, alpha] {
        if f.degree() != 2 {
            return Err(Error::WrongDegree { expected: 2, found: f.degree() });
        }
    }
    let vol = omega.wedge(omega)?.top_coefficient()?.scale_real(&rat(1, 2));
    let inv = vol.inverse().ok_or(Error::Degenerate)?;
    Ok(&alpha.wedge(omega)?.top_coefficient()? * &inv)
}

/// Pointwise inner product `⟨α, β⟩` for the Euclidean metric, via `α ∧ ∗β = ⟨α, β⟩ vol`.
pub fn euclidean_inner(alpha: &RationalForm, beta: &RationalForm) -> Result<ScalarField> {
    let star = hodge_star(&ConstantMetric::euclidean(), beta)?;
    alpha.wedge(&star)?.top_coefficient()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{structure_matrix, AxisTriple, HypercomplexFrame, Side};

    fn left_i() -> RatMat4 {
        structure_matrix(Side::Left, &AxisTriple::i())
    }

    fn omega_i() -> RationalForm {
        &RationalForm::basis(&[0, 1]) + &RationalForm::basis(&[2, 3])
    }

    #[test]
    fn i_on_dx0() {
        let out = structure_action(&left_i(), &RationalForm::dx(0)).unwrap();
        assert_eq!(out, -&RationalForm::dx(1));
    }

    #[test]
    fn structure_action_rejects_non_complex() {
        assert!(matches!(structure_action(&RatMat4::identity(), &RationalForm::dx(0)), Err(Error::NotAlmostComplex)));
    }

    #[test]
    fn hermitian_form_is_invariant() {
        assert_eq!(structure_action(&left_i(), &omega_i()).unwrap(), omega_i());
    }

    #[test]
    fn twisted_d_of_coordinate() {
        // d^c_I x₀ (X) = −dx₀(IX) = x-component: −(IX)₀ = X₁, so d^c_I x₀ = dx₁
        let f = RationalForm::function(ScalarField::var(0));
        assert_eq!(twisted_d(&left_i(), &f).unwrap(), RationalForm::dx(1));
    }

    #[test]
    fn twisted_d_of_phi() {
        // −2(x₁dx₀ − x₀dx₁ + x₃dx₂ − x₂dx₃) under the positive sign convention
        let phi = RationalForm::function(ScalarField::phi());
        let got = twisted_d(&left_i(), &phi).unwrap();
        let t = |c: i64, v: usize, i: usize| RationalForm::monomial(&[i], ScalarField::var(v).scale_real(&rat(c, 1)));
        let expected = [t(-2, 1, 0), t(2, 0, 1), t(-2, 3, 2), t(2, 2, 3)]
            .iter()
            .fold(RationalForm::zero(1), |a, b| &a + b);
        assert_eq!(got, expected);
        // dd^c φ = 4 ω_I: positive
        assert_eq!(got.exterior_d().unwrap(), omega_i().scale_real(&rat(4, 1)));
    }

    #[test]
    fn type_one_zero_part_of_dx0() {
        let p = pq_project(&left_i(), &RationalForm::dx(0), 1, 0).unwrap();
        let i_dx0 = structure_action(&left_i(), &RationalForm::dx(0)).unwrap();
        let expected = (&RationalForm::dx(0) - &i_dx0.scale_gaussian(&imag_unit())).scale_real(&rat(1, 2));
        assert_eq!(p, expected);
        assert!(matches!(pq_project(&left_i(), &RationalForm::dx(0), 1, 1), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn omega_is_one_one() {
        for l in HypercomplexFrame::left().structures() {
            let w = crate::hermitian::hermitian_form(&crate::hermitian::Metric::euclidean(), l).unwrap();
            assert!(pq_project(l, &w, 2, 0).unwrap().is_zero());
            assert!(pq_project(l, &w, 0, 2).unwrap().is_zero());
            assert_eq!(pq_project(l, &w, 1, 1).unwrap(), w);
        }
    }

    #[test]
    fn three_zero_vanishes() {
        let a = RationalForm::monomial(&[0, 1, 3], ScalarField::var(2));
        assert!(pq_project(&left_i(), &a, 3, 0).unwrap().is_zero());
        assert!(pq_project(&left_i(), &a, 0, 3).unwrap().is_zero());
    }

    #[test]
    fn star_examples() {
        let e = ConstantMetric::euclidean();
        assert_eq!(hodge_star(&e, &RationalForm::basis(&[0, 1])).unwrap(), RationalForm::basis(&[2, 3]));
        assert_eq!(hodge_star(&e, &RationalForm::function(ScalarField::one())).unwrap(), RationalForm::volume());
        assert_eq!(hodge_star(&e, &RationalForm::basis(&[0, 2])).unwrap(), -&RationalForm::basis(&[1, 3]));
        assert_eq!(hodge_star(&e, &RationalForm::dx(1)).unwrap(), -&RationalForm::basis(&[0, 2, 3]));
    }

    #[test]
    fn star_for_scaled_and_irrational_metrics() {
        let g = ConstantMetric::diagonal([rat(4, 1), rat(4, 1), rat(4, 1), rat(4, 1)]).unwrap();
        // conformal invariance on 2-forms
        assert_eq!(hodge_star(&g, &RationalForm::basis(&[0, 1])).unwrap(), RationalForm::basis(&[2, 3]));
        assert_eq!(hodge_star(&g, &RationalForm::dx(0)).unwrap(), RationalForm::basis(&[1, 2, 3]).scale_real(&rat(4, 1)));
        let bad = ConstantMetric::diagonal([rat(2, 1), rat(1, 1), rat(1, 1), rat(1, 1)]).unwrap();
        assert!(matches!(hodge_star(&bad, &RationalForm::dx(0)), Err(Error::IrrationalVolume)));
        assert!(matches!(
            ConstantMetric::diagonal([rat(1, 1), rat(-1, 1), rat(1, 1), rat(1, 1)]),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn lambda_examples() {
        let om = omega_i();
        assert_eq!(lambda_contract(&om, &om).unwrap(), ScalarField::rational(rat(2, 1)));
        assert!(lambda_contract(&om, &RationalForm::basis(&[0, 2])).unwrap().is_zero());
        let asd = &RationalForm::basis(&[0, 1]) - &RationalForm::basis(&[2, 3]);
        assert!(lambda_contract(&om, &asd).unwrap().is_zero());
        assert!(matches!(lambda_contract(&RationalForm::basis(&[0, 1]), &om), Err(Error::Degenerate)));
    }

    #[test]
    fn del_matches_half_d_plus_i_dc() {
        let a = RationalForm::monomial(&[2], &ScalarField::var(0) * &ScalarField::phi_inverse_power(1));
        assert_eq!(del(&left_i(), &a).unwrap(), del_from_twisted(&left_i(), &a).unwrap());
    }
}
