// SPDX-License-Identifier: Apache-2.0

//! Covariant exterior calculus for Lie-algebra-valued forms on the grid.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::lattice::{Connection, LatticeField};
use crate::conventions::TWIST_SIGN;
use crate::exterior::{basis, twisted_d, RationalForm};
use crate::hermitian::{hermitian_form, Metric};
use crate::quaternion::{HypercomplexFrame, RatMat4};
use crate::{Error, Result};

pub type Mat4 = [[f64; 4]; 4];

pub fn mat_f64(m: &RatMat4) -> Mat4 {
    std::array::from_fn(|r| std::array::from_fn(|c| m.get(r, c).to_f64().unwrap_or(f64::NAN)))
}

/// A constant real scalar form.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstForm {
    pub degree: usize,
    pub coeffs: Vec<(u8, f64)>,
}

impl ConstForm {
    pub fn from_rational(form: &RationalForm) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (mask, f) in form.terms() {
            let c = f
                .as_constant()
                .filter(|g| g.im.is_zero())
                .ok_or_else(|| Error::InvalidParameter("form does not have constant real coefficients".into()))?;
            coeffs.push((mask, c.re.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { degree: form.degree(), coeffs })
    }

    pub fn coeff(&self, mask: u8) -> f64 {
        self.coeffs.iter().find(|(m, _)| *m == mask).map_or(0.0, |(_, c)| *c)
    }

    pub fn top_of_wedge(&self, other: &ConstForm) -> f64 {
        let mut top = 0.0;
        for &(a, x) in &self.coeffs {
            for &(b, y) in &other.coeffs {
                if a | b == 0b1111 {
                    if let Some(s) = basis::wedge_sign(a, b) {
                        top += s as f64 * x * y;
                    }
                }
            }
        }
        top
    }
}

/// Flat Hermitian form `ω_L = g₀(L·, ·)` of a constant structure.
pub fn flat_hermitian_form(l: &RatMat4) -> Result<ConstForm> {
    ConstForm::from_rational(&hermitian_form(&Metric::euclidean(), l)?)
}

/// `+1` if the frame's Hermitian forms satisfy `ω ∧ ω > 0` for the standard
/// volume form, `−1` otherwise; the frame's complex orientation.
pub fn frame_orientation(frame: &HypercomplexFrame) -> Result<f64> {
    let w = flat_hermitian_form(frame.structures()[0])?;
    Ok(w.top_of_wedge(&w).signum())
}

fn derivative_component(x: &LatticeField, c: usize, axis: usize) -> Vec<f64> {
    let lat = x.lattice();
    lat.spectral.derivative(x.component(c), lat.dim(), axis)
}

/// `d_A x = dx + [A ∧ x]`, with `d` alone when `conn` is `None`.
pub fn cov_d(conn: Option<&Connection>, x: &LatticeField) -> Result<LatticeField> {
    let p = x.degree();
    if p >= 4 {
        return Err(Error::DegreeOverflow(p, 1));
    }
    if let Some(a) = conn {
        a.field().check_same_lattice(x)?;
    }
    let lat = x.lattice().clone();
    let (sites, dim) = (lat.sites(), lat.dim());
    let mut out = LatticeField::zero(&lat, p + 1);
    let out_masks = out.components();
    for (c, src) in x.components().into_iter().enumerate() {
        for mu in (0..4).filter(|m| src & (1 << m) == 0) {
            let target = src | (1 << mu);
            let sign = basis::wedge_sign(1 << mu, src).unwrap_or(0) as f64;
            let tc = out_masks.iter().position(|&m| m == target).unwrap_or(0);
            let deriv = derivative_component(x, c, mu);
            let block = out.component_mut(tc);
            for (o, v) in block.iter_mut().zip(&deriv) {
                *o += sign * v;
            }
            if let Some(a) = conn.filter(|a| !a.is_trivial()) {
                for s in 0..sites {
                    let am = a.field().value(mu, s);
                    let xv = x.value(c, s);
                    lat.algebra.bracket_into(am, xv, sign, &mut block[s * dim..(s + 1) * dim]);
                }
            }
        }
    }
    Ok(out)
}

/// `F_A = dA + ½[A ∧ A]`, i.e. `F_{μν} = ∂_μA_ν − ∂_νA_μ + [A_μ, A_ν]`.
pub fn curvature(conn: &Connection) -> Result<LatticeField> {
    let a = conn.field();
    let mut f = cov_d(None, a)?;
    if conn.is_trivial() {
        return Ok(f);
    }
    let lat = a.lattice().clone();
    let dim = lat.dim();
    for (c, mask) in f.components().into_iter().enumerate() {
        let idx = basis::indices(mask);
        let (mu, nu) = (idx[0], idx[1]);
        let block = f.component_mut(c);
        for s in 0..lat.sites() {
            lat.algebra.bracket_into(a.value(mu, s), a.value(nu, s), 1.0, &mut block[s * dim..(s + 1) * dim]);
        }
    }
    Ok(f)
}

/// Hodge star of the flat metric for the orientation `orientation · dx₀₁₂₃`.
pub fn hodge_star(x: &LatticeField, orientation: f64) -> LatticeField {
    let p = x.degree();
    let mut out = LatticeField::zero(x.lattice(), 4 - p);
    let out_masks = out.components();
    for (c, mask) in x.components().into_iter().enumerate() {
        let (comp, eps) = basis::complement(mask);
        let tc = out_masks.iter().position(|&m| m == comp).unwrap_or(0);
        let s = orientation * eps as f64;
        for (o, v) in out.component_mut(tc).iter_mut().zip(x.component(c)) {
            *o += s * v;
        }
    }
    out
}

/// `d*_A = −∗ d_A ∗`, the formal L² adjoint of `d_A` in dimension four.
pub fn cov_codiff(conn: Option<&Connection>, x: &LatticeField) -> Result<LatticeField> {
    if x.degree() == 0 {
        return Err(Error::WrongDegree { expected: 1, found: 0 });
    }
    let inner = cov_d(conn, &hodge_star(x, 1.0))?;
    Ok(hodge_star(&inner, 1.0).scaled(-1.0))
}

/// `(Mx)(X₁,…,X_p) = x(MX₁,…,MX_p)` on the form part.
pub fn form_action(m: &Mat4, x: &LatticeField) -> LatticeField {
    let p = x.degree();
    if p == 0 {
        return x.clone();
    }
    let masks = x.components();
    let mut out = LatticeField::zero(x.lattice(), p);
    for (tc, &target) in masks.iter().enumerate() {
        for (sc, &src) in masks.iter().enumerate() {
            let c = basis::minor(m, src, target);
            if c != 0.0 {
                let src_block = x.component(sc).to_vec();
                for (o, v) in out.component_mut(tc).iter_mut().zip(&src_block) {
                    *o += c * v;
                }
            }
        }
    }
    out
}

/// `d^c_{A,L} x = σ (−1)^p L d_A L x`.
pub fn twisted_cov_d(conn: Option<&Connection>, l: &Mat4, x: &LatticeField) -> Result<LatticeField> {
    let inner = cov_d(conn, &form_action(l, x))?;
    let sign = TWIST_SIGN as f64 * if x.degree() % 2 == 0 { 1.0 } else { -1.0 };
    Ok(form_action(l, &inner).scaled(sign))
}

/// `x ∧ w` for a constant scalar form `w` (placed on the right).
pub fn wedge_const(x: &LatticeField, w: &ConstForm) -> Result<LatticeField> {
    let p = x.degree();
    if p + w.degree > 4 {
        return Err(Error::DegreeOverflow(p, w.degree));
    }
    let mut out = LatticeField::zero(x.lattice(), p + w.degree);
    let out_masks = out.components();
    for (c, mask) in x.components().into_iter().enumerate() {
        for &(wm, wc) in &w.coeffs {
            if let Some(s) = basis::wedge_sign(mask, wm) {
                let tc = out_masks.iter().position(|&m| m == mask | wm).unwrap_or(0);
                let src = x.component(c).to_vec();
                for (o, v) in out.component_mut(tc).iter_mut().zip(&src) {
                    *o += s as f64 * wc * v;
                }
            }
        }
    }
    Ok(out)
}

/// `Λx` for a 2-form `x`, defined by `x ∧ ω = (Λx) · ½ ω ∧ ω`.
pub fn lambda(x: &LatticeField, omega: &ConstForm) -> Result<LatticeField> {
    if x.degree() != 2 {
        return Err(Error::WrongDegree { expected: 2, found: x.degree() });
    }
    let vol = 0.5 * omega.top_of_wedge(omega);
    if vol == 0.0 {
        return Err(Error::Degenerate);
    }
    let top = wedge_const(x, omega)?;
    Ok(LatticeField::from_data(x.lattice(), 0, top.data().to_vec())?.scaled(1.0 / vol))
}

/// `(a, b) = −∫ tr(a ∧ ∗b)` over the unit torus.
pub fn l2_inner(a: &LatticeField, b: &LatticeField) -> Result<f64> {
    a.check_compatible(b)?;
    let dot: f64 = a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum();
    Ok(dot / a.lattice().sites() as f64)
}

pub fn l2_norm(a: &LatticeField) -> f64 {
    (a.data().iter().map(|x| x * x).sum::<f64>() / a.lattice().sites() as f64).sqrt()
}

/// `F⁺ = ½(F + ∗F)` and its L² norm.
pub fn asd_residual(f: &LatticeField, orientation: f64) -> Result<(LatticeField, f64)> {
    if f.degree() != 2 {
        return Err(Error::WrongDegree { expected: 2, found: f.degree() });
    }
    let plus = f.axpy(1.0, &hodge_star(f, orientation)).scaled(0.5);
    let norm = l2_norm(&plus);
    Ok((plus, norm))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HEReport {
    /// Site average of the `id` part of `√−1 ΛF`.
    pub gamma: f64,
    /// L² norm of `√−1 ΛF − γ · id`.
    pub residual_norm: f64,
    /// L² norm of the part of `F` not of type (1,1).
    pub non_11_norm: f64,
}

impl HEReport {
    pub fn is_type_11(&self, tol: f64) -> bool {
        self.non_11_norm <= tol
    }

    pub fn is_hermitian_einstein(&self, tol: f64) -> bool {
        self.is_type_11(tol) && self.residual_norm <= tol
    }
}

pub fn he_residual(f: &LatticeField, l: &Mat4, omega: &ConstForm) -> Result<HEReport> {
    let lf = lambda(f, omega)?;
    let lat = f.lattice();
    let sites = lat.sites();
    // √−1 T₀ = −id/√n, and √−1 T_a are orthonormal Hermitian matrices
    let center = lat.algebra.has_center();
    let mean0 = if center { (0..sites).map(|s| lf.value(0, s)[0]).sum::<f64>() / sites as f64 } else { 0.0 };
    let gamma = -mean0 / (lat.algebra.rank() as f64).sqrt();
    let mut sq = 0.0;
    for s in 0..sites {
        for (a, v) in lf.value(0, s).iter().enumerate() {
            let r = if center && a == 0 { v - mean0 } else { *v };
            sq += r * r;
        }
    }
    let residual_norm = (sq / sites as f64).sqrt();
    let non_11_norm = 0.5 * l2_norm(&f.axpy(-1.0, &form_action(l, f)));
    Ok(HEReport { gamma, residual_norm, non_11_norm })
}

/// `L̃a = √−1 (a^{0,1} − a^{1,0})`, computed from the type decomposition of
/// the complexified form part and checked against `−La`.
pub fn induced_structure(l: &Mat4, a: &LatticeField) -> Result<LatticeField> {
    if a.degree() != 1 {
        return Err(Error::WrongDegree { expected: 1, found: a.degree() });
    }
    let i = Complex64::new(0.0, 1.0);
    // L on 1-form coefficients: (La)_j = Σ_k L[k][j] a_k; eigenvalue +√−1 on (1,0)
    let lmat = |j: usize, k: usize| l[k][j];
    let p10 = |j: usize, k: usize| -> Complex64 {
        let id = if j == k { 1.0 } else { 0.0 };
        (Complex64::new(lmat(j, k), 0.0) + i * id) / (2.0 * i)
    };
    let p01 = |j: usize, k: usize| -> Complex64 {
        let id = if j == k { 1.0 } else { 0.0 };
        (Complex64::new(lmat(j, k), 0.0) - i * id) / (-2.0 * i)
    };
    let lat = a.lattice();
    let mut out = LatticeField::zero(lat, 1);
    let mut worst_im = 0.0f64;
    let n = lat.sites() * lat.dim();
    for j in 0..4 {
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..4 {
            let w = i * (p01(j, k) - p10(j, k));
            if w.norm() == 0.0 {
                continue;
            }
            for (o, v) in acc.iter_mut().zip(a.component(k)) {
                *o += w * v;
            }
        }
        for (o, v) in out.component_mut(j).iter_mut().zip(&acc) {
            worst_im = worst_im.max(v.im.abs());
            *o = v.re;
        }
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let direct = form_action(l, a).scaled(-1.0);
    let mismatch = out.axpy(-1.0, &direct).max_abs().max(worst_im) / scale;
    if mismatch > 1e-12 {
        return Err(Error::FormulaMismatch(mismatch));
    }
    Ok(out)
}

/// Third term `∗(d^c_L ω_L ∧ a)` of the Coulomb identity; `d^c_L ω_L` is
/// computed exactly and must be constant.
pub fn torsion_term(l: &RatMat4, a: &LatticeField, orientation: f64) -> Result<LatticeField> {
    let omega = hermitian_form(&Metric::euclidean(), l)?;
    let h = ConstForm::from_rational(&twisted_d(l, &omega)?)?;
    Ok(hodge_star(&wedge_const(a, &h)?, orientation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::lattice::TorusSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2(grid: usize) -> std::sync::Arc<crate::torus::lattice::Lattice> {
        TorusSpec::new(grid, 2, HypercomplexFrame::left()).unwrap().lattice()
    }

    #[test]
    fn d_squared_vanishes() {
        let lat = su2(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = LatticeField::random(&lat, 1, 1.0, &mut rng);
        let ddx = cov_d(None, &cov_d(None, &x).unwrap()).unwrap();
        assert!(ddx.max_abs() < 1e-10);
    }

    #[test]
    fn codifferential_is_adjoint() {
        let lat = su2(4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = Connection::new(LatticeField::random(&lat, 1, 0.3, &mut rng)).unwrap();
        for p in 0..3 {
            let x = LatticeField::random(&lat, p, 1.0, &mut rng);
            let y = LatticeField::random(&lat, p + 1, 1.0, &mut rng);
            let lhs = l2_inner(&cov_d(Some(&a), &x).unwrap(), &y).unwrap();
            let rhs = l2_inner(&x, &cov_codiff(Some(&a), &y).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "p = {p}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn star_squares_to_sign() {
        let lat = su2(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in 0..=4 {
            let x = LatticeField::random(&lat, p, 1.0, &mut rng);
            let ss = hodge_star(&hodge_star(&x, -1.0), -1.0);
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            assert!(ss.axpy(-sign, &x).max_abs() < 1e-15);
        }
    }

    #[test]
    fn induced_structure_on_dx0() {
        let lat = su2(3);
        let xi = vec![0.0, 1.0, 0.0];
        let zero = vec![0.0; 3];
        let a = LatticeField::constant(&lat, 1, &[xi.clone(), zero.clone(), zero.clone(), zero.clone()]).unwrap();
        let l = mat_f64(HypercomplexFrame::left().structures()[0]);
        let ia = induced_structure(&l, &a).unwrap();
        let want = LatticeField::constant(&lat, 1, &[zero.clone(), xi, zero.clone(), zero]).unwrap();
        assert!(ia.axpy(-1.0, &want).max_abs() < 1e-15);
    }

    #[test]
    fn lambda_of_omega_is_two() {
        let lat = su2(3);
        let l = HypercomplexFrame::left().structures()[0].clone();
        let w = flat_hermitian_form(&l).unwrap();
        let xi = vec![0.5, 0.0, 0.0];
        let comps: Vec<Vec<f64>> = basis::masks(2).iter().map(|&m| xi.iter().map(|v| v * w.coeff(m)).collect()).collect();
        let f = LatticeField::constant(&lat, 2, &comps).unwrap();
        let lf = lambda(&f, &w).unwrap();
        assert!((lf.value(0, 7)[0] - 1.0).abs() < 1e-15);
    }
}
