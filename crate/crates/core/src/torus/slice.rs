// SPDX-License-Identifier: Apache-2.0

//! Horizontal slices `{d_A⁺a = 0, Λ d^c_{A,L} a = 0}` and the quaternionic
//! structure they carry.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::lattice::{Connection, LatticeField, TorusSpec};
use super::ops::{
    asd_residual, cov_codiff, cov_d, curvature, flat_hermitian_form, frame_orientation,
    induced_structure, l2_inner, l2_norm, lambda, mat_f64, torsion_term, twisted_cov_d, ConstForm, Mat4,
};
use crate::conventions::TWIST_SIGN;
use crate::exterior::basis;
use crate::quaternion::RatMat4;
use crate::{Error, Result};

/// Ratio required between the smallest retained and the largest discarded
/// singular value.
pub const GAP_THRESHOLD: f64 = 1e3;

/// Largest real dimension handled by the dense route.
pub const DENSE_LIMIT: usize = 3000;

/// Tolerance on `‖F⁺‖` below which a non-constant connection counts as ASD.
pub const FLOWED_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceRoute {
    /// Constant `A`: one small complex SVD per Fourier mode.
    Modes,
    /// General `A` on odd grids: one SVD of the full real operator.
    Dense,
}

#[derive(Clone, Debug)]
pub struct TangentBasis {
    pub base: Connection,
    pub structure: Mat4,
    pub omega: ConstForm,
    pub orientation: f64,
    /// L²-orthonormal real 1-forms spanning the slice.
    pub basis: Vec<LatticeField>,
    pub gram: DMatrix<f64>,
    /// Matrices of `Ĩ, J̃, K̃` of the frame in `basis`, column `j` holding the
    /// coefficients of `L̃ b_j`.
    pub ops: [DMatrix<f64>; 3],
    /// L² norm of the part of `L̃ b_j` outside the slice, maximized over `j`.
    pub ops_defect: [f64; 3],
    /// Largest slice-equation residual over the basis.
    pub slice_defect: f64,
    pub gap: f64,
    pub route: SliceRoute,
}

impl TangentBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combine(&self, coeffs: &[f64]) -> LatticeField {
        let lat = self.base.lattice();
        coeffs.iter().zip(&self.basis).fold(LatticeField::zero(lat, 1), |acc, (c, b)| acc.axpy(*c, b))
    }

    /// Coefficients of the L² projection of `a` and the norm of the remainder.
    pub fn project(&self, a: &LatticeField) -> Result<(Vec<f64>, f64)> {
        let rhs: Vec<f64> = self.basis.iter().map(|b| l2_inner(b, a)).collect::<Result<_>>()?;
        let coeffs = self
            .gram
            .clone()
            .lu()
            .solve(&nalgebra::DVector::from_vec(rhs))
            .ok_or(Error::Degenerate)?;
        let coeffs: Vec<f64> = coeffs.iter().copied().collect();
        let rest = a.axpy(-1.0, &self.combine(&coeffs));
        Ok((coeffs, l2_norm(&rest)))
    }
}

/// `(d_A⁺ a, Λ d^c_{A,L} a)` evaluated with the field operators.
pub fn slice_residual(
    conn: &Connection,
    l: &Mat4,
    omega: &ConstForm,
    orientation: f64,
    a: &LatticeField,
) -> Result<(LatticeField, LatticeField)> {
    let (plus, _) = asd_residual(&cov_d(Some(conn), a)?, orientation)?;
    let lam = lambda(&twisted_cov_d(Some(conn), l, a)?, omega)?;
    Ok((plus, lam))
}

/// Coefficients `w̃_I` with `Λβ = Σ_I w̃_I β_I`.
fn lambda_weights(omega: &ConstForm) -> Vec<(u8, f64)> {
    let vol = 0.5 * omega.top_of_wedge(omega);
    basis::masks(2)
        .into_iter()
        .map(|m| {
            let (c, s) = basis::complement(m);
            (m, s as f64 * omega.coeff(c) / vol)
        })
        .collect()
}

/// Symbol of the stacked slice operator at frequency `k` for constant `A`.
///
/// Unknowns are indexed `ν·D + b`; rows are three blocks `⟨d_A a, ω_r⟩`
/// followed by `Λ d^c_{A,L} a`.
pub fn mode_symbol(
    conn: &Connection,
    l: &Mat4,
    sd_forms: &[ConstForm; 3],
    omega: &ConstForm,
    k: &[i64; 4],
) -> DMatrix<Complex64> {
    let lat = conn.lattice();
    let d = lat.dim();
    let n = 4 * d;
    let p: Vec<DMatrix<Complex64>> = (0..4)
        .map(|mu| {
            let ad = lat.algebra.ad(conn.field().value(mu, 0)).map(|v| Complex64::new(v, 0.0));
            let kappa = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k[mu] as f64);
            ad + DMatrix::identity(d, d) * kappa
        })
        .collect();
    // (d_A a)_{μν} as a D × 4D block
    let block = |mu: usize, nu: usize| {
        let mut b = DMatrix::<Complex64>::zeros(d, n);
        b.view_mut((0, nu * d), (d, d)).copy_from(&p[mu]);
        b.view_mut((0, mu * d), (d, d)).copy_from(&(-&p[nu]));
        b
    };
    let pairs: Vec<(u8, DMatrix<Complex64>)> = basis::masks(2)
        .into_iter()
        .map(|m| {
            let idx = basis::indices(m);
            (m, block(idx[0], idx[1]))
        })
        .collect();
    let lbig = DMatrix::<Complex64>::from_fn(n, n, |r, c| {
        if r % d == c % d {
            Complex64::new(l[c / d][r / d], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for (r, w) in sd_forms.iter().enumerate() {
        let mut row = DMatrix::<Complex64>::zeros(d, n);
        for (m, b) in &pairs {
            let c = w.coeff(*m);
            if c != 0.0 {
                row += b * Complex64::new(c, 0.0);
            }
        }
        out.view_mut((r * d, 0), (d, n)).copy_from(&row);
    }
    // Λ d^c_L a = −σ Λ d_A (L a), since L fixes ω and the volume form
    let mut row = DMatrix::<Complex64>::zeros(d, n);
    for ((_, b), (_, w)) in pairs.iter().zip(lambda_weights(omega)) {
        if w != 0.0 {
            row += b * Complex64::new(-(TWIST_SIGN as f64) * w, 0.0);
        }
    }
    out.view_mut((3 * d, 0), (d, n)).copy_from(&(row * lbig));
    out
}

struct Spectrum {
    kernel: Vec<LatticeField>,
    kept_max: f64,
    dropped_min: f64,
}

fn split_kernel(sv: &[f64], cutoff: f64) -> (Vec<usize>, f64, f64) {
    let mut kept = Vec::new();
    let (mut kmax, mut dmin) = (0.0f64, f64::INFINITY);
    for (i, &s) in sv.iter().enumerate() {
        if s <= cutoff {
            kept.push(i);
            kmax = kmax.max(s);
        } else {
            dmin = dmin.min(s);
        }
    }
    (kept, kmax, dmin)
}

fn modes_kernel(conn: &Connection, l: &Mat4, sd: &[ConstForm; 3], omega: &ConstForm, tol: f64) -> Result<Spectrum> {
    let lat = conn.lattice().clone();
    let d = lat.dim();
    let sites = lat.sites();
    // one representative of each pair {k, −k}
    let modes: Vec<[i64; 4]> = lat.spectral.modes().into_iter().filter(|k| *k >= k.map(|c| -c)).collect();
    let svds: Vec<([i64; 4], Vec<f64>, DMatrix<Complex64>)> = modes
        .par_iter()
        .map(|k| {
            let m = mode_symbol(conn, l, sd, omega, k);
            if k.iter().all(|&c| c == 0) {
                // the zero-mode symbol is real, so its kernel has a real basis
                let svd = m.map(|z| z.re).svd(false, true);
                let vt = svd.v_t.unwrap_or_else(|| DMatrix::zeros(0, 0)).map(|v| Complex64::new(v, 0.0));
                return (*k, svd.singular_values.iter().copied().collect(), vt);
            }
            let svd = m.svd(false, true);
            let vt = svd.v_t.unwrap_or_else(|| DMatrix::zeros(0, 0));
            (*k, svd.singular_values.iter().copied().collect(), vt)
        })
        .collect();
    let scale = svds.iter().flat_map(|(_, s, _)| s.iter().copied()).fold(0.0f64, f64::max).max(1.0);
    let cutoff = tol * scale;
    let mut kernel = Vec::new();
    let (mut kept_max, mut dropped_min) = (0.0f64, f64::INFINITY);
    for (k, sv, vt) in &svds {
        let (kept, kmax, dmin) = split_kernel(sv, cutoff);
        kept_max = kept_max.max(kmax);
        dropped_min = dropped_min.min(dmin);
        let is_zero = k.iter().all(|&c| c == 0);
        for &row in &kept {
            let v: Vec<Complex64> = (0..4 * d).map(|j| vt[(row, j)].conj()).collect();
            if is_zero {
                let vals: Vec<Vec<f64>> = (0..4).map(|nu| (0..d).map(|b| v[nu * d + b].re).collect()).collect();
                let f = LatticeField::constant(&lat, 1, &vals)?;
                let norm = l2_norm(&f);
                kernel.push(f.scaled(1.0 / norm));
                continue;
            }
            let mut re = LatticeField::zero(&lat, 1);
            let mut im = LatticeField::zero(&lat, 1);
            for s in 0..sites {
                let e = Complex64::from_polar(std::f64::consts::SQRT_2, lat.spectral.phase(k, s));
                for nu in 0..4 {
                    for b in 0..d {
                        let z = v[nu * d + b] * e;
                        re.value_mut(nu, s)[b] = z.re;
                        im.value_mut(nu, s)[b] = z.im;
                    }
                }
            }
            kernel.push(re);
            kernel.push(im);
        }
    }
    Ok(Spectrum { kernel, kept_max, dropped_min })
}

fn operator_column(
    conn: &Connection,
    l: &Mat4,
    sd: &[ConstForm; 3],
    omega: &ConstForm,
    a: &LatticeField,
) -> Result<Vec<f64>> {
    let da = cov_d(Some(conn), a)?;
    let lam = lambda(&twisted_cov_d(Some(conn), l, a)?, omega)?;
    let lat = a.lattice();
    let (sites, d) = (lat.sites(), lat.dim());
    let mut out = Vec::with_capacity(4 * sites * d);
    for w in sd {
        let mut part = vec![0.0; sites * d];
        for (c, m) in da.components().into_iter().enumerate() {
            let wc = w.coeff(m);
            if wc != 0.0 {
                for (o, v) in part.iter_mut().zip(da.component(c)) {
                    *o += wc * v;
                }
            }
        }
        out.extend(part);
    }
    out.extend_from_slice(lam.data());
    Ok(out)
}

fn dense_kernel(conn: &Connection, l: &Mat4, sd: &[ConstForm; 3], omega: &ConstForm, tol: f64) -> Result<Spectrum> {
    let lat = conn.lattice().clone();
    let n = 4 * lat.sites() * lat.dim();
    if lat.grid() % 2 == 0 {
        return Err(Error::InvalidParameter("non-constant connections need an odd grid".into()));
    }
    if n > DENSE_LIMIT {
        return Err(Error::InvalidParameter(format!("dense slice dimension {n} exceeds {DENSE_LIMIT}")));
    }
    let columns: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut data = vec![0.0; n];
            data[j] = 1.0;
            operator_column(conn, l, sd, omega, &LatticeField::from_data(&lat, 1, data)?)
        })
        .collect::<Result<_>>()?;
    let m = DMatrix::from_fn(n, n, |r, c| columns[c][r]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or(Error::Degenerate)?;
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let scale = sv.iter().copied().fold(0.0f64, f64::max).max(1.0);
    let (kept, kept_max, dropped_min) = split_kernel(&sv, tol * scale);
    let kernel = kept
        .into_iter()
        .map(|row| {
            let f = LatticeField::from_data(&lat, 1, vt.row(row).iter().copied().collect())?;
            let norm = l2_norm(&f);
            Ok(f.scaled(1.0 / norm))
        })
        .collect::<Result<_>>()?;
    Ok(Spectrum { kernel, kept_max, dropped_min })
}

fn gram(basis: &[LatticeField]) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = basis
        .par_iter()
        .map(|a| basis.iter().map(|b| l2_inner(a, b)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(basis.len(), basis.len(), |r, c| rows[r][c]))
}

/// Matrix of `L̃` in `basis` and the out-of-slice defect.
fn induced_matrix(basis: &[LatticeField], gram_inv: &DMatrix<f64>, l: &Mat4) -> Result<(DMatrix<f64>, f64)> {
    let images: Vec<LatticeField> = basis.par_iter().map(|b| induced_structure(l, b)).collect::<Result<_>>()?;
    let k = basis.len();
    let mut m = DMatrix::zeros(k, k);
    let mut defect = 0.0f64;
    for (j, img) in images.iter().enumerate() {
        let rhs = nalgebra::DVector::from_iterator(k, basis.iter().map(|b| l2_inner(b, img).unwrap_or(f64::NAN)));
        let c = gram_inv * rhs;
        m.set_column(j, &c);
        let rest = basis.iter().zip(c.iter()).fold(img.clone(), |acc, (b, w)| acc.axpy(-w, b));
        defect = defect.max(l2_norm(&rest));
    }
    Ok((m, defect))
}

/// Kernel of `a ↦ (d_A⁺a, Λ d^c_{A,L} a)` on band-limited su(n)-valued
/// 1-forms, together with the induced structures of `spec.frame`.
pub fn horizontal_slice(spec: &TorusSpec, conn: &Connection, l: &RatMat4, tol: f64) -> Result<TangentBasis> {
    let route = if conn.is_constant() { SliceRoute::Modes } else { SliceRoute::Dense };
    horizontal_slice_via(spec, conn, l, tol, route)
}

/// [`horizontal_slice`] with an explicit route; `Modes` requires constant `A`.
pub fn horizontal_slice_via(
    spec: &TorusSpec,
    conn: &Connection,
    l: &RatMat4,
    tol: f64,
    route: SliceRoute,
) -> Result<TangentBasis> {
    if route == SliceRoute::Modes && !conn.is_constant() {
        return Err(Error::InvalidParameter("the mode route needs a constant connection".into()));
    }
    let orientation = frame_orientation(&spec.frame)?;
    let (_, asd) = asd_residual(&curvature(conn)?, orientation)?;
    if asd > tol.max(FLOWED_TOL) {
        return Err(Error::InvalidParameter(format!("connection is not ASD: |F+| = {asd:e}")));
    }
    let sd: [ConstForm; 3] = {
        let [a, b, c] = spec.frame.structures();
        [flat_hermitian_form(a)?, flat_hermitian_form(b)?, flat_hermitian_form(c)?]
    };
    let omega = flat_hermitian_form(l)?;
    let lm = mat_f64(l);
    let spectrum = match route {
        SliceRoute::Modes => modes_kernel(conn, &lm, &sd, &omega, tol)?,
        SliceRoute::Dense => dense_kernel(conn, &lm, &sd, &omega, tol)?,
    };
    let gap = spectrum.dropped_min / spectrum.kept_max.max(f64::EPSILON * spectrum.dropped_min.min(1e300));
    if gap < GAP_THRESHOLD {
        return Err(Error::IllConditioned { gap, threshold: GAP_THRESHOLD });
    }
    let basis = spectrum.kernel;
    let gram = gram(&basis)?;
    let gram_inv = gram.clone().try_inverse().ok_or(Error::Degenerate)?;
    let mut ops = Vec::with_capacity(3);
    let mut ops_defect = [0.0; 3];
    for (r, s) in spec.frame.structures().into_iter().enumerate() {
        let (m, def) = induced_matrix(&basis, &gram_inv, &mat_f64(s))?;
        ops.push(m);
        ops_defect[r] = def;
    }
    let slice_defect = basis
        .par_iter()
        .map(|b| {
            let (p, q) = slice_residual(conn, &lm, &omega, orientation, b)?;
            Ok(l2_norm(&p) + l2_norm(&q))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let ops: [DMatrix<f64>; 3] = ops.try_into().unwrap_or_else(|_| unreachable!("three structures"));
    Ok(TangentBasis {
        base: conn.clone(),
        structure: lm,
        omega,
        orientation,
        basis,
        gram,
        ops,
        ops_defect,
        slice_defect,
        gap,
        route,
    })
}

/// Largest projection residual of either basis onto the other's span.
pub fn subspace_distance(a: &TangentBasis, b: &TangentBasis) -> Result<f64> {
    if a.dim() != b.dim() {
        return Ok(f64::INFINITY);
    }
    let mut worst = 0.0f64;
    for (x, y) in [(a, b), (b, a)] {
        for v in &x.basis {
            worst = worst.max(y.project(v)?.1 / l2_norm(v));
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedDefect {
    pub name: String,
    pub defect: f64,
}

#[derive(Clone, Debug)]
pub struct ModuliStructureReport {
    pub dimension: usize,
    pub tol: f64,
    pub defects: Vec<NamedDefect>,
}

impl ModuliStructureReport {
    pub fn failures(&self) -> Vec<&NamedDefect> {
        self.defects.iter().filter(|d| !(d.defect < self.tol)).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Quaternionic identities of given operator matrices on a slice with Gram
/// matrix `gram`.
pub fn structure_defects(ops: &[DMatrix<f64>; 3], gram: &DMatrix<f64>, ops_defect: &[f64; 3], tol: f64) -> ModuliStructureReport {
    let [i, j, k] = ops;
    let id = DMatrix::<f64>::identity(i.nrows(), i.ncols());
    let names = ["I~", "J~", "K~"];
    let mut defects = Vec::new();
    let mut push = |name: String, defect: f64| defects.push(NamedDefect { name, defect });
    for (n, m) in names.iter().zip(ops) {
        push(format!("{n}^2 = -Id"), max_abs(&(m * m + &id)));
    }
    push("I~J~ = K~".into(), max_abs(&(i * j - k)));
    push("J~I~ = -K~".into(), max_abs(&(j * i + k)));
    push("I~J~ + J~I~ = 0".into(), max_abs(&(i * j + j * i)));
    for (n, d) in names.iter().zip(ops_defect) {
        push(format!("slice invariant under {n}"), *d);
    }
    for (n, m) in names.iter().zip(ops) {
        push(format!("g(L.,L.) = g for L = {n}"), max_abs(&(m.transpose() * gram * m - gram)));
    }
    ModuliStructureReport { dimension: i.nrows(), tol, defects }
}

pub fn verify_moduli_structure(tb: &TangentBasis, tol: f64) -> ModuliStructureReport {
    structure_defects(&tb.ops, &tb.gram, &tb.ops_defect, tol)
}

/// `ω̃(a₁, a₂) = ∫ ω_L ∧ tr(a₁ ∧ a₂)` for slice elements.
pub fn moduli_hermitian_form(tb: &TangentBasis, a1: &LatticeField, a2: &LatticeField, tol: f64) -> Result<f64> {
    for a in [a1, a2] {
        let (_, rest) = tb.project(a)?;
        let rel = rest / l2_norm(a).max(f64::MIN_POSITIVE);
        if rel > tol {
            return Err(Error::NotInSlice(rel));
        }
    }
    Ok(hermitian_pairing(&tb.omega, a1, a2))
}

/// `Σ_{μ<ν} ω_{μν} ∫ tr(a₁_μ a₂_ν − a₁_ν a₂_μ)` with `tr(T_a T_b) = −δ_ab`.
pub fn hermitian_pairing(omega: &ConstForm, a1: &LatticeField, a2: &LatticeField) -> f64 {
    let sites = a1.lattice().sites() as f64;
    let dot = |x: usize, y: usize| -> f64 { a1.component(x).iter().zip(a2.component(y)).map(|(p, q)| p * q).sum() };
    let mut total = 0.0;
    for &(mask, w) in &omega.coeffs {
        let idx = basis::indices(mask);
        let (mu, nu) = (idx[0], idx[1]);
        total += w * -(dot(mu, nu) - dot(nu, mu));
    }
    total / sites
}

/// Fit `ω̃(a₁,a₂) = s · g(L̃a₁, a₂)` over random slice pairs; returns the
/// sign, whether it was the same for every pair, and the worst relative
/// deviation (relative to `‖a₁‖‖a₂‖`).
pub fn moduli_form_consistency<R: Rng>(tb: &TangentBasis, pairs: usize, rng: &mut R) -> Result<(f64, bool, f64)> {
    let mut sign = 0.0;
    let mut consistent = true;
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let c1: Vec<f64> = (0..tb.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c2: Vec<f64> = (0..tb.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (a1, a2) = (tb.combine(&c1), tb.combine(&c2));
        let w = moduli_hermitian_form(tb, &a1, &a2, 1e-8)?;
        let g = l2_inner(&induced_structure(&tb.structure, &a1)?, &a2)?;
        let scale = l2_norm(&a1) * l2_norm(&a2);
        if g.abs() > 1e-6 * scale {
            let s = (w / g).signum();
            if sign == 0.0 {
                sign = s;
            } else if s != sign {
                consistent = false;
            }
        }
        worst = worst.max((w - sign * g).abs() / scale);
    }
    Ok((sign, consistent, worst))
}

/// `‖d*_A a − Λ d^c_{A,L} a − ∗(d^c_L ω_L ∧ a)‖`.
pub fn coulomb_defect(conn: &Connection, l: &RatMat4, a: &LatticeField, orientation: f64) -> Result<f64> {
    let omega = flat_hermitian_form(l)?;
    let lm = mat_f64(l);
    let lhs = cov_codiff(Some(conn), a)?;
    let lam = lambda(&twisted_cov_d(Some(conn), &lm, a)?, &omega)?;
    let third = torsion_term(l, a, orientation)?;
    let third = LatticeField::from_data(a.lattice(), 0, third.data().to_vec())?;
    Ok(l2_norm(&lhs.axpy(-1.0, &lam).axpy(-1.0, &third)))
}

/// Largest `|⟨b, d_A ξ⟩|` over the basis for the given gauge parameters.
pub fn gauge_overlap(tb: &TangentBasis, xis: &[LatticeField]) -> Result<f64> {
    let mut worst = 0.0f64;
    for xi in xis {
        let dxi = cov_d(Some(&tb.base), xi)?;
        let n = l2_norm(&dxi).max(f64::MIN_POSITIVE);
        for b in &tb.basis {
            worst = worst.max(l2_inner(b, &dxi)?.abs() / n);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::HypercomplexFrame;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(grid: usize, rank: usize) -> (TorusSpec, Connection) {
        let spec = TorusSpec::new(grid, rank, HypercomplexFrame::left()).unwrap();
        let conn = Connection::trivial(&spec.lattice());
        (spec, conn)
    }

    #[test]
    fn trivial_connection_slice_has_constant_forms() {
        let (spec, conn) = setup(4, 2);
        let i = spec.frame.structures()[0].clone();
        let tb = horizontal_slice(&spec, &conn, &i, 1e-10).unwrap();
        assert_eq!(tb.dim(), 12);
        assert!(tb.slice_defect < 1e-12);
        assert!(verify_moduli_structure(&tb, 1e-10).passed());
    }

    #[test]
    fn dense_route_agrees_with_modes() {
        let (spec, conn) = setup(3, 2);
        let i = spec.frame.structures()[0].clone();
        let modes = horizontal_slice_via(&spec, &conn, &i, 1e-10, SliceRoute::Modes).unwrap();
        let dense = horizontal_slice_via(&spec, &conn, &i, 1e-10, SliceRoute::Dense).unwrap();
        assert_eq!(dense.dim(), 12);
        assert!(subspace_distance(&modes, &dense).unwrap() < 1e-10);
    }

    #[test]
    fn symbol_matches_field_operator() {
        // apply the field operator to cos and sin of a mode and read off the symbol at the origin
        let spec = TorusSpec::new(5, 2, HypercomplexFrame::left()).unwrap();
        let lat = spec.lattice();
        let conn = Connection::constant(&lat, &[vec![0.3, 0.0, 0.1], vec![0.0, -0.2, 0.0], vec![0.5, 0.0, 0.0], vec![0.0, 0.0, 0.7]]).unwrap();
        let l = spec.frame.structures()[1].clone();
        let lm = mat_f64(&l);
        let sd: [ConstForm; 3] = spec.frame.structures().map(|s| flat_hermitian_form(s).unwrap());
        let omega = flat_hermitian_form(&l).unwrap();
        let k = [1, -2, 0, 1];
        let sym = mode_symbol(&conn, &lm, &sd, &omega, &k);
        let d = lat.dim();
        let sites = lat.sites();
        for col in 0..4 * d {
            let mut re = LatticeField::zero(&lat, 1);
            let mut im = LatticeField::zero(&lat, 1);
            for s in 0..sites {
                let ph = lat.spectral.phase(&k, s);
                re.value_mut(col / d, s)[col % d] = ph.cos();
                im.value_mut(col / d, s)[col % d] = ph.sin();
            }
            let cre = operator_column(&conn, &lm, &sd, &omega, &re).unwrap();
            let cim = operator_column(&conn, &lm, &sd, &omega, &im).unwrap();
            for row in 0..4 * d {
                let at = (row / d) * sites * d + row % d;
                let probe = Complex64::new(cre[at], cim[at]);
                assert!((probe - sym[(row, col)]).norm() < 1e-10, "row {row} col {col}");
            }
        }
    }

    #[test]
    fn moduli_form_sign_on_constant_forms() {
        let (spec, conn) = setup(3, 2);
        let i = spec.frame.structures()[0].clone();
        let tb = horizontal_slice(&spec, &conn, &i, 1e-10).unwrap();
        let lat = spec.lattice();
        let xi = vec![0.0, 0.0, 1.0];
        let z = vec![0.0; 3];
        let a1 = LatticeField::constant(&lat, 1, &[xi.clone(), z.clone(), z.clone(), z.clone()]).unwrap();
        let a2 = LatticeField::constant(&lat, 1, &[z.clone(), xi, z.clone(), z]).unwrap();
        // tr(ξξ) = −1 for a unit generator, so ∫ ω_I ∧ tr(a₁ ∧ a₂) = −1
        let w = moduli_hermitian_form(&tb, &a1, &a2, 1e-10).unwrap();
        assert!((w + 1.0).abs() < 1e-14);
        assert!(moduli_hermitian_form(&tb, &a1, &a1, 1e-10).unwrap().abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (sign, consistent, worst) = moduli_form_consistency(&tb, 20, &mut rng).unwrap();
        assert_eq!(sign, crate::conventions::MODULI_FORM_SIGN);
        assert!(consistent && worst < 1e-12);
    }

    #[test]
    fn negated_k_breaks_only_the_product_identities() {
        let (spec, conn) = setup(3, 2);
        let i = spec.frame.structures()[0].clone();
        let tb = horizontal_slice(&spec, &conn, &i, 1e-10).unwrap();
        let mut ops = tb.ops.clone();
        ops[2] = -&ops[2];
        let rep = structure_defects(&ops, &tb.gram, &tb.ops_defect, 1e-10);
        let failed: Vec<&str> = rep.failures().iter().map(|d| d.name.as_str()).collect();
        assert_eq!(failed, vec!["I~J~ = K~", "J~I~ = -K~"]);
    }

    #[test]
    fn non_asd_connection_is_rejected() {
        let spec = TorusSpec::new(3, 2, HypercomplexFrame::left()).unwrap();
        let lat = spec.lattice();
        let conn = Connection::constant(&lat, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        let i = spec.frame.structures()[0].clone();
        assert!(horizontal_slice(&spec, &conn, &i, 1e-10).is_err());
    }
}
