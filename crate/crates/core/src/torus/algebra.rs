// SPDX-License-Identifier: Apache-2.0

//! Orthonormal bases of su(n) and u(n) in real coordinates.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

/// Structure constants below this size are round-off and are set to zero, so
/// that brackets of commuting elements vanish exactly.
const CLEAN: f64 = 1e-14;

/// `T_a = √−1 λ_a / √2` for the generalized Gell-Mann matrices `λ_a`, so that
/// `−tr(T_a T_b) = δ_ab`. With `center` the element `T₀ = √−1 · id / √n` is
/// prepended and the algebra is u(n).
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    n: usize,
    center: bool,
    basis: Vec<CMat>,
    /// `[T_a, T_b] = Σ_c f[a][b][c] T_c`, flattened.
    structure: Vec<f64>,
}

impl LieAlgebra {
    pub fn su(n: usize) -> Self {
        Self::build(n, false)
    }

    pub fn u(n: usize) -> Self {
        Self::build(n, true)
    }

    fn build(n: usize, center: bool) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = Vec::new();
        if center {
            basis.push(CMat::identity(n, n) * (i / (n as f64).sqrt()));
        }
        for j in 0..n {
            for k in j + 1..n {
                let mut m = CMat::zeros(n, n);
                m[(j, k)] = i * s;
                m[(k, j)] = i * s;
                basis.push(m);
                let mut m = CMat::zeros(n, n);
                m[(j, k)] = Complex64::new(s, 0.0);
                m[(k, j)] = Complex64::new(-s, 0.0);
                basis.push(m);
            }
        }
        for l in 1..n {
            let c = (2.0 / (l * (l + 1)) as f64).sqrt() * s;
            let mut m = CMat::zeros(n, n);
            for j in 0..l {
                m[(j, j)] = i * c;
            }
            m[(l, l)] = i * (-(l as f64) * c);
            basis.push(m);
        }
        let d = basis.len();
        let mut structure = vec![0.0; d * d * d];
        for a in 0..d {
            for b in a + 1..d {
                let br = &basis[a] * &basis[b] - &basis[b] * &basis[a];
                for c in 0..d {
                    let v = -(&br * &basis[c]).trace().re;
                    let v = if v.abs() < CLEAN { 0.0 } else { v };
                    structure[(a * d + b) * d + c] = v;
                    structure[(b * d + a) * d + c] = -v;
                }
            }
        }
        Self { n, center, basis, structure }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn has_center(&self) -> bool {
        self.center
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generator(&self, a: usize) -> &CMat {
        &self.basis[a]
    }

    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        let d = self.dim();
        self.structure[(a * d + b) * d + c]
    }

    /// Coordinates of `[x, y]`, accumulated into `out`.
    pub fn bracket_into(&self, x: &[f64], y: &[f64], scale: f64, out: &mut [f64]) {
        let d = self.dim();
        for a in 0..d {
            if x[a] == 0.0 && y[a] == 0.0 {
                continue;
            }
            for b in a + 1..d {
                let w = x[a] * y[b] - x[b] * y[a];
                if w == 0.0 {
                    continue;
                }
                let row = &self.structure[(a * d + b) * d..(a * d + b + 1) * d];
                for (o, f) in out.iter_mut().zip(row) {
                    if *f != 0.0 {
                        *o += scale * f * w;
                    }
                }
            }
        }
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.bracket_into(x, y, 1.0, &mut out);
        out
    }

    /// Matrix of `ad_x` in the coordinate basis: `(ad_x)[c][b] = Σ_a f_abc x_a`.
    pub fn ad(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |c, b| (0..d).map(|a| self.f(a, b, c) * x[a]).sum())
    }

    pub fn to_matrix(&self, x: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for (c, t) in x.iter().zip(&self.basis) {
            if *c != 0.0 {
                m += t * Complex64::new(*c, 0.0);
            }
        }
        m
    }

    /// Coordinates of the orthogonal projection of `m` onto the algebra, and
    /// the Frobenius norm of the discarded part.
    pub fn from_matrix(&self, m: &CMat) -> (Vec<f64>, f64) {
        let x: Vec<f64> = self.basis.iter().map(|t| -(m * t).trace().re).collect();
        let defect = (m - self.to_matrix(&x)).norm();
        (x, defect)
    }

    /// `tr` of the element with coordinates `x`; nonzero only through `T₀`.
    pub fn trace(&self, x: &[f64]) -> Complex64 {
        if self.center {
            Complex64::new(0.0, x[0] * (self.n as f64).sqrt())
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}
