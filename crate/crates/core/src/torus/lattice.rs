// SPDX-License-Identifier: Apache-2.0

//! Lie-algebra-valued differential forms on the periodic grid.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::algebra::LieAlgebra;
use super::spectral::Spectral;
use crate::exterior::basis;
use crate::quaternion::HypercomplexFrame;
use crate::{Error, Result};

/// Grid size, bundle rank and the constant hypercomplex frame of the flat
/// hyperkähler torus.
#[derive(Clone, Debug)]
pub struct TorusSpec {
    pub grid: usize,
    pub rank: usize,
    pub frame: HypercomplexFrame,
    /// Values in u(n) instead of su(n).
    pub center: bool,
}

impl TorusSpec {
    pub fn new(grid: usize, rank: usize, frame: HypercomplexFrame) -> Result<Self> {
        if grid < 3 {
            return Err(Error::InvalidParameter(format!("grid size {grid} < 3")));
        }
        if rank < 2 {
            return Err(Error::InvalidParameter(format!("bundle rank {rank} < 2")));
        }
        Ok(Self { grid, rank, frame, center: false })
    }

    pub fn with_center(mut self) -> Self {
        self.center = true;
        self
    }

    pub fn lattice(&self) -> Arc<Lattice> {
        let alg = if self.center { LieAlgebra::u(self.rank) } else { LieAlgebra::su(self.rank) };
        Lattice::new(self.grid, alg)
    }
}

/// Grid plus Lie algebra; shared by all fields that can be combined.
#[derive(Debug)]
pub struct Lattice {
    pub spectral: Spectral,
    pub algebra: LieAlgebra,
}

impl Lattice {
    pub fn new(grid: usize, algebra: LieAlgebra) -> Arc<Self> {
        Arc::new(Self { spectral: Spectral::new(grid), algebra })
    }

    pub fn grid(&self) -> usize {
        self.spectral.grid()
    }

    pub fn sites(&self) -> usize {
        self.spectral.sites()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn same(&self, other: &Lattice) -> bool {
        self.grid() == other.grid()
            && self.algebra.rank() == other.algebra.rank()
            && self.algebra.has_center() == other.algebra.has_center()
    }
}

/// A `p`-form with values in the Lie algebra, stored in real coordinates.
///
/// Layout: `data[((c · sites) + s) · dim + a]` for component `c` (sorted index
/// masks of degree `p`), site `s` and generator `a`.
#[derive(Clone, Debug)]
pub struct LatticeField {
    lattice: Arc<Lattice>,
    degree: usize,
    data: Vec<f64>,
}

impl LatticeField {
    pub fn zero(lattice: &Arc<Lattice>, degree: usize) -> Self {
        let len = basis::masks(degree).len() * lattice.sites() * lattice.dim();
        Self { lattice: lattice.clone(), degree, data: vec![0.0; len] }
    }

    pub fn from_data(lattice: &Arc<Lattice>, degree: usize, data: Vec<f64>) -> Result<Self> {
        let want = basis::masks(degree).len() * lattice.sites() * lattice.dim();
        if data.len() != want {
            return Err(Error::LatticeMismatch(format!("expected {want} values, got {}", data.len())));
        }
        Ok(Self { lattice: lattice.clone(), degree, data })
    }

    /// Constant field with the given algebra coordinates per component.
    pub fn constant(lattice: &Arc<Lattice>, degree: usize, values: &[Vec<f64>]) -> Result<Self> {
        let comps = basis::masks(degree).len();
        if values.len() != comps || values.iter().any(|v| v.len() != lattice.dim()) {
            return Err(Error::LatticeMismatch("constant field has the wrong shape".into()));
        }
        let mut f = Self::zero(lattice, degree);
        for (c, v) in values.iter().enumerate() {
            for s in 0..lattice.sites() {
                f.value_mut(c, s).copy_from_slice(v);
            }
        }
        Ok(f)
    }

    /// Band-limited field with uniform random coordinates of size `amplitude`.
    pub fn random<R: Rng>(lattice: &Arc<Lattice>, degree: usize, amplitude: f64, rng: &mut R) -> Self {
        let mut f = Self::zero(lattice, degree);
        for v in f.data.iter_mut() {
            *v = amplitude * rng.random_range(-1.0..1.0);
        }
        f.band_limited()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn components(&self) -> Vec<u8> {
        basis::masks(self.degree)
    }

    pub fn component_index(&self, mask: u8) -> Option<usize> {
        basis::masks(self.degree).iter().position(|&m| m == mask)
    }

    fn block(&self) -> usize {
        self.lattice.sites() * self.lattice.dim()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let b = self.block();
        &self.data[c * b..(c + 1) * b]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let b = self.block();
        &mut self.data[c * b..(c + 1) * b]
    }

    pub fn value(&self, c: usize, site: usize) -> &[f64] {
        let d = self.lattice.dim();
        let at = c * self.block() + site * d;
        &self.data[at..at + d]
    }

    pub fn value_mut(&mut self, c: usize, site: usize) -> &mut [f64] {
        let d = self.lattice.dim();
        let at = c * self.block() + site * d;
        &mut self.data[at..at + d]
    }

    pub fn check_same_lattice(&self, other: &LatticeField) -> Result<()> {
        if !self.lattice.same(&other.lattice) {
            return Err(Error::LatticeMismatch("fields live on different lattices".into()));
        }
        Ok(())
    }

    pub fn check_compatible(&self, other: &LatticeField) -> Result<()> {
        self.check_same_lattice(other)?;
        if self.degree != other.degree {
            return Err(Error::WrongDegree { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: f64, other: &LatticeField) -> Self {
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o += s * v;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn band_limited(&self) -> Self {
        let d = self.lattice.dim();
        let mut out = self.clone();
        for c in 0..self.components().len() {
            let limited = self.lattice.spectral.band_limit(self.component(c), d);
            out.component_mut(c).copy_from_slice(&limited);
        }
        out
    }

    /// Subtract the site average of every component.
    pub fn zero_mean(&self) -> Self {
        let (s, d) = (self.lattice.sites(), self.lattice.dim());
        let mut out = self.clone();
        for c in 0..self.components().len() {
            let block = out.component_mut(c);
            for a in 0..d {
                let mean = (0..s).map(|i| block[i * d + a]).sum::<f64>() / s as f64;
                (0..s).for_each(|i| block[i * d + a] -= mean);
            }
        }
        out
    }

    /// Discrete Fourier coefficients, in the same layout as the real data.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let d = self.lattice.dim();
        let mut out: Vec<Complex64> = self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let b = self.block();
        for chunk in out.chunks_mut(b) {
            self.lattice.spectral.fft4(chunk, d, false);
        }
        out
    }

    /// Inverse of [`Self::spectrum`]; fails if the result is not real.
    pub fn from_spectrum(lattice: &Arc<Lattice>, degree: usize, spectrum: &[Complex64]) -> Result<Self> {
        let d = lattice.dim();
        let mut buf = spectrum.to_vec();
        let b = lattice.sites() * d;
        for chunk in buf.chunks_mut(b) {
            lattice.spectral.fft4(chunk, d, true);
        }
        let scale = buf.iter().fold(1.0f64, |m, v| m.max(v.re.abs()));
        if buf.iter().any(|v| v.im.abs() > 1e-10 * scale) {
            return Err(Error::LatticeMismatch("spectrum is not Hermitian-symmetric".into()));
        }
        Self::from_data(lattice, degree, buf.iter().map(|v| v.re).collect())
    }
}

/// A unitary connection `d + A` on the trivial bundle.
#[derive(Clone, Debug)]
pub struct Connection {
    a: LatticeField,
}

impl Connection {
    pub fn new(a: LatticeField) -> Result<Self> {
        if a.degree() != 1 {
            return Err(Error::WrongDegree { expected: 1, found: a.degree() });
        }
        Ok(Self { a })
    }

    pub fn trivial(lattice: &Arc<Lattice>) -> Self {
        Self { a: LatticeField::zero(lattice, 1) }
    }

    pub fn constant(lattice: &Arc<Lattice>, values: &[Vec<f64>]) -> Result<Self> {
        Self::new(LatticeField::constant(lattice, 1, values)?)
    }

    pub fn field(&self) -> &LatticeField {
        &self.a
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        self.a.lattice()
    }

    /// Whether `A` takes the same value at every site.
    pub fn is_constant(&self) -> bool {
        let (s, d) = (self.lattice().sites(), self.lattice().dim());
        (0..4).all(|c| {
            let block = self.a.component(c);
            (1..s).all(|i| block[i * d..(i + 1) * d] == block[..d])
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.a.data().iter().all(|&v| v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_validation() {
        assert!(TorusSpec::new(2, 2, HypercomplexFrame::left()).is_err());
        assert!(TorusSpec::new(4, 1, HypercomplexFrame::left()).is_err());
        assert!(TorusSpec::new(3, 2, HypercomplexFrame::left()).is_ok());
    }

    #[test]
    fn spectrum_roundtrip() {
        let lat = TorusSpec::new(4, 2, HypercomplexFrame::left()).unwrap().lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = LatticeField::random(&lat, 2, 1.0, &mut rng);
        let back = LatticeField::from_spectrum(&lat, 2, &f.spectrum()).unwrap();
        let err = f.axpy(-1.0, &back).max_abs();
        assert!(err < 1e-13);
    }

    #[test]
    fn random_fields_are_band_limited() {
        let lat = TorusSpec::new(4, 2, HypercomplexFrame::left()).unwrap().lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = LatticeField::random(&lat, 1, 1.0, &mut rng);
        let spec = f.spectrum();
        let d = lat.dim();
        for c in 0..4 {
            for s in 0..lat.sites() {
                if lat.spectral.coords(s).contains(&2) {
                    for a in 0..d {
                        assert!(spec[(c * lat.sites() + s) * d + a].norm() < 1e-12);
                    }
                }
            }
        }
    }
}
