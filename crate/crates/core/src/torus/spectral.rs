// SPDX-License-Identifier: Apache-2.0

//! Fourier differentiation on the periodic grid `(ℤ/N)⁴` of the unit torus.
//!
//! Data are stored site-major with `channels` values per site; the site index
//! is row-major in `(x₀, x₁, x₂, x₃)` with `x₃` fastest. On even grids the
//! Nyquist frequency has no real derivative and is excluded from the field
//! space altogether.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `√−1 κ_k` for each frequency index, zero at Nyquist.
    multiplier: Vec<Complex64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

/// Signed frequency of index `k`, or `None` at Nyquist.
pub fn signed_frequency(k: usize, n: usize) -> Option<i64> {
    if 2 * k == n {
        None
    } else if 2 * k < n {
        Some(k as i64)
    } else {
        Some(k as i64 - n as i64)
    }
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let multiplier = (0..n)
            .map(|k| match signed_frequency(k, n) {
                Some(m) => Complex64::new(0.0, 2.0 * PI * m as f64),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n), multiplier }
    }

    pub fn grid(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> usize {
        self.n.pow(4)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow(3 - axis as u32)
    }

    pub fn coords(&self, site: usize) -> [usize; 4] {
        let n = self.n;
        [site / (n * n * n), (site / (n * n)) % n, (site / n) % n, site % n]
    }

    /// Apply `f` to every line along `axis` of every channel, in spectral space.
    fn along_axis(&self, data: &[f64], channels: usize, axis: usize, f: impl Fn(usize, &mut Complex64)) -> Vec<f64> {
        let n = self.n;
        let stride = self.stride(axis);
        let mut out = vec![0.0; data.len()];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len()];
        for site in 0..self.sites() {
            if self.coords(site)[axis] != 0 {
                continue;
            }
            for ch in 0..channels {
                let at = |j: usize| (site + j * stride) * channels + ch;
                let first = data[at(0)];
                if (1..n).all(|j| data[at(j)] == first) {
                    // constant line: the transform has only the zero mode
                    let mut gain = Complex64::new(1.0, 0.0);
                    f(0, &mut gain);
                    let v = first * gain.re;
                    for j in 0..n {
                        out[at(j)] = v;
                    }
                    continue;
                }
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = Complex64::new(data[at(j)], 0.0);
                }
                self.forward.process_with_scratch(&mut buf, &mut scratch);
                for (k, b) in buf.iter_mut().enumerate() {
                    f(k, b);
                }
                self.inverse.process_with_scratch(&mut buf, &mut scratch);
                for (j, b) in buf.iter().enumerate() {
                    out[at(j)] = b.re / n as f64;
                }
            }
        }
        out
    }

    /// `∂/∂x_axis` on the unit torus.
    pub fn derivative(&self, data: &[f64], channels: usize, axis: usize) -> Vec<f64> {
        self.along_axis(data, channels, axis, |k, b| *b *= self.multiplier[k])
    }

    /// Orthogonal projection onto the band-limited space (no Nyquist modes).
    pub fn band_limit(&self, data: &[f64], channels: usize) -> Vec<f64> {
        if self.n % 2 == 1 {
            return data.to_vec();
        }
        let nyq = self.n / 2;
        (0..4).fold(data.to_vec(), |acc, axis| {
            self.along_axis(&acc, channels, axis, |k, b| {
                if k == nyq {
                    *b = Complex64::new(0.0, 0.0);
                }
            })
        })
    }

    /// In-place 4-dimensional DFT of complex site-major data; the inverse
    /// includes the `1/N⁴` normalization.
    pub fn fft4(&self, data: &mut [Complex64], channels: usize, inverse: bool) {
        let n = self.n;
        let plan = if inverse { &self.inverse } else { &self.forward };
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for axis in 0..4 {
            let stride = self.stride(axis);
            for site in (0..self.sites()).filter(|&s| self.coords(s)[axis] == 0) {
                for ch in 0..channels {
                    let at = |j: usize| (site + j * stride) * channels + ch;
                    for (j, b) in buf.iter_mut().enumerate() {
                        *b = data[at(j)];
                    }
                    plan.process_with_scratch(&mut buf, &mut scratch);
                    for (j, b) in buf.iter().enumerate() {
                        data[at(j)] = *b;
                    }
                }
            }
        }
        if inverse {
            let norm = 1.0 / self.sites() as f64;
            data.iter_mut().for_each(|v| *v *= norm);
        }
    }

    /// Frequency vectors of the band-limited modes, zero first.
    pub fn modes(&self) -> Vec<[i64; 4]> {
        let ks: Vec<i64> = (0..self.n).filter_map(|k| signed_frequency(k, self.n)).collect();
        let mut out = Vec::with_capacity(ks.len().pow(4));
        for &a in &ks {
            for &b in &ks {
                for &c in &ks {
                    for &d in &ks {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    /// `2π k · x` at the given site.
    pub fn phase(&self, k: &[i64; 4], site: usize) -> f64 {
        let x = self.coords(site);
        let dot: i64 = (0..4).map(|m| k[m] * x[m] as i64).sum();
        2.0 * PI * dot as f64 / self.n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_a_fourier_mode() {
        let sp = Spectral::new(5);
        let k = [1, -2, 0, 1];
        let data: Vec<f64> = (0..sp.sites()).map(|s| sp.phase(&k, s).sin()).collect();
        for axis in 0..4 {
            let d = sp.derivative(&data, 1, axis);
            for s in 0..sp.sites() {
                let want = 2.0 * PI * k[axis] as f64 * sp.phase(&k, s).cos();
                assert!((d[s] - want).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn constants_have_exactly_zero_derivative() {
        let sp = Spectral::new(4);
        let data = vec![0.3; sp.sites() * 2];
        assert!(sp.derivative(&data, 2, 1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nyquist_is_removed_on_even_grids() {
        let sp = Spectral::new(4);
        let k = [2, 0, 0, 1];
        let data: Vec<f64> = (0..sp.sites()).map(|s| sp.phase(&k, s).cos()).collect();
        assert!(sp.band_limit(&data, 1).iter().all(|v| v.abs() < 1e-14));
        assert_eq!(sp.modes().len(), 81);
        assert_eq!(Spectral::new(3).modes().len(), 81);
    }
}
