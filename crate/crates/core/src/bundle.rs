// SPDX-License-Identifier: Apache-2.0

//! Degrees, slopes and slope-stability verdicts for explicit curvature data on
//! the unit torus.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exterior::{basis, RationalForm};
use crate::torus::spectral::Spectral;
use crate::torus::LatticeField;
use crate::{Error, Result};

/// Relative size of a real part tolerated in an imaginary curvature.
const IMAGINARY_TOL: f64 = 1e-12;

/// A complex scalar `p`-form sampled on the `N⁴` grid of the unit torus.
#[derive(Clone, Debug, PartialEq)]
pub struct GridForm {
    grid: usize,
    degree: usize,
    /// `values[c · N⁴ + s]`, components in sorted mask order.
    values: Vec<Complex64>,
}

impl GridForm {
    pub fn zero(grid: usize, degree: usize) -> Self {
        Self { grid, degree, values: vec![Complex64::new(0.0, 0.0); basis::masks(degree).len() * grid.pow(4)] }
    }

    pub fn constant(grid: usize, degree: usize, coeffs: &[(u8, Complex64)]) -> Result<Self> {
        let mut f = Self::zero(grid, degree);
        let sites = f.sites();
        for &(mask, c) in coeffs {
            let comp = f.component_of(mask)?;
            f.values[comp * sites..(comp + 1) * sites].iter_mut().for_each(|v| *v += c);
        }
        Ok(f)
    }

    pub fn from_fn(grid: usize, degree: usize, mut f: impl FnMut(u8, [usize; 4]) -> Complex64) -> Self {
        let sp = Spectral::new(grid);
        let mut out = Self::zero(grid, degree);
        let sites = out.sites();
        for (c, mask) in basis::masks(degree).into_iter().enumerate() {
            for s in 0..sites {
                out.values[c * sites + s] = f(mask, sp.coords(s));
            }
        }
        out
    }

    /// Constant form from an exact form with constant coefficients.
    pub fn from_rational(form: &RationalForm, grid: usize) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (mask, f) in form.terms() {
            let g = f
                .as_constant()
                .ok_or_else(|| Error::InvalidParameter("torus forms need constant coefficients".into()))?;
            let z = Complex64::new(g.re.to_f64().unwrap_or(f64::NAN), g.im.to_f64().unwrap_or(f64::NAN));
            coeffs.push((mask, z));
        }
        Self::constant(grid, form.degree(), &coeffs)
    }

    /// `tr F` of a u(n)- or su(n)-valued form: the curvature of `det E`.
    pub fn trace_of(field: &LatticeField) -> Self {
        let lat = field.lattice();
        let mut out = Self::zero(lat.grid(), field.degree());
        let sites = lat.sites();
        for c in 0..field.components().len() {
            for s in 0..sites {
                out.values[c * sites + s] = lat.algebra.trace(field.value(c, s));
            }
        }
        out
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn sites(&self) -> usize {
        self.grid.pow(4)
    }

    fn component_of(&self, mask: u8) -> Result<usize> {
        if mask & !0b1111 != 0 || basis::degree(mask) != self.degree {
            return Err(Error::WrongDegree { expected: self.degree, found: basis::degree(mask & 0b1111) });
        }
        Ok(basis::masks(self.degree).iter().position(|&m| m == mask).unwrap_or(0))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::LatticeMismatch(format!("grids {} and {}", self.grid, other.grid)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(Error::WrongDegree { expected: self.degree, found: other.degree });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.degree + other.degree > 4 {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let sites = self.sites();
        let mut out = Self::zero(self.grid, self.degree + other.degree);
        for (a, ma) in basis::masks(self.degree).into_iter().enumerate() {
            for (b, mb) in basis::masks(other.degree).into_iter().enumerate() {
                if let Some(sign) = basis::wedge_sign(ma, mb) {
                    let t = out.component_of(ma | mb)?;
                    for s in 0..sites {
                        let v = self.values[a * sites + s] * other.values[b * sites + s] * sign as f64;
                        out.values[t * sites + s] += v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Spectral exterior derivative (band-limited).
    pub fn exterior_d(&self) -> Result<Self> {
        if self.degree >= 4 {
            return Err(Error::DegreeOverflow(self.degree, 1));
        }
        let sp = Spectral::new(self.grid);
        let sites = self.sites();
        let mut out = Self::zero(self.grid, self.degree + 1);
        for (c, src) in basis::masks(self.degree).into_iter().enumerate() {
            let block = &self.values[c * sites..(c + 1) * sites];
            let re: Vec<f64> = block.iter().map(|v| v.re).collect();
            let im: Vec<f64> = block.iter().map(|v| v.im).collect();
            for mu in (0..4).filter(|m| src & (1 << m) == 0) {
                let sign = basis::wedge_sign(1 << mu, src).unwrap_or(0) as f64;
                let t = out.component_of(src | (1 << mu))?;
                let (dr, di) = (sp.derivative(&re, 1, mu), sp.derivative(&im, 1, mu));
                for s in 0..sites {
                    out.values[t * sites + s] += Complex64::new(dr[s], di[s]) * sign;
                }
            }
        }
        Ok(out)
    }

    /// Site average of the top coefficient of a 4-form.
    pub fn integral(&self) -> Result<Complex64> {
        if self.degree != 4 {
            return Err(Error::WrongDegree { expected: 4, found: self.degree });
        }
        Ok(self.values.iter().sum::<Complex64>() / self.sites() as f64)
    }
}

/// Parse a constant form such as `-2*pi*i*dx01` or `dx01 + dx23`.
///
/// Each term is an optional product of factors (decimal or `p/q` rationals,
/// `pi`, `i`) followed by `dx` and the sorted or unsorted axis digits.
pub fn parse_form_spec(spec: &str, grid: usize) -> Result<GridForm> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty form".into()));
    }
    let mut terms: Vec<(u8, Complex64, usize)> = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for end in 1..=bytes.len() {
        let split = end == bytes.len() || ((bytes[end] == b'+' || bytes[end] == b'-') && bytes[end - 1] != b'e');
        if split {
            terms.push(parse_term(&compact[start..end])?);
            start = end;
        }
    }
    let degrees: Vec<usize> = terms.iter().map(|t| t.2).filter(|&d| d != usize::MAX).collect();
    let degree = *degrees.first().unwrap_or(&2);
    if degrees.iter().any(|&d| d != degree) {
        return Err(Error::Parse(format!("mixed degrees in {spec}")));
    }
    let coeffs: Vec<(u8, Complex64)> = terms.into_iter().filter(|t| t.2 != usize::MAX).map(|t| (t.0, t.1)).collect();
    GridForm::constant(grid, degree, &coeffs)
}

fn parse_term(term: &str) -> Result<(u8, Complex64, usize)> {
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1.0, &term[1..]),
        Some(b'+') => (1.0, &term[1..]),
        _ => (1.0, term),
    };
    let bad = || Error::Parse(format!("bad form term {term:?}"));
    if body == "0" {
        return Ok((0, Complex64::new(0.0, 0.0), usize::MAX));
    }
    let (coef, dx) = match body.rfind("dx") {
        Some(at) => (body[..at].trim_end_matches('*'), &body[at + 2..]),
        None => return Err(bad()),
    };
    let mut idx = Vec::new();
    for ch in dx.chars() {
        let d = ch.to_digit(10).filter(|&d| d < 4).ok_or_else(bad)? as usize;
        if idx.contains(&d) {
            return Ok((0, Complex64::new(0.0, 0.0), usize::MAX));
        }
        idx.push(d);
    }
    if idx.is_empty() {
        return Err(bad());
    }
    let mut c = Complex64::new(sign * basis::perm_sign(&idx) as f64, 0.0);
    for factor in coef.split('*').filter(|f| !f.is_empty()) {
        c *= parse_factor(factor).ok_or_else(bad)?;
    }
    Ok((basis::mask_of(&idx), c, idx.len()))
}

fn parse_factor(f: &str) -> Option<Complex64> {
    match f {
        "pi" => return Some(Complex64::new(PI, 0.0)),
        "i" => return Some(Complex64::new(0.0, 1.0)),
        _ => {}
    }
    for suffix in ["pi", "i"] {
        if let Some(num) = f.strip_suffix(suffix) {
            if !num.is_empty() {
                return Some(parse_factor(num)? * parse_factor(suffix)?);
            }
        }
    }
    if let Some((n, d)) = f.split_once('/') {
        return Some(Complex64::new(n.parse::<f64>().ok()? / d.parse::<f64>().ok()?, 0.0));
    }
    f.parse::<f64>().ok().map(|v| Complex64::new(v, 0.0))
}

/// `(√−1 / 2π) ∫ F ∧ ω` over a torus of the given volume.
pub fn degree(f: &GridForm, omega: &GridForm, volume: f64) -> Result<f64> {
    for form in [f, omega] {
        if form.degree() != 2 {
            return Err(Error::WrongDegree { expected: 2, found: form.degree() });
        }
    }
    if !volume.is_finite() || volume <= 0.0 {
        return Err(Error::InvalidParameter(format!("volume must be positive, got {volume}")));
    }
    let re_max = f.values.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
    let scale = f.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if re_max > IMAGINARY_TOL * scale.max(1.0) {
        return Err(Error::NotImaginary(re_max));
    }
    let top = f.wedge(omega)?.integral()? * volume;
    let value = (Complex64::new(0.0, 1.0) * top / (2.0 * PI)).re;
    if !value.is_finite() {
        return Err(Error::NonFinite("degree"));
    }
    Ok(value)
}

/// A computed degree with its inputs.
#[derive(Clone, Debug)]
pub struct DegreeDatum {
    pub f: GridForm,
    pub omega: GridForm,
    pub value: f64,
}

impl DegreeDatum {
    pub fn new(f: GridForm, omega: GridForm, volume: f64) -> Result<Self> {
        let value = degree(&f, &omega, volume)?;
        Ok(Self { f, omega, value })
    }
}

pub fn slope(deg: f64, rank: usize) -> Result<f64> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(deg / rank as f64)
}

/// Slope of a direct sum given `(degree, rank)` of the summands.
pub fn direct_sum_slope(parts: &[(f64, usize)]) -> Result<f64> {
    let deg: f64 = parts.iter().map(|p| p.0).sum();
    let rank: usize = parts.iter().map(|p| p.1).sum();
    slope(deg, rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Unstable,
    Semistable,
    Stable,
}

/// Verdict relative to the supplied subobject slopes only.
pub fn stability_compare(sub_slopes: &[f64], total: f64) -> Stability {
    if sub_slopes.iter().any(|&s| s > total) {
        Stability::Unstable
    } else if sub_slopes.contains(&total) {
        Stability::Semistable
    } else {
        Stability::Stable
    }
}
