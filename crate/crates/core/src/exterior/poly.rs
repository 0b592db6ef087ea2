// SPDX-License-Identifier: Apache-2.0

//! Sparse polynomials in `x₀, x₁, x₂, x₃` with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Gaussian;
use crate::Rational;

/// Exponent vector of a monomial `x₀^e₀ x₁^e₁ x₂^e₂ x₃^e₃`.
pub type Monomial = [u8; 4];

/// Sparse multivariate polynomial. Zero coefficients are never stored, so
/// structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Gaussian>,
}

pub fn gaussian(re: Rational, im: Rational) -> Gaussian {
    Gaussian::new(re, im)
}

pub fn real(re: Rational) -> Gaussian {
    Gaussian::new(re, Rational::zero())
}

pub fn imag_unit() -> Gaussian {
    Gaussian::new(Rational::zero(), Rational::one())
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Gaussian) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn one() -> Self {
        Self::constant(Gaussian::one())
    }

    pub fn monomial(exp: Monomial, c: Gaussian) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// The coordinate function `xᵢ`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(e, Gaussian::one())
    }

    /// `φ = x₀² + x₁² + x₂² + x₃²`.
    pub fn phi() -> Self {
        (0..4).fold(Self::zero(), |acc, i| {
            let mut e = [0; 4];
            e[i] = 2;
            &acc + &Self::monomial(e, Gaussian::one())
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gaussian)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Gaussian> {
        match self.terms.len() {
            0 => Some(Gaussian::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, exp: Monomial, c: Gaussian) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() = o.get() + &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn scale_real(&self, c: &Rational) -> Self {
        self.scale(&real(c.clone()))
    }

    /// `∂/∂xᵢ`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(e2, c * real(Rational::from_integer(e[i].into())));
        }
        out
    }

    /// Exact quotient by `φ`, or `None` if `φ` does not divide.
    ///
    /// `φ` is monic of degree 2 in `x₀`, so division in `x₀` with coefficients
    /// in the other variables has a unique remainder.
    pub fn div_phi(&self) -> Option<Self> {
        let mut rem = self.clone();
        let mut quot = Self::zero();
        loop {
            let lead = rem.terms.iter().filter(|(e, _)| e[0] >= 2).max_by_key(|(e, _)| e[0]);
            let Some((e, c)) = lead.map(|(e, c)| (*e, c.clone())) else {
                break;
            };
            let mut q = e;
            q[0] -= 2;
            let step = Self::monomial(q, c);
            rem = &rem - &(&step * &Self::phi());
            quot = &quot + &step;
        }
        rem.is_zero().then_some(quot)
    }

    /// `P(q·x)` for a rational `q`.
    pub fn pullback_scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let d: u32 = e.iter().map(|&x| x as u32).sum();
            out.add_term(*e, c * real(num_traits::pow(q.clone(), d as usize)));
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, x: &[Rational; 4]) -> Gaussian {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: Rational = (0..4).map(|i| num_traits::pow(x[i].clone(), e[i] as usize)).product();
                c * real(m)
            })
            .fold(Gaussian::zero(), |a, b| a + b)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = std::array::from_fn(|i| e1[i] + e2[i]);
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

fn fmt_gaussian(c: &Gaussian) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) => format!("{}i", c.im),
        _ => format!("({} + {}i)", c.re, c.im),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = fmt_gaussian(c);
                for (i, &p) in e.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => s.push_str(&format!("*x{i}")),
                        _ => s.push_str(&format!("*x{i}^{p}")),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
