// SPDX-License-Identifier: Apache-2.0

//! Exact quaternions and the left/right hypercomplex frames they induce on
//! `ℝ⁴ ≅ ℍ`.
//!
//! Coordinates are `x = x₀ + x₁i + x₂j + x₃k`. A structure matrix acts on the
//! coordinate column `(x₀, x₁, x₂, x₃)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{rat, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub w: Rational,
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Quaternion {
    pub fn new(w: Rational, x: Rational, y: Rational, z: Rational) -> Self {
        Self { w, x, y, z }
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(rat(w, 1), rat(x, 1), rat(y, 1), rat(z, 1))
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    /// The basis quaternion `1, i, j, k` for `index = 0..4`.
    pub fn basis(index: usize) -> Self {
        let mut c = [0i64; 4];
        c[index] = 1;
        Self::from_ints(c[0], c[1], c[2], c[3])
    }

    pub fn coords(&self) -> [Rational; 4] {
        [self.w.clone(), self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    /// Squared norm `|q|²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.w * &self.w + &self.x * &self.x + &self.y * &self.y + &self.z * &self.z
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

/// Hamilton product.
pub fn quat_mul(p: &Quaternion, q: &Quaternion) -> Quaternion {
    let (a1, b1, c1, d1) = (&p.w, &p.x, &p.y, &p.z);
    let (a2, b2, c2, d2) = (&q.w, &q.x, &q.y, &q.z);
    Quaternion::new(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: &Quaternion) -> Quaternion {
        quat_mul(self, rhs)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

/// Exact 4×4 rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMat4(pub [[Rational; 4]; 4]);

impl RatMat4 {
    pub fn zero() -> Self {
        RatMat4(std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero())))
    }

    pub fn identity() -> Self {
        Self::from_fn(|r, c| if r == c { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        RatMat4(std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))))
    }

    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Self::from_fn(|r, c| rat(rows[r][c], 1))
    }

    pub fn diag(d: [Rational; 4]) -> Self {
        Self::from_fn(|r, c| if r == c { d[r].clone() } else { Rational::zero() })
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.0[r][c]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(|r, c| &self.0[r][c] * s)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Matrix applied to a coordinate column.
    pub fn apply(&self, v: &[Rational; 4]) -> [Rational; 4] {
        std::array::from_fn(|r| (0..4).map(|c| &self.0[r][c] * &v[c]).sum())
    }

    pub fn to_f64(&self) -> nalgebra::Matrix4<f64> {
        use num_traits::ToPrimitive;
        nalgebra::Matrix4::from_fn(|r, c| self.0[r][c].to_f64().unwrap_or(f64::NAN))
    }

    /// The 16 entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter().flatten()
    }

    /// Leading principal minors; all positive iff a symmetric matrix is
    /// positive definite (Sylvester).
    pub fn leading_minors(&self) -> [Rational; 4] {
        std::array::from_fn(|k| det_exact(&self.0, k + 1))
    }

    pub fn det(&self) -> Rational {
        det_exact(&self.0, 4)
    }
}

/// Determinant of the leading `size × size` block by fraction-exact elimination.
fn det_exact(m: &[[Rational; 4]; 4], size: usize) -> Rational {
    let mut a: Vec<Vec<Rational>> = (0..size).map(|r| m[r][..size].to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..size {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..size {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

impl Mul for &RatMat4 {
    type Output = RatMat4;
    fn mul(self, rhs: &RatMat4) -> RatMat4 {
        RatMat4::from_fn(|r, c| (0..4).map(|k| &self.0[r][k] * &rhs.0[k][c]).sum())
    }
}

impl Add for &RatMat4 {
    type Output = RatMat4;
    fn add(self, rhs: &RatMat4) -> RatMat4 {
        RatMat4::from_fn(|r, c| &self.0[r][c] + &rhs.0[r][c])
    }
}

impl Sub for &RatMat4 {
    type Output = RatMat4;
    fn sub(self, rhs: &RatMat4) -> RatMat4 {
        RatMat4::from_fn(|r, c| &self.0[r][c] - &rhs.0[r][c])
    }
}

impl Neg for &RatMat4 {
    type Output = RatMat4;
    fn neg(self) -> RatMat4 {
        RatMat4::from_fn(|r, c| -&self.0[r][c])
    }
}

impl fmt::Display for RatMat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Unit vector `(a, b, c)` with rational entries selecting `L = aI + bJ + cK`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxisTriple {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl AxisTriple {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let n = &a * &a + &b * &b + &c * &c;
        if !n.is_one() {
            return Err(Error::NonUnitAxis(format!("{a}, {b}, {c}")));
        }
        Ok(Self { a, b, c })
    }

    pub fn i() -> Self {
        Self { a: rat(1, 1), b: rat(0, 1), c: rat(0, 1) }
    }

    pub fn j() -> Self {
        Self { a: rat(0, 1), b: rat(1, 1), c: rat(0, 1) }
    }

    pub fn k() -> Self {
        Self { a: rat(0, 1), b: rat(0, 1), c: rat(1, 1) }
    }

    /// Inverse stereographic projection of the rational point `(s, t)`; every
    /// rational point of S² except the north pole arises this way.
    pub fn stereographic(s: Rational, t: Rational) -> Self {
        let d = Rational::one() + &s * &s + &t * &t;
        let two = rat(2, 1);
        let a = &two * &s / &d;
        let b = &two * &t / &d;
        let c = (&s * &s + &t * &t - Rational::one()) / &d;
        Self { a, b, c }
    }

    pub fn components(&self) -> [&Rational; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::new(Rational::zero(), self.a.clone(), self.b.clone(), self.c.clone())
    }
}

impl fmt::Display for AxisTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Matrix of `x ↦ u·x` (left) or `x ↦ x·u` (right) for an arbitrary quaternion `u`.
pub fn multiplication_matrix(side: Side, u: &Quaternion) -> RatMat4 {
    let cols: Vec<[Rational; 4]> = (0..4)
        .map(|b| {
            let e = Quaternion::basis(b);
            match side {
                Side::Left => quat_mul(u, &e),
                Side::Right => quat_mul(&e, u),
            }
            .coords()
        })
        .collect();
    RatMat4::from_fn(|r, c| cols[c][r].clone())
}

/// Structure matrix for the imaginary quaternion `u = ai + bj + ck`, without a
/// normalization check. Linear in `(a, b, c)`.
pub fn structure_matrix_raw(side: Side, a: &Rational, b: &Rational, c: &Rational) -> RatMat4 {
    let u = Quaternion::new(Rational::zero(), a.clone(), b.clone(), c.clone());
    multiplication_matrix(side, &u)
}

/// Structure matrix of multiplication by the unit imaginary quaternion `axis`.
/// Squares to `-Id`.
pub fn structure_matrix(side: Side, axis: &AxisTriple) -> RatMat4 {
    let [a, b, c] = axis.components();
    structure_matrix_raw(side, a, b, c)
}

/// Whether `m² = -Id` exactly.
pub fn is_almost_complex(m: &RatMat4) -> bool {
    &(m * m) + &RatMat4::identity() == RatMat4::zero()
}

/// A triple `(I, J, K)` of constant structure matrices tagged by the side of
/// the quaternion action.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypercomplexFrame {
    pub side: Side,
    pub i: RatMat4,
    pub j: RatMat4,
    pub k: RatMat4,
}

impl HypercomplexFrame {
    /// Frame without any identity check; use [`verify_frame`] to inspect it.
    pub fn new(side: Side, i: RatMat4, j: RatMat4, k: RatMat4) -> Self {
        Self { side, i, j, k }
    }

    /// Left multiplication by `i, j, k`.
    pub fn left() -> Self {
        Self::new(
            Side::Left,
            structure_matrix(Side::Left, &AxisTriple::i()),
            structure_matrix(Side::Left, &AxisTriple::j()),
            structure_matrix(Side::Left, &AxisTriple::k()),
        )
    }

    /// Right multiplication by `i` and `j`, and by `-k`.
    ///
    /// Right multiplications compose in reverse order (`R_i R_j = -R_k`), so
    /// the third structure is stored as `-R_k` to satisfy `IJ = -JI = K`.
    pub fn right() -> Self {
        Self::new(
            Side::Right,
            structure_matrix(Side::Right, &AxisTriple::i()),
            structure_matrix(Side::Right, &AxisTriple::j()),
            -&structure_matrix(Side::Right, &AxisTriple::k()),
        )
    }

    pub fn for_side(side: Side) -> Self {
        match side {
            Side::Left => Self::left(),
            Side::Right => Self::right(),
        }
    }

    pub fn structures(&self) -> [&RatMat4; 3] {
        [&self.i, &self.j, &self.k]
    }

    /// `aI + bJ + cK`.
    pub fn structure(&self, axis: &AxisTriple) -> RatMat4 {
        let [a, b, c] = axis.components();
        let ai = self.i.scale(a);
        let bj = self.j.scale(b);
        let ck = self.k.scale(c);
        &(&ai + &bj) + &ck
    }

    pub fn with_k(&self, k: RatMat4) -> Self {
        Self { k, ..self.clone() }
    }
}

/// Outcome of [`verify_frame`]; `failures` names each identity that does not
/// hold exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrameReport {
    pub failures: Vec<&'static str>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_frame(f: &HypercomplexFrame) -> FrameReport {
    let minus_id = -&RatMat4::identity();
    let mut failures = Vec::new();
    if &f.i * &f.i != minus_id {
        failures.push("I^2 = -Id");
    }
    if &f.j * &f.j != minus_id {
        failures.push("J^2 = -Id");
    }
    if &f.k * &f.k != minus_id {
        failures.push("K^2 = -Id");
    }
    if &f.i * &f.j != f.k {
        failures.push("IJ = K");
    }
    if &f.j * &f.i != -&f.k {
        failures.push("JI = -K");
    }
    FrameReport { failures }
}

/// Exact rank of a dense rational matrix given as rows.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let p = a[rank][col].clone();
        for r in 0..a.len() {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..ncols {
                let v = &f * &a[rank][c];
                a[r][c] -= v;
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Rank of `span{I₊, J₊, K₊, I₋, J₋, K₋}` inside the 16-dimensional space of
/// 4×4 matrices. A value of 6 means neither family meets the span of the other.
pub fn independence_rank(left: &HypercomplexFrame, right: &HypercomplexFrame) -> usize {
    let rows: Vec<Vec<Rational>> = left
        .structures()
        .into_iter()
        .chain(right.structures())
        .map(|m| m.entries().cloned().collect())
        .collect();
    rational_rank(&rows)
}

/// Whether two matrices commute exactly.
pub fn commute(a: &RatMat4, b: &RatMat4) -> bool {
    a * b == b * a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &RatMat4, v: [i64; 4]) -> [Rational; 4] {
        m.apply(&v.map(|x| rat(x, 1)))
    }

    #[test]
    fn multiplication_table() {
        assert_eq!(quat_mul(&Quaternion::i(), &Quaternion::j()), Quaternion::k());
        assert_eq!(quat_mul(&Quaternion::j(), &Quaternion::i()), -&Quaternion::k());
        assert_eq!(quat_mul(&Quaternion::j(), &Quaternion::k()), Quaternion::i());
        assert_eq!(quat_mul(&Quaternion::k(), &Quaternion::i()), Quaternion::j());
        let q = Quaternion::from_ints(3, -1, 4, 2);
        assert_eq!(quat_mul(&Quaternion::one(), &q), q);
        assert_eq!(quat_mul(&q, &q.conj()), Quaternion::new(q.norm_sqr(), rat(0, 1), rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn left_i_matrix() {
        // i·(x₀ + x₁i + x₂j + x₃k) = −x₁ + x₀i − x₃j + x₂k
        let m = structure_matrix(Side::Left, &AxisTriple::i());
        let expected = RatMat4::from_ints([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]);
        assert_eq!(m, expected);
        assert_eq!(rows(&m, [5, 7, 11, 13]), [-7, 5, -13, 11].map(|x| rat(x, 1)));
    }

    #[test]
    fn right_i_matrix() {
        // (x₀ + x₁i + x₂j + x₃k)·i = −x₁ + x₀i + x₃j − x₂k
        let m = structure_matrix(Side::Right, &AxisTriple::i());
        assert_eq!(rows(&m, [5, 7, 11, 13]), [-7, 5, 13, -11].map(|x| rat(x, 1)));
    }

    #[test]
    fn non_unit_axis_rejected() {
        assert!(matches!(AxisTriple::new(rat(1, 1), rat(1, 1), rat(0, 1)), Err(Error::NonUnitAxis(_))));
        assert!(AxisTriple::new(rat(3, 5), rat(0, 1), rat(-4, 5)).is_ok());
    }

    #[test]
    fn frames_verify() {
        assert!(verify_frame(&HypercomplexFrame::left()).passed());
        assert!(verify_frame(&HypercomplexFrame::right()).passed());
        let left = HypercomplexFrame::left();
        let bad = left.with_k(-&left.k);
        let report = verify_frame(&bad);
        assert!(report.failures.contains(&"IJ = K"));
        assert!(report.failures.contains(&"JI = -K"));
        assert!(!report.failures.contains(&"K^2 = -Id"));
    }

    #[test]
    fn raw_right_multiplication_reverses_relations() {
        let ri = structure_matrix(Side::Right, &AxisTriple::i());
        let rj = structure_matrix(Side::Right, &AxisTriple::j());
        let rk = structure_matrix(Side::Right, &AxisTriple::k());
        assert_eq!(&ri * &rj, -&rk);
    }

    #[test]
    fn independence() {
        let l = HypercomplexFrame::left();
        let r = HypercomplexFrame::right();
        assert_eq!(independence_rank(&l, &r), 6);
        assert_eq!(independence_rank(&l, &l), 3);
        let mut forced = r.clone();
        forced.i = l.i.clone();
        assert!(independence_rank(&l, &forced) <= 5);
    }

    #[test]
    fn stereographic_points_are_unit() {
        for (s, t) in [(1, 2), (-3, 5), (0, 0), (7, -1)] {
            let a = AxisTriple::stereographic(rat(s, 1), rat(t, 3));
            let [x, y, z] = a.components();
            assert!(AxisTriple::new(x.clone(), y.clone(), z.clone()).is_ok());
        }
    }

    #[test]
    fn sylvester_minors() {
        let d = RatMat4::diag([rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1)]);
        assert_eq!(d.leading_minors(), [rat(1, 1), rat(2, 1), rat(6, 1), rat(24, 1)]);
        assert_eq!(d.det(), rat(24, 1));
    }
}
