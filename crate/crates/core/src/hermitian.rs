// SPDX-License-Identifier: Apache-2.0

//! Hermitian forms, Bismut torsion, Gauduchon defects and HKT checks for
//! conformally constant metrics on the chart.

use crate::conventions::TORSION_RATIO;
use crate::exterior::{
    del, del_from_twisted, imag_unit, pq_project, structure_action, twisted_d, ConstantMetric,
    RationalForm, ScalarField,
};
use crate::quaternion::{is_almost_complex, HypercomplexFrame, RatMat4};
use crate::{rat, Error, Result};

/// Metric `f · g₀` with a positive function `f` and a constant metric `g₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    pub factor: ScalarField,
    pub base: ConstantMetric,
}

impl Metric {
    pub fn constant(base: ConstantMetric) -> Self {
        Self { factor: ScalarField::one(), base }
    }

    pub fn euclidean() -> Self {
        Self::constant(ConstantMetric::euclidean())
    }

    pub fn conformal(factor: ScalarField, base: ConstantMetric) -> Self {
        Self { factor, base }
    }

    /// `4/φ` times the Euclidean metric: the metric induced by `dd^c_L φ / φ`.
    pub fn hopf() -> Self {
        Self::conformal(ScalarField::phi_inverse_power(1).scale_real(&rat(4, 1)), ConstantMetric::euclidean())
    }
}

pub fn check_hermitian(g: &Metric, l: &RatMat4) -> bool {
    is_almost_complex(l) && g.base.is_hermitian(l)
}

/// `ω_L(X, Y) = g(LX, Y)`.
pub fn hermitian_form(g: &Metric, l: &RatMat4) -> Result<RationalForm> {
    if !is_almost_complex(l) {
        return Err(Error::NotAlmostComplex);
    }
    if !g.base.is_hermitian(l) {
        return Err(Error::NotHermitian);
    }
    // ω(e_a, e_b) = Σ_c L[c][a] g[c][b] = (Lᵀ g)[a][b]
    let m = &l.transpose() * g.base.matrix();
    let mut omega = RationalForm::zero(2);
    for a in 0..4 {
        for b in a + 1..4 {
            let c = m.get(a, b).clone();
            if !num_traits::Zero::is_zero(&c) {
                omega = &omega + &RationalForm::monomial(&[a, b], g.factor.scale_real(&c));
            }
        }
    }
    Ok(omega)
}

/// Symmetric bilinear form `ω(·, L·)` as a 4×4 matrix of functions.
pub fn metric_from_form(omega: &RationalForm, l: &RatMat4) -> [[ScalarField; 4]; 4] {
    let entry = |a: usize, b: usize| -> ScalarField {
        if a == b {
            return ScalarField::zero();
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let c = omega.coeff((1 << lo) | (1 << hi));
        if a < b {
            c
        } else {
            -&c
        }
    };
    // g[a][b] = ω(e_a, L e_b) = Σ_c ω[a][c] L[c][b]
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            (0..4).fold(ScalarField::zero(), |acc, c| {
                let lc = l.get(c, b);
                if num_traits::Zero::is_zero(lc) {
                    acc
                } else {
                    &acc + &entry(a, c).scale_real(lc)
                }
            })
        })
    })
}

/// Hermitian form, Bismut torsion `T = L dω`, `H = d^c_L ω` and `dH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub omega: RationalForm,
    pub torsion_t: RationalForm,
    pub torsion_h: RationalForm,
    pub dh: RationalForm,
    /// `T / H`; always [`TORSION_RATIO`] when `H ≠ 0`.
    pub ratio: i32,
}

impl TorsionReport {
    /// `dω = 0`: the Bismut connection is the Levi-Civita connection.
    pub fn is_kahler(&self) -> bool {
        self.torsion_t.is_zero()
    }

    pub fn is_strong(&self) -> bool {
        self.dh.is_zero()
    }
}

pub fn bismut_torsion(g: &Metric, l: &RatMat4) -> Result<TorsionReport> {
    let omega = hermitian_form(g, l)?;
    let domega = omega.exterior_d()?;
    let torsion_t = structure_action(l, &domega)?;
    let torsion_h = twisted_d(l, &omega)?;
    let dh = torsion_h.exterior_d()?;
    let expected = torsion_h.scale_real(&rat(TORSION_RATIO as i64, 1));
    if torsion_t != expected {
        return Err(Error::InvariantFailed(format!("T = L dω is not {TORSION_RATIO}·d^c ω")));
    }
    Ok(TorsionReport { omega, torsion_t, torsion_h, dh, ratio: TORSION_RATIO })
}

/// `dd^c_L ω_L`; zero iff `g` is Gauduchon for `L` (complex dimension 2).
pub fn gauduchon_defect(g: &Metric, l: &RatMat4) -> Result<RationalForm> {
    let omega = hermitian_form(g, l)?;
    twisted_d(l, &omega)?.exterior_d()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKTReport {
    /// `Ω = ω_J + √−1 ω_K`.
    pub omega_big: RationalForm,
    /// Whether `Ω` is of pure type (2,0) for `I`.
    pub omega_is_20: bool,
    /// `∂Ω` assembled from type projections.
    pub del_omega: RationalForm,
    /// `½(dΩ + √−1 d^c_I Ω)`.
    pub del_omega_twisted: RationalForm,
    /// `d^c_L ω_L` for `L = I, J, K`.
    pub torsions: [RationalForm; 3],
    /// Exact equality of the pairs `(I,J)`, `(J,K)`, `(I,K)`.
    pub torsion_match: [bool; 3],
    pub dh: RationalForm,
    pub strong: bool,
}

impl HKTReport {
    pub fn is_hkt(&self) -> bool {
        self.torsion_match.iter().all(|&b| b) && self.del_omega.is_zero()
    }

    pub fn h(&self) -> &RationalForm {
        &self.torsions[0]
    }

    /// `H = 0`: the hyperkähler case.
    pub fn is_hyperkahler(&self) -> bool {
        self.is_hkt() && self.torsions.iter().all(RationalForm::is_zero)
    }
}

pub fn hkt_report(g: &Metric, frame: &HypercomplexFrame) -> Result<HKTReport> {
    if !frame.structures().into_iter().all(|l| check_hermitian(g, l)) {
        return Err(Error::NotHermitian);
    }
    let [i, j, k] = frame.structures();
    let omega_j = hermitian_form(g, j)?;
    let omega_k = hermitian_form(g, k)?;
    let omega_big = &omega_j + &omega_k.scale_gaussian(&imag_unit());
    let omega_is_20 = pq_project(i, &omega_big, 2, 0)? == omega_big;
    let del_omega = del(i, &omega_big)?;
    let del_omega_twisted = del_from_twisted(i, &omega_big)?;
    let torsions = [
        twisted_d(i, &hermitian_form(g, i)?)?,
        twisted_d(j, &omega_j)?,
        twisted_d(k, &omega_k)?,
    ];
    let torsion_match = [torsions[0] == torsions[1], torsions[1] == torsions[2], torsions[0] == torsions[2]];
    let dh = torsions[0].exterior_d()?;
    let strong = dh.is_zero();
    Ok(HKTReport { omega_big, omega_is_20, del_omega, del_omega_twisted, torsions, torsion_match, dh, strong })
}

/// `¼ (g₀ + g₀(I·,I·) + g₀(J·,J·) + g₀(K·,K·))`.
pub fn average_metric(g0: &ConstantMetric, frame: &HypercomplexFrame) -> Result<ConstantMetric> {
    let base = g0.matrix();
    let sum = frame
        .structures()
        .into_iter()
        .fold(base.clone(), |acc, l| &acc + &(&(&l.transpose() * base) * l));
    ConstantMetric::new(sum.scale(&rat(1, 4)))
}

/// `T₊ = −T₋` and `dT± = 0` for the two Bismut torsions.
pub fn bihermitian_check(g: &Metric, l_plus: &RatMat4, l_minus: &RatMat4) -> Result<bool> {
    let plus = bismut_torsion(g, l_plus)?;
    let minus = bismut_torsion(g, l_minus)?;
    let opposite = (&plus.torsion_t + &minus.torsion_t).is_zero();
    Ok(opposite && plus.is_strong() && minus.is_strong())
}

#[cfg(test)]
fn rational_metric(diag: [i64; 4]) -> Result<ConstantMetric> {
    use crate::Rational;
    ConstantMetric::diagonal(diag.map(|d| Rational::from_integer(d.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{structure_matrix, AxisTriple, Side};

    fn left(axis: AxisTriple) -> RatMat4 {
        structure_matrix(Side::Left, &axis)
    }

    #[test]
    fn euclidean_hermitian_forms() {
        let g = Metric::euclidean();
        let oi = hermitian_form(&g, &left(AxisTriple::i())).unwrap();
        assert_eq!(oi, &RationalForm::basis(&[0, 1]) + &RationalForm::basis(&[2, 3]));
        let oj = hermitian_form(&g, &left(AxisTriple::j())).unwrap();
        assert_eq!(oj, &RationalForm::basis(&[0, 2]) - &RationalForm::basis(&[1, 3]));
        let ok = hermitian_form(&g, &left(AxisTriple::k())).unwrap();
        assert_eq!(ok, &RationalForm::basis(&[0, 3]) + &RationalForm::basis(&[1, 2]));
        for w in [oi, oj, ok] {
            assert_eq!(w.wedge(&w).unwrap(), RationalForm::volume().scale_real(&rat(2, 1)));
        }
    }

    #[test]
    fn hermitian_checks() {
        let e = Metric::euclidean();
        for axis in [AxisTriple::i(), AxisTriple::stereographic(rat(1, 2), rat(-3, 1))] {
            assert!(check_hermitian(&e, &left(axis.clone())));
            assert!(check_hermitian(&e, &structure_matrix(Side::Right, &axis)));
        }
        let skew = Metric::constant(rational_metric([1, 2, 1, 1]).unwrap());
        assert!(!check_hermitian(&skew, &left(AxisTriple::i())));
        assert!(matches!(hermitian_form(&skew, &left(AxisTriple::i())), Err(Error::NotHermitian)));
    }

    #[test]
    fn flat_torsion_vanishes() {
        let r = bismut_torsion(&Metric::euclidean(), &left(AxisTriple::j())).unwrap();
        assert!(r.torsion_t.is_zero() && r.torsion_h.is_zero() && r.is_kahler());
    }

    #[test]
    fn conformal_factor_breaks_gauduchon() {
        // ω = (1 + x₀²) ω_I ⇒ d^c ω = 2x₀ dx₁₂₃ and dd^c ω = 2 dx₀₁₂₃
        let f = &ScalarField::one() + &(&ScalarField::var(0) * &ScalarField::var(0));
        let g = Metric::conformal(f, ConstantMetric::euclidean());
        let defect = gauduchon_defect(&g, &left(AxisTriple::i())).unwrap();
        assert_eq!(defect, RationalForm::volume().scale_real(&rat(2, 1)));
        assert!(gauduchon_defect(&Metric::euclidean(), &left(AxisTriple::i())).unwrap().is_zero());
    }

    #[test]
    fn averaging() {
        let frame = HypercomplexFrame::left();
        let avg = average_metric(&rational_metric([1, 2, 3, 4]).unwrap(), &frame).unwrap();
        assert_eq!(avg.matrix(), &RatMat4::identity().scale(&rat(5, 2)));
        let e = average_metric(&ConstantMetric::euclidean(), &frame).unwrap();
        assert_eq!(e, ConstantMetric::euclidean());
        let twice = average_metric(&avg, &frame).unwrap();
        assert_eq!(twice, avg);
    }

    #[test]
    fn flat_hkt_is_hyperkahler() {
        let rep = hkt_report(&Metric::euclidean(), &HypercomplexFrame::left()).unwrap();
        assert!(rep.omega_is_20);
        assert!(rep.is_hyperkahler());
        assert!(rep.del_omega.is_zero() && rep.del_omega_twisted.is_zero());
    }

    #[test]
    fn bihermitian_flat_and_self_pair() {
        let e = Metric::euclidean();
        let ip = left(AxisTriple::i());
        let im = HypercomplexFrame::right().i;
        assert!(bihermitian_check(&e, &ip, &im).unwrap());
        assert!(bihermitian_check(&e, &ip, &ip).unwrap());
        let hopf = Metric::hopf();
        assert!(!bihermitian_check(&hopf, &ip, &ip).unwrap());
    }
}
