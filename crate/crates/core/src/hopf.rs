// SPDX-License-Identifier: Apache-2.0

//! The quaternionic Hopf surface `(ℍ ∖ {0}) / ⟨q⟩` with its two hypercomplex
//! frames, certified on the chart.
//!
//! The quotient is never built. Descent is certified by invariance under the
//! pullback `x ↦ q·x`.

use std::str::FromStr;

use num_traits::One;
use rayon::prelude::*;

use crate::exterior::{twisted_d, RationalForm, ScalarField};
use crate::hermitian::{bihermitian_check, metric_from_form, Metric};
use crate::quaternion::{independence_rank, AxisTriple, HypercomplexFrame, RatMat4, Side};
use crate::{rat, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfSpec {
    q: Rational,
}

impl HopfSpec {
    pub fn new(q: Rational) -> Result<Self> {
        if q <= Rational::one() {
            return Err(Error::InvalidMultiplier(q.to_string()));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }
}

impl FromStr for HopfSpec {
    type Err = Error;

    /// Accepts `"2"`, `"3/2"` or a terminating decimal such as `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len();
        let joined = format!("{int}{frac}");
        let num: num_bigint::BigInt = joined.parse().map_err(|_| Error::Parse(format!("not a rational: {s}")))?;
        let den = num_bigint::BigInt::from(10u32).pow(digits as u32);
        return Ok(Rational::new(num, den));
    }
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: num_bigint::BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("not a rational: {s}")))?;
    let d: num_bigint::BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("not a rational: {s}")))?;
    if d == num_bigint::BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator: {s}")));
    }
    Ok(Rational::new(n, d))
}

/// Where the six Hermitian forms come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSource {
    /// `ω_L = dd^c_L φ / φ`.
    Hopf,
    /// Euclidean Hermitian forms `ω_L = ¼ dd^c_L φ`; flat control.
    Euclidean,
}

/// Order of the six structures in [`HopfGeometry`] arrays.
pub const STRUCTURE_NAMES: [&str; 6] = ["I+", "J+", "K+", "I-", "J-", "K-"];

#[derive(Clone, Debug)]
pub struct HopfGeometry {
    pub spec: HopfSpec,
    pub source: FormSource,
    pub phi: ScalarField,
    pub left: HypercomplexFrame,
    pub right: HypercomplexFrame,
    pub metric: Metric,
    pub omegas: [RationalForm; 6],
    pub metric_candidates: [[[ScalarField; 4]; 4]; 6],
    pub h_plus: RationalForm,
    pub h_minus: RationalForm,
}

impl HopfGeometry {
    pub fn structures(&self) -> [&RatMat4; 6] {
        let [a, b, c] = self.left.structures();
        let [d, e, f] = self.right.structures();
        [a, b, c, d, e, f]
    }

    pub fn frame(&self, side: Side) -> &HypercomplexFrame {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn omega_index(side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => 3,
        }
    }
}

fn form_for(source: FormSource, l: &RatMat4) -> Result<RationalForm> {
    let phi = RationalForm::function(ScalarField::phi());
    let ddc = twisted_d(l, &phi)?.exterior_d()?;
    Ok(match source {
        FormSource::Hopf => ddc.scale(&ScalarField::phi_inverse_power(1)),
        FormSource::Euclidean => ddc.scale_real(&rat(1, 4)),
    })
}

fn metric_matrix(m: &Metric) -> [[ScalarField; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| m.factor.scale_real(m.base.matrix().get(a, b))))
}

/// Compute every field of the geometry without asserting invariants.
pub fn build_geometry(
    spec: HopfSpec,
    left: HypercomplexFrame,
    right: HypercomplexFrame,
    source: FormSource,
) -> Result<HopfGeometry> {
    let structures: Vec<RatMat4> = left.structures().into_iter().chain(right.structures()).cloned().collect();
    let omegas: Vec<RationalForm> = structures.par_iter().map(|l| form_for(source, l)).collect::<Result<_>>()?;
    let metric_candidates: Vec<[[ScalarField; 4]; 4]> =
        omegas.iter().zip(&structures).map(|(w, l)| metric_from_form(w, l)).collect();
    let h_plus = twisted_d(&structures[0], &omegas[0])?;
    let h_minus = twisted_d(&structures[3], &omegas[3])?;
    let metric = match source {
        FormSource::Hopf => Metric::hopf(),
        FormSource::Euclidean => Metric::euclidean(),
    };
    let to6 = |v: Vec<RationalForm>| -> [RationalForm; 6] {
        v.try_into().unwrap_or_else(|_| unreachable!("six structures"))
    };
    Ok(HopfGeometry {
        spec,
        source,
        phi: ScalarField::phi(),
        left,
        right,
        metric,
        omegas: to6(omegas),
        metric_candidates: metric_candidates.try_into().unwrap_or_else(|_| unreachable!("six structures")),
        h_plus,
        h_minus,
    })
}

/// Build the Hopf geometry and assert the common-metric and descent
/// invariants, naming the first failing identity.
pub fn build_hopf(spec: HopfSpec) -> Result<HopfGeometry> {
    let geo = build_geometry(spec, HypercomplexFrame::left(), HypercomplexFrame::right(), FormSource::Hopf)?;
    let expected = metric_matrix(&geo.metric);
    for (name, cand) in STRUCTURE_NAMES.iter().zip(&geo.metric_candidates) {
        if *cand != expected {
            return Err(Error::InvariantFailed(format!("omega_{name}(., {name} .) is not the common metric")));
        }
    }
    for (name, omega) in STRUCTURE_NAMES.iter().zip(&geo.omegas) {
        if omega.scale_pullback(geo.spec.q())? != *omega {
            return Err(Error::InvariantFailed(format!("omega_{name} is not <q>-invariant")));
        }
    }
    Ok(geo)
}

/// Whether all six candidate metrics agree, and whether they equal the
/// geometry's declared metric.
pub fn common_metric(geo: &HopfGeometry) -> (bool, bool) {
    let first = &geo.metric_candidates[0];
    let all_equal = geo.metric_candidates.iter().all(|m| m == first);
    (all_equal, *first == metric_matrix(&geo.metric))
}

#[derive(Clone, Debug)]
pub struct StrongHktReport {
    pub side: Side,
    pub torsions: [RationalForm; 3],
    /// `d^c_I ω_I − d^c_J ω_J` and `d^c_J ω_J − d^c_K ω_K`.
    pub differences: [RationalForm; 2],
    pub dh: RationalForm,
    /// For the right side, whether its `H` equals `−H₊`.
    pub opposite_to_plus: Option<bool>,
}

impl StrongHktReport {
    pub fn equal(&self) -> bool {
        self.differences.iter().all(RationalForm::is_zero)
    }

    pub fn closed(&self) -> bool {
        self.dh.is_zero()
    }

    pub fn nonzero(&self) -> bool {
        !self.torsions[0].is_zero()
    }

    pub fn passed(&self) -> bool {
        self.equal() && self.closed() && self.nonzero() && self.opposite_to_plus.unwrap_or(true)
    }
}

pub fn verify_strong_hkt(geo: &HopfGeometry, side: Side) -> Result<StrongHktReport> {
    let start = HopfGeometry::omega_index(side);
    let frame = geo.frame(side);
    let torsions: Vec<RationalForm> = frame
        .structures()
        .par_iter()
        .enumerate()
        .map(|(n, l)| twisted_d(l, &geo.omegas[start + n]))
        .collect::<Result<_>>()?;
    let differences = [&torsions[0] - &torsions[1], &torsions[1] - &torsions[2]];
    let dh = torsions[0].exterior_d()?;
    let opposite_to_plus = match side {
        Side::Left => None,
        Side::Right => Some(torsions[0] == -&geo.h_plus),
    };
    Ok(StrongHktReport {
        side,
        torsions: torsions.try_into().unwrap_or_else(|_| unreachable!("three structures")),
        differences,
        dh,
        opposite_to_plus,
    })
}

#[derive(Clone, Debug)]
pub struct FourFourReport {
    pub left: StrongHktReport,
    pub right: StrongHktReport,
    pub opposition: bool,
    pub closed: bool,
    pub independence_rank: usize,
    /// `bihermitian_check(g, L₊, L₋)` for `L₊ ∈ {I₊,J₊,K₊}` (rows) and
    /// `L₋ ∈ {I₋,J₋,K₋}` (columns).
    pub cross_pairs: [[bool; 3]; 3],
    /// Zero torsion: opposition holds only as `0 = −0`.
    pub hyperkahler_degenerate: bool,
}

impl FourFourReport {
    pub fn passed(&self) -> bool {
        self.opposition
            && self.closed
            && self.independence_rank == 6
            && self.cross_pairs.iter().flatten().all(|&b| b)
    }
}

pub fn verify_44(geo: &HopfGeometry) -> Result<FourFourReport> {
    let left = verify_strong_hkt(geo, Side::Left)?;
    let right = verify_strong_hkt(geo, Side::Right)?;
    let opposition = (&geo.h_plus + &geo.h_minus).is_zero();
    let closed = left.closed() && right.closed();
    let independence_rank = independence_rank(&geo.left, &geo.right);
    let mut cross_pairs = [[false; 3]; 3];
    for (a, lp) in geo.left.structures().into_iter().enumerate() {
        for (b, lm) in geo.right.structures().into_iter().enumerate() {
            cross_pairs[a][b] = bihermitian_check(&geo.metric, lp, lm)?;
        }
    }
    let hyperkahler_degenerate = geo.h_plus.is_zero() && geo.h_minus.is_zero();
    Ok(FourFourReport { left, right, opposition, closed, independence_rank, cross_pairs, hyperkahler_degenerate })
}

#[derive(Clone, Debug)]
pub struct DescentReport {
    pub omegas: [bool; 6],
    pub h_plus: bool,
    pub h_minus: bool,
    /// Control: `dφ` scales by `q²` and must not be invariant.
    pub dphi_control: bool,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.omegas.iter().all(|&b| b) && self.h_plus && self.h_minus && !self.dphi_control
    }
}

pub fn verify_descent(geo: &HopfGeometry) -> Result<DescentReport> {
    let q = geo.spec.q();
    let invariant = |f: &RationalForm| -> Result<bool> { Ok(f.scale_pullback(q)? == *f) };
    let mut omegas = [false; 6];
    for (slot, w) in omegas.iter_mut().zip(&geo.omegas) {
        *slot = invariant(w)?;
    }
    let dphi = RationalForm::function(geo.phi.clone()).exterior_d()?;
    Ok(DescentReport {
        omegas,
        h_plus: invariant(&geo.h_plus)?,
        h_minus: invariant(&geo.h_minus)?,
        dphi_control: invariant(&dphi)?,
    })
}

/// For each axis, whether `aI + bJ + cK` of the given frame reproduces the
/// common metric and the frame's torsion `H`.
pub fn axis_consistency(geo: &HopfGeometry, side: Side, axes: &[AxisTriple]) -> Result<Vec<(bool, bool)>> {
    let frame = geo.frame(side);
    let h_ref = match side {
        Side::Left => &geo.h_plus,
        Side::Right => &geo.h_minus,
    };
    let expected = metric_matrix(&geo.metric);
    axes.par_iter()
        .map(|axis| {
            let l = frame.structure(axis);
            let omega = form_for(geo.source, &l)?;
            let metric_ok = metric_from_form(&omega, &l) == expected;
            let h_ok = twisted_d(&l, &omega)? == *h_ref;
            Ok((metric_ok, h_ok))
        })
        .collect()
}

/// `dd^c_L ω_L` for each of the six structures.
pub fn gauduchon_defects(geo: &HopfGeometry) -> Result<Vec<RationalForm>> {
    geo.structures()
        .par_iter()
        .zip(geo.omegas.par_iter())
        .map(|(l, w)| twisted_d(l, w)?.exterior_d())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: i64, d: i64) -> HopfSpec {
        HopfSpec::new(rat(n, d)).unwrap()
    }

    #[test]
    fn multiplier_validation() {
        assert!(matches!(HopfSpec::new(rat(1, 1)), Err(Error::InvalidMultiplier(_))));
        assert!(HopfSpec::from_str("0.5").is_err());
        assert_eq!(HopfSpec::from_str("3/2").unwrap().q(), &rat(3, 2));
        assert_eq!(HopfSpec::from_str("1.25").unwrap().q(), &rat(5, 4));
        assert!(HopfSpec::from_str("x").is_err());
    }

    #[test]
    fn h_plus_closed_form() {
        // H₊ = 8 (x₃ dx₀₁₂ − x₂ dx₀₁₃ + x₁ dx₀₂₃ − x₀ dx₁₂₃) / φ², derived by hand
        // from ω_I = 4 ω_I^eucl / φ.
        let geo = build_hopf(spec(2, 1)).unwrap();
        let term = |c: i64, v: usize, idx: &[usize]| {
            RationalForm::monomial(idx, &ScalarField::var(v).scale_real(&rat(c, 1)) * &ScalarField::phi_inverse_power(2))
        };
        let expected = [term(8, 3, &[0, 1, 2]), term(-8, 2, &[0, 1, 3]), term(8, 1, &[0, 2, 3]), term(-8, 0, &[1, 2, 3])]
            .iter()
            .fold(RationalForm::zero(3), |a, b| &a + b);
        assert_eq!(geo.h_plus, expected);
        assert_eq!(geo.h_minus, -&expected);
    }

    #[test]
    fn omegas_do_not_depend_on_q() {
        let a = build_hopf(spec(2, 1)).unwrap();
        let b = build_hopf(spec(3, 2)).unwrap();
        assert_eq!(a.omegas, b.omegas);
    }

    #[test]
    fn swapped_frames_fail_44() {
        let geo = build_geometry(spec(2, 1), HypercomplexFrame::left(), HypercomplexFrame::left(), FormSource::Hopf).unwrap();
        let rep = verify_44(&geo).unwrap();
        assert!(!rep.opposition);
        assert_eq!(rep.independence_rank, 3);
        assert!(!rep.passed());
    }

    #[test]
    fn flat_control_is_degenerate() {
        let geo = build_geometry(spec(2, 1), HypercomplexFrame::left(), HypercomplexFrame::right(), FormSource::Euclidean)
            .unwrap();
        let rep = verify_44(&geo).unwrap();
        assert!(rep.opposition && rep.hyperkahler_degenerate);
        assert!(rep.passed());
        let left = verify_strong_hkt(&geo, Side::Left).unwrap();
        assert!(left.equal() && left.closed() && !left.nonzero());
    }

    #[test]
    fn descent_control() {
        let geo = build_hopf(spec(2, 1)).unwrap();
        let rep = verify_descent(&geo).unwrap();
        assert!(rep.passed());
        assert!(!rep.dphi_control);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-7/3").unwrap(), rat(-7, 3));
        assert!(parse_rational("1/0").is_err());
    }
}
