// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{random_axis, random_form, random_square_diagonal, random_structure, rng};
use hkt_core::bundle::{self, direct_sum_slope, slope, stability_compare, GridForm, Stability};
use hkt_core::exterior::{hodge_star, lambda_contract, pq_project, ConstantMetric};
use hkt_core::hermitian::hermitian_form;
use hkt_core::quaternion::{multiplication_matrix, quat_mul, structure_matrix};
use hkt_core::torus::ops::{cov_d, frame_orientation, hodge_star as lattice_star, induced_structure, mat_f64};
use hkt_core::torus::snapshot::{read_snapshot, write_snapshot};
use hkt_core::{rat, HypercomplexFrame, Metric, Quaternion, RatMat4, RationalForm, ScalarField, Side, TorusSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, ..ProptestConfig::default() }
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-20i64..=20).prop_map(|[w, x, y, z]| Quaternion::from_ints(w, x, y, z))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_is_zero(seed in any::<u64>(), degree in 0usize..=2) {
        let a = random_form(&mut rng(seed), degree);
        prop_assert!(a.exterior_d().unwrap().exterior_d().unwrap().is_zero());
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=1) {
        prop_assume!(p + q <= 3);
        let mut r = rng(seed);
        let a = random_form(&mut r, p);
        let b = random_form(&mut r, q);
        let lhs = a.wedge(&b).unwrap().exterior_d().unwrap();
        let first = a.exterior_d().unwrap().wedge(&b).unwrap();
        let second = a.wedge(&b.exterior_d().unwrap()).unwrap();
        let second = if p % 2 == 0 { second } else { -&second };
        prop_assert_eq!(lhs, &first + &second);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=2) {
        let mut r = rng(seed);
        let a = random_form(&mut r, p);
        let b = random_form(&mut r, q);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert_eq!(ab, if p * q % 2 == 0 { ba } else { -&ba });
    }

    #[test]
    fn type_projections_are_complete_and_idempotent(seed in any::<u64>(), degree in 1usize..=3) {
        let mut r = rng(seed);
        let l = random_structure(&mut r);
        let a = random_form(&mut r, degree);
        let mut sum = RationalForm::zero(degree);
        for p in 0..=degree {
            let piece = pq_project(&l, &a, p, degree - p).unwrap();
            prop_assert_eq!(&pq_project(&l, &piece, p, degree - p).unwrap(), &piece);
            for other in (0..=degree).filter(|&o| o != p) {
                prop_assert!(pq_project(&l, &piece, other, degree - other).unwrap().is_zero());
            }
            sum = &sum + &piece;
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn no_three_zero_forms_on_a_surface(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_structure(&mut r);
        let a = random_form(&mut r, 3);
        prop_assert!(pq_project(&l, &a, 3, 0).unwrap().is_zero());
        prop_assert!(pq_project(&l, &a, 0, 3).unwrap().is_zero());
    }

    #[test]
    fn star_squared_on_two_forms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = ConstantMetric::diagonal(random_square_diagonal(&mut r)).unwrap();
        let a = random_form(&mut r, 2);
        prop_assert_eq!(hodge_star(&g, &hodge_star(&g, &a).unwrap()).unwrap(), a);
    }

    #[test]
    fn lambda_of_omega_is_two(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = structure_matrix(Side::Left, &random_axis(&mut r));
        for g in [Metric::euclidean(), Metric::hopf()] {
            let omega = hermitian_form(&g, &l).unwrap();
            prop_assert_eq!(lambda_contract(&omega, &omega).unwrap(), ScalarField::rational(rat(2, 1)));
        }
    }

    #[test]
    fn scale_pullback_commutes_with_d(seed in any::<u64>(), degree in 0usize..=3, num in 2i64..7, den in 1i64..4) {
        let a = random_form(&mut rng(seed), degree);
        let q = rat(num, den);
        prop_assert_eq!(
            a.exterior_d().unwrap().scale_pullback(&q).unwrap(),
            a.scale_pullback(&q).unwrap().exterior_d().unwrap()
        );
    }

    #[test]
    fn quaternion_norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        prop_assert_eq!(quat_mul(&p, &q).norm_sqr(), p.norm_sqr() * q.norm_sqr());
    }

    #[test]
    fn left_and_right_multiplication_commute(p in quaternion(), q in quaternion()) {
        let l = multiplication_matrix(Side::Left, &p);
        let r = multiplication_matrix(Side::Right, &q);
        prop_assert_eq!(&l * &r, &r * &l);
    }

    #[test]
    fn axis_structures_are_orthogonal_complex_structures(seed in any::<u64>()) {
        let mut r = rng(seed);
        let axis = random_axis(&mut r);
        for side in [Side::Left, Side::Right] {
            let m = structure_matrix(side, &axis);
            prop_assert_eq!(&m * &m, -&RatMat4::identity());
            prop_assert_eq!(&m.transpose() * &m, RatMat4::identity());
        }
    }

    #[test]
    fn snapshot_roundtrip(seed in any::<u64>(), grid in 3usize..=4, rank in 2usize..=3, degree in 0usize..=4) {
        let lat = TorusSpec::new(grid, rank, HypercomplexFrame::left()).unwrap().lattice();
        let f = hkt_core::LatticeField::random(&lat, degree, 1.0, &mut rng(seed));
        let mut bytes = Vec::new();
        write_snapshot(&f, &mut bytes).unwrap();
        let back = read_snapshot(&bytes[..]).unwrap();
        prop_assert!(back.axpy(-1.0, &f).max_abs() < 1e-14);
    }

    #[test]
    fn lattice_d_squared_vanishes(seed in any::<u64>(), degree in 0usize..=2) {
        let lat = TorusSpec::new(4, 2, HypercomplexFrame::left()).unwrap().lattice();
        let x = hkt_core::LatticeField::random(&lat, degree, 1.0, &mut rng(seed));
        let dd = cov_d(None, &cov_d(None, &x).unwrap()).unwrap();
        prop_assert!(dd.max_abs() < 1e-10);
    }

    #[test]
    fn lattice_star_squared_on_two_forms(seed in any::<u64>()) {
        let lat = TorusSpec::new(3, 2, HypercomplexFrame::left()).unwrap().lattice();
        let x = hkt_core::LatticeField::random(&lat, 2, 1.0, &mut rng(seed));
        let o = frame_orientation(&HypercomplexFrame::left()).unwrap();
        prop_assert!(lattice_star(&lattice_star(&x, o), o).axpy(-1.0, &x).max_abs() < 1e-14);
    }

    #[test]
    fn induced_structures_on_one_forms(seed in any::<u64>()) {
        let lat = TorusSpec::new(3, 2, HypercomplexFrame::left()).unwrap().lattice();
        let a = hkt_core::LatticeField::random(&lat, 1, 1.0, &mut rng(seed));
        let f = HypercomplexFrame::left();
        let [i, j, k] = f.structures().map(mat_f64);
        let ia = induced_structure(&i, &a).unwrap();
        let ja = induced_structure(&j, &a).unwrap();
        prop_assert!(induced_structure(&i, &ia).unwrap().axpy(1.0, &a).max_abs() < 1e-12);
        let ija = induced_structure(&i, &ja).unwrap();
        prop_assert!(ija.axpy(-1.0, &induced_structure(&k, &a).unwrap()).max_abs() < 1e-12);
    }

    #[test]
    fn degree_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, c01 in -2.0f64..2.0, c23 in -2.0f64..2.0, c02 in -2.0f64..2.0) {
        let omega = bundle::parse_form_spec("dx01 + dx23", 3).unwrap();
        let i = Complex64::i();
        let f1 = GridForm::constant(3, 2, &[(0b0011, i * c01), (0b0101, i * c02)]).unwrap();
        let f2 = GridForm::constant(3, 2, &[(0b1100, i * c23)]).unwrap();
        let combo = f1.scale(a.into()).add(&f2.scale(b.into())).unwrap();
        let d1 = bundle::degree(&f1, &omega, 1.0).unwrap();
        let d2 = bundle::degree(&f2, &omega, 1.0).unwrap();
        let d = bundle::degree(&combo, &omega, 1.0).unwrap();
        prop_assert!((d - (a * d1 + b * d2)).abs() < 1e-12);
    }

    #[test]
    fn exact_curvature_has_degree_zero(seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let grid = 4;
        let amps: Vec<f64> = (0..16).map(|_| r.random_range(-1.0..1.0)).collect();
        // a periodic imaginary 1-form built from a few Fourier modes
        let a = GridForm::from_fn(grid, 1, |mask, x| {
            let mu = mask.trailing_zeros() as usize;
            let t: f64 = x.iter().map(|&c| c as f64 / grid as f64).sum();
            let s = (2.0 * std::f64::consts::PI * t).sin() * amps[mu] + (2.0 * std::f64::consts::PI * x[mu] as f64 / grid as f64).cos() * amps[4 + mu];
            Complex64::new(0.0, s)
        });
        let f = a.exterior_d().unwrap();
        let omega = bundle::parse_form_spec("dx01 + dx23", grid).unwrap();
        prop_assert!(bundle::degree(&f, &omega, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn slope_scales_inversely_with_rank(deg in -50i32..50, rank in 1usize..8, k in 1usize..5) {
        let mu = slope(deg as f64, rank).unwrap();
        let scaled = slope(deg as f64 * k as f64, rank * k).unwrap();
        prop_assert!((mu - scaled).abs() <= 1e-15 * mu.abs().max(1.0));
        let sum = direct_sum_slope(&[(deg as f64, rank), (deg as f64, rank)]).unwrap();
        prop_assert!((sum - mu).abs() <= 1e-15 * mu.abs().max(1.0));
    }

    #[test]
    fn stability_is_monotone_in_total_slope(subs in prop::collection::vec(-5.0f64..5.0, 0..6), t in -6.0f64..6.0, dt in 0.0f64..3.0) {
        // raising the total slope can only improve the verdict
        prop_assert!(stability_compare(&subs, t) <= stability_compare(&subs, t + dt));
        let max = subs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v = stability_compare(&subs, t);
        prop_assert_eq!(v == Stability::Stable, subs.is_empty() || max < t);
    }
}

#[test]
fn slope_of_rank_zero_is_an_error() {
    assert!(slope(1.0, 0).is_err());
}

#[test]
fn axis_structures_have_consistent_orientation() {
    assert_eq!(frame_orientation(&HypercomplexFrame::left()).unwrap(), -frame_orientation(&HypercomplexFrame::right()).unwrap());
}
