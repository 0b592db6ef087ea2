// SPDX-License-Identifier: Apache-2.0

//! Named check suites assembled into [`VerificationReport`]s.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{self, parse_form_spec};
use crate::conventions::{self, MODULI_FORM_SIGN, TORSION_RATIO};
use crate::hermitian::{bismut_torsion, hkt_report, Metric};
use crate::hopf::{
    axis_consistency, build_geometry, build_hopf, common_metric, gauduchon_defects, verify_44, verify_descent,
    verify_strong_hkt, FormSource, HopfGeometry, HopfSpec,
};
use crate::quaternion::{verify_frame, AxisTriple, HypercomplexFrame, Side};
use crate::rat;
use crate::report::{Defect, VerificationReport, PLUMBING};
use crate::torus::flow::{energy, perturb, ym_flow};
use crate::torus::ops::frame_orientation;
use crate::torus::slice::{
    coulomb_defect, gauge_overlap, horizontal_slice, moduli_form_consistency, subspace_distance,
    verify_moduli_structure,
};
use crate::torus::{snapshot, Connection, LatticeField, TorusSpec};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Random slice pairs used for the moduli Hermitian form.
pub const FORM_PAIRS: usize = 100;
/// Relative agreement required between `ω̃` and `g(L̃·,·)`.
pub const FORM_TOL: f64 = 1e-8;
/// Required decrease of `‖F⁺‖²` along the flow.
pub const FLOW_REDUCTION: f64 = 1e6;
pub const FLOW_MAX_ITERS: usize = 10_000;
pub const FLOW_STEP: f64 = 1e-3;

/// Rational points of the unit sphere used to spot-check `aI + bJ + cK`.
pub fn sample_axes() -> Vec<AxisTriple> {
    vec![
        AxisTriple::i(),
        AxisTriple::new(rat(3, 5), rat(4, 5), rat(0, 1)).unwrap_or_else(|_| AxisTriple::i()),
        AxisTriple::new(rat(2, 3), rat(-1, 3), rat(2, 3)).unwrap_or_else(|_| AxisTriple::i()),
        AxisTriple::stereographic(rat(1, 2), rat(1, 3)),
        AxisTriple::stereographic(rat(-2, 1), rat(5, 7)),
        AxisTriple::stereographic(rat(3, 4), rat(-1, 1)),
    ]
}

fn repeat(e: &Error) -> Error {
    Error::Repeated(e.to_string())
}

fn ok(pass: bool, d: Defect) -> Result<(bool, Defect, Option<String>)> {
    Ok((pass, d, None))
}

fn with_detail(pass: bool, d: Defect, detail: String) -> Result<(bool, Defect, Option<String>)> {
    Ok((pass, d, Some(detail)))
}

/// Exact checks on the quaternionic Hopf surface with multiplier `q`.
pub fn hopf_suite(spec: &HopfSpec, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(seed);
    rep.run("conventions: dd^c phi is positive", PLUMBING, || {
        conventions::self_test().map(|_| (true, Defect::ExactZero, None))
    });
    let geo = match build_hopf(spec.clone()) {
        Ok(g) => g,
        Err(e) => {
            rep.run("hopf: build geometry", "omega_L = dd^c_L phi / phi descends", || Err(e));
            return rep;
        }
    };
    rep.run("hopf: six structures induce one metric", "common metric of the six Hermitian forms", || {
        let (equal, declared) = common_metric(&geo);
        with_detail(equal && declared, Defect::exact(equal), "g = 4/phi * Euclidean".into())
    });
    hopf_torsion_checks(&mut rep, &geo);
    rep.run("hopf: descent of omega_L", "omega_L are <q>-invariant", || {
        let d = verify_descent(&geo)?;
        let all = d.omegas.iter().all(|&b| b);
        ok(all, Defect::exact(all))
    });
    rep.run("hopf: descent of H+ and H-", "torsion forms are <q>-invariant", || {
        let d = verify_descent(&geo)?;
        ok(d.h_plus && d.h_minus, Defect::exact(d.h_plus && d.h_minus))
    });
    rep.run("hopf: descent control d(phi) not invariant", PLUMBING, || {
        let d = verify_descent(&geo)?;
        ok(!d.dphi_control, Defect::exact(!d.dphi_control))
    });
    rep.run("hopf: Gauduchon for all six structures", "dd^c_L omega_L = 0", || {
        let defects = gauduchon_defects(&geo)?;
        let zero = defects.iter().all(|d| d.is_zero());
        ok(zero, Defect::exact(zero))
    });
    rep.run("hopf: torsion ratio T/H", "Bismut torsion L d omega against d^c_L omega", || {
        for l in geo.structures() {
            bismut_torsion(&geo.metric, l)?;
        }
        with_detail(true, Defect::ExactZero, format!("T = {TORSION_RATIO} * H for all six structures"))
    });
    rep.run("hopf: HKT and del Omega = 0 (left)", "hyperhermitian surfaces are HKT", || {
        let r = hkt_report(&geo.metric, &geo.left)?;
        ok(r.is_hkt() && r.omega_is_20 && r.del_omega == r.del_omega_twisted, Defect::exact(r.del_omega.is_zero()))
    });
    for (side, label) in [(Side::Left, "left"), (Side::Right, "right")] {
        rep.run(&format!("hopf: axis sphere ({label}, 6 rational axes)"), "aI + bJ + cK share g and H", || {
            let res = axis_consistency(&geo, side, &sample_axes())?;
            let all = res.iter().all(|&(m, h)| m && h);
            ok(all, Defect::exact(all))
        });
    }
    rep
}

fn hopf_torsion_checks(rep: &mut VerificationReport, geo: &HopfGeometry) {
    for side in [Side::Left, Side::Right] {
        let (label, pm) = match side {
            Side::Left => ("left", "+"),
            Side::Right => ("right", "-"),
        };
        let r = verify_strong_hkt(geo, side);
        rep.run(&format!("hopf: d^c_L omega_L agree ({label})"), "d^c_I omega_I = d^c_J omega_J = d^c_K omega_K", || {
            let r = r.as_ref().map_err(repeat)?;
            ok(r.equal(), Defect::exact(r.equal()))
        });
        rep.run(&format!("hopf: dH{pm} = 0"), "strong HKT", || {
            let r = r.as_ref().map_err(repeat)?;
            ok(r.closed(), Defect::exact(r.closed()))
        });
        rep.run(&format!("hopf: H{pm} != 0"), "torsion is nonzero", || {
            let r = r.as_ref().map_err(repeat)?;
            ok(r.nonzero(), Defect::None)
        });
    }
    let r44 = verify_44(geo);
    rep.run("hopf: H+ + H- = 0", "(4,4)-structure: T+ = -T-", || {
        let r = r44.as_ref().map_err(repeat)?;
        ok(r.opposition && !r.hyperkahler_degenerate, Defect::exact(r.opposition))
    });
    rep.run("hopf: independence rank 6", "left and right frames are independent", || {
        let r = r44.as_ref().map_err(repeat)?;
        with_detail(r.independence_rank == 6, Defect::None, format!("rank {}", r.independence_rank))
    });
    rep.run("hopf: cross pairs bihermitian", "every (L+, L-) is bi-Hermitian", || {
        let r = r44.as_ref().map_err(repeat)?;
        let all = r.cross_pairs.iter().flatten().all(|&b| b);
        ok(all, Defect::exact(all))
    });
}

/// Exact checks of the flat hyperkähler control.
pub fn flat_suite(seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(seed);
    for (frame, label) in [(HypercomplexFrame::left(), "left"), (HypercomplexFrame::right(), "right")] {
        rep.run(&format!("flat: {label} frame quaternion relations"), "I^2 = J^2 = K^2 = -Id, IJ = -JI = K", || {
            let f = verify_frame(&frame);
            if f.passed() {
                return ok(true, Defect::ExactZero);
            }
            with_detail(false, Defect::ExactNonzero, f.failures.join(", "))
        });
        rep.run(&format!("flat: {label} frame torsion vanishes"), "hyperkahler iff H = 0", || {
            let r = hkt_report(&Metric::euclidean(), &frame)?;
            let zero = r.is_hyperkahler();
            ok(zero, Defect::exact(zero))
        });
    }
    rep.run("flat: (4,4) control is hyperkahler-degenerate", "zero-torsion (4,4) control", || {
        let spec = HopfSpec::new(rat(2, 1))?;
        let geo = build_geometry(spec, HypercomplexFrame::left(), HypercomplexFrame::right(), FormSource::Euclidean)?;
        let r = verify_44(&geo)?;
        ok(r.passed() && r.hyperkahler_degenerate, Defect::exact(r.opposition))
    });
    rep.run("flat: swapped frames fail (4,4)", PLUMBING, || {
        let spec = HopfSpec::new(rat(2, 1))?;
        let geo = build_geometry(spec, HypercomplexFrame::left(), HypercomplexFrame::left(), FormSource::Hopf)?;
        let r = verify_44(&geo)?;
        ok(!r.opposition && r.independence_rank == 3, Defect::exact(r.opposition))
    });
    rep
}

#[derive(Clone, Debug)]
pub struct ModuliOptions {
    pub grid: usize,
    pub rank: usize,
    pub tol: f64,
    /// Perturbation size for the flow check; no flow when `None`.
    pub flow: Option<f64>,
    pub snapshot: Option<std::path::PathBuf>,
}

/// Numerical checks of the instanton tangent model at the trivial connection.
pub fn moduli_suite(opts: &ModuliOptions, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(seed);
    let spec = match TorusSpec::new(opts.grid, opts.rank, HypercomplexFrame::left()) {
        Ok(s) => s,
        Err(e) => {
            rep.run("moduli: torus spec", PLUMBING, || Err(e));
            return rep;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lat = spec.lattice();
    let conn = Connection::trivial(&lat);
    let tol = opts.tol;
    let structures: Vec<_> = spec.frame.structures().into_iter().cloned().collect();
    let want = 4 * (opts.rank * opts.rank - 1);
    let mut slices = Vec::new();
    rep.run("moduli: slice dimension", "tangent space {d_A^+ a = 0, Lambda d^c_L a = 0}", || {
        slices = structures.iter().map(|l| horizontal_slice(&spec, &conn, l, tol)).collect();
        let tb = slices[0].as_ref().map_err(repeat)?;
        with_detail(tb.dim() == want, Defect::None, format!("dim {} (expected {want}), gap {:.2e}", tb.dim(), tb.gap))
    });
    rep.run("moduli: slice equations hold on basis", "tangent space {d_A^+ a = 0, Lambda d^c_L a = 0}", || {
        let tb = slices[0].as_ref().map_err(repeat)?;
        ok(tb.slice_defect < tol, Defect::Norm(tb.slice_defect))
    });
    rep.run("moduli: slice is the same for I, J, K", "tangent space is the same for all L", || {
        let mut worst = 0.0f64;
        let first = slices[0].as_ref().map_err(repeat)?;
        for other in &slices[1..] {
            worst = worst.max(subspace_distance(first, other.as_ref().map_err(repeat)?)?);
        }
        ok(worst < tol, Defect::Norm(worst))
    });
    match &slices[0] {
        Ok(tb) => {
            let structure = verify_moduli_structure(tb, tol);
            for d in &structure.defects {
                let reference = if d.name.starts_with("g(") {
                    "L2 metric is Hermitian for L~"
                } else {
                    "induced structures anticommute and compose"
                };
                rep.run(&format!("moduli: {}", d.name), reference, || ok(d.defect < tol, Defect::Norm(d.defect)));
            }
            let mut form_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0f0f);
            rep.run("moduli: omega~ = -g(I~ ., .)", "moduli Hermitian form against the L2 metric", || {
                let (sign, consistent, worst) = moduli_form_consistency(tb, FORM_PAIRS, &mut form_rng)?;
                let pass = consistent && sign == MODULI_FORM_SIGN && worst < FORM_TOL;
                with_detail(pass, Defect::Norm(worst), format!("sign {sign:+} over {FORM_PAIRS} pairs"))
            });
            rep.run("moduli: gauge orthogonality", "slice is L2-orthogonal to d_A xi", || {
                let xis: Vec<LatticeField> = (0..8).map(|_| LatticeField::random(&lat, 0, 1.0, &mut rng)).collect();
                let w = gauge_overlap(tb, &xis)?;
                ok(w < tol, Defect::Norm(w))
            });
        }
        Err(e) => {
            rep.run("moduli: quaternionic identities", "induced structures anticommute and compose", || Err(repeat(e)));
        }
    }
    rep.run("moduli: Coulomb identity", "d*_A a = Lambda d^c_L a + *(d^c_L omega_L ^ a)", || {
        let orientation = frame_orientation(&spec.frame)?;
        let mut worst = 0.0f64;
        for l in &structures {
            for _ in 0..4 {
                let a = LatticeField::random(&lat, 1, 1.0, &mut rng);
                worst = worst.max(coulomb_defect(&conn, l, &a, orientation)?);
            }
        }
        ok(worst < tol, Defect::Norm(worst))
    });
    let mut final_conn = conn.clone();
    if let Some(eps) = opts.flow {
        let mut flow_rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf10e);
        let mut outcome = Err(Error::Repeated("flow did not run".into()));
        rep.run("flow: |F+|^2 is non-increasing", "ASD flow decreases |F+|^2", || {
            outcome = perturb(&conn, eps, &mut flow_rng).and_then(|a0| {
                let e0 = energy(&a0, 1.0)?;
                ym_flow(&a0, 1.0, FLOW_STEP, FLOW_MAX_ITERS, e0 / FLOW_REDUCTION / 10.0)
            });
            let o = outcome.as_ref().map_err(repeat)?;
            ok(o.is_monotone(), Defect::None)
        });
        rep.run("flow: |F+|^2 reduced by 1e6", "ASD flow decreases |F+|^2", || {
            let o = outcome.as_ref().map_err(repeat)?;
            with_detail(
                o.reduction() >= FLOW_REDUCTION,
                Defect::Norm(o.last()),
                format!("from {:.3e} to {:.3e} in {} iterations", o.initial(), o.last(), o.iterations),
            )
        });
        if let Ok(o) = &outcome {
            final_conn = o.connection.clone();
        }
    }
    if let Some(path) = &opts.snapshot {
        rep.run("snapshot: write connection", PLUMBING, || {
            snapshot::save(final_conn.field(), path)?;
            let back = snapshot::load(path)?;
            let err = back.axpy(-1.0, final_conn.field()).max_abs();
            with_detail(err < 1e-12, Defect::Norm(err), path.display().to_string())
        });
    }
    rep
}

/// Degree and slope of a constant line-bundle curvature on the unit torus.
pub fn degree_suite(f_spec: &str, omega_spec: &str, rank: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(seed);
    rep.run("degree: (i/2pi) int F ^ omega", "deg = (1/2pi) int F ^ omega up to normalization", || {
        let f = parse_form_spec(f_spec, 3)?;
        let omega = parse_form_spec(omega_spec, 3)?;
        let deg = bundle::degree(&f, &omega, 1.0)?;
        let mu = bundle::slope(deg, rank)?;
        with_detail(deg.is_finite(), Defect::None, format!("degree {deg:.12} slope {mu:.12} rank {rank}"))
    });
    rep
}

/// Everything: Hopf, flat control, moduli at the default grid and a degree.
pub fn full_suite(q: &HopfSpec, seed: u64) -> VerificationReport {
    let mut rep = hopf_suite(q, seed);
    rep.merge(flat_suite(seed));
    rep.merge(moduli_suite(&ModuliOptions { grid: 4, rank: 2, tol: 1e-10, flow: Some(1e-2), snapshot: None }, seed));
    rep.merge(degree_suite("-2*pi*i*dx01", "dx01 + dx23", 1, seed));
    rep
}

/// Write `rep` to `path` when given.
pub fn emit(rep: &VerificationReport, path: Option<&Path>, format: crate::report::Format) -> Result<String> {
    let text = rep.render(format)?;
    if let Some(p) = path {
        std::fs::write(p, &text)?;
    }
    Ok(text)
}
