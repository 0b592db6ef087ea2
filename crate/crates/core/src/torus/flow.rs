// SPDX-License-Identifier: Apache-2.0

//! Gradient descent on `‖F_A⁺‖²`.

use rand::Rng;

use super::lattice::{Connection, LatticeField};
use super::ops::{asd_residual, cov_codiff, curvature};
use crate::{Error, Result};

/// Step growth after an accepted step.
const GROWTH: f64 = 1.2;
/// Smallest step relative to the initial one before the flow gives up.
const MIN_STEP_RATIO: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct FlowOutcome {
    pub connection: Connection,
    /// `‖F⁺‖²` after each accepted step, starting with the initial value.
    pub energies: Vec<f64>,
    pub iterations: usize,
    pub rejected: usize,
    pub final_step: f64,
}

impl FlowOutcome {
    pub fn initial(&self) -> f64 {
        self.energies[0]
    }

    pub fn last(&self) -> f64 {
        *self.energies.last().unwrap_or(&f64::NAN)
    }

    pub fn reduction(&self) -> f64 {
        self.initial() / self.last()
    }

    pub fn is_monotone(&self) -> bool {
        self.energies.windows(2).all(|w| w[1] <= w[0])
    }
}

/// `‖F_A⁺‖²` in the L² norm.
pub fn energy(conn: &Connection, orientation: f64) -> Result<f64> {
    let (_, n) = asd_residual(&curvature(conn)?, orientation)?;
    Ok(n * n)
}

/// `2 d*_A F⁺`, projected to the band-limited space.
pub fn gradient(conn: &Connection, orientation: f64) -> Result<LatticeField> {
    let (plus, _) = asd_residual(&curvature(conn)?, orientation)?;
    Ok(cov_codiff(Some(conn), &plus)?.scaled(2.0).band_limited())
}

/// Descend from `a0` until `‖F⁺‖² ≤ target` or `max_iters` trial steps.
/// Steps that would increase the energy are halved and retried.
pub fn ym_flow(a0: &Connection, orientation: f64, step: f64, max_iters: usize, target: f64) -> Result<FlowOutcome> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!("flow step must be positive, got {step}")));
    }
    let mut conn = a0.clone();
    let mut e = energy(&conn, orientation)?;
    if !e.is_finite() {
        return Err(Error::NonFinite("initial energy"));
    }
    let mut energies = vec![e];
    let mut h = step;
    let mut rejected = 0;
    let mut iterations = 0;
    while iterations < max_iters && e > target && h > step * MIN_STEP_RATIO {
        iterations += 1;
        let g = gradient(&conn, orientation)?;
        if !g.is_finite() {
            return Err(Error::NonFinite("gradient"));
        }
        let trial = Connection::new(conn.field().axpy(-h, &g))?;
        let et = energy(&trial, orientation)?;
        if !et.is_finite() {
            return Err(Error::NonFinite("energy"));
        }
        if et <= e {
            conn = trial;
            e = et;
            energies.push(e);
            h *= GROWTH;
        } else {
            rejected += 1;
            h *= 0.5;
        }
    }
    Ok(FlowOutcome { connection: conn, energies, iterations, rejected, final_step: h })
}

/// `base + δ` with `δ` a zero-mean band-limited random 1-form, `max |δ| = eps`.
pub fn perturb<R: Rng>(base: &Connection, eps: f64, rng: &mut R) -> Result<Connection> {
    let noise = LatticeField::random(base.lattice(), 1, 1.0, rng).zero_mean();
    let m = noise.max_abs();
    let noise = if m > 0.0 { noise.scaled(eps / m) } else { noise };
    Connection::new(base.field().axpy(1.0, &noise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::HypercomplexFrame;
    use crate::torus::lattice::TorusSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_connection_is_a_fixed_point() {
        let lat = TorusSpec::new(4, 2, HypercomplexFrame::left()).unwrap().lattice();
        let a = Connection::trivial(&lat);
        let out = ym_flow(&a, 1.0, 1e-3, 10, 0.0).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.last(), 0.0);
        assert!(ym_flow(&a, 1.0, 0.0, 10, 0.0).is_err());
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let lat = TorusSpec::new(3, 2, HypercomplexFrame::left()).unwrap().lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = Connection::new(LatticeField::random(&lat, 1, 0.2, &mut rng)).unwrap();
        let dir = LatticeField::random(&lat, 1, 1.0, &mut rng);
        let g = gradient(&a, 1.0).unwrap();
        let h = 1e-6;
        let ep = energy(&Connection::new(a.field().axpy(h, &dir)).unwrap(), 1.0).unwrap();
        let em = energy(&Connection::new(a.field().axpy(-h, &dir)).unwrap(), 1.0).unwrap();
        let fd = (ep - em) / (2.0 * h);
        let an = crate::torus::ops::l2_inner(&g, &dir).unwrap();
        assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{fd} vs {an}");
    }
}
