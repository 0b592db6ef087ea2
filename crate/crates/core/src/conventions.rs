// SPDX-License-Identifier: Apache-2.0

//! Sign and orientation conventions shared by every computation.
//!
//! The text in [`LEDGER`] is hashed into each verification report so that two
//! reports can only be compared when they were produced under the same
//! conventions.

use sha2::{Digest, Sha256};

use crate::exterior::{twisted_d, RationalForm, ScalarField};
use crate::quaternion::{structure_matrix, AxisTriple, RatMat4, Side};
use crate::{Error, Result};

/// Global sign `σ` in `d^c_L = σ (−1)^m L ∘ d ∘ L`. Chosen so that `dd^c_L φ`
/// is a positive (1,1)-form for `φ = |x|²`; with it `d^c f = −df ∘ L` and
/// `d^c = √−1 (∂̄ − ∂)`.
pub const TWIST_SIGN: i32 = -1;

/// Ratio `T / H` between the Bismut torsion `L dω` and `H = d^c_L ω` on a
/// (1,1)-form `ω`; equals [`TWIST_SIGN`] because `Lω = ω`.
pub const TORSION_RATIO: i32 = TWIST_SIGN;

/// Sign `s` in `ω̃(a₁, a₂) = s · g_{L²}(L̃a₁, a₂)` on the flat torus.
pub const MODULI_FORM_SIGN: f64 = -1.0;

pub const LEDGER: &str = "\
coordinates: x = x0 + x1 i + x2 j + x3 k; structure matrices act on columns (x0, x1, x2, x3)
left frame: (L_i, L_j, L_k), L_u x = u x
right frame: (R_i, R_j, -R_k), R_u x = x u
orientation: dx0^dx1^dx2^dx3
form action: (L a)(X1..Xm) = a(L X1, .., L Xm); covector coefficients transform by L^T
twisted differential: d^c_L = -(-1)^m L d L; d^c f = -df o L; dd^c |x|^2 = 4 omega_I > 0
type (1,0) w.r.t. L: eigenvalue +i of L on 1-forms; (p,q) via derivation eigenvalue i(p-q)
hermitian form: omega_L(X, Y) = g(L X, Y); metric g(X, Y) = omega_L(X, L Y)
bismut torsion: T = L d omega = -H with H = d^c_L omega_L
hopf forms: omega_L = dd^c_L phi / phi = 4 omega_L^eucl / phi
lambda: a ^ omega = (Lambda a) (omega ^ omega / 2)
su(n) basis: T_a = i lambda_a / sqrt2 (generalized Gell-Mann), -tr(T_a T_b) = delta_ab
L2 metric: (a1, a2) = -int tr(a1 ^ *a2); torus periods 1
induced structure: L~ a = i (a^{0,1} - a^{1,0}) = -L a
moduli hermitian form: int omega_L ^ tr(a1 ^ a2) = -g_L2(L~ a1, a2)
degree: deg = (i / 2 pi) int F ^ omega
even grids: Nyquist modes excluded from the band-limited field space
";

/// Hex SHA-256 of [`LEDGER`].
pub fn ledger_hash() -> String {
    Sha256::digest(LEDGER.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Check that `dd^c_I φ` is positive: the symmetric form `ω(·, I·)` must be
/// positive definite.
pub fn self_test() -> Result<()> {
    let i = structure_matrix(Side::Left, &AxisTriple::i());
    let phi = RationalForm::function(ScalarField::phi());
    let ddc = twisted_d(&i, &phi)?.exterior_d()?;
    let omega = RatMat4::from_fn(|r, c| {
        if r == c {
            return crate::rat(0, 1);
        }
        let (lo, hi, s) = if r < c { (r, c, 1) } else { (c, r, -1) };
        let coeff = ddc.coeff((1 << lo) | (1 << hi));
        let v = coeff.as_constant().map(|g| g.re).unwrap_or_else(|| crate::rat(0, 1));
        if s > 0 {
            v
        } else {
            -v
        }
    });
    let g = &omega * &i;
    let positive = g.is_symmetric() && g.leading_minors().iter().all(num_traits::Signed::is_positive);
    if positive {
        Ok(())
    } else {
        Err(Error::InvariantFailed("dd^c phi is not a positive (1,1)-form".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_self_test_passes() {
        self_test().unwrap();
    }

    #[test]
    fn hash_is_stable_hex() {
        let h = ledger_hash();
        assert_eq!(h.len(), 64);
        assert_eq!(h, ledger_hash());
    }
}
