// SPDX-License-Identifier: Apache-2.0

//! Spectral gauge theory on the flat hyperkähler 4-torus `ℝ⁴/ℤ⁴`.
//!
//! Fields are su(n)-valued forms sampled on an `N⁴` grid and differentiated
//! exactly in Fourier space, so the linearized instanton complex at a constant
//! connection decouples mode by mode.

pub mod algebra;
pub mod flow;
mod lattice;
pub mod ops;
pub mod slice;
pub mod snapshot;
pub mod spectral;

pub use algebra::LieAlgebra;
pub use flow::{perturb, ym_flow, FlowOutcome};
pub use lattice::{Connection, Lattice, LatticeField, TorusSpec};
pub use ops::{
    asd_residual, curvature, he_residual, induced_structure, l2_inner, l2_norm, ConstForm, HEReport,
};
pub use slice::{
    horizontal_slice, moduli_hermitian_form, subspace_distance, verify_moduli_structure, ModuliStructureReport,
    TangentBasis,
};
