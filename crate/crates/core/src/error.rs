// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("axis ({0}) is not a unit vector")]
    NonUnitAxis(String),
    #[error("matrix does not square to -Id")]
    NotAlmostComplex,
    #[error("wedge of degrees {0} and {1} exceeds top degree 4")]
    DegreeOverflow(usize, usize),
    #[error("form of degree {found} given where degree {expected} is required")]
    WrongDegree { expected: usize, found: usize },
    #[error("type ({p},{q}) does not match form degree {degree}")]
    TypeMismatch { p: usize, q: usize, degree: usize },
    #[error("metric is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("metric determinant is not a rational square; the Hodge star would be irrational")]
    IrrationalVolume,
    #[error("2-form is degenerate or its square is not invertible in the coefficient ring")]
    Degenerate,
    #[error("scale factor must be non-zero")]
    ZeroScale,
    #[error("metric is not Hermitian with respect to the given structure")]
    NotHermitian,
    #[error("Hopf multiplier must be a rational q > 1, got {0}")]
    InvalidMultiplier(String),
    #[error("invariant failed: {0}")]
    InvariantFailed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("kernel boundary is ill-conditioned: singular value gap {gap:.3e} below {threshold:.1e}")]
    IllConditioned { gap: f64, threshold: f64 },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("induced structure formulas disagree (defect {0:.3e})")]
    FormulaMismatch(f64),
    #[error("input is not in the horizontal slice (projection defect {0:.3e})")]
    NotInSlice(f64),
    #[error("curvature is not an imaginary scalar 2-form (real part {0:.3e})")]
    NotImaginary(f64),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("parse error: {0}")]
    Parse(String),
    /// An earlier failure reported again by a later check.
    #[error("{0}")]
    Repeated(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
