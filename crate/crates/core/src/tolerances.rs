//! Numerical thresholds shared by constructors, checkers and the verification suite.

/// Symmetry / Hermitian-ness of constructed inputs.
pub const CONSTRUCTION: f64 = 1e-12;

/// Bianchi defect accepted when loading or converting an operator matrix,
/// relative to `max(1, ‖M‖_F)`.
pub const BIANCHI: f64 = 1e-10;

/// Relative tolerance for identities between derived quantities.
pub const IDENTITY_REL: f64 = 1e-9;

/// Singular values below this (relative to the largest) count as zero when
/// extracting kernels and images for the component projectors.
pub const RANK: f64 = 1e-7;

/// Margins within this band of zero are reported as boundary cases.
pub const BOUNDARY: f64 = 1e-12;

/// Minimum pairwise separation of torus points used in alternants.
pub const TORUS_SEPARATION: f64 = 1e-3;

/// Relative comparison `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
