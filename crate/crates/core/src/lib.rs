//! Algebraic Kähler curvature operators on ℂⁿ.
//!
//! The crate is organised bottom-up:
//!
//! * [`exterior`] – (p,q)-forms over ℂⁿ, the Kähler form, Lefschetz maps and the
//!   orthogonal projectors onto the U(n)-irreducible pieces Λ^{p,q}_k.
//! * [`lie`] – the Lie algebra u(n) ⊂ so(2n) ≅ Λ²ℝ²ⁿ, its action on forms and on
//!   curvature tensors, and the "hat" norm |T^𝔲|² = Σ_α |Ξ_α T|².
//! * [`curvature`] – Kähler curvature tensors, their operator on u(n), spectra,
//!   Ricci contractions and the orthogonal decomposition R = scal·R_{ℂPⁿ} + R₀ + B.
//! * [`bochner`] – the Weitzenböck curvature term on forms and the weighted
//!   eigenvalue conditions that drive the vanishing, rigidity and estimation
//!   statements.
//! * [`characters`] – torus characters of Λ^{p,q}, alternants and Weyl characters.
//! * [`format`], [`report`], [`suite`] – the `kco-v1` operator file, the JSON
//!   report document and the identity verification suite used by the CLI.

// index loops mirror the tensor notation
#![allow(clippy::needless_range_loop)]

pub mod bochner;
pub mod characters;
pub mod curvature;
pub mod error;
pub mod exterior;
pub mod format;
pub mod index;
pub mod lie;
pub mod report;
pub mod rng;
pub mod suite;
pub mod tensor;
pub mod tolerances;

pub use num_complex::Complex64 as C64;

pub use bochner::{HodgeReport, HodgeStatus, WeightedCondition};
pub use curvature::{CurvatureDecomposition, KahlerCurvature, Spectrum};
pub use error::{Error, Result};
pub use exterior::{ComplexModel, ComponentProjector, MultiIndexPair, PQForm};
pub use lie::{LieElement, StructureConstants, UnitaryAlgebra};
pub use tensor::Tensor4;
