//! Degeneracy and bifurcation instants for the product family
//! `g_s = g₁ ⊕ s·g₂` on `M₁ × M₂`, where `M₁` is closed and `M₂` has minimal
//! boundary, both with constant scalar curvature.
//!
//! The linearized Yamabe operator `J_s = Δ - R(s)/(m-1)` with Neumann
//! condition has the explicit eigenvalue branches
//! `σ_{i,j}(s) = (ρ_i - R₁/(m-1)) + (ρ_j - R₂/(m-1))/s` for `i + j > 0`.
//! Their zeros are the degeneracy instants of the family, and a jump of the
//! Morse index across an isolated instant certifies a bifurcation there.

pub mod bifurcation;
pub mod error;
pub mod oracle;
pub mod product;
pub mod scalar;
pub mod spectra;
pub mod verify;

pub use bifurcation::{
    branch_zero, classify_family, critical_indices, degeneracy_instants, index_jump,
    is_degenerate_pair, morse_index, AccumulationSide, BranchRef, ClassifiedInstant,
    CriticalIndices, DegeneracyInstant, EigenBranch, FamilyCase, FamilyClassification,
    IndexJump, BranchCase, Monotonicity, ScanWindow,
};
pub use error::{Error, Result};
pub use product::{homothety_reparametrization, Parametrization, ProductEigenvalue, ProductFamily};
pub use scalar::{NumericMode, Rational, Scalar};
pub use spectra::{FactorModel, FactorSpectrum, Level, SpectralUnit, SquaredLength};
