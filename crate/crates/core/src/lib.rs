//! Length functions of Hitchin representations of the genus-2 surface group.
//!
//! For a representation `ρ: π₁(S) → SL_n(R)` in the Hitchin component, every
//! nontrivial curve class `γ` has real eigenvalues of distinct moduli
//! `|λ_1(γ)| > … > |λ_n(γ)|`, and `ℓ_i(γ) = log|λ_i(γ)|` extends linearly to
//! geodesic currents. This crate builds such representations (the regular
//! octagon Fuchsian point, its symmetric-power lifts, and Newton deformations
//! of those), computes the lengths robustly for arbitrarily long words, and
//! checks the identities and asymptotics they satisfy.
//!
//! Module map:
//! - [`word`]: letters, reduced words, conjugacy classes, enumeration
//! - [`rep`]: representations, evaluation, validation, deformation, files
//! - [`lengths`]: spectra, length vectors, eigenlines, orbit integrals, tables
//! - [`current`]: finite combinations of curve classes
//! - [`asymptotic`]: the `αᵐβ` ratio series and its limit

pub mod asymptotic;
pub mod current;
pub mod error;
pub mod format;
pub mod lengths;
pub mod rep;
pub mod scaled;
pub mod word;

pub use error::{Error, Result};
pub use lengths::{length_vector, LengthVector};
pub use rep::{build_octagon_fuchsian, evaluate, sym_power_lift, SurfaceRep};
pub use scaled::ScaledMatrix;
pub use word::{conjugacy_class, ConjugacyClass, Letter, Word};
