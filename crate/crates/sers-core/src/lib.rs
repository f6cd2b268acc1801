//! Shared building blocks for the SERS simulation crates.
//!
//! Everything is in Hartree atomic units (ħ = e = mₑ = 1), so energies and
//! angular frequencies are the same number and e²/m prefactors drop out.
//! The positive infinitesimal of the many-body formulas is carried as a
//! finite broadening `eta`.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod mode;
pub mod model;
pub mod particle;
pub mod tensor;
pub mod units;

pub use error::{Error, Result};
pub use field::FieldConfig;
pub use mode::{harmonic_matrix_element, vibrational_matrix_element, VibrationalMode};
pub use model::{MolecularModel, Orbital};
pub use particle::{Drude, ParticleModel, Voxel};
pub use tensor::{dipole_tensor, Geometry, Tensor3C, Vec3, Vec3C};

pub use num_complex::Complex64;
