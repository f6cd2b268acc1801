//! Physical constants in Hartree atomic units.

/// Speed of light in atomic units.
pub const C_LIGHT: f64 = 137.035999;

/// Default broadening standing in for the positive infinitesimal (hartree).
pub const DEFAULT_ETA: f64 = 1e-3;

/// Angular frequency in hartree. Negative values are used for the
/// emission side of Raman bookkeeping (−ω_k′).
pub type Frequency = f64;
