//! Quantum description of a molecule near a metal particle.
//!
//! The molecule enters through Hartree–Fock orbital energies ε_p⁰,
//! occupations ρ_p⁰ and dipole elements ⟨p|−e𝐱|q⟩. The particle enters
//! through its plasma polarizability α_RPA and the dipole tensor Λ. The
//! particle-mediated self-energy Σ shifts (Δ = Re Σ) and broadens
//! (Γ = −2 Im Σ) molecular levels and, through the enhancement factors g
//! and g′, dresses the Raman transition amplitude.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyson;
pub mod polarizability;
pub mod propagators;
pub mod raman;
pub mod selfenergy;

pub use dyson::{
    interacting_greens, quasiparticle_energies, quasiparticle_energies_with, InteractingGreens, QuasiparticleOptions,
};
pub use polarizability::{molecular_polarizability, rpa_polarizability, rpa_scalar, transition_polarizability};
pub use propagators::{
    hf_greens_retarded, hf_greens_time_ordered, polarization_propagator_retarded, polarization_propagator_time_ordered,
    reduced_propagator_retarded,
};
pub use raman::{
    electronic_sers_amplitude, enhancement_factors, iqsers_numerator, normal_raman_intensity, raman_polarizability,
    raman_tmatrix, sers_intensity, sers_tmatrix, EnhancementFactors, ParticleCoupling, RamanChannel,
};
pub use selfenergy::{level_shift, level_width, self_energy_rpa, Flavor, SelfEnergy, SelfEnergyForm};
