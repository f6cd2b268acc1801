//! Discrete-dipole response of a voxelized metal particle, the molecule's
//! first-order induced dipole, and the self-consistent coupling of the two.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod lattice;
mod molecule;
mod scf;
mod solver;

pub use lattice::{block, ellipsoid, sphere, voxel_polarizability, VoxelLattice};
pub use molecule::{
    interacting_molecular_polarizability, interacting_polarization_propagator, molecular_induced_dipole,
};
pub use scf::{self_consistent_solve, ResponseState, ScfOptions};
pub use solver::{
    assemble_system, particle_field_at_molecule, solve_dense, solve_induced_dipoles, solve_iterative, DdaSystem,
    SolverOptions,
};
