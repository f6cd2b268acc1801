//! Molecule ↔ particle self-consistency by damped fixed-point iteration.
//!
//! The self-energy is held fixed during the loop; only the induced dipoles
//! are iterated.

use nalgebra::{DVector, Dyn, LU};
use sers_core::{Complex64, Error, MolecularModel, Result, Vec3C};
use sers_greens::SelfEnergy;

use crate::lattice::VoxelLattice;
use crate::molecule::interacting_molecular_polarizability;
use crate::solver::{assemble_system, solve_iterative, DdaSystem, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfOptions {
    /// Linear mixing m in d ← (1−m)d_old + m·d_new.
    pub mixing: f64,
    /// Convergence threshold on the largest relative dipole change.
    pub tol: f64,
    pub max_iter: usize,
    pub solver: SolverOptions,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self { mixing: 0.5, tol: 1e-8, max_iter: 100, solver: SolverOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseState {
    pub particle_dipoles: Vec<Vec3C>,
    pub molecular_dipole: Vec3C,
    pub iteration: usize,
    /// Largest relative dipole change in the final iteration.
    pub residual: f64,
    pub history: Vec<f64>,
}

impl ResponseState {
    /// d_M + Σ_j p_j.
    pub fn total_dipole(&self) -> Vec3C {
        self.molecular_dipole + self.particle_dipoles.iter().sum::<Vec3C>()
    }
}

enum Factored {
    Dense(LU<Complex64, Dyn, Dyn>),
    Iterative(SolverOptions),
}

struct ParticleSolver {
    sys: DdaSystem,
    method: Factored,
}

impl ParticleSolver {
    fn new(lattice: &VoxelLattice, omega: f64, opts: SolverOptions) -> Result<Self> {
        let sys = assemble_system(lattice, omega)?;
        let method = if sys.n_voxels() <= opts.dense_threshold {
            Factored::Dense(sys.dense_matrix().lu())
        } else {
            Factored::Iterative(opts)
        };
        Ok(Self { sys, method })
    }

    fn solve(&self, b: &[Complex64]) -> Result<Vec<Vec3C>> {
        if self.sys.n_voxels() == 1 {
            return Ok(vec![self.sys.alpha(0) * Vec3C::new(b[0], b[1], b[2])]);
        }
        let x: Vec<Complex64> = match &self.method {
            Factored::Dense(lu) => lu
                .solve(&DVector::from_column_slice(b))
                .ok_or_else(|| Error::resonance("DDA system matrix", "LU factorization is singular"))?
                .iter()
                .copied()
                .collect(),
            Factored::Iterative(opts) => solve_iterative(&self.sys, b, opts)?.0,
        };
        Ok(x.chunks(3).map(|c| Vec3C::new(c[0], c[1], c[2])).collect())
    }
}

fn relative_change(new: &Vec3C, old: &Vec3C) -> f64 {
    let diff = (new - old).norm();
    let scale = new.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Alternates the molecular response to E₀ + E_P with the particle response to
/// E₀ + E_M until the largest relative dipole change drops below `tol`.
#[allow(clippy::too_many_arguments)]
pub fn self_consistent_solve(
    model: &MolecularModel,
    se: &SelfEnergy,
    lattice: &VoxelLattice,
    omega: f64,
    eta: f64,
    e0: Vec3C,
    opts: &ScfOptions,
) -> Result<ResponseState> {
    if !(opts.mixing > 0.0 && opts.mixing <= 1.0) {
        return Err(Error::Domain(format!("mixing must lie in (0, 1], got {}", opts.mixing)));
    }
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::Domain("tolerance must be positive and max_iter nonzero".into()));
    }
    let alpha_m = interacting_molecular_polarizability(model, se, omega, eta);
    let mut d = alpha_m * e0;
    if lattice.is_empty() {
        return Ok(ResponseState {
            particle_dipoles: Vec::new(),
            molecular_dipole: d,
            iteration: 1,
            residual: 0.0,
            history: vec![0.0],
        });
    }

    let solver = ParticleSolver::new(lattice, omega, opts.solver)?;
    let lambdas: Vec<_> = (0..lattice.len()).map(|j| lattice.molecule_tensor(j)).collect();
    let particle_response = |d: &Vec3C| -> Result<Vec<Vec3C>> {
        let b: Vec<Complex64> = lambdas
            .iter()
            .flat_map(|l| {
                let e = e0 + l * d;
                [e[0], e[1], e[2]]
            })
            .collect();
        solver.solve(&b)
    };

    let mut p = particle_response(&d)?;
    let m = Complex64::new(opts.mixing, 0.0);
    let mut history = Vec::with_capacity(opts.max_iter);
    for iteration in 1..=opts.max_iter {
        let e_p: Vec3C = lambdas.iter().zip(&p).map(|(l, pj)| l * pj).sum();
        let d_new = d * (1.0 - m) + alpha_m * (e0 + e_p) * m;
        let p_new = particle_response(&d_new)?;
        let residual =
            p_new.iter().zip(&p).map(|(a, b)| relative_change(a, b)).fold(relative_change(&d_new, &d), f64::max);
        history.push(residual);
        d = d_new;
        p = p_new;
        if !residual.is_finite() {
            break;
        }
        if residual < opts.tol {
            return Ok(ResponseState { particle_dipoles: p, molecular_dipole: d, iteration, residual, history });
        }
    }
    Err(Error::NonConvergence { what: "molecule-particle self-consistency".into(), history })
}
