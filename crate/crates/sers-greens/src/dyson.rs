//! Dyson-resummed Green's function and diagonal quasiparticle energies.

use sers_core::{Complex64, Error, MolecularModel, Result};

use crate::selfenergy::SelfEnergy;

/// Ratio |Σ_pq|/|Σ_pp| above which the weak-coupling block inverse is suspect.
pub const WEAK_COUPLING_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractingGreens {
    pub value: Complex64,
    /// Set when some off-diagonal Σ_pq exceeds half of Σ_pp at this frequency.
    pub weak_coupling_violation: bool,
}

fn weak_coupling_violated(se: &SelfEnergy, omega: f64) -> bool {
    let m = se.matrix(omega);
    let n = se.n_orbitals();
    (0..n).any(|p| {
        let diag = m[(p, p)].norm();
        (0..n).any(|q| q != p && m[(p, q)].norm() > WEAK_COUPLING_RATIO * diag)
    })
}

fn dressed_diagonal(se: &SelfEnergy, model: &MolecularModel, p: usize, omega: f64) -> Complex64 {
    (Complex64::new(omega - model.energy(p), se.eta()) - se.element(p, p, omega)).inv()
}

/// 𝒢_pp(ω) = 1/(ω + iη − ε_p⁰ − Σ_pp(ω)); for p ≠ q the weak-coupling
/// off-diagonal element 𝒢_pp Σ_pq 𝒢_qq.
pub fn interacting_greens(
    se: &SelfEnergy,
    model: &MolecularModel,
    p: usize,
    q: usize,
    omega: f64,
) -> InteractingGreens {
    let violation = weak_coupling_violated(se, omega);
    if violation {
        log::warn!("weak-coupling condition |Sigma_pq| <= 0.5 |Sigma_pp| violated at omega = {omega}");
    }
    let value = if p == q {
        dressed_diagonal(se, model, p, omega)
    } else {
        dressed_diagonal(se, model, p, omega) * se.element(p, q, omega) * dressed_diagonal(se, model, q, omega)
    };
    InteractingGreens { value, weak_coupling_violation: violation }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiparticleOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for QuasiparticleOptions {
    fn default() -> Self {
        Self { damping: 0.5, tol: 1e-10, max_iter: 200 }
    }
}

/// Solves ε_p = ε_p⁰ + Δ_p(Re ε_p) − (i/2)Γ_p(Re ε_p) for every orbital by damped iteration.
pub fn quasiparticle_energies(se: &SelfEnergy, model: &MolecularModel) -> Result<Vec<Complex64>> {
    quasiparticle_energies_with(se, model, QuasiparticleOptions::default())
}

pub fn quasiparticle_energies_with(
    se: &SelfEnergy,
    model: &MolecularModel,
    opts: QuasiparticleOptions,
) -> Result<Vec<Complex64>> {
    (0..model.n_orbitals())
        .map(|p| {
            let bare = Complex64::new(model.energy(p), 0.0);
            let mut current = bare;
            let mut previous = current;
            for _ in 0..opts.max_iter {
                let target = bare + se.element(p, p, current.re);
                let next = current + (target - current) * opts.damping;
                previous = current;
                current = next;
                if (current - previous).norm() < opts.tol {
                    return Ok(current);
                }
            }
            Err(Error::QuasiparticleNonConvergence { orbital: p, last: [previous, current] })
        })
        .collect()
}
