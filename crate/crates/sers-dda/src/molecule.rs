//! First-order molecular response with self-energy-dressed orbitals.
//!
//! Level shifts and widths are taken at the bare orbital energies (slowly
//! varying self-energy). Widths enter as magnitudes: the retarded hole width
//! −2 Im Σ_pp is non-positive, and the hole and particle lifetimes add.

use sers_core::{Complex64, MolecularModel, Tensor3C, Vec3C};
use sers_greens::SelfEnergy;

struct Dressing {
    shift: Vec<f64>,
    half_width: Vec<f64>,
}

fn dressing(model: &MolecularModel, se: &SelfEnergy) -> Dressing {
    let n = model.n_orbitals();
    let at = |p: usize| model.energy(p);
    Dressing {
        shift: (0..n).map(|p| se.shift(p, at(p))).collect(),
        half_width: (0..n).map(|p| 0.5 * se.width(p, at(p)).abs()).collect(),
    }
}

/// [Π^R_M]_pqrs(ω) = δ_pr δ_sq / (ω + iη − ε_p + ε_q − Δ_p + Δ_q + (i/2)(|Γ_p| + |Γ_q|)).
#[allow(clippy::too_many_arguments)]
pub fn interacting_polarization_propagator(
    model: &MolecularModel,
    se: &SelfEnergy,
    p: usize,
    q: usize,
    r: usize,
    s: usize,
    omega: f64,
    eta: f64,
) -> Complex64 {
    if p != r || s != q {
        return Complex64::new(0.0, 0.0);
    }
    let d = dressing(model, se);
    let re = omega - (model.energy(p) + d.shift[p]) + (model.energy(q) + d.shift[q]);
    Complex64::new(re, eta + d.half_width[p] + d.half_width[q]).inv()
}

/// α(ω) = Σ_{p occ, q unocc} [d_qp d_pqᵀ Π_pqpq(ω) − (d_qp d_pqᵀ)ᵀ Π_qpqp(ω)], the
/// linear polarizability with dressed propagators. With Σ = 0 it is the bare
/// particle–hole polarizability.
pub fn interacting_molecular_polarizability(model: &MolecularModel, se: &SelfEnergy, omega: f64, eta: f64) -> Tensor3C {
    let d = dressing(model, se);
    let mut alpha = Tensor3C::zeros();
    for p in model.holes() {
        for q in model.particles() {
            let gap = (model.energy(q) + d.shift[q]) - (model.energy(p) + d.shift[p]);
            let damping = eta + d.half_width[p] + d.half_width[q];
            let forward = model.dipole(q, p) * model.dipole(p, q).transpose();
            alpha += forward * Complex64::new(gap + omega, damping).inv()
                + forward.transpose() * Complex64::new(gap - omega, -damping).inv();
        }
    }
    alpha
}

/// d_M⁽¹⁾(ω) = α(ω)·E_total.
pub fn molecular_induced_dipole(
    model: &MolecularModel,
    se: &SelfEnergy,
    e_total: &Vec3C,
    omega: f64,
    eta: f64,
) -> Vec3C {
    interacting_molecular_polarizability(model, se, omega, eta) * e_total
}
