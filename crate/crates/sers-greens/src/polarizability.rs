//! Molecular, transition and plasma polarizabilities.

use sers_core::{Complex64, MolecularModel, Tensor3C, Vec3C};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// a ⊗ b as a tensor: (a ⊗ b)^{ξσ} = a^ξ b^σ.
fn outer(a: &Vec3C, b: &Vec3C) -> Tensor3C {
    a * b.transpose()
}

/// Linear HF polarizability
/// α^{ξσ}(ω) = Σ_pq ρ_p [d_qp^ξ d_pq^σ/(ε_q−ε_p+ω+iη) + d_qp^σ d_pq^ξ/(ε_q−ε_p−ω−iη)].
///
/// Hole–hole pairs cancel term by term, so only unoccupied q are summed.
pub fn molecular_polarizability(model: &MolecularModel, omega: f64, eta: f64) -> Tensor3C {
    let mut alpha = Tensor3C::zeros();
    for p in model.holes() {
        for q in model.particles() {
            let gap = model.energy(q) - model.energy(p);
            let (dqp, dpq) = (model.dipole(q, p), model.dipole(p, q));
            let forward = outer(dqp, dpq);
            alpha += forward * c(gap + omega, eta).inv() + forward.transpose() * c(gap - omega, -eta).inv();
        }
    }
    alpha
}

/// Raman transition polarizability α_{pq,rr}(ω_k, −ω_k′) through intermediate state r:
///
/// −α^{ξσ} = d_pr^ξ d_rq^σ/(ε_q−ε_r+ω_k+iη) + d_pr^σ d_rq^ξ/(ε_q−ε_r−ω_k′+iη).
///
/// Both time orderings are always included.
pub fn transition_polarizability(
    model: &MolecularModel,
    p: usize,
    q: usize,
    r: usize,
    omega_k: f64,
    omega_kp: f64,
    eta: f64,
) -> Tensor3C {
    let gap = model.energy(q) - model.energy(r);
    let direct = outer(model.dipole(p, r), model.dipole(r, q));
    -(direct * c(gap + omega_k, eta).inv() + direct.transpose() * c(gap - omega_kp, eta).inv())
}

/// Scalar plasma polarizability −1/(ω(ω+iγ) − Ω₀²).
pub fn rpa_scalar(omega0: f64, gamma: f64, omega: f64) -> Complex64 {
    -(c(omega, 0.0) * c(omega, gamma) - omega0 * omega0).inv()
}

/// Isotropic plasma polarizability tensor.
pub fn rpa_polarizability(omega0: f64, gamma: f64, omega: f64) -> Tensor3C {
    Tensor3C::from_diagonal_element(rpa_scalar(omega0, gamma, omega))
}
