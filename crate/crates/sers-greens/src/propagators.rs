//! Bare Hartree–Fock one-body Green's functions and polarization propagators.

use sers_core::{Complex64, MolecularModel};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// G^R_p(ω) = 1/(ω + iη − ε_p⁰).
pub fn hf_greens_retarded(model: &MolecularModel, p: usize, omega: f64, eta: f64) -> Complex64 {
    c(omega - model.energy(p), eta).inv()
}

/// Time-ordered G_p(ω): the pole sits above the real axis for holes and below for particles.
pub fn hf_greens_time_ordered(model: &MolecularModel, p: usize, omega: f64, eta: f64) -> Complex64 {
    let sign = if model.is_occupied(p) { -1.0 } else { 1.0 };
    c(omega - model.energy(p), sign * eta).inv()
}

/// [Π^R]_rq(ω) = (ρ_q⁰ − ρ_r⁰)/(ω + iη + ε_q⁰ − ε_r⁰).
pub fn polarization_propagator_retarded(model: &MolecularModel, r: usize, q: usize, omega: f64, eta: f64) -> Complex64 {
    let weight = model.rho(q) - model.rho(r);
    if weight == 0.0 {
        return c(0.0, 0.0);
    }
    weight * reduced_propagator_retarded(model, r, q, omega, eta)
}

/// Occupation-free element 1/(ω + iη + ε_q⁰ − ε_r⁰), the form that appears in
/// the transition polarizability and in the enhancement-factor denominators.
pub fn reduced_propagator_retarded(model: &MolecularModel, r: usize, q: usize, omega: f64, eta: f64) -> Complex64 {
    c(omega + model.energy(q) - model.energy(r), eta).inv()
}

/// Time-ordered Π_pq(ω) = (1−ρ_p)ρ_q/(ω + iη + ε_q − ε_p) − ρ_p(1−ρ_q)/(ω − iη + ε_q − ε_p).
pub fn polarization_propagator_time_ordered(
    model: &MolecularModel,
    p: usize,
    q: usize,
    omega: f64,
    eta: f64,
) -> Complex64 {
    let (rp, rq) = (model.rho(p), model.rho(q));
    let x = omega + model.energy(q) - model.energy(p);
    let mut out = c(0.0, 0.0);
    if (1.0 - rp) * rq != 0.0 {
        out += (1.0 - rp) * rq * c(x, eta).inv();
    }
    if rp * (1.0 - rq) != 0.0 {
        out -= rp * (1.0 - rq) * c(x, -eta).inv();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sers_core::{Orbital, Vec3C};

    fn two_level() -> MolecularModel {
        let d = Vec3C::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        MolecularModel::new(vec![Orbital::hole(-0.5), Orbital::particle(0.1)], &[(0, 1, d)], -0.2).unwrap()
    }

    #[test]
    fn greens_at_its_pole() {
        let m = MolecularModel::new(vec![Orbital::hole(0.0), Orbital::particle(1.0)], &[], 0.5).unwrap();
        let g = hf_greens_retarded(&m, 0, 0.0, 1e-3);
        assert!((g - c(0.0, -1000.0)).norm() < 1e-9);
        assert!(hf_greens_retarded(&m, 0, 1e12, 1e-3).norm() < 1e-11);
        assert!(hf_greens_retarded(&m, 0, -1e12, 1e-3).norm() < 1e-11);
    }

    #[test]
    fn greens_peak_on_grid() {
        let m = two_level();
        let h = 1e-3;
        let best = (0..2001)
            .map(|i| -1.0 + i as f64 * h)
            .max_by(|a, b| {
                hf_greens_retarded(&m, 1, *a, 1e-3).norm().total_cmp(&hf_greens_retarded(&m, 1, *b, 1e-3).norm())
            })
            .unwrap();
        assert!((best - 0.1).abs() <= h);
    }

    #[test]
    fn propagator_occupation_factor() {
        let m = two_level();
        assert_eq!(polarization_propagator_retarded(&m, 0, 0, 0.3, 1e-3), c(0.0, 0.0));
        assert_eq!(polarization_propagator_retarded(&m, 1, 1, 0.3, 1e-3), c(0.0, 0.0));
        let on_resonance = polarization_propagator_retarded(&m, 1, 0, 0.6, 1e-3);
        assert!((on_resonance - c(0.0, 1e-3).inv()).norm() < 1e-6);
    }
}
