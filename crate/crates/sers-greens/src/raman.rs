//! Normal and surface-enhanced Raman amplitudes and intensities.
//!
//! Intermediate states r are restricted to the occupation class of the
//! reference state q (hole–hole or particle–particle); particle–hole
//! intermediates do not contribute at this order and are rejected. Field
//! amplitudes are taken per unit polarization, so the T-matrix values are
//! reported up to the common field normalization that cancels in I/I₀.

use sers_core::{Complex64, Drude, Error, FieldConfig, Geometry, MolecularModel, Result, Tensor3C, VibrationalMode};

use crate::polarizability::{rpa_polarizability, transition_polarizability};
use crate::propagators::reduced_propagator_retarded;
use crate::selfenergy::SelfEnergy;

/// Enhancement-factor denominators below this magnitude are resonant.
pub const MIN_DENOMINATOR: f64 = 1e-12;

/// Particle as seen from the molecule: dipole tensor and plasma response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleCoupling {
    pub lambda: Tensor3C,
    pub drude: Drude,
}

impl ParticleCoupling {
    pub fn new(geometry: &Geometry, drude: Drude) -> Self {
        Self { lambda: geometry.lambda(), drude }
    }

    /// Particle at infinite distance: Λ = 0.
    pub fn decoupled(drude: Drude) -> Self {
        Self { lambda: Tensor3C::zeros(), drude }
    }

    pub fn alpha_rpa(&self, omega: f64) -> Tensor3C {
        rpa_polarizability(self.drude.omega0, self.drude.gamma, omega)
    }
}

/// Electronic and vibrational labels of one Raman transition q,ν → p,ν′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanChannel {
    /// Final electronic state.
    pub p: usize,
    /// Initial (reference) electronic state.
    pub q: usize,
    pub nu: u32,
    pub nu_prime: u32,
    /// Explicit intermediate states; `None` sums over every state of q's occupation class.
    pub intermediates: Option<Vec<usize>>,
}

impl RamanChannel {
    pub fn new(p: usize, q: usize, nu: u32, nu_prime: u32) -> Self {
        Self { p, q, nu, nu_prime, intermediates: None }
    }

    /// Fundamental Stokes line ν = 0 → 1 with p = q.
    pub fn fundamental(q: usize) -> Self {
        Self::new(q, q, 0, 1)
    }

    pub fn with_intermediates(mut self, rs: Vec<usize>) -> Self {
        self.intermediates = Some(rs);
        self
    }

    pub fn intermediate_states(&self, model: &MolecularModel) -> Result<Vec<usize>> {
        let n = model.n_orbitals();
        for (name, i) in [("p", self.p), ("q", self.q)] {
            if i >= n {
                return Err(Error::Domain(format!("state {name} = {i} out of range for {n} orbitals")));
            }
        }
        let class = model.is_occupied(self.q);
        match &self.intermediates {
            None => Ok((0..n).filter(|&r| model.is_occupied(r) == class).collect()),
            Some(rs) => {
                for &r in rs {
                    if r >= n {
                        return Err(Error::Domain(format!("intermediate state {r} out of range for {n} orbitals")));
                    }
                    if model.is_occupied(r) != class {
                        return Err(Error::IntermediateState { r, q: self.q });
                    }
                }
                Ok(rs.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhancementFactors {
    pub q: usize,
    pub r: usize,
    /// g(ω_k) = (𝟙 + Λα_RPA(ω_k)) / den_k.
    pub g: Tensor3C,
    /// g′(−ω_k′) = (𝟙 + α_RPA(−ω_k′)Λ) / den_k′.
    pub g_prime: Tensor3C,
    /// 1 − Π_rq(ω_k) Σ_rr(ε_q + ω_k).
    pub den_k: Complex64,
    /// 1 − Π_rq(−ω_k′) Σ_rr(ε_q − ω_k′).
    pub den_kp: Complex64,
}

#[allow(clippy::too_many_arguments)]
pub fn enhancement_factors(
    model: &MolecularModel,
    coupling: &ParticleCoupling,
    se: &SelfEnergy,
    q: usize,
    r: usize,
    omega_k: f64,
    omega_kp: f64,
    eta: f64,
) -> Result<EnhancementFactors> {
    let eq = model.energy(q);
    let one = Complex64::new(1.0, 0.0);
    let den_k = one - reduced_propagator_retarded(model, r, q, omega_k, eta) * se.element(r, r, eq + omega_k);
    let den_kp = one - reduced_propagator_retarded(model, r, q, -omega_kp, eta) * se.element(r, r, eq - omega_kp);
    for (name, den) in [("den(omega_k)", den_k), ("den(-omega_k')", den_kp)] {
        if !(den.norm() >= MIN_DENOMINATOR) {
            return Err(Error::resonance(
                format!("enhancement denominator {name} for r = {r}, q = {q}"),
                format!("|den| = {:.3e}", den.norm()),
            ));
        }
    }
    let id = Tensor3C::identity();
    let g = (id + coupling.lambda * coupling.alpha_rpa(omega_k)) / den_k;
    let g_prime = (id + coupling.alpha_rpa(-omega_kp) * coupling.lambda) / den_kp;
    Ok(EnhancementFactors { q, r, g, g_prime, den_k, den_kp })
}

/// ⟨ν′|(Q_J − Q₀)|ν⟩ ∇_J α_{pq,rr}, with the gradient from the displaced models.
fn vibrational_transition(mode: &VibrationalMode, ch: &RamanChannel, r: usize, field: &FieldConfig) -> Tensor3C {
    let q_elem = mode.matrix_element(ch.nu, ch.nu_prime);
    if q_elem == 0.0 {
        return Tensor3C::zeros();
    }
    let (wk, wkp, eta) = (field.omega_k, field.omega_kp, field.eta);
    let plus = transition_polarizability(&mode.plus, ch.p, ch.q, r, wk, wkp, eta);
    let minus = transition_polarizability(&mode.minus, ch.p, ch.q, r, wk, wkp, eta);
    (plus - minus) * Complex64::new(q_elem / (2.0 * mode.delta), 0.0)
}

fn check_modes(model: &MolecularModel, modes: &[VibrationalMode]) -> Result<()> {
    modes.iter().try_for_each(|m| m.check_compatible(model))
}

/// Normal Raman ⟨ν′|T|ν⟩ = −Σ_{r,J} ε̂′*·⟨ν′|α_{pq,rr}|ν⟩·ε̂.
pub fn raman_tmatrix(
    model: &MolecularModel,
    modes: &[VibrationalMode],
    ch: &RamanChannel,
    field: &FieldConfig,
) -> Result<Complex64> {
    check_modes(model, modes)?;
    let mut t = Complex64::new(0.0, 0.0);
    for r in ch.intermediate_states(model)? {
        for mode in modes {
            t -= field.project(&vibrational_transition(mode, ch, r, field));
        }
    }
    Ok(t)
}

/// Summed Raman tensor −Σ_{r,J} ⟨ν′|α_{pq,rr}|ν⟩ before projection on the
/// polarizations; ε̂′*·(this)·ε̂ equals `raman_tmatrix` up to rounding.
pub fn raman_polarizability(
    model: &MolecularModel,
    modes: &[VibrationalMode],
    ch: &RamanChannel,
    field: &FieldConfig,
) -> Result<Tensor3C> {
    check_modes(model, modes)?;
    let mut x = Tensor3C::zeros();
    for r in ch.intermediate_states(model)? {
        for mode in modes {
            x -= vibrational_transition(mode, ch, r, field);
        }
    }
    Ok(x)
}

/// I_Raman/I₀ for the isolated molecule.
pub fn normal_raman_intensity(
    model: &MolecularModel,
    modes: &[VibrationalMode],
    ch: &RamanChannel,
    field: &FieldConfig,
) -> Result<f64> {
    Ok(field.intensity_prefactor() * raman_tmatrix(model, modes, ch, field)?.norm_sqr())
}

/// Enhanced ⟨ν′|T|ν⟩ = −Σ_{r,J} ε̂′*·g′_rq·⟨ν′|α_{pq,rr}|ν⟩·g_rq·ε̂.
pub fn sers_tmatrix(
    model: &MolecularModel,
    modes: &[VibrationalMode],
    coupling: &ParticleCoupling,
    se: &SelfEnergy,
    ch: &RamanChannel,
    field: &FieldConfig,
) -> Result<Complex64> {
    check_modes(model, modes)?;
    let mut t = Complex64::new(0.0, 0.0);
    for r in ch.intermediate_states(model)? {
        let f = enhancement_factors(model, coupling, se, ch.q, r, field.omega_k, field.omega_kp, field.eta)?;
        for mode in modes {
            let x = vibrational_transition(mode, ch, r, field);
            t -= field.project(&(f.g_prime * x * f.g));
        }
    }
    Ok(t)
}

/// Four-index numerator N^{ξγησ} = (δ^{ξγ} + α(−ω_k′)^{ξδ}Λ^{δγ})(δ^{ησ} + Λ^{ηβ}α(ω_k)^{βσ}),
/// stored as `n[ξ][γ][η][σ]`.
pub fn iqsers_numerator(coupling: &ParticleCoupling, omega_k: f64, omega_kp: f64) -> [[[[Complex64; 3]; 3]; 3]; 3] {
    let id = Tensor3C::identity();
    let a_k = coupling.alpha_rpa(omega_k);
    let a_kp = coupling.alpha_rpa(-omega_kp);
    let l = coupling.lambda;
    let (al, la) = (a_kp * l, l * a_k);
    let mut n = [[[[Complex64::new(0.0, 0.0); 3]; 3]; 3]; 3];
    for xi in 0..3 {
        for ga in 0..3 {
            for et in 0..3 {
                for si in 0..3 {
                    n[xi][ga][et][si] = id[(xi, ga)] * id[(et, si)]
                        + al[(xi, ga)] * id[(et, si)]
                        + id[(xi, ga)] * la[(et, si)]
                        + al[(xi, ga)] * la[(et, si)];
                }
            }
        }
    }
    n
}

/// ε̂′*^ξ X^{γη} ε̂^σ N^{ξγησ}, contracted innermost over σ.
#[allow(clippy::needless_range_loop)]
fn contract(n: &[[[[Complex64; 3]; 3]; 3]; 3], x: &Tensor3C, field: &FieldConfig) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for xi in 0..3 {
        let mut row = Complex64::new(0.0, 0.0);
        for ga in 0..3 {
            for et in 0..3 {
                let mut inner = Complex64::new(0.0, 0.0);
                for si in 0..3 {
                    inner += n[xi][ga][et][si] * field.pol_in[si];
                }
                row += x[(ga, et)] * inner;
            }
        }
        total += field.pol_out[xi].conj() * row;
    }
    total
}

/// I_SERS/I₀ assembled from the four-index numerator and the product of the
/// two enhancement denominators.
pub fn sers_intensity(
    model: &MolecularModel,
    modes: &[VibrationalMode],
    coupling: &ParticleCoupling,
    se: &SelfEnergy,
    ch: &RamanChannel,
    field: &FieldConfig,
) -> Result<f64> {
    check_modes(model, modes)?;
    let numerator = iqsers_numerator(coupling, field.omega_k, field.omega_kp);
    let mut amplitude = Complex64::new(0.0, 0.0);
    for r in ch.intermediate_states(model)? {
        let f = enhancement_factors(model, coupling, se, ch.q, r, field.omega_k, field.omega_kp, field.eta)?;
        let den = f.den_k * f.den_kp;
        for mode in modes {
            let x = vibrational_transition(mode, ch, r, field);
            amplitude += contract(&numerator, &x, field) / den;
        }
    }
    Ok(field.intensity_prefactor() * amplitude.norm_sqr())
}

/// Electronic (vibrationless) enhanced amplitude −Σ_r ε̂′*·g′·α_{pq,rr}·g·ε̂.
pub fn electronic_sers_amplitude(
    model: &MolecularModel,
    coupling: &ParticleCoupling,
    se: &SelfEnergy,
    ch: &RamanChannel,
    field: &FieldConfig,
) -> Result<Complex64> {
    let mut t = Complex64::new(0.0, 0.0);
    for r in ch.intermediate_states(model)? {
        let f = enhancement_factors(model, coupling, se, ch.q, r, field.omega_k, field.omega_kp, field.eta)?;
        let a = transition_polarizability(model, ch.p, ch.q, r, field.omega_k, field.omega_kp, field.eta);
        t -= field.project(&(f.g_prime * a * f.g));
    }
    Ok(t)
}
