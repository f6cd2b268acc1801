//! Particle-mediated self-energy of the molecular electrons.
//!
//! With the plasma polarizability −1/(ω² − Ω₀²), the frequency integral over
//! α_RPA(ω′) G(ω+ω′) closes by residues at ω′ = ±Ω₀, leaving one pole per
//! intermediate orbital s: at ε_s − Ω₀ for holes and ε_s + Ω₀ for particles.
//!
//! ```text
//! Σ_pq(ω) = Σ_s c_pqs / (a_s − ω ± iη)
//! ```
//!
//! The exact double contraction gives c_pqs = −d_ps·ΛΛ·d_sq / (2Ω₀). The
//! simplified form replaces −ΛΛ with Λ/r³, giving c_pqs = d_ps·Λ·d_sq / (2Ω₀r³).
//! The two agree for dipoles transverse to the separation and differ along it,
//! because ΛΛ = (3r̂r̂ + 𝟙)/r⁶ while −Λ/r³ = (𝟙 − 3r̂r̂)/r⁶.

use nalgebra::DMatrix;
use sers_core::{Complex64, Geometry, MolecularModel, Tensor3C, Vec3C};

/// Analytic structure of the self-energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Hole poles above, particle poles below the real axis, as in the
    /// residue evaluation with time-ordered propagators.
    TimeOrdered,
    /// Real part from the principal value; the imaginary part is the
    /// broadened delta-function part, restricted to the side of the chemical
    /// potential where each channel lives (hole channels below μ, particle
    /// channels above) and signed so that Im Σ_pp ≥ 0 below μ and ≤ 0 above.
    Retarded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfEnergyForm {
    /// Single contraction d·Λ·d / r³.
    Simplified,
    /// Double contraction −d·ΛΛ·d.
    ExactDoubleContraction,
}

#[derive(Debug, Clone)]
pub struct SelfEnergy {
    n: usize,
    /// c_pqs stored at [(p·n + q)·n + s].
    weights: Vec<Complex64>,
    /// Pole position a_s per intermediate orbital.
    poles: Vec<f64>,
    occupied: Vec<bool>,
    mu: f64,
    eta: f64,
    flavor: Flavor,
    form: SelfEnergyForm,
}

fn bilinear(a: &Vec3C, t: &Tensor3C, b: &Vec3C) -> Complex64 {
    a.dot(&(t * b))
}

impl SelfEnergy {
    pub fn rpa(
        model: &MolecularModel,
        geometry: &Geometry,
        omega0: f64,
        eta: f64,
        flavor: Flavor,
        form: SelfEnergyForm,
    ) -> Self {
        let n = model.n_orbitals();
        let lambda = geometry.lambda();
        let r3 = geometry.distance().powi(3);
        let (kernel, scale) = match form {
            SelfEnergyForm::Simplified => (lambda, 1.0 / (2.0 * omega0 * r3)),
            SelfEnergyForm::ExactDoubleContraction => (lambda * lambda, -1.0 / (2.0 * omega0)),
        };
        let mut weights = vec![Complex64::new(0.0, 0.0); n * n * n];
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    weights[(p * n + q) * n + s] = bilinear(model.dipole(p, s), &kernel, model.dipole(s, q)) * scale;
                }
            }
        }
        let poles = (0..n)
            .map(|s| if model.is_occupied(s) { model.energy(s) - omega0 } else { model.energy(s) + omega0 })
            .collect();
        Self {
            n,
            weights,
            poles,
            occupied: (0..n).map(|s| model.is_occupied(s)).collect(),
            mu: model.chemical_potential(),
            eta,
            flavor,
            form,
        }
    }

    /// Σ ≡ 0 on the model's orbital space.
    pub fn zero(model: &MolecularModel, eta: f64) -> Self {
        let n = model.n_orbitals();
        Self {
            n,
            weights: vec![Complex64::new(0.0, 0.0); n * n * n],
            poles: model.orbitals().iter().map(|o| o.energy).collect(),
            occupied: (0..n).map(|s| model.is_occupied(s)).collect(),
            mu: model.chemical_potential(),
            eta,
            flavor: Flavor::Retarded,
            form: SelfEnergyForm::Simplified,
        }
    }

    /// The same self-energy with every coupling weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { weights: self.weights.iter().map(|w| w * factor).collect(), ..self.clone() }
    }

    pub fn with_flavor(&self, flavor: Flavor) -> Self {
        Self { flavor, ..self.clone() }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn form(&self) -> SelfEnergyForm {
        self.form
    }

    pub fn chemical_potential(&self) -> f64 {
        self.mu
    }

    /// Pole positions ε_s ∓ Ω₀, one per intermediate orbital.
    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn weight(&self, p: usize, q: usize, s: usize) -> Complex64 {
        self.weights[(p * self.n + q) * self.n + s]
    }

    /// ħΣ_pq(ω).
    pub fn element(&self, p: usize, q: usize, omega: f64) -> Complex64 {
        let eta = self.eta;
        let mut sum = Complex64::new(0.0, 0.0);
        for s in 0..self.n {
            let w = self.weight(p, q, s);
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let hole = self.occupied[s];
            let x = self.poles[s] - omega;
            match self.flavor {
                Flavor::TimeOrdered => {
                    let shift = if hole { eta } else { -eta };
                    sum += w / Complex64::new(x, shift);
                }
                Flavor::Retarded => {
                    let d = x * x + eta * eta;
                    sum += w * (x / d);
                    let active = if hole { omega < self.mu } else { omega > self.mu };
                    if active {
                        // Sign of iη per channel chosen so this term obeys the sign rule.
                        let along = if w.re >= 0.0 { 1.0 } else { -1.0 };
                        let tau = if hole { along } else { -along };
                        sum += w * Complex64::new(0.0, tau * eta / d);
                    }
                }
            }
        }
        sum
    }

    pub fn matrix(&self, omega: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |p, q| self.element(p, q, omega))
    }

    /// Δ_p(ω) = Re Σ_pp(ω).
    pub fn shift(&self, p: usize, omega: f64) -> f64 {
        self.element(p, p, omega).re
    }

    /// Γ_p(ω) = −2 Im Σ_pp(ω).
    pub fn width(&self, p: usize, omega: f64) -> f64 {
        -2.0 * self.element(p, p, omega).im
    }
}

/// Full self-energy matrix at one frequency.
pub fn self_energy_rpa(
    model: &MolecularModel,
    geometry: &Geometry,
    omega0: f64,
    omega: f64,
    eta: f64,
    flavor: Flavor,
    form: SelfEnergyForm,
) -> DMatrix<Complex64> {
    SelfEnergy::rpa(model, geometry, omega0, eta, flavor, form).matrix(omega)
}

pub fn level_shift(se: &SelfEnergy, p: usize) -> impl Fn(f64) -> f64 + '_ {
    move |omega| se.shift(p, omega)
}

pub fn level_width(se: &SelfEnergy, p: usize) -> impl Fn(f64) -> f64 + '_ {
    move |omega| se.width(p, omega)
}
