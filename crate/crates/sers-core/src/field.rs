//! Incident and scattered field description.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{Tensor3C, Vec3C};
use crate::units::{C_LIGHT, DEFAULT_ETA};

const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// ω_k, incident frequency.
    pub omega_k: f64,
    /// ω_k′, scattered frequency.
    pub omega_kp: f64,
    /// ε̂_λ(k).
    pub pol_in: Vec3C,
    /// ε̂_λ′(k′).
    pub pol_out: Vec3C,
    /// 𝒩′, photons already present in the scattered mode.
    pub photon_occupancy: u32,
    pub eta: f64,
}

impl FieldConfig {
    pub fn new(omega_k: f64, omega_kp: f64, pol_in: Vec3C, pol_out: Vec3C) -> Result<Self> {
        let f = Self { omega_k, omega_kp, pol_in, pol_out, photon_occupancy: 0, eta: DEFAULT_ETA };
        f.validate()?;
        Ok(f)
    }

    /// Both polarizations along the same real unit axis.
    pub fn aligned(omega_k: f64, omega_kp: f64, axis: [f64; 3]) -> Result<Self> {
        let v = Vec3C::new(axis[0].into(), axis[1].into(), axis[2].into());
        Self::new(omega_k, omega_kp, v, v)
    }

    pub fn with_occupancy(mut self, n: u32) -> Self {
        self.photon_occupancy = n;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("incident", &self.pol_in), ("scattered", &self.pol_out)] {
            let n2 = p.norm_squared();
            if (n2 - 1.0).abs() > UNIT_TOL {
                return Err(Error::Validation(format!("{name} polarization has |e|^2 = {n2}, expected 1")));
            }
        }
        if self.eta <= 0.0 || !self.eta.is_finite() {
            return Err(Error::Validation(format!("eta must be positive, got {}", self.eta)));
        }
        if !self.omega_k.is_finite() || !self.omega_kp.is_finite() {
            return Err(Error::Validation("field frequencies must be finite".into()));
        }
        Ok(())
    }

    /// ω_k ω_k′³ (𝒩′+1) / c⁴.
    pub fn intensity_prefactor(&self) -> f64 {
        self.omega_k * self.omega_kp.powi(3) * f64::from(self.photon_occupancy + 1) / C_LIGHT.powi(4)
    }

    /// ε̂′* · α · ε̂.
    pub fn project(&self, alpha: &Tensor3C) -> Complex64 {
        self.pol_out.conjugate().dot(&(alpha * self.pol_in))
    }

    /// Prefactor × |ε̂′*·α·ε̂|².
    pub fn intensity(&self, alpha: &Tensor3C) -> f64 {
        self.intensity_prefactor() * self.project(alpha).norm_sqr()
    }
}
