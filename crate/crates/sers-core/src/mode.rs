//! Harmonic vibrational modes and their displaced-geometry models.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MolecularModel;

#[derive(Debug, Clone, PartialEq)]
pub struct VibrationalMode {
    pub index: usize,
    /// ω_J (hartree).
    pub omega: f64,
    /// μ_J (electron masses).
    pub reduced_mass: f64,
    /// δ_J, the displacement of the two models along Q_J.
    pub delta: f64,
    /// Model at Q₀ − δ_J.
    pub minus: MolecularModel,
    /// Model at Q₀ + δ_J.
    pub plus: MolecularModel,
}

impl VibrationalMode {
    pub fn new(
        index: usize,
        omega: f64,
        reduced_mass: f64,
        delta: f64,
        minus: MolecularModel,
        plus: MolecularModel,
    ) -> Result<Self> {
        for (name, v) in [("omega", omega), ("reduced_mass", reduced_mass), ("delta", delta)] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Validation(format!("mode {index}: {name} must be positive and finite, got {v}")));
            }
        }
        if minus.n_orbitals() != plus.n_orbitals() {
            return Err(Error::Validation(format!(
                "mode {index}: displaced models have {} and {} orbitals",
                minus.n_orbitals(),
                plus.n_orbitals()
            )));
        }
        Ok(Self { index, omega, reduced_mass, delta, minus, plus })
    }

    /// Checks that the displaced models match the equilibrium model's orbital count.
    pub fn check_compatible(&self, model: &MolecularModel) -> Result<()> {
        if self.minus.n_orbitals() != model.n_orbitals() {
            return Err(Error::Validation(format!(
                "mode {}: displaced models have {} orbitals, molecule has {}",
                self.index,
                self.minus.n_orbitals(),
                model.n_orbitals()
            )));
        }
        Ok(())
    }

    /// Loads a mode file; model paths inside it are relative to the file.
    pub fn load(path: impl AsRef<Path>, index: usize) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let file: ModeFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let minus = MolecularModel::load(file.resolve_minus(dir))?;
        let plus = MolecularModel::load(file.resolve_plus(dir))?;
        Self::new(index, file.omega, file.reduced_mass, file.delta, minus, plus)
    }

    pub fn matrix_element(&self, nu: u32, nu_prime: u32) -> f64 {
        vibrational_matrix_element(self, nu, nu_prime)
    }
}

/// On-disk mode format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeFile {
    pub omega: f64,
    pub reduced_mass: f64,
    pub delta: f64,
    /// Molecule file at Q₀ − δ.
    pub minus: PathBuf,
    /// Molecule file at Q₀ + δ.
    pub plus: PathBuf,
}

impl ModeFile {
    pub fn resolve_minus(&self, dir: &Path) -> PathBuf {
        dir.join(&self.minus)
    }

    pub fn resolve_plus(&self, dir: &Path) -> PathBuf {
        dir.join(&self.plus)
    }
}

/// ⟨ν′|(Q−Q₀)|ν⟩ for a harmonic oscillator of mass `mu` and frequency `omega`.
pub fn harmonic_matrix_element(mu: f64, omega: f64, nu: u32, nu_prime: u32) -> f64 {
    let scale = 1.0 / (2.0 * mu * omega);
    if nu_prime == nu + 1 {
        (f64::from(nu + 1) * scale).sqrt()
    } else if nu_prime + 1 == nu {
        (f64::from(nu) * scale).sqrt()
    } else {
        0.0
    }
}

pub fn vibrational_matrix_element(mode: &VibrationalMode, nu: u32, nu_prime: u32) -> f64 {
    harmonic_matrix_element(mode.reduced_mass, mode.omega, nu, nu_prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_values() {
        assert_eq!(harmonic_matrix_element(1.0, 0.5, 0, 1), 1.0);
        assert_eq!(harmonic_matrix_element(1.0, 0.5, 0, 2), 0.0);
        assert_eq!(harmonic_matrix_element(1.0, 0.5, 2, 2), 0.0);
        assert!((harmonic_matrix_element(2.0, 0.25, 3, 2) - 3f64.sqrt()).abs() < 1e-15);
    }
}
