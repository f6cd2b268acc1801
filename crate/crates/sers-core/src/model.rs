//! Molecular model: Hartree–Fock orbital energies, occupations and dipole
//! matrix elements ⟨p|−e𝐱|q⟩.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Vec3C;

/// Tolerance for the Hermiticity check on dipole elements.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orbital {
    pub energy: f64,
    /// 1 for a hole (occupied) state, 0 for a particle (virtual) state.
    pub occupation: u8,
}

impl Orbital {
    pub fn hole(energy: f64) -> Self {
        Self { energy, occupation: 1 }
    }

    pub fn particle(energy: f64) -> Self {
        Self { energy, occupation: 0 }
    }

    pub fn is_occupied(&self) -> bool {
        self.occupation == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MolecularModel {
    orbitals: Vec<Orbital>,
    /// Dense row-major n×n table of dipole vectors, Hermitian.
    dipole: Vec<Vec3C>,
    chemical_potential: f64,
}

impl MolecularModel {
    /// Builds a model from sparse dipole entries. Entries with `p > q` are
    /// optional; missing lower-triangle elements are filled by conjugation,
    /// present ones must agree with their partner.
    pub fn new(orbitals: Vec<Orbital>, entries: &[(usize, usize, Vec3C)], chemical_potential: f64) -> Result<Self> {
        let n = orbitals.len();
        if n == 0 {
            return Err(Error::Validation("orbital list is empty".into()));
        }
        let mut dipole = vec![Vec3C::zeros(); n * n];
        let mut set = vec![false; n * n];
        for &(p, q, d) in entries {
            if p >= n || q >= n {
                return Err(Error::Validation(format!("dipole element ({p},{q}) out of range for {n} orbitals")));
            }
            if d.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Validation(format!("dipole element ({p},{q}) is not finite")));
            }
            if set[p * n + q] {
                return Err(Error::Validation(format!("dipole element ({p},{q}) given twice")));
            }
            dipole[p * n + q] = d;
            set[p * n + q] = true;
        }
        for p in 0..n {
            for q in p..n {
                let (upper, lower) = (p * n + q, q * n + p);
                match (set[upper], set[lower]) {
                    (true, true) => {}
                    (true, false) => dipole[lower] = dipole[upper].map(|z| z.conj()),
                    (false, true) => dipole[upper] = dipole[lower].map(|z| z.conj()),
                    (false, false) => {}
                }
            }
        }
        Self::from_dense(orbitals, dipole, chemical_potential)
    }

    /// Builds a model from a dense row-major dipole table and validates it.
    pub fn from_dense(orbitals: Vec<Orbital>, dipole: Vec<Vec3C>, chemical_potential: f64) -> Result<Self> {
        let model = Self { orbitals, dipole, chemical_potential };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let n = self.orbitals.len();
        if n == 0 {
            return Err(Error::Validation("orbital list is empty".into()));
        }
        if self.dipole.len() != n * n {
            return Err(Error::Validation(format!(
                "dipole table has {} entries, expected {}",
                self.dipole.len(),
                n * n
            )));
        }
        if !self.chemical_potential.is_finite() {
            return Err(Error::Validation("chemical potential is not finite".into()));
        }
        for (p, o) in self.orbitals.iter().enumerate() {
            if !o.energy.is_finite() {
                return Err(Error::Validation(format!("orbital {p} has a non-finite energy")));
            }
            if o.occupation > 1 {
                return Err(Error::Validation(format!("orbital {p} has occupation {}, expected 0 or 1", o.occupation)));
            }
            if o.is_occupied() && o.energy > self.chemical_potential {
                return Err(Error::Validation(format!(
                    "occupied orbital {p} (energy {}) lies above the chemical potential {}",
                    o.energy, self.chemical_potential
                )));
            }
            if !o.is_occupied() && o.energy < self.chemical_potential {
                return Err(Error::Validation(format!(
                    "unoccupied orbital {p} (energy {}) lies below the chemical potential {}",
                    o.energy, self.chemical_potential
                )));
            }
        }
        if !self.orbitals.iter().any(Orbital::is_occupied) {
            return Err(Error::Validation("model has no occupied orbital".into()));
        }
        if self.orbitals.iter().all(Orbital::is_occupied) {
            return Err(Error::Validation("model has no unoccupied orbital".into()));
        }
        for p in 0..n {
            for q in p..n {
                let a = self.dipole[p * n + q];
                let b = self.dipole[q * n + p];
                let deviation = (0..3).map(|k| (a[k] - b[k].conj()).norm()).fold(0.0, f64::max);
                if deviation > HERMITICITY_TOL {
                    return Err(Error::Hermiticity { p, q, deviation });
                }
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        Self::from_json(&text, path)
    }

    /// Parses the JSON molecule format; `origin` is only used in error messages.
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let file: MoleculeFile =
            serde_json::from_str(text).map_err(|e| Error::Parse { path: origin.into(), message: e.to_string() })?;
        file.into_model()
    }

    pub fn to_file(&self) -> MoleculeFile {
        let n = self.n_orbitals();
        let mut dipole = Vec::new();
        for p in 0..n {
            for q in p..n {
                let d = self.dipole(p, q);
                if d.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
                    dipole.push(DipoleRecord {
                        p,
                        q,
                        re: [d[0].re, d[1].re, d[2].re],
                        im: [d[0].im, d[1].im, d[2].im],
                    });
                }
            }
        }
        MoleculeFile {
            orbitals: self
                .orbitals
                .iter()
                .map(|o| OrbitalRecord { energy: o.energy, occupation: f64::from(o.occupation) })
                .collect(),
            dipole,
            chemical_potential: self.chemical_potential,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }

    pub fn n_orbitals(&self) -> usize {
        self.orbitals.len()
    }

    pub fn orbitals(&self) -> &[Orbital] {
        &self.orbitals
    }

    pub fn energy(&self, p: usize) -> f64 {
        self.orbitals[p].energy
    }

    /// Occupation ρ_p⁰ as a real number.
    pub fn rho(&self, p: usize) -> f64 {
        f64::from(self.orbitals[p].occupation)
    }

    pub fn is_occupied(&self, p: usize) -> bool {
        self.orbitals[p].is_occupied()
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    /// ⟨p|−e𝐱|q⟩.
    pub fn dipole(&self, p: usize, q: usize) -> &Vec3C {
        &self.dipole[p * self.orbitals.len() + q]
    }

    pub fn holes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_orbitals()).filter(|&p| self.is_occupied(p))
    }

    pub fn particles(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_orbitals()).filter(|&p| !self.is_occupied(p))
    }

    /// Same orbitals with every dipole element multiplied by `factor`.
    pub fn with_scaled_dipoles(&self, factor: f64) -> Self {
        Self {
            orbitals: self.orbitals.clone(),
            dipole: self.dipole.iter().map(|d| d * Complex64::new(factor, 0.0)).collect(),
            chemical_potential: self.chemical_potential,
        }
    }
}

/// On-disk molecule format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeFile {
    pub orbitals: Vec<OrbitalRecord>,
    #[serde(default)]
    pub dipole: Vec<DipoleRecord>,
    pub chemical_potential: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalRecord {
    pub energy: f64,
    /// Read as a number so that fractional values are reported, not rejected by the parser.
    pub occupation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleRecord {
    pub p: usize,
    pub q: usize,
    pub re: [f64; 3],
    #[serde(default)]
    pub im: [f64; 3],
}

impl MoleculeFile {
    pub fn into_model(self) -> Result<MolecularModel> {
        let mut orbitals = Vec::with_capacity(self.orbitals.len());
        for (p, o) in self.orbitals.iter().enumerate() {
            let occupation = if o.occupation == 0.0 {
                0
            } else if o.occupation == 1.0 {
                1
            } else {
                return Err(Error::Validation(format!("orbital {p} has occupation {}, expected 0 or 1", o.occupation)));
            };
            orbitals.push(Orbital { energy: o.energy, occupation });
        }
        let entries: Vec<_> = self
            .dipole
            .iter()
            .map(|d| {
                let v = Vec3C::new(
                    Complex64::new(d.re[0], d.im[0]),
                    Complex64::new(d.re[1], d.im[1]),
                    Complex64::new(d.re[2], d.im[2]),
                );
                (d.p, d.q, v)
            })
            .collect();
        MolecularModel::new(orbitals, &entries, self.chemical_potential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const TWO_LEVEL: &str = r#"{
        "orbitals": [{"energy": -0.5, "occupation": 1}, {"energy": 0.1, "occupation": 0}],
        "dipole": [{"p": 0, "q": 1, "re": [1, 0, 0]}],
        "chemical_potential": -0.2
    }"#;

    #[test]
    fn two_level_file_loads_with_completion() {
        let m = MolecularModel::from_json(TWO_LEVEL, Path::new("mem")).unwrap();
        assert_eq!(m.holes().collect::<Vec<_>>(), vec![0]);
        assert_eq!(m.particles().collect::<Vec<_>>(), vec![1]);
        assert_eq!(m.dipole(1, 0)[0], c(1.0, 0.0));
    }

    #[test]
    fn conjugate_completion_for_complex_elements() {
        let d = Vec3C::new(c(0.0, 1.0), c(0.5, -0.5), c(0.0, 0.0));
        let m = MolecularModel::new(vec![Orbital::hole(-1.0), Orbital::particle(1.0)], &[(0, 1, d)], 0.0).unwrap();
        assert_eq!(m.dipole(1, 0)[0], c(0.0, -1.0));
        assert_eq!(m.dipole(1, 0)[1], c(0.5, 0.5));
    }

    #[test]
    fn inconsistent_pair_is_a_hermiticity_error() {
        let text = r#"{
            "orbitals": [{"energy": -0.5, "occupation": 1}, {"energy": 0.1, "occupation": 0}],
            "dipole": [{"p": 0, "q": 1, "re": [1, 0, 0]}, {"p": 1, "q": 0, "re": [0.9, 0, 0]}],
            "chemical_potential": -0.2
        }"#;
        let err = MolecularModel::from_json(text, Path::new("mem")).unwrap_err();
        assert!(matches!(err, Error::Hermiticity { p: 0, q: 1, .. }), "{err}");
    }

    #[test]
    fn complex_diagonal_is_a_hermiticity_error() {
        let d = Vec3C::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        let err =
            MolecularModel::new(vec![Orbital::hole(-1.0), Orbital::particle(1.0)], &[(0, 0, d)], 0.0).unwrap_err();
        assert!(matches!(err, Error::Hermiticity { p: 0, q: 0, .. }));
    }

    #[test]
    fn empty_orbitals_rejected() {
        let text = r#"{"orbitals": [], "dipole": [], "chemical_potential": 0.0}"#;
        assert!(matches!(MolecularModel::from_json(text, Path::new("mem")), Err(Error::Validation(_))));
    }

    #[test]
    fn fractional_occupation_rejected() {
        let text = r#"{"orbitals": [{"energy": -0.5, "occupation": 0.5}, {"energy": 0.1, "occupation": 0}],
                       "chemical_potential": 0.0}"#;
        let err = MolecularModel::from_json(text, Path::new("mem")).unwrap_err();
        assert!(err.to_string().contains("occupation"));
    }

    #[test]
    fn occupation_must_respect_chemical_potential() {
        let bad = vec![Orbital::hole(0.5), Orbital::particle(0.1)];
        assert!(MolecularModel::new(bad, &[], 0.2).is_err());
        assert!(MolecularModel::new(vec![Orbital::hole(-0.5)], &[], 0.0).is_err());
        assert!(MolecularModel::new(vec![Orbital::particle(0.5)], &[], 0.0).is_err());
    }

    #[test]
    fn out_of_range_dipole_index() {
        let d = Vec3C::zeros();
        let err =
            MolecularModel::new(vec![Orbital::hole(-1.0), Orbital::particle(1.0)], &[(0, 2, d)], 0.0).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(MolecularModel::load("/nonexistent/molecule.json"), Err(Error::Io { .. })));
    }
}
