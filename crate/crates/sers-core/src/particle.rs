//! Metal particle description: analytic plasma response or a voxel lattice.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Vec3;

/// Drude parameters: bulk plasma frequency Ω₀ and damping γ (hartree).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Drude {
    pub omega0: f64,
    #[serde(default)]
    pub gamma: f64,
}

impl Drude {
    pub fn validate(&self) -> Result<()> {
        if self.omega0 <= 0.0 || !self.omega0.is_finite() {
            return Err(Error::Validation(format!("plasma frequency must be positive, got {}", self.omega0)));
        }
        if self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::Validation(format!("damping must be nonnegative, got {}", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Voxel {
    /// Position (bohr), molecule at the origin.
    pub pos: [f64; 3],
    /// Volume (bohr³).
    pub vol: f64,
}

impl Voxel {
    pub fn position(&self) -> Vec3 {
        Vec3::from(self.pos)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ParticleModel {
    #[serde(rename = "rpa")]
    AnalyticRpa {
        omega0: f64,
        #[serde(default)]
        gamma: f64,
    },
    Voxelized {
        drude: Drude,
        voxels: Vec<Voxel>,
    },
}

impl ParticleModel {
    pub fn drude(&self) -> Drude {
        match self {
            ParticleModel::AnalyticRpa { omega0, gamma } => Drude { omega0: *omega0, gamma: *gamma },
            ParticleModel::Voxelized { drude, .. } => *drude,
        }
    }

    pub fn voxels(&self) -> &[Voxel] {
        match self {
            ParticleModel::AnalyticRpa { .. } => &[],
            ParticleModel::Voxelized { voxels, .. } => voxels,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.drude().validate()?;
        let voxels = self.voxels();
        for (j, v) in voxels.iter().enumerate() {
            if v.vol <= 0.0 || !v.vol.is_finite() {
                return Err(Error::Validation(format!("voxel {j} has non-positive volume {}", v.vol)));
            }
            if v.pos.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!("voxel {j} has a non-finite position")));
            }
        }
        // Sort-and-sweep keeps the distinctness check O(N log N) for large lattices.
        let mut order: Vec<usize> = (0..voxels.len()).collect();
        order.sort_by(|&a, &b| voxels[a].pos.partial_cmp(&voxels[b].pos).expect("finite positions"));
        for w in order.windows(2) {
            if voxels[w[0]].pos == voxels[w[1]].pos {
                return Err(Error::Validation(format!(
                    "voxels {} and {} share a position",
                    w[0].min(w[1]),
                    w[0].max(w[1])
                )));
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let particle: Self =
            serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })?;
        particle.validate()?;
        Ok(particle)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("particle serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_variants() {
        let rpa: ParticleModel = serde_json::from_str(r#"{"type": "rpa", "omega0": 0.3, "gamma": 0.01}"#).unwrap();
        assert_eq!(rpa.drude(), Drude { omega0: 0.3, gamma: 0.01 });
        let vox: ParticleModel = serde_json::from_str(
            r#"{"type": "voxelized", "drude": {"omega0": 0.3, "gamma": 0.0},
                "voxels": [{"pos": [0, 0, 4], "vol": 2.0}]}"#,
        )
        .unwrap();
        assert_eq!(vox.voxels().len(), 1);
        vox.validate().unwrap();
    }

    #[test]
    fn duplicate_positions_rejected() {
        let p = ParticleModel::Voxelized {
            drude: Drude { omega0: 1.0, gamma: 0.0 },
            voxels: vec![Voxel { pos: [0.0, 0.0, 3.0], vol: 1.0 }, Voxel { pos: [0.0, 0.0, 3.0], vol: 1.0 }],
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn nonpositive_plasma_frequency_rejected() {
        assert!(ParticleModel::AnalyticRpa { omega0: 0.0, gamma: 0.0 }.validate().is_err());
        assert!(ParticleModel::AnalyticRpa { omega0: 1.0, gamma: -0.1 }.validate().is_err());
    }
}
