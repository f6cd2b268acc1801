//! Voxel polarizabilities and lattice geometry.

use std::f64::consts::PI;

use sers_core::units::C_LIGHT;
use sers_core::{dipole_tensor, Complex64, Drude, Error, ParticleModel, Result, Tensor3C, Vec3, Voxel};

/// Magnitude of ε + 2 below which the voxel sits on its Fröhlich resonance.
const FROHLICH_TOL: f64 = 1e-12;

/// Clausius–Mossotti polarizability of one voxel with Drude ε(ω) = 1 − Ω₀²/(ω(ω+iγ)),
/// optionally with the radiative-reaction correction α_CM/(1 − (2/3)ik³α_CM).
pub fn voxel_polarizability(drude: &Drude, volume: f64, omega: f64, radiative: bool) -> Result<Tensor3C> {
    if volume <= 0.0 || !volume.is_finite() {
        return Err(Error::Domain(format!("voxel volume must be positive, got {volume}")));
    }
    if omega == 0.0 {
        return Err(Error::Domain("voxel polarizability needs omega != 0 (Drude pole)".into()));
    }
    let w = Complex64::new(omega, 0.0);
    let eps = 1.0 - drude.omega0 * drude.omega0 / (w * Complex64::new(omega, drude.gamma));
    if (eps + 2.0).norm() < FROHLICH_TOL {
        return Err(Error::resonance(
            "voxel (eps + 2)",
            format!("Clausius-Mossotti pole at omega = {omega} (eps = {eps})"),
        ));
    }
    let mut alpha = (3.0 * volume / (4.0 * PI)) * (eps - 1.0) / (eps + 2.0);
    if radiative {
        let k3 = (omega / C_LIGHT).powi(3);
        alpha /= 1.0 - Complex64::new(0.0, 2.0 / 3.0 * k3) * alpha;
    }
    Ok(Tensor3C::from_diagonal_element(alpha))
}

/// Voxels of one particle, positioned relative to the molecule at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelLattice {
    pub voxels: Vec<Voxel>,
    pub drude: Drude,
    /// Apply the radiative-reaction correction to each voxel.
    pub radiative: bool,
}

impl VoxelLattice {
    pub fn new(voxels: Vec<Voxel>, drude: Drude) -> Result<Self> {
        let lattice = Self { voxels, drude, radiative: true };
        ParticleModel::Voxelized { drude, voxels: lattice.voxels.clone() }.validate()?;
        if lattice.voxels.iter().any(|v| v.position().norm() == 0.0) {
            return Err(Error::Validation("a voxel coincides with the molecule at the origin".into()));
        }
        Ok(lattice)
    }

    pub fn from_particle(particle: &ParticleModel) -> Result<Self> {
        match particle {
            ParticleModel::Voxelized { drude, voxels } => Self::new(voxels.clone(), *drude),
            ParticleModel::AnalyticRpa { .. } => {
                Err(Error::Validation("an analytic particle has no voxel lattice".into()))
            }
        }
    }

    pub fn with_radiative(mut self, on: bool) -> Self {
        self.radiative = on;
        self
    }

    pub fn len(&self) -> usize {
        self.voxels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voxels.is_empty()
    }

    pub fn position(&self, j: usize) -> Vec3 {
        self.voxels[j].position()
    }

    pub fn polarizabilities(&self, omega: f64) -> Result<Vec<Tensor3C>> {
        self.voxels.iter().map(|v| voxel_polarizability(&self.drude, v.vol, omega, self.radiative)).collect()
    }

    /// Λ′_jk, the field at voxel j of a unit dipole at voxel k (j ≠ k).
    pub fn pair_tensor(&self, j: usize, k: usize) -> Tensor3C {
        dipole_tensor(&(self.position(j) - self.position(k))).expect("voxel positions are distinct")
    }

    /// Λ_j between the molecule at the origin and voxel j.
    pub fn molecule_tensor(&self, j: usize) -> Tensor3C {
        dipole_tensor(&self.position(j)).expect("voxels avoid the origin")
    }

    pub fn to_particle(&self) -> ParticleModel {
        ParticleModel::Voxelized { drude: self.drude, voxels: self.voxels.clone() }
    }
}

fn grid_voxels(center: Vec3, extent: [f64; 3], spacing: f64, keep: impl Fn(Vec3) -> bool) -> Result<Vec<Voxel>> {
    if spacing <= 0.0 || !spacing.is_finite() {
        return Err(Error::Domain(format!("voxel spacing must be positive, got {spacing}")));
    }
    let n: Vec<i64> = extent.iter().map(|e| (e / spacing).floor() as i64).collect();
    let mut out = Vec::new();
    for i in -n[0]..=n[0] {
        for j in -n[1]..=n[1] {
            for k in -n[2]..=n[2] {
                let offset = Vec3::new(i as f64, j as f64, k as f64) * spacing;
                if keep(offset) {
                    let p = center + offset;
                    out.push(Voxel { pos: [p.x, p.y, p.z], vol: spacing.powi(3) });
                }
            }
        }
    }
    Ok(out)
}

/// nx × ny × nz cubic voxels centred on `center`.
pub fn block(center: Vec3, counts: [usize; 3], spacing: f64) -> Result<Vec<Voxel>> {
    if counts.contains(&0) {
        return Err(Error::Domain("block needs at least one voxel per axis".into()));
    }
    if spacing <= 0.0 || !spacing.is_finite() {
        return Err(Error::Domain(format!("voxel spacing must be positive, got {spacing}")));
    }
    let half = counts.map(|c| 0.5 * (c as f64 - 1.0) * spacing);
    let mut out = Vec::with_capacity(counts.iter().product());
    for i in 0..counts[0] {
        for j in 0..counts[1] {
            for k in 0..counts[2] {
                let p = center + Vec3::new(i as f64, j as f64, k as f64) * spacing - Vec3::from(half);
                out.push(Voxel { pos: [p.x, p.y, p.z], vol: spacing.powi(3) });
            }
        }
    }
    Ok(out)
}

/// Cubic-grid voxels whose centres lie inside the sphere.
pub fn sphere(center: Vec3, radius: f64, spacing: f64) -> Result<Vec<Voxel>> {
    ellipsoid(center, [radius; 3], spacing)
}

/// Cubic-grid voxels whose centres lie inside the axis-aligned ellipsoid.
pub fn ellipsoid(center: Vec3, semi_axes: [f64; 3], spacing: f64) -> Result<Vec<Voxel>> {
    if semi_axes.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::Domain("ellipsoid semi-axes must be positive".into()));
    }
    let [a, b, c] = semi_axes;
    grid_voxels(center, semi_axes, spacing, |o| {
        (o.x / a).powi(2) + (o.y / b).powi(2) + (o.z / c).powi(2) <= 1.0 + 1e-12
    })
}
