//! Complex 3×3 tensors and the near-field dipole tensor.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex 3×3 tensor: polarizabilities, dipole tensors, enhancement factors.
pub type Tensor3C = Matrix3<Complex64>;
/// Complex Cartesian vector (dipoles, fields).
pub type Vec3C = Vector3<Complex64>;
/// Real Cartesian vector (positions, separations).
pub type Vec3 = Vector3<f64>;

/// Λ = (3 r̂⊗r̂ − 𝟙)/r³, the field at the origin of a unit dipole at `separation`
/// (and vice versa; Λ is even in `separation`).
pub fn dipole_tensor_real(separation: &Vec3) -> Result<Matrix3<f64>> {
    let r = separation.norm();
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::Domain(format!("dipole tensor needs a nonzero finite separation, got |r| = {r}")));
    }
    let n = separation / r;
    Ok((3.0 * (n * n.transpose()) - Matrix3::identity()) / (r * r * r))
}

pub fn dipole_tensor(separation: &Vec3) -> Result<Tensor3C> {
    dipole_tensor_real(separation).map(|m| to_complex(&m))
}

pub fn to_complex(m: &Matrix3<f64>) -> Tensor3C {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Isotropic tensor a·𝟙.
pub fn isotropic(a: Complex64) -> Tensor3C {
    Tensor3C::from_diagonal_element(a)
}

pub fn identity() -> Tensor3C {
    Tensor3C::identity()
}

pub fn zero() -> Tensor3C {
    Tensor3C::zeros()
}

/// Frobenius norm.
pub fn norm(t: &Tensor3C) -> f64 {
    t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// 2-norm condition number σ_max/σ_min (∞ for a singular tensor).
pub fn condition_number(t: &Tensor3C) -> f64 {
    let sv = t.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse guarded by a condition-number threshold; the error names `factor`.
pub fn checked_inverse(t: &Tensor3C, max_condition: f64, factor: &str) -> Result<Tensor3C> {
    let cond = condition_number(t);
    if !(cond <= max_condition) {
        return Err(Error::resonance(factor, format!("condition number {cond:.3e} exceeds {max_condition:.1e}")));
    }
    t.try_inverse().ok_or_else(|| Error::resonance(factor, "matrix is singular"))
}

pub fn is_finite(t: &Tensor3C) -> bool {
    t.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Displacement of the particle from the molecule, x₁ − x₂, molecule at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Geometry {
    separation: Vec3,
}

impl Geometry {
    pub fn new(separation: Vec3) -> Result<Self> {
        let r = separation.norm();
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::Domain(format!("separation must be nonzero and finite, got {separation:?}")));
        }
        Ok(Self { separation })
    }

    pub fn separation(&self) -> Vec3 {
        self.separation
    }

    pub fn distance(&self) -> f64 {
        self.separation.norm()
    }

    pub fn lambda(&self) -> Tensor3C {
        dipole_tensor(&self.separation).expect("validated separation")
    }
}

impl TryFrom<[f64; 3]> for Geometry {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Geometry::new(Vec3::from(v))
    }
}

impl From<Geometry> for [f64; 3] {
    fn from(g: Geometry) -> Self {
        g.separation.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(t: &Tensor3C) -> Matrix3<f64> {
        t.map(|z| z.re)
    }

    #[test]
    fn on_axis_values() {
        let l = re(&dipole_tensor(&Vec3::new(0.0, 0.0, 2.0)).unwrap());
        assert_eq!(l, Matrix3::from_diagonal(&Vec3::new(-0.125, -0.125, 0.25)));
        let l = re(&dipole_tensor(&Vec3::new(1.0, 0.0, 0.0)).unwrap());
        assert_eq!(l, Matrix3::from_diagonal(&Vec3::new(2.0, -1.0, -1.0)));
    }

    #[test]
    fn zero_separation_is_rejected() {
        assert!(matches!(dipole_tensor(&Vec3::zeros()), Err(Error::Domain(_))));
        assert!(Geometry::new(Vec3::zeros()).is_err());
    }

    #[test]
    fn singular_inverse_names_factor() {
        let err = checked_inverse(&zero(), 1e12, "1 - aM L aP L").unwrap_err();
        assert!(err.to_string().contains("1 - aM L aP L"));
    }
}
