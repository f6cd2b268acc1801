//! Classical coupled-dipole model of surface-enhanced Raman scattering.
//!
//! A molecule (polarizability α_M) and a particle (α_P) at separation r
//! polarize each other through the dipole tensor Λ:
//!
//! ```text
//! d = α_M·(E₀ + Λ·p),   p = α_P·(E₀ + Λ·d)
//! ```
//!
//! Solving for d + p gives the total polarizability α_tot; its derivative
//! along the vibrational coordinate gives the enhanced Raman polarizability.

use sers_core::tensor::{self, checked_inverse, Tensor3C};
use sers_core::{Complex64, Error, FieldConfig, Geometry, Result};

/// Image matrices with a larger condition number are treated as resonant.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSystem {
    pub alpha_m: Tensor3C,
    pub alpha_p: Tensor3C,
    pub lambda: Tensor3C,
    /// ∂α_M/∂Q.
    pub dalpha_m_dq: Tensor3C,
    /// Vibrational amplitude ΔQ.
    pub delta_q: f64,
}

impl ClassicalSystem {
    pub fn new(alpha_m: Tensor3C, alpha_p: Tensor3C, geometry: &Geometry, dalpha_m_dq: Tensor3C, delta_q: f64) -> Self {
        Self { alpha_m, alpha_p, lambda: geometry.lambda(), dalpha_m_dq, delta_q }
    }

    /// The same system with the particle removed (Λ = 0).
    pub fn decoupled(&self) -> Self {
        Self { lambda: Tensor3C::zeros(), ..*self }
    }
}

struct Factors {
    inv_m: Tensor3C,
    inv_p: Tensor3C,
    local_m: Tensor3C,
    local_p: Tensor3C,
}

fn factors(sys: &ClassicalSystem) -> Result<Factors> {
    let one = Tensor3C::identity();
    let (am, ap, l) = (&sys.alpha_m, &sys.alpha_p, &sys.lambda);
    let image_m = one - am * l * ap * l;
    let image_p = one - ap * l * am * l;
    Ok(Factors {
        inv_m: checked_inverse(&image_m, MAX_CONDITION, "(1 - aM.L.aP.L)")?,
        inv_p: checked_inverse(&image_p, MAX_CONDITION, "(1 - aP.L.aM.L)")?,
        local_m: one + l * ap,
        local_p: one + l * am,
    })
}

/// α_tot = (𝟙−α_MΛα_PΛ)⁻¹α_M(𝟙+Λα_P) + (𝟙−α_PΛα_MΛ)⁻¹α_P(𝟙+Λα_M).
pub fn total_polarizability(sys: &ClassicalSystem) -> Result<Tensor3C> {
    let f = factors(sys)?;
    Ok(f.inv_m * sys.alpha_m * f.local_m + f.inv_p * sys.alpha_p * f.local_p)
}

/// α_SERS = ΔQ ∂α_tot/∂Q with ∂α_M/∂Q propagated analytically; α_P does not
/// depend on Q. Uses ∂(A⁻¹) = −A⁻¹ (∂A) A⁻¹.
pub fn sers_polarizability(sys: &ClassicalSystem) -> Result<Tensor3C> {
    let f = factors(sys)?;
    let (am, ap, l, dam) = (&sys.alpha_m, &sys.alpha_p, &sys.lambda, &sys.dalpha_m_dq);

    let d_image_m = -(dam * l * ap * l);
    let d_inv_m = -(f.inv_m * d_image_m * f.inv_m);
    let d_first = d_inv_m * am * f.local_m + f.inv_m * dam * f.local_m;

    let d_image_p = -(ap * l * dam * l);
    let d_inv_p = -(f.inv_p * d_image_p * f.inv_p);
    let d_second = d_inv_p * ap * f.local_p + f.inv_p * ap * l * dam;

    Ok((d_first + d_second) * Complex64::new(sys.delta_q, 0.0))
}

/// Normal Raman intensity ratio I_Raman/I₀ of the molecule alone.
pub fn normal_raman_intensity(sys: &ClassicalSystem, field: &FieldConfig) -> f64 {
    field.intensity(&(sys.dalpha_m_dq * Complex64::new(sys.delta_q, 0.0)))
}

/// Enhanced Raman intensity ratio I_SERS/I₀ of the coupled pair.
pub fn classical_sers_intensity(sys: &ClassicalSystem, field: &FieldConfig) -> Result<f64> {
    Ok(field.intensity(&sers_polarizability(sys)?))
}

/// Local-field factors (𝟙 + Λα_P) and (𝟙 + α_PΛ) seen by the molecule.
pub fn local_field_factors(sys: &ClassicalSystem) -> (Tensor3C, Tensor3C) {
    let one = Tensor3C::identity();
    (one + sys.lambda * sys.alpha_p, one + sys.alpha_p * sys.lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZAxisEnhancement {
    /// |[1+2α_P/r³]² / [1−α_Pα_M(2/r³)²]²|².
    pub full: f64,
    /// |1+2α_P/r³|⁴.
    pub approx: f64,
}

/// Enhancement of the intensity for isotropic scalars aligned along the
/// separation axis, with equal incident and scattered frequencies.
pub fn enhancement_factor_zaxis(alpha_m: Complex64, alpha_p: Complex64, r: f64) -> Result<ZAxisEnhancement> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::Domain(format!("separation must be positive, got {r}")));
    }
    let k = 2.0 / r.powi(3);
    let local = Complex64::new(1.0, 0.0) + alpha_p * k;
    let image = Complex64::new(1.0, 0.0) - alpha_p * alpha_m * k * k;
    if image.norm() == 0.0 || !(local.norm() / image.norm()).is_finite() {
        return Err(Error::resonance("1 - aP.aM.(2/r^3)^2", "denominator vanishes"));
    }
    let amplitude = (local * local) / (image * image);
    Ok(ZAxisEnhancement { full: amplitude.norm_sqr(), approx: local.norm_sqr().powi(2) })
}

/// Isotropic complex tensor helper re-exported for callers building systems.
pub fn isotropic(a: Complex64) -> Tensor3C {
    tensor::isotropic(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sers_core::Vec3;

    fn iso(a: f64) -> Tensor3C {
        isotropic(Complex64::new(a, 0.0))
    }

    fn close(a: &Tensor3C, b: &Tensor3C, tol: f64) -> bool {
        tensor::norm(&(a - b)) <= tol * tensor::norm(b).max(1e-300)
    }

    #[test]
    fn decoupled_limit_is_sum() {
        let sys = ClassicalSystem {
            alpha_m: iso(1.5),
            alpha_p: iso(7.0),
            lambda: Tensor3C::zeros(),
            dalpha_m_dq: iso(0.3),
            delta_q: 0.2,
        };
        assert!(close(&total_polarizability(&sys).unwrap(), &iso(8.5), 1e-15));
        assert!(close(&sers_polarizability(&sys).unwrap(), &iso(0.06), 1e-15));
    }

    #[test]
    fn molecule_alone() {
        let g = Geometry::new(Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let sys = ClassicalSystem::new(iso(1.0), Tensor3C::zeros(), &g, Tensor3C::zeros(), 1.0);
        assert!(close(&total_polarizability(&sys).unwrap(), &iso(1.0), 1e-15));
        assert_eq!(sers_polarizability(&sys).unwrap(), Tensor3C::zeros());
    }

    #[test]
    fn zaxis_values() {
        let e = enhancement_factor_zaxis(1.0.into(), 8.0.into(), 2.0).unwrap();
        assert!((e.full - 1296.0).abs() < 1e-9);
        assert!((e.approx - 81.0).abs() < 1e-12);
        let e = enhancement_factor_zaxis(0.0.into(), 3.0.into(), 2.0).unwrap();
        assert_eq!(e.full, e.approx);
        let e = enhancement_factor_zaxis(2.0.into(), 0.0.into(), 2.0).unwrap();
        assert_eq!((e.full, e.approx), (1.0, 1.0));
    }

    #[test]
    fn zaxis_resonance_is_an_error() {
        // α_Pα_M(2/r³)² = 1 at r = 2 with α_P α_M = 16.
        let err = enhancement_factor_zaxis(2.0.into(), 8.0.into(), 2.0).unwrap_err();
        assert_eq!(err.code(), "resonance");
    }

    #[test]
    fn singular_image_matrix_names_factor() {
        let g = Geometry::new(Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let sys = ClassicalSystem::new(iso(2.0), iso(8.0), &g, iso(1.0), 1.0);
        let err = total_polarizability(&sys).unwrap_err();
        assert!(err.to_string().contains("aM.L.aP.L"), "{err}");
    }
}
