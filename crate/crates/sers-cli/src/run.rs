//! Per-frequency pipelines for each mode.

use rayon::prelude::*;
use sers_classical::{classical_sers_intensity, local_field_factors, ClassicalSystem};
use sers_core::tensor::norm;
use sers_core::{Complex64, Drude, Error, Geometry, MolecularModel, Result, Tensor3C, Vec3, Vec3C};
use sers_dda::{
    particle_field_at_molecule, self_consistent_solve, solve_induced_dipoles, voxel_polarizability, ScfOptions,
    SolverOptions, VoxelLattice,
};
use sers_greens::{
    enhancement_factors, molecular_polarizability, normal_raman_intensity, raman_polarizability, rpa_polarizability,
    sers_intensity, ParticleCoupling, SelfEnergy,
};

use crate::config::{Mode, Particle, Prepared};
use crate::output::{FieldRow, Output, SelfEnergyRow, SpectrumRow};

/// Runs every sweep point on the current rayon pool; rows come back in ω order.
pub fn run(p: &Prepared) -> Output {
    match p.mode {
        Mode::Classical | Mode::QuantumRpa | Mode::QuantumDda => {
            Output::Spectrum(p.grid.par_iter().map(|&w| spectrum_row(p, w)).collect())
        }
        Mode::SelfEnergy => {
            let rows: Vec<Vec<SelfEnergyRow>> = p.grid.par_iter().map(|&w| self_energy_rows(p, w)).collect();
            Output::SelfEnergy(rows.into_iter().flatten().collect())
        }
        Mode::DdaSolve => Output::Field(p.grid.par_iter().map(|&w| field_row(p, w)).collect()),
    }
}

struct Values {
    i_raman: f64,
    i_sers: f64,
    g_norm: f64,
    gp_norm: f64,
    iterations: usize,
}

fn spectrum_row(p: &Prepared, omega_k: f64) -> SpectrumRow {
    let omega_kp = p.omega_kp(omega_k);
    let result = match p.mode {
        Mode::Classical => classical_values(p, omega_k, omega_kp),
        Mode::QuantumRpa => quantum_rpa_values(p, omega_k, omega_kp),
        _ => quantum_dda_values(p, omega_k, omega_kp),
    };
    let result = result.and_then(|v| {
        let all = [v.i_raman, v.i_sers, v.g_norm, v.gp_norm];
        if all.iter().all(|x| x.is_finite()) {
            Ok(v)
        } else {
            Err(Error::Domain(format!("non-finite result at omega_k = {omega_k}")))
        }
    });
    match result {
        Ok(v) => SpectrumRow {
            omega_k,
            omega_kp,
            i_raman: v.i_raman,
            i_sers: v.i_sers,
            enhancement: if v.i_raman > 0.0 { v.i_sers / v.i_raman } else { 0.0 },
            g_norm: v.g_norm,
            gp_norm: v.gp_norm,
            iterations: v.iterations,
            status: Ok(()),
        },
        Err(e) => SpectrumRow::failed(omega_k, omega_kp, e.code()),
    }
}

fn model(p: &Prepared) -> &MolecularModel {
    p.model.as_ref().expect("prepared spectrum runs carry a molecule")
}

fn channel(p: &Prepared) -> &sers_greens::RamanChannel {
    p.channel.as_ref().expect("prepared spectrum runs carry a channel")
}

fn classical_values(p: &Prepared, omega_k: f64, omega_kp: f64) -> Result<Values> {
    let m = model(p);
    let field = p.field(omega_k, omega_kp)?;
    let x = raman_polarizability(m, &p.modes, channel(p), &field)?;
    let alpha_m = molecular_polarizability(m, omega_k, field.eta);
    let (alpha_p, geometry) = match &p.particle {
        Particle::None => (Tensor3C::zeros(), Geometry::new(Vec3::z())?),
        Particle::Analytic { drude, geometry } => (rpa_polarizability(drude.omega0, drude.gamma, omega_k), *geometry),
        Particle::Lattice(l) => {
            let v = &l.voxels[0];
            (voxel_polarizability(&l.drude, v.vol, omega_k, l.radiative)?, Geometry::new(v.position())?)
        }
    };
    // The vibrational matrix element is already folded into x.
    let sys = ClassicalSystem::new(alpha_m, alpha_p, &geometry, x, 1.0);
    let (g, gp) = local_field_factors(&sys);
    Ok(Values {
        i_raman: sers_classical::normal_raman_intensity(&sys, &field),
        i_sers: classical_sers_intensity(&sys, &field)?,
        g_norm: norm(&g),
        gp_norm: norm(&gp),
        iterations: 0,
    })
}

/// Stand-in plasma for the particle-free run; heavily damped so α stays finite
/// everywhere while Λ = 0 removes it from every product.
const NO_PARTICLE: Drude = Drude { omega0: 1.0, gamma: 1.0 };

fn coupling_and_self_energy(p: &Prepared) -> (ParticleCoupling, SelfEnergy) {
    let m = model(p);
    let eta = p.numeric.eta;
    match &p.particle {
        Particle::Analytic { drude, geometry } => (
            ParticleCoupling::new(geometry, *drude),
            SelfEnergy::rpa(m, geometry, drude.omega0, eta, p.numeric.flavor(), p.numeric.form()),
        ),
        _ => (ParticleCoupling::decoupled(NO_PARTICLE), SelfEnergy::zero(m, eta)),
    }
}

fn quantum_rpa_values(p: &Prepared, omega_k: f64, omega_kp: f64) -> Result<Values> {
    let (m, ch) = (model(p), channel(p));
    let field = p.field(omega_k, omega_kp)?;
    let (coupling, se) = coupling_and_self_energy(p);
    let f = enhancement_factors(m, &coupling, &se, ch.q, ch.q, omega_k, omega_kp, field.eta)?;
    Ok(Values {
        i_raman: normal_raman_intensity(m, &p.modes, ch, &field)?,
        i_sers: sers_intensity(m, &p.modes, &coupling, &se, ch, &field)?,
        g_norm: norm(&f.g),
        gp_norm: norm(&f.g_prime),
        iterations: 0,
    })
}

fn lattice(p: &Prepared) -> &VoxelLattice {
    match &p.particle {
        Particle::Lattice(l) => l,
        _ => panic!("prepared lattice runs carry a lattice"),
    }
}

fn scf_options(p: &Prepared) -> ScfOptions {
    ScfOptions {
        mixing: p.numeric.mixing,
        tol: p.numeric.tol,
        max_iter: p.numeric.max_iter,
        solver: SolverOptions { dense_threshold: p.numeric.solver_threshold, ..Default::default() },
    }
}

fn unit(axis: usize) -> Vec3C {
    Vec3C::from_fn(|i, _| Complex64::new(if i == axis { 1.0 } else { 0.0 }, 0.0))
}

/// Local-field tensor at the molecule: column b is the total field for a unit
/// incident field along b, with molecule and particle solved self-consistently.
fn local_field_tensor(p: &Prepared, se: &SelfEnergy, omega: f64) -> Result<(Tensor3C, usize)> {
    let (m, l) = (model(p), lattice(p));
    let opts = scf_options(p);
    let mut g = Tensor3C::zeros();
    let mut iterations = 0;
    for b in 0..3 {
        let e0 = unit(b);
        let state = self_consistent_solve(m, se, l, omega, p.numeric.eta, e0, &opts)?;
        g.set_column(b, &(e0 + particle_field_at_molecule(l, &state.particle_dipoles)?));
        iterations = iterations.max(state.iteration);
    }
    Ok((g, iterations))
}

fn quantum_dda_values(p: &Prepared, omega_k: f64, omega_kp: f64) -> Result<Values> {
    let (m, ch) = (model(p), channel(p));
    let field = p.field(omega_k, omega_kp)?;
    let se = match &p.geometry {
        Some(g) => SelfEnergy::rpa(m, g, lattice(p).drude.omega0, field.eta, p.numeric.flavor(), p.numeric.form()),
        None => SelfEnergy::zero(m, field.eta),
    };
    let (g, it_k) = local_field_tensor(p, &se, omega_k)?;
    let (g_out, it_kp) = local_field_tensor(p, &se, omega_kp)?;
    // Reciprocity: the emission factor is the transpose of the local-field tensor.
    let gp = g_out.transpose();
    let x = raman_polarizability(m, &p.modes, ch, &field)?;
    Ok(Values {
        i_raman: normal_raman_intensity(m, &p.modes, ch, &field)?,
        i_sers: field.intensity(&(gp * x * g)),
        g_norm: norm(&g),
        gp_norm: norm(&gp),
        iterations: it_k.max(it_kp),
    })
}

fn self_energy_rows(p: &Prepared, omega: f64) -> Vec<SelfEnergyRow> {
    let m = model(p);
    let Particle::Analytic { drude, geometry } = &p.particle else {
        panic!("prepared self-energy runs carry an analytic particle");
    };
    let se = SelfEnergy::rpa(m, geometry, drude.omega0, p.numeric.eta, p.numeric.flavor(), p.numeric.form());
    (0..m.n_orbitals())
        .map(|orbital| {
            let (shift, width) = (se.shift(orbital, omega), se.width(orbital, omega));
            let status = if shift.is_finite() && width.is_finite() { Ok(()) } else { Err("domain") };
            SelfEnergyRow { omega, orbital, shift, width, status }
        })
        .collect()
}

fn field_row(p: &Prepared, omega: f64) -> FieldRow {
    let l = lattice(p);
    let opts = SolverOptions { dense_threshold: p.numeric.solver_threshold, ..Default::default() };
    let result = (|| {
        let e0 = vec![p.pol_in; l.len()];
        let dipoles = solve_induced_dipoles(l, omega, &e0, &vec![Vec3C::zeros(); l.len()], &opts)?;
        let field = p.pol_in + particle_field_at_molecule(l, &dipoles)?;
        let total: Vec3C = dipoles.iter().sum();
        Ok::<_, Error>((field, total.norm()))
    })();
    match result {
        Ok((field, dipole_norm)) => FieldRow { omega, field, dipole_norm, status: Ok(()) },
        Err(e) => FieldRow {
            omega,
            field: Vec3C::from_element(Complex64::new(f64::NAN, f64::NAN)),
            dipole_norm: f64::NAN,
            status: Err(e.code()),
        },
    }
}
