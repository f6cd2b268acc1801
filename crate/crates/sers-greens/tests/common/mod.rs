#![allow(dead_code)]

use proptest::prelude::*;
use sers_core::{Complex64, Geometry, MolecularModel, Orbital, Vec3, Vec3C, VibrationalMode};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn vx(x: f64) -> Vec3C {
    Vec3C::new(c(x, 0.0), c(0.0, 0.0), c(0.0, 0.0))
}

pub fn vz(z: f64) -> Vec3C {
    Vec3C::new(c(0.0, 0.0), c(0.0, 0.0), c(z, 0.0))
}

pub fn real_vec(v: [f64; 3]) -> Vec3C {
    Vec3C::new(c(v[0], 0.0), c(v[1], 0.0), c(v[2], 0.0))
}

pub fn z_geometry(r: f64) -> Geometry {
    Geometry::new(Vec3::new(0.0, 0.0, r)).unwrap()
}

/// Two levels at −0.5 and 0.1 with transverse (x) dipoles, μ = −0.2.
pub fn two_level(d01: f64, d00: f64, d11: f64) -> MolecularModel {
    MolecularModel::new(
        vec![Orbital::hole(-0.5), Orbital::particle(0.1)],
        &[(0, 1, vx(d01)), (0, 0, vx(d00)), (1, 1, vx(d11))],
        -0.2,
    )
    .unwrap()
}

/// Two holes and two particles with fixed real dipoles.
pub fn four_level() -> MolecularModel {
    let entries = [
        (0, 0, real_vec([0.4, 0.1, -0.2])),
        (0, 1, real_vec([0.3, -0.5, 0.2])),
        (0, 2, real_vec([0.9, 0.2, 0.1])),
        (0, 3, real_vec([-0.1, 0.6, 0.3])),
        (1, 1, real_vec([-0.3, 0.2, 0.5])),
        (1, 2, real_vec([0.2, 0.7, -0.4])),
        (1, 3, real_vec([0.5, 0.1, 0.8])),
        (2, 2, real_vec([0.1, -0.4, 0.2])),
        (2, 3, real_vec([0.6, 0.3, -0.2])),
        (3, 3, real_vec([0.2, 0.2, -0.3])),
    ];
    MolecularModel::new(
        vec![Orbital::hole(-0.6), Orbital::hole(-0.45), Orbital::particle(0.05), Orbital::particle(0.2)],
        &entries,
        -0.2,
    )
    .unwrap()
}

/// Displaced pair obtained by stretching every dipole by (1 ± k·δ) and
/// shifting every energy by ∓s·δ.
pub fn displaced_mode(model: &MolecularModel, delta: f64, k: f64, s: f64) -> VibrationalMode {
    let shift = |sign: f64| {
        let n = model.n_orbitals();
        let orbitals = model
            .orbitals()
            .iter()
            .enumerate()
            .map(|(p, o)| Orbital { energy: o.energy - sign * s * delta * (1.0 + p as f64 * 0.3), ..*o })
            .collect();
        let dense = (0..n * n).map(|i| model.dipole(i / n, i % n) * c(1.0 + sign * k * delta, 0.0)).collect();
        MolecularModel::from_dense(orbitals, dense, model.chemical_potential()).unwrap()
    };
    VibrationalMode::new(0, 0.01, 1.0, delta, shift(-1.0), shift(1.0)).unwrap()
}

fn dipole_entry(complex: bool, diagonal: bool) -> impl Strategy<Value = Vec3C> {
    (prop::array::uniform3(-1.0..1.0f64), prop::array::uniform3(-1.0..1.0f64)).prop_map(move |(re, im)| {
        let keep_im = complex && !diagonal;
        Vec3C::from_fn(|i, _| c(re[i], if keep_im { im[i] } else { 0.0 }))
    })
}

/// Random valid model with `n` orbitals, at least one hole and one particle,
/// and a gap of at least 0.05 around μ.
pub fn random_model(n: usize, complex: bool) -> impl Strategy<Value = MolecularModel> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect();
    let dipoles = pairs.iter().map(|&(p, q)| dipole_entry(complex, p == q)).collect::<Vec<_>>();
    (prop::collection::vec(-1.0..1.0f64, n), 1..n, dipoles).prop_filter_map(
        "gap too small",
        move |(mut e, holes, d)| {
            e.sort_by(f64::total_cmp);
            let (top, bottom) = (e[holes - 1], e[holes]);
            if bottom - top < 0.05 {
                return None;
            }
            let orbitals = e
                .iter()
                .enumerate()
                .map(|(i, &x)| if i < holes { Orbital::hole(x) } else { Orbital::particle(x) })
                .collect();
            let entries: Vec<_> = pairs.iter().zip(d).map(|(&(p, q), v)| (p, q, v)).collect();
            MolecularModel::new(orbitals, &entries, 0.5 * (top + bottom)).ok()
        },
    )
}
