use nalgebra::Matrix3;
use proptest::prelude::*;
use sers_core::model::MoleculeFile;
use sers_core::tensor::dipole_tensor_real;
use sers_core::*;

/// ∫ψ_{ν′}(Q) Q ψ_ν(Q) dQ by trapezoidal quadrature of normalized
/// oscillator eigenfunctions built from the Hermite recurrence.
fn quadrature_matrix_element(mu: f64, omega: f64, nu: usize, nu_prime: usize) -> f64 {
    let s = (mu * omega).sqrt();
    let n_max = nu.max(nu_prime);
    let half_width = (2.0 * n_max as f64 + 1.0).sqrt() + 12.0; // in units of 1/√(μω)
    let points = 20_001;
    let h = 2.0 * half_width / (points - 1) as f64;
    let mut sum = 0.0;
    for i in 0..points {
        let x = -half_width + i as f64 * h;
        let mut psi = vec![0.0; n_max + 1];
        psi[0] = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
        if n_max >= 1 {
            psi[1] = 2f64.sqrt() * x * psi[0];
        }
        for n in 1..n_max {
            let nf = n as f64;
            psi[n + 1] = (2.0 / (nf + 1.0)).sqrt() * x * psi[n] - (nf / (nf + 1.0)).sqrt() * psi[n - 1];
        }
        let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        // dQ = dx/s, Q = x/s, and each ψ(Q) carries √s from normalization.
        sum += w * psi[nu_prime] * x * psi[nu];
    }
    sum * h / s
}

#[test]
fn matrix_element_matches_quadrature_oracle() {
    let cases = [(1.0, 0.5, 0, 1), (2.0, 0.25, 3, 2), (1.7, 0.013, 4, 5), (2000.0, 0.01, 6, 5), (1.0, 1.0, 0, 2)];
    for (mu, omega, nu, nup) in cases {
        let oracle = quadrature_matrix_element(mu, omega, nu, nup);
        let value = harmonic_matrix_element(mu, omega, nu as u32, nup as u32);
        assert!((value - oracle).abs() < 1e-8 * value.abs().max(1.0), "{mu} {omega} {nu}->{nup}: {value} vs {oracle}");
    }
    // The ν = 3 → 2, μ = 2, ω = 0.25 case is √3.
    assert!((quadrature_matrix_element(2.0, 0.25, 3, 2) - 3f64.sqrt()).abs() < 1e-8);
}

fn arb_sep() -> impl Strategy<Value = Vec3> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
        .prop_map(|(x, y, z)| Vec3::new(x, y, z))
        .prop_filter("nonzero", |v| v.norm() > 1e-2)
}

proptest! {
    #[test]
    fn dipole_tensor_symmetric_traceless(sep in arb_sep()) {
        let l = dipole_tensor_real(&sep).unwrap();
        let scale = l.abs().max();
        prop_assert!((l - l.transpose()).abs().max() <= 1e-12 * scale);
        prop_assert!(l.trace().abs() <= 1e-12 * scale);
    }

    #[test]
    fn dipole_tensor_scaling(sep in arb_sep(), c in 0.1..10.0f64) {
        let a = dipole_tensor_real(&(sep * c)).unwrap();
        let b = dipole_tensor_real(&sep).unwrap() / c.powi(3);
        prop_assert!((a - b).abs().max() <= 1e-12 * b.abs().max());
    }

    #[test]
    fn dipole_tensor_exact_square(sep in arb_sep()) {
        let l = dipole_tensor_real(&sep).unwrap();
        let r = sep.norm();
        let n = sep / r;
        let expected = (3.0 * n * n.transpose() + Matrix3::identity()) / r.powi(6);
        prop_assert!((l * l - expected).abs().max() <= 1e-12 * expected.abs().max());
    }

    #[test]
    fn matrix_element_swap_symmetry(mu in 0.1..1e4f64, omega in 1e-3..1.0f64, nu in 0u32..20, nup in 0u32..20) {
        prop_assert_eq!(harmonic_matrix_element(mu, omega, nu, nup), harmonic_matrix_element(mu, omega, nup, nu));
    }

    #[test]
    fn matrix_element_selection_rule(mu in 0.1..1e4f64, omega in 1e-3..1.0f64, nu in 0u32..20, nup in 0u32..20) {
        let v = harmonic_matrix_element(mu, omega, nu, nup);
        prop_assert_eq!(v != 0.0, nu.abs_diff(nup) == 1);
    }

    #[test]
    fn model_round_trip(
        energies in proptest::collection::vec(-2.0..2.0f64, 2..7),
        raw in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3 * 49),
    ) {
        let mut e = energies.clone();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = e.len();
        let n_occ = (n / 2).max(1);
        let mu = 0.5 * (e[n_occ - 1] + e[n_occ]);
        let orbitals: Vec<_> = e.iter().enumerate()
            .map(|(i, &en)| Orbital { energy: en, occupation: u8::from(i < n_occ) }).collect();
        let mut entries = Vec::new();
        let mut k = 0;
        for p in 0..n {
            for q in p..n {
                let mut d = Vec3C::zeros();
                for x in 0..3 {
                    let (re, im) = raw[k % raw.len()];
                    k += 1;
                    d[x] = Complex64::new(re, if p == q { 0.0 } else { im });
                }
                entries.push((p, q, d));
            }
        }
        let model = MolecularModel::new(orbitals, &entries, mu).unwrap();
        let text = model.to_json();
        let back = MolecularModel::from_json(&text, std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(&back, &model);
        let file: MoleculeFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(file.into_model().unwrap(), model);
    }
}

#[test]
fn mode_file_loads_relative_models() {
    let dir = tempfile::tempdir().unwrap();
    let mol = |e0: f64| {
        format!(
            r#"{{"orbitals": [{{"energy": {e0}, "occupation": 1}}, {{"energy": 0.1, "occupation": 0}}],
                "dipole": [{{"p": 0, "q": 1, "re": [1, 0, 0]}}], "chemical_potential": -0.2}}"#
        )
    };
    std::fs::write(dir.path().join("m.json"), mol(-0.51)).unwrap();
    std::fs::write(dir.path().join("p.json"), mol(-0.49)).unwrap();
    std::fs::write(
        dir.path().join("mode.json"),
        r#"{"omega": 0.01, "reduced_mass": 1000.0, "delta": 0.01, "minus": "m.json", "plus": "p.json"}"#,
    )
    .unwrap();
    let mode = VibrationalMode::load(dir.path().join("mode.json"), 0).unwrap();
    assert_eq!(mode.plus.energy(0), -0.49);
    assert!((mode.matrix_element(0, 1) - (1.0 / 20.0f64).sqrt()).abs() < 1e-15);

    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"omega": -0.01, "reduced_mass": 1000.0, "delta": 0.01, "minus": "m.json", "plus": "p.json"}"#,
    )
    .unwrap();
    assert!(VibrationalMode::load(dir.path().join("bad.json"), 0).is_err());
}
