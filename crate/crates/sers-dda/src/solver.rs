//! Coupled-dipole linear system A p = B with A_jk = α_j⁻¹δ_jk − (1−δ_jk)Λ′_jk.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use sers_core::tensor::checked_inverse;
use sers_core::{Complex64, Error, Result, Tensor3C, Vec3, Vec3C};

use crate::lattice::VoxelLattice;

/// Voxel polarizabilities with condition number above this are treated as singular.
const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Largest voxel count solved by dense LU; above it GMRES is used.
    pub dense_threshold: usize,
    /// Required relative residual ‖Ap − B‖/‖B‖.
    pub tol: f64,
    /// Total Krylov iterations; `None` means 10·√(3N).
    pub max_iter: Option<usize>,
    /// Krylov subspace size before restart.
    pub restart: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { dense_threshold: 2000, tol: 1e-10, max_iter: None, restart: 100 }
    }
}

/// Assembled system at one frequency. Pair tensors are applied matrix-free.
#[derive(Debug, Clone)]
pub struct DdaSystem {
    positions: Vec<Vec3>,
    alpha: Vec<Tensor3C>,
    inv_alpha: Vec<Tensor3C>,
}

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn dipole_field(r: &Vec3) -> Tensor3C {
    sers_core::dipole_tensor(r).expect("distinct voxel positions")
}

fn block(x: &[Complex64], j: usize) -> Vec3C {
    Vec3C::new(x[3 * j], x[3 * j + 1], x[3 * j + 2])
}

fn flatten(blocks: impl IntoIterator<Item = Vec3C>) -> Vec<Complex64> {
    blocks.into_iter().flat_map(|v| [v[0], v[1], v[2]]).collect()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn assemble_system(lattice: &VoxelLattice, omega: f64) -> Result<DdaSystem> {
    let alpha = lattice.polarizabilities(omega)?;
    let inv_alpha = alpha
        .iter()
        .enumerate()
        .map(|(j, a)| checked_inverse(a, MAX_CONDITION, &format!("polarizability of voxel {j}")))
        .collect::<Result<Vec<_>>>()?;
    let positions = (0..lattice.len()).map(|j| lattice.position(j)).collect();
    Ok(DdaSystem { positions, alpha, inv_alpha })
}

impl DdaSystem {
    pub fn n_voxels(&self) -> usize {
        self.positions.len()
    }

    pub fn alpha(&self, j: usize) -> &Tensor3C {
        &self.alpha[j]
    }

    /// Σ_{k≠j} Λ′_jk x_k for every j.
    fn coupling(&self, x: &[Complex64]) -> Vec<Vec3C> {
        (0..self.n_voxels())
            .into_par_iter()
            .map(|j| {
                let mut acc = Vec3C::zeros();
                for (k, pk) in self.positions.iter().enumerate() {
                    if k != j {
                        acc += dipole_field(&(self.positions[j] - pk)) * block(x, k);
                    }
                }
                acc
            })
            .collect()
    }

    /// A·x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let coupled = self.coupling(x);
        flatten((0..self.n_voxels()).map(|j| self.inv_alpha[j] * block(x, j) - coupled[j]))
    }

    /// x − α_j Σ_{k≠j} Λ′_jk x_k, the system left-multiplied by blockdiag(α).
    fn apply_scaled(&self, x: &[Complex64]) -> Vec<Complex64> {
        let coupled = self.coupling(x);
        flatten((0..self.n_voxels()).map(|j| block(x, j) - self.alpha[j] * coupled[j]))
    }

    pub fn dense_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n_voxels();
        let mut a = DMatrix::from_element(3 * n, 3 * n, c0());
        for j in 0..n {
            a.view_mut((3 * j, 3 * j), (3, 3)).copy_from(&self.inv_alpha[j]);
            for k in 0..n {
                if k != j {
                    let t = -dipole_field(&(self.positions[j] - self.positions[k]));
                    a.view_mut((3 * j, 3 * k), (3, 3)).copy_from(&t);
                }
            }
        }
        a
    }

    /// B stacked per voxel from E₀ and E_M at each voxel.
    pub fn rhs(&self, e0: &[Vec3C], em: &[Vec3C]) -> Result<Vec<Complex64>> {
        let n = self.n_voxels();
        if e0.len() != n || em.len() != n {
            return Err(Error::Domain(format!(
                "field arrays have {} and {} entries for {n} voxels",
                e0.len(),
                em.len()
            )));
        }
        Ok(flatten(e0.iter().zip(em).map(|(a, b)| a + b)))
    }

    /// ‖A x − b‖ / ‖b‖ (0 when b = 0 and x = 0).
    pub fn relative_residual(&self, x: &[Complex64], b: &[Complex64]) -> f64 {
        let ax = self.apply(x);
        let r: Vec<Complex64> = ax.iter().zip(b).map(|(u, v)| u - v).collect();
        let nb = norm(b);
        if nb == 0.0 {
            norm(&r)
        } else {
            norm(&r) / nb
        }
    }
}

/// Dense LU solve of the assembled system.
pub fn solve_dense(sys: &DdaSystem, b: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let a = sys.dense_matrix();
    let x = a
        .lu()
        .solve(&DVector::from_column_slice(b))
        .ok_or_else(|| Error::resonance("DDA system matrix", "LU factorization is singular"))?;
    let x: Vec<Complex64> = x.iter().copied().collect();
    let res = sys.relative_residual(&x, b);
    if !(res < tol) {
        return Err(Error::resonance("DDA system matrix", format!("dense solve residual {res:.3e} exceeds {tol:.1e}")));
    }
    Ok(x)
}

/// Complex Givens rotation (c real) zeroing `b` against `a`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, c0());
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let rho = na.hypot(nb);
    (na / rho, (a / na) * b.conj() / rho)
}

fn rotate(c: f64, s: Complex64, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    (a * c + s * b, -s.conj() * a + b * c)
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Restarted GMRES on the scaled system (I − αΛ′)p = αB. Convergence is judged
/// on the residual of the original system A p = B. Returns the solution and
/// the number of Krylov iterations used.
pub fn solve_iterative(sys: &DdaSystem, b: &[Complex64], opts: &SolverOptions) -> Result<(Vec<Complex64>, usize)> {
    let n = b.len();
    let max_iter = opts.max_iter.unwrap_or_else(|| (10.0 * (n as f64).sqrt()).ceil() as usize).max(1);
    let restart = opts.restart.clamp(1, n.max(1));
    let rhs = flatten((0..sys.n_voxels()).map(|j| sys.alpha[j] * block(b, j)));
    let mut x = vec![c0(); n];
    let mut history = Vec::new();
    let mut used = 0;
    loop {
        let res = sys.relative_residual(&x, b);
        history.push(res);
        if res < opts.tol || norm(b) == 0.0 {
            return Ok((x, used));
        }
        if used >= max_iter {
            return Err(Error::NonConvergence { what: "GMRES".into(), history });
        }
        let ax = sys.apply_scaled(&x);
        let r: Vec<Complex64> = rhs.iter().zip(&ax).map(|(u, v)| u - v).collect();
        let beta = norm(&r);
        if beta == 0.0 {
            return Ok((x, used));
        }
        // Aim the inner solve well below the target so the unscaled residual follows.
        let inner_tol = 0.01 * opts.tol * norm(&rhs);
        let mut basis: Vec<Vec<Complex64>> = vec![r.iter().map(|z| z / beta).collect()];
        let mut h: Vec<Vec<Complex64>> = Vec::new();
        let mut rots: Vec<(f64, Complex64)> = Vec::new();
        let mut g = vec![Complex64::new(beta, 0.0)];
        for j in 0..restart.min(max_iter - used) {
            let mut w = sys.apply_scaled(&basis[j]);
            let mut col = vec![c0(); j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
                col[i] = hij;
            }
            let hnext = norm(&w);
            col[j + 1] = Complex64::new(hnext, 0.0);
            for (i, &(c, s)) in rots.iter().enumerate() {
                let (a, bb) = rotate(c, s, col[i], col[i + 1]);
                col[i] = a;
                col[i + 1] = bb;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            let (a, _) = rotate(c, s, col[j], col[j + 1]);
            col[j] = a;
            col[j + 1] = c0();
            rots.push((c, s));
            let (gj, gnext) = rotate(c, s, g[j], c0());
            g[j] = gj;
            g.push(gnext);
            h.push(col);
            used += 1;
            if gnext.norm() <= inner_tol || hnext == 0.0 {
                break;
            }
            basis.push(w.iter().map(|z| z / hnext).collect());
        }
        // Back substitution for the upper-triangular least-squares system.
        let m = h.len();
        let mut y = vec![c0(); m];
        for i in (0..m).rev() {
            let mut acc = g[i];
            for k in i + 1..m {
                acc -= h[k][i] * y[k];
            }
            y[i] = acc / h[i][i];
        }
        for (k, yk) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[k]) {
                *xi += yk * vi;
            }
        }
    }
}

/// Induced voxel dipoles p⁽¹⁾ for incident field E₀ and molecular field E_M at each voxel.
pub fn solve_induced_dipoles(
    lattice: &VoxelLattice,
    omega: f64,
    e0: &[Vec3C],
    em: &[Vec3C],
    opts: &SolverOptions,
) -> Result<Vec<Vec3C>> {
    let sys = assemble_system(lattice, omega)?;
    let b = sys.rhs(e0, em)?;
    if sys.n_voxels() == 1 {
        // A = α⁻¹, so the solution is α·B with no factorization error.
        return Ok(vec![sys.alpha[0] * block(&b, 0)]);
    }
    let x = if sys.n_voxels() <= opts.dense_threshold {
        solve_dense(&sys, &b, opts.tol)?
    } else {
        solve_iterative(&sys, &b, opts)?.0
    };
    Ok((0..sys.n_voxels()).map(|j| block(&x, j)).collect())
}

/// E_P at the molecule: Σ_j Λ_j p_j.
pub fn particle_field_at_molecule(lattice: &VoxelLattice, dipoles: &[Vec3C]) -> Result<Vec3C> {
    if dipoles.len() != lattice.len() {
        return Err(Error::Domain(format!("{} dipoles for {} voxels", dipoles.len(), lattice.len())));
    }
    Ok(dipoles.iter().enumerate().map(|(j, p)| lattice.molecule_tensor(j) * p).sum())
}
