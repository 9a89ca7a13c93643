//! Separability of diagonal symmetric states via Hankel matrices.
//!
//! A mixture of Dicke projectors is separable iff the two Hankel matrices of
//! its coefficients in the unnormalized-Dicke convention are positive
//! semidefinite. The strong-drive limit has the closed-form coefficients
//! `χ_k = 1 / ((2J+1) C(2J, k))`, whose Hankel matrices coincide with a Gram
//! matrix of beta-function moments and are therefore PSD at every size.

use nalgebra::DMatrix;

use crate::spin::DickeDensityMatrix;
use crate::{binomial, ln_factorials, DickeError};

/// Default Frobenius tolerance on the off-diagonal mass.
pub const DIAGONALITY_TOL: f64 = 1e-10;

/// Eigenvalue floor for the Hankel PSD verdict.
pub const HANKEL_PSD_FLOOR: f64 = -1e-10;

/// Coefficients of a diagonal symmetric state over unnormalized Dicke
/// weights, `ρ = Σ_k χ_k |D_k⟩⟨D_k|` with `χ_k ≥ 0`.
#[derive(Debug, Clone)]
pub struct DiagonalSymmetricCoeffs {
    n_particles: usize,
    chi: Vec<f64>,
}

impl DiagonalSymmetricCoeffs {
    pub fn new(n_particles: usize, chi: Vec<f64>) -> Result<Self, DickeError> {
        if chi.len() != n_particles + 1 {
            return Err(DickeError::DimensionMismatch {
                expected: n_particles + 1,
                got: chi.len(),
            });
        }
        if chi.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(DickeError::InvalidDensityMatrix(
                "negative or non-finite diagonal-symmetric coefficient".into(),
            ));
        }
        Ok(Self { n_particles, chi })
    }

    /// Strong-drive limit coefficients `χ_k = 1/((2J+1) C(2J,k))` for
    /// `2J = n` atoms.
    pub fn strong_drive_limit(n_particles: usize) -> Self {
        let chi = (0..=n_particles)
            .map(|k| 1.0 / ((n_particles + 1) as f64 * binomial(n_particles, k)))
            .collect();
        Self { n_particles, chi }
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }
}

/// Extracts the diagonal-symmetric coefficients from a Dicke state.
///
/// The populations `p_m` of the normalized basis convert with the binomial
/// weight, `χ_k = p_{m(k)} / C(N, k)` with `k = J − m` counting down from the
/// top of the ladder, so the ground state sits at `χ_N`. Rejects states whose
/// off-diagonal Frobenius mass exceeds `tol`.
pub fn diagonal_symmetric_chi(
    rho: &DickeDensityMatrix,
    tol: f64,
) -> Result<DiagonalSymmetricCoeffs, DickeError> {
    let n = rho.n_particles();
    let m = rho.matrix();
    let mut off = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c {
                off += m[(r, c)].norm_sqr();
            }
        }
    }
    let off = off.sqrt();
    if off > tol {
        return Err(DickeError::NotDiagonalSymmetric { mass: off, tol });
    }
    let chi = (0..=n)
        .map(|k| {
            // excitation index of m(k) = J − k is n − k
            let p = m[(n - k, n - k)].re.max(0.0);
            p / binomial(n, k)
        })
        .collect();
    DiagonalSymmetricCoeffs::new(n, chi)
}

/// The two Hankel matrices `H0[i,j] = χ_{i+j}` (size `⌊J⌋ + 1`) and
/// `H1[i,j] = χ_{i+j+1}` (size `⌊J − 1/2⌋ + 1`).
pub fn hankel_matrices(coeffs: &DiagonalSymmetricCoeffs) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = coeffs.n_particles();
    let chi = coeffs.chi();
    // 2J = n: ⌊J⌋ = n/2, ⌊J − 1/2⌋ = (n−1)/2
    let m0 = n / 2;
    let m1 = if n >= 1 { (n - 1) / 2 } else { 0 };
    let h0 = DMatrix::from_fn(m0 + 1, m0 + 1, |i, j| chi[i + j]);
    let h1 = DMatrix::from_fn(m1 + 1, m1 + 1, |i, j| chi[i + j + 1]);
    (h0, h1)
}

/// Separability verdict for a diagonal symmetric state: both Hankel matrices
/// PSD (eigenvalues above `−1e-10`).
pub fn is_separable_diagonal_symmetric(
    rho: &DickeDensityMatrix,
    tol: f64,
) -> Result<bool, DickeError> {
    let coeffs = diagonal_symmetric_chi(rho, tol)?;
    let (h0, h1) = hankel_matrices(&coeffs);
    Ok(min_eig(&h0) >= HANKEL_PSD_FLOOR && min_eig(&h1) >= HANKEL_PSD_FLOOR)
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Gram matrix of the beta-function moments,
/// `G_δ[i,j] = (i+j+δ)! (2J−i−j−δ)! / (2J+1)!`,
/// equal elementwise to the Hankel matrix `H_δ` of the strong-drive
/// coefficients and manifestly PSD. Factorials are evaluated in log space.
pub fn gram_oracle(j: f64, delta: u8) -> Result<DMatrix<f64>, DickeError> {
    let two_j = (2.0 * j).round();
    if !j.is_finite() || (2.0 * j - two_j).abs() > 1e-9 || two_j < 1.0 {
        return Err(DickeError::InvalidQuantumNumbers(format!(
            "j = {j} must be a half-integer ≥ 1/2"
        )));
    }
    if delta > 1 {
        return Err(DickeError::InvalidQuantumNumbers(format!(
            "delta = {delta} must be 0 or 1"
        )));
    }
    let two_j = two_j as usize;
    let size = if delta == 0 {
        two_j / 2 + 1
    } else {
        (two_j - 1) / 2 + 1
    };
    let lf = ln_factorials(two_j + 1);
    let d = delta as usize;
    Ok(DMatrix::from_fn(size, size, |i, k| {
        (lf[i + k + d] + lf[two_j - i - k - d] - lf[two_j + 1]).exp()
    }))
}
