//! Collective spin operators, the exact steady state, the vectorized
//! Liouvillian and scalar observables.
//!
//! # Conventions
//!
//! The Dicke ladder of `N` two-level atoms spans `N + 1` states `|J, m⟩` with
//! `J = N/2`. Matrices are indexed by the excitation number `k = J + m`, i.e.
//! ascending in `m`: index `0` is the collective ground state `|J, −J⟩` and
//! index `N` the fully excited state.
//!
//! The master equation is
//!
//! ```text
//! dρ/dt = −i [H, ρ] + J⁻ ρ J⁺ − (J⁺J⁻ ρ + ρ J⁺J⁻) / 2,
//! H = (i ω_d / 2) (J⁺ − J⁻),        ω_d = N Ω,
//! ```
//!
//! with the collective decay rate fixed to 1. The drive strength is
//! normalized so that the dimensionless ratio `Ω` places the purity
//! transition at `Ω = 1/2`; the drive axis is chosen so that the unique
//! steady state is a real matrix, which puts the transverse coherence
//! entirely into `⟨Jx⟩` and makes `⟨Jy⟩` vanish identically.
//!
//! With that normalization the steady state has the closed form
//!
//! ```text
//! ρ_ss ∝ Σ_{l,l'} (J⁻/g)^l (J⁺/g)^{l'},        g = N Ω,
//! ```
//!
//! which this module accumulates element-wise in log magnitude (the matrix
//! elements grow factorially and overflow doubles near N ≈ 40 otherwise) and
//! cross-checks against the Liouvillian null space.

use nalgebra::{Complex, DMatrix, DVector};

use crate::{hermitian_eigenvalues, ln_factorials, CMatrix, DickeError};

/// Max elementwise deviation from Hermiticity accepted in a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues above this floor count as non-negative.
pub const PSD_FLOOR: f64 = -1e-10;
/// Relative stationarity residual the steady-state construction must reach.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Largest particle number for the dense null-space oracle.
pub const NULLSPACE_CAP: usize = 32;

/// Collective spin operators on the Dicke ladder of `N` atoms.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    n: usize,
    pub j_plus: CMatrix,
    pub j_minus: CMatrix,
    pub j_x: CMatrix,
    pub j_y: CMatrix,
    pub j_z: CMatrix,
}

impl SpinOperators {
    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }
}

/// Builds `J±`, `Jx`, `Jy`, `Jz` for `n ≥ 1` atoms.
///
/// `J⁺|J,m⟩ = √((J−m)(J+m+1)) |J,m+1⟩`, `J⁻ = (J⁺)†`,
/// `Jx = (J⁺+J⁻)/2`, `Jy = (J⁺−J⁻)/(2i)`, `Jz = diag(m)`.
pub fn build_spin_operators(n: usize) -> Result<SpinOperators, DickeError> {
    if n == 0 {
        return Err(DickeError::InvalidParticleCount { got: 0, min: 1 });
    }
    let d = n + 1;
    let j = n as f64 / 2.0;
    let mut j_plus = CMatrix::zeros(d, d);
    let mut j_z = CMatrix::zeros(d, d);
    for k in 0..d {
        let m = k as f64 - j;
        j_z[(k, k)] = Complex::new(m, 0.0);
        if k + 1 < d {
            j_plus[(k + 1, k)] = Complex::new(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
        }
    }
    let j_minus = j_plus.adjoint();
    let half = Complex::new(0.5, 0.0);
    let j_x = (&j_plus + &j_minus) * half;
    let j_y = (&j_plus - &j_minus) * Complex::new(0.0, -0.5);
    Ok(SpinOperators {
        n,
        j_plus,
        j_minus,
        j_x,
        j_y,
        j_z,
    })
}

/// Model parameters: particle number `N` and drive-to-dissipation ratio `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    omega: f64,
}

impl ModelParams {
    pub fn new(n: usize, omega: f64) -> Result<Self, DickeError> {
        if n == 0 {
            return Err(DickeError::InvalidParticleCount { got: 0, min: 1 });
        }
        if !omega.is_finite() || omega < 0.0 {
            return Err(DickeError::InvalidOmega(omega));
        }
        Ok(Self { n, omega })
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Drive strength `ω_d = N Ω` entering the Hamiltonian (decay rate 1).
    pub fn drive_strength(&self) -> f64 {
        self.n as f64 * self.omega
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix on the Dicke ladder.
#[derive(Debug, Clone)]
pub struct DickeDensityMatrix {
    n: usize,
    matrix: CMatrix,
}

impl DickeDensityMatrix {
    /// Validates Hermiticity (1e-12), trace (1 ± 1e-12) and positivity
    /// (eigenvalues ≥ −1e-10).
    pub fn new(n: usize, matrix: CMatrix) -> Result<Self, DickeError> {
        if n == 0 {
            return Err(DickeError::InvalidParticleCount { got: 0, min: 1 });
        }
        let d = n + 1;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(DickeError::DimensionMismatch {
                expected: d,
                got: matrix.nrows(),
            });
        }
        let herm_dev = (&matrix - matrix.adjoint()).camax();
        if herm_dev > HERMITICITY_TOL {
            return Err(DickeError::InvalidDensityMatrix(format!(
                "Hermiticity deviation {herm_dev:.3e}"
            )));
        }
        let tr: Complex<f64> = matrix.diagonal().sum();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(DickeError::InvalidDensityMatrix(format!(
                "trace {} + {}i",
                tr.re, tr.im
            )));
        }
        let min_eig = hermitian_eigenvalues(&matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_FLOOR {
            return Err(DickeError::InvalidDensityMatrix(format!(
                "minimum eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { n, matrix })
    }

    /// Internal constructor for matrices that are valid by construction.
    pub(crate) fn from_parts_unchecked(n: usize, matrix: CMatrix) -> Self {
        Self { n, matrix }
    }

    /// Projector onto the Dicke level with `k` excitations.
    pub fn level_projector(n: usize, k: usize) -> Result<Self, DickeError> {
        if k > n {
            return Err(DickeError::DimensionMismatch {
                expected: n,
                got: k,
            });
        }
        let mut m = CMatrix::zeros(n + 1, n + 1);
        m[(k, k)] = Complex::new(1.0, 0.0);
        Ok(Self::from_parts_unchecked(n, m))
    }

    /// Collective ground state `|J,−J⟩⟨J,−J|`.
    pub fn ground_state(n: usize) -> Result<Self, DickeError> {
        Self::level_projector(n, 0)
    }

    /// Uniform mixture of the `N + 1` Dicke levels.
    pub fn uniform_mixture(n: usize) -> Result<Self, DickeError> {
        let d = n + 1;
        let m = CMatrix::identity(d, d) * Complex::new(1.0 / d as f64, 0.0);
        Ok(Self::from_parts_unchecked(n, m))
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Scalar observables of a Dicke state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub purity: f64,
}

/// `⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩` and `Tr ρ²`.
pub fn observables(rho: &DickeDensityMatrix) -> Observables {
    let ops = build_spin_operators(rho.n_particles()).expect("n >= 1 by construction");
    let expect = |op: &CMatrix| -> f64 {
        let v: Complex<f64> = (op * rho.matrix()).diagonal().sum();
        debug_assert!(v.im.abs() < 1e-10, "imaginary expectation {:.3e}", v.im);
        v.re
    };
    Observables {
        jx: expect(&ops.j_x),
        jy: expect(&ops.j_y),
        jz: expect(&ops.j_z),
        purity: rho.matrix().norm_squared(),
    }
}

/// Exact steady state of the master equation.
///
/// `Ω = 0` returns the collective ground state (the closed form is singular
/// there). For `Ω > 0` the double operator sum is accumulated element-wise in
/// the log domain and trace-normalized; the result is checked against the
/// stationarity residual and positivity before being returned.
pub fn steady_state(params: &ModelParams) -> Result<DickeDensityMatrix, DickeError> {
    let n = params.n_particles();
    if params.omega() == 0.0 {
        return DickeDensityMatrix::ground_state(n);
    }
    let d = n + 1;
    let g = params.drive_strength();
    let ln_g = g.ln();
    let lf = ln_factorials(n);

    // C⁺(k, l): amplitude of raising l times from excitation k;
    // C⁻(k, l): lowering l times from excitation k. Both as log magnitudes.
    let ln_raise =
        |k: usize, l: usize| -> f64 { 0.5 * (lf[n - k] - lf[n - k - l] + lf[k + l] - lf[k]) };
    let ln_lower =
        |k: usize, l: usize| -> f64 { 0.5 * (lf[k] - lf[k - l] + lf[n - k + l] - lf[n - k]) };

    // log of the unnormalized element (ka, kb) for ka >= kb: paths raise l'
    // times from kb then lower l' - (ka - kb) times, every term positive.
    let mut log_elems = DMatrix::from_element(d, d, f64::NEG_INFINITY);
    let mut terms: Vec<f64> = Vec::with_capacity(d);
    for kb in 0..d {
        for ka in kb..d {
            let delta = ka - kb;
            terms.clear();
            for lp in delta..=(n - kb) {
                let l = lp - delta;
                let t = -((2 * lp - delta) as f64) * ln_g + ln_raise(kb, lp) + ln_lower(kb + lp, l);
                terms.push(t);
            }
            log_elems[(ka, kb)] = log_sum_exp(&terms);
        }
    }

    let peak = log_elems.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut rho = CMatrix::zeros(d, d);
    for kb in 0..d {
        for ka in kb..d {
            let v = (log_elems[(ka, kb)] - peak).exp();
            rho[(ka, kb)] = Complex::new(v, 0.0);
            rho[(kb, ka)] = Complex::new(v, 0.0);
        }
    }
    let tr: Complex<f64> = rho.diagonal().sum();
    rho /= tr;

    let state = DickeDensityMatrix::new(n, rho)?;
    let residual = lindblad_residual(&state, params)?;
    let tol = RESIDUAL_TOL * state.matrix().norm().max(f64::MIN_POSITIVE);
    if residual > tol {
        return Err(DickeError::PrecisionLoss { residual, tol });
    }
    Ok(state)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Right-hand side of the master equation evaluated at `rho`.
fn lindblad_rhs(rho: &CMatrix, params: &ModelParams, ops: &SpinOperators) -> CMatrix {
    let i = Complex::new(0.0, 1.0);
    let h = (&ops.j_plus - &ops.j_minus) * (i * Complex::new(0.5 * params.drive_strength(), 0.0));
    let comm = &h * rho - rho * &h;
    let jpjm = &ops.j_plus * &ops.j_minus;
    let half = Complex::new(0.5, 0.0);
    comm * (-i) + &ops.j_minus * rho * &ops.j_plus - (&jpjm * rho + rho * &jpjm) * half
}

/// Frobenius norm of the master-equation right-hand side at `rho`; zero iff
/// `rho` is stationary.
pub fn lindblad_residual(
    rho: &DickeDensityMatrix,
    params: &ModelParams,
) -> Result<f64, DickeError> {
    if rho.n_particles() != params.n_particles() {
        return Err(DickeError::DimensionMismatch {
            expected: params.n_particles() + 1,
            got: rho.dim(),
        });
    }
    let ops = build_spin_operators(params.n_particles())?;
    Ok(lindblad_rhs(rho.matrix(), params, &ops).norm())
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let v = a[(i, j)];
            if v != Complex::new(0.0, 0.0) {
                for k in 0..br {
                    for l in 0..bc {
                        out[(i * br + k, j * bc + l)] = v * b[(k, l)];
                    }
                }
            }
        }
    }
    out
}

/// Vectorized Liouvillian acting on column-major `vec(ρ)`:
/// `L = −i (I⊗H − Hᵀ⊗I) + (J⁺)ᵀ⊗J⁻ − ½ I⊗J⁺J⁻ − ½ (J⁺J⁻)ᵀ⊗I`.
pub fn liouvillian(params: &ModelParams) -> Result<CMatrix, DickeError> {
    let ops = build_spin_operators(params.n_particles())?;
    let d = ops.dim();
    let eye = CMatrix::identity(d, d);
    let i = Complex::new(0.0, 1.0);
    let h = (&ops.j_plus - &ops.j_minus) * (i * Complex::new(0.5 * params.drive_strength(), 0.0));
    let jpjm = &ops.j_plus * &ops.j_minus;
    let half = Complex::new(0.5, 0.0);

    let mut l = kron(&eye, &h) - kron(&h.transpose(), &eye);
    l *= -i;
    l += kron(&ops.j_plus.transpose(), &ops.j_minus);
    l -= kron(&eye, &jpjm) * half;
    l -= kron(&jpjm.transpose(), &eye) * half;
    Ok(l)
}

/// Independent steady-state oracle: the (unique) null vector of the dense
/// Liouvillian, found by SVD. Supported up to `N = 32`.
pub fn steady_state_nullspace(params: &ModelParams) -> Result<DickeDensityMatrix, DickeError> {
    let n = params.n_particles();
    if n > NULLSPACE_CAP {
        return Err(DickeError::CapExceeded {
            what: "particle count for null-space solve",
            got: n,
            cap: NULLSPACE_CAP,
        });
    }
    let l = liouvillian(params)?;
    let d = n + 1;
    let svd = l.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-10 * smax.max(1.0);
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] < tol)
        .collect();
    if kernel.len() != 1 {
        return Err(DickeError::NonUniqueSteadyState(kernel.len()));
    }
    let row = v_t.row(kernel[0]).adjoint();
    let vec: DVector<Complex<f64>> = DVector::from_iterator(d * d, row.iter().cloned());
    let mat = CMatrix::from_column_slice(d, d, vec.as_slice());
    let mut herm = (&mat + mat.adjoint()) * Complex::new(0.5, 0.0);
    let tr: Complex<f64> = herm.diagonal().sum();
    if tr.norm() < 1e-14 {
        return Err(DickeError::InvalidDensityMatrix(
            "null vector has vanishing trace".into(),
        ));
    }
    herm /= tr;
    // SVD noise can leave eigenvalues a hair below the PSD floor; clip only
    // within the validation tolerance by re-Hermitizing.
    let herm = (&herm + herm.adjoint()) * Complex::new(0.5, 0.0);
    DickeDensityMatrix::new(n, herm)
}
