//! Exact steady state of the driven-dissipative collective spin (Dicke)
//! model and the correlation measures that characterize its dissipative
//! phase transition.
//!
//! The model is a collection of `N` two-level atoms confined to the
//! permutation-symmetric (Dicke) subspace, driven coherently and damped by
//! collective emission. Everything here is parameterized by the particle
//! number `N` and the dimensionless drive-to-dissipation ratio `Ω`; the
//! transition sits at `Ω = 1/2`.
//!
//! Module map:
//! - [`spin`]: collective spin operators, the exact steady state, the
//!   vectorized Liouvillian and scalar observables.
//! - [`bipartite`]: Clebsch-Gordan machinery for splitting the symmetric
//!   space into subsystems, partial transpose/trace, qubit expansion.
//! - [`entanglement`]: negativity over bipartitions, pairwise concurrence,
//!   PPT verdicts and the genuine multiparticle negativity witness.
//! - [`correlations`]: quantum discord in its 2-qubit, bipartite, global and
//!   multipartite-classical variants.
//! - [`separability`]: Hankel-matrix separability test for diagonal
//!   symmetric states.

pub mod bipartite;
pub mod correlations;
pub mod entanglement;
mod error;
pub mod separability;
pub mod spin;

pub use error::DickeError;

use nalgebra::{Complex, DMatrix};

/// Complex dense matrix used throughout.
pub type CMatrix = DMatrix<Complex<f64>>;

/// Trace distance `‖a − b‖₁ / 2` between two Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    0.5 * diff
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Eigenvalues of a Hermitian matrix, unordered.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Natural-log factorial table `ln(0!) ..= ln(max!)`.
pub(crate) fn ln_factorials(max: usize) -> Vec<f64> {
    let mut lf = vec![0.0; max + 1];
    for k in 1..=max {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    lf
}
