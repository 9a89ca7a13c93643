//! A dense primal-dual interior-point solver for small semidefinite programs.
//!
//! Problems are posed in standard primal form over a product of real
//! symmetric PSD cones:
//!
//! ```text
//! minimize    sum_b <C_b, X_b>
//! subject to  sum_b <A_ib, X_b> = b_i      (i = 1..m)
//!             X_b >= 0                      (positive semidefinite)
//! ```
//!
//! with the associated dual `maximize b'y  s.t.  S_b = C_b - sum_i y_i A_ib >= 0`.
//! Hermitian data enters through [`hermitian_to_real`], which maps a complex
//! Hermitian matrix to the real symmetric matrix `[[Re H, -Im H], [Im H, Re H]]`
//! (same spectrum, doubled multiplicity).
//!
//! The solver is a Mehrotra-style predictor-corrector with Nesterov-Todd
//! scaling and dense linear algebra. It is aimed at blocks of dimension up to
//! a few dozen and a few thousand equality constraints, is fully
//! deterministic, and returns primal/dual iterates that the caller can verify
//! independently.

mod problem;
mod solver;

pub use problem::{hermitian_to_real, real_to_hermitian, ConstraintEntry, SdpError, SdpProblem};
pub use solver::{solve, IterateStats, SdpSolution, SdpStatus};
