use thiserror::Error;

#[derive(Debug, Error)]
pub enum DickeError {
    #[error("particle count must be at least {min}, got {got}")]
    InvalidParticleCount { got: usize, min: usize },
    #[error("omega must be non-negative and finite, got {0}")]
    InvalidOmega(f64),
    #[error("invalid bipartition n_a = {n_a} of N = {n} particles")]
    InvalidSplit { n: usize, n_a: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("size cap exceeded: {what} = {got} exceeds supported {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("steady-state accumulation lost precision: residual {residual:.3e} > {tol:.3e}")]
    PrecisionLoss { residual: f64, tol: f64 },
    #[error("Liouvillian kernel has dimension {0}, expected 1; operator convention bug")]
    NonUniqueSteadyState(usize),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("state is not diagonal symmetric: off-diagonal mass {mass:.3e} > tolerance {tol:.3e}")]
    NotDiagonalSymmetric { mass: f64, tol: f64 },
    #[error(transparent)]
    Sdp(#[from] sdp_solver::SdpError),
}
