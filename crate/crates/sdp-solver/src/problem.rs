//! Problem description: block structure, objective, sparse equality constraints.

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("block dimensions must be positive")]
    EmptyBlock,
    #[error("block index {0} out of range")]
    BlockOutOfRange(usize),
    #[error("entry ({row}, {col}) out of range for block {block} of dimension {dim}")]
    EntryOutOfRange {
        block: usize,
        row: usize,
        col: usize,
        dim: usize,
    },
    #[error("objective for block {0} is not symmetric")]
    NonSymmetricObjective(usize),
    #[error("input matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// One nonzero of a sparse symmetric constraint matrix.
///
/// Entries are given for `row <= col`; the value is implicitly mirrored to
/// `(col, row)`. The inner product with a symmetric `X` is therefore
/// `value * X[row,col]` for diagonal entries and `2 * value * X[row,col]`
/// for off-diagonal ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl ConstraintEntry {
    pub fn new(block: usize, row: usize, col: usize, value: f64) -> Self {
        Self {
            block,
            row,
            col,
            value,
        }
    }
}

/// A linear SDP over a product of real symmetric PSD cones.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    dims: Vec<usize>,
    objective: Vec<DMatrix<f64>>,
    constraints: Vec<Vec<ConstraintEntry>>,
    rhs: Vec<f64>,
}

impl SdpProblem {
    /// Creates a problem with the given PSD block dimensions, zero objective
    /// and no constraints.
    pub fn new(dims: &[usize]) -> Result<Self, SdpError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(SdpError::EmptyBlock);
        }
        Ok(Self {
            dims: dims.to_vec(),
            objective: dims.iter().map(|&d| DMatrix::zeros(d, d)).collect(),
            constraints: Vec::new(),
            rhs: Vec::new(),
        })
    }

    /// Sets the objective matrix `C_b` for one block. Must be symmetric.
    pub fn set_objective(&mut self, block: usize, c: DMatrix<f64>) -> Result<(), SdpError> {
        let d = *self
            .dims
            .get(block)
            .ok_or(SdpError::BlockOutOfRange(block))?;
        if c.nrows() != d || c.ncols() != d {
            return Err(SdpError::DimensionMismatch {
                expected: d,
                got: c.nrows(),
            });
        }
        let dev = (&c - c.transpose()).amax();
        if dev > 1e-12 * (1.0 + c.amax()) {
            return Err(SdpError::NonSymmetricObjective(block));
        }
        self.objective[block] = c;
        Ok(())
    }

    /// Appends the equality constraint `sum <A, X> = rhs` described by sparse
    /// upper-triangle entries. Returns the constraint index.
    pub fn add_constraint(
        &mut self,
        entries: Vec<ConstraintEntry>,
        rhs: f64,
    ) -> Result<usize, SdpError> {
        for e in &entries {
            let d = *self
                .dims
                .get(e.block)
                .ok_or(SdpError::BlockOutOfRange(e.block))?;
            if e.row > e.col || e.col >= d {
                return Err(SdpError::EntryOutOfRange {
                    block: e.block,
                    row: e.row,
                    col: e.col,
                    dim: d,
                });
            }
        }
        self.constraints.push(entries);
        self.rhs.push(rhs);
        Ok(self.rhs.len() - 1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub(crate) fn objective_block(&self, b: usize) -> &DMatrix<f64> {
        &self.objective[b]
    }

    pub(crate) fn constraint(&self, i: usize) -> &[ConstraintEntry] {
        &self.constraints[i]
    }

    pub(crate) fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// `<A_i, X>` for symmetric `X` blocks.
    pub(crate) fn apply_constraint(&self, i: usize, x: &[DMatrix<f64>]) -> f64 {
        self.constraints[i]
            .iter()
            .map(|e| {
                let v = e.value * x[e.block][(e.row, e.col)];
                if e.row == e.col {
                    v
                } else {
                    2.0 * v
                }
            })
            .sum()
    }

    /// Accumulates `y_i * A_i` into dense symmetric blocks.
    pub(crate) fn adjoint(&self, y: &[f64]) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        for (i, entries) in self.constraints.iter().enumerate() {
            let yi = y[i];
            if yi == 0.0 {
                continue;
            }
            for e in entries {
                out[e.block][(e.row, e.col)] += yi * e.value;
                if e.row != e.col {
                    out[e.block][(e.col, e.row)] += yi * e.value;
                }
            }
        }
        out
    }
}

/// Embeds a complex Hermitian matrix as a real symmetric one of doubled size:
/// `[[Re H, -Im H], [Im H, Re H]]`.
///
/// The embedding is PSD iff the input is PSD and every eigenvalue of the
/// input appears twice in the output. Rejects non-Hermitian input.
pub fn hermitian_to_real(h: &DMatrix<Complex<f64>>) -> Result<DMatrix<f64>, SdpError> {
    let d = h.nrows();
    if h.ncols() != d {
        return Err(SdpError::DimensionMismatch {
            expected: d,
            got: h.ncols(),
        });
    }
    let dev = (h - h.adjoint()).camax();
    if dev > 1e-12 * (1.0 + h.camax()) {
        return Err(SdpError::NotHermitian(dev));
    }
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            let z = h[(r, c)];
            out[(r, c)] = z.re;
            out[(d + r, d + c)] = z.re;
            out[(r, d + c)] = -z.im;
            out[(d + r, c)] = z.im;
        }
    }
    Ok(out)
}

/// Inverse of [`hermitian_to_real`] with symmetrization.
///
/// Averages the two real-part copies and the two imaginary-part copies, then
/// Hermitizes, so it is well defined for matrices that are only approximately
/// in the embedded subspace (e.g. solver output).
pub fn real_to_hermitian(m: &DMatrix<f64>) -> Result<DMatrix<Complex<f64>>, SdpError> {
    let n = m.nrows();
    if m.ncols() != n || !n.is_multiple_of(2) {
        return Err(SdpError::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    let d = n / 2;
    let mut h = DMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let re = 0.5 * (m[(r, c)] + m[(d + r, d + c)]);
            let im = 0.5 * (m[(d + r, c)] - m[(r, d + c)]);
            h[(r, c)] = Complex::new(re, im);
        }
    }
    let herm = (&h + h.adjoint()) * Complex::new(0.5, 0.0);
    Ok(herm)
}
