//! Entanglement detection: negativity over bipartitions, PPT verdicts,
//! pairwise concurrence and the genuine multiparticle negativity from the
//! fully decomposable witness program.

use nalgebra::Complex;
use sdp_solver::{hermitian_to_real, real_to_hermitian, ConstraintEntry, SdpProblem, SdpStatus};

use crate::bipartite::{
    embed_bipartite, expand_to_qubits, partial_transpose, partial_transpose_qubits, reduce_dicke,
    Subsystem,
};
use crate::spin::DickeDensityMatrix;
use crate::{hermitian_eigenvalues, CMatrix, DickeError};

/// Eigenvalues below this count as negative when summing the negativity.
pub const NEGATIVE_EIG_TOL: f64 = -1e-12;

/// Largest qubit register accepted by the witness program.
pub const GMN_QUBIT_CAP: usize = 5;

/// Negativity of one bipartition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    /// Particle number of the original system.
    pub n: usize,
    /// Particle number of the state the partial transpose acted on.
    pub n_r: usize,
    pub n_a: usize,
    pub n_b: usize,
    /// Drive ratio, when known to the caller.
    pub omega: Option<f64>,
    pub value: f64,
}

/// Absolute sum of the negative partial-transpose eigenvalues for the
/// `n_a | N − n_a` split. Permutation symmetry makes `n_a ≤ ⌊N/2⌋` exhaustive.
pub fn negativity(rho: &DickeDensityMatrix, n_a: usize) -> Result<NegativityReport, DickeError> {
    let n = rho.n_particles();
    if n_a == 0 || n_a > n / 2 {
        return Err(DickeError::InvalidSplit { n, n_a });
    }
    let emb = embed_bipartite(rho, n_a)?;
    let pt = partial_transpose(&emb, Subsystem::A);
    let value: f64 = hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&x| x < NEGATIVE_EIG_TOL)
        .sum::<f64>()
        .abs();
    Ok(NegativityReport {
        n,
        n_r: n,
        n_a,
        n_b: n - n_a,
        omega: None,
        value,
    })
}

/// One report per split `n_a ∈ {1 … ⌊N/2⌋}`.
pub fn negativity_all_bipartitions(
    rho: &DickeDensityMatrix,
) -> Result<Vec<NegativityReport>, DickeError> {
    let n = rho.n_particles();
    if n < 2 {
        return Err(DickeError::InvalidParticleCount { got: n, min: 2 });
    }
    (1..=n / 2).map(|n_a| negativity(rho, n_a)).collect()
}

/// `true` iff the partial transpose over the split has no eigenvalue below
/// the negativity threshold.
pub fn is_ppt(rho: &DickeDensityMatrix, n_a: usize) -> Result<bool, DickeError> {
    let n = rho.n_particles();
    if n_a == 0 || n_a >= n {
        return Err(DickeError::InvalidSplit { n, n_a });
    }
    let split = n_a.min(n - n_a);
    let emb = embed_bipartite(rho, split)?;
    let pt = partial_transpose(&emb, Subsystem::A);
    let min = hermitian_eigenvalues(&pt)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(min >= NEGATIVE_EIG_TOL)
}

/// Wootters pairwise concurrence of the two-particle reduction.
///
/// The symmetric 3-level reduced state embeds into the 4-dimensional
/// two-qubit space with zero singlet amplitude; the spin-flip spectrum is
/// computed in Hermitian form via `√ρ (σy⊗σy) ρ* (σy⊗σy) √ρ`.
pub fn concurrence_pairwise(rho: &DickeDensityMatrix) -> Result<f64, DickeError> {
    let n = rho.n_particles();
    if n < 2 {
        return Err(DickeError::InvalidParticleCount { got: n, min: 2 });
    }
    let pair = if n == 2 {
        rho.clone()
    } else {
        reduce_dicke(rho, 2)?
    };
    let q = expand_to_qubits(&pair)?;

    let mut flip = CMatrix::zeros(4, 4);
    flip[(0, 3)] = Complex::new(-1.0, 0.0);
    flip[(3, 0)] = Complex::new(-1.0, 0.0);
    flip[(1, 2)] = Complex::new(1.0, 0.0);
    flip[(2, 1)] = Complex::new(1.0, 0.0);

    let eig = q.clone().symmetric_eigen();
    let mut sqrt_q = CMatrix::zeros(4, 4);
    for k in 0..4 {
        let lam = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        for r in 0..4 {
            for c in 0..4 {
                sqrt_q[(r, c)] += v[r] * v[c].conj() * Complex::new(lam, 0.0);
            }
        }
    }
    let t = &sqrt_q * &flip * q.conjugate() * &flip * &sqrt_q;
    let mut lams: Vec<f64> = hermitian_eigenvalues(&t)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lams.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lams[0] - lams[1] - lams[2] - lams[3]).max(0.0))
}

/// Result of the fully decomposable witness search.
#[derive(Debug, Clone)]
pub struct WitnessResult {
    /// Genuine multiparticle negativity `max(0, −Tr(ρW))`.
    pub gmn: f64,
    /// The optimal witness, trace one.
    pub witness: CMatrix,
    /// `Tr(ρW)` at the optimum.
    pub objective: f64,
    pub duality_gap: f64,
    pub status: SdpStatus,
    /// Unordered bipartitions as qubit masks (bit 0 always set).
    pub bipartitions: Vec<usize>,
    /// `P_S` blocks, one per bipartition.
    pub p_blocks: Vec<CMatrix>,
    /// `Q_S` blocks, one per bipartition.
    pub q_blocks: Vec<CMatrix>,
}

/// Residuals of the witness decomposition, checked independently of the
/// solver output.
#[derive(Debug, Clone, Copy)]
pub struct WitnessValidity {
    /// max over bipartitions of `‖W − P_S − Q_S^{T_S}‖_F`.
    pub max_decomposition_residual: f64,
    /// min eigenvalue over all `P_S` (must be ≥ −1e-9).
    pub min_p_eigenvalue: f64,
    /// min eigenvalue over all `Q_S`.
    pub min_q_eigenvalue: f64,
    /// max eigenvalue over all `P_S` (normalization bound: ≤ 1 + 1e-9).
    pub max_p_eigenvalue: f64,
    /// max eigenvalue over all `Q_S`.
    pub max_q_eigenvalue: f64,
}

/// Genuine multiparticle negativity of an explicit qubit-register state.
///
/// Solves the fully decomposable witness program
///
/// ```text
/// minimize  Tr(ρW)
/// s.t.      W = P_S + Q_S^{T_S},  0 ⪯ P_S ⪯ I,  0 ⪯ Q_S ⪯ I
///           for every unordered bipartition S,
/// ```
///
/// over Hermitian blocks (embedded as real symmetric ones), with `W`
/// eliminated through the first bipartition's decomposition. The identity
/// bounds normalize the witness; with them the two-qubit value coincides
/// with the negativity and the three-qubit GHZ state gives exactly 1/2.
/// A negative optimum certifies genuine multiparticle entanglement; solver
/// failure is reported through `status`, never as a silent zero.
///
/// Permutation-invariant inputs are solved through an exact orbit reduction
/// (one bipartition representative per subsystem size, with the witness
/// constrained to the permutation-invariant subspace); general inputs use
/// one decomposition per bipartition and get expensive beyond four qubits.
pub fn gmn(rho: &CMatrix) -> Result<WitnessResult, DickeError> {
    let dim = rho.nrows();
    if rho.ncols() != dim || !dim.is_power_of_two() {
        return Err(DickeError::DimensionMismatch {
            expected: dim,
            got: rho.ncols(),
        });
    }
    let n = dim.trailing_zeros() as usize;
    if n < 2 {
        return Err(DickeError::InvalidParticleCount { got: n, min: 2 });
    }
    if n > GMN_QUBIT_CAP {
        return Err(DickeError::CapExceeded {
            what: "witness qubit register",
            got: n,
            cap: GMN_QUBIT_CAP,
        });
    }
    if (rho - rho.adjoint()).camax() > 1e-10 {
        return Err(DickeError::InvalidDensityMatrix(
            "witness input not Hermitian".into(),
        ));
    }
    let tr: Complex<f64> = rho.diagonal().sum();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(DickeError::InvalidDensityMatrix(format!(
            "witness input trace {}",
            tr.re
        )));
    }
    if hermitian_eigenvalues(rho)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
        < -1e-9
    {
        return Err(DickeError::InvalidDensityMatrix(
            "witness input not positive semidefinite".into(),
        ));
    }

    // Unordered bipartitions, canonicalized to contain qubit 0. The
    // decomposability condition for S and its complement coincide (a global
    // transpose maps one onto the other), so these are exhaustive.
    let full = dim - 1;
    let masks: Vec<usize> = (1..full).filter(|m| m & 1 == 1).collect();

    if is_permutation_symmetric(rho, n) {
        gmn_symmetric(rho, n, &masks)
    } else {
        gmn_full(rho, n, &masks)
    }
}

/// The witness program without the orbit reduction, one decomposition per
/// bipartition regardless of symmetry. Exposed for cross-validation; slow
/// beyond three qubits.
#[doc(hidden)]
pub fn gmn_unreduced(rho: &CMatrix) -> Result<WitnessResult, DickeError> {
    let dim = rho.nrows();
    let n = dim.trailing_zeros() as usize;
    let full = dim - 1;
    let masks: Vec<usize> = (1..full).filter(|m| m & 1 == 1).collect();
    gmn_full(rho, n, &masks)
}

/// One decomposition per bipartition; exact for arbitrary states.
fn gmn_full(rho: &CMatrix, n: usize, masks: &[usize]) -> Result<WitnessResult, DickeError> {
    let dim = 1usize << n;
    let k_parts = masks.len();
    // blocks 4k..4k+3: P_{S_k}, Q_{S_k}, I−P_{S_k}, I−Q_{S_k}
    let dims: Vec<usize> = vec![2 * dim; 4 * k_parts];
    let mut problem = SdpProblem::new(&dims)?;
    problem.set_objective(0, hermitian_to_real(rho)?)?;
    let rho_pt0 = partial_transpose_qubits(rho, n, masks[0]);
    problem.set_objective(1, hermitian_to_real(&rho_pt0)?)?;

    for (k, &mask) in masks.iter().enumerate().skip(1) {
        for_each_herm_basis(dim, |basis| {
            let mut entries = Vec::new();
            push_embedded(&mut entries, 0, basis, dim, 1.0);
            push_embedded(&mut entries, 1, &pt_triplets(basis, masks[0]), dim, 1.0);
            push_embedded(&mut entries, 4 * k, basis, dim, -1.0);
            push_embedded(
                &mut entries,
                4 * k + 1,
                &pt_triplets(basis, mask),
                dim,
                -1.0,
            );
            problem.add_constraint(entries, 0.0).map(|_| ())
        })?;
    }
    for k in 0..k_parts {
        add_bound_constraints(&mut problem, dim, 4 * k, 4 * k + 2)?;
        add_bound_constraints(&mut problem, dim, 4 * k + 1, 4 * k + 3)?;
    }

    let sol = sdp_solver::solve(&problem, 1e-10)?;
    let p_blocks: Vec<CMatrix> = (0..k_parts)
        .map(|k| real_to_hermitian(&sol.blocks[4 * k]).map_err(DickeError::from))
        .collect::<Result<_, _>>()?;
    let q_blocks: Vec<CMatrix> = (0..k_parts)
        .map(|k| real_to_hermitian(&sol.blocks[4 * k + 1]).map_err(DickeError::from))
        .collect::<Result<_, _>>()?;
    let witness = &p_blocks[0] + partial_transpose_qubits(&q_blocks[0], n, masks[0]);
    assemble_witness_result(rho, witness, masks.to_vec(), p_blocks, q_blocks, &sol)
}

/// Exact orbit reduction for permutation-invariant states: the witness is
/// constrained to the permutation-invariant operator subspace and one
/// bipartition representative per subsystem size carries the decomposition;
/// the remaining blocks are reconstructed by conjugation.
fn gmn_symmetric(rho: &CMatrix, n: usize, masks: &[usize]) -> Result<WitnessResult, DickeError> {
    let dim = 1usize << n;
    let sizes: Vec<usize> = (1..=n / 2).collect();
    let rep_masks: Vec<usize> = sizes.iter().map(|&s| (1usize << s) - 1).collect();
    let n_reps = rep_masks.len();
    // blocks 4r..4r+3: P_r, Q_r, I−P_r, I−Q_r for representative r
    let dims: Vec<usize> = vec![2 * dim; 4 * n_reps];
    let mut problem = SdpProblem::new(&dims)?;
    problem.set_objective(0, hermitian_to_real(rho)?)?;
    let rho_pt0 = partial_transpose_qubits(rho, n, rep_masks[0]);
    problem.set_objective(1, hermitian_to_real(&rho_pt0)?)?;

    // Permutation invariance of W: entries are constant on orbits of index
    // pairs classified by (popcount r, popcount c, popcount r∧c), and the
    // swap-symmetric classes are real. One sparse constraint per dependent
    // Hermitian component, expressed through W = P_0 + Q_0^{T_{S_0}}.
    for basis in symmetry_constraint_basis(n) {
        let mut entries = Vec::new();
        push_embedded(&mut entries, 0, &basis, dim, 1.0);
        push_embedded(
            &mut entries,
            1,
            &pt_triplets(&basis, rep_masks[0]),
            dim,
            1.0,
        );
        problem.add_constraint(entries, 0.0)?;
    }
    for (r, &mask) in rep_masks.iter().enumerate().skip(1) {
        for_each_herm_basis(dim, |basis| {
            let mut entries = Vec::new();
            push_embedded(&mut entries, 0, basis, dim, 1.0);
            push_embedded(&mut entries, 1, &pt_triplets(basis, rep_masks[0]), dim, 1.0);
            push_embedded(&mut entries, 4 * r, basis, dim, -1.0);
            push_embedded(
                &mut entries,
                4 * r + 1,
                &pt_triplets(basis, mask),
                dim,
                -1.0,
            );
            problem.add_constraint(entries, 0.0).map(|_| ())
        })?;
    }
    for r in 0..n_reps {
        add_bound_constraints(&mut problem, dim, 4 * r, 4 * r + 2)?;
        add_bound_constraints(&mut problem, dim, 4 * r + 1, 4 * r + 3)?;
    }

    let sol = sdp_solver::solve(&problem, 1e-10)?;
    let p_reps: Vec<CMatrix> = (0..n_reps)
        .map(|r| real_to_hermitian(&sol.blocks[4 * r]).map_err(DickeError::from))
        .collect::<Result<_, _>>()?;
    let q_reps: Vec<CMatrix> = (0..n_reps)
        .map(|r| real_to_hermitian(&sol.blocks[4 * r + 1]).map_err(DickeError::from))
        .collect::<Result<_, _>>()?;
    let witness = &p_reps[0] + partial_transpose_qubits(&q_reps[0], n, rep_masks[0]);

    // reconstruct every bipartition's blocks by permutation conjugation;
    // a size class above n/2 goes through the complement and a transpose
    let mut p_blocks = Vec::with_capacity(masks.len());
    let mut q_blocks = Vec::with_capacity(masks.len());
    for &mask in masks {
        let size = mask.count_ones() as usize;
        let (target, via_complement) = if size <= n - size {
            (mask, false)
        } else {
            (!mask & (dim - 1), true)
        };
        let s = target.count_ones() as usize;
        let rep = s - 1;
        let perm = permutation_onto(n, target);
        let p = conjugate_by_qubit_permutation(&p_reps[rep], n, &perm);
        let q = conjugate_by_qubit_permutation(&q_reps[rep], n, &perm);
        if via_complement {
            p_blocks.push(p);
            q_blocks.push(q.conjugate()); // global transpose of a Hermitian block
        } else {
            p_blocks.push(p);
            q_blocks.push(q);
        }
    }
    assemble_witness_result(rho, witness, masks.to_vec(), p_blocks, q_blocks, &sol)
}

fn assemble_witness_result(
    rho: &CMatrix,
    witness: CMatrix,
    bipartitions: Vec<usize>,
    p_blocks: Vec<CMatrix>,
    q_blocks: Vec<CMatrix>,
    sol: &sdp_solver::SdpSolution,
) -> Result<WitnessResult, DickeError> {
    let objective = (rho.adjoint() * &witness).diagonal().sum().re;
    // the witness gates (gap 1e-7, feasibility 1e-8) are far looser than
    // this; an iterate this good is optimal for every purpose here even if
    // the solver ran out of progress before its own stricter target
    let status = if sol.status == SdpStatus::MaxIter && sol.meets(2e-9, 2e-9) {
        SdpStatus::Optimal
    } else {
        sol.status
    };
    Ok(WitnessResult {
        gmn: (-objective).max(0.0),
        witness,
        objective,
        duality_gap: sol.duality_gap / 2.0,
        status,
        bipartitions,
        p_blocks,
        q_blocks,
    })
}

/// Checks the returned witness decomposition over every bipartition with
/// plain eigensolves, independent of the SDP iteration.
pub fn verify_witness(result: &WitnessResult) -> WitnessValidity {
    let n = result.witness.nrows().trailing_zeros() as usize;
    let mut max_res: f64 = 0.0;
    let mut min_p = f64::INFINITY;
    let mut min_q = f64::INFINITY;
    let mut max_p = f64::NEG_INFINITY;
    let mut max_q = f64::NEG_INFINITY;
    for (k, &mask) in result.bipartitions.iter().enumerate() {
        let recomposed =
            &result.p_blocks[k] + partial_transpose_qubits(&result.q_blocks[k], n, mask);
        max_res = max_res.max((&result.witness - recomposed).norm());
        for lam in hermitian_eigenvalues(&result.p_blocks[k]) {
            min_p = min_p.min(lam);
            max_p = max_p.max(lam);
        }
        for lam in hermitian_eigenvalues(&result.q_blocks[k]) {
            min_q = min_q.min(lam);
            max_q = max_q.max(lam);
        }
    }
    WitnessValidity {
        max_decomposition_residual: max_res,
        min_p_eigenvalue: min_p,
        min_q_eigenvalue: min_q,
        max_p_eigenvalue: max_p,
        max_q_eigenvalue: max_q,
    }
}

/// Runs `f` over the canonical Hermitian basis (diagonal, then real and
/// imaginary off-diagonal parts).
fn for_each_herm_basis<F>(dim: usize, mut f: F) -> Result<(), DickeError>
where
    F: FnMut(&[(usize, usize, Complex<f64>)]) -> Result<(), sdp_solver::SdpError>,
{
    for r in 0..dim {
        for c in r..dim {
            f(&herm_basis(r, c, false))?;
            if r != c {
                f(&herm_basis(r, c, true))?;
            }
        }
    }
    Ok(())
}

/// `X + X̄ = I` componentwise, tying a block to its identity complement.
fn add_bound_constraints(
    problem: &mut SdpProblem,
    dim: usize,
    block: usize,
    complement_block: usize,
) -> Result<(), DickeError> {
    for_each_herm_basis(dim, |basis| {
        let mut entries = Vec::new();
        push_embedded(&mut entries, block, basis, dim, 1.0);
        push_embedded(&mut entries, complement_block, basis, dim, 1.0);
        // ⟨E(β), E(I)⟩ = 2 Tr β: 2 for diagonal components, 0 otherwise
        let rhs = if basis.len() == 1 { 2.0 } else { 0.0 };
        problem.add_constraint(entries, rhs).map(|_| ())
    })
}

/// `true` when the state commutes with every adjacent qubit transposition.
fn is_permutation_symmetric(rho: &CMatrix, n: usize) -> bool {
    for q in 0..n.saturating_sub(1) {
        let perm: Vec<usize> = (0..n)
            .map(|i| match i {
                i if i == q => q + 1,
                i if i == q + 1 => q,
                i => i,
            })
            .collect();
        let conj = conjugate_by_qubit_permutation(rho, n, &perm);
        if (conj - rho).camax() > 1e-12 {
            return false;
        }
    }
    true
}

fn permute_index(x: usize, perm: &[usize]) -> usize {
    let mut y = 0usize;
    for (q, &target) in perm.iter().enumerate() {
        y |= ((x >> q) & 1) << target;
    }
    y
}

/// `(π ρ π†)[π(x), π(y)] = ρ[x, y]` for a qubit relabeling `π`.
fn conjugate_by_qubit_permutation(m: &CMatrix, n: usize, perm: &[usize]) -> CMatrix {
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        let pr = permute_index(r, perm);
        for c in 0..dim {
            out[(pr, permute_index(c, perm))] = m[(r, c)];
        }
    }
    out
}

/// Permutation sending `{0..s−1}` onto the set bits of `target` (ascending)
/// and the remaining positions onto the clear bits (ascending).
fn permutation_onto(n: usize, target: usize) -> Vec<usize> {
    let inside: Vec<usize> = (0..n).filter(|q| target & (1 << q) != 0).collect();
    let outside: Vec<usize> = (0..n).filter(|q| target & (1 << q) == 0).collect();
    let mut perm = vec![0usize; n];
    for (i, &pos) in inside.iter().chain(outside.iter()).enumerate() {
        perm[i] = pos;
    }
    perm
}

/// Sparse, linearly independent constraints pinning a Hermitian matrix to
/// the permutation-invariant subspace.
///
/// Index pairs fall into orbits labeled by `(popcount r, popcount c,
/// popcount r∧c)`; invariance forces equal entries along each orbit, and
/// Hermiticity makes the swap-symmetric orbits real. Each returned basis
/// combination has at most four complex triplets.
fn symmetry_constraint_basis(n: usize) -> Vec<Vec<(usize, usize, Complex<f64>)>> {
    use std::collections::HashMap;
    let dim = 1usize << n;
    let mut constraints = Vec::new();

    // diagonal entries: equal within each popcount class
    let mut diag_rep: HashMap<u32, usize> = HashMap::new();
    for r in 0..dim {
        let key = (r as u32).count_ones();
        match diag_rep.get(&key) {
            None => {
                diag_rep.insert(key, r);
            }
            Some(&rep) => {
                let mut b = herm_basis(r, r, false);
                b.push((rep, rep, Complex::new(-1.0, 0.0)));
                constraints.push(b);
            }
        }
    }

    // off-diagonal entries: classes keyed by the unordered popcount pattern
    struct Rep {
        r: usize,
        c: usize,
        ascending: bool,
    }
    let mut pair_rep: HashMap<(u32, u32, u32), Rep> = HashMap::new();
    for r in 0..dim {
        for c in (r + 1)..dim {
            let a = (r as u32).count_ones();
            let b = (c as u32).count_ones();
            let g = ((r & c) as u32).count_ones();
            let key = (a.min(b), a.max(b), g);
            let ascending = a <= b;
            if a == b {
                // swap-symmetric class: imaginary parts vanish identically
                constraints.push(herm_basis(r, c, true));
            }
            match pair_rep.get(&key) {
                None => {
                    pair_rep.insert(key, Rep { r, c, ascending });
                }
                Some(rep) => {
                    // real parts equal across the class
                    let mut re = herm_basis(r, c, false);
                    for (rr, cc, v) in herm_basis(rep.r, rep.c, false) {
                        re.push((rr, cc, -v));
                    }
                    constraints.push(re);
                    if a != b {
                        // imaginary parts equal, with a sign flip between the
                        // two orientations of the class
                        let sign = if ascending == rep.ascending {
                            -1.0
                        } else {
                            1.0
                        };
                        let mut im = herm_basis(r, c, true);
                        for (rr, cc, v) in herm_basis(rep.r, rep.c, true) {
                            im.push((rr, cc, v * Complex::new(sign, 0.0)));
                        }
                        constraints.push(im);
                    }
                }
            }
        }
    }
    constraints
}

/// Complex triplets of one Hermitian basis element: `E_rc + E_cr` for the
/// real part, `i E_rc − i E_cr` for the imaginary part.
fn herm_basis(r: usize, c: usize, im_part: bool) -> Vec<(usize, usize, Complex<f64>)> {
    if r == c {
        vec![(r, r, Complex::new(1.0, 0.0))]
    } else if im_part {
        vec![
            (r, c, Complex::new(0.0, 1.0)),
            (c, r, Complex::new(0.0, -1.0)),
        ]
    } else {
        vec![
            (r, c, Complex::new(1.0, 0.0)),
            (c, r, Complex::new(1.0, 0.0)),
        ]
    }
}

/// Partial transpose acting on sparse complex triplets: indices swap their
/// masked bits, values are unchanged.
fn pt_triplets(
    triplets: &[(usize, usize, Complex<f64>)],
    mask: usize,
) -> Vec<(usize, usize, Complex<f64>)> {
    triplets
        .iter()
        .map(|&(r, c, v)| {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            (r2, c2, v)
        })
        .collect()
}

/// Appends the real-symmetric embedding of `scale * H` (H given as complex
/// triplets of a Hermitian matrix) as upper-triangle constraint entries.
fn push_embedded(
    entries: &mut Vec<ConstraintEntry>,
    block: usize,
    triplets: &[(usize, usize, Complex<f64>)],
    dim: usize,
    scale: f64,
) {
    for &(r, c, v) in triplets {
        // [[Re, -Im], [Im, Re]]: four real entries per complex one, of which
        // the upper-triangle representatives are kept (the embedding of a
        // Hermitian matrix is symmetric, so the mirrored entries are implied).
        let candidates = [
            (r, c, scale * v.re),
            (r, c + dim, -scale * v.im),
            (r + dim, c, scale * v.im),
            (r + dim, c + dim, scale * v.re),
        ];
        for (rr, cc, vv) in candidates {
            if vv != 0.0 && rr <= cc {
                entries.push(ConstraintEntry::new(block, rr, cc, vv));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{steady_state, ModelParams};

    #[test]
    fn ground_state_has_zero_negativity() {
        let rho = DickeDensityMatrix::ground_state(6).unwrap();
        for na in 1..=3 {
            assert_eq!(negativity(&rho, na).unwrap().value, 0.0);
        }
    }

    #[test]
    fn triplet_negativity_is_half() {
        let mid = DickeDensityMatrix::level_projector(2, 1).unwrap();
        let rep = negativity(&mid, 1).unwrap();
        assert!((rep.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn strong_drive_state_is_ppt_everywhere() {
        let params = ModelParams::new(8, 100.0).unwrap();
        let rho = steady_state(&params).unwrap();
        for rep in negativity_all_bipartitions(&rho).unwrap() {
            assert!(rep.value < 1e-8, "split {}: {}", rep.n_a, rep.value);
        }
        for na in 1..8 {
            assert!(is_ppt(&rho, na).unwrap());
        }
    }

    #[test]
    fn transition_state_is_npt() {
        let params = ModelParams::new(8, 0.5).unwrap();
        let rho = steady_state(&params).unwrap();
        assert!(!is_ppt(&rho, 4).unwrap());
        assert!(negativity(&rho, 4).unwrap().value > 1e-6);
    }

    #[test]
    fn report_count_follows_floor() {
        let rho = DickeDensityMatrix::ground_state(5).unwrap();
        assert_eq!(negativity_all_bipartitions(&rho).unwrap().len(), 2);
    }

    #[test]
    fn negativity_matches_ppt_verdict() {
        for omega in [0.1, 0.5, 2.0, 50.0] {
            let params = ModelParams::new(6, omega).unwrap();
            let rho = steady_state(&params).unwrap();
            for na in 1..=3 {
                let neg = negativity(&rho, na).unwrap().value;
                let ppt = is_ppt(&rho, na).unwrap();
                assert_eq!(neg > 0.0, !ppt, "omega={omega} na={na}");
            }
        }
    }

    #[test]
    fn negativity_same_from_either_side() {
        let params = ModelParams::new(6, 0.5).unwrap();
        let rho = steady_state(&params).unwrap();
        let emb = embed_bipartite(&rho, 2).unwrap();
        let from_a: f64 = hermitian_eigenvalues(&partial_transpose(&emb, Subsystem::A))
            .into_iter()
            .filter(|&x| x < NEGATIVE_EIG_TOL)
            .sum();
        let from_b: f64 = hermitian_eigenvalues(&partial_transpose(&emb, Subsystem::B))
            .into_iter()
            .filter(|&x| x < NEGATIVE_EIG_TOL)
            .sum();
        assert!((from_a - from_b).abs() < 1e-12);
    }

    #[test]
    fn negativity_cross_check_against_qubit_register() {
        // the symmetric embedding and the explicit register must agree
        let params = ModelParams::new(3, 0.5).unwrap();
        let rho = steady_state(&params).unwrap();
        let via_embed = negativity(&rho, 1).unwrap().value;
        let q = expand_to_qubits(&rho).unwrap();
        let pt = partial_transpose_qubits(&q, 3, 0b001);
        let via_register: f64 = hermitian_eigenvalues(&pt)
            .into_iter()
            .filter(|&x| x < NEGATIVE_EIG_TOL)
            .sum::<f64>()
            .abs();
        assert!((via_embed - via_register).abs() < 1e-10);
    }

    #[test]
    fn concurrence_of_product_state_is_zero() {
        let rho = DickeDensityMatrix::ground_state(4).unwrap();
        assert_eq!(concurrence_pairwise(&rho).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_of_triplet_is_one() {
        let mid = DickeDensityMatrix::level_projector(2, 1).unwrap();
        assert!((concurrence_pairwise(&mid).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_peaks_near_transition_and_dies_off() {
        let at = |omega: f64| {
            let params = ModelParams::new(8, omega).unwrap();
            concurrence_pairwise(&steady_state(&params).unwrap()).unwrap()
        };
        let peak = at(0.5);
        assert!(peak > 1e-3);
        assert!(at(0.05) < peak);
        assert!(at(5.0) < 1e-4);
    }

    fn ghz3() -> CMatrix {
        let mut m = CMatrix::zeros(8, 8);
        let h = Complex::new(0.5, 0.0);
        m[(0, 0)] = h;
        m[(0, 7)] = h;
        m[(7, 0)] = h;
        m[(7, 7)] = h;
        m
    }

    #[test]
    fn ghz_gmn_is_one_half() {
        let res = gmn(&ghz3()).unwrap();
        assert_eq!(res.status, SdpStatus::Optimal);
        assert!((res.gmn - 0.5).abs() < 1e-6, "gmn = {}", res.gmn);
        let validity = verify_witness(&res);
        assert!(validity.max_decomposition_residual <= 1e-8);
        assert!(validity.min_p_eigenvalue >= -1e-9);
        assert!(validity.min_q_eigenvalue >= -1e-9);
        assert!(validity.max_p_eigenvalue <= 1.0 + 1e-9);
        assert!(validity.max_q_eigenvalue <= 1.0 + 1e-9);
    }

    #[test]
    fn two_qubit_gmn_equals_negativity() {
        // with the identity-bound normalization the single-bipartition
        // witness value reduces to the negativity
        let params = ModelParams::new(6, 0.6).unwrap();
        let rho = steady_state(&params).unwrap();
        let pair = reduce_dicke(&rho, 2).unwrap();
        let q = expand_to_qubits(&pair).unwrap();
        let res = gmn(&q).unwrap();
        let neg = negativity(&pair, 1).unwrap().value;
        assert_eq!(res.status, SdpStatus::Optimal);
        assert!((res.gmn - neg).abs() < 1e-6, "gmn {} neg {}", res.gmn, neg);
    }

    #[test]
    fn asymmetric_two_qubit_gmn_equals_negativity() {
        // non-permutation-symmetric input exercises the per-bipartition path
        let psi = [0.0, 0.6, 0.8, 0.0];
        let mut pure = CMatrix::zeros(4, 4);
        for r in 0..4 {
            for c in 0..4 {
                pure[(r, c)] = Complex::new(psi[r] * psi[c], 0.0);
            }
        }
        let mut m = pure * Complex::new(0.7, 0.0);
        m[(1, 1)] += Complex::new(0.3, 0.0);
        let res = gmn(&m).unwrap();
        assert_eq!(res.status, SdpStatus::Optimal);
        let pt = partial_transpose_qubits(&m, 2, 0b01);
        let neg: f64 = hermitian_eigenvalues(&pt)
            .into_iter()
            .filter(|&x| x < 0.0)
            .sum::<f64>()
            .abs();
        assert!((res.gmn - neg).abs() < 1e-6, "gmn {} neg {}", res.gmn, neg);
    }

    #[test]
    fn separable_diagonal_product_has_zero_gmn() {
        // ⊗³ diag(0.7, 0.3): fully separable, a PPT mixture with p = 1
        let mut m = CMatrix::zeros(8, 8);
        for x in 0..8usize {
            let ones = x.count_ones();
            let p = 0.3f64.powi(ones as i32) * 0.7f64.powi(3 - ones as i32);
            m[(x, x)] = Complex::new(p, 0.0);
        }
        let res = gmn(&m).unwrap();
        assert_eq!(res.status, SdpStatus::Optimal);
        assert!(res.gmn < 1e-7, "gmn = {}", res.gmn);
    }

    #[test]
    fn gmn_rejects_oversized_registers() {
        let d = 1usize << 6;
        let m = CMatrix::identity(d, d) * Complex::new(1.0 / d as f64, 0.0);
        assert!(matches!(gmn(&m), Err(DickeError::CapExceeded { .. })));
    }

    #[test]
    fn gmn_positive_implies_some_npt_split() {
        let params = ModelParams::new(4, 0.5).unwrap();
        let rho = steady_state(&params).unwrap();
        let q = expand_to_qubits(&rho).unwrap();
        let res = gmn(&q).unwrap();
        if res.gmn > 1e-6 {
            let any_npt = (1..=2).any(|na| !is_ppt(&rho, na).unwrap());
            assert!(any_npt);
        }
    }
}
