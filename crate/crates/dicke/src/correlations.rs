//! Quantum discord and its variants: 2-qubit discord, the Euler-rotation
//! upper bound for larger subsystems, global quantum discord /
//! measurement-induced disturbance, and the multipartite classical
//! correlation.
//!
//! All entropies are base 2 (the triplet pair has mutual information exactly
//! 2, which pins the convention). Discord minimizations run a coarse 64×64
//! grid over the two measurement angles followed by Nelder-Mead refinement
//! from the five best grid points; the optimizers are deterministic.

use nalgebra::{Complex, DMatrix};

use crate::bipartite::{
    embed_bipartite, partial_trace, qubit_partial_trace, reduce_dicke, reduce_symmetric_factor,
    Subsystem,
};
use crate::spin::{build_spin_operators, DickeDensityMatrix};
use crate::{binomial, hermitian_eigenvalues, CMatrix, DickeError};

/// Eigenvalues below this floor are treated as exact zeros in entropies.
const EIG_FLOOR: f64 = 1e-15;

/// Angle-grid resolution of the coarse discord search.
const ANGLE_GRID: usize = 64;

/// `−Σ λ log₂ λ` over the spectrum, with `0 log 0 = 0` and negative
/// round-off eigenvalues clipped at zero.
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    entropy_from_probs(hermitian_eigenvalues(rho).into_iter())
}

fn entropy_from_probs(probs: impl Iterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    for p in probs {
        if p > EIG_FLOOR {
            s -= p * p.log2();
        }
    }
    s
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` for the `n_a | N − n_a` split.
pub fn mutual_information(rho: &DickeDensityMatrix, n_a: usize) -> Result<f64, DickeError> {
    let emb = embed_bipartite(rho, n_a)?;
    let rho_a = partial_trace(&emb, Subsystem::A)?;
    let rho_b = partial_trace(&emb, Subsystem::B)?;
    Ok(
        von_neumann_entropy(rho_a.matrix()) + von_neumann_entropy(rho_b.matrix())
            - von_neumann_entropy(rho.matrix()),
    )
}

/// A complete set of orthogonal projectors with the angles that produced it.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    pub operators: Vec<CMatrix>,
    pub parameters: Vec<(f64, f64)>,
}

impl MeasurementSet {
    /// Completeness and idempotence residual (max of `‖ΣΠ − I‖` and
    /// `‖Π² − Π‖` over the set).
    pub fn residual(&self) -> f64 {
        let d = self.operators[0].nrows();
        let mut sum = CMatrix::zeros(d, d);
        let mut worst: f64 = 0.0;
        for op in &self.operators {
            sum += op;
            worst = worst.max((op * op - op).camax());
        }
        worst.max((sum - CMatrix::identity(d, d)).camax())
    }
}

/// Measurement direction on the Bloch sphere, with index 0 the ground state
/// and index 1 the excited state:
/// `|+⟩ = cos(θ/2)|e⟩ + e^{iφ} sin(θ/2)|g⟩`,
/// `|−⟩ = −e^{−iφ} sin(θ/2)|e⟩ + cos(θ/2)|g⟩`.
fn qubit_measurement_vectors(theta: f64, phi: f64) -> ([Complex<f64>; 2], [Complex<f64>; 2]) {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let e_phi = Complex::new(phi.cos(), phi.sin());
    // component order: [ground, excited]
    let plus = [e_phi * s, Complex::new(c, 0.0)];
    let minus = [Complex::new(c, 0.0), -e_phi.conj() * s];
    (plus, minus)
}

/// The two rank-1 projectors `{|+⟩⟨+|, |−⟩⟨−|}` for the given angles.
pub fn qubit_measurement_ops(theta: f64, phi: f64) -> MeasurementSet {
    let (plus, minus) = qubit_measurement_vectors(theta, phi);
    let proj = |v: &[Complex<f64>; 2]| {
        let mut m = CMatrix::zeros(2, 2);
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    };
    MeasurementSet {
        operators: vec![proj(&plus), proj(&minus)],
        parameters: vec![(theta, phi)],
    }
}

/// Wigner rotation matrix `d^j(β) = exp(−iβ J_y)` on the ascending-m basis.
///
/// Computed through the eigendecomposition of `J_y`, which stays accurate
/// for any spin this crate handles. For `j = 1/2` the matrix is
/// `[[cos β/2, sin β/2], [−sin β/2, cos β/2]]` in ascending-m ordering.
pub fn wigner_d(j: f64, beta: f64) -> Result<DMatrix<f64>, DickeError> {
    let two_j = (2.0 * j).round();
    if !j.is_finite() || j < 0.0 || (2.0 * j - two_j).abs() > 1e-9 {
        return Err(DickeError::InvalidQuantumNumbers(format!(
            "j = {j} is not a non-negative half-integer"
        )));
    }
    let two_j = two_j as usize;
    if two_j == 0 {
        return Ok(DMatrix::identity(1, 1));
    }
    let ops = build_spin_operators(two_j)?;
    let eig = ops.j_y.clone().symmetric_eigen();
    let d = two_j + 1;
    let mut out = DMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..d {
                let phase = Complex::new(0.0, -beta * eig.eigenvalues[k]).exp();
                acc += eig.eigenvectors[(r, k)] * phase * eig.eigenvectors[(c, k)].conj();
            }
            debug_assert!(acc.im.abs() < 1e-12);
            out[(r, c)] = acc.re;
        }
    }
    Ok(out)
}

/// Rotation `R = e^{−iφ J_z} e^{−iθ J_y}` whose columns are the rotated
/// Dicke states; `π_m = R |j,m⟩⟨j,m| R†`.
fn euler_rotation(two_j: usize, theta: f64, phi: f64) -> Result<CMatrix, DickeError> {
    let d_mat = wigner_d(two_j as f64 / 2.0, theta)?;
    let d = two_j + 1;
    let j = two_j as f64 / 2.0;
    let mut r = CMatrix::zeros(d, d);
    for row in 0..d {
        let m_row = row as f64 - j;
        let phase = Complex::new(0.0, -phi * m_row).exp();
        for col in 0..d {
            r[(row, col)] = phase * Complex::new(d_mat[(row, col)], 0.0);
        }
    }
    Ok(r)
}

/// The `2j + 1` projective measurement operators generated by Euler rotation
/// of the Dicke basis. At `θ = 0` they reduce to the bare projectors
/// `|j,m⟩⟨j,m|`.
pub fn euler_measurement_ops(j: f64, theta: f64, phi: f64) -> Result<MeasurementSet, DickeError> {
    let two_j = (2.0 * j).round() as i64;
    if two_j < 1 {
        return Err(DickeError::InvalidQuantumNumbers(format!(
            "measurement spin j = {j} must be at least 1/2"
        )));
    }
    let two_j = two_j as usize;
    let r = euler_rotation(two_j, theta, phi)?;
    let d = two_j + 1;
    let operators = (0..d)
        .map(|m| {
            let col = r.column(m);
            let mut op = CMatrix::zeros(d, d);
            for a in 0..d {
                for b in 0..d {
                    op[(a, b)] = col[a] * col[b].conj();
                }
            }
            op
        })
        .collect();
    Ok(MeasurementSet {
        operators,
        parameters: vec![(theta, phi)],
    })
}

/// Total, classical and quantum parts of the correlation across a split,
/// with the optimizing measurement angles.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTriple {
    pub total: f64,
    pub classical: f64,
    pub discord: f64,
    pub optimal_angles: Vec<(f64, f64)>,
}

/// Closed-form entropy contribution `p · S(ρ̃/p)` of an unnormalized 2×2
/// conditional block with trace `p`.
fn conditional_entropy_2x2(m00: f64, m11: f64, m01: Complex<f64>) -> f64 {
    let p = m00 + m11;
    if p <= EIG_FLOOR {
        return 0.0;
    }
    let half = 0.5 * (m00 - m11);
    let disc = (half * half + m01.norm_sqr()).sqrt();
    let lam1 = (0.5 * p + disc).max(0.0);
    let lam2 = (0.5 * p - disc).max(0.0);
    let mut s = 0.0;
    for lam in [lam1, lam2] {
        let q = lam / p;
        if q > EIG_FLOOR {
            s -= q * q.log2();
        }
    }
    p * s
}

/// 2-qubit quantum discord with measurement on qubit A (bit 0).
///
/// Von Neumann measurements on one qubit suffice for the minimization here;
/// the conditional entropy is scanned on the coarse angle grid and refined.
pub fn discord_2qubit(rho4: &CMatrix) -> Result<CorrelationTriple, DickeError> {
    if rho4.nrows() != 4 || rho4.ncols() != 4 {
        return Err(DickeError::DimensionMismatch {
            expected: 4,
            got: rho4.nrows(),
        });
    }
    if (rho4 - rho4.adjoint()).camax() > 1e-10 {
        return Err(DickeError::InvalidDensityMatrix(
            "discord input not Hermitian".into(),
        ));
    }
    let rho_a = qubit_partial_trace(rho4, 2, 0b01);
    let rho_b = qubit_partial_trace(rho4, 2, 0b10);
    let s_a = von_neumann_entropy(&rho_a);
    let s_b = von_neumann_entropy(&rho_b);
    let s_ab = von_neumann_entropy(rho4);
    let total = s_a + s_b - s_ab;

    let cond = |theta: f64, phi: f64| -> f64 {
        let (plus, minus) = qubit_measurement_vectors(theta, phi);
        let mut acc = 0.0;
        for v in [&plus, &minus] {
            // ρ̃_{B|k}[b,b'] = Σ_{a1,a2} v[a2] v*[a1] ρ[(a1 + 2b), (a2 + 2b')]
            let mut m = [[Complex::new(0.0, 0.0); 2]; 2];
            for b in 0..2 {
                for b2 in 0..2 {
                    let mut e = Complex::new(0.0, 0.0);
                    for a1 in 0..2 {
                        for a2 in 0..2 {
                            e += v[a2] * v[a1].conj() * rho4[(a1 + 2 * b, a2 + 2 * b2)];
                        }
                    }
                    m[b][b2] = e;
                }
            }
            acc += conditional_entropy_2x2(m[0][0].re, m[1][1].re, m[0][1]);
        }
        acc
    };

    let (theta, phi, min_cond) = minimize_angle_pair(&cond);
    let classical = s_b - min_cond;
    Ok(CorrelationTriple {
        total,
        classical,
        discord: total - classical,
        optimal_angles: vec![(theta, phi)],
    })
}

/// Upper bound on the bipartite discord across `n_a | N − n_a`, minimizing
/// the conditional entropy over the Euler-rotation measurement family on A.
///
/// The bound is tight for `n_a = 1` (the spin-1/2 Euler family exhausts the
/// qubit von Neumann measurements); the returned classical part is then a
/// lower bound.
pub fn discord_bipartite_upper(
    rho: &DickeDensityMatrix,
    n_a: usize,
) -> Result<CorrelationTriple, DickeError> {
    let n = rho.n_particles();
    if n_a == 0 || n_a >= n {
        return Err(DickeError::InvalidSplit { n, n_a });
    }
    let emb = embed_bipartite(rho, n_a)?;
    let rho_a = partial_trace(&emb, Subsystem::A)?;
    let rho_b = partial_trace(&emb, Subsystem::B)?;
    let s_a = von_neumann_entropy(rho_a.matrix());
    let s_b = von_neumann_entropy(rho_b.matrix());
    let s_ab = von_neumann_entropy(rho.matrix());
    let total = s_a + s_b - s_ab;

    let da = n_a + 1;
    let db = n - n_a + 1;
    let big = emb.matrix();
    let cond = |theta: f64, phi: f64| -> f64 {
        let r = euler_rotation(n_a, theta, phi).expect("valid spin");
        let mut acc = 0.0;
        for m in 0..da {
            let v = r.column(m);
            // unnormalized conditional block on B
            let mut blk = CMatrix::zeros(db, db);
            for a1 in 0..da {
                for a2 in 0..da {
                    let w = v[a2] * v[a1].conj();
                    if w.norm_sqr() < 1e-30 {
                        continue;
                    }
                    for b in 0..db {
                        for b2 in 0..db {
                            blk[(b, b2)] += w * big[(a1 * db + b, a2 * db + b2)];
                        }
                    }
                }
            }
            let p: Complex<f64> = blk.diagonal().sum();
            let p = p.re;
            if p > EIG_FLOOR {
                blk /= Complex::new(p, 0.0);
                acc += p * von_neumann_entropy(&blk);
            }
        }
        acc
    };

    let (theta, phi, min_cond) = minimize_angle_pair(&cond);
    let classical = s_b - min_cond;
    Ok(CorrelationTriple {
        total,
        classical,
        discord: total - classical,
        optimal_angles: vec![(theta, phi)],
    })
}

/// Measurement-angle handling for the global discord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GqdMode {
    /// Minimize over all `2n` angles (multistart, deterministic).
    Optimize,
    /// Evaluate at one `(θ, φ)` applied to every atom (the MID variant).
    Fixed { theta: f64, phi: f64 },
}

/// Cap for the optimized global discord.
pub const GQD_OPTIMIZE_CAP: usize = 6;
/// Cap for the fixed-angle (MID) evaluation.
pub const GQD_FIXED_CAP: usize = 8;

/// Global quantum discord of an `n`-qubit state under product projective
/// measurements,
/// `D^g = [S(Φ(ρ)) − S(ρ)] − Σ_j [S(Φ_j(ρ_j)) − S(ρ_j)]`,
/// where `Φ` dephases in the measured product basis.
pub fn global_discord(rho: &CMatrix, mode: GqdMode) -> Result<f64, DickeError> {
    let dim = rho.nrows();
    if !dim.is_power_of_two() || rho.ncols() != dim {
        return Err(DickeError::DimensionMismatch {
            expected: dim,
            got: rho.ncols(),
        });
    }
    let n = dim.trailing_zeros() as usize;
    let cap = match mode {
        GqdMode::Optimize => GQD_OPTIMIZE_CAP,
        GqdMode::Fixed { .. } => GQD_FIXED_CAP,
    };
    if n > cap {
        return Err(DickeError::CapExceeded {
            what: "global-discord register",
            got: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }

    let s_total = von_neumann_entropy(rho);
    let marginals: Vec<CMatrix> = (0..n)
        .map(|q| qubit_partial_trace(rho, n, 1 << q))
        .collect();
    let s_marginals: Vec<f64> = marginals.iter().map(von_neumann_entropy).collect();

    let eval = |angles: &[f64]| -> f64 {
        // per-qubit measurement bases as 2x2 column matrices
        let bases: Vec<[[Complex<f64>; 2]; 2]> = (0..n)
            .map(|q| {
                let (p, m) = qubit_measurement_vectors(angles[2 * q], angles[2 * q + 1]);
                [p, m]
            })
            .collect();
        // dephased joint entropy: Shannon entropy of ⟨x|U†ρU|x⟩ over the
        // product basis U
        let mut probs = vec![0.0f64; dim];
        for (x, prob) in probs.iter_mut().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for r in 0..dim {
                // u[r] = Π_q bases[q][outcome bit of x][bit of r]
                let mut ur = Complex::new(1.0, 0.0);
                for (q, basis) in bases.iter().enumerate() {
                    ur *= basis[(x >> q) & 1][(r >> q) & 1];
                }
                for c in 0..dim {
                    let mut uc = Complex::new(1.0, 0.0);
                    for (q, basis) in bases.iter().enumerate() {
                        uc *= basis[(x >> q) & 1][(c >> q) & 1];
                    }
                    acc += ur.conj() * rho[(r, c)] * uc;
                }
            }
            *prob = acc.re;
        }
        let s_dephased = entropy_from_probs(probs.into_iter());
        let mut d = s_dephased - s_total;
        for q in 0..n {
            let mq = &marginals[q];
            let mut pq = [0.0f64; 2];
            for (k, pk) in pq.iter_mut().enumerate() {
                let v = bases[q][k];
                let mut acc = Complex::new(0.0, 0.0);
                for r in 0..2 {
                    for c in 0..2 {
                        acc += v[r].conj() * mq[(r, c)] * v[c];
                    }
                }
                *pk = acc.re;
            }
            let s_dephased_q = entropy_from_probs(pq.into_iter());
            d -= s_dephased_q - s_marginals[q];
        }
        d
    };

    match mode {
        GqdMode::Fixed { theta, phi } => {
            let angles: Vec<f64> = (0..n).flat_map(|_| [theta, phi]).collect();
            Ok(eval(&angles))
        }
        GqdMode::Optimize => {
            // 8 deterministic restarts: Z basis, X basis, and six
            // golden-ratio-spread interior points.
            let mut starts: Vec<Vec<f64>> = vec![
                (0..n).flat_map(|_| [std::f64::consts::PI, 0.0]).collect(),
                (0..n)
                    .flat_map(|_| [std::f64::consts::FRAC_PI_2, 0.0])
                    .collect(),
            ];
            for r in 0..6usize {
                let mut v = Vec::with_capacity(2 * n);
                for k in 0..n {
                    let t = ((r * n + k) as f64 * 0.618_033_988_749_894_9).fract();
                    let p = ((r * n + k) as f64 * 0.381_966_011_250_105_2 + 0.25).fract();
                    v.push(std::f64::consts::PI * (0.1 + 0.8 * t));
                    v.push(2.0 * std::f64::consts::PI * p);
                }
                starts.push(v);
            }
            let mut best = f64::INFINITY;
            for start in &starts {
                let (_, value) = nelder_mead(&eval, start, 0.3, 1e-8, 400);
                if value < best {
                    best = value;
                }
            }
            Ok(best.max(0.0))
        }
    }
}

/// Cap for the multipartite mutual information.
pub const MULTI_MI_CAP: usize = 9;

/// Inclusion-exclusion mutual information over all nonempty qubit subsets:
/// singles enter positively, pairs negatively, and so on.
pub fn multipartite_mutual_information(rho: &CMatrix) -> Result<f64, DickeError> {
    let dim = rho.nrows();
    if !dim.is_power_of_two() || rho.ncols() != dim {
        return Err(DickeError::DimensionMismatch {
            expected: dim,
            got: rho.ncols(),
        });
    }
    let n = dim.trailing_zeros() as usize;
    if n > MULTI_MI_CAP {
        return Err(DickeError::CapExceeded {
            what: "multipartite mutual information register",
            got: n,
            cap: MULTI_MI_CAP,
        });
    }
    let mut total = 0.0;
    for mask in 1usize..(1 << n) {
        let size = mask.count_ones() as usize;
        let sign = if size % 2 == 1 { 1.0 } else { -1.0 };
        let s = if mask == (1 << n) - 1 {
            von_neumann_entropy(rho)
        } else {
            von_neumann_entropy(&qubit_partial_trace(rho, n, mask))
        };
        total += sign * s;
    }
    Ok(total)
}

/// Angle handling for the multipartite classical correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JMultiMode {
    /// Maximize over the single-atom measurement (matching the two-atom
    /// definition of the classical correlation).
    Optimize,
    /// Evaluate at fixed angles, for reproducible sweeps.
    Fixed { theta: f64, phi: f64 },
}

/// Cap for the multipartite classical correlation.
pub const JMULTI_CAP: usize = 9;

/// Multipartite classical correlation: the inclusion-exclusion mutual
/// information of the post-measurement state `ρ_Π = Σ_k Π_k ρ Π_k`, the
/// measurement acting on one atom.
///
/// Atoms 2…N stay permutation symmetric after the measurement, so the
/// 2^N subset entropies collapse to `O(N)` distinct reductions indexed by
/// (contains the measured atom, count of the others), weighted binomially.
pub fn multipartite_classical_correlation(
    rho: &DickeDensityMatrix,
    mode: JMultiMode,
) -> Result<f64, DickeError> {
    let n = rho.n_particles();
    if n < 2 {
        return Err(DickeError::InvalidParticleCount { got: n, min: 2 });
    }
    if n > JMULTI_CAP {
        return Err(DickeError::CapExceeded {
            what: "multipartite classical correlation",
            got: n,
            cap: JMULTI_CAP,
        });
    }
    let emb = embed_bipartite(rho, 1)?;
    let nb = n - 1;
    let db = nb + 1;
    let big = emb.matrix();

    // Subset entropies that exclude the measured atom are unaffected by the
    // measurement: S0[j] for j = 1..=nb, computed once.
    let rho_b = partial_trace(&emb, Subsystem::B)?;
    let mut s0 = vec![0.0f64; nb + 1];
    for (j, slot) in s0.iter_mut().enumerate().skip(1) {
        let red = if j == nb {
            rho_b.clone()
        } else {
            reduce_dicke(&rho_b, j)?
        };
        *slot = von_neumann_entropy(red.matrix());
    }

    let eval = |theta: f64, phi: f64| -> f64 {
        let (plus, minus) = qubit_measurement_vectors(theta, phi);
        // ρ_Π on C² ⊗ C^{nb+1}
        let mut post = CMatrix::zeros(2 * db, 2 * db);
        for v in [&plus, &minus] {
            for a in 0..2 {
                for a2 in 0..2 {
                    // (Π ρ Π)[a, a2] = Σ_{a1, a3} v[a] v*[a1] ρ[a1, a3] v[a3] v*[a2]
                    let mut w = Complex::new(0.0, 0.0);
                    let _ = &mut w;
                    for a1 in 0..2 {
                        for a3 in 0..2 {
                            let coeff = v[a] * v[a1].conj() * v[a3] * v[a2].conj();
                            if coeff.norm_sqr() < 1e-30 {
                                continue;
                            }
                            for b in 0..db {
                                for b2 in 0..db {
                                    post[(a * db + b, a2 * db + b2)] +=
                                        coeff * big[(a1 * db + b, a3 * db + b2)];
                                }
                            }
                        }
                    }
                }
            }
        }
        // S1[j]: measured atom plus j of the others
        let mut total = 0.0;
        for j in 0..=nb {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 }; // subset size j+1
            let red = reduce_symmetric_factor(&post, 2, nb, j);
            let s1 = von_neumann_entropy(&red);
            total += sign * binomial(nb, j) * s1;
        }
        for (j, s0_j) in s0.iter().enumerate().skip(1) {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * binomial(nb, j) * s0_j;
        }
        total
    };

    match mode {
        JMultiMode::Fixed { theta, phi } => Ok(eval(theta, phi)),
        JMultiMode::Optimize => {
            let neg = |theta: f64, phi: f64| -eval(theta, phi);
            let (_, _, best) = minimize_angle_pair(&neg);
            Ok(-best)
        }
    }
}

/// Coarse 64×64 grid over `(θ, φ) ∈ [0,π] × [0,2π)` followed by Nelder-Mead
/// refinement from the five best grid points.
fn minimize_angle_pair(f: &dyn Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    let mut samples: Vec<(f64, f64, f64)> = Vec::with_capacity(ANGLE_GRID * ANGLE_GRID);
    for i in 0..ANGLE_GRID {
        let theta = std::f64::consts::PI * i as f64 / (ANGLE_GRID - 1) as f64;
        for k in 0..ANGLE_GRID {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / ANGLE_GRID as f64;
            samples.push((theta, phi, f(theta, phi)));
        }
    }
    samples.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap());
    let mut best = (samples[0].0, samples[0].1, samples[0].2);
    let wrapped = |x: &[f64]| f(x[0], x[1]);
    for &(theta, phi, _) in samples.iter().take(5) {
        let (point, value) = nelder_mead(&wrapped, &[theta, phi], 0.08, 1e-8, 200);
        if value < best.2 {
            best = (point[0], point[1], value);
        }
    }
    best
}

/// Deterministic Nelder-Mead; converges when the simplex diameter falls
/// below `tol`.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for k in 0..dim {
        let mut v = start.to_vec();
        v[k] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }
    let (alpha, gamma, beta, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(v, _)| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = (0..dim)
            .map(|k| centroid[k] + alpha * (centroid[k] - worst.0[k]))
            .collect();
        let f_reflect = f(&reflect);
        if f_reflect < simplex[0].1 {
            let expand: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + gamma * (centroid[k] - worst.0[k]))
                .collect();
            let f_expand = f(&expand);
            simplex[dim] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[dim - 1].1 {
            simplex[dim] = (reflect, f_reflect);
        } else {
            let contract: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + beta * (worst.0[k] - centroid[k]))
                .collect();
            let f_contract = f(&contract);
            if f_contract < worst.1 {
                simplex[dim] = (contract, f_contract);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best)
                        .map(|(v, b)| b + sigma * (v - b))
                        .collect();
                    entry.1 = f(&shrunk);
                    entry.0 = shrunk;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (simplex[0].0.clone(), simplex[0].1)
}
