//! Mehrotra predictor-corrector iteration with Nesterov-Todd scaling.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::problem::{SdpError, SdpProblem};

/// Outcome of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    /// Duality gap and feasibility residuals below tolerance.
    Optimal,
    /// Iteration limit or numerical stall; best iterate returned.
    MaxIter,
    /// A separating certificate was detected.
    Infeasible,
}

/// Per-iteration convergence record, kept for verification and determinism
/// checks.
#[derive(Debug, Clone, Copy)]
pub struct IterateStats {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
}

/// Primal/dual solution with verifiable certificates.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Primal PSD blocks `X_b`.
    pub blocks: Vec<DMatrix<f64>>,
    /// Dual multipliers `y`.
    pub dual: DVector<f64>,
    /// Dual slack blocks `S_b = C_b - sum_i y_i A_ib`.
    pub dual_blocks: Vec<DMatrix<f64>>,
    pub objective: f64,
    pub dual_objective: f64,
    /// `objective - dual_objective`.
    pub duality_gap: f64,
    /// `||b - A(X)||_2 / (1 + ||b||_2)`.
    pub primal_residual: f64,
    /// Frobenius norm of `C - A*(y) - S` over all blocks, relative.
    pub dual_residual: f64,
    /// `sum_b ||X_b S_b||_F` (absolute complementary-slackness residual).
    pub complementarity: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    pub history: Vec<IterateStats>,
}

impl SdpSolution {
    /// Whether the iterate meets the given certificate gates: relative
    /// duality gap and both feasibility residuals. Useful when the solver
    /// stalls just short of its internal target but the returned iterate is
    /// certificate-grade for the caller's purposes.
    pub fn meets(&self, gap_tol: f64, feas_tol: f64) -> bool {
        let rel_gap =
            self.duality_gap.abs() / (1.0 + self.objective.abs() + self.dual_objective.abs());
        rel_gap <= gap_tol && self.primal_residual <= feas_tol && self.dual_residual <= feas_tol
    }
}

struct Scaling {
    r: Vec<DMatrix<f64>>,
    r_inv: Vec<DMatrix<f64>>,
    lambda: Vec<DVector<f64>>,
    w: Vec<DMatrix<f64>>,
}

const FRACTION_TO_BOUNDARY: f64 = 0.98;
const MAX_ITER: usize = 100;

/// Solves the SDP to the requested tolerance (duality gap and feasibility
/// residuals, all relative).
pub fn solve(problem: &SdpProblem, tol: f64) -> Result<SdpSolution, SdpError> {
    let m = problem.num_constraints();
    if m == 0 {
        return Err(SdpError::Numerical(
            "problem must have at least one equality constraint".into(),
        ));
    }
    let dims = problem.dims().to_vec();
    let k_total: usize = dims.iter().sum();
    let b = DVector::from_column_slice(problem.rhs());
    let norm_b = b.norm();
    let norm_c = problem_objective_norm(problem);

    // Expanded (full-matrix) constraint entries grouped per block, plus the
    // reverse map block -> touching constraints, used for the Schur product.
    let expanded = expand_constraints(problem);
    let touching = block_constraint_index(&expanded, dims.len());

    // Identity-multiple start scaled against the trace-like constraints: pick
    // c minimizing ||A(cI) - b||; strictly feasible problems with a trace
    // normalization get an exactly feasible primal start.
    let mut t_dot_b = 0.0;
    let mut t_dot_t = 0.0;
    for i in 0..m {
        let ti: f64 = problem
            .constraint(i)
            .iter()
            .filter(|e| e.row == e.col)
            .map(|e| e.value)
            .sum();
        t_dot_b += ti * b[i];
        t_dot_t += ti * ti;
    }
    let c0 = if t_dot_t > 0.0 {
        t_dot_b / t_dot_t
    } else {
        1.0
    };
    let xi_p = if c0 > 1e-8 { c0 } else { 1.0 };
    let xi_d = norm_c.max(1.0);

    let mut x: Vec<DMatrix<f64>> = dims
        .iter()
        .map(|&d| DMatrix::identity(d, d) * xi_p)
        .collect();
    let mut s: Vec<DMatrix<f64>> = dims
        .iter()
        .map(|&d| DMatrix::identity(d, d) * xi_d)
        .collect();
    let mut y = DVector::zeros(m);

    let mut history = Vec::new();
    let mut best: Option<(f64, SdpSolution)> = None;

    for iter in 0..MAX_ITER {
        let pobj = primal_objective(problem, &x);
        let dobj = b.dot(&y);
        let r_p = residual_primal(problem, &x, &b);
        let r_d = residual_dual(problem, &s, &y);
        let prim_res = r_p.norm() / (1.0 + norm_b);
        let dual_res =
            r_d.iter().map(|blk| blk.norm_squared()).sum::<f64>().sqrt() / (1.0 + norm_c);
        let mu = x
            .iter()
            .zip(&s)
            .map(|(xb, sb)| (xb.transpose() * sb).trace())
            .sum::<f64>()
            / k_total as f64;
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        history.push(IterateStats {
            iteration: iter,
            primal_objective: pobj,
            dual_objective: dobj,
            primal_residual: prim_res,
            dual_residual: dual_res,
            mu,
        });

        let score = rel_gap.max(prim_res).max(dual_res);
        if best.as_ref().is_none_or(|(s0, _)| score < *s0) {
            best = Some((
                score,
                assemble(
                    &x,
                    &y,
                    &s,
                    pobj,
                    dobj,
                    prim_res,
                    dual_res,
                    iter,
                    SdpStatus::MaxIter,
                ),
            ));
        }

        if rel_gap <= tol && prim_res <= tol && dual_res <= tol {
            let mut sol = assemble(
                &x,
                &y,
                &s,
                pobj,
                dobj,
                prim_res,
                dual_res,
                iter,
                SdpStatus::Optimal,
            );
            sol.history = history;
            return Ok(sol);
        }

        if let Some(status) = detect_divergence(problem, &b, &y, &x, xi_p) {
            let (_, mut sol) = best.unwrap();
            sol.status = status;
            sol.history = history;
            return Ok(sol);
        }

        let Some(sc) = nt_scaling(&x, &s) else {
            break; // loss of positive definiteness; return best iterate
        };

        // Schur complement M = A W~ A* and its Cholesky, shared by the
        // predictor and corrector solves.
        let m_schur = schur_matrix(&expanded, &touching, &sc.w, m);
        let Some(chol) = cholesky_with_bump(m_schur.clone()) else {
            break;
        };

        // Predictor: target D = -lambda^2, i.e. T = -X.
        let t_pred: Vec<DMatrix<f64>> = x.iter().map(|xb| -xb.clone()).collect();
        let (_dy_a, ds_a, dx_a) = newton_step(
            problem, &expanded, &sc, &m_schur, &chol, &r_p, &r_d, &t_pred,
        );

        let alpha_p_hat = max_step(&x, &dx_a);
        let alpha_d_hat = max_step(&s, &ds_a);
        let mu_aff = {
            let mut acc = 0.0;
            for bi in 0..dims.len() {
                let xn = &x[bi] + &dx_a[bi] * alpha_p_hat;
                let sn = &s[bi] + &ds_a[bi] * alpha_d_hat;
                acc += (xn.transpose() * sn).trace();
            }
            (acc / k_total as f64).max(0.0)
        };
        let sigma = (mu_aff / mu).powi(3).clamp(1e-12, 0.999);

        // Corrector target in the scaled space:
        // D = sigma*mu*I - lambda^2 - sym(dX^ dS^).
        let mut t_corr = Vec::with_capacity(dims.len());
        for bi in 0..dims.len() {
            let dxh = &sc.r_inv[bi] * &dx_a[bi] * sc.r_inv[bi].transpose();
            let dsh = sc.r[bi].transpose() * &ds_a[bi] * &sc.r[bi];
            let cross = (&dxh * &dsh + &dsh * &dxh) * 0.5;
            let lam = &sc.lambda[bi];
            let d = dims[bi];
            let mut dt = DMatrix::zeros(d, d);
            for r in 0..d {
                for c in 0..d {
                    let mut v = -cross[(r, c)];
                    if r == c {
                        v += sigma * mu - lam[r] * lam[r];
                    }
                    dt[(r, c)] = 2.0 * v / (lam[r] + lam[c]);
                }
            }
            t_corr.push(&sc.r[bi] * dt * sc.r[bi].transpose());
        }
        let (dy, ds, dx) = newton_step(
            problem, &expanded, &sc, &m_schur, &chol, &r_p, &r_d, &t_corr,
        );

        let alpha_p = max_step(&x, &dx);
        let alpha_d = max_step(&s, &ds);
        if alpha_p < 1e-10 && alpha_d < 1e-10 {
            break; // stalled
        }

        for bi in 0..dims.len() {
            x[bi] += &dx[bi] * alpha_p;
            s[bi] += &ds[bi] * alpha_d;
            // keep exact symmetry
            x[bi] = (&x[bi] + x[bi].transpose()) * 0.5;
            s[bi] = (&s[bi] + s[bi].transpose()) * 0.5;
        }
        y += dy * alpha_d;
    }

    let (_, mut sol) = best.ok_or_else(|| SdpError::Numerical("no iterate produced".into()))?;
    sol.history = history;
    Ok(sol)
}

fn problem_objective_norm(p: &SdpProblem) -> f64 {
    (0..p.num_blocks())
        .map(|b| p.objective_block(b).norm_squared())
        .sum::<f64>()
        .sqrt()
}

fn primal_objective(p: &SdpProblem, x: &[DMatrix<f64>]) -> f64 {
    (0..p.num_blocks())
        .map(|b| (p.objective_block(b).transpose() * &x[b]).trace())
        .sum()
}

fn residual_primal(p: &SdpProblem, x: &[DMatrix<f64>], b: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(p.num_constraints(), |i, _| b[i] - p.apply_constraint(i, x))
}

fn residual_dual(p: &SdpProblem, s: &[DMatrix<f64>], y: &DVector<f64>) -> Vec<DMatrix<f64>> {
    let at = p.adjoint(y.as_slice());
    (0..p.num_blocks())
        .map(|b| p.objective_block(b) - &at[b] - &s[b])
        .collect()
}

/// Full-matrix (both triangles) constraint entries, grouped per block:
/// `expanded[i]` is a list of `(block, entries)` with `entries = (row, col, value)`.
type BlockEntries = Vec<(usize, usize, f64)>;
type Expanded = Vec<Vec<(usize, BlockEntries)>>;

fn expand_constraints(p: &SdpProblem) -> Expanded {
    (0..p.num_constraints())
        .map(|i| {
            let mut per_block: Vec<(usize, BlockEntries)> = Vec::new();
            for e in p.constraint(i) {
                let slot = match per_block.iter_mut().find(|(b, _)| *b == e.block) {
                    Some((_, v)) => v,
                    None => {
                        per_block.push((e.block, Vec::new()));
                        &mut per_block.last_mut().unwrap().1
                    }
                };
                slot.push((e.row, e.col, e.value));
                if e.row != e.col {
                    slot.push((e.col, e.row, e.value));
                }
            }
            per_block
        })
        .collect()
}

fn block_constraint_index(expanded: &Expanded, num_blocks: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![Vec::new(); num_blocks];
    for (i, per_block) in expanded.iter().enumerate() {
        for (b, _) in per_block {
            idx[*b].push(i);
        }
    }
    idx
}

/// `M[i][j] = sum_b Tr(A_ib W_b A_jb W_b)`, accumulated per block over the
/// constraints touching it. Constraint matrices are very sparse here, so each
/// pair costs O(nnz_i * nnz_j).
fn schur_matrix(
    expanded: &Expanded,
    touching: &[Vec<usize>],
    w: &[DMatrix<f64>],
    m: usize,
) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    for (b, cons) in touching.iter().enumerate() {
        let wb = &w[b];
        for (pos, &i) in cons.iter().enumerate() {
            let ei = entries_for(expanded, i, b);
            for &j in &cons[pos..] {
                let ej = entries_for(expanded, j, b);
                let mut acc = 0.0;
                for &(p, q, u) in ei {
                    for &(r, s, v) in ej {
                        acc += u * v * wb[(q, r)] * wb[(s, p)];
                    }
                }
                out[(i, j)] += acc;
                if i != j {
                    out[(j, i)] += acc;
                }
            }
        }
    }
    out
}

fn entries_for(expanded: &Expanded, i: usize, block: usize) -> &[(usize, usize, f64)] {
    expanded[i]
        .iter()
        .find(|(b, _)| *b == block)
        .map(|(_, v)| v.as_slice())
        .unwrap()
}

fn cholesky_with_bump(mut m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c);
    }
    let bump = 1e-13 * (1.0 + m.diagonal().amax());
    for i in 0..m.nrows() {
        m[(i, i)] += bump;
    }
    Cholesky::new(m)
}

fn nt_scaling(x: &[DMatrix<f64>], s: &[DMatrix<f64>]) -> Option<Scaling> {
    let mut r = Vec::with_capacity(x.len());
    let mut r_inv = Vec::with_capacity(x.len());
    let mut lambda = Vec::with_capacity(x.len());
    let mut w = Vec::with_capacity(x.len());
    for (xb, sb) in x.iter().zip(s) {
        let lx = Cholesky::new(xb.clone())?;
        let ls = Cholesky::new(sb.clone())?;
        let lx = lx.l();
        let ls = ls.l();
        let svd = (ls.transpose() * &lx).svd(true, true);
        let u = svd.u.as_ref()?;
        let vt = svd.v_t.as_ref()?;
        let sig = &svd.singular_values;
        if sig.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let d = xb.nrows();
        let mut v_shalf = vt.transpose();
        let mut ut_shalf = u.transpose();
        for c in 0..d {
            let f = 1.0 / sig[c].sqrt();
            for rr in 0..d {
                v_shalf[(rr, c)] *= f;
                ut_shalf[(c, rr)] *= f;
            }
        }
        let rb = &lx * v_shalf;
        let rb_inv = ut_shalf * ls.transpose();
        let wb = &rb * rb.transpose();
        r.push(rb);
        r_inv.push(rb_inv);
        lambda.push(sig.clone());
        w.push(wb);
    }
    Some(Scaling {
        r,
        r_inv,
        lambda,
        w,
    })
}

/// Solves one Newton system for a given scaled-space target `T` (such that
/// the linearized complementarity reads `dX + W dS W = T`):
///
/// ```text
/// M dy = r_p - A(T) + A(W R_d W)
/// dS   = R_d - A*(dy)
/// dX   = T - W dS W
/// ```
#[allow(clippy::too_many_arguments)]
fn newton_step(
    p: &SdpProblem,
    expanded: &Expanded,
    sc: &Scaling,
    m_schur: &DMatrix<f64>,
    chol: &Cholesky<f64, Dyn>,
    r_p: &DVector<f64>,
    r_d: &[DMatrix<f64>],
    t: &[DMatrix<f64>],
) -> (DVector<f64>, Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
    let nb = p.num_blocks();
    let wrdw: Vec<DMatrix<f64>> = (0..nb).map(|b| &sc.w[b] * &r_d[b] * &sc.w[b]).collect();
    let m = p.num_constraints();
    let mut rhs = DVector::zeros(m);
    for i in 0..m {
        let mut a_t = 0.0;
        let mut a_wrdw = 0.0;
        for (b, entries) in &expanded[i] {
            for &(r, c, v) in entries {
                a_t += v * t[*b][(r, c)];
                a_wrdw += v * wrdw[*b][(r, c)];
            }
        }
        rhs[i] = r_p[i] - a_t + a_wrdw;
    }
    let mut dy = chol.solve(&rhs);
    // two rounds of iterative refinement keep the Newton system accurate
    // when the Schur complement turns ill-conditioned near the optimum
    for _ in 0..2 {
        let resid = &rhs - m_schur * &dy;
        dy += chol.solve(&resid);
    }
    let at_dy = p.adjoint(dy.as_slice());
    let ds: Vec<DMatrix<f64>> = (0..nb).map(|b| &r_d[b] - &at_dy[b]).collect();
    let dx: Vec<DMatrix<f64>> = (0..nb)
        .map(|b| &t[b] - &sc.w[b] * &ds[b] * &sc.w[b])
        .collect();
    (dy, ds, dx)
}

/// Largest step in (0, 1] keeping `X + alpha D` positive definite, with the
/// 0.98 fraction-to-boundary factor applied.
fn max_step(x: &[DMatrix<f64>], d: &[DMatrix<f64>]) -> f64 {
    let mut alpha: f64 = 1.0;
    for (xb, db) in x.iter().zip(d) {
        let Some(ch) = Cholesky::new(xb.clone()) else {
            return 0.0;
        };
        let l = ch.l();
        // H = L^{-1} D L^{-T}
        let a = l.solve_lower_triangular(db).unwrap();
        let h = l.solve_lower_triangular(&a.transpose()).unwrap();
        let h_sym = (&h + h.transpose()) * 0.5;
        let lam_min = h_sym
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if lam_min < 0.0 {
            alpha = alpha.min(FRACTION_TO_BOUNDARY / (-lam_min));
        }
    }
    alpha.min(1.0)
}

/// Primal infeasibility certificate: a dual ray with `A*(y) <= 0` and
/// `b'y > 0` proves that no feasible X exists. Divergence of the iterates is
/// treated the same way.
fn detect_divergence(
    p: &SdpProblem,
    b: &DVector<f64>,
    y: &DVector<f64>,
    x: &[DMatrix<f64>],
    xi_p: f64,
) -> Option<SdpStatus> {
    let ny = y.norm();
    if ny > 1e-8 {
        let yn: Vec<f64> = y.iter().map(|v| v / ny).collect();
        if b.dot(y) / ny > 1e-6 {
            let at = p.adjoint(&yn);
            let lam_max = at
                .iter()
                .flat_map(|blk| {
                    let sym = (blk + blk.transpose()) * 0.5;
                    sym.symmetric_eigen()
                        .eigenvalues
                        .iter()
                        .cloned()
                        .collect::<Vec<_>>()
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if lam_max <= 1e-10 {
                return Some(SdpStatus::Infeasible);
            }
        }
    }
    let x_scale = x.iter().map(|b| b.trace()).sum::<f64>();
    if x_scale > 1e12 * (1.0 + xi_p) {
        return Some(SdpStatus::Infeasible);
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    x: &[DMatrix<f64>],
    y: &DVector<f64>,
    s: &[DMatrix<f64>],
    pobj: f64,
    dobj: f64,
    prim_res: f64,
    dual_res: f64,
    iterations: usize,
    status: SdpStatus,
) -> SdpSolution {
    let complementarity = x
        .iter()
        .zip(s)
        .map(|(xb, sb)| (xb * sb).norm())
        .sum::<f64>();
    SdpSolution {
        blocks: x.to_vec(),
        dual: y.clone(),
        dual_blocks: s.to_vec(),
        objective: pobj,
        dual_objective: dobj,
        duality_gap: pobj - dobj,
        primal_residual: prim_res,
        dual_residual: dual_res,
        complementarity,
        iterations,
        status,
        history: Vec::new(),
    }
}
