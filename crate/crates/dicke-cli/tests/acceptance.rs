//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS/FAIL line with the measured numbers (run with `--nocapture` to see
//! the lines for passing tests too).
//!
//! Two checks are expected to stay red; the exact steady state provably
//! cannot meet their literal tolerances (details at the asserts):
//!   - criterion 3, small-drive clause: the trace distance to the ground
//!     state at drive Ω is √N·Ω + O(Ω²), which exceeds 1e-4 at Ω = 1e-4 for
//!     every N ≥ 2;
//!   - criterion 5, weak-drive edge clause: the half-split negativity at
//!     Ω = 0.01 is of order 1e-5 (the pure-phase tail decays polynomially,
//!     not below 1e-8).

use std::time::Instant;

use nalgebra::Complex;
use rayon::prelude::*;

use dicke::bipartite::{expand_to_qubits, reduce_dicke};
use dicke::correlations::{
    discord_2qubit, discord_bipartite_upper, multipartite_classical_correlation, JMultiMode,
};
use dicke::entanglement::{concurrence_pairwise, gmn, is_ppt, negativity, verify_witness};
use dicke::separability::{
    gram_oracle, hankel_matrices, is_separable_diagonal_symmetric, DiagonalSymmetricCoeffs,
};
use dicke::spin::{
    lindblad_residual, observables, steady_state, steady_state_nullspace, DickeDensityMatrix,
    ModelParams,
};
use dicke::{trace_distance, CMatrix};
use dicke_cli::verify::{run_verify, VerifyLevel};
use sdp_solver::SdpStatus;

fn log_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let (lo, hi) = (min.ln(), max.ln());
    (0..steps)
        .map(|i| (lo + (hi - lo) * i as f64 / (steps - 1) as f64).exp())
        .collect()
}

/// The default sweep grid: 60 log points on [0.05, 20].
fn default_grid() -> Vec<f64> {
    log_grid(0.05, 20.0, 60)
}

/// Default grid densified at 0.01 on [0.3, 0.8], as the sweep engine does
/// for entanglement measures.
fn entanglement_grid() -> Vec<f64> {
    let mut grid = default_grid();
    let mut w = 0.3;
    while w <= 0.8 + 1e-12 {
        grid.push(w);
        w += 0.01;
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}

fn state(n: usize, omega: f64) -> DickeDensityMatrix {
    steady_state(&ModelParams::new(n, omega).expect("params")).expect("steady state")
}

fn report(criterion: &str, passed: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
}

/// Criterion 1: closed-form steady state vs Liouvillian null space,
/// trace distance < 1e-8 on N ∈ {1,2,4,8,10} × Ω ∈ {0.1,0.5,1,5}, under a
/// minute.
#[test]
fn criterion_01_steady_state_oracle_equivalence() {
    let start = Instant::now();
    let cases: Vec<(usize, f64)> = [1usize, 2, 4, 8, 10]
        .into_iter()
        .flat_map(|n| [0.1, 0.5, 1.0, 5.0].map(|w| (n, w)))
        .collect();
    let worst = cases
        .par_iter()
        .map(|&(n, w)| {
            let params = ModelParams::new(n, w).unwrap();
            let direct = steady_state(&params).unwrap();
            let kernel = steady_state_nullspace(&params).unwrap();
            trace_distance(direct.matrix(), kernel.matrix())
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = start.elapsed();
    let passed = worst < 1e-8 && elapsed.as_secs() < 60;
    report(
        "1",
        passed,
        &format!("max trace distance {worst:.3e} (< 1e-8), elapsed {elapsed:.2?} (< 60 s)"),
    );
    assert!(worst < 1e-8, "oracle equivalence: {worst:.3e}");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
}

/// Criterion 2: stationarity residual < 1e-9 for every N ≤ 32 on the
/// default grid, within five minutes.
#[test]
fn criterion_02_lindblad_residual() {
    let start = Instant::now();
    let grid = default_grid();
    let worst = (1..=32usize)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            grid.iter()
                .map(|&w| {
                    let params = ModelParams::new(n, w).unwrap();
                    let rho = steady_state(&params).unwrap();
                    lindblad_residual(&rho, &params).unwrap()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = start.elapsed();
    let passed = worst < 1e-9 && elapsed.as_secs() < 300;
    report(
        "2",
        passed,
        &format!("max residual {worst:.3e} (< 1e-9), elapsed {elapsed:.2?} (< 5 min)"),
    );
    assert!(worst < 1e-9, "residual {worst:.3e}");
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
}

/// Criterion 3: limiting states for N ≤ 16: trace distance to the ground
/// state < 1e-4 at Ω = 1e-4, to the uniform mixture < 1e-2 at Ω = 100, and
/// purity 1/(N+1) ± 1e-3 at Ω = 100.
#[test]
fn criterion_03_limiting_states() {
    let mut worst_ground: (f64, usize) = (0.0, 0);
    let mut worst_uniform: f64 = 0.0;
    let mut worst_purity: f64 = 0.0;
    for n in 1..=16usize {
        let weak = state(n, 1e-4);
        let td_g = trace_distance(
            weak.matrix(),
            DickeDensityMatrix::ground_state(n).unwrap().matrix(),
        );
        if td_g > worst_ground.0 {
            worst_ground = (td_g, n);
        }
        let strong = state(n, 100.0);
        let td_u = trace_distance(
            strong.matrix(),
            DickeDensityMatrix::uniform_mixture(n).unwrap().matrix(),
        );
        worst_uniform = worst_uniform.max(td_u);
        worst_purity = worst_purity.max((observables(&strong).purity - 1.0 / (n + 1) as f64).abs());
    }
    let passed = worst_ground.0 < 1e-4 && worst_uniform < 1e-2 && worst_purity < 1e-3;
    report(
        "3",
        passed,
        &format!(
            "TD(ground) {:.3e} at N={} (< 1e-4), TD(uniform) {worst_uniform:.3e} (< 1e-2), \
             purity dev {worst_purity:.3e} (< 1e-3)",
            worst_ground.0, worst_ground.1
        ),
    );
    assert!(worst_uniform < 1e-2, "uniform limit: {worst_uniform:.3e}");
    assert!(worst_purity < 1e-3, "purity limit: {worst_purity:.3e}");
    // Known red: the exact steady state approaches the ground state only
    // linearly in the drive, with the leading coherence √N·Ω; at Ω = 1e-4
    // the trace distance is √N·1e-4 ∈ [1.4e-4, 4e-4] for N ∈ [2, 16], so a
    // 1e-4 gate cannot be met by any construction with the transition at
    // Ω = 1/2. Kept as specified rather than loosened.
    assert!(
        worst_ground.0 < 1e-4,
        "ground limit: {:.3e} at N={} (analytic value √N·1e-4)",
        worst_ground.0,
        worst_ground.1
    );
}

/// Criterion 4: for N = 64 the purity drop is steepest inside Ω ∈ [0.4,0.6]
/// and ⟨Jz⟩ follows the mean-field branch.
#[test]
fn criterion_04_transition_location() {
    let n = 64usize;
    let grid: Vec<f64> = (0..=80).map(|i| 0.2 + 0.01 * i as f64).collect();
    let purities: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&w| (w, observables(&state(n, w)).purity))
        .collect();
    let mut steepest = (0.0f64, f64::INFINITY);
    for pair in purities.windows(2) {
        let slope = (pair[1].1 - pair[0].1) / (pair[1].0 - pair[0].0);
        if slope < steepest.1 {
            steepest = ((pair[0].0 + pair[1].0) / 2.0, slope);
        }
    }
    let jz_dev = |w: f64, target: f64| {
        let obs = observables(&state(n, w));
        ((2.0 * obs.jz / n as f64).abs() - target).abs()
    };
    let dev01 = jz_dev(0.1, (1.0f64 - 0.04).sqrt());
    let dev03 = jz_dev(0.3, (1.0f64 - 0.36).sqrt());
    let at1 = (2.0 * observables(&state(n, 1.0)).jz / n as f64).abs();
    let passed = (0.4..=0.6).contains(&steepest.0) && dev01 < 0.1 && dev03 < 0.1 && at1 < 0.05;
    report(
        "4",
        passed,
        &format!(
            "steepest purity drop at Ω={:.3} (in [0.4,0.6]), |2⟨Jz⟩/N| dev {dev01:.3}/{dev03:.3} \
             (< 0.1), |2⟨Jz⟩/N|(Ω=1) = {at1:.3} (< 0.05)",
            steepest.0
        ),
    );
    assert!((0.4..=0.6).contains(&steepest.0), "drop at {}", steepest.0);
    assert!(dev01 < 0.1 && dev03 < 0.1, "⟨Jz⟩ scaling: {dev01} {dev03}");
    assert!(at1 < 0.05, "⟨Jz⟩ at Ω=1: {at1}");
}

/// Criterion 5: half-split negativity peaks grow with N, the peak sits in
/// Ω ∈ [0.3, 0.8], and the curve vanishes at the grid edges. Ten-minute
/// budget at N ≤ 32.
#[test]
fn criterion_05_negativity_scaling() {
    let start = Instant::now();
    let grid = entanglement_grid();
    let mut peaks = Vec::new();
    let mut argmaxes = Vec::new();
    let mut edge_weak: f64 = 0.0;
    let mut edge_strong: f64 = 0.0;
    for n in [8usize, 16, 32] {
        let vals: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&w| (w, negativity(&state(n, w), n / 2).unwrap().value))
            .collect();
        let (wmax, vmax) =
            vals.iter()
                .cloned()
                .fold((0.0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        peaks.push(vmax);
        argmaxes.push(wmax);
        edge_weak = edge_weak.max(negativity(&state(n, 0.01), n / 2).unwrap().value);
        edge_strong = edge_strong.max(negativity(&state(n, 100.0), n / 2).unwrap().value);
    }
    let elapsed = start.elapsed();
    let increasing = peaks[0] < peaks[1] && peaks[1] < peaks[2];
    let located = argmaxes.iter().all(|w| (0.3..=0.8).contains(w));
    let passed =
        increasing && located && edge_weak < 1e-8 && edge_strong < 1e-8 && elapsed.as_secs() < 600;
    report(
        "5",
        passed,
        &format!(
            "peaks {:.4}/{:.4}/{:.4} (increasing), argmax {:?} (in [0.3,0.8]), edges \
             {edge_weak:.2e}/{edge_strong:.2e} (< 1e-8), elapsed {elapsed:.2?}",
            peaks[0], peaks[1], peaks[2], argmaxes
        ),
    );
    assert!(increasing, "peaks {peaks:?}");
    assert!(located, "argmax {argmaxes:?}");
    assert!(edge_strong < 1e-8, "strong-drive edge {edge_strong:.3e}");
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    // Known red: at Ω = 0.01 the steady state is still weakly entangled
    // (the pure-phase tail of the negativity decays polynomially in Ω and
    // measures ≈ 5e-5 for these sizes); a 1e-8 gate at Ω = 0.01 contradicts
    // the exact solution. Kept as specified rather than loosened.
    assert!(
        edge_weak < 1e-8,
        "weak-drive edge {edge_weak:.3e} (true value ~5e-5)"
    );
}

/// Criterion 6: pairwise concurrence peaks near the transition with height
/// strictly decreasing in N, and vanishes deep in the impure phase.
#[test]
fn criterion_06_concurrence() {
    let grid = entanglement_grid();
    let mut peaks = Vec::new();
    let mut argmaxes = Vec::new();
    for n in [2usize, 8, 16] {
        let vals: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&w| (w, concurrence_pairwise(&state(n, w)).unwrap()))
            .collect();
        let (wmax, vmax) =
            vals.iter()
                .cloned()
                .fold((0.0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        peaks.push(vmax);
        argmaxes.push(wmax);
    }
    let tail = concurrence_pairwise(&state(16, 5.0)).unwrap();
    let decreasing = peaks[0] > peaks[1] && peaks[1] > peaks[2];
    // "near the transition point" pinned to the same window as criterion 5
    let located = argmaxes.iter().all(|w| (0.3..=0.8).contains(w));
    let nonzero = peaks.iter().all(|&p| p > 1e-3);
    let passed = decreasing && located && nonzero && tail < 1e-6;
    report(
        "6",
        passed,
        &format!(
            "peaks {:.4}/{:.4}/{:.4} (decreasing, > 1e-3), argmax {:?}, C(N=16, Ω=5) = {tail:.2e}",
            peaks[0], peaks[1], peaks[2], argmaxes
        ),
    );
    assert!(decreasing && nonzero, "peaks {peaks:?}");
    assert!(located, "argmax {argmaxes:?}");
    assert!(tail < 1e-6, "impure-phase tail {tail:.3e}");
}

/// Criterion 7: the 2-qubit discord of the N = 8 steady state reaches
/// 1/3 ± 1e-2 at Ω = 100 and never decreases along the default grid.
#[test]
fn criterion_07_discord_limit() {
    let discord_at = |w: f64| {
        let rho = state(8, w);
        let pair = reduce_dicke(&rho, 2).unwrap();
        discord_2qubit(&expand_to_qubits(&pair).unwrap())
            .unwrap()
            .discord
    };
    let limit = discord_at(100.0);
    let grid = default_grid();
    let curve: Vec<f64> = grid.par_iter().map(|&w| discord_at(w)).collect();
    let mut monotone = true;
    let mut worst_drop = 0.0f64;
    for pair in curve.windows(2) {
        let drop = pair[0] - pair[1];
        if drop > 1e-6 {
            monotone = false;
        }
        worst_drop = worst_drop.max(drop);
    }
    let limit_ok = (limit - 1.0 / 3.0).abs() < 1e-2;
    report(
        "7",
        limit_ok && monotone,
        &format!(
            "discord(Ω=100) = {limit:.4} (1/3 ± 1e-2), worst grid decrease {worst_drop:.2e} (≤ 1e-6)"
        ),
    );
    assert!(limit_ok, "limit {limit}");
    assert!(monotone, "worst decrease {worst_drop:.3e}");
}

/// Criterion 8: full-state bipartite discord curves (n_a ∈ {1,2,3}, N = 8)
/// match the reduced 2-qubit discord curve within 0.1 after normalizing
/// each by its value at Ω = 20.
#[test]
fn criterion_08_bipartite_discord_shape() {
    let grid = default_grid();
    let base: Vec<f64> = grid
        .par_iter()
        .map(|&w| {
            let pair = reduce_dicke(&state(8, w), 2).unwrap();
            discord_2qubit(&expand_to_qubits(&pair).unwrap())
                .unwrap()
                .discord
        })
        .collect();
    let base_norm = *base.last().unwrap();
    let mut worst = 0.0f64;
    for na in [1usize, 2, 3] {
        let curve: Vec<f64> = grid
            .par_iter()
            .map(|&w| discord_bipartite_upper(&state(8, w), na).unwrap().discord)
            .collect();
        let norm = *curve.last().unwrap();
        for (v, b) in curve.iter().zip(&base) {
            worst = worst.max((v / norm - b / base_norm).abs());
        }
    }
    let passed = worst < 0.1;
    report(
        "8",
        passed,
        &format!("max normalized deviation {worst:.4} (< 0.1)"),
    );
    assert!(passed, "deviation {worst}");
}

/// Criterion 9: GMN of the 4-particle reductions is positive exactly where
/// the reduced bipartite negativity is (pointwise over the grid, argmax
/// within one step), GHZ₃ gives 1/2 ± 1e-6, and the witnesses verify
/// independently to 1e-8.
#[test]
fn criterion_09_gmn() {
    // "GMN > 0" is operationalized as gmn > 1e-8, the solver's certificate
    // floor; the negativity threshold 1e-6 is as specified.
    let grid = log_grid(0.05, 20.0, 13);
    let mut all_agree = true;
    let mut argmax_ok = true;
    let mut worst_validity: f64 = 0.0;
    let mut worst_floor: f64 = 0.0;
    for n in [4usize, 16] {
        let rows: Vec<(f64, f64, f64)> = grid
            .par_iter()
            .map(|&w| {
                let rho = state(n, w);
                let red = if n > 4 {
                    reduce_dicke(&rho, 4).unwrap()
                } else {
                    rho
                };
                let neg = (1..=2)
                    .map(|na| negativity(&red, na).unwrap().value)
                    .fold(0.0, f64::max);
                let res = gmn(&expand_to_qubits(&red).unwrap()).unwrap();
                assert_eq!(res.status, SdpStatus::Optimal, "N={n} Ω={w}");
                let validity = verify_witness(&res);
                (
                    res.gmn,
                    neg,
                    validity.max_decomposition_residual.max(
                        (-validity.min_p_eigenvalue)
                            .max(0.0)
                            .max((-validity.min_q_eigenvalue).max(0.0)),
                    ),
                )
            })
            .collect();
        for (g, neg, v) in &rows {
            if (*g > 1e-8) != (*neg > 1e-6) {
                all_agree = false;
            }
            worst_validity = worst_validity.max(*v);
            worst_floor = worst_floor.max(*v);
        }
        let argmax = |it: Vec<f64>| {
            it.iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0 as isize
        };
        let ig = argmax(rows.iter().map(|r| r.0).collect());
        let ineg = argmax(rows.iter().map(|r| r.1).collect());
        if (ig - ineg).abs() > 1 {
            argmax_ok = false;
        }
    }
    // GHZ₃
    let mut ghz = CMatrix::zeros(8, 8);
    let h = Complex::new(0.5, 0.0);
    ghz[(0, 0)] = h;
    ghz[(0, 7)] = h;
    ghz[(7, 0)] = h;
    ghz[(7, 7)] = h;
    let res = gmn(&ghz).unwrap();
    let ghz_ok = (res.gmn - 0.5).abs() < 1e-6;
    let v = verify_witness(&res);
    worst_validity = worst_validity.max(v.max_decomposition_residual);
    let passed = all_agree && argmax_ok && ghz_ok && worst_validity <= 1e-8;
    report(
        "9",
        passed,
        &format!(
            "pointwise agreement {all_agree}, argmax within one step {argmax_ok}, GHZ₃ gmn = \
             {:.8} (1/2 ± 1e-6), max witness residual {worst_validity:.2e} (≤ 1e-8)",
            res.gmn
        ),
    );
    assert!(all_agree, "GMN/negativity sign disagreement");
    assert!(argmax_ok, "argmax locations differ by more than one step");
    assert!(ghz_ok, "GHZ gmn {}", res.gmn);
    assert!(worst_validity <= 1e-8, "validity {worst_validity:.3e}");
}

/// Criterion 10: the multipartite classical correlation peaks inside
/// Ω ∈ [0.3, 1.0] while the 2-qubit discord on the same states peaks at the
/// end of the grid.
#[test]
fn criterion_10_multipartite_classical_correlation() {
    let grid = default_grid();
    let mut peaks_ok = true;
    let mut monotone_ok = true;
    let mut details = Vec::new();
    for n in [2usize, 3, 6] {
        let rows: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&w| {
                let rho = state(n, w);
                let j = multipartite_classical_correlation(&rho, JMultiMode::Optimize).unwrap();
                let pair = if n == 2 {
                    rho
                } else {
                    reduce_dicke(&rho, 2).unwrap()
                };
                let d = discord_2qubit(&expand_to_qubits(&pair).unwrap())
                    .unwrap()
                    .discord;
                (j, d)
            })
            .collect();
        let (ij, _) = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
            .unwrap();
        let j_argmax = grid[ij];
        if !(0.3..=1.0).contains(&j_argmax) {
            peaks_ok = false;
        }
        let d_last = rows.last().unwrap().1;
        let d_max = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        if d_last < d_max - 1e-9 {
            monotone_ok = false;
        }
        details.push(format!("N={n}: J argmax {j_argmax:.3}"));
    }
    let passed = peaks_ok && monotone_ok;
    report(
        "10",
        passed,
        &format!(
            "{} (in [0.3,1.0]); discord argmax at grid max {monotone_ok}",
            details.join(", ")
        ),
    );
    assert!(peaks_ok, "{details:?}");
    assert!(monotone_ok, "discord not maximal at grid end");
}

/// Criterion 11: Hankel matrices of the strong-drive coefficients are PSD
/// and equal the beta-function Gram oracle to 1e-12 for J ≤ 20; the
/// separability verdict at Ω = 100 agrees with PPT on every split, N ≤ 16.
#[test]
fn criterion_11_hankel_gram() {
    let mut worst_agree: f64 = 0.0;
    let mut worst_psd: f64 = 0.0;
    for two_j in 2..=40usize {
        let coeffs = DiagonalSymmetricCoeffs::strong_drive_limit(two_j);
        let (h0, h1) = hankel_matrices(&coeffs);
        let g0 = gram_oracle(two_j as f64 / 2.0, 0).unwrap();
        let g1 = gram_oracle(two_j as f64 / 2.0, 1).unwrap();
        worst_agree = worst_agree
            .max((h0.clone() - &g0).amax())
            .max((h1.clone() - &g1).amax());
        worst_psd = worst_psd
            .max(-h0.symmetric_eigen().eigenvalues.min())
            .max(-h1.symmetric_eigen().eigenvalues.min());
    }
    let mut verdicts_ok = true;
    for n in 2..=16usize {
        let rho = state(n, 100.0);
        let separable = is_separable_diagonal_symmetric(&rho, 1e-1).unwrap();
        let all_ppt = (1..n).all(|na| is_ppt(&rho, na).unwrap());
        if !separable || !all_ppt {
            verdicts_ok = false;
        }
    }
    let passed = worst_agree <= 1e-12 && worst_psd <= 1e-12 && verdicts_ok;
    report(
        "11",
        passed,
        &format!(
            "Gram agreement {worst_agree:.2e} (≤ 1e-12), min-eig floor {worst_psd:.2e} \
             (≤ 1e-12), separability/PPT verdicts agree {verdicts_ok}"
        ),
    );
    assert!(worst_agree <= 1e-12);
    assert!(worst_psd <= 1e-12);
    assert!(verdicts_ok);
}

/// Criterion 12: solver certificates on eigenvalue-minimization instances
/// (d ≤ 16) and the GHZ witness program: duality gap ≤ 1e-7 and
/// complementary slackness ≤ 1e-6.
#[test]
fn criterion_12_sdp_certificates() {
    let mut worst_gap: f64 = 0.0;
    let mut worst_comp: f64 = 0.0;
    for (d, seed) in [(3usize, 11u64), (8, 2), (16, 77)] {
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut c = nalgebra::DMatrix::<f64>::zeros(d, d);
        for r in 0..d {
            for cc in r..d {
                let v = next();
                c[(r, cc)] = v;
                c[(cc, r)] = v;
            }
        }
        let lam_min = c
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let mut p = sdp_solver::SdpProblem::new(&[d]).unwrap();
        p.set_objective(0, c).unwrap();
        p.add_constraint(
            (0..d)
                .map(|i| sdp_solver::ConstraintEntry::new(0, i, i, 1.0))
                .collect(),
            1.0,
        )
        .unwrap();
        let sol = sdp_solver::solve(&p, 1e-9).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.objective - lam_min).abs() < 1e-7);
        worst_gap = worst_gap.max(sol.duality_gap.abs());
        worst_comp = worst_comp.max(sol.complementarity);
    }
    // the GHZ witness program through the full pipeline
    let mut ghz = CMatrix::zeros(8, 8);
    let h = Complex::new(0.5, 0.0);
    ghz[(0, 0)] = h;
    ghz[(0, 7)] = h;
    ghz[(7, 0)] = h;
    ghz[(7, 7)] = h;
    let res = gmn(&ghz).unwrap();
    assert_eq!(res.status, SdpStatus::Optimal);
    worst_gap = worst_gap.max(res.duality_gap.abs());
    assert!((res.objective + 0.5).abs() < 1e-6, "{}", res.objective);
    let passed = worst_gap <= 1e-7 && worst_comp <= 1e-6;
    report(
        "12",
        passed,
        &format!("max gap {worst_gap:.2e} (≤ 1e-7), max complementarity {worst_comp:.2e} (≤ 1e-6)"),
    );
    assert!(worst_gap <= 1e-7);
    assert!(worst_comp <= 1e-6);
}

/// Criterion 13: the full verification suite passes within the overall
/// 45-minute envelope (the sweep-style criteria carry their own budgets).
#[test]
fn criterion_13_full_verify_within_budget() {
    let start = Instant::now();
    let results = run_verify(VerifyLevel::Full);
    let elapsed = start.elapsed();
    let all_passed = results.iter().all(|r| r.passed);
    let passed = all_passed && elapsed.as_secs() < 45 * 60;
    report(
        "13",
        passed,
        &format!(
            "verify full: {}/{} checks passed, elapsed {elapsed:.2?} (< 45 min)",
            results.iter().filter(|r| r.passed).count(),
            results.len()
        ),
    );
    for r in &results {
        assert!(
            r.passed,
            "verify check '{}' failed: residual {:.3e} (gate {:.1e}) {}",
            r.name, r.residual, r.threshold, r.detail
        );
    }
    assert!(elapsed.as_secs() < 45 * 60, "took {elapsed:?}");
}
