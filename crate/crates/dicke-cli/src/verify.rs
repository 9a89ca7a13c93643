//! Invariant verification suites behind `dicke verify`.
//!
//! Each check reports the measured residual against its gate; `quick` keeps
//! to small sizes (well under a minute), `full` extends to the largest
//! supported oracle comparisons.

use dicke::bipartite::{embed_bipartite, expand_to_qubits, partial_transpose, CGTable, Subsystem};
use dicke::correlations::{
    discord_2qubit, euler_measurement_ops, mutual_information, von_neumann_entropy, wigner_d,
};
use dicke::entanglement::{gmn, is_ppt, verify_witness, NEGATIVE_EIG_TOL};
use dicke::separability::{
    gram_oracle, hankel_matrices, is_separable_diagonal_symmetric, DiagonalSymmetricCoeffs,
};
use dicke::spin::{
    lindblad_residual, steady_state, steady_state_nullspace, DickeDensityMatrix, ModelParams,
};
use dicke::{trace_distance, CMatrix};
use nalgebra::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest residual observed by the check.
    pub residual: f64,
    /// Gate the residual is held against.
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    fn gate(name: &'static str, residual: f64, threshold: f64, detail: String) -> Self {
        Self {
            name,
            passed: residual <= threshold,
            residual,
            threshold,
            detail,
        }
    }
}

pub fn run_verify(level: VerifyLevel) -> Vec<CheckResult> {
    vec![
        check_steady_state_invariants(level),
        check_oracle_equivalence(level),
        check_cg_orthonormality(level),
        check_embedding_isometry(level),
        check_partial_transpose(),
        check_witness_validity(),
        check_entropy_conventions(),
        check_hankel_gram(level),
        check_rotations(),
        check_separability_vs_ppt(level),
    ]
}

fn check_steady_state_invariants(level: VerifyLevel) -> CheckResult {
    let ns: &[usize] = match level {
        VerifyLevel::Quick => &[1, 2, 4, 8, 12],
        VerifyLevel::Full => &[1, 2, 4, 8, 16, 24, 32],
    };
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for &n in ns {
        for omega in [0.01, 0.1, 0.5, 1.0, 10.0, 100.0] {
            let params = ModelParams::new(n, omega).expect("valid params");
            match steady_state(&params) {
                Ok(rho) => {
                    let res = lindblad_residual(&rho, &params).expect("dims agree");
                    if res > worst {
                        worst = res;
                        detail = format!("worst at N={n}, omega={omega}");
                    }
                }
                Err(e) => {
                    return CheckResult {
                        name: "steady-state invariants",
                        passed: false,
                        residual: f64::INFINITY,
                        threshold: 1e-9,
                        detail: format!("N={n}, omega={omega}: {e}"),
                    }
                }
            }
        }
    }
    CheckResult::gate("steady-state invariants", worst, 1e-9, detail)
}

fn check_oracle_equivalence(level: VerifyLevel) -> CheckResult {
    let ns: &[usize] = match level {
        VerifyLevel::Quick => &[1, 2, 4, 6],
        VerifyLevel::Full => &[1, 2, 4, 8, 10],
    };
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for &n in ns {
        for omega in [0.1, 0.5, 1.0, 5.0] {
            let params = ModelParams::new(n, omega).expect("valid params");
            let direct = steady_state(&params).expect("steady state");
            let kernel = match steady_state_nullspace(&params) {
                Ok(k) => k,
                Err(e) => {
                    return CheckResult {
                        name: "steady-state oracle equivalence",
                        passed: false,
                        residual: f64::INFINITY,
                        threshold: 1e-8,
                        detail: format!("N={n}, omega={omega}: {e}"),
                    }
                }
            };
            let td = trace_distance(direct.matrix(), kernel.matrix());
            if td > worst {
                worst = td;
                detail = format!("worst at N={n}, omega={omega}");
            }
        }
    }
    CheckResult::gate("steady-state oracle equivalence", worst, 1e-8, detail)
}

/// Orthonormality residual of one coefficient table; exposed so tests can
/// feed in tampered tables.
pub fn cg_orthonormality_of(table: &CGTable) -> f64 {
    let mut worst: f64 = 0.0;
    for km in 0..=(table.two_ja() + table.two_jb()) {
        worst = worst.max((table.row_norm(km) - 1.0).abs());
    }
    let top = table.coefficient(
        table.two_ja() + table.two_jb(),
        table.two_ja(),
        table.two_jb(),
    );
    worst.max((top - 1.0).abs())
}

fn check_cg_orthonormality(level: VerifyLevel) -> CheckResult {
    let max_total = match level {
        VerifyLevel::Quick => 8,
        VerifyLevel::Full => 16,
    };
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for two_ja in 1..=max_total - 1 {
        for two_jb in 1..=(max_total - two_ja) {
            let table = CGTable::cached(two_ja, two_jb);
            let res = cg_orthonormality_of(&table);
            if res > worst {
                worst = res;
                detail = format!("worst at 2ja={two_ja}, 2jb={two_jb}");
            }
        }
    }
    CheckResult::gate("Clebsch-Gordan orthonormality", worst, 1e-12, detail)
}

fn check_embedding_isometry(level: VerifyLevel) -> CheckResult {
    let ns: &[usize] = match level {
        VerifyLevel::Quick => &[2, 4, 6],
        VerifyLevel::Full => &[2, 4, 6, 8, 10],
    };
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for &n in ns {
        for omega in [0.3, 2.0] {
            let rho = steady_state(&ModelParams::new(n, omega).expect("params")).expect("state");
            let mut src: Vec<f64> = rho.eigenvalues();
            src.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for n_a in 1..n {
                let emb = embed_bipartite(&rho, n_a).expect("embed");
                let mut big: Vec<f64> = emb
                    .matrix()
                    .clone()
                    .symmetric_eigen()
                    .eigenvalues
                    .iter()
                    .cloned()
                    .filter(|x| x.abs() > 1e-10)
                    .collect();
                big.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let nonzero: Vec<f64> = src.iter().cloned().filter(|x| x.abs() > 1e-10).collect();
                let res = if big.len() != nonzero.len() {
                    f64::INFINITY
                } else {
                    big.iter()
                        .zip(&nonzero)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                };
                if res > worst {
                    worst = res;
                    detail = format!("worst at N={n}, omega={omega}, split={n_a}");
                }
            }
        }
    }
    CheckResult::gate("embedding spectrum isometry", worst, 1e-10, detail)
}

fn check_partial_transpose() -> CheckResult {
    let rho = steady_state(&ModelParams::new(6, 0.5).expect("params")).expect("state");
    let emb = embed_bipartite(&rho, 2).expect("embed");
    let pt_a = partial_transpose(&emb, Subsystem::A);
    let pt_b = partial_transpose(&emb, Subsystem::B);
    let neg = |m: &CMatrix| -> f64 {
        m.clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .filter(|&&x| x < NEGATIVE_EIG_TOL)
            .sum::<f64>()
            .abs()
    };
    let sym_res = (neg(&pt_a) - neg(&pt_b)).abs();
    // involution residual through a second transpose
    let emb2 = embed_bipartite(&rho, 2).expect("embed");
    let back = {
        let tmp = partial_transpose(&emb2, Subsystem::B);
        // transpose the B indices once more by building from the raw matrix
        let db = 5usize;
        let da = 3usize;
        let mut out = CMatrix::zeros(da * db, da * db);
        for ka in 0..da {
            for kb in 0..db {
                for ka2 in 0..da {
                    for kb2 in 0..db {
                        out[(ka * db + kb2, ka2 * db + kb)] = tmp[(ka * db + kb, ka2 * db + kb2)];
                    }
                }
            }
        }
        out
    };
    let inv_res = (back - emb.matrix()).camax();
    CheckResult::gate(
        "partial transpose symmetry/involution",
        sym_res.max(inv_res),
        1e-12,
        String::new(),
    )
}

fn check_witness_validity() -> CheckResult {
    let mut ghz = CMatrix::zeros(8, 8);
    let h = Complex::new(0.5, 0.0);
    ghz[(0, 0)] = h;
    ghz[(0, 7)] = h;
    ghz[(7, 0)] = h;
    ghz[(7, 7)] = h;
    match gmn(&ghz) {
        Ok(res) => {
            let validity = verify_witness(&res);
            let gmn_res = (res.gmn - 0.5).abs();
            let worst = validity
                .max_decomposition_residual
                .max((-validity.min_p_eigenvalue).max(0.0) * 10.0)
                .max((-validity.min_q_eigenvalue).max(0.0) * 10.0)
                .max(gmn_res * 1e-2);
            CheckResult::gate(
                "GHZ witness validity",
                worst,
                1e-8,
                format!("gmn = {:.9}, gap = {:.2e}", res.gmn, res.duality_gap),
            )
        }
        Err(e) => CheckResult {
            name: "GHZ witness validity",
            passed: false,
            residual: f64::INFINITY,
            threshold: 1e-8,
            detail: e.to_string(),
        },
    }
}

fn check_entropy_conventions() -> CheckResult {
    let triplet = DickeDensityMatrix::level_projector(2, 1).expect("projector");
    let mi = mutual_information(&triplet, 1).expect("mi");
    let qubit = CMatrix::identity(2, 2) * Complex::new(0.5, 0.0);
    let s = von_neumann_entropy(&qubit);
    let q = expand_to_qubits(&triplet).expect("expand");
    let discord = discord_2qubit(&q).expect("discord").discord;
    let worst = (mi - 2.0)
        .abs()
        .max((s - 1.0).abs())
        .max((discord - 1.0).abs() * 1e-6);
    CheckResult::gate(
        "entropy conventions (base 2)",
        worst,
        1e-11,
        format!("MI = {mi:.12}, S = {s:.12}, D = {discord:.9}"),
    )
}

fn check_hankel_gram(level: VerifyLevel) -> CheckResult {
    let max_two_j = match level {
        VerifyLevel::Quick => 16,
        VerifyLevel::Full => 40,
    };
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for two_j in 1..=max_two_j {
        let coeffs = DiagonalSymmetricCoeffs::strong_drive_limit(two_j);
        let (h0, h1) = hankel_matrices(&coeffs);
        let g0 = gram_oracle(two_j as f64 / 2.0, 0).expect("gram");
        let g1 = gram_oracle(two_j as f64 / 2.0, 1).expect("gram");
        let agree = (h0.clone() - &g0).amax().max((h1.clone() - &g1).amax());
        let psd = (-h0.symmetric_eigen().eigenvalues.min())
            .max(-h1.symmetric_eigen().eigenvalues.min())
            .max(0.0);
        let res = agree.max(psd);
        if res > worst {
            worst = res;
            detail = format!("worst at 2J={two_j}");
        }
    }
    CheckResult::gate("Hankel/Gram agreement and positivity", worst, 1e-12, detail)
}

fn check_rotations() -> CheckResult {
    let mut worst: f64 = 0.0;
    for j in [0.5, 1.0, 2.0, 4.0] {
        let a = wigner_d(j, 0.4).expect("wigner");
        let b = wigner_d(j, 1.3).expect("wigner");
        let ab = wigner_d(j, 1.7).expect("wigner");
        worst = worst.max(((a * b) - ab).amax());
        for (theta, phi) in [(0.0, 0.0), (1.1, 2.5)] {
            let set = euler_measurement_ops(j, theta, phi).expect("euler");
            worst = worst.max(set.residual());
        }
    }
    CheckResult::gate(
        "rotation group law and completeness",
        worst,
        1e-12,
        String::new(),
    )
}

fn check_separability_vs_ppt(level: VerifyLevel) -> CheckResult {
    let ns: &[usize] = match level {
        VerifyLevel::Quick => &[4, 8],
        VerifyLevel::Full => &[4, 8, 12, 16],
    };
    for &n in ns {
        let rho = steady_state(&ModelParams::new(n, 100.0).expect("params")).expect("state");
        let separable = match is_separable_diagonal_symmetric(&rho, 1e-1) {
            Ok(v) => v,
            Err(e) => {
                return CheckResult {
                    name: "separability vs PPT",
                    passed: false,
                    residual: f64::INFINITY,
                    threshold: 0.0,
                    detail: format!("N={n}: {e}"),
                }
            }
        };
        let all_ppt = (1..n).all(|na| is_ppt(&rho, na).expect("ppt"));
        if !separable || !all_ppt {
            return CheckResult {
                name: "separability vs PPT",
                passed: false,
                residual: 1.0,
                threshold: 0.0,
                detail: format!("N={n}: separable={separable}, all_ppt={all_ppt}"),
            };
        }
    }
    CheckResult::gate("separability vs PPT", 0.0, 0.0, String::new())
}
