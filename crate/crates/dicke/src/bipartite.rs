//! Clebsch-Gordan machinery: splitting the Dicke ladder into two symmetric
//! subsystems, partial transpose and trace, and expansion onto explicit
//! qubit registers.
//!
//! Only the stretched coupling `J = j_a + j_b` is needed: the model never
//! leaves the maximal-spin sector. Coefficient tables are built once per
//! `(j_a, j_b)` by the lowering-operator recursion from the stretched state
//! and cached for concurrent read-only use.
//!
//! Pair indices are laid out a-major, b-minor: the bipartite element
//! `((a, b), (a', b'))` lives at row `ia * (n_b + 1) + ib`, with subsystem
//! indices counted in excitations just like the Dicke ladder itself.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::Complex;

use crate::spin::DickeDensityMatrix;
use crate::{binomial, CMatrix, DickeError};

/// Clebsch-Gordan coefficients `C(J; j_a, j_b, M; a, b)` for the stretched
/// block `J = j_a + j_b`, stored over excitation indices.
#[derive(Debug, Clone)]
pub struct CGTable {
    two_ja: usize,
    two_jb: usize,
    /// `rows[km][ka]` with `km = J + M` the total excitation count and
    /// `ka = j_a + a` the subsystem-A excitation count (b is determined).
    rows: Vec<Vec<f64>>,
}

impl CGTable {
    /// Builds the table by lowering from `C(J, J; j_a, j_b) = 1`.
    pub fn build(two_ja: usize, two_jb: usize) -> Self {
        let na = two_ja; // j_a = na/2, excitation index ka in 0..=na
        let nb = two_jb;
        let n = na + nb;
        let mut rows: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
        rows[n] = {
            let mut top = vec![0.0; na + 1];
            top[na] = 1.0;
            top
        };
        // J⁻ = j_a⁻ + j_b⁻ applied to |J, M⟩ expressed in the product basis:
        // C(M−1; ka−?, ...) accumulates the two lowering amplitudes.
        for km in (1..=n).rev() {
            let mut next = vec![0.0; na + 1];
            // total lowering amplitude √((J+M)(J−M+1)) in excitation counts:
            // J+M = km, J−M+1 = n−km+1
            let denom = ((km * (n - km + 1)) as f64).sqrt();
            for ka in 0..=na.min(km) {
                let kb = km - ka;
                if kb > nb {
                    continue;
                }
                let c = rows[km][ka];
                if c == 0.0 {
                    continue;
                }
                // lower subsystem A: amplitude √(ka (na−ka+1))
                if ka >= 1 {
                    next[ka - 1] += c * ((ka * (na - ka + 1)) as f64).sqrt() / denom;
                }
                // lower subsystem B: amplitude √(kb (nb−kb+1))
                if kb >= 1 {
                    next[ka] += c * ((kb * (nb - kb + 1)) as f64).sqrt() / denom;
                }
            }
            rows[km - 1] = next;
        }
        Self {
            two_ja,
            two_jb,
            rows,
        }
    }

    /// Shared, lazily built table for a given `(2j_a, 2j_b)`.
    pub fn cached(two_ja: usize, two_jb: usize) -> Arc<CGTable> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<CGTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("CG cache poisoned");
        guard
            .entry((two_ja, two_jb))
            .or_insert_with(|| Arc::new(CGTable::build(two_ja, two_jb)))
            .clone()
    }

    /// Raw constructor for fault-injection tests.
    #[doc(hidden)]
    pub fn from_raw(two_ja: usize, two_jb: usize, rows: Vec<Vec<f64>>) -> Self {
        Self {
            two_ja,
            two_jb,
            rows,
        }
    }

    #[doc(hidden)]
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn two_ja(&self) -> usize {
        self.two_ja
    }

    pub fn two_jb(&self) -> usize {
        self.two_jb
    }

    /// Coefficient addressed by excitation counts; zero outside the
    /// selection rule `km = ka + kb`.
    pub fn coefficient(&self, km: usize, ka: usize, kb: usize) -> f64 {
        if ka + kb != km || ka > self.two_ja || kb > self.two_jb || km > self.rows.len() - 1 {
            return 0.0;
        }
        self.rows[km][ka]
    }

    /// Σ_a C² over one total-excitation row; 1 for a correct table.
    pub fn row_norm(&self, km: usize) -> f64 {
        self.rows[km].iter().map(|c| c * c).sum()
    }
}

fn check_half_integer(label: &str, x: f64) -> Result<i64, DickeError> {
    let doubled = 2.0 * x;
    let rounded = doubled.round();
    if (doubled - rounded).abs() > 1e-9 || !x.is_finite() {
        return Err(DickeError::InvalidQuantumNumbers(format!(
            "{label} = {x} is not a half-integer"
        )));
    }
    Ok(rounded as i64)
}

/// Condon-Shortley Clebsch-Gordan coefficient `C(J; j_a, j_b, M; a, b)`,
/// restricted to the stretched coupling `J = j_a + j_b`.
pub fn clebsch_gordan(
    j_a: f64,
    j_b: f64,
    j: f64,
    m: f64,
    a: f64,
    b: f64,
) -> Result<f64, DickeError> {
    let two_ja = check_half_integer("j_a", j_a)?;
    let two_jb = check_half_integer("j_b", j_b)?;
    let two_j = check_half_integer("J", j)?;
    let two_m = check_half_integer("M", m)?;
    let two_a = check_half_integer("a", a)?;
    let two_b = check_half_integer("b", b)?;
    if two_ja < 0 || two_jb < 0 {
        return Err(DickeError::InvalidQuantumNumbers(
            "negative spin quantum number".into(),
        ));
    }
    if two_j != two_ja + two_jb {
        return Err(DickeError::InvalidQuantumNumbers(format!(
            "only the stretched block J = j_a + j_b is supported, got J = {j}"
        )));
    }
    if two_m.abs() > two_j || two_a.abs() > two_ja || two_b.abs() > two_jb {
        return Err(DickeError::InvalidQuantumNumbers(
            "projection out of range".into(),
        ));
    }
    if (two_a - two_ja).rem_euclid(2) != 0
        || (two_b - two_jb).rem_euclid(2) != 0
        || (two_m - two_j).rem_euclid(2) != 0
    {
        return Err(DickeError::InvalidQuantumNumbers(
            "projection parity does not match spin".into(),
        ));
    }
    if two_a + two_b != two_m {
        return Ok(0.0);
    }
    let table = CGTable::cached(two_ja as usize, two_jb as usize);
    let km = ((two_j + two_m) / 2) as usize;
    let ka = ((two_ja + two_a) / 2) as usize;
    let kb = ((two_jb + two_b) / 2) as usize;
    Ok(table.coefficient(km, ka, kb))
}

/// Which subsystem an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A Dicke state embedded isometrically in the tensor product of the two
/// subsystem symmetric spaces.
#[derive(Debug, Clone)]
pub struct BipartiteSymmetricState {
    n_a: usize,
    n_b: usize,
    matrix: CMatrix,
}

impl BipartiteSymmetricState {
    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn dim(&self) -> usize {
        (self.n_a + 1) * (self.n_b + 1)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    fn index(&self, ka: usize, kb: usize) -> usize {
        ka * (self.n_b + 1) + kb
    }
}

/// Embeds a Dicke state into `C^{N_A+1} ⊗ C^{N_B+1}` through the stretched
/// Clebsch-Gordan expansion. Trace and spectrum are preserved.
pub fn embed_bipartite(
    rho: &DickeDensityMatrix,
    n_a: usize,
) -> Result<BipartiteSymmetricState, DickeError> {
    let n = rho.n_particles();
    if n_a == 0 || n_a >= n {
        return Err(DickeError::InvalidSplit { n, n_a });
    }
    let n_b = n - n_a;
    let table = CGTable::cached(n_a, n_b);
    let da = n_a + 1;
    let db = n_b + 1;
    let mut out = CMatrix::zeros(da * db, da * db);
    let src = rho.matrix();
    for ka in 0..da {
        for kb in 0..db {
            let c1 = table.coefficient(ka + kb, ka, kb);
            if c1 == 0.0 {
                continue;
            }
            let row = ka * db + kb;
            for ka2 in 0..da {
                for kb2 in 0..db {
                    let c2 = table.coefficient(ka2 + kb2, ka2, kb2);
                    if c2 == 0.0 {
                        continue;
                    }
                    out[(row, ka2 * db + kb2)] =
                        src[(ka + kb, ka2 + kb2)] * Complex::new(c1 * c2, 0.0);
                }
            }
        }
    }
    Ok(BipartiteSymmetricState {
        n_a,
        n_b,
        matrix: out,
    })
}

/// Partial transpose over one subsystem, as a pure index permutation.
pub fn partial_transpose(state: &BipartiteSymmetricState, subsystem: Subsystem) -> CMatrix {
    let da = state.n_a + 1;
    let db = state.n_b + 1;
    let src = state.matrix();
    let mut out = CMatrix::zeros(da * db, da * db);
    for ka in 0..da {
        for kb in 0..db {
            for ka2 in 0..da {
                for kb2 in 0..db {
                    let (r, c) = match subsystem {
                        // swap the A indices between row and column
                        Subsystem::A => (state.index(ka2, kb), state.index(ka, kb2)),
                        // swap the B indices
                        Subsystem::B => (state.index(ka, kb2), state.index(ka2, kb)),
                    };
                    out[(r, c)] = src[(state.index(ka, kb), state.index(ka2, kb2))];
                }
            }
        }
    }
    out
}

/// Traces out one subsystem, returning a Dicke state on the kept one.
pub fn partial_trace(
    state: &BipartiteSymmetricState,
    keep: Subsystem,
) -> Result<DickeDensityMatrix, DickeError> {
    let da = state.n_a + 1;
    let db = state.n_b + 1;
    let src = state.matrix();
    let (dk, n_keep) = match keep {
        Subsystem::A => (da, state.n_a),
        Subsystem::B => (db, state.n_b),
    };
    let mut out = CMatrix::zeros(dk, dk);
    match keep {
        Subsystem::A => {
            for ka in 0..da {
                for ka2 in 0..da {
                    let mut acc = Complex::new(0.0, 0.0);
                    for kb in 0..db {
                        acc += src[(state.index(ka, kb), state.index(ka2, kb))];
                    }
                    out[(ka, ka2)] = acc;
                }
            }
        }
        Subsystem::B => {
            for kb in 0..db {
                for kb2 in 0..db {
                    let mut acc = Complex::new(0.0, 0.0);
                    for ka in 0..da {
                        acc += src[(state.index(ka, kb), state.index(ka, kb2))];
                    }
                    out[(kb, kb2)] = acc;
                }
            }
        }
    }
    DickeDensityMatrix::new(n_keep, out)
}

/// Reduces a Dicke state to `n_r < N` particles (embed, then trace the rest).
pub fn reduce_dicke(
    rho: &DickeDensityMatrix,
    n_r: usize,
) -> Result<DickeDensityMatrix, DickeError> {
    let n = rho.n_particles();
    if n_r == 0 || n_r >= n {
        return Err(DickeError::InvalidSplit { n, n_a: n_r });
    }
    let emb = embed_bipartite(rho, n_r)?;
    partial_trace(&emb, Subsystem::A)
}

/// Cap on the explicit qubit expansion (`2^N` dimension 64).
pub const QUBIT_EXPANSION_CAP: usize = 6;

/// Expands a Dicke state onto the full `2^N`-dimensional register: level `k`
/// maps to the normalized symmetric superposition of all basis states with
/// `k` excited qubits (bit `q` of the index is the state of qubit `q`).
pub fn expand_to_qubits(rho: &DickeDensityMatrix) -> Result<CMatrix, DickeError> {
    let n = rho.n_particles();
    if n > QUBIT_EXPANSION_CAP {
        return Err(DickeError::CapExceeded {
            what: "qubit expansion",
            got: n,
            cap: QUBIT_EXPANSION_CAP,
        });
    }
    let dim = 1usize << n;
    let src = rho.matrix();
    let norm: Vec<f64> = (0..=n).map(|k| binomial(n, k).sqrt()).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for x in 0..dim {
        let kx = (x as u32).count_ones() as usize;
        for y in 0..dim {
            let ky = (y as u32).count_ones() as usize;
            out[(x, y)] = src[(kx, ky)] / Complex::new(norm[kx] * norm[ky], 0.0);
        }
    }
    Ok(out)
}

/// Partial transpose of a qubit-register matrix over the qubits in `mask`.
pub fn partial_transpose_qubits(rho: &CMatrix, n_qubits: usize, mask: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    debug_assert_eq!(rho.nrows(), dim);
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out[(r2, c2)] = rho[(r, c)];
        }
    }
    out
}

/// Traces out the qubits *not* in `keep_mask`; kept qubits are repacked in
/// ascending position order.
pub fn qubit_partial_trace(rho: &CMatrix, n_qubits: usize, keep_mask: usize) -> CMatrix {
    let kept: Vec<usize> = (0..n_qubits)
        .filter(|q| keep_mask & (1 << q) != 0)
        .collect();
    let traced: Vec<usize> = (0..n_qubits)
        .filter(|q| keep_mask & (1 << q) == 0)
        .collect();
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let spread = |packed: usize, positions: &[usize]| -> usize {
        positions
            .iter()
            .enumerate()
            .map(|(i, &q)| ((packed >> i) & 1) << q)
            .sum()
    };
    let mut out = CMatrix::zeros(dk, dk);
    for rk in 0..dk {
        let r_base = spread(rk, &kept);
        for ck in 0..dk {
            let c_base = spread(ck, &kept);
            let mut acc = Complex::new(0.0, 0.0);
            for t in 0..dt {
                let t_full = spread(t, &traced);
                acc += rho[(r_base | t_full, c_base | t_full)];
            }
            out[(rk, ck)] = acc;
        }
    }
    out
}

/// Reduces the symmetric-sector factor of a bipartite matrix from `n_from`
/// to `n_to` atoms. The input is indexed `(other, sym)` with the symmetric
/// index minor; the output keeps the `other` factor untouched.
pub(crate) fn reduce_symmetric_factor(
    mat: &CMatrix,
    d_other: usize,
    n_from: usize,
    n_to: usize,
) -> CMatrix {
    if n_to == n_from {
        return mat.clone();
    }
    assert!(n_to < n_from);
    let table = CGTable::cached(n_to, n_from - n_to);
    let d_from = n_from + 1;
    let d_to = n_to + 1;
    let n_tr = n_from - n_to;
    let mut out = CMatrix::zeros(d_other * d_to, d_other * d_to);
    for s in 0..d_to {
        for s2 in 0..d_to {
            // traced excitation t must agree between row and column
            for t in 0..=n_tr {
                let k = s + t;
                let k2 = s2 + t;
                if k > n_from || k2 > n_from {
                    continue;
                }
                let w = table.coefficient(k, s, t) * table.coefficient(k2, s2, t);
                if w == 0.0 {
                    continue;
                }
                for o in 0..d_other {
                    for o2 in 0..d_other {
                        let v = mat[(o * d_from + k, o2 * d_from + k2)];
                        out[(o * d_to + s, o2 * d_to + s2)] += v * Complex::new(w, 0.0);
                    }
                }
            }
        }
    }
    out
}
