//! The sweep engine: evaluates (N, Ω, measure) tasks on a worker pool with a
//! shared read-only steady-state cache and deterministic output ordering.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use dicke::bipartite::{expand_to_qubits, reduce_dicke};
use dicke::correlations::{
    discord_2qubit, discord_bipartite_upper, global_discord, multipartite_classical_correlation,
    GqdMode, JMultiMode,
};
use dicke::entanglement::{gmn, negativity, negativity_all_bipartitions};
use dicke::separability::{diagonal_symmetric_chi, hankel_matrices};
use dicke::spin::{observables, steady_state, DickeDensityMatrix, ModelParams};

use crate::config::{Measure, OutputFormat, SweepConfig};
use crate::statefile;
use crate::CliError;

/// One result row. `(n, omega, measure, params)` is unique within a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub schema_version: &'static str,
    pub n: usize,
    pub omega: f64,
    pub measure: String,
    pub params: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux: Option<serde_json::Value>,
    pub wall_time_ms: u64,
}

/// In-memory steady-state cache (concurrent reads, exclusive insertion) with
/// an optional on-disk layer. Keys round Ω to 12 significant digits.
pub struct StateCache {
    mem: RwLock<HashMap<(usize, String), Arc<DickeDensityMatrix>>>,
    dir: Option<PathBuf>,
}

fn omega_key(omega: f64) -> String {
    format!("{omega:.11e}")
}

impl StateCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            mem: RwLock::new(HashMap::new()),
            dir,
        }
    }

    pub fn get(&self, n: usize, omega: f64) -> Result<Arc<DickeDensityMatrix>, CliError> {
        let key = (n, omega_key(omega));
        if let Some(hit) = self.mem.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let state = Arc::new(self.load_or_compute(n, omega, &key.1)?);
        self.mem
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| state.clone());
        Ok(state)
    }

    fn load_or_compute(
        &self,
        n: usize,
        omega: f64,
        key: &str,
    ) -> Result<DickeDensityMatrix, CliError> {
        let disk_path = self
            .dir
            .as_ref()
            .map(|d| d.join(format!("state_n{n}_w{key}.txt")));
        if let Some(path) = &disk_path {
            if path.exists() {
                if let Ok((params, rho)) = statefile::read_state(path) {
                    let rel = (params.omega() - omega).abs() / omega.abs().max(1.0);
                    if params.n_particles() == n && rel < 1e-12 {
                        return Ok(rho);
                    }
                }
            }
        }
        let params = ModelParams::new(n, omega)?;
        let rho = steady_state(&params)?;
        if let Some(path) = &disk_path {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)
                    .map_err(|e| CliError::io(parent.display().to_string(), e))?;
            }
            let file =
                fs::File::create(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
            let mut buf = std::io::BufWriter::new(file);
            statefile::write_state(&rho, omega, &mut buf)
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
        }
        Ok(rho)
    }
}

/// Runs the sweep and returns records sorted by (n, Ω, measure, params).
/// Per-point failures become error records (`value = NaN`, message in aux)
/// and never abort the run.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>, CliError> {
    config.validate()?;
    let omegas = config.omega_values();
    let cache = StateCache::new(config.cache.clone());

    let mut tasks: Vec<(usize, f64, Measure)> = Vec::new();
    for &n in &config.n {
        for &omega in &omegas {
            for &m in &config.measures {
                tasks.push((n, omega, m));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut records: Vec<SweepRecord> = pool.install(|| {
        tasks
            .par_iter()
            .flat_map_iter(|&(n, omega, measure)| evaluate_task(config, &cache, n, omega, measure))
            .collect()
    });

    records.sort_by(|a, b| {
        (
            a.n,
            a.omega.to_bits(),
            a.measure.as_str(),
            a.params.as_str(),
        )
            .cmp(&(
                b.n,
                b.omega.to_bits(),
                b.measure.as_str(),
                b.params.as_str(),
            ))
    });
    debug_assert!(records.windows(2).all(|w| (
        w[0].n,
        w[0].omega.to_bits(),
        &w[0].measure,
        &w[0].params
    ) != (
        w[1].n,
        w[1].omega.to_bits(),
        &w[1].measure,
        &w[1].params
    )));
    Ok(records)
}

fn evaluate_task(
    config: &SweepConfig,
    cache: &StateCache,
    n: usize,
    omega: f64,
    measure: Measure,
) -> Vec<SweepRecord> {
    let start = Instant::now();
    let record = |params: String, value: f64, aux: Option<serde_json::Value>| SweepRecord {
        schema_version: "1",
        n,
        omega,
        measure: measure.name().to_string(),
        params,
        value,
        aux,
        wall_time_ms: 0,
    };
    let outcome = (|| -> Result<Vec<SweepRecord>, CliError> {
        let rho = cache.get(n, omega)?;
        let rows = match measure {
            Measure::Observables => {
                let obs = observables(&rho);
                vec![
                    record("component=jx".into(), obs.jx, None),
                    record("component=jy".into(), obs.jy, None),
                    record("component=jz".into(), obs.jz, None),
                    record("component=purity".into(), obs.purity, None),
                ]
            }
            Measure::Purity => vec![record(String::new(), observables(&rho).purity, None)],
            Measure::Concurrence => vec![record(
                String::new(),
                dicke::entanglement::concurrence_pairwise(&rho)?,
                None,
            )],
            Measure::Negativity => match config.na {
                Some(na) => {
                    let rep = negativity(&rho, na)?;
                    vec![record(format!("na={na}"), rep.value, None)]
                }
                None => negativity_all_bipartitions(&rho)?
                    .into_iter()
                    .map(|rep| record(format!("na={}", rep.n_a), rep.value, None))
                    .collect(),
            },
            Measure::Gmn => {
                let nr = config.nr.unwrap_or(4).min(n);
                let target = if nr < n {
                    reduce_dicke(&rho, nr)?
                } else {
                    (*rho).clone()
                };
                let q = expand_to_qubits(&target)?;
                let res = gmn(&q)?;
                let aux = serde_json::json!({
                    "status": format!("{:?}", res.status),
                    "objective": res.objective,
                    "duality_gap": res.duality_gap,
                });
                if res.status != sdp_solver::SdpStatus::Optimal {
                    vec![record(format!("nr={nr}"), f64::NAN, Some(aux))]
                } else {
                    vec![record(format!("nr={nr}"), res.gmn, Some(aux))]
                }
            }
            Measure::Discord2 => {
                let pair = if n == 2 {
                    (*rho).clone()
                } else {
                    reduce_dicke(&rho, 2)?
                };
                let q = expand_to_qubits(&pair)?;
                let triple = discord_2qubit(&q)?;
                let aux = serde_json::json!({
                    "total": triple.total,
                    "classical": triple.classical,
                    "theta": triple.optimal_angles[0].0,
                    "phi": triple.optimal_angles[0].1,
                });
                vec![record(String::new(), triple.discord, Some(aux))]
            }
            Measure::DiscordBip => {
                let na = config.na.unwrap_or(1);
                let triple = discord_bipartite_upper(&rho, na)?;
                let aux = serde_json::json!({
                    "total": triple.total,
                    "classical": triple.classical,
                    "theta": triple.optimal_angles[0].0,
                    "phi": triple.optimal_angles[0].1,
                });
                vec![record(format!("na={na}"), triple.discord, Some(aux))]
            }
            Measure::Gqd | Measure::Mid => {
                let nr = config.nr.unwrap_or(4).min(n);
                let target = if nr < n {
                    reduce_dicke(&rho, nr)?
                } else {
                    (*rho).clone()
                };
                let q = expand_to_qubits(&target)?;
                let (mode, params) = match measure {
                    Measure::Gqd => (GqdMode::Optimize, format!("nr={nr};mode=optimize")),
                    _ => {
                        let a = config.angles.unwrap_or(crate::config::AnglePair {
                            theta: std::f64::consts::PI,
                            phi: 0.0,
                        });
                        (
                            GqdMode::Fixed {
                                theta: a.theta,
                                phi: a.phi,
                            },
                            format!("nr={nr};theta={:.6};phi={:.6}", a.theta, a.phi),
                        )
                    }
                };
                vec![record(params, global_discord(&q, mode)?, None)]
            }
            Measure::Jmulti => {
                let (mode, params) = match config.angles {
                    Some(a) => (
                        JMultiMode::Fixed {
                            theta: a.theta,
                            phi: a.phi,
                        },
                        format!("mode=fixed;theta={:.6};phi={:.6}", a.theta, a.phi),
                    ),
                    None => (JMultiMode::Optimize, "mode=optimize".to_string()),
                };
                vec![record(
                    params,
                    multipartite_classical_correlation(&rho, mode)?,
                    None,
                )]
            }
            Measure::Hankel => {
                let tol = config.hankel_tol.unwrap_or(1e-2);
                let coeffs = diagonal_symmetric_chi(&rho, tol)?;
                let (h0, h1) = hankel_matrices(&coeffs);
                let min0 = h0.symmetric_eigen().eigenvalues.min();
                let min1 = h1.symmetric_eigen().eigenvalues.min();
                let separable = min0 >= dicke::separability::HANKEL_PSD_FLOOR
                    && min1 >= dicke::separability::HANKEL_PSD_FLOOR;
                let aux = serde_json::json!({
                    "min_eig_h0": min0,
                    "min_eig_h1": min1,
                });
                vec![record(
                    format!("tol={tol:.1e}"),
                    if separable { 1.0 } else { 0.0 },
                    Some(aux),
                )]
            }
        };
        Ok(rows)
    })();

    let elapsed = start.elapsed().as_millis() as u64;
    let mut rows = match outcome {
        Ok(rows) => rows,
        Err(err) => vec![SweepRecord {
            schema_version: "1",
            n,
            omega,
            measure: measure.name().to_string(),
            params: String::new(),
            value: f64::NAN,
            aux: Some(serde_json::json!({ "error": err.to_string() })),
            wall_time_ms: 0,
        }],
    };
    for row in &mut rows {
        row.wall_time_ms = elapsed;
    }
    rows
}

/// Writes records in the configured format.
pub fn write_records(
    records: &[SweepRecord],
    format: OutputFormat,
    path: &Path,
) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    let mut out = std::io::BufWriter::new(file);
    let io_err = |e: std::io::Error| CliError::io(path.display().to_string(), e);
    match format {
        OutputFormat::Csv => {
            writeln!(out, "n,omega,measure,params,value,wall_time_ms").map_err(io_err)?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.n, r.omega, r.measure, r.params, r.value, r.wall_time_ms
                )
                .map_err(io_err)?;
            }
        }
        OutputFormat::Jsonl => {
            for r in records {
                let line = serde_json::to_string(r)
                    .map_err(|e| CliError::Validation(format!("serialization: {e}")))?;
                writeln!(out, "{line}").map_err(io_err)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GridScale, OmegaGrid};

    fn tiny_config(measures: Vec<Measure>) -> SweepConfig {
        SweepConfig {
            n: vec![4],
            omega: OmegaGrid {
                min: 0.1,
                max: 10.0,
                steps: 4,
                scale: GridScale::Log,
            },
            measures,
            na: None,
            nr: None,
            angles: None,
            hankel_tol: None,
            workers: 1,
            out: PathBuf::from("unused.csv"),
            format: OutputFormat::Csv,
            cache: None,
        }
    }

    #[test]
    fn sweep_produces_sorted_unique_records() {
        let config = tiny_config(vec![Measure::Purity, Measure::Negativity]);
        let records = run_sweep(&config).unwrap();
        // negativity on N=4 has two splits; purity one record per omega
        assert_eq!(records.len(), config.omega_values().len() * 3);
        for w in records.windows(2) {
            let a = (w[0].n, w[0].omega.to_bits(), &w[0].measure, &w[0].params);
            let b = (w[1].n, w[1].omega.to_bits(), &w[1].measure, &w[1].params);
            assert!(a < b, "records not strictly sorted");
        }
    }

    #[test]
    fn workers_do_not_change_values() {
        let mut config = tiny_config(vec![Measure::Purity, Measure::Discord2]);
        let one = run_sweep(&config).unwrap();
        config.workers = 4;
        let four = run_sweep(&config).unwrap();
        assert_eq!(one.len(), four.len());
        for (a, b) in one.iter().zip(&four) {
            assert_eq!(
                a.value.to_bits(),
                b.value.to_bits(),
                "{} {}",
                a.measure,
                a.omega
            );
            assert_eq!(a.params, b.params);
        }
    }

    #[test]
    fn per_point_failures_become_error_records() {
        // hankel with a strict tolerance rejects coherent mid-grid states
        let mut config = tiny_config(vec![Measure::Hankel]);
        config.hankel_tol = Some(1e-10);
        let records = run_sweep(&config).unwrap();
        assert_eq!(records.len(), config.omega_values().len());
        assert!(records
            .iter()
            .any(|r| r.value.is_nan() && r.aux.as_ref().is_some_and(|a| a.get("error").is_some())));
    }

    #[test]
    fn purity_sweep_crosses_the_transition() {
        let mut config = tiny_config(vec![Measure::Purity]);
        config.n = vec![8];
        config.omega = OmegaGrid {
            min: 0.05,
            max: 20.0,
            steps: 50,
            scale: GridScale::Log,
        };
        let records = run_sweep(&config).unwrap();
        assert_eq!(records.len(), 50);
        assert!(records.first().unwrap().value > 0.99);
        let last = records.last().unwrap().value;
        assert!(
            (last - 1.0 / 9.0).abs() < 0.05,
            "purity at strong drive: {last}"
        );
        // the curve decreases overall
        assert!(records.first().unwrap().value > last);
    }

    #[test]
    fn negativity_peaks_grow_with_system_size() {
        let mut config = tiny_config(vec![Measure::Negativity]);
        config.n = vec![8, 16];
        config.na = Some(4);
        config.omega = OmegaGrid {
            min: 0.05,
            max: 20.0,
            steps: 20,
            scale: GridScale::Log,
        };
        config.workers = 2;
        let records = run_sweep(&config).unwrap();
        let peak = |n: usize| {
            records
                .iter()
                .filter(|r| r.n == n)
                .map(|r| r.value)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        assert!(peak(16) > peak(8), "{} vs {}", peak(16), peak(8));
    }

    #[test]
    fn empty_measures_rejected() {
        let config = tiny_config(vec![]);
        assert!(matches!(run_sweep(&config), Err(CliError::Validation(_))));
    }
}
