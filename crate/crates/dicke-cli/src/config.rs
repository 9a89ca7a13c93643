//! Sweep configuration: JSON schema, defaults, validation and the Ω grid.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: GridScale,
}

impl Default for OmegaGrid {
    /// 60 log-spaced points on [0.05, 20].
    fn default() -> Self {
        Self {
            min: 0.05,
            max: 20.0,
            steps: 60,
            scale: GridScale::Log,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Observables,
    Purity,
    Concurrence,
    Negativity,
    Gmn,
    Discord2,
    DiscordBip,
    Gqd,
    Mid,
    Jmulti,
    Hankel,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::Observables => "observables",
            Measure::Purity => "purity",
            Measure::Concurrence => "concurrence",
            Measure::Negativity => "negativity",
            Measure::Gmn => "gmn",
            Measure::Discord2 => "discord2",
            Measure::DiscordBip => "discord_bip",
            Measure::Gqd => "gqd",
            Measure::Mid => "mid",
            Measure::Jmulti => "jmulti",
            Measure::Hankel => "hankel",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "observables" => Ok(Measure::Observables),
            "purity" => Ok(Measure::Purity),
            "concurrence" => Ok(Measure::Concurrence),
            "negativity" => Ok(Measure::Negativity),
            "gmn" => Ok(Measure::Gmn),
            "discord2" => Ok(Measure::Discord2),
            "discord_bip" => Ok(Measure::DiscordBip),
            "gqd" => Ok(Measure::Gqd),
            "mid" => Ok(Measure::Mid),
            "jmulti" => Ok(Measure::Jmulti),
            "hankel" => Ok(Measure::Hankel),
            other => Err(CliError::Validation(format!("unknown measure '{other}'"))),
        }
    }

    fn is_entanglement(&self) -> bool {
        matches!(
            self,
            Measure::Concurrence | Measure::Negativity | Measure::Gmn
        )
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnglePair {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

/// Full description of one sweep run. Serializable so runs can be pinned to
/// versioned config files; every field has a CLI flag override.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    #[serde(default)]
    pub omega: OmegaGrid,
    pub measures: Vec<Measure>,
    /// Bipartition size for negativity / bipartite discord.
    #[serde(default)]
    pub na: Option<usize>,
    /// Reduction target for gmn / gqd / mid.
    #[serde(default)]
    pub nr: Option<usize>,
    /// Fixed measurement angles for mid / jmulti.
    #[serde(default)]
    pub angles: Option<AnglePair>,
    /// Off-diagonal tolerance for the hankel separability verdict.
    #[serde(default)]
    pub hankel_tol: Option<f64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub out: PathBuf,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    /// Optional on-disk steady-state cache directory.
    #[serde(default)]
    pub cache: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(e.to_string()))
    }

    /// The Ω evaluation points: the configured grid, densified at step 0.01
    /// on [0.3, 0.8] whenever an entanglement measure is selected (the
    /// transition region needs the resolution).
    pub fn omega_values(&self) -> Vec<f64> {
        let g = &self.omega;
        let mut values: Vec<f64> = match g.scale {
            GridScale::Linear => (0..g.steps)
                .map(|i| g.min + (g.max - g.min) * i as f64 / (g.steps - 1) as f64)
                .collect(),
            GridScale::Log => {
                let (lo, hi) = (g.min.ln(), g.max.ln());
                (0..g.steps)
                    .map(|i| (lo + (hi - lo) * i as f64 / (g.steps - 1) as f64).exp())
                    .collect()
            }
        };
        if self.measures.iter().any(Measure::is_entanglement) {
            let lo = 0.3f64.max(g.min);
            let hi = 0.8f64.min(g.max);
            let mut w = lo;
            while w <= hi + 1e-12 {
                values.push(w);
                w += 0.01;
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        values
    }

    /// Checks grid sanity and every (measure, N) size cap before anything
    /// runs.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        if self.n.is_empty() {
            return fail("particle list is empty".into());
        }
        if self.measures.is_empty() {
            return fail("measure list is empty".into());
        }
        let g = &self.omega;
        if !(g.min.is_finite() && g.max.is_finite()) || g.min >= g.max {
            return fail(format!(
                "omega grid must have min < max, got [{}, {}]",
                g.min, g.max
            ));
        }
        if g.steps < 2 {
            return fail(format!(
                "omega grid needs at least 2 steps, got {}",
                g.steps
            ));
        }
        if g.scale == GridScale::Log && g.min <= 0.0 {
            return fail("log grid requires omega min > 0".into());
        }
        if g.min < 0.0 {
            return fail("omega must be non-negative".into());
        }
        if self.workers == 0 {
            return fail("workers must be at least 1".into());
        }
        for &n in &self.n {
            if n == 0 {
                return fail("particle count 0 is invalid".into());
            }
            for m in &self.measures {
                self.validate_measure(*m, n)?;
            }
        }
        Ok(())
    }

    fn validate_measure(&self, m: Measure, n: usize) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        match m {
            Measure::Observables | Measure::Purity | Measure::Hankel => Ok(()),
            Measure::Concurrence | Measure::Discord2 => {
                if n < 2 {
                    return fail(format!("{} needs N >= 2, got {n}", m.name()));
                }
                Ok(())
            }
            Measure::Negativity => {
                if n < 2 {
                    return fail(format!("negativity needs N >= 2, got {n}"));
                }
                if let Some(na) = self.na {
                    if na == 0 || na > n / 2 {
                        return fail(format!("negativity split na={na} invalid for N={n}"));
                    }
                }
                Ok(())
            }
            Measure::DiscordBip => {
                let na = self.na.unwrap_or(1);
                if na == 0 || na >= n {
                    return fail(format!("discord_bip split na={na} invalid for N={n}"));
                }
                Ok(())
            }
            Measure::Gmn => {
                let nr = self.nr.unwrap_or(4).min(n);
                if nr > dicke::entanglement::GMN_QUBIT_CAP {
                    return fail(format!("gmn register {nr} exceeds cap 5"));
                }
                if nr < 2 {
                    return fail(format!("gmn needs at least 2 particles, got {nr}"));
                }
                Ok(())
            }
            Measure::Gqd | Measure::Mid => {
                let nr = self.nr.unwrap_or(4).min(n);
                // the explicit register comes from the symmetric expansion,
                // which is capped at 6 qubits
                let cap = match m {
                    Measure::Gqd => dicke::correlations::GQD_OPTIMIZE_CAP,
                    _ => dicke::bipartite::QUBIT_EXPANSION_CAP,
                };
                if nr > cap {
                    return fail(format!("{} register {nr} exceeds cap {cap}", m.name()));
                }
                Ok(())
            }
            Measure::Jmulti => {
                if !(2..=dicke::correlations::JMULTI_CAP).contains(&n) {
                    return fail(format!("jmulti needs 2 <= N <= 9, got {n}"));
                }
                Ok(())
            }
        }
    }
}
