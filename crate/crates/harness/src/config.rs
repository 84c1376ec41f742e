use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qprune_core::embedding::{ChimeraGraph, DEFAULT_PROBE_ATTEMPTS};
use qprune_core::problems::ProblemKind;
use qprune_core::pruning::{schedule_fractions, PruneStrategy, DEFAULT_GRANULARITY};
use qprune_core::sampler::{BetaSchedule, SaParams, DEFAULT_SWEEPS};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const DEFAULT_RUNS: usize = 100;
pub const DEFAULT_AGAP_RUNS: usize = 200;
/// Embedding attempts for the per-step physical-qubit count.
pub const DEFAULT_EMBED_ATTEMPTS: usize = 10;

pub fn default_runs(kind: ProblemKind) -> usize {
    if kind == ProblemKind::Agap {
        DEFAULT_AGAP_RUNS
    } else {
        DEFAULT_RUNS
    }
}

/// `rows × cols` cells of `K_{shore,shore}`, written `RxCxS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ChimeraDims {
    pub rows: usize,
    pub cols: usize,
    pub shore: usize,
}

impl ChimeraDims {
    pub const C16: ChimeraDims = ChimeraDims { rows: 16, cols: 16, shore: 4 };

    pub fn graph(&self) -> Result<ChimeraGraph> {
        Ok(ChimeraGraph::new(self.rows, self.cols, self.shore)?)
    }
}

impl Default for ChimeraDims {
    fn default() -> Self {
        ChimeraDims::C16
    }
}

impl fmt::Display for ChimeraDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.rows, self.cols, self.shore)
    }
}

impl FromStr for ChimeraDims {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        let bad = || format!("chimera dimensions must look like 16x16x4, got {s:?}");
        let [r, c, k] = parts[..] else { return Err(bad()) };
        let dims = ChimeraDims {
            rows: r.trim().parse().map_err(|_| bad())?,
            cols: c.trim().parse().map_err(|_| bad())?,
            shore: k.trim().parse().map_err(|_| bad())?,
        };
        if dims.rows == 0 || dims.cols == 0 || dims.shore == 0 {
            return Err(bad());
        }
        Ok(dims)
    }
}

impl TryFrom<String> for ChimeraDims {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<ChimeraDims> for String {
    fn from(d: ChimeraDims) -> String {
        d.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub sweeps: usize,
    pub restarts: usize,
    /// Explicit β range; both ends or neither.
    pub beta_start: Option<f64>,
    pub beta_end: Option<f64>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { sweeps: DEFAULT_SWEEPS, restarts: 1, beta_start: None, beta_end: None }
    }
}

impl SamplerConfig {
    pub fn params(&self, seed: u64) -> Result<SaParams> {
        let beta = match (self.beta_start, self.beta_end) {
            (None, None) => BetaSchedule::Auto,
            (Some(start), Some(end)) => BetaSchedule::Range { start, end },
            _ => return Err(HarnessError::config("beta_start and beta_end must be given together")),
        };
        let p = SaParams { sweeps: self.sweeps, beta, restarts: self.restarts, seed };
        p.validate().map_err(|e| HarnessError::config(e.to_string()))?;
        Ok(p)
    }
}

/// Everything that determines an experiment's output. Serialized into every
/// result file; the output directory is not part of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    pub instance: PathBuf,
    /// `fraction`, `threshold`, `random` or `random:<seed>`. A bare `random`
    /// takes its seed from the master seed.
    pub strategy: String,
    pub granularity: f64,
    pub n_runs: usize,
    pub sampler: SamplerConfig,
    pub chimera: ChimeraDims,
    pub embed_attempts: usize,
    /// Attempts per size probe of the embeddable-size curve; 0 skips the
    /// curve and reports the ratio as absent.
    pub curve_attempts: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Defaults for everything but the instance: fraction pruning, 0.05
    /// granularity, 100 runs (200 for AGAP), C16 hardware, master seed 0.
    pub fn new(kind: ProblemKind, instance: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            problem: kind.name().to_string(),
            instance: instance.into(),
            strategy: "fraction".into(),
            granularity: DEFAULT_GRANULARITY,
            n_runs: default_runs(kind),
            sampler: SamplerConfig::default(),
            chimera: ChimeraDims::C16,
            embed_attempts: DEFAULT_EMBED_ATTEMPTS,
            curve_attempts: DEFAULT_PROBE_ATTEMPTS,
            master_seed: 0,
        }
    }

    pub fn kind(&self) -> Result<ProblemKind> {
        ProblemKind::parse(&self.problem)
            .ok_or_else(|| HarnessError::config(format!("unknown problem kind {:?}", self.problem)))
    }

    pub fn prune_strategy(&self) -> Result<PruneStrategy> {
        parse_strategy(&self.strategy, self.master_seed)
    }

    pub fn fractions(&self) -> Result<Vec<f64>> {
        schedule_fractions(self.granularity).map_err(|e| HarnessError::config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.kind()?;
        self.prune_strategy()?;
        self.fractions()?;
        self.sampler.params(0)?;
        if self.n_runs == 0 {
            return Err(HarnessError::config("n_runs must be at least 1"));
        }
        if self.embed_attempts == 0 {
            return Err(HarnessError::config("embed_attempts must be at least 1"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::config(format!("config: {e}")))
    }
}

/// `name` or `name:seed`.
pub fn parse_strategy(spec: &str, master_seed: u64) -> Result<PruneStrategy> {
    let (name, seed) = match spec.split_once(':') {
        Some((name, seed)) => {
            let seed = seed
                .parse()
                .map_err(|_| HarnessError::config(format!("invalid strategy seed in {spec:?}")))?;
            (name, Some(seed))
        }
        None => (spec, None),
    };
    if name != "random" && seed.is_some() {
        return Err(HarnessError::config(format!("only random pruning takes a seed, got {spec:?}")));
    }
    let seed = seed.unwrap_or_else(|| derive_seed(master_seed, Stream::Pruning, 0));
    PruneStrategy::from_name(name, Some(seed)).map_err(|e| HarnessError::config(e.to_string()))
}

/// Independent seed streams derived from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Pruning = 1,
    Sampler = 2,
    Baseline = 3,
    Embedding = 4,
    Curve = 5,
}

/// SplitMix64 over `(master, stream, index)`; depends only on its inputs,
/// never on execution order.
pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    let mut z = master
        ^ (stream as u64).wrapping_mul(0xA076_1D64_78BD_642F)
        ^ index.wrapping_mul(0xE703_7ED1_A0B4_28DB);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chimera_dims_parse_and_print() {
        assert_eq!("16x16x4".parse::<ChimeraDims>(), Ok(ChimeraDims::C16));
        assert_eq!(ChimeraDims { rows: 2, cols: 3, shore: 4 }.to_string(), "2x3x4");
        assert!("16x16".parse::<ChimeraDims>().is_err());
        assert!("0x1x4".parse::<ChimeraDims>().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let mut cfg = ExperimentConfig::new(ProblemKind::Agap, "gates.txt");
        assert_eq!(cfg.n_runs, 200);
        cfg.sampler.beta_start = Some(0.1);
        cfg.sampler.beta_end = Some(3.0);
        let json = cfg.to_json();
        assert!(json.contains("\"chimera\":\"16x16x4\""));
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);
        assert!(ExperimentConfig::from_json(&json.replace("\"master_seed\"", "\"seed\"")).is_err());
    }

    #[test]
    fn strategies_and_seeds() {
        assert_eq!(parse_strategy("random:7", 1).unwrap(), PruneStrategy::Random { seed: 7 });
        let derived = parse_strategy("random", 1).unwrap();
        assert_eq!(derived, parse_strategy("random", 1).unwrap());
        assert_ne!(derived, parse_strategy("random", 2).unwrap());
        assert!(parse_strategy("fraction:3", 0).is_err());
        assert!(parse_strategy("bogus", 0).is_err());
        assert_ne!(derive_seed(0, Stream::Sampler, 0), derive_seed(0, Stream::Baseline, 0));
        assert_ne!(derive_seed(0, Stream::Sampler, 0), derive_seed(0, Stream::Sampler, 1));
    }

    #[test]
    fn validation_flags_bad_values() {
        let mut cfg = ExperimentConfig::new(ProblemKind::MaxCut, "g.txt");
        assert!(cfg.validate().is_ok());
        cfg.granularity = 0.3;
        assert!(cfg.validate().is_err());
        cfg.granularity = 0.05;
        cfg.sampler.beta_start = Some(1.0);
        assert_eq!(cfg.validate().unwrap_err().exit_code(), crate::error::EXIT_CONFIG);
    }
}
