use qprune_core::embedding::{
    connectivity_graph, embeddable_curve, find_embedding, verify_embedding, ChimeraGraph,
};
use qprune_core::problems::generate::Family;
use qprune_core::problems::{decode, optimum, quality, ProblemInstance, ProblemKind, Reference};
use qprune_core::pruning::{prune, PruneStrategy};
use qprune_core::sampler::{random_baseline, sample_many, SampleSet};
use qprune_core::QuboMatrix;
use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use crate::config::{derive_seed, ExperimentConfig, Stream};
use crate::error::{HarnessError, Result};
use crate::io::read_instance;

/// One schedule step of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub p: f64,
    pub strategy: String,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    /// Best single-run ratio: the maximum for Max-Cut and Max-3SAT, the
    /// minimum otherwise.
    pub best_ratio: f64,
    pub valid_fraction: f64,
    pub baseline_ratio: f64,
    /// Largest embeddable family size at `p` over the size at `p = 0`.
    pub embeddable_ratio: Option<f64>,
    /// Footprint of this step's pruned instance on the configured chimera.
    pub physical_qubits: Option<usize>,
}

/// Rows of one experiment together with the config that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    /// Recoverable problems, such as an instance that does not embed.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSummary {
    pub mean: f64,
    pub std: f64,
    pub best: f64,
    pub valid_fraction: f64,
}

/// Quality of every sample, scored on the original instance.
pub fn sample_ratios(inst: &ProblemInstance, reference: Reference, set: &SampleSet) -> Result<Vec<(f64, bool)>> {
    set.samples
        .iter()
        .map(|s| {
            let q = quality(inst, &decode(inst, &s.assignment)?, reference)?;
            Ok((q.ratio, q.valid))
        })
        .collect()
}

pub fn summarize(kind: ProblemKind, ratios: &[(f64, bool)]) -> RatioSummary {
    let values: Vec<f64> = ratios.iter().map(|r| r.0).collect();
    let best = if kind.higher_is_better() {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    };
    RatioSummary {
        mean: values.iter().mean(),
        std: if values.len() > 1 { values.iter().std_dev() } else { 0.0 },
        best,
        valid_fraction: ratios.iter().filter(|r| r.1).count() as f64 / ratios.len() as f64,
    }
}

pub fn reference_for(inst: &ProblemInstance) -> Result<Reference> {
    Ok(if inst.kind().needs_optimum() { Reference::Optimum(optimum(inst)?) } else { Reference::Intrinsic })
}

/// Embedding columns for every step; both absent when `p = 0` does not embed.
fn embedding_columns(
    cfg: &ExperimentConfig,
    kind: ProblemKind,
    strategy: PruneStrategy,
    steps: &[(f64, QuboMatrix)],
    gc: &ChimeraGraph,
    warnings: &mut Vec<String>,
) -> Result<Vec<(Option<f64>, Option<usize>)>> {
    let mut qubits = Vec::with_capacity(steps.len());
    for (k, (p, q)) in steps.iter().enumerate() {
        let gp = connectivity_graph(q);
        let seed = derive_seed(cfg.master_seed, Stream::Embedding, k as u64);
        let e = find_embedding(&gp, gc, seed, cfg.embed_attempts);
        if let Some(e) = &e {
            if let Err(v) = verify_embedding(e, &gp, gc) {
                return Err(HarnessError::Runtime(format!("embedding at p={p} failed verification: {v}")));
            }
        }
        let count = e.map(|e| e.metrics().physical_qubits);
        if count.is_none() {
            if k == 0 {
                warnings.push(format!(
                    "instance does not embed into chimera {} at p=0; embedding columns are absent",
                    cfg.chimera
                ));
                return Ok(vec![(None, None); steps.len()]);
            }
            warnings.push(format!("no embedding found at p={p}"));
        }
        qubits.push(count);
    }
    let ratios = if cfg.curve_attempts == 0 {
        vec![None; steps.len()]
    } else {
        let ps: Vec<f64> = steps.iter().map(|s| s.0).collect();
        let seed = derive_seed(cfg.master_seed, Stream::Curve, 0);
        embeddable_curve(Family::new(kind), strategy, &ps, gc, seed, cfg.curve_attempts)?
            .into_iter()
            .map(|c| c.ratio)
            .collect()
    };
    Ok(ratios.into_iter().zip(qubits).collect())
}

struct Prepared {
    kind: ProblemKind,
    strategy: PruneStrategy,
    reference: Reference,
    steps: Vec<(f64, QuboMatrix)>,
    baseline: f64,
}

fn prepare(cfg: &ExperimentConfig, inst: &ProblemInstance, q: &QuboMatrix) -> Result<Prepared> {
    cfg.validate()?;
    let kind = cfg.kind()?;
    if inst.kind() != kind {
        return Err(HarnessError::config(format!("config names {kind} but the instance is {}", inst.kind())));
    }
    let strategy = cfg.prune_strategy()?;
    let reference = reference_for(inst)?;
    let steps = cfg
        .fractions()?
        .into_iter()
        .map(|p| Ok((p, prune(q, strategy, p)?)))
        .collect::<Result<Vec<_>>>()?;
    let base_set =
        random_baseline(q.num_variables(), cfg.n_runs, derive_seed(cfg.master_seed, Stream::Baseline, 0))?;
    let baseline = summarize(kind, &sample_ratios(inst, reference, &base_set)?).mean;
    Ok(Prepared { kind, strategy, reference, steps, baseline })
}

fn quality_rows(
    cfg: &ExperimentConfig,
    inst: &ProblemInstance,
    prep: &Prepared,
    embedding: &[(Option<f64>, Option<usize>)],
) -> Result<Vec<ResultRow>> {
    prep.steps
        .iter()
        .zip(embedding)
        .enumerate()
        .map(|(k, ((p, q), &(embeddable_ratio, physical_qubits)))| {
            let params = cfg.sampler.params(derive_seed(cfg.master_seed, Stream::Sampler, k as u64))?;
            let set = sample_many(q, cfg.n_runs, &params)?;
            let s = summarize(prep.kind, &sample_ratios(inst, prep.reference, &set)?);
            Ok(ResultRow {
                p: *p,
                strategy: prep.strategy.to_string(),
                mean_ratio: s.mean,
                std_ratio: s.std,
                best_ratio: s.best,
                valid_fraction: s.valid_fraction,
                baseline_ratio: prep.baseline,
                embeddable_ratio,
                physical_qubits,
            })
        })
        .collect()
}

pub fn load_instance(cfg: &ExperimentConfig) -> Result<(ProblemInstance, QuboMatrix)> {
    read_instance(cfg.kind()?, &cfg.instance)
}

/// Runs the experiment on an already loaded instance; `cfg.instance` is
/// only recorded.
pub fn run_on(cfg: &ExperimentConfig, inst: &ProblemInstance, q: &QuboMatrix) -> Result<Table> {
    let prep = prepare(cfg, inst, q)?;
    let gc = cfg.chimera.graph()?;
    let mut warnings = Vec::new();
    let embedding = embedding_columns(cfg, prep.kind, prep.strategy, &prep.steps, &gc, &mut warnings)?;
    let rows = quality_rows(cfg, inst, &prep, &embedding)?;
    Ok(Table { config: cfg.clone(), rows, warnings })
}

/// Prunes the instance at every schedule step, samples each step, scores
/// the samples against the original instance and measures embeddings.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let (inst, q) = load_instance(cfg)?;
    run_on(cfg, &inst, &q)
}

/// One table per strategy, all sharing the instance and every derived
/// seed so only the pruning differs.
pub fn compare_strategies(cfg: &ExperimentConfig, strategies: &[String]) -> Result<Vec<Table>> {
    if strategies.is_empty() {
        return Err(HarnessError::config("compare needs at least one strategy"));
    }
    cfg.validate()?;
    let (inst, q) = load_instance(cfg)?;
    compare_on(cfg, strategies, &inst, &q)
}

pub fn compare_on(
    cfg: &ExperimentConfig,
    strategies: &[String],
    inst: &ProblemInstance,
    q: &QuboMatrix,
) -> Result<Vec<Table>> {
    if strategies.is_empty() {
        return Err(HarnessError::config("compare needs at least one strategy"));
    }
    strategies
        .iter()
        .map(|s| run_on(&ExperimentConfig { strategy: s.clone(), ..cfg.clone() }, inst, q))
        .collect()
}

/// One table per sweep count; pruning and embedding do not depend on the
/// sampler effort, so the embedding columns are computed once.
pub fn sweep_effort(cfg: &ExperimentConfig, sweeps: &[usize]) -> Result<Vec<Table>> {
    cfg.validate()?;
    let (inst, q) = load_instance(cfg)?;
    sweep_on(cfg, sweeps, &inst, &q)
}

pub fn sweep_on(
    cfg: &ExperimentConfig,
    sweeps: &[usize],
    inst: &ProblemInstance,
    q: &QuboMatrix,
) -> Result<Vec<Table>> {
    if sweeps.is_empty() {
        return Err(HarnessError::config("sweep-effort needs at least one sweep count"));
    }
    let prep = prepare(cfg, inst, q)?;
    let gc = cfg.chimera.graph()?;
    let mut warnings = Vec::new();
    let embedding = embedding_columns(cfg, prep.kind, prep.strategy, &prep.steps, &gc, &mut warnings)?;
    sweeps
        .iter()
        .map(|&n| {
            let mut c = cfg.clone();
            c.sampler.sweeps = n;
            c.validate()?;
            let rows = quality_rows(&c, inst, &prep, &embedding)?;
            Ok(Table { config: c, rows, warnings: warnings.clone() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qprune_core::graph::Graph;
    use qprune_core::problems::build_max_cut;

    fn triangle_cfg() -> (ExperimentConfig, ProblemInstance, QuboMatrix) {
        let (inst, q) = build_max_cut(&Graph::complete(3)).unwrap();
        let mut cfg = ExperimentConfig::new(ProblemKind::MaxCut, "k3.txt");
        cfg.n_runs = 5;
        cfg.granularity = 0.5;
        cfg.sampler.sweeps = 20;
        cfg.chimera = "1x1x4".parse().unwrap();
        cfg.curve_attempts = 1;
        (cfg, inst, q)
    }

    #[test]
    fn rows_follow_the_schedule() {
        let (cfg, inst, q) = triangle_cfg();
        let t = run_on(&cfg, &inst, &q).unwrap();
        let ps: Vec<f64> = t.rows.iter().map(|r| r.p).collect();
        assert_eq!(ps, [0.0, 0.5, 1.0]);
        assert!(t.rows.iter().all(|r| r.baseline_ratio == t.rows[0].baseline_ratio));
        assert_eq!(t.rows[0].embeddable_ratio, Some(1.0));
        // the triangle needs one chain of two qubits
        assert_eq!(t.rows[0].physical_qubits, Some(4));
        assert_eq!(t.rows[2].physical_qubits, Some(3));
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn unembeddable_instance_keeps_running() {
        let (mut cfg, _, _) = triangle_cfg();
        let (inst, q) = build_max_cut(&Graph::complete(9)).unwrap();
        cfg.instance = "k9.txt".into();
        let t = run_on(&cfg, &inst, &q).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows.iter().all(|r| r.physical_qubits.is_none() && r.embeddable_ratio.is_none()));
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn kind_mismatch_is_a_config_error() {
        let (mut cfg, inst, q) = triangle_cfg();
        cfg.problem = "tsp".into();
        assert_eq!(run_on(&cfg, &inst, &q).unwrap_err().exit_code(), crate::error::EXIT_CONFIG);
    }

    #[test]
    fn summary_picks_the_right_best() {
        let r = [(0.5, true), (1.0, false)];
        assert_eq!(summarize(ProblemKind::MaxCut, &r).best, 1.0);
        assert_eq!(summarize(ProblemKind::ExactCover, &r).best, 0.5);
        assert_eq!(summarize(ProblemKind::ExactCover, &r).valid_fraction, 0.5);
        assert_eq!(summarize(ProblemKind::ExactCover, &r[..1]).std, 0.0);
    }
}
