//! Approximation by deleting soft off-diagonal QUBO entries.
//!
//! Hard entries and the diagonal are never touched: only couplings drive the
//! connectivity of the logical graph, and only soft couplings can be dropped
//! without invalidating decoded solutions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubo::QuboMatrix;

pub const DEFAULT_GRANULARITY: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PruneStrategy {
    /// Delete the `⌊p·m⌋` smallest-magnitude soft couplings.
    Fraction,
    /// Delete every soft coupling with `|value| ≤ p · max|value|`.
    Threshold,
    /// Delete a seeded uniformly random `⌊p·m⌋` subset, nested in `p`.
    Random { seed: u64 },
}

impl PruneStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            PruneStrategy::Fraction => "fraction",
            PruneStrategy::Threshold => "threshold",
            PruneStrategy::Random { .. } => "random",
        }
    }

    /// `seed` is required for `random` and ignored otherwise.
    pub fn from_name(name: &str, seed: Option<u64>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "fraction" => Ok(PruneStrategy::Fraction),
            "threshold" => Ok(PruneStrategy::Threshold),
            "random" => seed
                .map(|seed| PruneStrategy::Random { seed })
                .ok_or_else(|| Error::Parameter("random pruning needs an explicit seed".into())),
            other => Err(Error::Parameter(format!("unknown pruning strategy {other:?}"))),
        }
    }
}

impl fmt::Display for PruneStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PruneStrategy::Random { seed } => write!(f, "random:{seed}"),
            other => f.write_str(other.name()),
        }
    }
}

fn check_fraction(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("pruning fraction {p} outside [0, 1]")))
    }
}

/// `⌊p·m⌋`, robust to `p` values like `0.35` that are not exact in binary.
fn quota(p: f64, m: usize) -> usize {
    (libm::floor(p * m as f64 + 1e-9) as usize).min(m)
}

fn without(q: &QuboMatrix, victims: impl IntoIterator<Item = (usize, usize)>) -> QuboMatrix {
    let mut out = q.clone();
    for (i, j) in victims {
        out.remove(i, j);
    }
    out
}

pub fn prune_fraction(q: &QuboMatrix, p: f64) -> Result<QuboMatrix> {
    check_fraction(p)?;
    let mut soft: Vec<((usize, usize), f64)> =
        q.soft_offdiagonal().map(|(k, e)| (k, libm::fabs(e.value))).collect();
    // stable sort keeps (i, j) order among equal magnitudes
    soft.sort_by(|a, b| a.1.total_cmp(&b.1));
    let k = quota(p, soft.len());
    Ok(without(q, soft.into_iter().take(k).map(|(key, _)| key)))
}

pub fn prune_threshold(q: &QuboMatrix, p: f64) -> Result<QuboMatrix> {
    check_fraction(p)?;
    let max = q.soft_offdiagonal().map(|(_, e)| libm::fabs(e.value)).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(q.clone());
    }
    let t = p * max;
    let slack = 1e-12 * max;
    let victims: Vec<(usize, usize)> = q
        .soft_offdiagonal()
        .filter(|(_, e)| libm::fabs(e.value) <= t + slack)
        .map(|(k, _)| k)
        .collect();
    Ok(without(q, victims))
}

/// Deletion order is one seeded shuffle of the soft couplings, so the set
/// removed at `p` is a prefix of (and contained in) the set removed at any
/// larger `p`.
pub fn prune_random(q: &QuboMatrix, p: f64, seed: u64) -> Result<QuboMatrix> {
    check_fraction(p)?;
    let mut keys: Vec<(usize, usize)> = q.soft_offdiagonal().map(|(k, _)| k).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    keys.shuffle(&mut rng);
    let k = quota(p, keys.len());
    keys.truncate(k);
    Ok(without(q, keys))
}

pub fn prune(q: &QuboMatrix, strategy: PruneStrategy, p: f64) -> Result<QuboMatrix> {
    match strategy {
        PruneStrategy::Fraction => prune_fraction(q, p),
        PruneStrategy::Threshold => prune_threshold(q, p),
        PruneStrategy::Random { seed } => prune_random(q, p, seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleStep {
    pub p: f64,
    pub qubo: QuboMatrix,
    pub deleted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneSchedule {
    pub strategy: PruneStrategy,
    pub steps: Vec<ScheduleStep>,
}

/// `p = k / steps` for `k = 0..=steps`, where `steps = 1 / granularity`.
pub fn schedule_fractions(granularity: f64) -> Result<Vec<f64>> {
    let bad = || Error::Parameter(format!("granularity {granularity} must divide 1 evenly"));
    if !(granularity > 0.0 && granularity <= 1.0) {
        return Err(bad());
    }
    let steps = libm::round(1.0 / granularity) as usize;
    if libm::fabs(steps as f64 * granularity - 1.0) > 1e-9 {
        return Err(bad());
    }
    Ok((0..=steps).map(|k| k as f64 / steps as f64).collect())
}

pub fn make_schedule(q: &QuboMatrix, strategy: PruneStrategy) -> PruneSchedule {
    make_schedule_with(q, strategy, DEFAULT_GRANULARITY).expect("default granularity is valid")
}

/// Each step is pruned from the original `q`, never from the previous step.
pub fn make_schedule_with(
    q: &QuboMatrix,
    strategy: PruneStrategy,
    granularity: f64,
) -> Result<PruneSchedule> {
    let total = q.len();
    let steps = schedule_fractions(granularity)?
        .into_iter()
        .map(|p| {
            let qubo = prune(q, strategy, p)?;
            let deleted = total - qubo.len();
            Ok(ScheduleStep { p, qubo, deleted })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PruneSchedule { strategy, steps })
}

/// Human-readable label such as `fraction@0.35`.
pub fn step_label(strategy: PruneStrategy, p: f64) -> String {
    format!("{}@{p:.2}", strategy.name())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{Assignment, ConstraintTag};
    use proptest::prelude::*;

    fn soft_chain(values: &[f64]) -> QuboMatrix {
        let mut q = QuboMatrix::new(values.len() + 1).unwrap();
        for (k, &v) in values.iter().enumerate() {
            q.set(k, k + 1, v, ConstraintTag::Soft).unwrap();
        }
        q.set(0, 0, -1.0, ConstraintTag::Hard).unwrap();
        q.set(1, 1, -1.0, ConstraintTag::Soft).unwrap();
        q
    }

    fn soft_values(q: &QuboMatrix) -> Vec<f64> {
        q.soft_offdiagonal().map(|(_, e)| e.value).collect()
    }

    #[test]
    fn fraction_deletes_smallest_first() {
        let q = soft_chain(&[3.0, 1.0, 4.0, 2.0]);
        assert_eq!(soft_values(&prune_fraction(&q, 0.5).unwrap()), alloc::vec![3.0, 4.0]);
        assert_eq!(prune_fraction(&q, 0.0).unwrap(), q);
        let all = prune_fraction(&q, 1.0).unwrap();
        assert!(soft_values(&all).is_empty());
        assert_eq!(all.get(0, 0).unwrap().value, -1.0);
        assert_eq!(all.get(1, 1).unwrap().value, -1.0);
    }

    #[test]
    fn fraction_ties_break_lexicographically() {
        let q = soft_chain(&[1.0, 1.0, 1.0, 1.0]);
        let pruned = prune_fraction(&q, 0.5).unwrap();
        let kept: Vec<_> = pruned.soft_offdiagonal().map(|(k, _)| k).collect();
        assert_eq!(kept, alloc::vec![(2, 3), (3, 4)]);
    }

    #[test]
    fn threshold_matches_footnote_arithmetic() {
        let q = soft_chain(&[2.0, 4.0, 8.0, 2.0]);
        assert_eq!(prune_threshold(&q, 0.20).unwrap(), q);
        for p in [0.25, 0.3, 0.35, 0.4, 0.45] {
            assert_eq!(soft_values(&prune_threshold(&q, p).unwrap()), alloc::vec![4.0, 8.0], "p={p}");
        }
        assert_eq!(soft_values(&prune_threshold(&q, 0.5).unwrap()), alloc::vec![8.0]);
        assert!(soft_values(&prune_threshold(&q, 1.0).unwrap()).is_empty());
    }

    #[test]
    fn threshold_without_soft_couplings_is_identity() {
        let mut q = QuboMatrix::new(2).unwrap();
        q.set(0, 1, 5.0, ConstraintTag::Hard).unwrap();
        assert_eq!(prune_threshold(&q, 0.7).unwrap(), q);
    }

    #[test]
    fn out_of_range_fraction_rejected() {
        let q = soft_chain(&[1.0]);
        assert!(prune_fraction(&q, -0.1).is_err());
        assert!(prune_threshold(&q, 1.1).is_err());
        assert!(prune_random(&q, f64::NAN, 1).is_err());
    }

    #[test]
    fn strategy_names() {
        assert_eq!(PruneStrategy::from_name("fraction", None), Ok(PruneStrategy::Fraction));
        assert_eq!(PruneStrategy::from_name("random", Some(4)), Ok(PruneStrategy::Random { seed: 4 }));
        assert!(PruneStrategy::from_name("random", None).is_err());
        assert!(PruneStrategy::from_name("greedy", None).is_err());
    }

    #[test]
    fn schedule_shape() {
        let q = soft_chain(&[1.0, 2.0, 3.0]);
        let s = make_schedule(&q, PruneStrategy::Fraction);
        assert_eq!(s.steps.len(), 21);
        assert_eq!(s.steps[0].qubo, q);
        assert_eq!(s.steps[7].p, 0.35);
        assert!(make_schedule_with(&q, PruneStrategy::Fraction, 0.3).is_err());
        assert_eq!(make_schedule_with(&q, PruneStrategy::Fraction, 0.25).unwrap().steps.len(), 5);
    }

    fn arb_qubo() -> impl Strategy<Value = QuboMatrix> {
        proptest::collection::vec((0usize..8, 0usize..8, -9i32..=9, any::<bool>()), 1..40).prop_map(
            |terms| {
                let mut q = QuboMatrix::new(8).unwrap();
                for (i, j, v, hard) in terms {
                    let tag = if hard { ConstraintTag::Hard } else { ConstraintTag::Soft };
                    let (i, j) = (i.min(j), i.max(j));
                    q.set(i, j, v as f64, tag).unwrap();
                }
                q
            },
        )
    }

    fn strategies(seed: u64) -> [PruneStrategy; 3] {
        [PruneStrategy::Fraction, PruneStrategy::Threshold, PruneStrategy::Random { seed }]
    }

    proptest! {
        #[test]
        fn never_touches_hard_or_diagonal(q in arb_qubo(), seed in any::<u64>(), k in 0usize..=20) {
            let p = k as f64 / 20.0;
            for s in strategies(seed) {
                let pruned = prune(&q, s, p).unwrap();
                for ((i, j), e) in q.entries() {
                    if i == j || e.tag == ConstraintTag::Hard {
                        prop_assert_eq!(pruned.get(i, j), Some(e));
                    }
                }
            }
        }

        #[test]
        fn schedules_are_monotone_and_converge(q in arb_qubo(), seed in any::<u64>()) {
            let finals: Vec<QuboMatrix> = strategies(seed).iter().map(|&s| {
                let sched = make_schedule(&q, s);
                for w in sched.steps.windows(2) {
                    assert!(w[0].deleted <= w[1].deleted);
                    assert!(w[0].qubo.offdiagonal_count() >= w[1].qubo.offdiagonal_count());
                }
                sched.steps.last().unwrap().qubo.clone()
            }).collect();
            prop_assert_eq!(&finals[0], &finals[1]);
            prop_assert_eq!(&finals[0], &finals[2]);
            prop_assert_eq!(finals[0].entry_stats().soft_offdiagonal, 0);
        }

        #[test]
        fn random_deletions_are_nested(q in arb_qubo(), seed in any::<u64>(), a in 0usize..=20, b in 0usize..=20) {
            let (lo, hi) = (a.min(b) as f64 / 20.0, a.max(b) as f64 / 20.0);
            let small = prune_random(&q, lo, seed).unwrap();
            let large = prune_random(&q, hi, seed).unwrap();
            for ((i, j), _) in q.entries() {
                if small.get(i, j).is_none() {
                    prop_assert!(large.get(i, j).is_none());
                }
            }
            prop_assert_eq!(prune_random(&q, hi, seed).unwrap(), large);
        }

        #[test]
        fn pruned_energy_bookkeeping(q in arb_qubo(), seed in any::<u64>(), k in 0usize..=20, idx in 0u64..256) {
            let a = Assignment::from_index(8, idx);
            for s in strategies(seed) {
                let pruned = prune(&q, s, k as f64 / 20.0).unwrap();
                let removed: f64 = q.entries()
                    .filter(|&((i, j), _)| pruned.get(i, j).is_none() && a.get(i) && a.get(j))
                    .map(|(_, e)| e.value)
                    .sum();
                prop_assert_eq!(pruned.energy(&a).unwrap(), q.energy(&a).unwrap() - removed);
            }
        }

        #[test]
        fn fraction_ignores_insertion_order(values in proptest::collection::vec(1i32..6, 1..10), k in 0usize..=20) {
            let forward = soft_chain(&values.iter().map(|&v| v as f64).collect::<Vec<_>>());
            let mut backward = QuboMatrix::new(values.len() + 1).unwrap();
            for ((i, j), e) in forward.entries().collect::<Vec<_>>().into_iter().rev() {
                backward.set(i, j, e.value, e.tag).unwrap();
            }
            let p = k as f64 / 20.0;
            prop_assert_eq!(prune_fraction(&forward, p).unwrap(), prune_fraction(&backward, p).unwrap());
        }
    }
}
