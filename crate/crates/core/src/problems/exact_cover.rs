use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::{input_error, DecodedSolution, ProblemInstance, Solution, Terms};
use crate::error::Result;
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

/// Universe `U` and candidate subsets `V_i`, both deduplicated and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCover {
    pub universe: Vec<u64>,
    pub subsets: Vec<Vec<u64>>,
}

/// `Σ_u (1 - Σ_{i: u∈V_i} x_i)²` expands to
/// `|U| - Σ_i |V_i| x_i + Σ_{i<j} 2|V_i ∩ V_j| x_i x_j`.
///
/// The diagonal is tagged hard and the overlap couplings soft, so pruning
/// removes only the information about which subsets share elements.
pub fn build_exact_cover(
    universe: &[u64],
    subsets: &[Vec<u64>],
) -> Result<(ProblemInstance, QuboMatrix)> {
    let universe: BTreeSet<u64> = universe.iter().copied().collect();
    if universe.is_empty() {
        return Err(input_error("exact cover universe is empty"));
    }
    if subsets.is_empty() {
        return Err(input_error("exact cover needs at least one subset"));
    }
    let mut canon = Vec::with_capacity(subsets.len());
    for (i, s) in subsets.iter().enumerate() {
        let set: BTreeSet<u64> = s.iter().copied().collect();
        if let Some(bad) = set.iter().find(|u| !universe.contains(u)) {
            return Err(input_error(format!("subset {i} contains {bad}, which is not in U")));
        }
        canon.push(set.into_iter().collect::<Vec<_>>());
    }
    let p = ExactCover { universe: universe.into_iter().collect(), subsets: canon };
    let q = p.qubo()?;
    Ok((ProblemInstance::ExactCover(p), q))
}

impl ExactCover {
    fn containing(&self) -> BTreeMap<u64, Vec<usize>> {
        let mut map: BTreeMap<u64, Vec<usize>> =
            self.universe.iter().map(|&u| (u, Vec::new())).collect();
        for (i, s) in self.subsets.iter().enumerate() {
            for u in s {
                map.get_mut(u).expect("validated subset").push(i);
            }
        }
        map
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let mut t = Terms::default();
        for owners in self.containing().values() {
            t.add_offset(1.0);
            for (k, &i) in owners.iter().enumerate() {
                t.add(i, i, -1.0, ConstraintTag::Hard);
                for &j in &owners[k + 1..] {
                    t.add(i, j, 2.0, ConstraintTag::Soft);
                }
            }
        }
        t.into_qubo(self.subsets.len())
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let selected: Vec<usize> = a.ones().collect();
        let (errors, squared_deviation) = self.cover_errors(&selected);
        DecodedSolution {
            solution: Solution::Cover { selected, errors, squared_deviation },
            valid: true,
        }
    }

    /// Elements not covered exactly once, and `Σ_u (1 - cover(u))²`.
    pub fn cover_errors(&self, selected: &[usize]) -> (usize, u64) {
        let mut count: BTreeMap<u64, i64> = self.universe.iter().map(|&u| (u, 0)).collect();
        for &i in selected {
            for u in &self.subsets[i] {
                *count.get_mut(u).expect("validated subset") += 1;
            }
        }
        count.values().fold((0, 0), |(errs, sq), &c| {
            (errs + usize::from(c != 1), sq + ((1 - c) * (1 - c)) as u64)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::decode;

    fn small() -> (ProblemInstance, QuboMatrix) {
        build_exact_cover(&[1, 2], &[alloc::vec![1], alloc::vec![2], alloc::vec![1, 2]]).unwrap()
    }

    #[test]
    fn energy_counts_squared_cover_errors() {
        let (_, q) = small();
        let e = |bits: &[u8]| q.energy(&Assignment::from(bits)).unwrap();
        assert_eq!(e(&[0, 0, 1]), 0.0);
        assert_eq!(e(&[0, 0, 0]), 2.0);
        assert_eq!(e(&[1, 0, 1]), 1.0);
        assert_eq!(q.offset(), 2.0);
    }

    #[test]
    fn tags_split_diagonal_and_overlaps() {
        let (_, q) = small();
        for ((i, j), e) in q.entries() {
            let expected = if i == j { ConstraintTag::Hard } else { ConstraintTag::Soft };
            assert_eq!(e.tag, expected);
        }
        assert_eq!(q.get(0, 2).unwrap().value, 2.0);
        assert_eq!(q.get(0, 1), None);
    }

    #[test]
    fn subset_outside_universe_rejected() {
        assert!(build_exact_cover(&[1, 2], &[alloc::vec![3]]).is_err());
        assert!(build_exact_cover(&[], &[alloc::vec![]]).is_err());
    }

    #[test]
    fn decode_is_always_valid() {
        let (inst, _) = small();
        let d = decode(&inst, &Assignment::from(&[1u8, 1, 1][..])).unwrap();
        assert!(d.valid);
        assert_eq!(
            d.solution,
            Solution::Cover { selected: alloc::vec![0, 1, 2], errors: 2, squared_deviation: 2 }
        );
    }
}
