//! Exhaustive optima over the combinatorial solution spaces (subsets,
//! bipartitions, permutations, colourings). Used to supply `v_ref` for the
//! optimum-relative quality ratios; it never looks at a QUBO.

use alloc::vec::Vec;

use super::ProblemInstance;
use crate::error::{Error, Result};

/// Largest search space (in candidate solutions) the oracle will enumerate.
pub const SEARCH_CAP: u64 = 1 << 24;

fn check_space(size: Option<u64>, n: usize) -> Result<()> {
    match size {
        Some(s) if s <= SEARCH_CAP => Ok(()),
        _ => Err(Error::TooLarge { n, cap: SEARCH_CAP.trailing_zeros() as usize }),
    }
}

fn subsets(n: usize) -> Result<impl Iterator<Item = Vec<bool>>> {
    check_space(1u64.checked_shl(n as u32), n)?;
    Ok((0..1u64 << n).map(move |m| (0..n).map(|i| (m >> i) & 1 == 1).collect()))
}

/// Visits every permutation of `0..n` (Heap's algorithm).
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = alloc::vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn best(values: impl Iterator<Item = f64>, maximize: bool) -> f64 {
    values.fold(if maximize { f64::NEG_INFINITY } else { f64::INFINITY }, |b, v| {
        if maximize {
            b.max(v)
        } else {
            b.min(v)
        }
    })
}

/// Optimal value of the instance's quality metric `v`.
pub fn optimum(inst: &ProblemInstance) -> Result<f64> {
    Ok(match inst {
        ProblemInstance::ExactCover(p) => {
            let n = p.subsets.len();
            best(
                subsets(n)?.map(|s| {
                    let sel: Vec<usize> = (0..n).filter(|&i| s[i]).collect();
                    p.cover_errors(&sel).0 as f64
                }),
                false,
            )
        }
        ProblemInstance::MaxCut(p) => {
            best(subsets(p.graph.node_count())?.map(|s| p.cut_size(&s) as f64), true)
        }
        ProblemInstance::NumberPartitioning(p) => {
            best(subsets(p.numbers.len())?.map(|s| p.difference(&s) as f64), false)
        }
        ProblemInstance::Max3Sat(p) => {
            best(subsets(p.variables)?.map(|s| p.satisfied(&s) as f64), true)
        }
        ProblemInstance::GraphColoring(p) => {
            let n = p.graph.node_count();
            let space = (p.colors as u64).checked_pow(n as u32);
            check_space(space, n)?;
            let mut colors = alloc::vec![0usize; n];
            let mut b = f64::INFINITY;
            loop {
                b = b.min(p.conflicts(&colors) as f64);
                let mut k = 0;
                while k < n && colors[k] + 1 == p.colors {
                    colors[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
                colors[k] += 1;
            }
            b
        }
        ProblemInstance::Agap(p) => {
            if p.planes != p.gates {
                return Err(Error::Input(
                    "every gate must take exactly one plane, so planes must equal gates".into(),
                ));
            }
            check_space(factorial(p.planes), p.planes)?;
            let mut b = f64::INFINITY;
            for_each_permutation(p.planes, |perm| {
                b = b.min(p.assignment_cost(perm).expect("permutation of gates"));
            });
            b
        }
        ProblemInstance::Tsp(p) => {
            let n = p.cities();
            check_space(factorial(n - 1), n)?;
            let others: Vec<usize> = (0..n).filter(|&c| c != p.start).collect();
            let mut tour = alloc::vec![p.start; n];
            let mut b = f64::INFINITY;
            for_each_permutation(n - 1, |perm| {
                for (k, &idx) in perm.iter().enumerate() {
                    tour[k + 1] = others[idx];
                }
                b = b.min(p.tour_weight(&tour));
            });
            b
        }
        ProblemInstance::GraphIsomorphism(p) => {
            let n = p.nodes();
            check_space(factorial(n), n)?;
            let mut b = f64::INFINITY;
            for_each_permutation(n, |perm| b = b.min(p.mismatches(perm) as f64));
            b
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut seen = BTreeSet::new();
        for_each_permutation(4, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 24);
        let mut count = 0;
        for_each_permutation(0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
