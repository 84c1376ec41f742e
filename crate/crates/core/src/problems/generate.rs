//! Random desk-scale instances and size-parametric instance families.
//!
//! Families back the embeddable-size curves: each kind has a documented
//! size notion (number of subsets, nodes, numbers, planes, clauses or
//! cities) and a fixed density so that only the size varies.

use alloc::vec::Vec;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::Graph;

pub fn exact_cover<R: Rng>(
    rng: &mut R,
    universe: usize,
    subsets: usize,
    max_subset: usize,
    planted: bool,
) -> Result<(ProblemInstance, QuboMatrix)> {
    let max_subset = max_subset.clamp(1, universe.max(1));
    let elements: Vec<u64> = (1..=universe as u64).collect();
    let mut sets: Vec<Vec<u64>> = Vec::with_capacity(subsets);
    if planted {
        let mut shuffled = elements.clone();
        shuffled.shuffle(rng);
        let mut rest = &shuffled[..];
        while !rest.is_empty() && sets.len() < subsets {
            let take = rng.random_range(1..=max_subset).min(rest.len());
            sets.push(rest[..take].to_vec());
            rest = &rest[take..];
        }
    }
    while sets.len() < subsets {
        let size = rng.random_range(1..=max_subset);
        let pick: Vec<u64> = elements.choose_multiple(rng, size).copied().collect();
        sets.push(pick);
    }
    sets.shuffle(rng);
    build_exact_cover(&elements, &sets)
}

pub fn random_graph<R: Rng>(rng: &mut R, nodes: usize, edge_probability: f64) -> Graph {
    let mut g = Graph::empty(nodes);
    for u in 0..nodes {
        for v in u + 1..nodes {
            if rng.random_bool(edge_probability.clamp(0.0, 1.0)) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

pub fn max_cut<R: Rng>(rng: &mut R, nodes: usize, edge_probability: f64) -> Result<(ProblemInstance, QuboMatrix)> {
    build_max_cut(&random_graph(rng, nodes, edge_probability))
}

pub fn number_partitioning<R: Rng>(rng: &mut R, count: usize, max_value: u64) -> Result<(ProblemInstance, QuboMatrix)> {
    let numbers: Vec<u64> = (0..count).map(|_| rng.random_range(1..=max_value.max(1))).collect();
    build_number_partitioning(&numbers, 1.0)
}

/// Gates sit on a line; transfers between planes are sparse.
pub fn agap<R: Rng>(rng: &mut R, planes: usize, gates: usize) -> Result<(ProblemInstance, QuboMatrix)> {
    let (n, m) = (planes, gates);
    let mut passengers = alloc::vec![alloc::vec![0.0; n + 2]; n + 2];
    for i in 0..n + 2 {
        for j in 0..n + 2 {
            let real_pair = (1..=n).contains(&i) && (1..=n).contains(&j) && i != j;
            let boarding = i == 0 && (1..=n).contains(&j);
            let leaving = (1..=n).contains(&i) && j == n + 1;
            if (real_pair && rng.random_bool(0.5)) || boarding || leaving {
                passengers[i][j] = rng.random_range(1..=9) as f64;
            }
        }
    }
    // entrance at 0, gates at 1..=m, exit past the last gate
    let position = |k: usize| k as f64;
    let mut distances = alloc::vec![alloc::vec![0.0; m + 2]; m + 2];
    for (k, row) in distances.iter_mut().enumerate() {
        for (l, d) in row.iter_mut().enumerate() {
            *d = libm::fabs(position(k) - position(l));
        }
    }
    let costs: Vec<Vec<f64>> =
        (0..n).map(|_| (0..m).map(|_| rng.random_range(0..=2) as f64).collect()).collect();
    build_agap(n, m, passengers, distances, costs, None)
}

pub fn max3sat<R: Rng>(rng: &mut R, variables: usize, clauses: usize) -> Result<(ProblemInstance, QuboMatrix)> {
    let vars: Vec<i64> = (1..=variables as i64).collect();
    let formula: Vec<Vec<i64>> = (0..clauses)
        .map(|_| {
            let k = variables.min(3);
            let mut lits: Vec<i64> = vars.choose_multiple(rng, k).copied().collect();
            while lits.len() < 3 {
                lits.push(lits[0]);
            }
            lits.into_iter().map(|v| if rng.random_bool(0.5) { -v } else { v }).collect()
        })
        .collect();
    build_max3sat(variables, &formula)
}

/// Cities on an integer grid, rounded Euclidean distances (at least 1).
pub fn tsp<R: Rng>(rng: &mut R, cities: usize, grid: u32) -> Result<(ProblemInstance, QuboMatrix)> {
    let pts: Vec<(f64, f64)> = (0..cities)
        .map(|_| (rng.random_range(0..=grid) as f64, rng.random_range(0..=grid) as f64))
        .collect();
    let weights = (0..cities)
        .map(|u| {
            (0..cities)
                .map(|v| {
                    if u == v {
                        0.0
                    } else {
                        let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
                        libm::round(libm::sqrt(dx * dx + dy * dy)).max(1.0)
                    }
                })
                .collect()
        })
        .collect();
    build_tsp(weights, 0, None)
}

pub fn graph_coloring<R: Rng>(
    rng: &mut R,
    nodes: usize,
    edge_probability: f64,
    colors: usize,
) -> Result<(ProblemInstance, QuboMatrix)> {
    build_graph_coloring(&random_graph(rng, nodes, edge_probability), colors, None)
}

/// `G2` is a random relabelling of `G1` with `flips` edge toggles applied.
pub fn graph_isomorphism<R: Rng>(
    rng: &mut R,
    nodes: usize,
    edge_probability: f64,
    flips: usize,
) -> Result<(ProblemInstance, QuboMatrix)> {
    let g1 = random_graph(rng, nodes, edge_probability);
    let mut relabel: Vec<usize> = (0..nodes).collect();
    relabel.shuffle(rng);
    let mut edges: alloc::collections::BTreeSet<(usize, usize)> = g1
        .edges()
        .map(|(u, v)| {
            let (a, b) = (relabel[u], relabel[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    if nodes >= 2 {
        for _ in 0..flips {
            let u = rng.random_range(0..nodes);
            let v = (u + rng.random_range(1..nodes)) % nodes;
            let key = (u.min(v), u.max(v));
            if !edges.remove(&key) {
                edges.insert(key);
            }
        }
    }
    let e2: Vec<(usize, usize)> = edges.into_iter().collect();
    let g2 = Graph::from_edges(nodes, &e2)?;
    build_graph_isomorphism(&g1, &g2, None)
}

/// Seed of the shipped desk instances.
pub const DESK_SEED: u64 = 1;

/// Desk-scale instance (at most 200 variables, exact references computable):
///
/// | kind | shape | variables |
/// |------|-------|-----------|
/// | exact-cover | `|U| = 12`, `|V| = 20`, subsets of 1-4 elements, planted cover | 20 |
/// | max-cut | 20 nodes, edge probability 0.25 | 20 |
/// | number-partitioning | 20 numbers in 1-100 | 20 |
/// | agap | 4 planes, 4 gates | 16 |
/// | max3sat | 8 variables, 34 clauses | 102 |
/// | tsp | 6 cities on a 100×100 grid | 36 |
/// | graph-coloring | 12 nodes, edge probability 0.3, 3 colours | 36 |
/// | graph-isomorphism | 6 nodes, edge probability 0.5, isomorphic pair | 36 |
pub fn desk_instance(kind: ProblemKind, seed: u64) -> Result<(ProblemInstance, QuboMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ProblemKind::ExactCover => exact_cover(&mut rng, 12, 20, 4, true),
        ProblemKind::MaxCut => max_cut(&mut rng, 20, 0.25),
        ProblemKind::NumberPartitioning => number_partitioning(&mut rng, 20, 100),
        ProblemKind::Agap => agap(&mut rng, 4, 4),
        ProblemKind::Max3Sat => max3sat(&mut rng, 8, 34),
        ProblemKind::Tsp => tsp(&mut rng, 6, 100),
        ProblemKind::GraphColoring => graph_coloring(&mut rng, 12, 0.3, 3),
        ProblemKind::GraphIsomorphism => graph_isomorphism(&mut rng, 6, 0.5, 0),
    }
}

/// Size-parametric generator used for embeddable-size curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Family {
    pub kind: ProblemKind,
}

impl Family {
    pub fn new(kind: ProblemKind) -> Self {
        Family { kind }
    }

    /// Smallest size the family can generate.
    pub fn min_size(&self) -> usize {
        match self.kind {
            ProblemKind::Tsp => 2,
            _ => 1,
        }
    }

    /// Logical variable count at `size`.
    pub fn variables(&self, size: usize) -> usize {
        match self.kind {
            ProblemKind::ExactCover | ProblemKind::MaxCut | ProblemKind::NumberPartitioning => size,
            ProblemKind::Max3Sat => 3 * size,
            ProblemKind::GraphColoring => 3 * size,
            ProblemKind::Agap | ProblemKind::Tsp | ProblemKind::GraphIsomorphism => size * size,
        }
    }

    /// Size notion: subsets (EC, `|U| ≈ 0.6|V|`, subsets of 1-4 elements with
    /// a planted cover), nodes (Max-Cut, average degree 4; GC with 3 colours
    /// and GI, average degree 3), numbers (NP, values 1-100), planes = gates
    /// (AGAP), clauses (Max-3SAT, `m/n ≈ 4.2`), cities (TSP, 100×100 grid).
    pub fn instance(&self, size: usize, seed: u64) -> Result<(ProblemInstance, QuboMatrix)> {
        let size = size.max(self.min_size());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (size as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let degree_p = |deg: f64| if size > 1 { (deg / (size - 1) as f64).min(1.0) } else { 0.0 };
        match self.kind {
            ProblemKind::ExactCover => exact_cover(&mut rng, (size * 3).div_ceil(5), size, 4, true),
            ProblemKind::MaxCut => max_cut(&mut rng, size, degree_p(4.0)),
            ProblemKind::NumberPartitioning => number_partitioning(&mut rng, size, 100),
            ProblemKind::Agap => agap(&mut rng, size, size),
            ProblemKind::Max3Sat => {
                let vars = ((size as f64 / 4.2) as usize).max(3);
                max3sat(&mut rng, vars, size)
            }
            ProblemKind::Tsp => tsp(&mut rng, size, 100),
            ProblemKind::GraphColoring => graph_coloring(&mut rng, size, degree_p(3.0), 3),
            ProblemKind::GraphIsomorphism => graph_isomorphism(&mut rng, size, degree_p(3.0), 0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_variable_counts_match_instances() {
        for kind in ProblemKind::ALL {
            let fam = Family::new(kind);
            for size in [2, 3, 5] {
                let (inst, q) = fam.instance(size, 7).unwrap();
                assert_eq!(inst.num_variables(), fam.variables(size), "{kind}");
                assert_eq!(q.num_variables(), fam.variables(size), "{kind}");
            }
        }
    }

    #[test]
    fn families_are_deterministic() {
        for kind in ProblemKind::ALL {
            let fam = Family::new(kind);
            assert_eq!(fam.instance(4, 11).unwrap(), fam.instance(4, 11).unwrap());
        }
    }

    #[test]
    fn desk_instances_stay_small() {
        for kind in ProblemKind::ALL {
            let (inst, q) = desk_instance(kind, DESK_SEED).unwrap();
            assert!(q.num_variables() <= 200, "{kind}");
            assert!(q.soft_offdiagonal().count() > 0, "{kind}");
            assert!(optimum(&inst).is_ok(), "{kind}");
        }
    }

    #[test]
    fn planted_cover_exists() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (inst, _) = exact_cover(&mut rng, 12, 20, 4, true).unwrap();
        assert_eq!(optimum(&inst).unwrap(), 0.0);
    }
}
