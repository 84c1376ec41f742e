//! Small random instances and exhaustive oracles that work from the raw
//! instance data only. Shared by the core integration tests and the harness
//! acceptance suite.
#![allow(dead_code)]

use qprune_core::problems::{
    build_agap, build_exact_cover, build_graph_coloring, build_graph_isomorphism, build_max3sat,
    build_max_cut, build_number_partitioning, build_tsp, ProblemInstance, ProblemKind, Solution,
};
use qprune_core::{Graph, QuboMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn matrix(rng: &mut impl Rng, rows: usize, cols: usize, max: u32) -> Vec<Vec<f64>> {
    (0..rows).map(|_| (0..cols).map(|_| f64::from(rng.random_range(0..=max))).collect()).collect()
}

/// A random instance of `kind` with at most 16 variables.
pub fn small_instance(kind: ProblemKind, rng: &mut impl Rng) -> (ProblemInstance, QuboMatrix) {
    match kind {
        ProblemKind::ExactCover => {
            let u = rng.random_range(3..=6u64);
            let universe: Vec<u64> = (0..u).collect();
            let subsets: Vec<Vec<u64>> = (0..rng.random_range(4..=12))
                .map(|_| {
                    let k = rng.random_range(1..=3);
                    (0..k).map(|_| rng.random_range(0..u)).collect()
                })
                .collect();
            build_exact_cover(&universe, &subsets).unwrap()
        }
        ProblemKind::MaxCut => {
            let n = rng.random_range(3..=12);
            build_max_cut(&random_graph(rng, n, 0.5)).unwrap()
        }
        ProblemKind::NumberPartitioning => {
            let numbers: Vec<u64> = (0..rng.random_range(2..=12)).map(|_| rng.random_range(1..=40)).collect();
            build_number_partitioning(&numbers, f64::from(rng.random_range(1..=3u32))).unwrap()
        }
        ProblemKind::Agap => {
            let n = rng.random_range(2..=4);
            let (pass, dist, cost) = (matrix(rng, n + 2, n + 2, 5), matrix(rng, n + 2, n + 2, 9), matrix(rng, n, n, 5));
            build_agap(n, n, pass, dist, cost, None).unwrap()
        }
        ProblemKind::Max3Sat => {
            let vars = rng.random_range(2..=5usize);
            let clauses: Vec<Vec<i64>> = (0..rng.random_range(1..=5))
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.random_range(1..=vars as i64);
                            if rng.random_bool(0.5) { -v } else { v }
                        })
                        .collect()
                })
                .collect();
            build_max3sat(vars, &clauses).unwrap()
        }
        ProblemKind::Tsp => {
            let n = rng.random_range(2..=4);
            let weights: Vec<Vec<f64>> = (0..n)
                .map(|u| (0..n).map(|v| if u == v { 0.0 } else { f64::from(rng.random_range(1..=9u32)) }).collect())
                .collect();
            build_tsp(weights, rng.random_range(0..n), None).unwrap()
        }
        ProblemKind::GraphColoring => {
            let (n, k) = [(5, 3), (4, 4), (8, 2), (6, 2), (7, 2), (4, 3), (5, 2)][rng.random_range(0..7)];
            build_graph_coloring(&random_graph(rng, n, 0.5), k, None).unwrap()
        }
        ProblemKind::GraphIsomorphism => {
            let n = rng.random_range(2..=4);
            let g1 = random_graph(rng, n, 0.5);
            let g2 = if rng.random_bool(0.5) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(rng);
                let edges: Vec<(usize, usize)> = g1.edges().map(|(u, v)| (perm[u], perm[v])).collect();
                Graph::from_edges(n, &edges).unwrap()
            } else {
                random_graph(rng, n, 0.5)
            };
            build_graph_isomorphism(&g1, &g2, None).unwrap()
        }
    }
}

fn one_hot_violation(bits: &[bool], vars: impl Iterator<Item = usize>) -> f64 {
    let s: i64 = vars.map(|v| i64::from(bits[v])).sum();
    ((1 - s) * (1 - s)) as f64
}

fn cover_counts(universe: &[u64], subsets: &[Vec<u64>], chosen: impl Fn(usize) -> bool) -> Vec<i64> {
    universe
        .iter()
        .map(|u| subsets.iter().enumerate().filter(|(i, s)| chosen(*i) && s.contains(u)).count() as i64)
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn agap_cost(p: &qprune_core::problems::Agap, placed: &[(usize, usize)]) -> f64 {
    let (n, m) = (p.planes, p.gates);
    let mut total = 0.0;
    for &(i, k) in placed {
        total += p.passengers[0][i + 1] * p.distances[0][k + 1] + p.passengers[i + 1][n + 1] * p.distances[k + 1][m + 1];
        for &(j, l) in placed {
            total += p.passengers[i + 1][j + 1] * p.distances[k + 1][l + 1] + p.costs[i][k];
        }
    }
    total
}

fn tour_weight(w: &[Vec<f64>], tour: &[usize]) -> f64 {
    (0..tour.len()).map(|j| w[tour[j]][tour[(j + 1) % tour.len()]]).sum()
}

fn gi_mismatches(g1: &Graph, g2: &Graph, mapping: &[usize]) -> usize {
    let n = mapping.len();
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            if g1.has_edge(u, v) != g2.has_edge(mapping[u], mapping[v]) {
                count += 1;
            }
        }
    }
    count
}

/// Penalised objective of arbitrary bits, written out term by term from the
/// instance data. The QUBO energy must equal this exactly.
pub fn penalized_objective(inst: &ProblemInstance, bits: &[bool]) -> f64 {
    match inst {
        ProblemInstance::ExactCover(p) => cover_counts(&p.universe, &p.subsets, |i| bits[i])
            .iter()
            .map(|c| ((1 - c) * (1 - c)) as f64)
            .sum(),
        ProblemInstance::MaxCut(p) => -(p.graph.edges().filter(|&(u, v)| bits[u] != bits[v]).count() as f64),
        ProblemInstance::NumberPartitioning(p) => {
            let d: i64 = p.numbers.iter().zip(bits).map(|(&x, &b)| if b { x as i64 } else { -(x as i64) }).sum();
            p.weight * (d * d) as f64
        }
        ProblemInstance::Agap(p) => {
            let (n, m) = (p.planes, p.gates);
            let placed: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..m).map(move |k| (i, k))).filter(|&(i, k)| bits[i * m + k]).collect();
            let rows: f64 = (0..n).map(|i| one_hot_violation(bits, (0..m).map(|k| i * m + k))).sum();
            let cols: f64 = (0..m).map(|k| one_hot_violation(bits, (0..n).map(|i| i * m + k))).sum();
            agap_cost(p, &placed) + p.penalty.a * rows + p.penalty.b * cols
        }
        ProblemInstance::Max3Sat(p) => {
            let lits: Vec<(usize, usize, bool)> = p
                .clauses
                .iter()
                .enumerate()
                .flat_map(|(c, cl)| cl.iter().enumerate().map(move |(t, l)| (3 * c + t, l.var, l.negated)))
                .collect();
            let on: Vec<&(usize, usize, bool)> = lits.iter().filter(|l| bits[l.0]).collect();
            let mut e = -(on.len() as f64);
            for (k, a) in on.iter().enumerate() {
                for b in &on[k + 1..] {
                    if a.1 == b.1 && a.2 != b.2 {
                        e += 3.0;
                    } else if a.0 / 3 == b.0 / 3 {
                        e += 2.0;
                    }
                }
            }
            e
        }
        ProblemInstance::Tsp(p) => {
            let n = p.cities();
            let mut w = 0.0;
            for j in 0..n {
                for u in 0..n {
                    for v in 0..n {
                        if u != v && bits[u * n + j] && bits[v * n + (j + 1) % n] {
                            w += p.weights[u][v];
                        }
                    }
                }
            }
            let rows: f64 = (0..n).map(|v| one_hot_violation(bits, (0..n).map(|j| v * n + j))).sum();
            let cols: f64 = (0..n).map(|j| one_hot_violation(bits, (0..n).map(|v| v * n + j))).sum();
            p.penalty.b * w + p.penalty.a * (rows + cols)
        }
        ProblemInstance::GraphColoring(p) => {
            let k = p.colors;
            let clashes: usize =
                p.graph.edges().map(|(u, v)| (0..k).filter(|&i| bits[u * k + i] && bits[v * k + i]).count()).sum();
            let rows: f64 =
                (0..p.graph.node_count()).map(|v| one_hot_violation(bits, (0..k).map(|i| v * k + i))).sum();
            p.penalty.b * clashes as f64 + p.penalty.a * rows
        }
        ProblemInstance::GraphIsomorphism(p) => {
            let n = p.g1.node_count();
            let placed: Vec<(usize, usize)> =
                (0..n).flat_map(|v| (0..n).map(move |i| (v, i))).filter(|&(v, i)| bits[v * n + i]).collect();
            let mut clashes = 0;
            for &(u, i) in &placed {
                for &(v, j) in &placed {
                    if u < v && i != j && p.g1.has_edge(u, v) != p.g2.has_edge(i, j) {
                        clashes += 1;
                    }
                }
            }
            let rows: f64 = (0..n).map(|v| one_hot_violation(bits, (0..n).map(|i| v * n + i))).sum();
            let cols: f64 = (0..n).map(|i| one_hot_violation(bits, (0..n).map(|v| v * n + i))).sum();
            p.penalty.b * clashes as f64 + p.penalty.a * (rows + cols)
        }
    }
}

/// Optimal combinatorial objective by enumerating the solution space
/// (subsets, bipartitions, gate maps, truth tables, tours, colourings,
/// bijections). Exact cover is scored by `Σ_u (1 - cover(u))²`.
pub fn exhaustive_optimum(inst: &ProblemInstance) -> f64 {
    match inst {
        ProblemInstance::ExactCover(p) => (0u64..1 << p.subsets.len())
            .map(|mask| {
                cover_counts(&p.universe, &p.subsets, |i| mask >> i & 1 == 1)
                    .iter()
                    .map(|c| ((1 - c) * (1 - c)) as f64)
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min),
        ProblemInstance::MaxCut(p) => {
            let n = p.graph.node_count();
            (0u64..1 << n)
                .map(|mask| p.graph.edges().filter(|&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count() as f64)
                .fold(0.0, f64::max)
        }
        ProblemInstance::NumberPartitioning(p) => {
            let total: u64 = p.numbers.iter().sum();
            (0u64..1 << p.numbers.len())
                .map(|mask| {
                    let s: u64 = p.numbers.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).sum();
                    (2 * s).abs_diff(total) as f64
                })
                .fold(f64::INFINITY, f64::min)
        }
        ProblemInstance::Agap(p) => permutations(p.planes)
            .iter()
            .map(|perm| agap_cost(p, &perm.iter().copied().enumerate().collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min),
        ProblemInstance::Max3Sat(p) => (0u64..1 << p.variables)
            .map(|mask| {
                p.clauses
                    .iter()
                    .filter(|c| c.iter().any(|l| (mask >> l.var & 1 == 1) != l.negated))
                    .count() as f64
            })
            .fold(0.0, f64::max),
        ProblemInstance::Tsp(p) => permutations(p.cities())
            .iter()
            .map(|t| tour_weight(&p.weights, t))
            .fold(f64::INFINITY, f64::min),
        ProblemInstance::GraphColoring(p) => {
            let (n, k) = (p.graph.node_count(), p.colors);
            (0..k.pow(n as u32))
                .map(|mut code| {
                    let colors: Vec<usize> = (0..n)
                        .map(|_| {
                            let c = code % k;
                            code /= k;
                            c
                        })
                        .collect();
                    p.graph.edges().filter(|&(u, v)| colors[u] == colors[v]).count() as f64
                })
                .fold(f64::INFINITY, f64::min)
        }
        ProblemInstance::GraphIsomorphism(p) => permutations(p.g1.node_count())
            .iter()
            .map(|m| gi_mismatches(&p.g1, &p.g2, m) as f64)
            .fold(f64::INFINITY, f64::min),
    }
}

/// Objective of a decoded solution on the same scale as
/// [`exhaustive_optimum`], or `None` if the solution is not a valid
/// combinatorial object.
pub fn decoded_objective(inst: &ProblemInstance, solution: &Solution) -> Option<f64> {
    Some(match (inst, solution) {
        (ProblemInstance::ExactCover(p), Solution::Cover { selected, .. }) => cover_counts(&p.universe, &p.subsets, |i| {
            selected.contains(&i)
        })
        .iter()
        .map(|c| ((1 - c) * (1 - c)) as f64)
        .sum(),
        (ProblemInstance::MaxCut(p), Solution::Cut { side, .. }) => {
            p.graph.edges().filter(|&(u, v)| side[u] != side[v]).count() as f64
        }
        (ProblemInstance::NumberPartitioning(p), Solution::Partition { side, .. }) => {
            let d: i64 = p.numbers.iter().zip(side).map(|(&x, &b)| if b { x as i64 } else { -(x as i64) }).sum();
            d.unsigned_abs() as f64
        }
        (ProblemInstance::Agap(p), Solution::Gates { gate_of, .. }) => {
            let placed: Vec<(usize, usize)> =
                gate_of.iter().enumerate().map(|(i, g)| g.map(|g| (i, g))).collect::<Option<_>>()?;
            let mut gates: Vec<usize> = placed.iter().map(|x| x.1).collect();
            gates.sort_unstable();
            gates.dedup();
            if gates.len() != p.gates {
                return None;
            }
            agap_cost(p, &placed)
        }
        (ProblemInstance::Max3Sat(p), Solution::Truth { values, .. }) => {
            p.clauses.iter().filter(|c| c.iter().any(|l| values[l.var] != l.negated)).count() as f64
        }
        (ProblemInstance::Tsp(p), Solution::Tour { tour, .. }) => {
            let tour = tour.as_ref()?;
            if tour[0] != p.start {
                return None;
            }
            tour_weight(&p.weights, tour)
        }
        (ProblemInstance::GraphColoring(p), Solution::Coloring { colors, .. }) => {
            let colors: Vec<usize> = colors.iter().copied().collect::<Option<_>>()?;
            p.graph.edges().filter(|&(u, v)| colors[u] == colors[v]).count() as f64
        }
        (ProblemInstance::GraphIsomorphism(p), Solution::Mapping { mapping, .. }) => {
            gi_mismatches(&p.g1, &p.g2, mapping.as_ref()?) as f64
        }
        _ => return None,
    })
}
