use alloc::format;
use alloc::vec::Vec;

use super::{
    check_positive, input_error, permutation, DecodedSolution, Penalty, ProblemInstance,
    Solution, Terms,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

/// `x_{v,i}` (node `v` of `G1` maps to node `i` of `G2`) has index `v·N + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphIsomorphism {
    pub g1: Graph,
    pub g2: Graph,
    pub penalty: Penalty,
}

/// Two bijection penalties (hard) plus one soft `B` coupling for every pair
/// of placements that maps an edge onto a non-edge or a non-edge onto an edge.
///
/// Defaults: `B = 1`, `A = 1 + (|E1| + |E2|)·B`. Requires
/// `A > B·(max_degree(G1) + max_degree(G2))`.
pub fn build_graph_isomorphism(
    g1: &Graph,
    g2: &Graph,
    penalty: Option<Penalty>,
) -> Result<(ProblemInstance, QuboMatrix)> {
    if g1.node_count() != g2.node_count() {
        return Err(input_error(format!(
            "graphs differ in size: {} vs {} nodes",
            g1.node_count(),
            g2.node_count()
        )));
    }
    if g1.node_count() == 0 {
        return Err(input_error("graph isomorphism needs at least one node"));
    }
    let edges = (g1.edge_count() + g2.edge_count()) as f64;
    let penalty = penalty.unwrap_or_else(|| Penalty::new(1.0 + edges, 1.0));
    check_positive("A", penalty.a)?;
    check_positive("B", penalty.b)?;
    let degree_bound = penalty.b * (g1.max_degree() + g2.max_degree()) as f64;
    if penalty.a <= degree_bound {
        return Err(Error::Parameter(format!(
            "isomorphism penalty A = {} must exceed B·(Δ1 + Δ2) = {degree_bound}",
            penalty.a
        )));
    }
    let p = GraphIsomorphism { g1: g1.clone(), g2: g2.clone(), penalty };
    let q = p.qubo()?;
    Ok((ProblemInstance::GraphIsomorphism(p), q))
}

impl GraphIsomorphism {
    pub fn nodes(&self) -> usize {
        self.g1.node_count()
    }

    pub fn var(&self, v: usize, i: usize) -> usize {
        v * self.nodes() + i
    }

    /// Placement pairs `((u, i), (v, j))`, `u < v`, `i ≠ j`, whose edge status disagrees.
    fn mismatched_pairs(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let n = self.nodes();
        (0..n).flat_map(move |u| {
            (u + 1..n).flat_map(move |v| {
                (0..n).flat_map(move |i| {
                    (0..n)
                        .filter(move |&j| j != i && self.g1.has_edge(u, v) != self.g2.has_edge(i, j))
                        .map(move |j| (u, i, v, j))
                })
            })
        })
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let n = self.nodes();
        let mut t = Terms::default();
        for v in 0..n {
            let row: Vec<usize> = (0..n).map(|i| self.var(v, i)).collect();
            t.one_hot(&row, self.penalty.a, ConstraintTag::Hard);
        }
        for i in 0..n {
            let col: Vec<usize> = (0..n).map(|v| self.var(v, i)).collect();
            t.one_hot(&col, self.penalty.a, ConstraintTag::Hard);
        }
        for (u, i, v, j) in self.mismatched_pairs() {
            t.add(self.var(u, i), self.var(v, j), self.penalty.b, ConstraintTag::Soft);
        }
        t.into_qubo(n * n)
    }

    /// Edge-status disagreements under a bijection `mapping`.
    pub fn mismatches(&self, mapping: &[usize]) -> usize {
        let n = self.nodes();
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.g1.has_edge(u, v) != self.g2.has_edge(mapping[u], mapping[v]))
            .count()
    }

    pub fn raw_mismatches(&self, a: &Assignment) -> usize {
        self.mismatched_pairs()
            .filter(|&(u, i, v, j)| a.get(self.var(u, i)) && a.get(self.var(v, j)))
            .count()
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let n = self.nodes();
        let mapping = permutation(a, n, n);
        let valid = mapping.is_some();
        let mismatches = self.raw_mismatches(a);
        DecodedSolution { solution: Solution::Mapping { mapping, mismatches }, valid }
    }
}
