use alloc::format;
use alloc::vec::Vec;

use super::{
    check_positive, chosen, input_error, DecodedSolution, Penalty, ProblemInstance, Solution,
    Terms,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

/// `x_{v,i}` (node `v` has colour `i`) has index `v·colors + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphColoring {
    pub graph: Graph,
    pub colors: usize,
    pub penalty: Penalty,
}

/// Defaults: `B = 1`, `A = 1 + |E|·B`. Requires `A > B·max_degree`.
pub fn build_graph_coloring(
    graph: &Graph,
    colors: usize,
    penalty: Option<Penalty>,
) -> Result<(ProblemInstance, QuboMatrix)> {
    if colors == 0 {
        return Err(input_error("graph coloring needs at least one color"));
    }
    if graph.node_count() == 0 {
        return Err(input_error("graph coloring needs at least one node"));
    }
    let penalty =
        penalty.unwrap_or_else(|| Penalty::new(1.0 + graph.edge_count() as f64, 1.0));
    check_positive("A", penalty.a)?;
    check_positive("B", penalty.b)?;
    if penalty.a <= penalty.b * graph.max_degree() as f64 {
        return Err(Error::Parameter(format!(
            "coloring penalty A = {} must exceed B·max_degree = {}",
            penalty.a,
            penalty.b * graph.max_degree() as f64
        )));
    }
    let p = GraphColoring { graph: graph.clone(), colors, penalty };
    let q = p.qubo()?;
    Ok((ProblemInstance::GraphColoring(p), q))
}

impl GraphColoring {
    pub fn var(&self, node: usize, color: usize) -> usize {
        node * self.colors + color
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let mut t = Terms::default();
        for v in 0..self.graph.node_count() {
            let row: Vec<usize> = (0..self.colors).map(|i| self.var(v, i)).collect();
            t.one_hot(&row, self.penalty.a, ConstraintTag::Hard);
        }
        for (u, v) in self.graph.edges() {
            for i in 0..self.colors {
                t.add(self.var(u, i), self.var(v, i), self.penalty.b, ConstraintTag::Soft);
            }
        }
        t.into_qubo(self.graph.node_count() * self.colors)
    }

    /// `Σ_{uv∈E} Σ_i x_{u,i} x_{v,i}` on arbitrary bits.
    pub fn raw_conflicts(&self, a: &Assignment) -> usize {
        self.graph
            .edges()
            .map(|(u, v)| {
                (0..self.colors).filter(|&i| a.get(self.var(u, i)) && a.get(self.var(v, i))).count()
            })
            .sum()
    }

    pub fn conflicts(&self, colors: &[usize]) -> usize {
        self.graph.edges().filter(|&(u, v)| colors[u] == colors[v]).count()
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let colors: Vec<Option<usize>> = (0..self.graph.node_count())
            .map(|v| {
                let picks = chosen(a, (0..self.colors).map(|i| self.var(v, i)));
                (picks.len() == 1).then(|| picks[0])
            })
            .collect();
        let valid = colors.iter().all(Option::is_some);
        let conflicts = self.raw_conflicts(a);
        DecodedSolution { solution: Solution::Coloring { colors, conflicts }, valid }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::decode;

    #[test]
    fn zero_colors_rejected() {
        assert!(build_graph_coloring(&Graph::complete(3), 0, None).is_err());
        assert!(
            build_graph_coloring(&Graph::complete(3), 3, Some(Penalty::new(2.0, 1.0))).is_err()
        );
    }

    #[test]
    fn uncolored_or_double_colored_node_is_invalid() {
        let (inst, _) = build_graph_coloring(&Graph::complete(3), 3, None).unwrap();
        let uncolored = Assignment::from(&[1u8, 0, 0, 0, 1, 0, 0, 0, 0][..]);
        assert!(!decode(&inst, &uncolored).unwrap().valid);
        let doubled = Assignment::from(&[1u8, 1, 0, 0, 1, 0, 0, 0, 1][..]);
        assert!(!decode(&inst, &doubled).unwrap().valid);
        let proper = Assignment::from(&[1u8, 0, 0, 0, 1, 0, 0, 0, 1][..]);
        let d = decode(&inst, &proper).unwrap();
        assert!(d.valid);
        assert_eq!(d.metric(), 0.0);
    }
}
