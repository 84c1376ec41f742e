use alloc::vec::Vec;

use super::{DecodedSolution, ProblemInstance, Solution, Terms};
use crate::error::Result;
use crate::graph::Graph;
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCut {
    pub graph: Graph,
}

/// `Σ_{uv∈E} 2 x_u x_v - x_u - x_v`, so the energy is minus the cut size.
///
/// All entries are soft. The diagonal carries the `-deg(v)` rewards and is
/// never pruned; pruning only drops edge couplings.
pub fn build_max_cut(graph: &Graph) -> Result<(ProblemInstance, QuboMatrix)> {
    let p = MaxCut { graph: graph.clone() };
    let q = p.qubo()?;
    Ok((ProblemInstance::MaxCut(p), q))
}

impl MaxCut {
    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let mut t = Terms::default();
        for (u, v) in self.graph.edges() {
            t.add(u, v, 2.0, ConstraintTag::Soft);
            t.add(u, u, -1.0, ConstraintTag::Soft);
            t.add(v, v, -1.0, ConstraintTag::Soft);
        }
        t.into_qubo(self.graph.node_count())
    }

    pub fn cut_size(&self, side: &[bool]) -> usize {
        self.graph.edges().filter(|&(u, v)| side[u] != side[v]).count()
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let side: Vec<bool> = a.bits().to_vec();
        let cut = self.cut_size(&side);
        DecodedSolution { solution: Solution::Cut { side, cut }, valid: true }
    }
}
