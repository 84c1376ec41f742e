//! Minor embedding of logical QUBO graphs into chimera hardware graphs.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;
use crate::qubo::QuboMatrix;

mod chimera;
mod curve;
mod heuristic;

pub use chimera::{ChimeraGraph, QubitCoord};
pub use curve::{embeddable_curve, largest_embeddable, max_embeddable_size, CurvePoint, DEFAULT_PROBE_ATTEMPTS};
pub use heuristic::find_embedding;

/// Logical connectivity of a QUBO: one node per variable, an edge for every
/// non-zero off-diagonal entry (hard or soft).
pub fn connectivity_graph(q: &QuboMatrix) -> Graph {
    Graph::from_qubo(q)
}

/// `chains[v]` holds the sorted physical qubits of logical node `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub chains: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingMetrics {
    pub physical_qubits: usize,
    pub max_chain: usize,
    pub mean_chain: f64,
}

impl Embedding {
    pub fn metrics(&self) -> EmbeddingMetrics {
        let physical_qubits = self.chains.iter().map(Vec::len).sum();
        let max_chain = self.chains.iter().map(Vec::len).max().unwrap_or(0);
        let mean_chain = if self.chains.is_empty() {
            0.0
        } else {
            physical_qubits as f64 / self.chains.len() as f64
        };
        EmbeddingMetrics { physical_qubits, max_chain, mean_chain }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NodeCount { expected: usize, found: usize },
    EmptyChain(usize),
    UnknownQubit { node: usize, qubit: usize },
    Overlap { qubit: usize, first: usize, second: usize },
    DisconnectedChain(usize),
    UncoveredEdge(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeCount { expected, found } => {
                write!(f, "embedding has {found} chains for {expected} logical nodes")
            }
            Violation::EmptyChain(v) => write!(f, "empty chain for node {v}"),
            Violation::UnknownQubit { node, qubit } => {
                write!(f, "chain {node} uses qubit {qubit}, which is not in the hardware graph")
            }
            Violation::Overlap { qubit, first, second } => {
                write!(f, "overlap: qubit {qubit} is in chains {first} and {second}")
            }
            Violation::DisconnectedChain(v) => write!(f, "chain {v} is not connected"),
            Violation::UncoveredEdge(u, v) => write!(f, "uncovered edge ({u}, {v})"),
        }
    }
}

pub(crate) fn chain_connected(chain: &[usize], gc: &ChimeraGraph) -> bool {
    let Some(&first) = chain.first() else { return false };
    let mut seen = alloc::vec![false; chain.len()];
    let pos = |q: usize| chain.binary_search(&q).ok();
    let mut queue = VecDeque::from([first]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(q) = queue.pop_front() {
        for &r in gc.neighbors(q) {
            if let Some(k) = pos(r) {
                if !seen[k] {
                    seen[k] = true;
                    reached += 1;
                    queue.push_back(r);
                }
            }
        }
    }
    reached == chain.len()
}

/// Checks disjointness, chain connectivity and edge coverage, reporting the
/// first violation found.
pub fn verify_embedding(e: &Embedding, gp: &Graph, gc: &ChimeraGraph) -> Result<(), Violation> {
    if e.chains.len() != gp.node_count() {
        return Err(Violation::NodeCount { expected: gp.node_count(), found: e.chains.len() });
    }
    let mut owner: Vec<Option<usize>> = alloc::vec![None; gc.qubit_count()];
    for (v, chain) in e.chains.iter().enumerate() {
        if chain.is_empty() {
            return Err(Violation::EmptyChain(v));
        }
        for &q in chain {
            let slot = owner.get_mut(q).ok_or(Violation::UnknownQubit { node: v, qubit: q })?;
            if let Some(first) = *slot {
                return Err(Violation::Overlap { qubit: q, first, second: v });
            }
            *slot = Some(v);
        }
    }
    for (v, chain) in e.chains.iter().enumerate() {
        let mut sorted = chain.clone();
        sorted.sort_unstable();
        if !chain_connected(&sorted, gc) {
            return Err(Violation::DisconnectedChain(v));
        }
    }
    for (u, v) in gp.edges() {
        let touches = e.chains[u]
            .iter()
            .any(|&q| gc.neighbors(q).iter().any(|&r| owner[r] == Some(v)));
        if !touches {
            return Err(Violation::UncoveredEdge(u, v));
        }
    }
    Ok(())
}
