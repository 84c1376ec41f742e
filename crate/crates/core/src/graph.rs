use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qubo::QuboMatrix;

/// Simple undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: alloc::vec![BTreeSet::new(); n], edges: 0 }
    }

    /// Rejects self-loops and out-of-range endpoints; duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("valid by construction");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u).expect("valid by construction");
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::Input(format!("edge ({u}, {v}) outside 0..{n}")));
        }
        if u == v {
            return Err(Error::Input(format!("self-loop at node {u}")));
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        if fresh {
            self.edges += 1;
        }
        Ok(fresh)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(&v))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Logical connectivity graph of a QUBO: one node per variable, one edge per
    /// non-zero off-diagonal entry regardless of tag.
    pub fn from_qubo(q: &QuboMatrix) -> Self {
        let mut g = Graph::empty(q.num_variables());
        for ((i, j), _) in q.entries() {
            if i != j {
                g.add_edge(i, j).expect("qubo keys are in range and off-diagonal");
            }
        }
        g
    }
}
