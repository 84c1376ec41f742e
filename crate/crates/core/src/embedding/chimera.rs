use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Chimera hardware graph: a `rows × cols` grid of `K_{shore,shore}` cells.
///
/// Qubit `((row·cols + col)·2 + side)·shore + k`. Side 0 qubits couple to the
/// same index in the cells above and below, side 1 qubits to the cells left
/// and right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChimeraGraph {
    rows: usize,
    cols: usize,
    shore: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitCoord {
    pub row: usize,
    pub col: usize,
    pub side: usize,
    pub index: usize,
}

impl ChimeraGraph {
    pub fn new(rows: usize, cols: usize, shore: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || shore == 0 {
            return Err(Error::Parameter("chimera dimensions must be at least 1".into()));
        }
        let mut g = ChimeraGraph { rows, cols, shore, adj: Vec::new() };
        g.adj = alloc::vec![Vec::with_capacity(shore + 2); rows * cols * 2 * shore];
        for row in 0..rows {
            for col in 0..cols {
                for a in 0..shore {
                    for b in 0..shore {
                        g.link(g.qubit(row, col, 0, a), g.qubit(row, col, 1, b));
                    }
                    if row + 1 < rows {
                        g.link(g.qubit(row, col, 0, a), g.qubit(row + 1, col, 0, a));
                    }
                    if col + 1 < cols {
                        g.link(g.qubit(row, col, 1, a), g.qubit(row, col + 1, 1, a));
                    }
                }
            }
        }
        for nbrs in &mut g.adj {
            nbrs.sort_unstable();
        }
        Ok(g)
    }

    /// The 16×16×4 layout of a 2048-qubit annealer.
    pub fn c16() -> Self {
        ChimeraGraph::new(16, 16, 4).expect("valid dimensions")
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn qubit(&self, row: usize, col: usize, side: usize, index: usize) -> usize {
        ((row * self.cols + col) * 2 + side) * self.shore + index
    }

    pub fn coord(&self, q: usize) -> QubitCoord {
        let index = q % self.shore;
        let rest = q / self.shore;
        let side = rest % 2;
        let cell = rest / 2;
        QubitCoord { row: cell / self.cols, col: cell % self.cols, side, index }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.shore)
    }

    pub fn qubit_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adj[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(a).is_some_and(|n| n.binary_search(&b).is_ok())
    }

    /// Couplers between horizontally or vertically adjacent cells.
    pub fn inter_cell_edges(&self) -> usize {
        (0..self.qubit_count())
            .flat_map(|a| self.adj[a].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a < b && {
                let (ca, cb) = (self.coord(a), self.coord(b));
                (ca.row, ca.col) != (cb.row, cb.col)
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_is_k44() {
        let g = ChimeraGraph::new(1, 1, 4).unwrap();
        assert_eq!(g.qubit_count(), 8);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.inter_cell_edges(), 0);
        for a in 0..4 {
            for b in 4..8 {
                assert!(g.has_edge(a, b));
            }
            for b in 0..4 {
                assert!(!g.has_edge(a, b));
            }
        }
    }

    #[test]
    fn two_stacked_cells_share_four_couplers() {
        let g = ChimeraGraph::new(2, 1, 4).unwrap();
        assert_eq!(g.qubit_count(), 16);
        assert_eq!(g.inter_cell_edges(), 4);
        assert_eq!(g.edge_count(), 36);
    }

    #[test]
    fn coordinates_round_trip() {
        let g = ChimeraGraph::new(3, 5, 4).unwrap();
        for q in 0..g.qubit_count() {
            let c = g.coord(q);
            assert_eq!(g.qubit(c.row, c.col, c.side, c.index), q);
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(ChimeraGraph::new(0, 1, 4).is_err());
        assert!(ChimeraGraph::new(1, 1, 0).is_err());
    }
}
