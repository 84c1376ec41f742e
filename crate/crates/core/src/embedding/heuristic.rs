//! Chain-routing minor embedder.
//!
//! Logical nodes are placed in breadth-first order, each as a shortest-path
//! tree from a root qubit to the chains of its already-placed neighbours.
//! Later passes tear out every chain (together with the neighbour branches
//! that only served it) and re-route it under negotiated congestion costs:
//! a present term that grows with every pass and a history term that grows
//! on qubits that stay shared. Once no qubit is shared, a refinement round
//! re-routes chains over free qubits and keeps shorter results. Isolated
//! logical nodes are placed last on free qubits.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{chain_connected, verify_embedding, ChimeraGraph, Embedding};
use crate::graph::Graph;

const MAX_PASSES: usize = 60;
/// Passes without a new minimum of shared qubits before an attempt gives up.
const PATIENCE: usize = 15;
const PRESENT_START: f64 = 0.5;
const PRESENT_GROWTH: f64 = 1.15;
const HISTORY_STEP: f64 = 0.5;
const JITTER: f64 = 0.02;
const REFINE_ROUNDS: usize = 3;
/// Cells of slack around the neighbour chains searched when routing a node.
const WINDOW_MARGIN: usize = 2;
const NONE: usize = usize::MAX;

#[derive(PartialEq)]
struct Frontier {
    cost: f64,
    qubit: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost, then on qubit index
        other.cost.total_cmp(&self.cost).then_with(|| other.qubit.cmp(&self.qubit))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy)]
struct Window {
    rows: (usize, usize),
    cols: (usize, usize),
}

impl Window {
    const ALL: Window = Window { rows: (0, usize::MAX), cols: (0, usize::MAX) };

    fn contains(&self, (r, c): (usize, usize)) -> bool {
        (self.rows.0..=self.rows.1).contains(&r) && (self.cols.0..=self.cols.1).contains(&c)
    }
}

struct Router<'a, R: Rng> {
    gp: &'a Graph,
    gc: &'a ChimeraGraph,
    rng: R,
    chains: Vec<Vec<usize>>,
    usage: Vec<u32>,
    overfull: usize,
    present: f64,
    history: Vec<f64>,
    jitter: Vec<f64>,
    /// Refinement mode: used qubits are impassable.
    forbid: bool,
    cell: Vec<(usize, usize)>,
    /// Qubit costs for the route in progress; infinite outside the window.
    cost: Vec<f64>,
    /// Qubits inside the window.
    area: Vec<usize>,
    // scratch buffers, one set per neighbour being routed to
    dist: Vec<Vec<f64>>,
    parent: Vec<Vec<usize>>,
    written: Vec<Vec<usize>>,
    mark: Vec<bool>,
    /// Chains holding each qubit.
    owners: Vec<Vec<u32>>,
    /// Per-node stamps for coverage checks.
    touched: Vec<u32>,
    stamp: u32,
}

impl<'a, R: Rng> Router<'a, R> {
    fn new(gp: &'a Graph, gc: &'a ChimeraGraph, rng: R) -> Self {
        let q = gc.qubit_count();
        Router {
            gp,
            gc,
            rng,
            chains: alloc::vec![Vec::new(); gp.node_count()],
            usage: alloc::vec![0; q],
            overfull: 0,
            present: PRESENT_START,
            history: alloc::vec![0.0; q],
            jitter: alloc::vec![1.0; q],
            forbid: false,
            cell: (0..q).map(|i| gc.coord(i)).map(|c| (c.row, c.col)).collect(),
            cost: alloc::vec![f64::INFINITY; q],
            area: Vec::new(),
            dist: Vec::new(),
            parent: Vec::new(),
            written: Vec::new(),
            mark: alloc::vec![false; q],
            owners: alloc::vec![Vec::new(); q],
            touched: alloc::vec![0; gp.node_count()],
            stamp: 0,
        }
    }

    fn weight(&self, q: usize) -> f64 {
        let used = self.usage[q] as f64;
        if self.forbid && used > 0.0 {
            return f64::INFINITY;
        }
        (1.0 + self.history[q]) * (1.0 + self.present * used) * self.jitter[q]
    }

    fn claim(&mut self, v: usize, q: usize) {
        self.owners[q].push(v as u32);
        self.usage[q] += 1;
        if self.usage[q] == 2 {
            self.overfull += 1;
        }
    }

    fn unclaim(&mut self, v: usize, q: usize) {
        let pos = self.owners[q].iter().position(|&o| o as usize == v).expect("owned qubit");
        self.owners[q].swap_remove(pos);
        if self.usage[q] == 2 {
            self.overfull -= 1;
        }
        self.usage[q] -= 1;
    }

    fn release(&mut self, v: usize) {
        for q in core::mem::take(&mut self.chains[v]) {
            self.unclaim(v, q);
        }
    }

    fn assign(&mut self, v: usize, chain: Vec<usize>) {
        self.release(v);
        for &q in &chain {
            self.claim(v, q);
        }
        self.chains[v] = chain;
    }

    /// Node-weighted multi-source Dijkstra from the chain of `source`,
    /// restricted to the current window.
    fn spread(&mut self, slot: usize, source: usize) {
        let n = self.gc.qubit_count();
        if self.dist.len() <= slot {
            self.dist.push(alloc::vec![f64::INFINITY; n]);
            self.parent.push(alloc::vec![NONE; n]);
            self.written.push(Vec::new());
        }
        let mut dist = core::mem::take(&mut self.dist[slot]);
        let mut parent = core::mem::take(&mut self.parent[slot]);
        let mut written = core::mem::take(&mut self.written[slot]);
        for q in written.drain(..) {
            dist[q] = f64::INFINITY;
            parent[q] = NONE;
        }
        let mut heap = BinaryHeap::new();
        for &q in &self.chains[source] {
            dist[q] = 0.0;
            written.push(q);
            heap.push(Frontier { cost: 0.0, qubit: q });
        }
        while let Some(Frontier { cost, qubit }) = heap.pop() {
            if cost > dist[qubit] {
                continue;
            }
            for &r in self.gc.neighbors(qubit) {
                let next = cost + self.cost[r];
                if next < dist[r] {
                    if dist[r] == f64::INFINITY {
                        written.push(r);
                    }
                    dist[r] = next;
                    parent[r] = qubit;
                    heap.push(Frontier { cost: next, qubit: r });
                }
            }
        }
        self.dist[slot] = dist;
        self.parent[slot] = parent;
        self.written[slot] = written;
    }

    fn random_free_qubit(&mut self) -> Option<usize> {
        let free: Vec<usize> = (0..self.usage.len()).filter(|&q| self.usage[q] == 0).collect();
        free.choose(&mut self.rng).copied()
    }

    /// Fills `cost` and `area` for a route confined to `window`.
    fn price(&mut self, window: Window) {
        for &q in &self.area {
            self.cost[q] = f64::INFINITY;
        }
        self.area.clear();
        for q in 0..self.usage.len() {
            if window.contains(self.cell[q]) {
                self.cost[q] = self.weight(q);
                self.area.push(q);
            }
        }
    }

    fn window_around(&self, nodes: &[usize]) -> Window {
        let (rows, cols, _) = self.gc.dims();
        let (mut r0, mut r1, mut c0, mut c1) = (usize::MAX, 0, usize::MAX, 0);
        for &u in nodes {
            for &q in &self.chains[u] {
                let (r, c) = self.cell[q];
                (r0, r1, c0, c1) = (r0.min(r), r1.max(r), c0.min(c), c1.max(c));
            }
        }
        Window {
            rows: (r0.saturating_sub(WINDOW_MARGIN), (r1 + WINDOW_MARGIN).min(rows - 1)),
            cols: (c0.saturating_sub(WINDOW_MARGIN), (c1 + WINDOW_MARGIN).min(cols - 1)),
        }
    }

    /// Root minimising the summed distance to every placed neighbour, with
    /// the root itself counted once. Neighbour chains are excluded.
    fn best_root(&self, k: usize) -> Option<usize> {
        let mut root = None;
        let mut best = f64::INFINITY;
        for &q in &self.area {
            if (0..k).any(|s| self.dist[s][q] == 0.0) {
                continue;
            }
            let total: f64 = (0..k).map(|s| self.dist[s][q]).sum();
            let score = total - (k - 1) as f64 * self.cost[q];
            if score < best {
                best = score;
                root = Some(q);
            }
        }
        root
    }

    /// Builds a new chain for `v`, whose own chain must already be released.
    /// Fails only when no root reaches every placed neighbour.
    fn route(&mut self, v: usize) -> bool {
        let placed: Vec<usize> =
            self.gp.neighbors(v).filter(|&u| !self.chains[u].is_empty()).collect();
        if placed.is_empty() {
            let q = match self.random_free_qubit() {
                Some(q) => q,
                None => self.rng.random_range(0..self.usage.len()),
            };
            self.assign(v, alloc::vec![q]);
            return true;
        }
        let amp = if self.forbid { 0.0 } else { JITTER };
        for j in self.jitter.iter_mut() {
            *j = 1.0 + amp * self.rng.random::<f64>();
        }
        let k = placed.len();
        let mut root = None;
        for window in [self.window_around(&placed), Window::ALL] {
            self.price(window);
            for (slot, &u) in placed.iter().enumerate() {
                self.spread(slot, u);
            }
            root = self.best_root(k);
            if root.is_some() {
                break;
            }
        }
        let Some(root) = root else {
            if self.forbid {
                return false;
            }
            // every reachable qubit lies inside a neighbour chain
            let q = self.random_free_qubit().unwrap_or(0);
            self.assign(v, alloc::vec![q]);
            return true;
        };
        let mut chain = alloc::vec![root];
        self.mark[root] = true;
        for s in 0..k {
            let mut cur = self.parent[s][root];
            while cur != NONE && self.dist[s][cur] > 0.0 {
                if !self.mark[cur] {
                    self.mark[cur] = true;
                    chain.push(cur);
                }
                cur = self.parent[s][cur];
            }
        }
        for &q in &chain {
            self.mark[q] = false;
        }
        self.assign(v, chain);
        true
    }

    /// True when every placed neighbour of `v` has a chain touching `chain`.
    fn covers(&mut self, v: usize, chain: &[usize]) -> bool {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.touched.fill(0);
            self.stamp = 1;
        }
        for &q in chain {
            for &r in self.gc.neighbors(q) {
                for &o in &self.owners[r] {
                    self.touched[o as usize] = self.stamp;
                }
            }
        }
        self.gp
            .neighbors(v)
            .all(|u| self.chains[u].is_empty() || self.touched[u] == self.stamp)
    }

    /// Removes qubits of `v`'s chain needed neither for its connectivity nor
    /// for touching a placed neighbour chain.
    fn shrink(&mut self, v: usize) {
        let mut chain = core::mem::take(&mut self.chains[v]);
        let mut idx = 0;
        while chain.len() > 1 && idx < chain.len() {
            let q = chain[idx];
            let mut rest: Vec<usize> = chain.iter().copied().filter(|&r| r != q).collect();
            rest.sort_unstable();
            if chain_connected(&rest, self.gc) && self.covers(v, &rest) {
                chain.swap_remove(idx);
                self.unclaim(v, q);
                idx = 0;
            } else {
                idx += 1;
            }
        }
        self.chains[v] = chain;
    }

    /// Releases `v` and trims neighbour branches that only reached it.
    fn tear_out(&mut self, v: usize) {
        self.release(v);
        let nbrs: Vec<usize> = self.gp.neighbors(v).collect();
        for u in nbrs {
            if !self.chains[u].is_empty() {
                self.shrink(u);
            }
        }
    }

    fn bfs_order(&mut self, nodes: &[usize]) -> Vec<usize> {
        let mut starts = nodes.to_vec();
        starts.shuffle(&mut self.rng);
        let mut seen = alloc::vec![false; self.gp.node_count()];
        let mut order = Vec::with_capacity(nodes.len());
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut next: Vec<usize> = self.gp.neighbors(v).filter(|&u| !seen[u]).collect();
                next.shuffle(&mut self.rng);
                for u in next {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        order
    }

    /// Negotiates overlaps away; true once no qubit is shared.
    fn negotiate(&mut self, order: &mut [usize]) -> bool {
        let mut best = usize::MAX;
        let mut stale = 0;
        for pass in 0..MAX_PASSES {
            self.present = PRESENT_START * libm::pow(PRESENT_GROWTH, pass as f64);
            for &v in order.iter() {
                self.tear_out(v);
                self.route(v);
                self.shrink(v);
            }
            if self.overfull == 0 {
                return true;
            }
            if self.overfull < best {
                best = self.overfull;
                stale = 0;
            } else {
                stale += 1;
                if stale >= PATIENCE {
                    return false;
                }
            }
            for q in 0..self.usage.len() {
                if self.usage[q] > 1 {
                    self.history[q] += HISTORY_STEP * (self.usage[q] - 1) as f64;
                }
            }
            order.shuffle(&mut self.rng);
        }
        false
    }

    /// Re-routes chains over free qubits only, keeping a result when it does
    /// not grow the chains of the node and its neighbours.
    fn refine(&mut self, order: &[usize]) {
        self.forbid = true;
        for _ in 0..REFINE_ROUNDS {
            let mut improved = false;
            for &v in order {
                let group: Vec<usize> = core::iter::once(v).chain(self.gp.neighbors(v)).collect();
                let saved: Vec<Vec<usize>> = group.iter().map(|&u| self.chains[u].clone()).collect();
                let before: usize = saved.iter().map(Vec::len).sum();
                self.tear_out(v);
                let ok = self.route(v);
                if ok {
                    self.shrink(v);
                }
                let after: usize = group.iter().map(|&u| self.chains[u].len()).sum();
                if !ok || after > before {
                    for (&u, chain) in group.iter().zip(saved) {
                        self.assign(u, chain);
                    }
                } else if after < before {
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        self.forbid = false;
    }

    fn run(mut self) -> Option<Embedding> {
        let n = self.gp.node_count();
        let (connected, isolated): (Vec<usize>, Vec<usize>) =
            (0..n).partition(|&v| self.gp.degree(v) > 0);
        let mut order = self.bfs_order(&connected);
        if !connected.is_empty() {
            if !self.negotiate(&mut order) {
                return None;
            }
            self.refine(&order);
        }
        let mut free: Vec<usize> = (0..self.usage.len()).filter(|&q| self.usage[q] == 0).collect();
        if free.len() < isolated.len() {
            return None;
        }
        free.shuffle(&mut self.rng);
        for (&v, q) in isolated.iter().zip(free) {
            self.assign(v, alloc::vec![q]);
        }
        let chains = self
            .chains
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Some(Embedding { chains })
    }
}

/// Tries up to `attempts` randomized routings; attempt `k` is seeded from
/// `(seed, k)`. Returns the first embedding that passes
/// [`verify_embedding`], or `None`.
pub fn find_embedding(gp: &Graph, gc: &ChimeraGraph, seed: u64, attempts: usize) -> Option<Embedding> {
    if gp.node_count() > gc.qubit_count() {
        return None;
    }
    (0..attempts as u64).find_map(|k| {
        let rng = ChaCha8Rng::seed_from_u64(seed ^ k.wrapping_mul(0xD605_BBB5_8C8A_BCE5).rotate_left(17));
        Router::new(gp, gc, rng).run().filter(|e| verify_embedding(e, gp, gc).is_ok())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k44() -> Graph {
        let mut g = Graph::empty(8);
        for a in 0..4 {
            for b in 4..8 {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    #[test]
    fn k44_fits_one_cell_with_singleton_chains() {
        let gc = ChimeraGraph::new(1, 1, 4).unwrap();
        let e = find_embedding(&k44(), &gc, 1, 10).expect("identity embedding exists");
        let m = e.metrics();
        assert_eq!((m.physical_qubits, m.max_chain), (8, 1));
    }

    #[test]
    fn triangle_needs_four_qubits_in_one_cell() {
        let gc = ChimeraGraph::new(1, 1, 4).unwrap();
        for seed in 0..10 {
            let e = find_embedding(&Graph::complete(3), &gc, seed, 10).expect("embeddable");
            assert_eq!(e.metrics().physical_qubits, 4, "seed {seed}");
        }
    }

    #[test]
    fn k9_cannot_fit_eight_qubits() {
        let gc = ChimeraGraph::new(1, 1, 4).unwrap();
        assert!(find_embedding(&Graph::complete(9), &gc, 0, 10).is_none());
    }

    #[test]
    fn edgeless_graph_uses_one_qubit_per_node() {
        let gc = ChimeraGraph::new(2, 2, 4).unwrap();
        let e = find_embedding(&Graph::empty(32), &gc, 3, 1).unwrap();
        assert_eq!(e.metrics().physical_qubits, 32);
        assert!(find_embedding(&Graph::empty(33), &gc, 3, 1).is_none());
    }

    #[test]
    fn deterministic_per_seed() {
        let gc = ChimeraGraph::new(4, 4, 4).unwrap();
        let g = Graph::complete(8);
        assert_eq!(find_embedding(&g, &gc, 5, 3), find_embedding(&g, &gc, 5, 3));
    }

    #[test]
    fn complete_graphs_embed_in_small_chimera() {
        let gc = ChimeraGraph::new(4, 4, 4).unwrap();
        for n in [4, 6, 8, 10, 12] {
            let g = Graph::complete(n);
            let e = find_embedding(&g, &gc, n as u64, 10).unwrap_or_else(|| panic!("K{n}"));
            assert_eq!(verify_embedding(&e, &g, &gc), Ok(()));
        }
    }
}
