//! Approximation-by-pruning for QUBO encodings of NP-hard problems.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the whole
//! algorithmic pipeline:
//!
//! - [`qubo`]: the sparse upper-triangular QUBO model with hard/soft entry tags.
//! - [`problems`]: builders, decoders and quality ratios for Exact Cover,
//!   Max-Cut, Number Partitioning, Airport Gate Assignment, Max-3SAT, TSP,
//!   Graph Coloring and Graph Isomorphism.
//! - [`pruning`]: the `fraction`, `threshold` and `random` strategies and the
//!   5%-granularity schedules built from them.
//! - [`sampler`]: simulated annealing, a uniform random baseline and a
//!   brute-force oracle.
//! - [`embedding`]: chimera hardware graphs and a heuristic minor embedder.
//!
//! IO, file formats and the experiment harness live in the `qprune` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod embedding;
pub mod error;
pub mod graph;
pub mod problems;
pub mod pruning;
pub mod qubo;
pub mod sampler;

pub use error::{Error, Result};
pub use graph::Graph;
pub use qubo::{Assignment, ConstraintTag, EntryStats, QuboMatrix};
