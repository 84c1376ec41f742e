//! QUBO builders, decoders and quality ratios for the eight problem kinds.
//!
//! Every builder returns the [`ProblemInstance`] it was built from together
//! with a tagged [`QuboMatrix`]. Entries encoding feasibility (one-hot and
//! bijection penalties, SAT conflict edges, Exact Cover diagonals) are tagged
//! [`ConstraintTag::Hard`]; entries encoding the objective are
//! [`ConstraintTag::Soft`]. A key that receives any hard contribution is
//! tagged hard as a whole.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

mod agap;
mod coloring;
mod exact_cover;
pub mod generate;
mod isomorphism;
mod max3sat;
mod max_cut;
mod number_partitioning;
mod optimum;
mod tsp;

pub use agap::{build_agap, Agap};
pub use coloring::{build_graph_coloring, GraphColoring};
pub use exact_cover::{build_exact_cover, ExactCover};
pub use isomorphism::{build_graph_isomorphism, GraphIsomorphism};
pub use max3sat::{build_max3sat, Literal, Max3Sat, CLAUSE_PENALTY, CONFLICT_PENALTY};
pub use max_cut::{build_max_cut, MaxCut};
pub use number_partitioning::{build_number_partitioning, NumberPartitioning};
pub use optimum::optimum;
pub use tsp::{build_tsp, Tsp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    ExactCover,
    MaxCut,
    NumberPartitioning,
    Agap,
    Max3Sat,
    Tsp,
    GraphColoring,
    GraphIsomorphism,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 8] = [
        ProblemKind::ExactCover,
        ProblemKind::MaxCut,
        ProblemKind::NumberPartitioning,
        ProblemKind::Agap,
        ProblemKind::Max3Sat,
        ProblemKind::Tsp,
        ProblemKind::GraphColoring,
        ProblemKind::GraphIsomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::ExactCover => "exact-cover",
            ProblemKind::MaxCut => "max-cut",
            ProblemKind::NumberPartitioning => "number-partitioning",
            ProblemKind::Agap => "agap",
            ProblemKind::Max3Sat => "max3sat",
            ProblemKind::Tsp => "tsp",
            ProblemKind::GraphColoring => "graph-coloring",
            ProblemKind::GraphIsomorphism => "graph-isomorphism",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.to_ascii_lowercase().replace('_', "-");
        Some(match s.as_str() {
            "exact-cover" | "ec" => ProblemKind::ExactCover,
            "max-cut" | "maxcut" | "mc" => ProblemKind::MaxCut,
            "number-partitioning" | "np" => ProblemKind::NumberPartitioning,
            "agap" => ProblemKind::Agap,
            "max3sat" | "max-3sat" | "3sat" => ProblemKind::Max3Sat,
            "tsp" => ProblemKind::Tsp,
            "graph-coloring" | "gc" => ProblemKind::GraphColoring,
            "graph-isomorphism" | "gi" => ProblemKind::GraphIsomorphism,
            _ => return None,
        })
    }

    /// Max-Cut counts cut edges and Max-3SAT satisfied clauses; every other
    /// metric is an error count or a cost.
    pub fn higher_is_better(self) -> bool {
        matches!(self, ProblemKind::MaxCut | ProblemKind::Max3Sat)
    }

    /// Kinds whose quality reference is the instance optimum.
    pub fn needs_optimum(self) -> bool {
        matches!(self, ProblemKind::MaxCut | ProblemKind::Agap | ProblemKind::Tsp)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemInstance {
    ExactCover(ExactCover),
    MaxCut(MaxCut),
    NumberPartitioning(NumberPartitioning),
    Agap(Agap),
    Max3Sat(Max3Sat),
    Tsp(Tsp),
    GraphColoring(GraphColoring),
    GraphIsomorphism(GraphIsomorphism),
}

impl ProblemInstance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemInstance::ExactCover(_) => ProblemKind::ExactCover,
            ProblemInstance::MaxCut(_) => ProblemKind::MaxCut,
            ProblemInstance::NumberPartitioning(_) => ProblemKind::NumberPartitioning,
            ProblemInstance::Agap(_) => ProblemKind::Agap,
            ProblemInstance::Max3Sat(_) => ProblemKind::Max3Sat,
            ProblemInstance::Tsp(_) => ProblemKind::Tsp,
            ProblemInstance::GraphColoring(_) => ProblemKind::GraphColoring,
            ProblemInstance::GraphIsomorphism(_) => ProblemKind::GraphIsomorphism,
        }
    }

    pub fn num_variables(&self) -> usize {
        match self {
            ProblemInstance::ExactCover(p) => p.subsets.len(),
            ProblemInstance::MaxCut(p) => p.graph.node_count(),
            ProblemInstance::NumberPartitioning(p) => p.numbers.len(),
            ProblemInstance::Agap(p) => p.planes * p.gates,
            ProblemInstance::Max3Sat(p) => 3 * p.clauses.len(),
            ProblemInstance::Tsp(p) => p.cities() * p.cities(),
            ProblemInstance::GraphColoring(p) => p.graph.node_count() * p.colors,
            ProblemInstance::GraphIsomorphism(p) => p.g1.node_count() * p.g1.node_count(),
        }
    }

    /// Rebuilds the QUBO from the stored payload.
    pub fn to_qubo(&self) -> Result<QuboMatrix> {
        Ok(match self {
            ProblemInstance::ExactCover(p) => p.qubo()?,
            ProblemInstance::MaxCut(p) => p.qubo()?,
            ProblemInstance::NumberPartitioning(p) => p.qubo()?,
            ProblemInstance::Agap(p) => p.qubo()?,
            ProblemInstance::Max3Sat(p) => p.qubo()?,
            ProblemInstance::Tsp(p) => p.qubo()?,
            ProblemInstance::GraphColoring(p) => p.qubo()?,
            ProblemInstance::GraphIsomorphism(p) => p.qubo()?,
        })
    }
}

/// Combinatorial object recovered from an assignment.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    /// Selected subsets; `errors` counts elements not covered exactly once,
    /// `squared_deviation` is `Σ_u (1 - cover(u))²`.
    Cover { selected: Vec<usize>, errors: usize, squared_deviation: u64 },
    Cut { side: Vec<bool>, cut: usize },
    Partition { side: Vec<bool>, difference: u64 },
    /// `gate_of[i]` is set when plane `i` occupies exactly one gate.
    Gates { gate_of: Vec<Option<usize>>, objective: f64 },
    Truth { values: Vec<bool>, satisfied: usize },
    /// `tour` starts at the start city and is present only for permutation
    /// matrices. `weight` is the raw weight term evaluated on the bits.
    Tour { tour: Option<Vec<usize>>, weight: f64 },
    Coloring { colors: Vec<Option<usize>>, conflicts: usize },
    /// `mapping[v]` is the `G2` node of `G1` node `v` (bijections only).
    Mapping { mapping: Option<Vec<usize>>, mismatches: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedSolution {
    pub solution: Solution,
    /// `false` iff a hard constraint is violated.
    pub valid: bool,
}

impl DecodedSolution {
    /// The observed quality metric `v`.
    pub fn metric(&self) -> f64 {
        match &self.solution {
            Solution::Cover { errors, .. } => *errors as f64,
            Solution::Cut { cut, .. } => *cut as f64,
            Solution::Partition { difference, .. } => *difference as f64,
            Solution::Gates { objective, .. } => *objective,
            Solution::Truth { satisfied, .. } => *satisfied as f64,
            Solution::Tour { weight, .. } => *weight,
            Solution::Coloring { conflicts, .. } => *conflicts as f64,
            Solution::Mapping { mismatches, .. } => *mismatches as f64,
        }
    }
}

pub fn decode(inst: &ProblemInstance, a: &Assignment) -> Result<DecodedSolution> {
    let n = inst.num_variables();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.len() });
    }
    Ok(match inst {
        ProblemInstance::ExactCover(p) => p.decode(a),
        ProblemInstance::MaxCut(p) => p.decode(a),
        ProblemInstance::NumberPartitioning(p) => p.decode(a),
        ProblemInstance::Agap(p) => p.decode(a),
        ProblemInstance::Max3Sat(p) => p.decode(a),
        ProblemInstance::Tsp(p) => p.decode(a),
        ProblemInstance::GraphColoring(p) => p.decode(a),
        ProblemInstance::GraphIsomorphism(p) => p.decode(a),
    })
}

/// Where `v_ref` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    /// `|U|`, half the sum of `S`, clause count or node count, per kind.
    Intrinsic,
    /// A known optimum (required for Max-Cut, AGAP and TSP).
    Optimum(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityRatio {
    pub v: f64,
    pub v_ref: f64,
    pub ratio: f64,
    pub valid: bool,
}

pub fn intrinsic_reference(inst: &ProblemInstance) -> Option<f64> {
    match inst {
        ProblemInstance::ExactCover(p) => Some(p.universe.len() as f64),
        ProblemInstance::NumberPartitioning(p) => Some(p.total() as f64 / 2.0),
        ProblemInstance::Max3Sat(p) => Some(p.clauses.len() as f64),
        ProblemInstance::GraphColoring(p) => Some(p.graph.node_count() as f64),
        ProblemInstance::GraphIsomorphism(p) => Some(p.g1.node_count() as f64),
        ProblemInstance::MaxCut(_) | ProblemInstance::Agap(_) | ProblemInstance::Tsp(_) => None,
    }
}

/// `v / v_ref`. Invalid solutions are scored on their raw objective and
/// flagged through [`QualityRatio::valid`].
pub fn quality(
    inst: &ProblemInstance,
    sol: &DecodedSolution,
    reference: Reference,
) -> Result<QualityRatio> {
    let v_ref = match reference {
        Reference::Optimum(v) => v,
        Reference::Intrinsic => intrinsic_reference(inst).ok_or_else(|| {
            Error::Parameter(alloc::format!("{} quality needs a known optimum", inst.kind()))
        })?,
    };
    if !(v_ref.is_finite() && v_ref > 0.0) {
        return Err(Error::Parameter(alloc::format!("reference value {v_ref} must be positive")));
    }
    let v = sol.metric();
    Ok(QualityRatio { v, v_ref, ratio: v / v_ref, valid: sol.valid })
}

/// Accumulates expanded polynomial terms before they are written into a QUBO.
///
/// A key that received any hard contribution is tagged hard.
#[derive(Debug, Default)]
pub(crate) struct Terms {
    entries: BTreeMap<(usize, usize), (f64, bool)>,
    offset: f64,
}

impl Terms {
    pub fn add(&mut self, i: usize, j: usize, value: f64, tag: ConstraintTag) {
        let key = if i <= j { (i, j) } else { (j, i) };
        let slot = self.entries.entry(key).or_insert((0.0, false));
        slot.0 += value;
        slot.1 |= tag == ConstraintTag::Hard;
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    /// `weight · (1 - Σ_{v ∈ vars} x_v)²`, using `x² = x`.
    pub fn one_hot(&mut self, vars: &[usize], weight: f64, tag: ConstraintTag) {
        self.offset += weight;
        for (k, &a) in vars.iter().enumerate() {
            self.add(a, a, -weight, tag);
            for &b in &vars[k + 1..] {
                self.add(a, b, 2.0 * weight, tag);
            }
        }
    }

    pub fn into_qubo(self, n: usize) -> Result<QuboMatrix> {
        let mut q = QuboMatrix::new(n)?;
        for ((i, j), (value, hard)) in self.entries {
            let tag = if hard { ConstraintTag::Hard } else { ConstraintTag::Soft };
            q.set(i, j, value, tag)?;
        }
        q.set_offset(self.offset)?;
        Ok(q)
    }
}

/// Penalty weights `(A, B)` of the one-hot encodings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalty {
    pub a: f64,
    pub b: f64,
}

impl Penalty {
    pub fn new(a: f64, b: f64) -> Self {
        Penalty { a, b }
    }
}

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(alloc::format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn input_error(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// Indices of the set bits in `vars`.
pub(crate) fn chosen(a: &Assignment, vars: impl Iterator<Item = usize>) -> Vec<usize> {
    vars.enumerate().filter(|&(_, v)| a.get(v)).map(|(k, _)| k).collect()
}

/// Interprets an `rows × cols` block of bits as a permutation matrix.
pub(crate) fn permutation(a: &Assignment, rows: usize, cols: usize) -> Option<Vec<usize>> {
    let mut image = Vec::with_capacity(rows);
    let mut used = alloc::vec![false; cols];
    for r in 0..rows {
        let picks = chosen(a, (0..cols).map(|c| r * cols + c));
        if picks.len() != 1 || used[picks[0]] {
            return None;
        }
        used[picks[0]] = true;
        image.push(picks[0]);
    }
    if used.iter().all(|&u| u) {
        Some(image)
    } else {
        None
    }
}
