//! Sparse QUBO matrices.
//!
//! A [`QuboMatrix`] stores the objective
//! `offset + Σ_i c_i x_i + Σ_{i<j} c_ij x_i x_j` over binary variables as an
//! upper-triangular map keyed by `(i, j)` with `i <= j`. Every stored entry
//! carries a [`ConstraintTag`] set by the problem builder: `Hard` entries
//! encode feasibility and are never pruned, `Soft` entries encode the
//! objective.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintTag {
    Hard,
    Soft,
}

impl ConstraintTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintTag::Hard => "hard",
            ConstraintTag::Soft => "soft",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hard" | "Hard" | "H" | "h" => Some(ConstraintTag::Hard),
            "soft" | "Soft" | "S" | "s" => Some(ConstraintTag::Soft),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub tag: ConstraintTag,
}

/// Binary assignment `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment { bits: alloc::vec![false; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Bit `i` of `index` becomes variable `i` (least significant first).
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment { bits: (0..n).map(|i| (index >> i) & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }
}

impl<'a> From<&'a [u8]> for Assignment {
    fn from(bits: &'a [u8]) -> Self {
        Assignment { bits: bits.iter().map(|&b| b != 0).collect() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EntryStats {
    pub total: usize,
    pub hard: usize,
    pub soft: usize,
    pub soft_offdiagonal: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuboMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize), Entry>,
    offset: f64,
}

impl QuboMatrix {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension);
        }
        Ok(QuboMatrix { n, entries: BTreeMap::new(), offset: 0.0 })
    }

    pub fn num_variables(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) -> Result<()> {
        if !offset.is_finite() {
            return Err(Error::Parameter("offset must be finite".into()));
        }
        self.offset = offset;
        Ok(())
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i > j || j >= self.n {
            return Err(Error::Index { i, j, n: self.n });
        }
        Ok(())
    }

    /// Stores `value` at `(i, j)`, overwriting value and tag. Zero removes the entry.
    pub fn set(&mut self, i: usize, j: usize, value: f64, tag: ConstraintTag) -> Result<()> {
        self.check(i, j)?;
        if !value.is_finite() {
            return Err(Error::NonFinite { i, j });
        }
        if value == 0.0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), Entry { value, tag });
        }
        Ok(())
    }

    /// Accumulates `value` into `(i, j)`, accepting either orientation.
    ///
    /// Builders expand squared penalties term by term, so the same key is hit
    /// repeatedly. The tag of the accumulated entry becomes `tag`; builders
    /// never mix tags on one key except where noted at the call site.
    pub fn add(&mut self, i: usize, j: usize, value: f64, tag: ConstraintTag) -> Result<()> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let current = self.get(i, j).map_or(0.0, |e| e.value);
        self.set(i, j, current + value, tag)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Entry> {
        self.entries.get(&(i, j)).copied()
    }

    pub fn remove(&mut self, i: usize, j: usize) -> Option<Entry> {
        self.entries.remove(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in `(i, j)` lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Entry)> + '_ {
        self.entries.iter().map(|(&k, &e)| (k, e))
    }

    /// Soft entries off the diagonal: the only ones pruning may delete.
    pub fn soft_offdiagonal(&self) -> impl Iterator<Item = ((usize, usize), Entry)> + '_ {
        self.entries().filter(|&((i, j), e)| i != j && e.tag == ConstraintTag::Soft)
    }

    pub fn offdiagonal_count(&self) -> usize {
        self.entries.keys().filter(|(i, j)| i != j).count()
    }

    pub fn energy(&self, a: &Assignment) -> Result<f64> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.len() });
        }
        Ok(self.energy_unchecked(a.bits()))
    }

    pub(crate) fn energy_unchecked(&self, bits: &[bool]) -> f64 {
        let mut e = self.offset;
        for (&(i, j), entry) in &self.entries {
            if bits[i] && bits[j] {
                e += entry.value;
            }
        }
        e
    }

    /// Sum of contributions of entries carrying `tag` (offset excluded).
    pub fn tagged_energy(&self, a: &Assignment, tag: ConstraintTag) -> Result<f64> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.len() });
        }
        Ok(self
            .entries()
            .filter(|(_, e)| e.tag == tag)
            .filter(|&((i, j), _)| a.get(i) && a.get(j))
            .map(|(_, e)| e.value)
            .sum())
    }

    pub fn entry_stats(&self) -> EntryStats {
        let mut stats = EntryStats::default();
        for (&(i, j), e) in &self.entries {
            stats.total += 1;
            match e.tag {
                ConstraintTag::Hard => stats.hard += 1,
                ConstraintTag::Soft => {
                    stats.soft += 1;
                    if i != j {
                        stats.soft_offdiagonal += 1;
                    }
                }
            }
        }
        stats
    }

    /// Largest absolute coefficient and smallest non-zero absolute coefficient.
    pub fn coefficient_range(&self) -> Option<(f64, f64)> {
        let mut it = self.entries.values().map(|e| libm::fabs(e.value));
        let first = it.next()?;
        Some(it.fold((first, first), |(hi, lo), v| (hi.max(v), lo.min(v))))
    }

    /// Neighbour lists with coupling values, one list per variable, and the diagonal.
    pub fn adjacency(&self) -> (Vec<f64>, Vec<Vec<(usize, f64)>>) {
        let mut linear = alloc::vec![0.0; self.n];
        let mut adj = alloc::vec![Vec::new(); self.n];
        for (&(i, j), e) in &self.entries {
            if i == j {
                linear[i] = e.value;
            } else {
                adj[i].push((j, e.value));
                adj[j].push((i, e.value));
            }
        }
        (linear, adj)
    }
}
