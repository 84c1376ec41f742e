use alloc::format;
use alloc::vec::Vec;

use super::{input_error, DecodedSolution, ProblemInstance, Solution, Terms};
use crate::error::Result;
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

/// Penalty on two selected literal nodes of the same clause.
pub const CLAUSE_PENALTY: f64 = 2.0;
/// Penalty on two selected complementary literals. Heavier than the clause
/// penalty so magnitude-ordered pruning reaches conflict edges last.
pub const CONFLICT_PENALTY: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    /// DIMACS literal: `k` is variable `k-1`, `-k` its negation.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        (lit != 0).then(|| Literal { var: lit.unsigned_abs() as usize - 1, negated: lit < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn complements(self, other: Literal) -> bool {
        self.var == other.var && self.negated != other.negated
    }

    pub fn eval(self, values: &[bool]) -> bool {
        values[self.var] != self.negated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max3Sat {
    pub variables: usize,
    pub clauses: Vec<[Literal; 3]>,
}

/// Weighted independent set reduction: one node per literal occurrence
/// (index `3c + t`), reward `-1` per selected node, a soft
/// [`CLAUSE_PENALTY`] triangle inside each clause and hard
/// [`CONFLICT_PENALTY`] edges between complementary literals.
///
/// `clauses` use DIMACS literals over variables `1..=variables`.
pub fn build_max3sat(variables: usize, clauses: &[Vec<i64>]) -> Result<(ProblemInstance, QuboMatrix)> {
    if clauses.is_empty() {
        return Err(input_error("formula has no clauses"));
    }
    let mut parsed = Vec::with_capacity(clauses.len());
    for (c, clause) in clauses.iter().enumerate() {
        if clause.len() != 3 {
            return Err(input_error(format!("clause {c} has {} literals, expected 3", clause.len())));
        }
        let mut lits = [Literal { var: 0, negated: false }; 3];
        for (slot, &raw) in lits.iter_mut().zip(clause) {
            *slot = Literal::from_dimacs(raw)
                .filter(|l| l.var < variables)
                .ok_or_else(|| input_error(format!("clause {c}: literal {raw} out of range")))?;
        }
        parsed.push(lits);
    }
    let p = Max3Sat { variables, clauses: parsed };
    let q = p.qubo()?;
    Ok((ProblemInstance::Max3Sat(p), q))
}

impl Max3Sat {
    fn nodes(&self) -> impl Iterator<Item = (usize, Literal)> + '_ {
        self.clauses.iter().enumerate().flat_map(|(c, lits)| {
            lits.iter().enumerate().map(move |(t, &l)| (3 * c + t, l))
        })
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let mut t = Terms::default();
        for (node, _) in self.nodes() {
            t.add(node, node, -1.0, ConstraintTag::Soft);
        }
        let nodes: Vec<(usize, Literal)> = self.nodes().collect();
        for (k, &(u, lu)) in nodes.iter().enumerate() {
            for &(v, lv) in &nodes[k + 1..] {
                if lu.complements(lv) {
                    t.add(u, v, CONFLICT_PENALTY, ConstraintTag::Hard);
                } else if u / 3 == v / 3 {
                    t.add(u, v, CLAUSE_PENALTY, ConstraintTag::Soft);
                }
            }
        }
        t.into_qubo(3 * self.clauses.len())
    }

    pub fn satisfied(&self, values: &[bool]) -> usize {
        self.clauses.iter().filter(|c| c.iter().any(|l| l.eval(values))).count()
    }

    /// The first selected node (by index) fixing a variable wins; untouched
    /// variables are false.
    pub fn truth_values(&self, a: &Assignment) -> Vec<bool> {
        let mut values = alloc::vec![false; self.variables];
        let mut fixed = alloc::vec![false; self.variables];
        for (node, lit) in self.nodes() {
            if a.get(node) && !fixed[lit.var] {
                fixed[lit.var] = true;
                values[lit.var] = !lit.negated;
            }
        }
        values
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let values = self.truth_values(a);
        let satisfied = self.satisfied(&values);
        DecodedSolution { solution: Solution::Truth { values, satisfied }, valid: true }
    }
}
