use alloc::format;
use alloc::vec::Vec;

use super::{
    check_positive, chosen, input_error, DecodedSolution, Penalty, ProblemInstance, Solution,
    Terms,
};
use crate::error::{Error, Result};
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

/// Airport gate assignment.
///
/// `passengers` is `(n+2) × (n+2)`: row 0 is the dummy origin plane and
/// column `n+1` the dummy destination. `distances` is `(m+2) × (m+2)` with
/// the entrance at 0 and the exit at `m+1`. `costs` is `n × m`. Variable
/// `x_{i,k}` (plane `i`, gate `k`, both zero-based over real planes and
/// gates) has index `i·m + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Agap {
    pub planes: usize,
    pub gates: usize,
    pub passengers: Vec<Vec<f64>>,
    pub distances: Vec<Vec<f64>>,
    pub costs: Vec<Vec<f64>>,
    pub penalty: Penalty,
}

fn check_matrix(name: &str, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(input_error(format!("{name} must be {rows}x{cols}")));
    }
    if m.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(input_error(format!("{name} entries must be finite and non-negative")));
    }
    Ok(())
}

/// Builds the transfer objective plus the two exactly-one penalties.
///
/// With `penalty = None` both weights default to `1 + bound` (rounded up),
/// where `bound = (Σ p)·max(d) + n·Σ a` dominates the soft objective of any
/// assignment that satisfies the penalties.
pub fn build_agap(
    planes: usize,
    gates: usize,
    passengers: Vec<Vec<f64>>,
    distances: Vec<Vec<f64>>,
    costs: Vec<Vec<f64>>,
    penalty: Option<Penalty>,
) -> Result<(ProblemInstance, QuboMatrix)> {
    if planes == 0 || gates == 0 {
        return Err(input_error("AGAP needs at least one plane and one gate"));
    }
    check_matrix("passenger matrix", &passengers, planes + 2, planes + 2)?;
    check_matrix("distance matrix", &distances, gates + 2, gates + 2)?;
    check_matrix("cost matrix", &costs, planes, gates)?;
    let mut p = Agap {
        planes,
        gates,
        passengers,
        distances,
        costs,
        penalty: Penalty::new(0.0, 0.0),
    };
    p.penalty = match penalty {
        Some(w) => w,
        None => {
            let w = libm::ceil(1.0 + p.objective_bound());
            Penalty::new(w, w)
        }
    };
    check_positive("A", p.penalty.a)?;
    check_positive("B", p.penalty.b)?;
    let q = p.qubo()?;
    Ok((ProblemInstance::Agap(p), q))
}

impl Agap {
    pub fn var(&self, plane: usize, gate: usize) -> usize {
        plane * self.gates + gate
    }

    pub fn objective_bound(&self) -> f64 {
        let p_sum: f64 = self.passengers.iter().flatten().sum();
        let d_max = self.distances.iter().flatten().fold(0.0f64, |m, &v| m.max(v));
        let a_sum: f64 = self.costs.iter().flatten().sum();
        p_sum * d_max + self.planes as f64 * a_sum
    }

    /// Coefficient of `x_{i,k} x_{j,l}` in the quadruple sum.
    fn pair_cost(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        self.passengers[i + 1][j + 1] * self.distances[k + 1][l + 1] + self.costs[i][k]
    }

    /// Boarding and alighting walk for plane `i` at gate `k`.
    fn endpoint_cost(&self, i: usize, k: usize) -> f64 {
        let (n, m) = (self.planes, self.gates);
        self.passengers[0][i + 1] * self.distances[0][k + 1]
            + self.passengers[i + 1][n + 1] * self.distances[k + 1][m + 1]
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let (n, m) = (self.planes, self.gates);
        let mut t = Terms::default();
        for i in 0..n {
            for k in 0..m {
                let xi = self.var(i, k);
                t.add(xi, xi, self.endpoint_cost(i, k), ConstraintTag::Soft);
                for j in 0..n {
                    for l in 0..m {
                        t.add(xi, self.var(j, l), self.pair_cost(i, k, j, l), ConstraintTag::Soft);
                    }
                }
            }
        }
        for i in 0..n {
            let row: Vec<usize> = (0..m).map(|k| self.var(i, k)).collect();
            t.one_hot(&row, self.penalty.a, ConstraintTag::Hard);
        }
        for k in 0..m {
            let col: Vec<usize> = (0..n).map(|i| self.var(i, k)).collect();
            t.one_hot(&col, self.penalty.b, ConstraintTag::Hard);
        }
        t.into_qubo(n * m)
    }

    /// Soft objective evaluated directly on the bits (valid or not).
    pub fn objective(&self, a: &Assignment) -> f64 {
        let (n, m) = (self.planes, self.gates);
        let on: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..m).map(move |k| (i, k))).filter(|&(i, k)| a.get(self.var(i, k))).collect();
        let mut total = 0.0;
        for &(i, k) in &on {
            total += self.endpoint_cost(i, k);
            for &(j, l) in &on {
                total += self.pair_cost(i, k, j, l);
            }
        }
        total
    }

    /// Objective of a complete plane → gate map.
    pub fn assignment_cost(&self, gate_of: &[usize]) -> Result<f64> {
        if gate_of.len() != self.planes || gate_of.iter().any(|&g| g >= self.gates) {
            return Err(Error::Input("gate map does not match the instance".into()));
        }
        let mut total = 0.0;
        for (i, &k) in gate_of.iter().enumerate() {
            total += self.endpoint_cost(i, k);
            for (j, &l) in gate_of.iter().enumerate() {
                total += self.pair_cost(i, k, j, l);
            }
        }
        Ok(total)
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let (n, m) = (self.planes, self.gates);
        let gate_of: Vec<Option<usize>> = (0..n)
            .map(|i| {
                let picks = chosen(a, (0..m).map(|k| self.var(i, k)));
                (picks.len() == 1).then(|| picks[0])
            })
            .collect();
        let cols_ok = (0..m).all(|k| chosen(a, (0..n).map(|i| self.var(i, k))).len() == 1);
        let valid = cols_ok && gate_of.iter().all(Option::is_some);
        DecodedSolution {
            solution: Solution::Gates { gate_of, objective: self.objective(a) },
            valid,
        }
    }
}
