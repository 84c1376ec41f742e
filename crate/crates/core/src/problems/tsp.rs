use alloc::format;
use alloc::vec::Vec;

use super::{
    check_positive, input_error, permutation, DecodedSolution, Penalty, ProblemInstance, Solution,
    Terms,
};
use crate::error::{Error, Result};
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

/// Travelling salesperson on a complete directed weight matrix.
///
/// `x_{v,j}` (city `v` at tour position `j`) has index `v·N + j`; positions
/// wrap so the last city connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Tsp {
    pub weights: Vec<Vec<f64>>,
    pub start: usize,
    pub penalty: Penalty,
}

/// Default weights are `B = 1` and `A = ⌈max W⌉ + 1`.
pub fn build_tsp(
    weights: Vec<Vec<f64>>,
    start: usize,
    penalty: Option<Penalty>,
) -> Result<(ProblemInstance, QuboMatrix)> {
    let n = weights.len();
    if n < 2 || weights.iter().any(|r| r.len() != n) {
        return Err(input_error("TSP weight matrix must be square with at least 2 cities"));
    }
    if start >= n {
        return Err(input_error(format!("start city {start} out of range")));
    }
    for (u, row) in weights.iter().enumerate() {
        for (v, &w) in row.iter().enumerate() {
            if u != v && !(w.is_finite() && w > 0.0) {
                return Err(input_error(format!("weight ({u}, {v}) must be positive")));
            }
        }
    }
    let mut p = Tsp { weights, start, penalty: Penalty::new(0.0, 1.0) };
    let max_w = p.max_weight();
    p.penalty = penalty.unwrap_or_else(|| Penalty::new(libm::ceil(max_w) + 1.0, 1.0));
    check_positive("A", p.penalty.a)?;
    check_positive("B", p.penalty.b)?;
    if p.penalty.b * max_w >= p.penalty.a {
        return Err(Error::Parameter(format!(
            "TSP weights violate 0 < B·max(W) < A (B·max(W) = {}, A = {})",
            p.penalty.b * max_w,
            p.penalty.a
        )));
    }
    let q = p.qubo()?;
    Ok((ProblemInstance::Tsp(p), q))
}

impl Tsp {
    pub fn cities(&self) -> usize {
        self.weights.len()
    }

    pub fn var(&self, city: usize, position: usize) -> usize {
        city * self.cities() + position
    }

    pub fn max_weight(&self) -> f64 {
        let n = self.cities();
        (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .map(|(u, v)| self.weights[u][v])
            .fold(0.0, f64::max)
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let n = self.cities();
        let Penalty { a, b } = self.penalty;
        let mut t = Terms::default();
        for v in 0..n {
            let row: Vec<usize> = (0..n).map(|j| self.var(v, j)).collect();
            t.one_hot(&row, a, ConstraintTag::Hard);
        }
        for j in 0..n {
            let col: Vec<usize> = (0..n).map(|v| self.var(v, j)).collect();
            t.one_hot(&col, a, ConstraintTag::Hard);
        }
        for u in 0..n {
            for v in (0..n).filter(|&v| v != u) {
                for j in 0..n {
                    let w = b * self.weights[u][v];
                    t.add(self.var(u, j), self.var(v, (j + 1) % n), w, ConstraintTag::Soft);
                }
            }
        }
        t.into_qubo(n * n)
    }

    /// Closed-tour weight of a city sequence.
    pub fn tour_weight(&self, tour: &[usize]) -> f64 {
        (0..tour.len()).map(|k| self.weights[tour[k]][tour[(k + 1) % tour.len()]]).sum()
    }

    /// `Σ_{u≠v} W_uv Σ_j x_{u,j} x_{v,j+1}` on arbitrary bits.
    pub fn raw_weight(&self, a: &Assignment) -> f64 {
        let n = self.cities();
        let mut total = 0.0;
        for j in 0..n {
            for u in (0..n).filter(|&u| a.get(self.var(u, j))) {
                for v in (0..n).filter(|&v| v != u && a.get(self.var(v, (j + 1) % n))) {
                    total += self.weights[u][v];
                }
            }
        }
        total
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let n = self.cities();
        // rows are cities, columns positions; invert to position -> city
        let tour = permutation(a, n, n).map(|pos_of| {
            let mut order = alloc::vec![0; n];
            for (city, &pos) in pos_of.iter().enumerate() {
                order[pos] = city;
            }
            let shift = order.iter().position(|&c| c == self.start).expect("permutation");
            order.rotate_left(shift);
            order
        });
        let valid = tour.is_some();
        DecodedSolution { solution: Solution::Tour { tour, weight: self.raw_weight(a) }, valid }
    }
}
