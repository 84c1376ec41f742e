use alloc::format;
use alloc::vec::Vec;

use super::{check_positive, input_error, DecodedSolution, ProblemInstance, Solution, Terms};
use crate::error::Result;
use crate::qubo::{Assignment, ConstraintTag, QuboMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct NumberPartitioning {
    pub numbers: Vec<u64>,
    pub weight: f64,
}

/// `A (Σ_{S1} n_i - Σ_{S2} n_i)²` with `k = Σ n_i`:
/// couplings `8A n_i n_j`, diagonal `4A n_i² - 4A k n_i`, offset `A k²`.
pub fn build_number_partitioning(
    numbers: &[u64],
    weight: f64,
) -> Result<(ProblemInstance, QuboMatrix)> {
    check_positive("A", weight)?;
    if numbers.is_empty() {
        return Err(input_error("number partitioning needs a non-empty set"));
    }
    if let Some(i) = numbers.iter().position(|&x| x == 0) {
        return Err(input_error(format!("element {i} is not a positive integer")));
    }
    let p = NumberPartitioning { numbers: numbers.to_vec(), weight };
    let q = p.qubo()?;
    Ok((ProblemInstance::NumberPartitioning(p), q))
}

impl NumberPartitioning {
    pub fn total(&self) -> u64 {
        self.numbers.iter().sum()
    }

    pub(crate) fn qubo(&self) -> Result<QuboMatrix> {
        let a = self.weight;
        let k = self.total() as f64;
        let mut t = Terms::default();
        for (i, &ni) in self.numbers.iter().enumerate() {
            let ni = ni as f64;
            t.add(i, i, 4.0 * a * ni * ni - 4.0 * a * k * ni, ConstraintTag::Soft);
            for (j, &nj) in self.numbers.iter().enumerate().skip(i + 1) {
                t.add(i, j, 8.0 * a * ni * nj as f64, ConstraintTag::Soft);
            }
        }
        t.add_offset(a * k * k);
        t.into_qubo(self.numbers.len())
    }

    /// `|Σ_{side} n_i - Σ_{!side} n_i|`.
    pub fn difference(&self, side: &[bool]) -> u64 {
        let first: u64 = self.numbers.iter().zip(side).filter(|(_, &s)| s).map(|(n, _)| n).sum();
        first.abs_diff(self.total() - first)
    }

    pub(crate) fn decode(&self, a: &Assignment) -> DecodedSolution {
        let side = a.bits().to_vec();
        let difference = self.difference(&side);
        DecodedSolution { solution: Solution::Partition { side, difference }, valid: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_is_weighted_squared_difference() {
        let (_, q) = build_number_partitioning(&[4, 2, 2], 1.0).unwrap();
        assert_eq!(q.energy(&Assignment::from(&[1u8, 0, 0][..])).unwrap(), 0.0);
        let (_, q) = build_number_partitioning(&[3, 1], 1.0).unwrap();
        assert_eq!(q.energy(&Assignment::from(&[1u8, 0][..])).unwrap(), 4.0);
        let (_, q) = build_number_partitioning(&[3, 1], 2.5).unwrap();
        assert_eq!(q.energy(&Assignment::from(&[1u8, 0][..])).unwrap(), 10.0);
    }

    #[test]
    fn rejects_zero_and_bad_weight() {
        assert!(build_number_partitioning(&[3, 0], 1.0).is_err());
        assert!(build_number_partitioning(&[3, 1], 0.0).is_err());
        assert!(build_number_partitioning(&[], 1.0).is_err());
    }
}
