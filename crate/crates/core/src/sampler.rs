//! Classical samplers: simulated annealing, a uniform random baseline and a
//! brute-force ground-truth oracle.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubo::{Assignment, QuboMatrix};

pub const DEFAULT_SWEEPS: usize = 1000;
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSchedule {
    /// Start where the stiffest flip is accepted with probability 1/2, end
    /// where a flip costing the smallest coefficient is accepted below 1%.
    Auto,
    Range { start: f64, end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams {
    pub sweeps: usize,
    pub beta: BetaSchedule,
    /// Independent anneals per sample; the best one is returned.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams { sweeps: DEFAULT_SWEEPS, beta: BetaSchedule::Auto, restarts: 1, seed: 0 }
    }
}

impl SaParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sweeps(mut self, sweeps: usize) -> Self {
        self.sweeps = sweeps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::Parameter("sweeps must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Parameter("restarts must be at least 1".into()));
        }
        if let BetaSchedule::Range { start, end } = self.beta {
            if !(start > 0.0 && start < end && end.is_finite()) {
                return Err(Error::Parameter("need 0 < beta_start < beta_end".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleSource {
    SimAnneal,
    RandomBaseline,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub assignment: Assignment,
    pub energy: f64,
    pub source: SampleSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub n_runs: usize,
    pub params: Option<SaParams>,
}

impl SampleSet {
    pub fn mean_energy(&self) -> f64 {
        self.samples.iter().map(|s| s.energy).sum::<f64>() / self.samples.len() as f64
    }

    /// Lowest energy, earliest run on ties.
    pub fn best(&self) -> Option<&Sample> {
        self.samples.iter().reduce(|b, s| if s.energy < b.energy { s } else { b })
    }
}

/// Diagonal plus symmetric coupling lists, built once per QUBO.
struct Couplings {
    linear: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    fn new(q: &QuboMatrix) -> Self {
        let (linear, neighbors) = q.adjacency();
        Couplings { linear, neighbors }
    }

    /// `h_i = c_i + Σ_j c_ij x_j`: the energy change of switching `x_i` on.
    fn fields(&self, bits: &[bool]) -> Vec<f64> {
        (0..self.linear.len())
            .map(|i| {
                self.linear[i]
                    + self.neighbors[i].iter().filter(|(j, _)| bits[*j]).map(|(_, c)| c).sum::<f64>()
            })
            .collect()
    }

    fn flip(&self, bits: &mut [bool], fields: &mut [f64], i: usize) {
        bits[i] = !bits[i];
        let sign = if bits[i] { 1.0 } else { -1.0 };
        for &(j, c) in &self.neighbors[i] {
            fields[j] += sign * c;
        }
    }

    fn beta_range(&self, schedule: BetaSchedule) -> (f64, f64) {
        match schedule {
            BetaSchedule::Range { start, end } => (start, end),
            BetaSchedule::Auto => {
                let mut hottest = 0.0f64;
                let mut smallest = f64::INFINITY;
                for (i, nbrs) in self.neighbors.iter().enumerate() {
                    let mut stiffness = libm::fabs(self.linear[i]);
                    if self.linear[i] != 0.0 {
                        smallest = smallest.min(libm::fabs(self.linear[i]));
                    }
                    for &(_, c) in nbrs {
                        stiffness += libm::fabs(c);
                        smallest = smallest.min(libm::fabs(c));
                    }
                    hottest = hottest.max(stiffness);
                }
                if hottest == 0.0 {
                    return (1.0, 1.0);
                }
                (core::f64::consts::LN_2 / hottest, libm::log(100.0) / smallest)
            }
        }
    }
}

fn anneal_once<R: Rng>(
    q: &QuboMatrix,
    couplings: &Couplings,
    sweeps: usize,
    (beta_start, beta_end): (f64, f64),
    rng: &mut R,
) -> (Vec<bool>, f64) {
    let n = q.num_variables();
    let mut bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut fields = couplings.fields(&bits);
    let mut energy = q.energy_unchecked(&bits);
    let mut best = (bits.clone(), energy);
    let mut order: Vec<usize> = (0..n).collect();
    let ratio = beta_end / beta_start;
    for sweep in 0..sweeps {
        let beta = if sweeps == 1 {
            beta_start
        } else {
            beta_start * libm::pow(ratio, sweep as f64 / (sweeps - 1) as f64)
        };
        order.shuffle(rng);
        for &i in &order {
            let delta = if bits[i] { -fields[i] } else { fields[i] };
            if delta <= 0.0 || rng.random::<f64>() < libm::exp(-beta * delta) {
                couplings.flip(&mut bits, &mut fields, i);
                energy += delta;
                if energy < best.1 {
                    best.0.copy_from_slice(&bits);
                    best.1 = energy;
                }
            }
        }
    }
    best
}

/// Single-flip Metropolis annealing over a geometric inverse-temperature
/// ladder; returns the lowest-energy state visited.
pub fn simulated_anneal(q: &QuboMatrix, params: &SaParams) -> Result<Sample> {
    params.validate()?;
    let couplings = Couplings::new(q);
    let betas = couplings.beta_range(params.beta);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<(Vec<bool>, f64)> = None;
    for _ in 0..params.restarts {
        let run = anneal_once(q, &couplings, params.sweeps, betas, &mut rng);
        if best.as_ref().is_none_or(|b| run.1 < b.1) {
            best = Some(run);
        }
    }
    let (bits, _) = best.expect("restarts >= 1");
    let assignment = Assignment::from_bits(bits);
    // re-evaluate so the stored energy never carries accumulated rounding
    let energy = q.energy(&assignment)?;
    Ok(Sample { assignment, energy, source: SampleSource::SimAnneal })
}

/// Run `r` uses seed `params.seed + r`.
pub fn sample_many(q: &QuboMatrix, n_runs: usize, params: &SaParams) -> Result<SampleSet> {
    if n_runs == 0 {
        return Err(Error::Parameter("n_runs must be at least 1".into()));
    }
    let samples = (0..n_runs)
        .map(|r| simulated_anneal(q, &params.with_seed(params.seed.wrapping_add(r as u64))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleSet { samples, n_runs, params: Some(*params) })
}

/// Uniform independent bits. Energies are those of the empty QUBO (zero):
/// the baseline never sees the problem it is compared against.
pub fn random_baseline(n_bits: usize, n_runs: usize, seed: u64) -> Result<SampleSet> {
    if n_bits == 0 {
        return Err(Error::InvalidDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n_runs)
        .map(|_| Sample {
            assignment: Assignment::from_bits((0..n_bits).map(|_| rng.random_bool(0.5)).collect()),
            energy: 0.0,
            source: SampleSource::RandomBaseline,
        })
        .collect();
    Ok(SampleSet { samples, n_runs, params: None })
}

pub fn brute_force(q: &QuboMatrix) -> Result<Sample> {
    brute_force_with_cap(q, DEFAULT_BRUTE_FORCE_CAP)
}

/// Exact minimum over all `2^n` assignments, walked in Gray-code order.
/// Ties go to the lexicographically smallest bit vector (`x_0` first).
pub fn brute_force_with_cap(q: &QuboMatrix, cap: usize) -> Result<Sample> {
    let n = q.num_variables();
    if n > cap || n >= 63 {
        return Err(Error::TooLarge { n, cap });
    }
    let couplings = Couplings::new(q);
    let mut bits = alloc::vec![false; n];
    let mut fields = couplings.fields(&bits);
    let mut energy = q.offset();
    let (mut best_mask, mut best_energy) = (0u64, energy);
    let mut mask = 0u64;
    // lexicographic on (x_0, x_1, ...): the lowest differing bit decides
    let lex_less = |a: u64, b: u64| {
        let d = a ^ b;
        d != 0 && a & (d & d.wrapping_neg()) == 0
    };
    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        energy += if bits[i] { -fields[i] } else { fields[i] };
        couplings.flip(&mut bits, &mut fields, i);
        mask ^= 1 << i;
        if energy < best_energy || (energy == best_energy && lex_less(mask, best_mask)) {
            best_energy = energy;
            best_mask = mask;
        }
    }
    let assignment = Assignment::from_index(n, best_mask);
    let energy = q.energy(&assignment)?;
    Ok(Sample { assignment, energy, source: SampleSource::BruteForce })
}
