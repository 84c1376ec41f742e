//! Largest-embeddable-size search over a size-parametric instance family.

use alloc::vec::Vec;

use super::{connectivity_graph, find_embedding, ChimeraGraph};
use crate::error::Result;
use crate::problems::generate::Family;
use crate::pruning::{prune, PruneStrategy};

/// Embedding attempts per size probe.
pub const DEFAULT_PROBE_ATTEMPTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    pub size: usize,
    /// `size` relative to the unpruned embeddable size; `None` when the
    /// unpruned family does not embed at any size.
    pub ratio: Option<f64>,
}

fn probe(
    family: Family,
    strategy: PruneStrategy,
    p: f64,
    gc: &ChimeraGraph,
    seed: u64,
    attempts: usize,
    size: usize,
) -> Result<bool> {
    let (_, q) = family.instance(size, seed)?;
    let pruned = prune(&q, strategy, p)?;
    Ok(find_embedding(&connectivity_graph(&pruned), gc, seed, attempts).is_some())
}

/// Largest size needing no more variables than `gc` has qubits.
fn size_cap(family: Family, gc: &ChimeraGraph) -> usize {
    let qubits = gc.qubit_count();
    let fits = |size: usize| family.variables(size) <= qubits;
    let mut a = family.min_size();
    while fits(a * 2) {
        a *= 2;
    }
    let mut b = a * 2;
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if fits(mid) { a = mid } else { b = mid }
    }
    a
}

/// Galloping search for the largest embeddable size. Starts from `hint`
/// when it embeds, with steps 1, 2, 4, ...; otherwise from the smallest
/// size, doubling.
fn search(
    family: Family,
    strategy: PruneStrategy,
    p: f64,
    gc: &ChimeraGraph,
    seed: u64,
    attempts: usize,
    hint: Option<usize>,
) -> Result<usize> {
    let lo_size = family.min_size();
    if family.variables(lo_size) > gc.qubit_count() {
        return Ok(0);
    }
    let cap = size_cap(family, gc);
    let embeds = |size: usize| probe(family, strategy, p, gc, seed, attempts, size);
    let (mut good, mut step) = match hint.filter(|&h| h > lo_size && h <= cap) {
        Some(h) if embeds(h)? => (h, 1),
        _ => {
            if !embeds(lo_size)? {
                return Ok(0);
            }
            (lo_size, lo_size)
        }
    };
    let mut bad = None;
    while good < cap {
        let next = (good + step).min(cap);
        if embeds(next)? {
            good = next;
            step *= 2;
        } else {
            bad = Some(next);
            break;
        }
    }
    if let Some(mut bad) = bad {
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if embeds(mid)? { good = mid } else { bad = mid }
        }
    }
    Ok(good)
}

/// Largest size whose `p`-pruned instance embeds into `gc`. Sizes needing
/// more variables than `gc` has qubits are never probed. Returns 0 if the
/// smallest size fails.
pub fn largest_embeddable(
    family: Family,
    strategy: PruneStrategy,
    p: f64,
    gc: &ChimeraGraph,
    seed: u64,
    attempts: usize,
) -> Result<usize> {
    search(family, strategy, p, gc, seed, attempts, None)
}

/// `(size, ratio)` at pruning level `p`, the ratio taken against `p = 0`.
pub fn max_embeddable_size(
    family: Family,
    strategy: PruneStrategy,
    p: f64,
    gc: &ChimeraGraph,
    seed: u64,
    attempts: usize,
) -> Result<(usize, Option<f64>)> {
    let base = largest_embeddable(family, strategy, 0.0, gc, seed, attempts)?;
    let size = if p == 0.0 { base } else { search(family, strategy, p, gc, seed, attempts, Some(base))? };
    Ok((size, ratio(size, base)))
}

fn ratio(size: usize, base: usize) -> Option<f64> {
    (base > 0).then(|| size as f64 / base as f64)
}

/// Embeddable size at every level in `ps`, sharing one `p = 0` baseline.
/// Each level's search starts from the previous level's size.
pub fn embeddable_curve(
    family: Family,
    strategy: PruneStrategy,
    ps: &[f64],
    gc: &ChimeraGraph,
    seed: u64,
    attempts: usize,
) -> Result<Vec<CurvePoint>> {
    let base = largest_embeddable(family, strategy, 0.0, gc, seed, attempts)?;
    let mut prev = base;
    let mut points = Vec::with_capacity(ps.len());
    for &p in ps {
        let size = if p == 0.0 { base } else { search(family, strategy, p, gc, seed, attempts, Some(prev))? };
        prev = size;
        points.push(CurvePoint { p, size, ratio: ratio(size, base) });
    }
    Ok(points)
}
