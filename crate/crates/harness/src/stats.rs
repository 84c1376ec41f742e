//! One-sided Mann–Whitney U test (normal approximation with tie and
//! continuity corrections).

use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// U statistic of the first sample.
    pub u: f64,
    /// p-value for "the first sample tends to be larger".
    pub p_greater: f64,
    /// p-value for "the first sample tends to be smaller".
    pub p_less: f64,
}

/// Mid-ranks (1-based) of the pooled samples, plus `Σ (t³ - t)` over tie groups.
fn ranks(pooled: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut rank = vec![0.0; pooled.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            rank[k] = mid;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    (rank, ties)
}

/// Both samples must be non-empty. When every value is tied there is no
/// evidence either way and both p-values are 1.
pub fn mann_whitney(x: &[f64], y: &[f64]) -> MannWhitney {
    assert!(!x.is_empty() && !y.is_empty(), "samples must be non-empty");
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let (rank, ties) = ranks(&pooled);
    let rx: f64 = rank[..x.len()].iter().sum();
    let u = rx - nx * (nx + 1.0) / 2.0;
    let n = nx + ny;
    let var = nx * ny / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return MannWhitney { u, p_greater: 1.0, p_less: 1.0 };
    }
    let sd = var.sqrt();
    let mean = nx * ny / 2.0;
    let z = Normal::standard();
    MannWhitney {
        u,
        p_greater: 1.0 - z.cdf((u - mean - 0.5) / sd),
        p_less: z.cdf((u - mean + 0.5) / sd),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_samples() {
        let x: Vec<f64> = (10..30).map(f64::from).collect();
        let y: Vec<f64> = (0..20).map(f64::from).collect();
        let t = mann_whitney(&x, &y);
        assert!(t.p_greater < 0.01, "{t:?}");
        assert!(t.p_less > 0.99);
        let back = mann_whitney(&y, &x);
        assert_eq!(back.u, 20.0 * 20.0 - t.u);
        assert!((back.p_less - t.p_greater).abs() < 1e-12);
    }

    #[test]
    fn textbook_example() {
        // U = 1 for x = {1, 2, 4}, y = {3, 5, 6, 7}
        let t = mann_whitney(&[1.0, 2.0, 4.0], &[3.0, 5.0, 6.0, 7.0]);
        assert_eq!(t.u, 1.0);
        // z = (1 - 6 + 0.5) / sqrt(8) for the lower tail
        let expected = Normal::standard().cdf(-4.5 / 8f64.sqrt());
        assert!((t.p_less - expected).abs() < 1e-12);
    }

    #[test]
    fn ties_and_degenerate_input() {
        let (r, ties) = ranks(&[2.0, 1.0, 2.0, 3.0]);
        assert_eq!(r, [2.5, 1.0, 2.5, 4.0]);
        assert_eq!(ties, 6.0);
        let t = mann_whitney(&[1.0; 5], &[1.0; 7]);
        assert_eq!((t.p_greater, t.p_less), (1.0, 1.0));
    }
}
