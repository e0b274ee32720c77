//! Analytic cost model of a k-way natural merge sort.
//!
//! With `ℓ` initial runs of average length `r`, each merge pass divides the
//! run count by `k`, so sorting takes `⌈log_k ℓ⌉` passes. If the `k`-way
//! merges within a pass run in parallel, pass `i` costs `k^i · r` element
//! moves; if they run one after another every pass costs `N = ℓ · r`.

use num_rational::Ratio;

/// `⌈log_k ℓ⌉` for `ℓ ≥ 2`, zero otherwise. Integer arithmetic only.
pub fn predicted_iterations(runs: u64, k: u64) -> u32 {
    assert!(k >= 2, "merge order must be at least 2");
    let mut iterations = 0;
    let mut reach: u128 = 1;
    while reach < runs as u128 {
        reach *= k as u128;
        iterations += 1;
    }
    iterations
}

fn widen(r: Ratio<u64>) -> Ratio<u128> {
    Ratio::new(*r.numer() as u128, *r.denom() as u128)
}

/// Sum of `k^i · r` over passes `i = 1..=⌈log_k ℓ⌉` (parallel merges).
///
/// Pass 0 (forming the initial runs) is not charged.
pub fn predicted_work(runs: u64, k: u64, avg_run_length: Ratio<u64>) -> Ratio<u128> {
    let passes = predicted_iterations(runs, k);
    let r = widen(avg_run_length);
    let mut total = Ratio::from_integer(0u128);
    let mut k_pow = 1u128;
    for _ in 0..passes {
        k_pow *= k as u128;
        total += r * k_pow;
    }
    total
}

/// `⌈log_k ℓ⌉ · N` with `N = ℓ · r` (merges within a pass run sequentially).
pub fn predicted_work_sequential(runs: u64, k: u64, avg_run_length: Ratio<u64>) -> Ratio<u128> {
    let passes = predicted_iterations(runs, k) as u128;
    widen(avg_run_length) * (runs as u128) * passes
}

/// `log(N / S) / log(N)`: the predicted work of sorting `S` equal
/// partitions relative to sorting the whole input.
pub fn predicted_complexity_ratio(n: u64, segments: u64) -> f64 {
    assert!(segments >= 1 && n >= segments, "need N >= S >= 1");
    if segments == 1 {
        return 1.0;
    }
    ((n as f64).ln() - (segments as f64).ln()) / (n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterations() {
        assert_eq!(predicted_iterations(1000, 10), 3);
        assert_eq!(predicted_iterations(1001, 10), 4);
        assert_eq!(predicted_iterations(11, 10), 2);
        assert_eq!(predicted_iterations(10, 10), 1);
        assert_eq!(predicted_iterations(2, 10), 1);
        assert_eq!(predicted_iterations(1, 10), 0);
        assert_eq!(predicted_iterations(0, 3), 0);
        assert_eq!(predicted_iterations(u64::MAX, 2), 64);
    }

    #[test]
    fn iterations_match_float_log() {
        for k in 2..12u64 {
            for runs in 2..5000u64 {
                // Exact powers are the only place float rounding could bite.
                let mut expected = 0;
                let mut p = 1;
                while p < runs {
                    p *= k;
                    expected += 1;
                }
                assert_eq!(predicted_iterations(runs, k), expected);
                let approx = (runs as f64).ln() / (k as f64).ln();
                assert!((expected as f64 - approx) < 1.0 + 1e-9 && expected as f64 + 1e-9 >= approx);
            }
        }
    }

    #[test]
    fn work() {
        let r = Ratio::from_integer(5);
        assert_eq!(predicted_work(100, 10, r), Ratio::from_integer(550));
        assert_eq!(predicted_work_sequential(100, 10, r), Ratio::from_integer(1000));
        assert_eq!(predicted_work(1, 10, r), Ratio::from_integer(0));
        assert_eq!(predicted_work_sequential(1, 10, r), Ratio::from_integer(0));
        // 7 values in 2 runs: one pass.
        assert_eq!(predicted_work(2, 10, Ratio::new(7, 2)), Ratio::from_integer(35));
    }

    #[test]
    fn complexity_ratio() {
        assert_eq!(predicted_complexity_ratio(1_000_000, 1), 1.0);
        assert!((predicted_complexity_ratio(1 << 20, 1 << 4) - 0.8).abs() < 1e-12);
        assert_eq!(predicted_complexity_ratio(64, 64), 0.0);
    }
}
