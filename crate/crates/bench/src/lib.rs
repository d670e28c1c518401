//! Fixed inputs shared by the benchmarks.

use lotto_core::{GameConfig, MonetaryParams, PreAllocation};

/// A stage-2 instance with `n` battlefields and an uneven pre-allocation.
pub fn stage2_instance(n: usize) -> (PreAllocation, GameConfig) {
    let raw: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let s: f64 = raw.iter().sum();
    let w: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let p: Vec<f64> = (0..n)
        .map(|i| 0.1 + 0.3 * ((i * 7) % 5) as f64 / 4.0)
        .collect();
    let p = PreAllocation::new(p).expect("non-negative");
    let cfg = GameConfig::new(w, p.total, 1.2, 1.5);
    (p, cfg)
}

/// One parameter set per leader-follower case.
pub fn monetary_cases() -> Vec<(&'static str, MonetaryParams)> {
    [("weak", 0.2), ("middle", 0.5), ("strong", 2.0)]
        .into_iter()
        .map(|(name, m_b)| {
            (
                name,
                MonetaryParams::new(0.5, 0.2, m_b, 0.5).expect("valid"),
            )
        })
        .collect()
}
