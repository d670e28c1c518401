use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{GameConfig, PreAllocation};
use crate::stackelberg::MonetaryParams;

pub(crate) fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub(crate) fn budget(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.05..=3.0)
}

/// Uniform point of the simplex scaled to `total`.
pub(crate) fn simplex(rng: &mut ChaCha8Rng, n: usize, total: f64) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x * total / s).collect()
}

pub(crate) fn weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Random game with a random (generally non-proportional) pre-allocation.
pub(crate) fn stage2_instance(rng: &mut ChaCha8Rng, ns: &[usize]) -> (PreAllocation, GameConfig) {
    let n = ns[rng.gen_range(0..ns.len())];
    let w = weights(rng, n);
    let pre = budget(rng);
    let p = PreAllocation::new(simplex(rng, n, pre)).expect("non-negative amounts");
    let cfg = GameConfig::new(w, p.total, budget(rng), budget(rng));
    (p, cfg)
}

pub(crate) fn monetary(rng: &mut ChaCha8Rng) -> MonetaryParams {
    MonetaryParams::new(
        rng.gen_range(0.1..3.0),
        rng.gen_range(0.05..0.95),
        rng.gen_range(0.1..3.0),
        rng.gen_range(0.05..0.95),
    )
    .expect("valid ranges")
}

/// Parameters whose follower budget ratio falls in the weak (0), middle (1)
/// or strong (2) range.
pub(crate) fn monetary_case(rng: &mut ChaCha8Rng, case: usize) -> MonetaryParams {
    let m_a = rng.gen_range(0.1..2.0);
    let c_a = rng.gen_range(0.05..0.95);
    let c_b = rng.gen_range(0.05..0.95);
    let max_a = m_a / c_a;
    let ratio = match case {
        0 => rng.gen_range(0.05 * m_a..m_a),
        1 => f64::max(rng.gen_range(m_a..max_a), m_a * (1.0 + 1e-6)),
        _ => rng.gen_range(max_a * 1.001..3.0 * max_a),
    };
    MonetaryParams::new(m_a, c_a, ratio * c_b, c_b).expect("valid ranges")
}
