use super::{certified, check_dims, soe_residuals, KappaSolution, SolveMethod, MEMBERSHIP_TOL};
use crate::error::{LottoError, Result};
use crate::game::{GameConfig, PreAllocation};

/// Battlefield indices sorted by `p_b / w_b` descending, ties by index.
pub(crate) fn ratio_order(p: &PreAllocation, w: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let ratios: Vec<f64> = p.p.iter().zip(w).map(|(pb, wb)| pb / wb).collect();
    let mut order: Vec<usize> = (0..ratios.len()).collect();
    order.sort_by(|&i, &j| ratios[j].total_cmp(&ratios[i]).then(i.cmp(&j)));
    (order, ratios)
}

/// Solve the multiplier system by enumerating the upper sets of the
/// `p_b / w_b` order and solving each candidate partition in closed form.
pub fn solve_partition_closed(p: &PreAllocation, cfg: &GameConfig) -> Result<KappaSolution> {
    check_dims(p, cfg)?;
    if cfg.r_a == 0.0 {
        return Err(LottoError::ZeroRealTimeA);
    }
    let (order, ratios) = ratio_order(p, &cfg.w);
    let n = order.len();

    // candidate B1 sizes; tied ratios enter together
    let mut cuts = vec![0];
    for k in 1..n {
        if ratios[order[k]] != ratios[order[k - 1]] {
            cuts.push(k);
        }
    }
    cuts.push(n);

    for &cut in cuts.iter().rev() {
        let (b1, b2) = order.split_at(cut);
        let Some((ka, kb)) = candidate(b1, b2, p, cfg) else {
            continue;
        };
        if !consistent(ka, kb, b1, b2, &ratios) {
            continue;
        }
        let res = soe_residuals(ka, kb, p, cfg);
        if !certified(res, cfg) {
            continue;
        }
        let mut partition_b1 = b1.to_vec();
        let mut partition_b2 = b2.to_vec();
        partition_b1.sort_unstable();
        partition_b2.sort_unstable();
        return Ok(KappaSolution {
            kappa_a: ka,
            kappa_b: kb,
            partition_b1,
            partition_b2,
            residual_a: res.0,
            residual_b: res.1,
            method: SolveMethod::ClosedFormPartition,
        });
    }
    Err(LottoError::NoConsistentPartition)
}

// Both budget equations restricted to a fixed partition reduce to
//   W1 kb^2 + W2 ka^2 = 2 C1 kb - S = 2 C2 ka + S,
// hence C1 kb = C2 ka + S and a quadratic in each multiplier.
fn candidate(
    b1: &[usize],
    b2: &[usize],
    p: &PreAllocation,
    cfg: &GameConfig,
) -> Option<(f64, f64)> {
    let (mut w1, mut p1, mut s) = (0.0, 0.0, 0.0);
    for &b in b1 {
        let (pb, wb) = (p.p[b], cfg.w[b]);
        w1 += wb;
        p1 += pb;
        s += pb * pb / wb;
    }
    let (mut w2, mut p2) = (0.0, 0.0);
    for &b in b2 {
        w2 += cfg.w[b];
        p2 += p.p[b];
    }
    let c1 = cfg.r_a + p1;
    let c2 = cfg.effective_r_b() - p2;
    let h1 = c1 * c1 - w1 * s;
    let h2 = c2 * c2 + w2 * s;
    let a = w1 * c2 * c2 + w2 * c1 * c1;
    let hh = h1 * h2;
    if a.is_nan() || a <= 0.0 || hh.is_nan() || hh < 0.0 {
        return None;
    }
    let root = hh.sqrt();

    // a ka^2 - 2 C2 H1 ka - S H1 = 0, larger root
    let lin = c2 * h1;
    let sq = c1 * root;
    let ka = if lin >= 0.0 {
        (lin + sq) / a
    } else {
        let q = lin - sq;
        if q == 0.0 {
            return None;
        }
        -s * h1 / q
    };
    if !ka.is_finite() || ka <= 0.0 {
        return None;
    }

    // a kb^2 - 2 C1 H2 kb + S H2 = 0; pick the root matching C1 kb = C2 ka + S
    let kb_lin = (c2 * ka + s) / c1;
    let big = (c1 * h2 + c2.abs() * root) / a;
    let small = if big > 0.0 { s * h2 / (a * big) } else { 0.0 };
    let kb = if (big - kb_lin).abs() <= (small - kb_lin).abs() {
        big
    } else {
        small
    };
    if !kb.is_finite() || kb <= 0.0 {
        return None;
    }
    Some((ka, kb))
}

fn consistent(ka: f64, kb: f64, b1: &[usize], b2: &[usize], ratios: &[f64]) -> bool {
    let gap = kb - ka;
    let tol = MEMBERSHIP_TOL * 1f64.max(ka).max(kb);
    b1.iter().all(|&b| gap <= ratios[b] + tol) && b2.iter().all(|&b| gap > ratios[b] - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn all_b1_single() {
        let p = PreAllocation::new(vec![1.0]).unwrap();
        let cfg = GameConfig::single(1.0, 1.0, 1.0);
        let sol = solve_partition_closed(&p, &cfg).unwrap();
        let s3 = 3f64.sqrt();
        assert_relative_eq!(sol.kappa_b, 2.0 + s3, max_relative = 1e-14);
        assert_relative_eq!(sol.kappa_a, 3.0 + 2.0 * s3, max_relative = 1e-14);
        assert_eq!(sol.partition_b1, vec![0]);
        assert!(sol.partition_b2.is_empty());
    }

    #[test]
    fn all_b2_single() {
        let p = PreAllocation::new(vec![0.2]).unwrap();
        let cfg = GameConfig::single(0.2, 0.1, 1.0);
        let sol = solve_partition_closed(&p, &cfg).unwrap();
        assert_relative_eq!(sol.kappa_a, 1.6, max_relative = 1e-14);
        assert_relative_eq!(sol.kappa_b, 12.8, max_relative = 1e-14);
        assert_eq!(sol.partition_b2, vec![0]);
    }

    #[test]
    fn proportional_collapses_to_single() {
        let p = PreAllocation::new(vec![0.5, 0.5]).unwrap();
        let cfg = GameConfig::new(vec![0.5, 0.5], 1.0, 1.0, 1.0);
        let sol = solve_partition_closed(&p, &cfg).unwrap();
        let single = solve_partition_closed(
            &PreAllocation::new(vec![1.0]).unwrap(),
            &GameConfig::single(1.0, 1.0, 1.0),
        )
        .unwrap();
        assert_relative_eq!(sol.kappa_a, single.kappa_a, max_relative = 1e-14);
        assert_relative_eq!(sol.kappa_b, single.kappa_b, max_relative = 1e-14);
        assert_eq!(sol.partition_b1, vec![0, 1]);
        // kappa_B = P + R_A + sqrt(R_A (R_A + 2P))
        assert_relative_eq!(sol.kappa_b, 2.0 + 3f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn no_preallocation_matches_baseline() {
        let p = PreAllocation::new(vec![0.0, 0.0, 0.0]).unwrap();
        let cfg = GameConfig::new(vec![0.2, 0.3, 0.5], 0.0, 0.5, 1.0);
        let sol = solve_partition_closed(&p, &cfg).unwrap();
        // tied ratios move as one group
        assert!(sol.partition_b1.is_empty() || sol.partition_b1.len() == 3);
        assert!(certified((sol.residual_a, sol.residual_b), &cfg));
    }

    #[test]
    fn zero_real_time_rejected() {
        let p = PreAllocation::new(vec![1.0]).unwrap();
        let cfg = GameConfig::single(1.0, 0.0, 1.0);
        assert_eq!(
            solve_partition_closed(&p, &cfg),
            Err(LottoError::ZeroRealTimeA)
        );
    }
}
