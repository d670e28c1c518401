//! Brute-force oracles: simplex lattice search over pre-allocations, scans
//! along budget lines, and a registry of named invariant checks.

mod checks;
mod sample;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LottoError, Result};
use crate::favoritism::stage2_payoff;
use crate::game::{positive, GameConfig, PreAllocation};
use crate::spe::spe_payoff;
use crate::stackelberg::{best_response_b, follower_payoff, MonetaryParams};

pub use checks::{run_check, run_suite, CHECKS};

/// Largest number of battlefields accepted by the lattice search.
pub const MAX_GRID_BATTLEFIELDS: usize = 4;

/// Payoffs within this distance of the best lattice value count as ties.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points per axis or simplex subdivisions.
    pub resolution: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            resolution: 40,
            seed: 7,
        }
    }
}

impl GridSpec {
    pub fn new(resolution: usize, seed: u64) -> Result<Self> {
        if resolution < 2 {
            return Err(LottoError::OutOfRange {
                name: "resolution",
                value: resolution as f64,
                range: ">= 2",
            });
        }
        Ok(Self { resolution, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub instances_run: usize,
    /// Largest signed violation; negative values mean slack.
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub worst_case_input: serde_json::Value,
}

/// All `k` with `sum k_b = m`, in lexicographic order.
pub fn simplex_lattice(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, m, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Best lattice pre-allocation for player A by exhaustive evaluation of the
/// stage-2 payoff. Ties are broken towards the proportional split.
pub fn grid_search_preallocation(
    cfg: &GameConfig,
    grid: &GridSpec,
) -> Result<(PreAllocation, f64)> {
    let n = cfg.n();
    if n > MAX_GRID_BATTLEFIELDS {
        return Err(LottoError::TooManyBattlefields {
            max: MAX_GRID_BATTLEFIELDS,
            got: n,
        });
    }
    if cfg.r_a == 0.0 {
        return Err(LottoError::ZeroRealTimeA);
    }
    let m = grid.resolution;
    let step = cfg.pre / m as f64;
    let points = simplex_lattice(n, m);
    let values = points
        .par_iter()
        .map(|k| {
            let p = lattice_point(k, step, cfg.pre);
            stage2_payoff(&p, cfg).map(|o| o.pi_a)
        })
        .collect::<Result<Vec<f64>>>()?;

    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let target: Vec<f64> = cfg.w.iter().map(|w| w * cfg.pre).collect();
    let (idx, _) = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= best - TIE_TOL)
        .map(|(i, _)| {
            (
                i,
                inf_dist(&lattice_point(&points[i], step, cfg.pre).p, &target),
            )
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("lattice is non-empty");
    Ok((lattice_point(&points[idx], step, cfg.pre), values[idx]))
}

fn lattice_point(k: &[usize], step: f64, total: f64) -> PreAllocation {
    PreAllocation {
        p: k.iter().map(|&kb| kb as f64 * step).collect(),
        total,
    }
}

pub(crate) fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetLineScan {
    pub p_best: f64,
    pub pi_best: f64,
    pub step: f64,
    /// Range of scanned `P` whose payoff is within `flat_tol` of the best.
    pub flat_interval: (f64, f64),
}

/// Scan `P` on `[0, M_A / c_A]` with `R_A = M_A - c_A P`.
pub fn budget_line_scan(
    m_a: f64,
    c_a: f64,
    r_b: f64,
    points: usize,
    flat_tol: f64,
) -> Result<BudgetLineScan> {
    positive("M_A", m_a)?;
    positive("c_A", c_a)?;
    positive("R_B", r_b)?;
    let points = points.max(2);
    let end = m_a / c_a;
    let step = end / (points - 1) as f64;
    let values: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let pre = if i + 1 == points {
                end
            } else {
                i as f64 * step
            };
            let r_a = (m_a - c_a * pre).max(0.0);
            (pre, spe_payoff(pre, r_a, r_b).pi_a)
        })
        .collect();
    let (mut p_best, mut pi_best) = values[0];
    for &(pre, pi) in &values[1..] {
        if pi > pi_best {
            p_best = pre;
            pi_best = pi;
        }
    }
    let flat: Vec<f64> = values
        .iter()
        .filter(|(_, pi)| *pi >= pi_best - flat_tol)
        .map(|(pre, _)| *pre)
        .collect();
    Ok(BudgetLineScan {
        p_best,
        pi_best,
        step,
        flat_interval: (flat[0], flat[flat.len() - 1]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FollowerScan {
    pub p_b_best: f64,
    pub u_b_best: f64,
    pub step: f64,
}

/// Grid argmax of B's payoff over `[0, M_B / c_B]`, polished by a
/// golden-section search between the neighbouring grid points.
pub fn follower_scan(p_a: f64, params: &MonetaryParams, points: usize) -> Result<FollowerScan> {
    let points = points.max(2);
    let end = params.max_b();
    let step = end / (points - 1) as f64;
    let u = |p: f64| follower_payoff(p_a, p.clamp(0.0, end), params).map(|r| r.0);
    let mut best = (0.0, u(0.0)?);
    for i in 1..points {
        let p = if i + 1 == points {
            end
        } else {
            i as f64 * step
        };
        let v = u(p)?;
        if v > best.1 {
            best = (p, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(0.0), (best.0 + step).min(end));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut f1, mut f2) = (u(x1)?, u(x2)?);
    for _ in 0..100 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = u(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = u(x1)?;
        }
    }
    let (xr, fr) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if fr > best.1 {
        best = (xr, fr);
    }
    Ok(FollowerScan {
        p_b_best: best.0,
        u_b_best: best.1,
        step,
    })
}

/// Leader's security value over a grid of `p_A`, assuming the analytic best
/// response of the follower.
pub fn leader_scan(params: &MonetaryParams, points: usize) -> Result<(f64, f64)> {
    let points = points.max(2);
    let end = params.max_a();
    let values = (0..points)
        .into_par_iter()
        .map(|i| {
            let p = if i + 1 == points {
                end
            } else {
                end * i as f64 / (points - 1) as f64
            };
            best_response_b(p, params).map(|br| (p, 1.0 - br.u_b))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().fold(
        (0.0, f64::NEG_INFINITY),
        |acc, v| if v.1 > acc.1 { v } else { acc },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interplay::optimal_investment;
    use crate::stackelberg::best_response_b;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lattice_sizes() {
        assert_eq!(simplex_lattice(1, 5), vec![vec![5]]);
        assert_eq!(simplex_lattice(2, 3).len(), 4);
        assert_eq!(simplex_lattice(3, 60).len(), 1891);
        assert!(simplex_lattice(3, 4)
            .iter()
            .all(|k| k.iter().sum::<usize>() == 4));
    }

    #[test]
    fn single_battlefield_grid() {
        let cfg = GameConfig::single(1.5, 1.0, 1.0);
        let (p, pi) = grid_search_preallocation(&cfg, &GridSpec::default()).unwrap();
        assert_eq!(p.p, vec![1.5]);
        assert_abs_diff_eq!(pi, spe_payoff(1.5, 1.0, 1.0).pi_a, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_two_battlefields() {
        let cfg = GameConfig::new(vec![0.5, 0.5], 1.0, 1.0, 1.0);
        let grid = GridSpec::new(100, 0).unwrap();
        let (p, pi) = grid_search_preallocation(&cfg, &grid).unwrap();
        assert!(inf_dist(&p.p, &[0.5, 0.5]) <= 0.01 + 1e-12);
        assert!(pi <= spe_payoff(1.0, 1.0, 1.0).pi_a + 1e-8);
    }

    #[test]
    fn three_battlefields() {
        let cfg = GameConfig::new(vec![0.5, 0.3, 0.2], 1.0, 0.8, 1.2);
        let grid = GridSpec::new(40, 0).unwrap();
        let (p, pi) = grid_search_preallocation(&cfg, &grid).unwrap();
        assert!(inf_dist(&p.p, &[0.5, 0.3, 0.2]) <= 1.0 / 40.0 + 1e-12);
        assert!(pi <= spe_payoff(1.0, 0.8, 1.2).pi_a + 1e-8);
    }

    #[test]
    fn grid_rejects_large_games() {
        let cfg = GameConfig::new(vec![0.2; 5], 1.0, 1.0, 1.0);
        assert!(matches!(
            grid_search_preallocation(&cfg, &GridSpec::default()),
            Err(LottoError::TooManyBattlefields { max: 4, got: 5 })
        ));
    }

    #[test]
    fn budget_line_examples() {
        let scan = budget_line_scan(4.0 / 3.0, 1.333, 1.0, 2000, 1e-12).unwrap();
        assert_eq!(scan.p_best, 0.0);

        let plan = optimal_investment(4.0 / 3.0, 0.423, 1.0).unwrap();
        let scan = budget_line_scan(4.0 / 3.0, 0.423, 1.0, 2000, 1e-12).unwrap();
        assert!((scan.p_best - plan.p_star).abs() <= scan.step);
        assert!(scan.pi_best <= plan.pi_opt + 1e-8);

        // tangency at P = 0: flat to first order
        let scan = budget_line_scan(1.0, 1.0, 1.0, 2000, 1e-6).unwrap();
        assert_eq!(scan.p_best, 0.0);
        assert_abs_diff_eq!(scan.pi_best, 0.5, epsilon = 1e-15);
        assert!(scan.flat_interval.1 > scan.step);

        // level curve and budget line coincide on the whole indifference interval
        let scan = budget_line_scan(0.5, 0.5, 1.0, 2001, 1e-12).unwrap();
        assert_abs_diff_eq!(scan.flat_interval.1, 2.0 / 3.0, epsilon = scan.step);
    }

    #[test]
    fn follower_scan_examples() {
        for (p_a, m) in [
            (1.0, MonetaryParams::new(1.0, 0.5, 1.0, 0.5).unwrap()),
            (0.0, MonetaryParams::new(0.5, 0.5, 2.0, 0.5).unwrap()),
            (0.5, MonetaryParams::new(1.0, 0.4, 0.3, 0.6).unwrap()),
        ] {
            let scan = follower_scan(p_a, &m, 2000).unwrap();
            let br = best_response_b(p_a, &m).unwrap();
            assert!(
                (scan.p_b_best - br.p_b).abs() <= scan.step,
                "{scan:?} {br:?}"
            );
            assert!((scan.u_b_best - br.u_b).abs() <= 1e-6);
        }
    }
}
