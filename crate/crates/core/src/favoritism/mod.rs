//! Stage-2 General Lotto game with favoritism: the `(kappa_A, kappa_B)`
//! system, its closed-form and numeric solvers, and the equilibrium payoff.

mod closed;
mod numeric;

use serde::{Deserialize, Serialize};

use crate::error::{LottoError, Result};
use crate::game::{GameConfig, PreAllocation};
use crate::spe::spe_payoff;

pub use closed::solve_partition_closed;
pub use numeric::{solve_bisection, solve_numeric};

/// Residuals below `RESIDUAL_TOL * scale` certify a solution.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Slack allowed on the partition membership inequalities.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    ClosedFormPartition,
    NumericRootFind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaSolution {
    pub kappa_a: f64,
    pub kappa_b: f64,
    /// Battlefields whose expected budget is capped at `w_b * kappa_B` (zero-based).
    pub partition_b1: Vec<usize>,
    pub partition_b2: Vec<usize>,
    pub residual_a: f64,
    pub residual_b: f64,
    pub method: SolveMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage2Outcome {
    pub pi_a: f64,
    pub pi_b: f64,
    /// Absent when player A has no real-time budget and the payoff is closed-form.
    pub kappa: Option<KappaSolution>,
}

/// `min(w_b * kappa_B, w_b * kappa_A + p_b)`.
pub fn h_threshold(kappa_a: f64, kappa_b: f64, p_b: f64, w_b: f64) -> f64 {
    (w_b * kappa_b).min(w_b * kappa_a + p_b)
}

/// Defects of the two expected-budget equations at `(kappa_A, kappa_B)`.
pub fn soe_residuals(
    kappa_a: f64,
    kappa_b: f64,
    p: &PreAllocation,
    cfg: &GameConfig,
) -> (f64, f64) {
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    for (&pb, &wb) in p.p.iter().zip(&cfg.w) {
        let h = h_threshold(kappa_a, kappa_b, pb, wb);
        sum_a += (h - pb) * (h - pb) / (2.0 * wb * kappa_b);
        sum_b += (h * h - pb * pb) / (2.0 * wb * kappa_a);
    }
    (sum_a - cfg.r_a, sum_b - cfg.effective_r_b())
}

/// Split battlefields by the active branch of `h_b`; ties go to `B1`.
pub fn partition_at(
    kappa_a: f64,
    kappa_b: f64,
    p: &PreAllocation,
    w: &[f64],
) -> (Vec<usize>, Vec<usize>) {
    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    for (i, (&pb, &wb)) in p.p.iter().zip(w).enumerate() {
        if wb * kappa_b <= wb * kappa_a + pb {
            b1.push(i);
        } else {
            b2.push(i);
        }
    }
    (b1, b2)
}

/// Player A's equilibrium payoff for given multipliers.
pub fn payoff_from_kappa(kappa_a: f64, kappa_b: f64, p: &PreAllocation, w: &[f64]) -> f64 {
    let mut pi = 0.0;
    for (&pb, &wb) in p.p.iter().zip(w) {
        if wb * kappa_b <= wb * kappa_a + pb {
            let x = pb / (wb * kappa_b);
            pi += wb * (1.0 - kappa_b / (2.0 * kappa_a) * (1.0 - x * x));
        } else {
            pi += wb * kappa_a / (2.0 * kappa_b);
        }
    }
    pi
}

/// Stage-2 equilibrium payoff for an arbitrary pre-allocation.
///
/// Tries the closed-form partition solver first and falls back to the
/// numeric solver. With `R_A = 0` only the proportional allocation is handled.
pub fn stage2_payoff(p: &PreAllocation, cfg: &GameConfig) -> Result<Stage2Outcome> {
    check_dims(p, cfg)?;
    if cfg.r_a == 0.0 {
        if !p.is_proportional(&cfg.w) {
            return Err(LottoError::NumericUnsupported);
        }
        let spe = spe_payoff(p.total, 0.0, cfg.effective_r_b());
        return Ok(Stage2Outcome {
            pi_a: spe.pi_a,
            pi_b: spe.pi_b,
            kappa: None,
        });
    }
    let sol = match solve_partition_closed(p, cfg) {
        Ok(sol) => sol,
        Err(LottoError::NoConsistentPartition) => {
            log::debug!("closed-form partition search failed, using numeric solver");
            solve_numeric(p, cfg)?
        }
        Err(e) => return Err(e),
    };
    let pi_a = payoff_from_kappa(sol.kappa_a, sol.kappa_b, p, &cfg.w);
    Ok(Stage2Outcome {
        pi_a,
        pi_b: 1.0 - pi_a,
        kappa: Some(sol),
    })
}

pub(crate) fn check_dims(p: &PreAllocation, cfg: &GameConfig) -> Result<()> {
    if p.len() != cfg.n() {
        return Err(LottoError::DimensionMismatch {
            expected: cfg.n(),
            got: p.len(),
        });
    }
    Ok(())
}

pub(crate) fn certified(res: (f64, f64), cfg: &GameConfig) -> bool {
    let tol = RESIDUAL_TOL * cfg.scale();
    res.0.abs() <= tol && res.1.abs() <= tol
}
