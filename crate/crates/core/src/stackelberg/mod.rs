//! Single-battlefield game in which both players can buy pre-allocated
//! resources with money: the follower's payoff and best response, and the
//! leader's equilibrium investment.

mod equilibrium;
mod follower;

use serde::{Deserialize, Serialize};

use crate::error::{LottoError, Result};
use crate::game::positive;

pub use equilibrium::{
    p_a_bar, p_a_dagger, stackelberg_equilibrium, StackelbergCase, StackelbergOutcome,
};
pub use follower::{
    best_response_b, follower_payoff, hat_p_b, p_b_1a, p_b_1b, roots_r_pm, threshold_h, u_b_1a,
    u_b_1b, BestResponse, FollowerRegion, QuadraticRoots,
};

/// Monetary budgets and per-unit pre-allocation costs of both players.
/// Real-time resources cost one unit of money each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonetaryParams {
    #[serde(rename = "M_A")]
    pub m_a: f64,
    #[serde(rename = "c_A")]
    pub c_a: f64,
    #[serde(rename = "M_B")]
    pub m_b: f64,
    #[serde(rename = "c_B")]
    pub c_b: f64,
}

impl MonetaryParams {
    pub fn new(m_a: f64, c_a: f64, m_b: f64, c_b: f64) -> Result<Self> {
        positive("M_A", m_a)?;
        positive("M_B", m_b)?;
        unit_cost("c_A", c_a)?;
        unit_cost("c_B", c_b)?;
        Ok(Self { m_a, c_a, m_b, c_b })
    }

    /// Largest affordable pre-allocation of player A.
    pub fn max_a(&self) -> f64 {
        self.m_a / self.c_a
    }

    pub fn max_b(&self) -> f64 {
        self.m_b / self.c_b
    }

    /// Real-time budget left to A after buying `p_a`.
    pub fn real_a(&self, p_a: f64) -> f64 {
        (self.m_a - self.c_a * p_a).max(0.0)
    }

    pub fn real_b(&self, p_b: f64) -> f64 {
        (self.m_b - self.c_b * p_b).max(0.0)
    }

    pub(crate) fn check_a(&self, p_a: f64) -> Result<()> {
        within("p_A", p_a, self.max_a())
    }

    pub(crate) fn check_b(&self, p_b: f64) -> Result<()> {
        within("p_B", p_b, self.max_b())
    }
}

fn unit_cost(name: &'static str, c: f64) -> Result<f64> {
    if c > 0.0 && c < 1.0 {
        Ok(c)
    } else {
        Err(LottoError::OutOfRange {
            name,
            value: c,
            range: "(0, 1)",
        })
    }
}

fn within(name: &'static str, value: f64, max: f64) -> Result<()> {
    if value >= 0.0 && value <= max * (1.0 + 1e-12) {
        Ok(())
    } else if value < 0.0 || value.is_nan() {
        Err(LottoError::NegativeBudget { name, value })
    } else {
        Err(LottoError::OutOfBudget { name, value, max })
    }
}
