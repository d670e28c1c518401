//! Level curves of the equilibrium payoff, the exchange rate between
//! real-time and pre-allocated resources, and optimal budget splitting.

use serde::{Deserialize, Serialize};

use crate::error::{LottoError, Result};
use crate::game::{non_negative, positive};
use crate::spe::hart_baseline;

/// Value of a level curve at a given pre-allocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LevelValue {
    /// Real-time budget needed to reach the target payoff exactly.
    Value(f64),
    /// The pre-allocation alone already exceeds the target for every `R_A >= 0`.
    AboveCurve,
}

impl LevelValue {
    pub fn value(self) -> Option<f64> {
        match self {
            LevelValue::Value(v) => Some(v),
            LevelValue::AboveCurve => None,
        }
    }
}

/// Where the linear and quadratic pieces meet (only for `Pi < 1/2`).
pub fn level_curve_breakpoint(pi: f64, r_b: f64) -> Option<f64> {
    (pi < 0.5).then(|| (1.0 - 2.0 * pi) * r_b / (1.0 - pi))
}

/// End of the level curve's domain, `R_B / (1 - Pi)`.
pub fn level_curve_end(pi: f64, r_b: f64) -> f64 {
    if pi >= 1.0 {
        f64::INFINITY
    } else {
        r_b / (1.0 - pi)
    }
}

pub fn level_curve_linear(pi: f64, r_b: f64, pre: f64) -> f64 {
    2.0 * pi * (r_b - pre)
}

pub fn level_curve_quadratic(pi: f64, r_b: f64, pre: f64) -> f64 {
    let x = r_b - (1.0 - pi) * pre;
    x * x / (2.0 * r_b * (1.0 - pi))
}

/// Real-time budget `R_A` with equilibrium payoff exactly `pi` at pre-allocation `pre`.
pub fn level_curve_value(pi: f64, r_b: f64, pre: f64) -> LevelValue {
    if pi >= 1.0 {
        return LevelValue::Value(f64::INFINITY);
    }
    let end = level_curve_end(pi, r_b);
    if pre > end * (1.0 + 1e-12) {
        return LevelValue::AboveCurve;
    }
    if pre >= end {
        return LevelValue::Value(0.0);
    }
    match level_curve_breakpoint(pi, r_b) {
        Some(bp) if pre < bp => LevelValue::Value(level_curve_linear(pi, r_b, pre)),
        _ => LevelValue::Value(level_curve_quadratic(pi, r_b, pre)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub pi: f64,
    pub r_b: f64,
    pub domain_end: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Sample a level curve uniformly in `P` over its whole domain.
pub fn level_curve(pi: f64, r_b: f64, samples: usize) -> Result<LevelCurve> {
    if !(0.0..1.0).contains(&pi) {
        return Err(LottoError::OutOfRange {
            name: "Pi",
            value: pi,
            range: "[0, 1)",
        });
    }
    positive("R_B", r_b)?;
    if samples < 2 {
        return Err(LottoError::OutOfRange {
            name: "samples",
            value: samples as f64,
            range: ">= 2",
        });
    }
    let end = level_curve_end(pi, r_b);
    let samples = (0..samples)
        .map(|i| {
            let pre = if i == samples - 1 {
                end
            } else {
                end * i as f64 / (samples - 1) as f64
            };
            let v = level_curve_value(pi, r_b, pre).value().unwrap_or(0.0);
            (pre, v)
        })
        .collect();
    Ok(LevelCurve {
        pi,
        r_b,
        domain_end: end,
        samples,
    })
}

/// Units of pre-allocation worth one unit of real-time budget.
pub fn effectiveness_ratio(r_a: f64, r_b: f64) -> Result<f64> {
    positive("R_A", r_a)?;
    positive("R_B", r_b)?;
    Ok(if r_a >= r_b {
        2.0
    } else {
        2.0 * r_b * r_b / (r_a * (2.0 * r_b - r_a))
    })
}

/// Pre-allocation with the same payoff as real-time budget `r_a` alone.
pub fn equivalent_preallocation(r_a: f64, r_b: f64) -> Result<f64> {
    Ok(effectiveness_ratio(r_a, r_b)? * r_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvestmentBranch {
    Interior,
    Boundary,
    Indifferent,
}

impl InvestmentBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            InvestmentBranch::Interior => "Interior",
            InvestmentBranch::Boundary => "Boundary",
            InvestmentBranch::Indifferent => "Indifferent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvestmentPlan {
    pub m_a: f64,
    pub c_a: f64,
    pub r_b: f64,
    pub p_star: f64,
    pub r_a_star: f64,
    pub pi_opt: f64,
    pub branch: InvestmentBranch,
    /// Every `P` in this range is optimal when the branch is `Indifferent`.
    pub indifference_interval: Option<(f64, f64)>,
}

/// Interior optimum of the pre-allocation purchase, `2(1-c)/(2-c) * M/c`.
pub fn interior_preallocation(m_a: f64, c_a: f64) -> f64 {
    2.0 * (1.0 - c_a) / (2.0 - c_a) * m_a / c_a
}

/// Best split of a monetary budget `m_a` between pre-allocated resources
/// (cost `c_a` per unit) and real-time resources (unit cost).
pub fn optimal_investment(m_a: f64, c_a: f64, r_b: f64) -> Result<InvestmentPlan> {
    positive("M_A", m_a)?;
    positive("c_A", c_a)?;
    positive("R_B", r_b)?;
    let t = (m_a / r_b).min(1.0);
    let (p_star, pi_opt, branch, interval) = if c_a < t {
        (
            interior_preallocation(m_a, c_a),
            1.0 - r_b / (2.0 * m_a) * c_a * (2.0 - c_a),
            InvestmentBranch::Interior,
            None,
        )
    } else if c_a > t {
        (
            0.0,
            hart_baseline(m_a, r_b),
            InvestmentBranch::Boundary,
            None,
        )
    } else {
        (
            0.0,
            hart_baseline(m_a, r_b),
            InvestmentBranch::Indifferent,
            Some((0.0, interior_preallocation(m_a, c_a))),
        )
    };
    let r_a_star = (m_a - c_a * p_star).max(0.0);
    non_negative("R_A*", r_a_star)?;
    Ok(InvestmentPlan {
        m_a,
        c_a,
        r_b,
        p_star,
        r_a_star,
        pi_opt,
        branch,
        indifference_interval: interval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spe::spe_payoff;
    use approx::assert_abs_diff_eq;

    #[test]
    fn level_curve_examples() {
        assert_eq!(level_curve_value(0.5, 1.0, 0.0), LevelValue::Value(1.0));
        assert_eq!(level_curve_value(0.5, 1.0, 2.0), LevelValue::Value(0.0));
        assert_eq!(level_curve_value(0.5, 1.0, 2.5), LevelValue::AboveCurve);
        let v = level_curve_value(0.75, 1.0, 2.309).value().unwrap();
        assert_abs_diff_eq!(v, 0.357, epsilon = 1e-3);
        assert_eq!(
            level_curve_value(1.0, 1.0, 5.0),
            LevelValue::Value(f64::INFINITY)
        );
    }

    #[test]
    fn level_curve_branches_meet() {
        for pi in [0.0, 0.1, 0.25, 0.4, 0.49] {
            let bp = level_curve_breakpoint(pi, 1.3).unwrap();
            assert_abs_diff_eq!(
                level_curve_linear(pi, 1.3, bp),
                level_curve_quadratic(pi, 1.3, bp),
                epsilon = 1e-12
            );
        }
        assert!(level_curve_breakpoint(0.5, 1.0).is_none());
    }

    #[test]
    fn sampled_curve() {
        let c = level_curve(0.625, 1.0, 100).unwrap();
        assert_eq!(c.samples.len(), 100);
        assert_eq!(c.samples[0], (0.0, level_curve_quadratic(0.625, 1.0, 0.0)));
        assert_eq!(c.samples[99].0, c.domain_end);
        assert_abs_diff_eq!(c.samples[99].1, 0.0, epsilon = 1e-15);
        assert!(level_curve(1.0, 1.0, 10).is_err());
        assert!(level_curve(0.5, 1.0, 1).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(effectiveness_ratio(1.0, 1.0).unwrap(), 2.0);
        assert_abs_diff_eq!(
            effectiveness_ratio(0.5, 1.0).unwrap(),
            8.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(effectiveness_ratio(3.0, 1.0).unwrap(), 2.0);
        assert_abs_diff_eq!(
            equivalent_preallocation(0.5, 1.0).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(equivalent_preallocation(1.0, 1.0).unwrap(), 2.0);
        assert_eq!(equivalent_preallocation(2.0, 1.0).unwrap(), 4.0);
        assert_abs_diff_eq!(spe_payoff(4.0 / 3.0, 0.0, 1.0).pi_a, 0.25, epsilon = 1e-15);
        assert!(effectiveness_ratio(0.0, 1.0).is_err());
    }

    #[test]
    fn investment_examples() {
        let plan = optimal_investment(4.0 / 3.0, 1.333, 1.0).unwrap();
        assert_eq!(plan.branch, InvestmentBranch::Boundary);
        assert_eq!((plan.p_star, plan.r_a_star), (0.0, 4.0 / 3.0));
        assert_abs_diff_eq!(plan.pi_opt, 0.625, epsilon = 1e-12);

        let plan = optimal_investment(1.0, 2.0, 1.0).unwrap();
        assert_eq!((plan.p_star, plan.pi_opt), (0.0, 0.5));

        // exact tangency with the 0.75 level curve
        let c = 1.0 - 1.0 / 3f64.sqrt();
        let plan = optimal_investment(4.0 / 3.0, c, 1.0).unwrap();
        assert_eq!(plan.branch, InvestmentBranch::Interior);
        assert_abs_diff_eq!(plan.p_star, 2.309401, epsilon = 1e-6);
        assert_abs_diff_eq!(plan.r_a_star, 0.357266, epsilon = 1e-6);
        assert_abs_diff_eq!(plan.pi_opt, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(
            spe_payoff(plan.p_star, plan.r_a_star, 1.0).pi_a,
            plan.pi_opt,
            epsilon = 1e-12
        );
    }

    #[test]
    fn indifferent_branch() {
        let plan = optimal_investment(0.5, 0.5, 1.0).unwrap();
        assert_eq!(plan.branch, InvestmentBranch::Indifferent);
        assert_eq!(plan.p_star, 0.0);
        let (lo, hi) = plan.indifference_interval.unwrap();
        assert_eq!(lo, 0.0);
        assert_abs_diff_eq!(hi, 2.0 / 3.0, epsilon = 1e-15);
        for k in 0..=10 {
            let pre = hi * k as f64 / 10.0;
            let pi = spe_payoff(pre, 0.5 - 0.5 * pre, 1.0).pi_a;
            assert_abs_diff_eq!(pi, plan.pi_opt, epsilon = 1e-12);
        }
    }
}
