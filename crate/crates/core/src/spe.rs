//! Closed-form subgame-perfect equilibrium payoffs of the pre-allocation game.

use serde::{Deserialize, Serialize};

use crate::game::{GameConfig, PreAllocation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    Case1,
    Case2,
    #[serde(rename = "Case3_ZeroRealTime")]
    Case3ZeroRealTime,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::Case1 => "Case1",
            RegimeTag::Case2 => "Case2",
            RegimeTag::Case3ZeroRealTime => "Case3_ZeroRealTime",
        }
    }
}

/// Which closed form applies, plus the signed distance `R_A - boundary`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeRegime {
    pub tag: RegimeTag,
    pub boundary_distance: f64,
}

/// Smallest `R_A` for which the first regime applies (zero when `R_B <= P`).
pub fn regime_boundary(pre: f64, r_b: f64) -> f64 {
    if r_b > pre {
        let x = r_b - pre;
        // written so that P = 0 returns exactly R_B
        x * (2.0 * x / (pre + 2.0 * x))
    } else {
        0.0
    }
}

pub fn classify_regime(pre: f64, r_a: f64, r_b: f64) -> SpeRegime {
    let boundary = regime_boundary(pre, r_b);
    let tag = if r_a == 0.0 {
        RegimeTag::Case3ZeroRealTime
    } else if r_b <= pre || r_a >= boundary {
        RegimeTag::Case1
    } else {
        RegimeTag::Case2
    };
    SpeRegime {
        tag,
        boundary_distance: r_a - boundary,
    }
}

/// Equilibrium payoff for scalar budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpePayoff {
    pub regime: SpeRegime,
    pub pi_a: f64,
    pub pi_b: f64,
    /// Set when both `P` and `R_A` vanish; the payoff is then the limit value 0.
    pub degenerate: bool,
}

pub fn spe_payoff(pre: f64, r_a: f64, r_b: f64) -> SpePayoff {
    let regime = classify_regime(pre, r_a, r_b);
    let (pi_a, degenerate) = match regime.tag {
        RegimeTag::Case1 => (case1_payoff(pre, r_a, r_b), false),
        RegimeTag::Case2 => (case2_payoff(pre, r_a, r_b), false),
        RegimeTag::Case3ZeroRealTime => {
            if pre == 0.0 {
                (0.0, true)
            } else {
                (1.0 - (r_b / pre).min(1.0), false)
            }
        }
    };
    SpePayoff {
        regime,
        pi_a,
        pi_b: 1.0 - pi_a,
        degenerate,
    }
}

/// First-regime closed form, valid for `R_A > 0`.
pub fn case1_payoff(pre: f64, r_a: f64, r_b: f64) -> f64 {
    let s = (r_a * (r_a + 2.0 * pre)).sqrt();
    let ratio = (r_a + s) / (pre + r_a + s);
    1.0 - r_b / (2.0 * r_a) * ratio * ratio
}

/// Second-regime closed form, valid for `R_B > P`.
pub fn case2_payoff(pre: f64, r_a: f64, r_b: f64) -> f64 {
    r_a / (2.0 * (r_b - pre))
}

/// Equilibrium of a full game configuration, including the proportional
/// pre-allocation that attains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeResult {
    pub regime: SpeRegime,
    pub pi_a: f64,
    pub pi_b: f64,
    pub degenerate: bool,
    pub p_star: PreAllocation,
}

pub fn solve_spe(cfg: &GameConfig) -> SpeResult {
    let payoff = spe_payoff(cfg.pre, cfg.r_a, cfg.effective_r_b());
    SpeResult {
        regime: payoff.regime,
        pi_a: payoff.pi_a,
        pi_b: payoff.pi_b,
        degenerate: payoff.degenerate,
        p_star: PreAllocation::proportional(&cfg.w, cfg.pre),
    }
}

/// Payoff of the standard General Lotto game without pre-allocations.
pub fn hart_baseline(r_a: f64, r_b: f64) -> f64 {
    if r_a < r_b {
        r_a / (2.0 * r_b)
    } else {
        1.0 - r_b / (2.0 * r_a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn classifies_examples() {
        assert_eq!(classify_regime(0.0, 1.0, 1.0).tag, RegimeTag::Case1);
        let r = classify_regime(0.2, 0.1, 1.0);
        assert_eq!(r.tag, RegimeTag::Case2);
        assert_abs_diff_eq!(0.1 - r.boundary_distance, 2.0 * 0.64 / 1.8, epsilon = 1e-15);
        assert_eq!(
            classify_regime(2.0, 0.0, 1.0).tag,
            RegimeTag::Case3ZeroRealTime
        );
        assert_eq!(regime_boundary(0.0, 0.7), 0.7);
        assert_eq!(classify_regime(3.0, 0.01, 1.0).tag, RegimeTag::Case1);
    }

    #[test]
    fn payoff_examples() {
        assert_eq!(spe_payoff(0.0, 1.0, 1.0).pi_a, 0.5);
        let s3 = 3f64.sqrt();
        let expected = 1.0 - 0.5 * ((1.0 + s3) / (2.0 + s3)).powi(2);
        assert_abs_diff_eq!(spe_payoff(1.0, 1.0, 1.0).pi_a, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(
            spe_payoff(1.0, 1.0, 1.0).pi_a,
            0.7320508075688772,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(spe_payoff(0.2, 0.1, 1.0).pi_a, 0.0625, epsilon = 1e-15);
    }

    #[test]
    fn zero_real_time() {
        let p = spe_payoff(2.0, 0.0, 1.0);
        assert_eq!(p.pi_a, 0.5);
        assert!(!p.degenerate);
        assert_eq!(spe_payoff(0.5, 0.0, 1.0).pi_a, 0.0);
        let d = spe_payoff(0.0, 0.0, 1.0);
        assert_eq!((d.pi_a, d.pi_b, d.degenerate), (0.0, 1.0, true));
    }

    #[test]
    fn baseline_examples() {
        assert_eq!(hart_baseline(1.0, 1.0), 0.5);
        assert_eq!(hart_baseline(0.5, 1.0), 0.25);
        assert_eq!(hart_baseline(2.0, 1.0), 0.75);
    }

    #[test]
    fn solve_spe_uses_quality_and_proportional_split() {
        let mut cfg = GameConfig::new(vec![0.25, 0.75], 2.0, 1.0, 2.0);
        cfg.q = 0.5;
        let res = solve_spe(&cfg);
        assert_eq!(res.pi_a, spe_payoff(2.0, 1.0, 1.0).pi_a);
        assert_eq!(res.p_star.p, vec![0.5, 1.5]);
        assert_eq!(res.pi_a + res.pi_b, 1.0);
    }
}
