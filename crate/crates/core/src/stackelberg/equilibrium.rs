use serde::{Deserialize, Serialize};

use super::follower::{follower_payoff, hat_p_b, threshold_h};
use super::MonetaryParams;
use crate::error::{LottoError, Result};
use crate::interplay::{interior_preallocation, optimal_investment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StackelbergCase {
    /// `M_B / c_B <= M_A`: the follower never invests.
    WeakFollower,
    /// Middle budgets; the leader's unconstrained optimum already deters the follower.
    MiddleInterior,
    /// Middle budgets; the leader invests just enough to deter the follower.
    MiddleIndifferent,
    /// `M_B / c_B > M_A / c_A`: the leader cannot deter the follower.
    StrongFollower,
}

impl StackelbergCase {
    pub fn as_str(self) -> &'static str {
        match self {
            StackelbergCase::WeakFollower => "WeakFollower",
            StackelbergCase::MiddleInterior => "MiddleInterior",
            StackelbergCase::MiddleIndifferent => "MiddleIndifferent",
            StackelbergCase::StrongFollower => "StrongFollower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StackelbergOutcome {
    pub p_a_star: f64,
    pub p_b_star: f64,
    pub u_a: f64,
    pub u_b: f64,
    pub case: StackelbergCase,
    pub p_a_dagger: Option<f64>,
    /// Equally good follower response when the follower is indifferent.
    pub p_b_alternative: Option<f64>,
}

/// Leader's unconstrained optimum `2(1-c_A)/(2-c_A) * M_A/c_A`.
pub fn p_a_bar(params: &MonetaryParams) -> f64 {
    interior_preallocation(params.m_a, params.c_a)
}

/// Leader investment at which the follower is indifferent between not
/// investing and investing `hat_p_b`.
pub fn p_a_dagger(params: &MonetaryParams) -> Result<f64> {
    let ratio = params.max_b();
    let hi = ratio.min(params.max_a());
    let h = |p: f64| threshold_h(params.real_a(p), p, params.c_b) - ratio;
    let tol = 1e-12 * ratio.max(1.0);
    let (mut lo, mut hi) = (0.0, hi);
    if !(params.m_a < ratio && ratio <= params.max_a()) || h(lo) >= 0.0 || h(hi) < -tol {
        return Err(LottoError::BracketFailure { lo, hi });
    }
    if ratio >= params.max_a() * (1.0 - 1e-12) {
        // h(0, p) = p, so the root is the all-pre-allocation endpoint
        return Ok(params.max_a());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Leader-follower equilibrium: A commits to a pre-allocation first.
pub fn stackelberg_equilibrium(params: &MonetaryParams) -> Result<StackelbergOutcome> {
    let ratio = params.max_b();
    let (m_a, c_a, m_b, c_b) = (params.m_a, params.c_a, params.m_b, params.c_b);

    let (p_a_star, p_b_star, u_a, case, dagger, alternative) = if ratio <= m_a {
        let plan = optimal_investment(m_a, c_a, m_b)?;
        (
            plan.p_star,
            0.0,
            plan.pi_opt,
            StackelbergCase::WeakFollower,
            None,
            None,
        )
    } else if ratio <= params.max_a() {
        let dagger = p_a_dagger(params)?;
        let bar = p_a_bar(params);
        if dagger < bar {
            let u_a = 1.0 - m_b / (2.0 * m_a) * c_a * (2.0 - c_a);
            (
                bar,
                0.0,
                u_a,
                StackelbergCase::MiddleInterior,
                Some(dagger),
                None,
            )
        } else {
            let slack = params.max_a() - dagger;
            if slack > 1e-12 * params.max_a() {
                let u_a = c_a * (2.0 - c_b) / 2.0 * slack / (ratio - dagger);
                let alt = hat_p_b(dagger, m_b, c_b).clamp(0.0, ratio);
                (
                    dagger,
                    0.0,
                    u_a,
                    StackelbergCase::MiddleIndifferent,
                    Some(dagger),
                    Some(alt),
                )
            } else {
                // A holds only pre-allocated resources and B exactly matches them
                let u_a = 1.0 - follower_payoff(dagger, 0.0, params)?.0;
                (
                    dagger,
                    0.0,
                    u_a,
                    StackelbergCase::MiddleIndifferent,
                    Some(dagger),
                    None,
                )
            }
        }
    } else {
        let u_a = c_b * (2.0 - c_b) / 2.0 * m_a / m_b;
        (
            0.0,
            hat_p_b(0.0, m_b, c_b),
            u_a,
            StackelbergCase::StrongFollower,
            None,
            None,
        )
    };
    Ok(StackelbergOutcome {
        p_a_star,
        p_b_star,
        u_a,
        u_b: 1.0 - u_a,
        case,
        p_a_dagger: dagger,
        p_b_alternative: alternative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stackelberg::{best_response_b, u_b_1a, u_b_1b};
    use approx::assert_abs_diff_eq;

    fn params(m_a: f64, c_a: f64, m_b: f64, c_b: f64) -> MonetaryParams {
        MonetaryParams::new(m_a, c_a, m_b, c_b).unwrap()
    }

    #[test]
    fn weak_follower() {
        let out = stackelberg_equilibrium(&params(0.5, 0.2, 0.2, 0.5)).unwrap();
        assert_eq!(out.case, StackelbergCase::WeakFollower);
        assert_eq!(out.p_b_star, 0.0);
        assert_abs_diff_eq!(out.p_a_star, 20.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.u_a, 0.928, epsilon = 1e-12);
    }

    #[test]
    fn strong_follower() {
        let out = stackelberg_equilibrium(&params(0.5, 0.2, 2.0, 0.5)).unwrap();
        assert_eq!(out.case, StackelbergCase::StrongFollower);
        assert_eq!(out.p_a_star, 0.0);
        assert_abs_diff_eq!(out.p_b_star, 8.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.u_a, 0.09375, epsilon = 1e-12);
        assert_abs_diff_eq!(out.u_b, 0.90625, epsilon = 1e-12);
        let br = best_response_b(0.0, &params(0.5, 0.2, 2.0, 0.5)).unwrap();
        assert_abs_diff_eq!(1.0 - br.u_b, out.u_a, epsilon = 1e-12);
    }

    #[test]
    fn dagger_certificates() {
        for (m_a, c_a, c_b, m_b) in [
            (0.5, 0.2, 0.5, 0.3),
            (0.5, 0.2, 0.5, 0.5),
            (1.0, 0.4, 0.6, 0.9),
        ] {
            let m = params(m_a, c_a, m_b, c_b);
            let d = p_a_dagger(&m).unwrap();
            let hat = hat_p_b(d, m_b, c_b);
            assert_abs_diff_eq!(u_b_1a(d, 0.0, &m), u_b_1b(d, hat, &m), epsilon = 1e-10);
            assert_abs_diff_eq!(threshold_h(m.real_a(d), d, c_b), m_b / c_b, epsilon = 1e-10);
        }
    }

    #[test]
    fn dagger_requires_middle_budgets() {
        assert!(matches!(
            p_a_dagger(&params(0.5, 0.2, 0.2, 0.5)),
            Err(LottoError::BracketFailure { .. })
        ));
        assert!(matches!(
            p_a_dagger(&params(0.5, 0.2, 2.0, 0.5)),
            Err(LottoError::BracketFailure { .. })
        ));
    }

    #[test]
    fn affordability_edge() {
        // M_B / c_B = M_A / c_A
        let out = stackelberg_equilibrium(&params(0.5, 0.2, 1.25, 0.5)).unwrap();
        assert_eq!(out.case, StackelbergCase::MiddleIndifferent);
        assert_abs_diff_eq!(out.p_a_star, 2.5, epsilon = 1e-9);
        assert_abs_diff_eq!(out.u_b, 0.5, epsilon = 1e-9);
    }
}
