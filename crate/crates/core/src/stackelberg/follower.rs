use serde::{Deserialize, Serialize};

use super::MonetaryParams;
use crate::error::{LottoError, Result};
use crate::spe::regime_boundary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FollowerRegion {
    R1A,
    R2A,
    R1B,
    R2B,
}

impl FollowerRegion {
    pub fn as_str(self) -> &'static str {
        match self {
            FollowerRegion::R1A => "R1A",
            FollowerRegion::R2A => "R2A",
            FollowerRegion::R1B => "R1B",
            FollowerRegion::R2B => "R2B",
        }
    }
}

/// Player B's payoff when both players have bought pre-allocations.
pub fn follower_payoff(
    p_a: f64,
    p_b: f64,
    params: &MonetaryParams,
) -> Result<(f64, FollowerRegion)> {
    params.check_a(p_a)?;
    params.check_b(p_b)?;
    Ok(payoff_with_budgets(
        p_a,
        p_b,
        params.real_a(p_a),
        params.real_b(p_b),
    ))
}

pub(crate) fn payoff_with_budgets(p_a: f64, p_b: f64, r_a: f64, r_b: f64) -> (f64, FollowerRegion) {
    if p_a >= p_b {
        let d = p_a - p_b;
        if r_b < d || r_a >= regime_boundary(d, r_b) {
            (u1a(d, r_a, r_b), FollowerRegion::R1A)
        } else {
            (1.0 - r_a / (2.0 * (r_b - d)), FollowerRegion::R2A)
        }
    } else {
        let e = p_b - p_a;
        if r_a < e || r_b >= regime_boundary(e, r_a) {
            (u1b(e, r_a, r_b), FollowerRegion::R1B)
        } else {
            (r_b / (2.0 * (r_a - e)), FollowerRegion::R2B)
        }
    }
}

fn u1a(d: f64, r_a: f64, r_b: f64) -> f64 {
    if r_a == 0.0 {
        // A's pre-allocation alone; ties go to A
        return if d > 0.0 { (r_b / d).min(1.0) } else { 0.0 };
    }
    let f = r_a + (r_a * (r_a + 2.0 * d)).sqrt();
    let x = f / (d + f);
    r_b / (2.0 * r_a) * x * x
}

fn u1b(e: f64, r_a: f64, r_b: f64) -> f64 {
    let f = r_b.sqrt();
    let g = (r_b + 2.0 * e).sqrt();
    let x = (f + g) / (e + f * (f + g));
    1.0 - r_a / 2.0 * x * x
}

/// The `p_A >= p_B` closed form with A's pre-allocation ahead, evaluated regardless of region.
pub fn u_b_1a(p_a: f64, p_b: f64, params: &MonetaryParams) -> f64 {
    u1a(p_a - p_b, params.real_a(p_a), params.real_b(p_b))
}

/// The `p_B > p_A` closed form, evaluated regardless of region.
pub fn u_b_1b(p_a: f64, p_b: f64, params: &MonetaryParams) -> f64 {
    u1b(p_b - p_a, params.real_a(p_a), params.real_b(p_b))
}

/// Stationary point of B's payoff once B's pre-allocation exceeds A's.
pub fn hat_p_b(p_a: f64, m_b: f64, c_b: f64) -> f64 {
    m_b / c_b - (m_b - c_b * p_a) / (2.0 - c_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuadraticRoots {
    Real { minus: f64, plus: f64 },
    Complex,
}

// Quadratic whose roots are where B's budget line crosses the region boundary
// between the two B-ahead regions.
fn boundary_quadratic(p_a: f64, r_a: f64, m_b: f64, c_b: f64) -> (f64, f64, f64) {
    let t = r_a + p_a;
    let k = 2.0 * r_a + p_a;
    (2.0 - c_b, -4.0 * t + m_b + c_b * k, 2.0 * t * t - m_b * k)
}

/// Roots of `F(p_B) = M_B - c_B p_B` with `F(p) = 2(t_A - p)^2 / (2R_A + p_A - p)`.
pub fn roots_r_pm(p_a: f64, r_a: f64, m_b: f64, c_b: f64) -> QuadraticRoots {
    let (a, b, c) = boundary_quadratic(p_a, r_a, m_b, c_b);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return QuadraticRoots::Complex;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (x1, x2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    QuadraticRoots::Real {
        minus: x1.min(x2),
        plus: x1.max(x2),
    }
}

pub(crate) fn f_boundary(p: f64, p_a: f64, r_a: f64) -> f64 {
    let t = r_a + p_a;
    2.0 * (t - p) * (t - p) / (2.0 * r_a + p_a - p)
}

pub(crate) fn g_boundary(p: f64, p_a: f64, m_b: f64, c_b: f64) -> f64 {
    let x = m_b + (1.0 - c_b) * p - p_a;
    2.0 * x * x / (2.0 * (m_b - c_b * p) - (p_a - p))
}

/// Where B's budget line leaves the region in which B's payoff follows the
/// `p_B > p_A` first-regime form, for budgets just above `t_A`.
pub fn p_b_1b(p_a: f64, r_a: f64, m_b: f64, c_b: f64) -> Result<f64> {
    let t = r_a + p_a;
    let lo = p_a;
    let err = LottoError::NoRootInInterval { lo, hi: t };
    let ratio = m_b / c_b;
    if !(ratio > t && ratio <= r_a / c_b + p_a) {
        return Err(err);
    }
    let QuadraticRoots::Real { minus, plus } = roots_r_pm(p_a, r_a, m_b, c_b) else {
        return Err(err);
    };
    let tol = 1e-12 * t.max(1.0);
    let scale = m_b.max(1.0);
    [minus, plus]
        .into_iter()
        .filter(|&r| r >= lo - tol && r < t)
        .map(|r| r.max(lo))
        .find(|&r| (f_boundary(r, p_a, r_a) - (m_b - c_b * r)).abs() <= 1e-10 * scale)
        .ok_or(err)
}

/// Where B's budget line crosses the boundary between the two A-ahead regions.
pub fn p_b_1a(p_a: f64, r_a: f64, m_b: f64, c_b: f64) -> Result<f64> {
    let err = LottoError::NoRootInInterval { lo: 0.0, hi: p_a };
    let ratio = m_b / c_b;
    let f0 = r_a + (r_a * (r_a + 2.0 * p_a)).sqrt();
    if !(ratio > r_a / c_b + p_a && ratio <= (p_a + f0 / 2.0) / c_b) {
        return Err(err);
    }
    let g = |p: f64| g_boundary(p, p_a, m_b, c_b) - r_a;
    let (mut lo, mut hi) = (0.0, p_a);
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return Err(err);
    }
    while hi - lo > 1e-12 * p_a.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    if g(root).abs() <= 1e-10 * r_a.max(1.0) {
        Ok(root)
    } else {
        Err(err)
    }
}

/// Value of `M_B / c_B` at which B is indifferent between not investing and
/// investing `hat_p_b`.
pub fn threshold_h(r_a: f64, p_a: f64, c_b: f64) -> f64 {
    let k1 = c_b * (2.0 - c_b) / 2.0;
    let s = (r_a * (r_a + 2.0 * p_a)).sqrt();
    let k2 = ((r_a.sqrt() + (r_a + 2.0 * p_a).sqrt()) / (r_a + p_a + s)).powi(2);
    let num = c_b * p_a + k1 * r_a;
    let b = 1.0 + k2 * c_b * p_a / 2.0;
    let m = 2.0 * num / (b + (b * b - 2.0 * k2 * num).max(0.0).sqrt());
    m / c_b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub p_b: f64,
    pub u_b: f64,
    pub region: FollowerRegion,
    /// The other optimal response when B is exactly indifferent.
    pub alternative: Option<f64>,
}

/// B's optimal pre-allocation purchase against `p_a`.
pub fn best_response_b(p_a: f64, params: &MonetaryParams) -> Result<BestResponse> {
    params.check_a(p_a)?;
    let r_a = params.real_a(p_a);
    let ratio = params.max_b();
    let h = threshold_h(r_a, p_a, params.c_b);
    let indifferent = (ratio - h).abs() <= 1e-12 * h.max(1.0);
    let hat = hat_p_b(p_a, params.m_b, params.c_b).clamp(0.0, ratio);
    let (p_b, alternative) = if indifferent {
        (0.0, Some(hat))
    } else if ratio < h {
        (0.0, None)
    } else {
        (hat, None)
    };
    let (u_b, region) = follower_payoff(p_a, p_b, params)?;
    Ok(BestResponse {
        p_b,
        u_b,
        region,
        alternative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spe::spe_payoff;
    use approx::assert_abs_diff_eq;

    fn params(m_a: f64, c_a: f64, m_b: f64, c_b: f64) -> MonetaryParams {
        MonetaryParams::new(m_a, c_a, m_b, c_b).unwrap()
    }

    #[test]
    fn payoff_examples() {
        let m = params(1.0, 0.5, 1.0, 0.5);
        assert_eq!(
            follower_payoff(0.0, 0.0, &m).unwrap(),
            (0.5, FollowerRegion::R1A)
        );

        let m = params(1.0, 0.5, 0.25, 0.5);
        let (u, region) = follower_payoff(1.0, 0.0, &m).unwrap();
        assert_eq!(region, FollowerRegion::R1A);
        assert_abs_diff_eq!(u, 1.0 - spe_payoff(1.0, 0.5, 0.25).pi_a, epsilon = 1e-15);

        let m = params(1.0, 0.5, 1.0, 0.5);
        let (u, region) = follower_payoff(0.0, 4.0 / 3.0, &m).unwrap();
        assert_eq!(region, FollowerRegion::R1B);
        assert_abs_diff_eq!(
            u,
            spe_payoff(4.0 / 3.0, 1.0 / 3.0, 1.0).pi_a,
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_budgets() {
        let m = params(1.0, 0.5, 1.0, 0.5);
        // A spent everything on pre-allocation, B matches it exactly
        assert_eq!(follower_payoff(2.0, 2.0, &m).unwrap().0, 0.0);
        assert_eq!(follower_payoff(2.0, 0.0, &m).unwrap().0, 0.5);
        assert_eq!(
            follower_payoff(0.0, 2.0, &m).unwrap().0,
            spe_payoff(2.0, 0.0, 1.0).pi_a
        );
        assert!(matches!(
            follower_payoff(0.0, 2.5, &m),
            Err(LottoError::OutOfBudget { .. })
        ));
    }

    #[test]
    fn hat_examples() {
        assert_abs_diff_eq!(hat_p_b(0.0, 1.0, 0.5), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hat_p_b(0.0, 2.0, 0.5), 8.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hat_p_b(4.0, 2.0, 0.5), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn roots_examples() {
        match roots_r_pm(0.0, 1.0, 0.5, 0.5) {
            QuadraticRoots::Real { minus, plus } => {
                assert_abs_diff_eq!(minus, 2.0 / 3.0, epsilon = 1e-14);
                assert_abs_diff_eq!(plus, 1.0, epsilon = 1e-14);
                for r in [minus, plus] {
                    assert_abs_diff_eq!(f_boundary(r, 0.0, 1.0), 0.5 - 0.5 * r, epsilon = 1e-10);
                }
            }
            QuadraticRoots::Complex => panic!("expected real roots"),
        }
        // M_B = c_B t_A
        let (p_a, r_a, c_b) = (0.7, 0.4, 0.3);
        let m_b = c_b * (r_a + p_a);
        match roots_r_pm(p_a, r_a, m_b, c_b) {
            QuadraticRoots::Real { minus, plus } => {
                assert_abs_diff_eq!(minus, hat_p_b(p_a, m_b, c_b), epsilon = 1e-12);
                assert_abs_diff_eq!(plus, m_b / c_b, epsilon = 1e-12);
            }
            QuadraticRoots::Complex => panic!("expected real roots"),
        }
        assert_eq!(roots_r_pm(0.0, 1.0, 0.1, 0.5), QuadraticRoots::Complex);
    }

    #[test]
    fn threshold_collapses() {
        assert_abs_diff_eq!(threshold_h(1.0, 0.0, 0.5), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(threshold_h(0.0, 1.5, 0.4), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn best_response_examples() {
        let m = params(0.5, 0.5, 2.0, 0.5);
        let br = best_response_b(0.0, &m).unwrap();
        assert_abs_diff_eq!(br.p_b, 8.0 / 3.0, epsilon = 1e-14);
        assert_eq!(br.region, FollowerRegion::R1B);

        // M_B / c_B <= R_A + p_A
        let m = params(1.0, 0.5, 0.5, 0.5);
        assert_eq!(best_response_b(1.0, &m).unwrap().p_b, 0.0);
    }
}
