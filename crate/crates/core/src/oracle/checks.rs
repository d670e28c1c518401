use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::sample::{self, budget, monetary, monetary_case, stage2_instance};
use super::{
    budget_line_scan, follower_scan, grid_search_preallocation, inf_dist, GridSpec,
    VerificationReport,
};
use crate::error::{LottoError, Result};
use crate::favoritism::{
    soe_residuals, solve_bisection, solve_numeric, solve_partition_closed, stage2_payoff,
    KappaSolution,
};
use crate::game::{GameConfig, PreAllocation};
use crate::interplay::{
    effectiveness_ratio, equivalent_preallocation, level_curve_breakpoint, level_curve_end,
    level_curve_linear, level_curve_quadratic, level_curve_value, optimal_investment,
    InvestmentBranch,
};
use crate::spe::{case1_payoff, case2_payoff, hart_baseline, regime_boundary, spe_payoff};
use crate::stackelberg::{
    best_response_b, follower_payoff, hat_p_b, p_b_1a, p_b_1b, roots_r_pm, stackelberg_equilibrium,
    threshold_h, u_b_1b, FollowerRegion, MonetaryParams, QuadraticRoots,
};

/// Names of every registered check, in execution order.
pub const CHECKS: &[&str] = &[
    "constant_sum",
    "regime_continuity",
    "scale_invariance",
    "monotonicity",
    "hart_baseline",
    "payoff_bounds",
    "residual_certificate",
    "solver_agreement",
    "partition_order",
    "proportional_consistency",
    "case2_boundary",
    "effectiveness_floor",
    "effectiveness_equivalence",
    "level_curve_duality",
    "level_curve_continuity",
    "level_curve_shape",
    "investment_optimality",
    "no_pure_preallocation",
    "investment_discontinuity",
    "follower_continuity",
    "stationarity",
    "best_response_dominance",
    "threshold_interval",
    "closed_form_consistency",
    "maxmin_certificate",
    "lemma2_grid",
    "budget_line",
    "follower_scan",
    "determinism",
];

type CheckFn = fn(&GridSpec, u64) -> Result<VerificationReport>;

fn lookup(name: &str) -> Option<(CheckFn, u64)> {
    let salt = CHECKS.iter().position(|c| *c == name)? as u64;
    let f: CheckFn = match name {
        "constant_sum" => constant_sum,
        "regime_continuity" => regime_continuity,
        "scale_invariance" => scale_invariance,
        "monotonicity" => monotonicity,
        "hart_baseline" => baseline_check,
        "payoff_bounds" => payoff_bounds,
        "residual_certificate" => residual_certificate,
        "solver_agreement" => solver_agreement,
        "partition_order" => partition_order,
        "proportional_consistency" => proportional_consistency,
        "case2_boundary" => case2_boundary,
        "effectiveness_floor" => effectiveness_floor,
        "effectiveness_equivalence" => effectiveness_equivalence,
        "level_curve_duality" => level_curve_duality,
        "level_curve_continuity" => level_curve_continuity,
        "level_curve_shape" => level_curve_shape,
        "investment_optimality" => investment_optimality,
        "no_pure_preallocation" => no_pure_preallocation,
        "investment_discontinuity" => investment_discontinuity,
        "follower_continuity" => follower_continuity,
        "stationarity" => stationarity,
        "best_response_dominance" => best_response_dominance,
        "threshold_interval" => threshold_interval,
        "closed_form_consistency" => closed_form_consistency,
        "maxmin_certificate" => maxmin_certificate,
        "lemma2_grid" => lemma2_grid,
        "budget_line" => budget_line,
        "follower_scan" => follower_scan_check,
        "determinism" => determinism,
        _ => return None,
    };
    Some((f, salt))
}

/// Run a single named check.
pub fn run_check(name: &str, grid: &GridSpec) -> Result<VerificationReport> {
    let (f, salt) = lookup(name).ok_or_else(|| LottoError::UnknownCheck(name.to_string()))?;
    f(grid, salt)
}

/// Run the named checks, or all of them when `checks` is empty.
pub fn run_suite(checks: &[&str], grid: &GridSpec) -> Result<Vec<VerificationReport>> {
    let names: Vec<&str> = if checks.is_empty() {
        CHECKS.to_vec()
    } else {
        checks.to_vec()
    };
    if let Some(bad) = names.iter().find(|n| lookup(n).is_none()) {
        return Err(LottoError::UnknownCheck(bad.to_string()));
    }
    names.iter().map(|n| run_check(n, grid)).collect()
}

struct Tracker {
    name: &'static str,
    tol: f64,
    n: usize,
    worst: f64,
    input: Value,
}

impl Tracker {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            tol,
            n: 0,
            worst: f64::NEG_INFINITY,
            input: Value::Null,
        }
    }

    fn record(&mut self, violation: f64, input: impl FnOnce() -> Value) {
        let v = if violation.is_nan() {
            f64::INFINITY
        } else {
            violation
        };
        self.n += 1;
        if v > self.worst || self.input.is_null() {
            self.worst = v;
            self.input = input();
        }
    }

    fn extend(&mut self, items: Vec<(f64, Value)>) {
        for (v, input) in items {
            self.record(v, || input);
        }
    }

    fn finish(self) -> Result<VerificationReport> {
        Ok(VerificationReport {
            check_name: self.name.to_string(),
            instances_run: self.n,
            max_violation: self.worst,
            tolerance: self.tol,
            pass: self.worst <= self.tol,
            worst_case_input: self.input,
        })
    }
}

fn stage2_json(p: &PreAllocation, cfg: &GameConfig) -> Value {
    json!({"w": cfg.w, "p": p.p, "P": p.total, "R_A": cfg.r_a, "R_B": cfg.r_b})
}

fn params_json(m: &MonetaryParams) -> Value {
    json!({"M_A": m.m_a, "c_A": m.c_a, "M_B": m.m_b, "c_B": m.c_b})
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn constant_sum(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("constant_sum", 1e-12);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..1000 {
        let (pre, r_b) = (budget(&mut rng), budget(&mut rng));
        let r_a = if rng.gen_bool(0.2) {
            0.0
        } else {
            budget(&mut rng)
        };
        let s = spe_payoff(pre, r_a, r_b);
        t.record(
            (s.pi_a + s.pi_b - 1.0).abs(),
            || json!({"P": pre, "R_A": r_a, "R_B": r_b}),
        );
    }
    for _ in 0..200 {
        let (p, cfg) = stage2_instance(&mut rng, &[1, 2, 3, 5]);
        let o = stage2_payoff(&p, &cfg)?;
        t.record((o.pi_a + o.pi_b - 1.0).abs(), || stage2_json(&p, &cfg));
    }
    t.finish()
}

fn regime_continuity(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("regime_continuity", 1e-9);
    for i in 1..=50 {
        for j in 1..=50 {
            let (pre, r_b) = (3.0 * i as f64 / 50.0, 3.0 * j as f64 / 50.0);
            if r_b <= pre {
                continue;
            }
            let r_a = regime_boundary(pre, r_b);
            let gap = (case1_payoff(pre, r_a, r_b) - case2_payoff(pre, r_a, r_b)).abs();
            t.record(gap, || json!({"P": pre, "R_B": r_b, "R_A": r_a}));
        }
    }
    t.finish()
}

fn scale_invariance(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("scale_invariance", 1e-12);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..1000 {
        let (pre, r_a, r_b) = (budget(&mut rng), budget(&mut rng), budget(&mut rng));
        let base = spe_payoff(pre, r_a, r_b).pi_a;
        for lambda in [0.1, 3.0, 10.0] {
            let scaled = spe_payoff(lambda * pre, lambda * r_a, lambda * r_b).pi_a;
            t.record(
                (scaled - base).abs(),
                || json!({"P": pre, "R_A": r_a, "R_B": r_b, "lambda": lambda}),
            );
        }
    }
    t.finish()
}

fn monotonicity(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("monotonicity", 1e-12);
    let outer: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    let inner: Vec<f64> = (0..=150).map(|i| 0.02 * i as f64).collect();
    for &x in &outer {
        for &y in &outer {
            // increasing in P (x = R_A, y = R_B)
            if y > 0.0 {
                let v: Vec<f64> = inner.iter().map(|&p| spe_payoff(p, x, y).pi_a).collect();
                for k in 1..v.len() {
                    t.record(
                        v[k - 1] - v[k],
                        || json!({"vary": "P", "P": inner[k], "R_A": x, "R_B": y}),
                    );
                }
                // increasing in R_A (x = P)
                let v: Vec<f64> = inner.iter().map(|&r| spe_payoff(x, r, y).pi_a).collect();
                for k in 1..v.len() {
                    t.record(
                        v[k - 1] - v[k],
                        || json!({"vary": "R_A", "P": x, "R_A": inner[k], "R_B": y}),
                    );
                }
            }
            // decreasing in R_B (x = P, y = R_A)
            let v: Vec<f64> = inner[1..]
                .iter()
                .map(|&r| spe_payoff(x, y, r).pi_a)
                .collect();
            for k in 1..v.len() {
                t.record(
                    v[k] - v[k - 1],
                    || json!({"vary": "R_B", "P": x, "R_A": y, "R_B": inner[k + 1]}),
                );
            }
        }
    }
    t.finish()
}

fn baseline_check(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("hart_baseline", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..10_000 {
        let (r_a, r_b) = (budget(&mut rng), budget(&mut rng));
        let gap = (spe_payoff(0.0, r_a, r_b).pi_a - hart_baseline(r_a, r_b)).abs();
        t.record(gap, || json!({"R_A": r_a, "R_B": r_b}));
    }
    t.finish()
}

fn payoff_bounds(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("payoff_bounds", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for i in 0..4000 {
        let pre = if i % 7 == 0 { 0.0 } else { budget(&mut rng) };
        let r_b = budget(&mut rng);
        let r_a = if rng.gen_bool(0.5) {
            0.0
        } else {
            budget(&mut rng)
        };
        let pi = spe_payoff(pre, r_a, r_b).pi_a;
        let zero_expected = r_a == 0.0 && r_b >= pre;
        let iff = if (pi == 0.0) == zero_expected {
            0.0
        } else {
            1.0
        };
        let v = (-pi).max(pi - 1.0).max(iff);
        t.record(v, || json!({"P": pre, "R_A": r_a, "R_B": r_b}));
    }
    t.finish()
}

fn certificate_violation(sol: &KappaSolution, p: &PreAllocation, cfg: &GameConfig) -> f64 {
    let (ra, rb) = soe_residuals(sol.kappa_a, sol.kappa_b, p, cfg);
    ra.abs().max(rb.abs()) / cfg.scale()
}

fn residual_certificate(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("residual_certificate", 1e-10);
    let mut rng = sample::rng(grid.seed, salt);
    let instances: Vec<_> = (0..500)
        .map(|_| stage2_instance(&mut rng, &[1, 2, 3, 5]))
        .collect();
    let rows = instances
        .par_iter()
        .map(|(p, cfg)| {
            let mut v: f64 = 0.0;
            for sol in [
                solve_partition_closed(p, cfg)?,
                solve_numeric(p, cfg)?,
                solve_bisection(p, cfg)?,
            ] {
                v = v.max(certificate_violation(&sol, p, cfg));
            }
            Ok((v, stage2_json(p, cfg)))
        })
        .collect::<Result<Vec<_>>>()?;
    t.extend(rows);
    t.finish()
}

fn solver_agreement(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("solver_agreement", 1e-8);
    let mut rng = sample::rng(grid.seed, salt);
    let instances: Vec<_> = (0..500)
        .map(|_| stage2_instance(&mut rng, &[1, 2, 3, 5]))
        .collect();
    let rows = instances
        .par_iter()
        .map(|(p, cfg)| {
            let a = solve_partition_closed(p, cfg)?;
            let b = solve_numeric(p, cfg)?;
            let mut v = rel(a.kappa_a, b.kappa_a).max(rel(a.kappa_b, b.kappa_b));
            if a.partition_b1 != b.partition_b1 {
                v = v.max(1.0);
            }
            Ok((v, stage2_json(p, cfg)))
        })
        .collect::<Result<Vec<_>>>()?;
    t.extend(rows);
    t.finish()
}

fn partition_order(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("partition_order", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..500 {
        let (p, cfg) = stage2_instance(&mut rng, &[2, 3, 5]);
        let ratio = |b: usize| p.p[b] / cfg.w[b];
        for sol in [solve_partition_closed(&p, &cfg)?, solve_numeric(&p, &cfg)?] {
            if sol.partition_b1.is_empty() || sol.partition_b2.is_empty() {
                t.record(-1.0, || stage2_json(&p, &cfg));
                continue;
            }
            let min_b1 = sol
                .partition_b1
                .iter()
                .map(|&b| ratio(b))
                .fold(f64::INFINITY, f64::min);
            let max_b2 = sol
                .partition_b2
                .iter()
                .map(|&b| ratio(b))
                .fold(f64::NEG_INFINITY, f64::max);
            t.record(max_b2 - min_b1, || stage2_json(&p, &cfg));
        }
    }
    t.finish()
}

fn proportional_consistency(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("proportional_consistency", 1e-10);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..500 {
        let (_, cfg) = stage2_instance(&mut rng, &[1, 2, 3, 5]);
        let p = PreAllocation::proportional(&cfg.w, cfg.pre);
        let gap =
            (stage2_payoff(&p, &cfg)?.pi_a - spe_payoff(cfg.pre, cfg.r_a, cfg.r_b).pi_a).abs();
        t.record(gap, || stage2_json(&p, &cfg));
    }
    t.finish()
}

fn case2_boundary(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("case2_boundary", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..2000 {
        let (pre, r_a, r_b) = (budget(&mut rng), budget(&mut rng), budget(&mut rng));
        let rhs = r_a / 2.0 * (1.0 + (1.0 + 2.0 * pre / r_a).sqrt());
        if ((r_b - pre) - rhs).abs() < 1e-9 * r_b.max(1.0) {
            continue;
        }
        let cfg = GameConfig::single(pre, r_a, r_b);
        let p = PreAllocation::new(vec![pre])?;
        let sol = solve_partition_closed(&p, &cfg)?;
        let mismatch = sol.partition_b1.is_empty() != (r_b - pre > rhs);
        t.record(if mismatch { 1.0 } else { 0.0 }, || stage2_json(&p, &cfg));
    }
    t.finish()
}

fn grid_100() -> Vec<f64> {
    (1..=100)
        .map(|i| 0.01 + (3.0 - 0.01) * i as f64 / 100.0)
        .collect()
}

fn effectiveness_floor(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("effectiveness_floor", 1e-12);
    let g = grid_100();
    for &r_a in &g {
        for &r_b in &g {
            let e = effectiveness_ratio(r_a, r_b)?;
            let mut v = 2.0 - e;
            if r_a >= r_b {
                v = v.max((e - 2.0).abs());
            }
            t.record(v, || json!({"R_A": r_a, "R_B": r_b}));
        }
    }
    t.finish()
}

fn effectiveness_equivalence(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("effectiveness_equivalence", 1e-9);
    let g = grid_100();
    for &r_a in &g {
        for &r_b in &g {
            let p_eq = equivalent_preallocation(r_a, r_b)?;
            let gap = (spe_payoff(p_eq, 0.0, r_b).pi_a - spe_payoff(0.0, r_a, r_b).pi_a).abs();
            t.record(gap, || json!({"R_A": r_a, "R_B": r_b, "P_eq": p_eq}));
        }
    }
    t.finish()
}

const LEVELS: [f64; 12] = [
    0.1, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.625, 0.7, 0.75, 0.8, 0.9,
];

fn level_curve_duality(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("level_curve_duality", 1e-9);
    for pi in LEVELS {
        for r_b in [0.5, 1.0, 2.0] {
            let end = level_curve_end(pi, r_b);
            for k in 0..40 {
                let pre = end * k as f64 / 39.0;
                let r_a = level_curve_value(pi, r_b, pre).value().unwrap_or(f64::NAN);
                let gap = (spe_payoff(pre, r_a, r_b).pi_a - pi).abs();
                t.record(gap, || json!({"Pi": pi, "R_B": r_b, "P": pre, "R_A": r_a}));
            }
        }
    }
    t.finish()
}

fn level_curve_continuity(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("level_curve_continuity", 1e-12);
    for i in 0..50 {
        let pi = i as f64 / 100.0;
        for r_b in [0.5, 1.0, 2.0, 3.0] {
            let bp = level_curve_breakpoint(pi, r_b).expect("pi below one half");
            let gap = (level_curve_linear(pi, r_b, bp) - level_curve_quadratic(pi, r_b, bp)).abs();
            t.record(gap, || json!({"Pi": pi, "R_B": r_b, "P": bp}));
        }
    }
    t.finish()
}

fn level_curve_shape(_grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("level_curve_shape", 1e-12);
    for pi in LEVELS {
        for r_b in [0.5, 1.0, 2.0] {
            let end = level_curve_end(pi, r_b);
            let v: Vec<f64> = (0..=200)
                .map(|k| {
                    level_curve_value(pi, r_b, end * k as f64 / 200.0)
                        .value()
                        .unwrap_or(f64::NAN)
                })
                .collect();
            t.record(
                (-v[0]).max(v[200].abs()),
                || json!({"Pi": pi, "R_B": r_b, "at": "endpoints"}),
            );
            for k in 1..=200 {
                t.record(
                    v[k] - v[k - 1],
                    || json!({"Pi": pi, "R_B": r_b, "k": k, "at": "decrease"}),
                );
            }
            for k in 1..200 {
                let second = v[k + 1] - 2.0 * v[k] + v[k - 1];
                t.record(
                    -second,
                    || json!({"Pi": pi, "R_B": r_b, "k": k, "at": "convexity"}),
                );
            }
        }
    }
    t.finish()
}

fn investment_instance(rng: &mut rand_chacha::ChaCha8Rng) -> (f64, f64, f64) {
    (budget(rng), rng.gen_range(0.05..2.0), budget(rng))
}

fn investment_optimality(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("investment_optimality", 1e-9);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..300 {
        let (m_a, c_a, r_b) = investment_instance(&mut rng);
        let plan = optimal_investment(m_a, c_a, r_b)?;
        let input = || json!({"M_A": m_a, "c_A": c_a, "R_B": r_b});
        let attained = spe_payoff(plan.p_star, plan.r_a_star, r_b).pi_a;
        t.record((attained - plan.pi_opt).abs(), input);
        let end = m_a / c_a;
        for k in 0..200 {
            let pre = end * k as f64 / 199.0;
            let pi = spe_payoff(pre, (m_a - c_a * pre).max(0.0), r_b).pi_a;
            t.record(pi - plan.pi_opt, input);
        }
    }
    t.finish()
}

fn no_pure_preallocation(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("no_pure_preallocation", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..2000 {
        let (m_a, c_a, r_b) = investment_instance(&mut rng);
        let plan = optimal_investment(m_a, c_a, r_b)?;
        let v = if plan.p_star >= m_a / c_a || plan.r_a_star <= 0.0 {
            1.0
        } else {
            0.0
        };
        t.record(v, || json!({"M_A": m_a, "c_A": c_a, "R_B": r_b}));
    }
    t.finish()
}

fn investment_discontinuity(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("investment_discontinuity", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..500 {
        let r_b = budget(&mut rng);
        let m_a = rng.gen_range(0.02..0.98) * r_b;
        let c = m_a / r_b;
        let left = optimal_investment(m_a, c * (1.0 - 1e-9), r_b)?;
        let right = optimal_investment(m_a, c * (1.0 + 1e-9), r_b)?;
        let at = optimal_investment(m_a, c, r_b)?;
        let jump = left.p_star - right.p_star;
        let ok = left.branch == InvestmentBranch::Interior
            && right.branch == InvestmentBranch::Boundary
            && at.branch == InvestmentBranch::Indifferent
            && right.p_star == 0.0
            && jump > 0.5 * at.indifference_interval.map_or(0.0, |i| i.1);
        t.record(
            if ok { 0.0 } else { 1.0 },
            || json!({"M_A": m_a, "R_B": r_b, "c_A": c}),
        );
    }
    t.finish()
}

fn follower_continuity(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("follower_continuity", 1e-8);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..400 {
        let m = monetary(&mut rng);
        let p_a = rng.gen_range(0.0..m.max_a());
        let r_a = m.real_a(p_a);
        let mut points = vec![p_a];
        if let Ok(x) = p_b_1b(p_a, r_a, m.m_b, m.c_b) {
            points.push(x);
        }
        if let Ok(x) = p_b_1a(p_a, r_a, m.m_b, m.c_b) {
            points.push(x);
        }
        if let QuadraticRoots::Real { minus, plus } = roots_r_pm(p_a, r_a, m.m_b, m.c_b) {
            points.extend([minus, plus]);
        }
        for x in points {
            let delta = 1e-10 * x.abs().max(1.0);
            if x - delta < 0.0 || x + delta > m.max_b() {
                continue;
            }
            let lo = follower_payoff(p_a, x - delta, &m)?.0;
            let hi = follower_payoff(p_a, x + delta, &m)?.0;
            t.record((hi - lo).abs(), || {
                let mut v = params_json(&m);
                v["p_A"] = json!(p_a);
                v["p_B"] = json!(x);
                v
            });
        }
    }
    t.finish()
}

fn stationarity(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("stationarity", 1e-6);
    let mut rng = sample::rng(grid.seed, salt);
    let step = 1e-5;
    while t.n < 200 {
        let m = monetary(&mut rng);
        let p_a = rng.gen_range(0.0..m.max_a());
        let hat = hat_p_b(p_a, m.m_b, m.c_b);
        if hat - step <= p_a || hat + step >= m.max_b() {
            continue;
        }
        if follower_payoff(p_a, hat, &m)?.1 != FollowerRegion::R1B {
            continue;
        }
        let d = (u_b_1b(p_a, hat + step, &m) - u_b_1b(p_a, hat - step, &m)) / (2.0 * step);
        t.record(d.abs(), || {
            let mut v = params_json(&m);
            v["p_A"] = json!(p_a);
            v
        });
    }
    t.finish()
}

fn grid_max_follower(p_a: f64, m: &MonetaryParams, points: usize) -> Result<f64> {
    let end = m.max_b();
    (0..points)
        .map(|i| follower_payoff(p_a, end * i as f64 / (points - 1) as f64, m).map(|r| r.0))
        .try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v)))
}

fn best_response_dominance(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("best_response_dominance", 1e-6);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..50 {
        let m = monetary(&mut rng);
        let p_a = rng.gen_range(0.0..=m.max_a());
        let br = best_response_b(p_a, &m)?;
        let gap = grid_max_follower(p_a, &m, 2000)? - br.u_b;
        t.record(gap, || {
            let mut v = params_json(&m);
            v["p_A"] = json!(p_a);
            v
        });
    }
    t.finish()
}

fn threshold_interval(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("threshold_interval", 1e-12);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..2000 {
        let r_a = budget(&mut rng);
        let p_a = if rng.gen_bool(0.1) {
            0.0
        } else {
            budget(&mut rng)
        };
        let c_b = rng.gen_range(0.01..0.99);
        let h = threshold_h(r_a, p_a, c_b);
        let upper = p_a + (r_a + (r_a * (r_a + 2.0 * p_a)).sqrt()) / 2.0;
        let scale = upper.max(1.0);
        let v = ((r_a + p_a - h) / scale).max((h - upper) / scale);
        t.record(v, || json!({"R_A": r_a, "p_A": p_a, "c_B": c_b}));
        let h0 = threshold_h(r_a, 0.0, c_b);
        t.record(
            (h0 - r_a).abs() / r_a.max(1.0),
            || json!({"R_A": r_a, "p_A": 0.0, "c_B": c_b}),
        );
    }
    t.finish()
}

fn closed_form_consistency(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("closed_form_consistency", 1e-12);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..4000 {
        let m = monetary(&mut rng);
        let p_a = rng.gen_range(0.0..m.max_a());
        let p_b = rng.gen_range(0.0..m.max_b());
        let (r_a, r_b) = (m.real_a(p_a), m.real_b(p_b));
        let u = follower_payoff(p_a, p_b, &m)?.0;
        let other = if p_a >= p_b {
            1.0 - spe_payoff(p_a - p_b, r_a, r_b).pi_a
        } else {
            spe_payoff(p_b - p_a, r_b, r_a).pi_a
        };
        t.record((u - other).abs(), || {
            let mut v = params_json(&m);
            v["p_A"] = json!(p_a);
            v["p_B"] = json!(p_b);
            v
        });
    }
    t.finish()
}

/// Leader's guaranteed payoff at `p_a` against the analytic best response.
fn leader_value(p_a: f64, m: &MonetaryParams) -> Result<f64> {
    Ok(1.0 - best_response_b(p_a, m)?.u_b)
}

fn maxmin_certificate(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("maxmin_certificate", 1e-6);
    let mut rng = sample::rng(grid.seed, salt);
    let draws: Vec<MonetaryParams> = (0..30).map(|i| monetary_case(&mut rng, i % 3)).collect();
    let rows = draws
        .par_iter()
        .map(|m| {
            let out = stackelberg_equilibrium(m)?;
            let star = leader_value(out.p_a_star, m)?;
            let mut v = (star - out.u_a).abs();
            for k in 0..500 {
                let p = m.max_a() * k as f64 / 499.0;
                v = v.max(leader_value(p, m)? - star);
            }
            let mut input = params_json(m);
            input["case"] = json!(out.case.as_str());
            Ok((v, input))
        })
        .collect::<Result<Vec<_>>>()?;
    t.extend(rows);
    t.finish()
}

fn lemma2_grid(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("lemma2_grid", 1e-8);
    let mut rng = sample::rng(grid.seed, salt);
    let m = grid.resolution as f64;
    for _ in 0..20 {
        let n = rng.gen_range(2..=3);
        let cfg = GameConfig::new(
            sample::weights(&mut rng, n),
            budget(&mut rng),
            budget(&mut rng),
            budget(&mut rng),
        );
        let (p, pi) = grid_search_preallocation(&cfg, grid)?;
        let target: Vec<f64> = cfg.w.iter().map(|w| w * cfg.pre).collect();
        let steps = inf_dist(&p.p, &target) / (cfg.pre / m);
        let excess = pi - spe_payoff(cfg.pre, cfg.r_a, cfg.r_b).pi_a;
        t.record(
            excess.max(steps - 1.0),
            || json!({"w": cfg.w, "P": cfg.pre, "R_A": cfg.r_a, "R_B": cfg.r_b, "p_best": p.p}),
        );
    }
    t.finish()
}

fn budget_line(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("budget_line", 1e-8);
    let mut rng = sample::rng(grid.seed, salt);
    let points = 50 * grid.resolution;
    for _ in 0..100 {
        let (m_a, c_a, r_b) = investment_instance(&mut rng);
        let plan = optimal_investment(m_a, c_a, r_b)?;
        let scan = budget_line_scan(m_a, c_a, r_b, points, 0.0)?;
        let steps = (scan.p_best - plan.p_star).abs() / scan.step;
        let v = (scan.pi_best - plan.pi_opt).max(steps - 1.0);
        t.record(v, || json!({"M_A": m_a, "c_A": c_a, "R_B": r_b}));
    }
    t.finish()
}

fn follower_scan_check(grid: &GridSpec, salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("follower_scan", 0.0);
    let mut rng = sample::rng(grid.seed, salt);
    for _ in 0..50 {
        let m = monetary(&mut rng);
        let p_a = rng.gen_range(0.0..=m.max_a());
        let br = best_response_b(p_a, &m)?;
        let scan = follower_scan(p_a, &m, 2000)?;
        let steps = (scan.p_b_best - br.p_b).abs() / scan.step;
        let v = (steps - 1.0).max((scan.u_b_best - br.u_b).abs() - 1e-6);
        t.record(v, || {
            let mut v = params_json(&m);
            v["p_A"] = json!(p_a);
            v
        });
    }
    t.finish()
}

fn determinism(grid: &GridSpec, _salt: u64) -> Result<VerificationReport> {
    let mut t = Tracker::new("determinism", 0.0);
    for name in ["solver_agreement", "maxmin_certificate", "lemma2_grid"] {
        let a = serde_json::to_string(&run_check(name, grid)?).expect("report serializes");
        let b = serde_json::to_string(&run_check(name, grid)?).expect("report serializes");
        t.record(if a == b { 0.0 } else { 1.0 }, || json!({"check": name}));
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_dispatches() {
        for name in CHECKS {
            assert!(lookup(name).is_some(), "{name}");
        }
        assert_eq!(
            run_suite(&["nope"], &GridSpec::default()),
            Err(LottoError::UnknownCheck("nope".into()))
        );
    }
}
