use lotto_core::{
    best_response_b, effectiveness_ratio, equivalent_preallocation, follower_payoff,
    level_curve_value, optimal_investment, soe_residuals, solve_numeric, solve_partition_closed,
    spe_payoff, stackelberg_equilibrium, stage2_payoff, GameConfig, MonetaryParams, PreAllocation,
};
use proptest::prelude::*;

fn budget() -> impl Strategy<Value = f64> {
    0.05f64..3.0
}

fn instance() -> impl Strategy<Value = (PreAllocation, GameConfig)> {
    (1usize..=5)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.05f64..1.0, n),
                prop::collection::vec(0.0f64..1.0, n),
                budget(),
                budget(),
            )
        })
        .prop_map(|(raw_w, p, r_a, r_b)| {
            let s: f64 = raw_w.iter().sum();
            let w = raw_w.iter().map(|x| x / s).collect();
            let p = PreAllocation::new(p).unwrap();
            let cfg = GameConfig::new(w, p.total, r_a, r_b);
            (p, cfg)
        })
}

fn monetary() -> impl Strategy<Value = MonetaryParams> {
    (0.1f64..3.0, 0.05f64..0.95, 0.1f64..3.0, 0.05f64..0.95)
        .prop_map(|(m_a, c_a, m_b, c_b)| MonetaryParams::new(m_a, c_a, m_b, c_b).unwrap())
}

proptest! {
    #[test]
    fn payoffs_sum_to_one_and_stay_in_range(pre in 0.0f64..3.0, r_a in 0.0f64..3.0, r_b in budget()) {
        let s = spe_payoff(pre, r_a, r_b);
        prop_assert!((0.0..=1.0).contains(&s.pi_a));
        prop_assert!((s.pi_a + s.pi_b - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn scaling_all_budgets_leaves_payoff_unchanged(pre in budget(), r_a in budget(), r_b in budget(), lambda in 0.1f64..10.0) {
        let a = spe_payoff(pre, r_a, r_b).pi_a;
        let b = spe_payoff(lambda * pre, lambda * r_a, lambda * r_b).pi_a;
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn payoff_monotone_in_every_budget(pre in budget(), r_a in budget(), r_b in budget(), d in 0.0f64..1.0) {
        let base = spe_payoff(pre, r_a, r_b).pi_a;
        prop_assert!(spe_payoff(pre + d, r_a, r_b).pi_a >= base - 1e-12);
        prop_assert!(spe_payoff(pre, r_a + d, r_b).pi_a >= base - 1e-12);
        prop_assert!(spe_payoff(pre, r_a, r_b + d).pi_a <= base + 1e-12);
    }

    #[test]
    fn closed_and_numeric_solvers_agree((p, cfg) in instance()) {
        let a = solve_partition_closed(&p, &cfg).unwrap();
        let b = solve_numeric(&p, &cfg).unwrap();
        prop_assert!((a.kappa_a - b.kappa_a).abs() <= 1e-8 * a.kappa_a);
        prop_assert!((a.kappa_b - b.kappa_b).abs() <= 1e-8 * a.kappa_b);
        prop_assert_eq!(&a.partition_b1, &b.partition_b1);
        let (ra, rb) = soe_residuals(a.kappa_a, a.kappa_b, &p, &cfg);
        prop_assert!(ra.abs().max(rb.abs()) < 1e-10 * cfg.scale());
    }

    #[test]
    fn proportional_preallocation_is_optimal((p, cfg) in instance()) {
        let spe = spe_payoff(cfg.pre, cfg.r_a, cfg.r_b).pi_a;
        let any = stage2_payoff(&p, &cfg).unwrap().pi_a;
        prop_assert!(any <= spe + 1e-9);
        let prop = PreAllocation::proportional(&cfg.w, cfg.pre);
        prop_assert!((stage2_payoff(&prop, &cfg).unwrap().pi_a - spe).abs() <= 1e-10);
    }

    #[test]
    fn effectiveness_at_least_two(r_a in budget(), r_b in budget()) {
        let e = effectiveness_ratio(r_a, r_b).unwrap();
        prop_assert!(e >= 2.0 - 1e-12);
        let p_eq = equivalent_preallocation(r_a, r_b).unwrap();
        let gap = spe_payoff(p_eq, 0.0, r_b).pi_a - spe_payoff(0.0, r_a, r_b).pi_a;
        prop_assert!(gap.abs() <= 1e-9);
    }

    #[test]
    fn level_curve_points_attain_their_level(pi in 0.01f64..0.99, r_b in budget(), frac in 0.0f64..=1.0) {
        let pre = frac * r_b / (1.0 - pi);
        let r_a = level_curve_value(pi, r_b, pre).value().unwrap();
        prop_assert!(r_a >= 0.0);
        prop_assert!((spe_payoff(pre, r_a, r_b).pi_a - pi).abs() <= 1e-9);
    }

    #[test]
    fn optimal_investment_beats_budget_line(m_a in budget(), c_a in 0.05f64..2.0, r_b in budget(), frac in 0.0f64..=1.0) {
        let plan = optimal_investment(m_a, c_a, r_b).unwrap();
        let pre = frac * m_a / c_a;
        let pi = spe_payoff(pre, (m_a - c_a * pre).max(0.0), r_b).pi_a;
        prop_assert!(pi <= plan.pi_opt + 1e-12);
        prop_assert!(plan.p_star < m_a / c_a && plan.r_a_star > 0.0);
    }

    #[test]
    fn best_response_dominates_any_purchase(m in monetary(), fa in 0.0f64..=1.0, fb in 0.0f64..=1.0) {
        let p_a = fa * m.max_a();
        let br = best_response_b(p_a, &m).unwrap();
        let (u, _) = follower_payoff(p_a, fb * m.max_b(), &m).unwrap();
        prop_assert!((0.0..=1.0).contains(&u));
        prop_assert!(u <= br.u_b + 1e-12);
    }

    #[test]
    fn leader_payoff_is_a_security_level(m in monetary(), fa in 0.0f64..=1.0) {
        let out = stackelberg_equilibrium(&m).unwrap();
        prop_assert!((out.u_a + out.u_b - 1.0).abs() <= 1e-12);
        let other = 1.0 - best_response_b(fa * m.max_a(), &m).unwrap().u_b;
        prop_assert!(other <= out.u_a + 1e-9);
    }

    #[test]
    fn config_round_trips_through_json((_p, cfg) in instance()) {
        let text = serde_json::to_string(&cfg).unwrap();
        let back: GameConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
