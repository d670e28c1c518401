//! Equilibrium analysis of two-player General Lotto games in which one or
//! both players can pre-allocate resources before the decisive stage.
//!
//! The crate covers the closed-form equilibrium payoffs, a general solver for
//! the stage-2 game with favoritism, level curves and optimal budget
//! splitting, the single-battlefield Stackelberg game, and brute-force
//! oracles that verify all of the above.

pub mod error;
pub mod favoritism;
pub mod game;
pub mod interplay;
pub mod oracle;
pub mod spe;
pub mod stackelberg;

pub use error::{LottoError, Result};
pub use favoritism::{
    h_threshold, soe_residuals, solve_numeric, solve_partition_closed, stage2_payoff,
    KappaSolution, SolveMethod, Stage2Outcome,
};
pub use game::{normalize_config, GameConfig, PreAllocation};
pub use interplay::{
    effectiveness_ratio, equivalent_preallocation, level_curve, level_curve_value,
    optimal_investment, InvestmentBranch, InvestmentPlan, LevelCurve, LevelValue,
};
pub use oracle::{
    budget_line_scan, follower_scan, grid_search_preallocation, run_check, run_suite, GridSpec,
    VerificationReport, CHECKS,
};
pub use spe::{
    classify_regime, hart_baseline, solve_spe, spe_payoff, RegimeTag, SpePayoff, SpeRegime,
    SpeResult,
};
pub use stackelberg::{
    best_response_b, follower_payoff, stackelberg_equilibrium, FollowerRegion, MonetaryParams,
    StackelbergCase, StackelbergOutcome,
};
