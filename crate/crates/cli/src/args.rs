use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "lotto-lab",
    version,
    about = "Equilibria of General Lotto games with pre-allocated resources"
)]
pub struct Cli {
    /// JSON run configuration; command-line flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file (written atomically). Prints to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stage-2 payoff for an arbitrary pre-allocation vector (--p, --w, --RA, --RB).
    Stage2(ParamArgs),
    /// Equilibrium payoff and regime (--P, --RA, --RB).
    Spe(ParamArgs),
    /// Run another command over a grid of one or two parameters.
    Sweep(SweepArgs),
    /// Level curves R_A(P) at payoff levels --Pi.
    LevelCurve(ParamArgs),
    /// Effectiveness ratio of pre-allocated versus real-time resources (--RA, --RB).
    Ratio(ParamArgs),
    /// Optimal split of a monetary budget (--MA, --cA, --RB).
    Invest(ParamArgs),
    /// Leader-follower equilibrium (--MA, --cA, --MB, --cB).
    Stackelberg(ParamArgs),
    /// Run the brute-force verification suite (--checks, --resolution, --seed).
    Verify(ParamArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stage2(_) => "stage2",
            Command::Spe(_) => "spe",
            Command::Sweep(_) => "sweep",
            Command::LevelCurve(_) => "level-curve",
            Command::Ratio(_) => "ratio",
            Command::Invest(_) => "invest",
            Command::Stackelberg(_) => "stackelberg",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Command evaluated at every grid point.
    #[arg(long)]
    pub cmd: Option<String>,

    /// Sweep axis `name:start:stop:steps`; give at most two.
    #[arg(long)]
    pub axis: Vec<String>,

    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    /// Total pre-allocation of player A.
    #[arg(long = "P")]
    pub pre: Option<f64>,
    #[arg(long = "RA")]
    pub r_a: Option<f64>,
    #[arg(long = "RB")]
    pub r_b: Option<f64>,
    /// Multiplier on player B's real-time budget.
    #[arg(long)]
    pub q: Option<f64>,
    /// Battlefield values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub w: Option<Vec<f64>>,
    /// Per-battlefield pre-allocation, comma separated.
    #[arg(long = "p", value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long = "MA")]
    pub m_a: Option<f64>,
    #[arg(long = "cA")]
    pub c_a: Option<f64>,
    #[arg(long = "MB")]
    pub m_b: Option<f64>,
    #[arg(long = "cB")]
    pub c_b: Option<f64>,
    /// Payoff levels, comma separated.
    #[arg(long = "Pi", value_delimiter = ',')]
    pub pi: Option<Vec<f64>>,
    /// Points per level curve.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Check names, comma separated (all checks when absent).
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    #[arg(long)]
    pub resolution: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ParamArgs {
    /// Flags that were given, keyed like the config file's `params`.
    pub fn given(&self) -> Vec<(&'static str, Value)> {
        let mut out = Vec::new();
        let mut num = |k: &'static str, v: Option<f64>| {
            if let Some(v) = v {
                out.push((k, json!(v)));
            }
        };
        num("P", self.pre);
        num("RA", self.r_a);
        num("RB", self.r_b);
        num("q", self.q);
        num("MA", self.m_a);
        num("cA", self.c_a);
        num("MB", self.m_b);
        num("cB", self.c_b);
        if let Some(v) = &self.w {
            out.push(("w", json!(v)));
        }
        if let Some(v) = &self.p {
            out.push(("p", json!(v)));
        }
        if let Some(v) = &self.pi {
            out.push(("Pi", json!(v)));
        }
        if let Some(v) = self.samples {
            out.push(("samples", json!(v)));
        }
        if let Some(v) = &self.checks {
            out.push(("checks", json!(v)));
        }
        if let Some(v) = self.resolution {
            out.push(("resolution", json!(v)));
        }
        if let Some(v) = self.seed {
            out.push(("seed", json!(v)));
        }
        out
    }
}
