use serde::{Deserialize, Serialize};

use crate::error::{LottoError, Result};

/// Parameters of a two-player General Lotto game with pre-allocations.
///
/// `pre` is the pre-allocation budget of player A, `r_a`/`r_b` are the
/// real-time budgets and `q` scales player B's real-time resources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub w: Vec<f64>,
    #[serde(rename = "P")]
    pub pre: f64,
    #[serde(rename = "R_A")]
    pub r_a: f64,
    #[serde(rename = "R_B")]
    pub r_b: f64,
    #[serde(default = "one")]
    pub q: f64,
}

fn one() -> f64 {
    1.0
}

impl GameConfig {
    pub fn new(w: Vec<f64>, pre: f64, r_a: f64, r_b: f64) -> Self {
        Self {
            w,
            pre,
            r_a,
            r_b,
            q: 1.0,
        }
    }

    /// A single battlefield of unit value.
    pub fn single(pre: f64, r_a: f64, r_b: f64) -> Self {
        Self::new(vec![1.0], pre, r_a, r_b)
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// Player B's budget in the units of player A (`q * R_B`).
    pub fn effective_r_b(&self) -> f64 {
        self.q * self.r_b
    }

    /// Tolerance scale shared by the stage-2 solvers.
    pub fn scale(&self) -> f64 {
        1f64.max(self.r_a).max(self.effective_r_b()).max(self.pre)
    }
}

/// Validate a raw configuration, rescale `w` to sum to one and fold `q` into `R_B`.
pub fn normalize_config(raw: &GameConfig) -> Result<GameConfig> {
    if raw.w.is_empty() {
        return Err(LottoError::NonPositiveValue {
            name: "n",
            value: 0.0,
        });
    }
    for &wb in &raw.w {
        positive("w", wb)?;
    }
    positive("R_B", raw.r_b)?;
    positive("q", raw.q)?;
    non_negative("P", raw.pre)?;
    non_negative("R_A", raw.r_a)?;

    let total: f64 = raw.w.iter().sum();
    let w = if (total - 1.0).abs() > 1e-12 {
        log::warn!("battlefield values sum to {total}; rescaling to 1");
        raw.w.iter().map(|wb| wb / total).collect()
    } else {
        raw.w.clone()
    };
    Ok(GameConfig {
        w,
        pre: raw.pre,
        r_a: raw.r_a,
        r_b: raw.q * raw.r_b,
        q: 1.0,
    })
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(LottoError::NonPositiveValue { name, value })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(LottoError::NegativeBudget { name, value })
    }
}

/// Deterministic placement of player A's pre-allocated resources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreAllocation {
    pub p: Vec<f64>,
    #[serde(rename = "P")]
    pub total: f64,
}

impl PreAllocation {
    /// Build from amounts; the total is their sum.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        for &pb in &p {
            non_negative("p", pb)?;
        }
        let total = p.iter().sum();
        Ok(Self { p, total })
    }

    /// Build from amounts and check them against a declared total.
    pub fn with_total(p: Vec<f64>, total: f64) -> Result<Self> {
        non_negative("P", total)?;
        let alloc = Self::new(p)?;
        if (alloc.total - total).abs() > 1e-9 * total.max(1.0) {
            return Err(LottoError::PreAllocationTotal {
                sum: alloc.total,
                total,
            });
        }
        Ok(Self { p: alloc.p, total })
    }

    /// The proportional allocation `w * P`.
    pub fn proportional(w: &[f64], total: f64) -> Self {
        Self {
            p: w.iter().map(|wb| wb * total).collect(),
            total,
        }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// True when every entry is within `1e-9 * max(1, P)` of `w_b * P`.
    pub fn is_proportional(&self, w: &[f64]) -> bool {
        let tol = 1e-9 * self.total.max(1.0);
        self.p.len() == w.len()
            && self
                .p
                .iter()
                .zip(w)
                .all(|(pb, wb)| (pb - wb * self.total).abs() <= tol)
    }
}
