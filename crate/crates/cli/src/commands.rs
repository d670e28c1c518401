use lotto_core::{
    effectiveness_ratio, equivalent_preallocation, level_curve, normalize_config,
    optimal_investment, run_suite, solve_spe, stackelberg_equilibrium, stage2_payoff, GameConfig,
    GridSpec, MonetaryParams, PreAllocation,
};
use rayon::prelude::*;

use crate::params::{Axis, CliError, CliResult, Params};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Str(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Whether the JSON form is a single object rather than an array.
    pub single: bool,
}

impl Table {
    fn one(command: &str, row: Vec<Cell>) -> Self {
        Table {
            columns: columns(command),
            rows: vec![row],
            single: true,
        }
    }
}

/// Fixed output columns of each command.
pub fn columns(command: &str) -> Vec<String> {
    let cols: &[&str] = match command {
        "stage2" => &[
            "pi_A",
            "pi_B",
            "kappa_A",
            "kappa_B",
            "partition_B1",
            "partition_B2",
            "method",
        ],
        "spe" => &["pi_A", "pi_B", "boundary_distance", "regime", "degenerate"],
        "level-curve" => &["Pi", "P", "RA"],
        "ratio" => &["E", "P_eq"],
        "invest" => &[
            "P_star",
            "RA_star",
            "pi_opt",
            "indifference_lo",
            "indifference_hi",
            "branch",
        ],
        "stackelberg" => &[
            "p_A_star",
            "p_B_star",
            "u_A",
            "u_B",
            "p_A_dagger",
            "p_B_alternative",
            "case",
        ],
        "verify" => &[
            "check_name",
            "instances_run",
            "max_violation",
            "tolerance",
            "pass",
            "worst_case_input",
        ],
        _ => &[],
    };
    cols.iter().map(|c| c.to_string()).collect()
}

/// Run a non-sweep command.
pub fn dispatch(command: &str, p: &Params) -> CliResult<Table> {
    match command {
        "stage2" => stage2(p),
        "spe" => spe(p),
        "level-curve" => level_curves(p),
        "ratio" => ratio(p),
        "invest" => invest(p),
        "stackelberg" => stackelberg(p),
        "verify" => verify(p),
        other => Err(CliError::Validation(format!("unknown command `{other}`"))),
    }
}

fn game(p: &Params, pre: f64) -> CliResult<GameConfig> {
    let r_a = p.num("RA")?;
    let r_b = p.num("RB")?;
    let w = p.list("w")?.unwrap_or_else(|| vec![1.0]);
    let raw = GameConfig {
        w,
        pre,
        r_a,
        r_b,
        q: p.num("q")?,
    };
    Ok(normalize_config(&raw)?)
}

fn stage2(p: &Params) -> CliResult<Table> {
    let alloc = p
        .list("p")?
        .ok_or_else(|| CliError::Validation("missing parameter `p`".into()))?;
    let n = alloc.len();
    let pre = if p.has("P") {
        PreAllocation::with_total(alloc, p.num("P")?)?
    } else {
        PreAllocation::new(alloc)?
    };
    let mut g = game(p, pre.total)?;
    if !p.has("w") {
        // uniform battlefield values unless given
        g.w = vec![1.0 / n as f64; n];
    }
    stage2_table(&pre, &g)
}

fn indices(v: &[usize]) -> Cell {
    Cell::Str(
        v.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    )
}

fn stage2_table(pre: &PreAllocation, g: &GameConfig) -> CliResult<Table> {
    let out = stage2_payoff(pre, g)?;
    let row = match &out.kappa {
        Some(k) => vec![
            out.pi_a.into(),
            out.pi_b.into(),
            k.kappa_a.into(),
            k.kappa_b.into(),
            indices(&k.partition_b1),
            indices(&k.partition_b2),
            Cell::Str(format!("{:?}", k.method)),
        ],
        None => vec![
            out.pi_a.into(),
            out.pi_b.into(),
            Cell::Null,
            Cell::Null,
            Cell::Null,
            Cell::Null,
            "ClosedForm".into(),
        ],
    };
    Ok(Table::one("stage2", row))
}

fn spe(p: &Params) -> CliResult<Table> {
    let g = game(p, p.num("P")?)?;
    let s = solve_spe(&g);
    Ok(Table::one(
        "spe",
        vec![
            s.pi_a.into(),
            s.pi_b.into(),
            s.regime.boundary_distance.into(),
            s.regime.tag.as_str().into(),
            s.degenerate.into(),
        ],
    ))
}

fn level_curves(p: &Params) -> CliResult<Table> {
    let levels = p
        .list("Pi")?
        .ok_or_else(|| CliError::Validation("missing parameter `Pi`".into()))?;
    let samples = p.count("samples", 101)? as usize;
    let r_b = p.num("RB")?;
    let mut rows = Vec::new();
    for pi in levels {
        let curve = level_curve(pi, r_b, samples)?;
        for (pre, r_a) in curve.samples {
            rows.push(vec![pi.into(), pre.into(), r_a.into()]);
        }
    }
    Ok(Table {
        columns: columns("level-curve"),
        rows,
        single: false,
    })
}

fn ratio(p: &Params) -> CliResult<Table> {
    let (r_a, r_b) = (p.num("RA")?, p.num("RB")?);
    Ok(Table::one(
        "ratio",
        vec![
            effectiveness_ratio(r_a, r_b)?.into(),
            equivalent_preallocation(r_a, r_b)?.into(),
        ],
    ))
}

fn invest(p: &Params) -> CliResult<Table> {
    let plan = optimal_investment(p.num("MA")?, p.num("cA")?, p.num("RB")?)?;
    let (lo, hi) = match plan.indifference_interval {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    Ok(Table::one(
        "invest",
        vec![
            plan.p_star.into(),
            plan.r_a_star.into(),
            plan.pi_opt.into(),
            lo.into(),
            hi.into(),
            plan.branch.as_str().into(),
        ],
    ))
}

fn stackelberg(p: &Params) -> CliResult<Table> {
    let m = MonetaryParams::new(p.num("MA")?, p.num("cA")?, p.num("MB")?, p.num("cB")?)?;
    let out = stackelberg_equilibrium(&m)?;
    Ok(Table::one(
        "stackelberg",
        vec![
            out.p_a_star.into(),
            out.p_b_star.into(),
            out.u_a.into(),
            out.u_b.into(),
            out.p_a_dagger.into(),
            out.p_b_alternative.into(),
            out.case.as_str().into(),
        ],
    ))
}

fn verify(p: &Params) -> CliResult<Table> {
    let defaults = GridSpec::default();
    let grid = GridSpec::new(
        p.count("resolution", defaults.resolution as u64)? as usize,
        p.count("seed", defaults.seed)?,
    )?;
    let names = p.strings("checks")?;
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let reports = run_suite(&names, &grid)?;
    let rows = reports
        .into_iter()
        .map(|r| {
            vec![
                r.check_name.as_str().into(),
                Cell::Int(r.instances_run as u64),
                r.max_violation.into(),
                r.tolerance.into(),
                r.pass.into(),
                Cell::Str(r.worst_case_input.to_string()),
            ]
        })
        .collect();
    Ok(Table {
        columns: columns("verify"),
        rows,
        single: false,
    })
}

/// Number of failed checks in a `verify` table.
pub fn failed_checks(t: &Table) -> usize {
    let idx = t.columns.iter().position(|c| c == "pass");
    idx.map_or(0, |i| {
        t.rows.iter().filter(|r| r[i] == Cell::Bool(false)).count()
    })
}

/// Evaluate `command` on the cartesian grid of `axes` (first axis outermost).
pub fn sweep(command: &str, axes: &[Axis], base: &Params) -> CliResult<Table> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(CliError::Validation(format!(
            "sweep needs one or two axes, got {}",
            axes.len()
        )));
    }
    if matches!(command, "sweep" | "verify") || columns(command).is_empty() {
        return Err(CliError::Validation(format!(
            "cannot sweep command `{command}`"
        )));
    }
    for a in axes {
        a.check()?;
    }
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for a in axes {
        let values = a.values();
        points = points
            .into_iter()
            .flat_map(|pt| {
                values.iter().map(move |&v| {
                    let mut next = pt.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    let tables: Vec<CliResult<Table>> = points
        .par_iter()
        .map(|pt| {
            let mut p = base.clone();
            for (a, &v) in axes.iter().zip(pt) {
                p.set(&a.axis, v);
            }
            dispatch(command, &p)
        })
        .collect();

    let mut out = Table {
        columns: axes.iter().map(|a| a.axis.clone()).collect(),
        rows: Vec::new(),
        single: false,
    };
    out.columns.extend(columns(command));
    for (pt, t) in points.iter().zip(tables) {
        for row in t?.rows {
            let mut full: Vec<Cell> = pt.iter().map(|&v| Cell::Num(v)).collect();
            full.extend(row);
            out.rows.push(full);
        }
    }
    Ok(out)
}
