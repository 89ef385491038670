//! Joint choice of BS count, placement and transmit power minimising total power.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coverage::{
    min_power_for_cell, verify_coverage, ChannelParams, CoverageTarget, PowerModel,
};
use crate::deployment::{circular_catalog, optimal_grid, CircularArrangement, GridArrangement};
use crate::distributions::{
    centered_rectangle_distribution, farthest_multi, numeric_cell_distribution,
    FarthestDistribution,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{circular_layout, grid_layout, voronoi_partition, BsLayout, FieldSpec};
use crate::units::{db_to_linear, dbm_to_watts};

/// How many UEs are dropped over the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum UserMode {
    /// `N_u → ∞`: the farthest UE sits at every cell's `r_f`.
    Large,
    Moderate { n_users: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    pub field: FieldSpec,
    pub channel: ChannelParams,
    pub power: PowerModel,
    pub target: CoverageTarget,
    pub users: UserMode,
}

impl PlanConfig {
    pub fn validated(self) -> Result<Self> {
        self.field.validated()?;
        self.channel.validated()?;
        self.power.validated()?;
        CoverageTarget::new(self.target.epsilon)?;
        if let UserMode::Moderate { n_users: 0 } = self.users {
            return Err(invalid("n_users", "moderate mode needs at least one UE"));
        }
        Ok(self)
    }

    /// `c_b = T σ² ε₁ / ε`.
    pub fn c_b(&self) -> f64 {
        self.channel.threshold * self.channel.noise_power * self.power.amp_scaling
            / self.target.epsilon
    }

    /// `ĉ_b = a^α c_b` for a square field.
    pub fn c_b_hat(&self) -> Option<f64> {
        match self.field {
            FieldSpec::Square { half_side } => {
                Some(half_side.powf(self.channel.path_loss_exponent) * self.c_b())
            }
            FieldSpec::Circle { .. } => None,
        }
    }
}

/// Placement used for a given BS count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Arrangement {
    Grid(GridArrangement),
    Circular(CircularArrangement),
}

/// One evaluated BS count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub n_bs: usize,
    /// Transmit-power bound; absent when the count has no arrangement.
    pub p_t: Option<f64>,
    /// `N_b (ε₁ P_t + ε₂)`; absent when the count has no arrangement.
    pub total_power: Option<f64>,
    pub feasible: bool,
    /// Why the row was skipped, if it was.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanResult {
    pub n_bs: usize,
    pub layout: BsLayout,
    pub arrangement: Arrangement,
    pub p_t_star: f64,
    pub total_power: f64,
    /// Exact farthest-UE coverage of every cell at `p_t_star`.
    pub per_cell_coverage: Vec<f64>,
    pub feasible: bool,
    pub trace: Vec<TraceRow>,
}

/// `N_b (ε₁ P_t + ε₂)`.
pub fn total_power(n_bs: usize, p_t: f64, power: &PowerModel) -> f64 {
    n_bs as f64 * power.per_bs(p_t)
}

/// A fully evaluated candidate.
struct Candidate {
    arrangement: Arrangement,
    layout: BsLayout,
    /// Farthest-UE law of each cell, in layout order.
    cells: Vec<FarthestDistribution>,
    p_t: f64,
}

/// Collapses congruent cells, evaluating `f` once per distinct `(area, r_f)` signature.
fn per_cell<T: Clone>(
    keys: &[(f64, f64)],
    mut f: impl FnMut(usize) -> Result<T>,
) -> Result<Vec<T>> {
    let mut seen: Vec<((f64, f64), T)> = Vec::new();
    let mut out = Vec::with_capacity(keys.len());
    for (i, &(area, rf)) in keys.iter().enumerate() {
        let same = |k: &(f64, f64)| {
            (k.0 - area).abs() <= 1e-9 * area && (k.1 - rf).abs() <= 1e-9 * rf
        };
        if let Some((_, v)) = seen.iter().find(|(k, _)| same(k)) {
            out.push(v.clone());
            continue;
        }
        let v = f(i)?;
        seen.push(((area, rf), v.clone()));
        out.push(v);
    }
    Ok(out)
}

fn power_bound(
    cells: &[FarthestDistribution],
    keys: &[(f64, f64)],
    config: &PlanConfig,
) -> Result<f64> {
    let bounds = per_cell(keys, |i| min_power_for_cell(&cells[i], &config.channel, &config.target))?;
    Ok(bounds.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn square_candidate(config: &PlanConfig, a: f64, n_bs: usize) -> Result<Candidate> {
    let grid = optimal_grid(n_bs)?;
    let layout = grid_layout(config.field, grid.m, grid.n)?;
    let far = match config.users {
        UserMode::Large => FarthestDistribution::dirac(grid.farthest(a)),
        UserMode::Moderate { n_users } => {
            let base = centered_rectangle_distribution(a / grid.n as f64, a / grid.m as f64)?;
            farthest_multi(base, n_users, 1.0 / n_bs as f64)?
        }
    };
    let p_t = min_power_for_cell(&far, &config.channel, &config.target)?;
    Ok(Candidate {
        arrangement: Arrangement::Grid(grid),
        layout,
        cells: vec![far; n_bs],
        p_t,
    })
}

fn circle_candidate(config: &PlanConfig, radius: f64, n_bs: usize) -> Result<Candidate> {
    let arrangement = circular_catalog(n_bs, radius)?;
    let layout = circular_layout(config.field, &arrangement)?;
    let cells = voronoi_partition(&layout)?;
    let keys: Vec<(f64, f64)> = cells.iter().map(|c| (c.area, c.farthest)).collect();
    let total_area = config.field.area();
    let fars = match config.users {
        UserMode::Large => cells.iter().map(|c| FarthestDistribution::dirac(c.farthest)).collect(),
        UserMode::Moderate { n_users } => per_cell(&keys, |i| {
            let base = numeric_cell_distribution(&cells[i])?;
            farthest_multi(base, n_users, (cells[i].area / total_area).min(1.0))
        })?,
    };
    let p_t = power_bound(&fars, &keys, config)?;
    Ok(Candidate {
        arrangement: Arrangement::Circular(arrangement),
        layout,
        cells: fars,
        p_t,
    })
}

fn candidate(config: &PlanConfig, n_bs: usize) -> Result<Candidate> {
    match config.field {
        FieldSpec::Square { half_side } => square_candidate(config, half_side, n_bs),
        FieldSpec::Circle { radius } => circle_candidate(config, radius, n_bs),
    }
}

fn optimize(config: &PlanConfig) -> Result<PlanResult> {
    let config = config.validated()?;
    let evaluated: Vec<(usize, Result<Candidate>)> = (1..=config.power.n_max)
        .into_par_iter()
        .map(|n| (n, candidate(&config, n)))
        .collect();

    let mut trace = Vec::with_capacity(evaluated.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, (n_bs, cand)) in evaluated.iter().enumerate() {
        let row = match cand {
            Ok(c) => {
                let feasible = c.p_t <= config.power.p_max;
                let total = total_power(*n_bs, c.p_t, &config.power);
                // strict improvement keeps the smaller count on ties
                if feasible && best.is_none_or(|(_, t)| total < t) {
                    best = Some((i, total));
                }
                TraceRow {
                    n_bs: *n_bs,
                    p_t: Some(c.p_t),
                    total_power: Some(total),
                    feasible,
                    note: None,
                }
            }
            Err(Error::UnsupportedArrangement { .. }) => TraceRow {
                n_bs: *n_bs,
                p_t: None,
                total_power: None,
                feasible: false,
                note: Some("no arrangement".into()),
            },
            Err(e) => return Err(e.clone()),
        };
        trace.push(row);
    }

    let Some((index, total)) = best else {
        return Err(Error::Infeasible { trace });
    };
    let (n_bs, cand) = &evaluated[index];
    let cand = cand.as_ref().expect("feasible rows are evaluated");
    let check = verify_coverage(
        cand.p_t,
        &cand.cells,
        &config.channel,
        &config.target,
        &config.power,
    )?;
    Ok(PlanResult {
        n_bs: *n_bs,
        layout: cand.layout.clone(),
        arrangement: cand.arrangement.clone(),
        p_t_star: cand.p_t,
        total_power: total,
        per_cell_coverage: check.per_cell,
        feasible: true,
        trace,
    })
}

/// Grid placements over a square field.
pub fn optimize_square(config: &PlanConfig) -> Result<PlanResult> {
    if !matches!(config.field, FieldSpec::Square { .. }) {
        return Err(Error::NotSquareField);
    }
    optimize(config)
}

/// Catalog placements over a circular field.
pub fn optimize_circle(config: &PlanConfig) -> Result<PlanResult> {
    if !matches!(config.field, FieldSpec::Circle { .. }) {
        return Err(Error::NotCircleField);
    }
    optimize(config)
}

/// Dispatches on the field shape.
pub fn plan(config: &PlanConfig) -> Result<PlanResult> {
    optimize(config)
}

/// Transmit-power bound and cell laws for a fixed BS count.
pub fn evaluate_n_bs(
    config: &PlanConfig,
    n_bs: usize,
) -> Result<(f64, BsLayout, Vec<FarthestDistribution>)> {
    let config = config.validated()?;
    let c = candidate(&config, n_bs)?;
    Ok((c.p_t, c.layout, c.cells))
}

/// Parameter varied by [`sweep`], in the units used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    /// Coverage target `1 − ε`.
    Coverage,
    /// Noise power in dBm.
    Sigma2,
    /// Path-loss exponent.
    Alpha,
    /// SNR threshold in dB.
    Threshold,
}

impl SweepParam {
    pub fn apply(&self, config: &PlanConfig, value: f64) -> Result<PlanConfig> {
        let mut c = *config;
        match self {
            SweepParam::Coverage => c.target = CoverageTarget::from_coverage(value)?,
            SweepParam::Sigma2 => c.channel.noise_power = dbm_to_watts(value),
            SweepParam::Alpha => c.channel.path_loss_exponent = value,
            SweepParam::Threshold => c.channel.threshold = db_to_linear(value),
        }
        c.validated()
    }
}

/// One row of a sweep; optimum fields are absent when the row is infeasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub n_bs_star: Option<usize>,
    pub p_t_star: Option<f64>,
    pub total_power: Option<f64>,
    pub feasible: bool,
}

/// Re-plans for every value; infeasible values yield an infeasible row instead of an error.
pub fn sweep(config: &PlanConfig, vary: SweepParam, values: &[f64]) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(invalid("values", "sweep needs at least one value"));
    }
    values
        .iter()
        .map(|&value| {
            let c = vary.apply(config, value)?;
            match plan(&c) {
                Ok(r) => Ok(SweepRow {
                    value,
                    n_bs_star: Some(r.n_bs),
                    p_t_star: Some(r.p_t_star),
                    total_power: Some(r.total_power),
                    feasible: true,
                }),
                Err(Error::Infeasible { .. }) => Ok(SweepRow {
                    value,
                    n_bs_star: None,
                    p_t_star: None,
                    total_power: None,
                    feasible: false,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}
