//! SNR coverage of the farthest UE and the transmit-power bound it implies.

use serde::{Deserialize, Serialize};

use crate::distributions::{nth_moment, FarthestDistribution, RadialLaw};
use crate::error::{invalid, Result};
use crate::quadrature::DEFAULT_REL_TOL;

/// Link parameters. `γ = P_t h r^{-α} / σ²` with `h ~ Exp(mean μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// SNR threshold `T`, linear.
    pub threshold: f64,
    /// Noise power `σ²` in watts.
    pub noise_power: f64,
    /// Path-loss exponent `α`.
    pub path_loss_exponent: f64,
    /// Mean fading power gain `μ`.
    pub fading_mean: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            threshold: 0.1,
            noise_power: 1e-10,
            path_loss_exponent: 4.0,
            fading_mean: 1.0,
        }
    }
}

impl ChannelParams {
    pub fn validated(self) -> Result<Self> {
        let pos = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be positive, got {v}")))
            }
        };
        pos("threshold", self.threshold)?;
        pos("noise_power", self.noise_power)?;
        pos("fading_mean", self.fading_mean)?;
        if !(self.path_loss_exponent.is_finite() && self.path_loss_exponent >= 2.0) {
            return Err(invalid(
                "path_loss_exponent",
                format!("must be >= 2, got {}", self.path_loss_exponent),
            ));
        }
        Ok(self)
    }

    /// `T σ² / (μ P_t)`: the factor multiplying `r^α` in the outage exponent.
    pub fn exponent_scale(&self, p_t: f64) -> f64 {
        self.threshold * self.noise_power / (self.fading_mean * p_t)
    }
}

/// Per-BS power consumption `ε₁ P_t + ε₂` and the deployment limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerModel {
    pub amp_scaling: f64,
    /// Static power `ε₂`, watts.
    pub static_power: f64,
    /// Maximum transmit power, watts.
    pub p_max: f64,
    /// Largest BS count considered.
    pub n_max: usize,
}

impl Default for PowerModel {
    fn default() -> Self {
        Self {
            amp_scaling: 5.5,
            static_power: 32.0,
            p_max: 5.0,
            n_max: 35,
        }
    }
}

impl PowerModel {
    pub fn validated(self) -> Result<Self> {
        if !(self.amp_scaling.is_finite() && self.amp_scaling > 0.0) {
            return Err(invalid("amp_scaling", format!("must be positive, got {}", self.amp_scaling)));
        }
        if !(self.static_power.is_finite() && self.static_power >= 0.0) {
            return Err(invalid(
                "static_power",
                format!("must be non-negative, got {}", self.static_power),
            ));
        }
        if !(self.p_max.is_finite() && self.p_max > 0.0) {
            return Err(invalid("p_max", format!("must be positive, got {}", self.p_max)));
        }
        if self.n_max == 0 {
            return Err(invalid("n_max", "must be at least 1"));
        }
        Ok(self)
    }

    /// Consumption of one BS transmitting at `p_t`.
    pub fn per_bs(&self, p_t: f64) -> f64 {
        self.amp_scaling * p_t + self.static_power
    }
}

/// Required farthest-UE coverage `1 − ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageTarget {
    pub epsilon: f64,
}

impl CoverageTarget {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must be in (0, 1), got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn from_coverage(coverage: f64) -> Result<Self> {
        Self::new(1.0 - coverage)
    }

    pub fn coverage(&self) -> f64 {
        1.0 - self.epsilon
    }
}

/// `∫ exp(−T σ² r^α / (μ P_t)) dF(r)`: probability that a UE at the law's distance is covered.
///
/// For a defective farthest-UE law the empty-cell mass is not included.
pub fn coverage_probability<L: RadialLaw>(p_t: f64, dist: &L, ch: &ChannelParams) -> Result<f64> {
    if !(p_t > 0.0) {
        return Err(invalid("p_t", format!("must be positive, got {p_t}")));
    }
    let c = ch.exponent_scale(p_t);
    let alpha = ch.path_loss_exponent;
    dist.expect(|r| (-c * r.powf(alpha)).exp(), DEFAULT_REL_TOL)
}

/// Relative error of `1 − x` as a stand-in for `exp(−x)`.
pub fn approx_error_bound(x: f64) -> f64 {
    let e = (-x).exp();
    (e - (1.0 - x)).abs() / e
}

/// Smallest `P_t` meeting the linearised coverage constraint in a cell:
/// `P_t >= T σ² / (μ ε) · E[r^α]`.
pub fn min_power_for_cell(
    far: &FarthestDistribution,
    ch: &ChannelParams,
    target: &CoverageTarget,
) -> Result<f64> {
    let moment = nth_moment(far, ch.path_loss_exponent)?;
    Ok(ch.threshold * ch.noise_power / (ch.fading_mean * target.epsilon) * moment)
}

/// Network transmit power: the largest per-cell bound.
pub fn optimal_transmit_power(
    cells: &[FarthestDistribution],
    ch: &ChannelParams,
    target: &CoverageTarget,
) -> Result<f64> {
    if cells.is_empty() {
        return Err(invalid("cells", "at least one cell is required"));
    }
    let mut best = f64::NEG_INFINITY;
    for cell in cells {
        best = best.max(min_power_for_cell(cell, ch, target)?);
    }
    Ok(best)
}

/// Exact per-cell coverage at a given transmit power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageCheck {
    /// Probability that the farthest UE of each cell is covered; an empty cell counts as covered.
    pub per_cell: Vec<f64>,
    pub feasible: bool,
}

impl CoverageCheck {
    pub fn worst(&self) -> f64 {
        self.per_cell.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the exact exponential coverage in every cell at `p_t`.
///
/// Feasible when every cell reaches `1 − ε` and `p_t <= P_max`.
pub fn verify_coverage(
    p_t: f64,
    cells: &[FarthestDistribution],
    ch: &ChannelParams,
    target: &CoverageTarget,
    power: &PowerModel,
) -> Result<CoverageCheck> {
    let per_cell = cells
        .iter()
        .map(|c| Ok(c.empty_probability() + coverage_probability(p_t, c, ch)?))
        .collect::<Result<Vec<f64>>>()?;
    let feasible = p_t <= power.p_max && per_cell.iter().all(|&v| v >= target.coverage());
    Ok(CoverageCheck { per_cell, feasible })
}
