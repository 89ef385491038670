//! Monte Carlo ground truth: BPP drops, nearest-BS association and exponential fading.
//!
//! Every drop draws from its own ChaCha stream keyed by `(seed, drop, entity)`, so results
//! do not depend on how drops are scheduled across threads.

mod validate;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::coverage::ChannelParams;
use crate::error::{invalid, Result};
use crate::geometry::{BsLayout, FieldSpec, Point, Region};

pub use validate::{run_validation, Bound, Check, ValidationReport};

/// Stream tag for UE positions.
pub const ENTITY_POSITIONS: u64 = 0;
/// Stream tag for fading gains.
pub const ENTITY_FADING: u64 = 1;

/// Generator for one `(drop, entity)` pair under `seed`.
pub fn rng_for(seed: u64, drop: u64, entity: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((drop << 8) | (entity & 0xff));
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    pub n_drops: usize,
    pub n_users: usize,
    pub layout: BsLayout,
    pub channel: ChannelParams,
    /// Transmit power in watts.
    pub p_t: f64,
}

impl SimConfig {
    pub fn validated(self) -> Result<Self> {
        if self.n_drops == 0 {
            return Err(invalid("n_drops", "must be at least 1"));
        }
        if self.n_users == 0 {
            return Err(invalid("n_users", "must be at least 1"));
        }
        if !(self.p_t > 0.0) {
            return Err(invalid("p_t", format!("must be positive, got {}", self.p_t)));
        }
        self.channel.validated()?;
        Ok(self)
    }

    pub fn field(&self) -> FieldSpec {
        self.layout.field
    }
}

/// `n` i.i.d. uniform points in the field.
pub fn sample_bpp<R: Rng>(field: &FieldSpec, n: usize, rng: &mut R) -> Vec<Point> {
    (0..n).map(|_| sample_field_point(field, rng)).collect()
}

fn sample_field_point<R: Rng>(field: &FieldSpec, rng: &mut R) -> Point {
    match *field {
        FieldSpec::Square { half_side: a } => {
            Point::new(rng.random_range(-a..a), rng.random_range(-a..a))
        }
        FieldSpec::Circle { radius } => {
            let r = radius * rng.random::<f64>().sqrt();
            Point::polar(r, TAU * rng.random::<f64>())
        }
    }
}

/// A uniform point in `region`, by rejection from its bounding box.
pub fn sample_region<R: Rng>(region: &Region, rng: &mut R) -> Point {
    let poly = region.polygon();
    let (mut lo, mut hi) = (poly[0], poly[0]);
    for p in poly {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    loop {
        let p = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        if region.contains(p) {
            return p;
        }
    }
}

/// Exponential power gain with mean `mean`.
pub fn sample_fading<R: Rng>(mean: f64, rng: &mut R) -> f64 {
    mean * rng.sample::<f64, _>(Exp1)
}

/// Farthest in-cell UE distance per drop, `None` when the cell is empty.
fn farthest_per_drop(sim: &SimConfig, cell: usize) -> Vec<Option<f64>> {
    let bs = sim.layout.points[cell];
    (0..sim.n_drops as u64)
        .into_par_iter()
        .map(|drop| {
            let mut rng = rng_for(sim.seed, drop, ENTITY_POSITIONS);
            let mut far: Option<f64> = None;
            for _ in 0..sim.n_users {
                let p = sample_field_point(&sim.layout.field, &mut rng);
                if sim.layout.nearest(p) == cell {
                    let d = p.dist(bs);
                    far = Some(far.map_or(d, |f| f.max(d)));
                }
            }
            far
        })
        .collect()
}

/// Farthest-UE distances over the non-empty drops, and the empty-cell count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarthestSample {
    /// Ascending.
    pub distances: Vec<f64>,
    pub empty: usize,
    pub drops: usize,
}

impl FarthestSample {
    pub fn empty_fraction(&self) -> f64 {
        self.empty as f64 / self.drops as f64
    }

    /// Empirical CDF conditioned on a non-empty cell.
    pub fn ecdf(&self, r: f64) -> f64 {
        let below = self.distances.partition_point(|&d| d <= r);
        below as f64 / self.distances.len() as f64
    }
}

/// Distribution of the farthest UE in `cell` over `sim.n_drops` BPP drops.
pub fn empirical_farthest_cdf(sim: &SimConfig, cell: usize) -> Result<FarthestSample> {
    let sim = sim.clone().validated()?;
    if cell >= sim.layout.len() {
        return Err(invalid("cell", format!("index {cell} out of range")));
    }
    let per_drop = farthest_per_drop(&sim, cell);
    let empty = per_drop.iter().filter(|d| d.is_none()).count();
    let mut distances: Vec<f64> = per_drop.into_iter().flatten().collect();
    distances.sort_by(f64::total_cmp);
    Ok(FarthestSample {
        distances,
        empty,
        drops: sim.n_drops,
    })
}

/// Bernoulli estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageEstimate {
    pub covered: usize,
    pub trials: usize,
    /// Drops in which the cell held no UE; they count as covered.
    pub empty: usize,
}

impl CoverageEstimate {
    pub fn estimate(&self) -> f64 {
        self.covered as f64 / self.trials as f64
    }

    pub fn std_error(&self) -> f64 {
        let p = self.estimate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Fraction of drops in which the farthest UE of `cell` reaches `γ >= T`.
pub fn empirical_coverage(sim: &SimConfig, cell: usize) -> Result<CoverageEstimate> {
    let sim = sim.clone().validated()?;
    if cell >= sim.layout.len() {
        return Err(invalid("cell", format!("index {cell} out of range")));
    }
    let ch = sim.channel;
    let per_drop = farthest_per_drop(&sim, cell);
    let outcomes: Vec<Option<bool>> = per_drop
        .par_iter()
        .enumerate()
        .map(|(drop, far)| {
            far.map(|r| {
                let mut rng = rng_for(sim.seed, drop as u64, ENTITY_FADING);
                let h = sample_fading(ch.fading_mean, &mut rng);
                sim.p_t * h * r.powf(-ch.path_loss_exponent) / ch.noise_power >= ch.threshold
            })
        })
        .collect();
    let empty = outcomes.iter().filter(|o| o.is_none()).count();
    let covered = outcomes.iter().filter(|o| o.unwrap_or(true)).count();
    Ok(CoverageEstimate {
        covered,
        trials: sim.n_drops,
        empty,
    })
}

/// Empirical coverage of a UE at fixed distance `r`, over `trials` fading draws.
pub fn empirical_coverage_at(
    seed: u64,
    trials: usize,
    r: f64,
    p_t: f64,
    ch: &ChannelParams,
) -> CoverageEstimate {
    let covered = (0..trials as u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = rng_for(seed, t, ENTITY_FADING);
            let h = sample_fading(ch.fading_mean, &mut rng);
            p_t * h * r.powf(-ch.path_loss_exponent) / ch.noise_power >= ch.threshold
        })
        .count();
    CoverageEstimate {
        covered,
        trials,
        empty: 0,
    }
}

/// Kolmogorov–Smirnov distance between sorted samples and a CDF, taken at the jump points.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// KS critical value at the 99% level for `n` samples.
pub fn ks_critical_99(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}
