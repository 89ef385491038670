use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    empirical_coverage, empirical_farthest_cdf, ks_critical_99, ks_statistic, rng_for,
    sample_region, SimConfig, ENTITY_POSITIONS,
};
use crate::coverage::{coverage_probability, ChannelParams, CoverageTarget};
use crate::deployment::circular_catalog;
use crate::distributions::{
    farthest_multi, farthest_single, numeric_cell_distribution, square_offset_distribution,
    square_region, triangle_peak_distribution, triangle_region, FarthestDistribution,
    RadialLaw,
};
use crate::error::Result;
use crate::geometry::{circular_layout, grid_layout, voronoi_partition, FieldSpec, Point, Region};
use crate::optimizer::{evaluate_n_bs, PlanConfig, UserMode};

/// Which side of the threshold passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Pass when `statistic <= threshold`.
    Upper,
    /// Pass when `statistic >= threshold`.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Check {
    pub fn pass(&self) -> bool {
        match self.bound {
            Bound::Upper => self.statistic <= self.threshold,
            Bound::Lower => self.statistic >= self.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub drops: usize,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed={} drops={}", self.seed, self.drops)?;
        writeln!(
            f,
            "{:<14} {:<44} {:>12}    {:>12}  result",
            "module", "check", "statistic", "threshold"
        )?;
        for c in &self.checks {
            let op = match c.bound {
                Bound::Upper => "<=",
                Bound::Lower => ">=",
            };
            writeln!(
                f,
                "{:<14} {:<44} {:>12.6} {} {:>12.6}  {}",
                c.module,
                c.name,
                c.statistic,
                op,
                c.threshold,
                if c.pass() { "PASS" } else { "FAIL" }
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.pass()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn region_distances(region: &Region, bs: Point, seed: u64, n: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i, ENTITY_POSITIONS);
            sample_region(region, &mut rng).dist(bs)
        })
        .collect();
    d.sort_by(f64::total_cmp);
    d
}

fn ks_check(module: &'static str, name: String, sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Check {
    Check {
        module,
        name,
        statistic: ks_statistic(sorted, cdf),
        threshold: ks_critical_99(sorted.len()),
        bound: Bound::Upper,
    }
}

fn farthest_ks(
    name: String,
    sim: &SimConfig,
    cell: usize,
    far: &FarthestDistribution,
) -> Result<Check> {
    let sample = empirical_farthest_cdf(sim, cell)?;
    let mass = far.total_mass();
    Ok(ks_check("distributions", name, &sample.distances, |r| far.cdf(r) / mass))
}

/// Runs the oracle suite: every analytic law against simulation.
///
/// Each check draws `drops` samples (or BPP drops) from streams derived from `seed`,
/// offset per check so that checks stay independent.
pub fn run_validation(seed: u64, drops: usize) -> Result<ValidationReport> {
    let a = 500.0;
    let square = FieldSpec::square(a)?;
    let circle = FieldSpec::circle(a)?;
    let ch = ChannelParams::default();
    let sub = |k: u64| seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut checks = Vec::new();

    // single-UE distance laws
    let d = a / 8.0;
    let dist = square_offset_distribution(a, d)?;
    let samples = region_distances(&square_region(a), Point::new(-d, 0.0), sub(1), drops);
    checks.push(ks_check("distributions", "square offset d=a/8 KS".into(), &samples, |r| {
        dist.cdf(r)
    }));

    let d = a / 4.0;
    let dist = triangle_peak_distribution(a, d)?;
    let samples = region_distances(&triangle_region(a), Point::new(0.0, -d), sub(2), drops);
    checks.push(ks_check("distributions", "triangle peak d=a/4 KS".into(), &samples, |r| {
        dist.cdf(r)
    }));

    // farthest-UE laws
    let single = grid_layout(square, 1, 1)?;
    let sim = |layout, n_users, k| SimConfig {
        seed: sub(k),
        n_drops: drops,
        n_users,
        layout,
        channel: ch,
        p_t: 5.0,
    };
    let base = square_offset_distribution(a, 0.0)?;
    let far = farthest_single(base.clone(), 10)?;
    checks.push(farthest_ks("farthest single N_b=1 N_u=10 KS".into(), &sim(single.clone(), 10, 3), 0, &far)?);

    let quad = grid_layout(square, 2, 2)?;
    let quad_cells = voronoi_partition(&quad)?;
    let quad_base = numeric_cell_distribution(&quad_cells[0])?;
    let far = farthest_multi(quad_base.clone(), 20, 0.25)?;
    checks.push(farthest_ks("farthest multi 2x2 N_u=20 KS".into(), &sim(quad.clone(), 20, 4), 0, &far)?);

    let sample = empirical_farthest_cdf(&sim(quad.clone(), 4, 5), 0)?;
    let p_empty = 0.75f64.powi(4);
    let sigma = (p_empty * (1.0 - p_empty) / drops as f64).sqrt();
    checks.push(Check {
        module: "distributions",
        name: "empty cell 2x2 N_u=4 |z|".into(),
        statistic: (sample.empty_fraction() - p_empty).abs() / sigma,
        threshold: 3.0,
        bound: Bound::Upper,
    });

    let tri = circular_layout(circle, &circular_catalog(3, a)?)?;
    let tri_cells = voronoi_partition(&tri)?;
    let sector = numeric_cell_distribution(&tri_cells[0])?;
    let far = farthest_single(sector.clone(), 1)?;
    checks.push(farthest_ks("sector N_b=3 single UE KS".into(), &sim(tri.clone(), 1, 6), 0, &far)?);
    let far = farthest_multi(sector, 10, tri_cells[0].area / circle.area())?;
    checks.push(farthest_ks("farthest multi circle N_b=3 N_u=10 KS".into(), &sim(tri, 10, 7), 0, &far)?);

    // coverage of the farthest UE
    let far = farthest_single(base, 10)?;
    let analytic = coverage_probability(5.0, &far, &ch)?;
    let est = empirical_coverage(&sim(single, 10, 8), 0)?;
    checks.push(Check {
        module: "coverage",
        name: "farthest coverage N_b=1 N_u=10 |z|".into(),
        statistic: (est.estimate() - analytic).abs() / est.std_error(),
        threshold: 3.0,
        bound: Bound::Upper,
    });

    let epsilon = 0.1;
    let config = PlanConfig {
        field: circle,
        channel: ch,
        power: Default::default(),
        target: CoverageTarget::new(epsilon)?,
        users: UserMode::Moderate { n_users: 20 },
    };
    let (p_t, layout, _) = evaluate_n_bs(&config, 3)?;
    let est = empirical_coverage(
        &SimConfig {
            p_t,
            ..sim(layout, 20, 9)
        },
        0,
    )?;
    checks.push(Check {
        module: "optimizer",
        name: "closure at P_t* N_b=3 N_u=20 eps=0.1".into(),
        statistic: est.estimate(),
        threshold: 1.0 - epsilon - 0.005,
        bound: Bound::Lower,
    });

    Ok(ValidationReport {
        seed,
        drops,
        checks,
    })
}
