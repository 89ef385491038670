use serde::Serialize;

use super::{DistanceDistribution, RadialLaw};
use crate::error::{invalid, Result};
use crate::geometry::Cell;
use crate::quadrature::{integrate, DEFAULT_REL_TOL};

/// Binomial weights below this fraction of the largest one are dropped.
const WEIGHT_CUTOFF: f64 = 1e-16;

/// Distance of the farthest in-cell UE.
///
/// For a finite user count this is the mixture over the in-cell count `k ~ Bin(N_u, p)`
/// of `F^k`; the `k = 0` term carries no distance, so the law is defective with mass
/// `1 − (1 − p)^N_u`. The Dirac form is the `N_u → ∞` limit at the cell's `r_f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarthestDistribution {
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Kind {
    Order {
        base: DistanceDistribution,
        n_users: u64,
        cell_fraction: f64,
        /// `(k, P[K = k])` for the retained `k >= 1`.
        weights: Vec<(u32, f64)>,
    },
    Dirac {
        r_f: f64,
    },
}

fn binomial_weights(n: u64, p: f64) -> Vec<(u32, f64)> {
    if p >= 1.0 {
        return vec![(n as u32, 1.0)];
    }
    // walk outwards from the mode with the term ratio, then normalise over the full pmf
    let odds = p / (1.0 - p);
    let mode = (((n + 1) as f64 * p).floor() as u64).min(n);
    let mut lower = Vec::new();
    let mut w = 1.0;
    let mut k = mode;
    while k > 0 {
        w *= k as f64 / ((n - k + 1) as f64 * odds);
        k -= 1;
        if w < WEIGHT_CUTOFF {
            break;
        }
        lower.push((k, w));
    }
    let mut terms: Vec<(u64, f64)> = lower.into_iter().rev().collect();
    terms.push((mode, 1.0));
    let (mut w, mut k) = (1.0, mode);
    while k < n {
        w *= (n - k) as f64 / (k + 1) as f64 * odds;
        k += 1;
        if w < WEIGHT_CUTOFF {
            break;
        }
        terms.push((k, w));
    }
    let total: f64 = terms.iter().map(|t| t.1).sum();
    terms
        .into_iter()
        .filter(|t| t.0 >= 1)
        .map(|(k, w)| (k as u32, w / total))
        .collect()
}

impl FarthestDistribution {
    /// Degenerate law at `r_f`.
    pub fn dirac(r_f: f64) -> Self {
        Self {
            kind: Kind::Dirac { r_f },
        }
    }

    pub fn is_dirac(&self) -> bool {
        matches!(self.kind, Kind::Dirac { .. })
    }

    pub fn base(&self) -> Option<&DistanceDistribution> {
        match &self.kind {
            Kind::Order { base, .. } => Some(base),
            Kind::Dirac { .. } => None,
        }
    }

    pub fn n_users(&self) -> Option<u64> {
        match self.kind {
            Kind::Order { n_users, .. } => Some(n_users),
            Kind::Dirac { .. } => None,
        }
    }

    /// `p = A_i / W`; one for the Dirac limit.
    pub fn cell_fraction(&self) -> f64 {
        match self.kind {
            Kind::Order { cell_fraction, .. } => cell_fraction,
            Kind::Dirac { .. } => 1.0,
        }
    }

    /// Probability that the cell holds no UE, `(1 − p)^N_u`.
    pub fn empty_probability(&self) -> f64 {
        match self.kind {
            Kind::Order {
                n_users,
                cell_fraction,
                ..
            } => (1.0 - cell_fraction).powf(n_users as f64),
            Kind::Dirac { .. } => 0.0,
        }
    }

    pub fn cdf(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Dirac { r_f } => {
                if r >= *r_f {
                    1.0
                } else {
                    0.0
                }
            }
            Kind::Order { base, weights, .. } => {
                let f = base.cdf(r);
                weights.iter().map(|&(k, w)| w * f.powi(k as i32)).sum()
            }
        }
    }

    /// Density; zero everywhere for the Dirac law.
    pub fn pdf(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Dirac { .. } => 0.0,
            Kind::Order { base, weights, .. } => {
                let density = base.pdf(r);
                if density == 0.0 {
                    return 0.0;
                }
                let f = base.cdf(r);
                density
                    * weights
                        .iter()
                        .map(|&(k, w)| w * k as f64 * f.powi(k as i32 - 1))
                        .sum::<f64>()
            }
        }
    }

    /// Panel edges for integration: the base breakpoints plus a geometric ladder towards
    /// `r_f`, where `F^k` concentrates for large `k`.
    fn panels(&self) -> Vec<f64> {
        let Kind::Order { base, weights, .. } = &self.kind else {
            return Vec::new();
        };
        let r_f = base.support_max();
        let k_max = weights.iter().map(|w| w.0).max().unwrap_or(1) as f64;
        let steps = (k_max.log2().ceil() as i32 + 4).max(1);
        let mut edges: Vec<f64> = base.breakpoints().to_vec();
        let mut lo = 0.0;
        for &b in base.breakpoints() {
            if b < r_f {
                lo = b;
            }
        }
        for j in 1..=steps {
            edges.push(r_f - (r_f - lo) * 0.5f64.powi(j));
        }
        edges.sort_by(f64::total_cmp);
        edges
    }
}

impl RadialLaw for FarthestDistribution {
    fn expect<G: Fn(f64) -> f64>(&self, g: G, rel_tol: f64) -> Result<f64> {
        match &self.kind {
            Kind::Dirac { r_f } => Ok(g(*r_f)),
            Kind::Order { base, .. } => integrate(
                |r| g(r) * self.pdf(r),
                0.0,
                base.support_max(),
                &self.panels(),
                rel_tol,
            ),
        }
    }

    fn support_max(&self) -> f64 {
        match &self.kind {
            Kind::Dirac { r_f } => *r_f,
            Kind::Order { base, .. } => base.support_max(),
        }
    }

    fn total_mass(&self) -> f64 {
        1.0 - self.empty_probability()
    }
}

/// Farthest of `n_users` UEs that all fall in the cell: `F_far = F^N_u`.
pub fn farthest_single(base: DistanceDistribution, n_users: u64) -> Result<FarthestDistribution> {
    farthest_multi(base, n_users, 1.0)
}

/// Farthest in-cell UE when `n_users_total` UEs are dropped over the whole field and
/// each lands in this cell with probability `p`.
pub fn farthest_multi(
    base: DistanceDistribution,
    n_users_total: u64,
    p: f64,
) -> Result<FarthestDistribution> {
    if n_users_total == 0 || n_users_total > i32::MAX as u64 {
        return Err(invalid("n_users", format!("must be in 1..=2^31-1, got {n_users_total}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid("cell_fraction", format!("must be in (0, 1], got {p}")));
    }
    Ok(FarthestDistribution {
        kind: Kind::Order {
            base,
            n_users: n_users_total,
            cell_fraction: p,
            weights: binomial_weights(n_users_total, p),
        },
    })
}

/// The `N_u → ∞` limit for a cell: all mass at its farthest distance.
pub fn dirac_limit(cell: &Cell) -> FarthestDistribution {
    FarthestDistribution::dirac(cell.farthest)
}

/// `∫ r^exponent f_far(r) dr`; exact for the Dirac law.
pub fn nth_moment(dist: &FarthestDistribution, exponent: f64) -> Result<f64> {
    if !(exponent >= 0.0) {
        return Err(invalid("exponent", format!("must be >= 0, got {exponent}")));
    }
    dist.expect(|r| r.powf(exponent), DEFAULT_REL_TOL)
}
