//! Placement catalogs: single BS, grid factorisations of the square, and circular arrangements.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{circular_layout, voronoi_partition, FieldSpec, Point};

/// Optimal single-BS location: the field centroid.
pub fn single_bs_location(field: &FieldSpec) -> Point {
    field.centroid()
}

/// `m` rows by `n` columns of equal rectangular cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridArrangement {
    pub m: usize,
    pub n: usize,
}

impl GridArrangement {
    pub fn n_bs(&self) -> usize {
        self.m * self.n
    }

    /// `ω = m − n`.
    pub fn omega(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    /// Farthest distance from a cell centre to its corner in a square of half-side `a`.
    pub fn farthest(&self, a: f64) -> f64 {
        (a / self.m as f64).hypot(a / self.n as f64)
    }
}

/// Factor pair `m × n = N_b` with the smallest `|m − n|`, `m <= n`.
pub fn optimal_grid(n_bs: usize) -> Result<GridArrangement> {
    if n_bs == 0 {
        return Err(invalid("n_bs", "must be at least 1"));
    }
    let m = (1..=n_bs.isqrt()).rev().find(|m| n_bs.is_multiple_of(*m)).unwrap_or(1);
    Ok(GridArrangement { m, n: n_bs / m })
}

/// Arrangement family in a circular field: `N_b = p·q + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircularType {
    /// One BS at the centre.
    #[serde(rename = "center")]
    Center,
    /// Two BSs splitting the disc into half discs.
    #[serde(rename = "pair")]
    Pair,
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "q+1")]
    QPlus1,
    #[serde(rename = "2q")]
    TwoQ,
    #[serde(rename = "2q+1")]
    TwoQPlus1,
    #[serde(rename = "3q")]
    ThreeQ,
}

impl CircularType {
    pub const TABULATED: [CircularType; 5] = [
        CircularType::Q,
        CircularType::QPlus1,
        CircularType::TwoQ,
        CircularType::TwoQPlus1,
        CircularType::ThreeQ,
    ];

    /// `(p, t)`: radial tiers per arc and centre flag.
    pub fn tiers(&self) -> (usize, usize) {
        match self {
            CircularType::Center => (0, 1),
            CircularType::Pair | CircularType::Q => (1, 0),
            CircularType::QPlus1 => (1, 1),
            CircularType::TwoQ => (2, 0),
            CircularType::TwoQPlus1 => (2, 1),
            CircularType::ThreeQ => (3, 0),
        }
    }

    /// Whether the catalog lists this type for `n_bs`.
    pub fn lists(&self, n_bs: usize) -> bool {
        match self {
            CircularType::Center => n_bs == 1,
            CircularType::Pair => n_bs == 2,
            CircularType::Q => (3..=6).contains(&n_bs),
            CircularType::QPlus1 => (7..=17).contains(&n_bs) || n_bs == 19,
            CircularType::TwoQ => n_bs.is_multiple_of(2) && (18..=44).contains(&n_bs),
            CircularType::TwoQPlus1 => n_bs % 2 == 1 && (21..=45).contains(&n_bs),
            CircularType::ThreeQ => n_bs.is_multiple_of(3) && n_bs >= 48,
        }
    }

    /// Number of arcs `q` for `n_bs`, if the decomposition `p·q + t` exists with `q >= 3`.
    fn arcs(&self, n_bs: usize) -> Option<usize> {
        let (p, t) = self.tiers();
        match self {
            CircularType::Center => (n_bs == 1).then_some(0),
            CircularType::Pair => (n_bs == 2).then_some(2),
            _ => {
                let rest = n_bs.checked_sub(t)?;
                (rest % p == 0 && rest / p >= 3).then_some(rest / p)
            }
        }
    }

    /// Tabulated radii (ascending, excluding a centre BS) and min-max `r_f`, in meters.
    fn formulas(&self, n_bs: usize, radius: f64) -> (Vec<f64>, f64) {
        let r = radius;
        let n = n_bs as f64;
        match self {
            CircularType::Center => (vec![], r),
            CircularType::Pair => {
                let d = 4.0 * r / (3.0 * PI);
                (vec![d], r.hypot(d))
            }
            CircularType::Q if n_bs == 3 => {
                let c = (PI / n).cos();
                (vec![r * c], r * (PI / n).sin())
            }
            CircularType::Q => {
                let d = r / (2.0 * (PI / n).cos());
                (vec![d], d)
            }
            CircularType::QPlus1 => {
                let c = (PI / (n - 1.0)).cos();
                let den = 4.0 * c * c - 1.0;
                (vec![2.0 * r * c / den], r / den)
            }
            CircularType::TwoQ => {
                let c2 = (2.0 * PI / n).cos();
                let c4 = (4.0 * PI / n).cos();
                let den = 4.0 * c2 * c4;
                (vec![r / den, r * (1.0 + c4) / den], r / den)
            }
            CircularType::TwoQPlus1 => {
                let m = n - 1.0;
                let c2 = (2.0 * PI / m).cos();
                let c4 = (4.0 * PI / m).cos();
                let den = 16.0 * c2 * c2 * c4 * c4 - 1.0;
                let num = r * (1.0 + 2.0 * c4);
                (vec![2.0 * num * c2 / den, 4.0 * num * c4 * c2 / den], num / den)
            }
            CircularType::ThreeQ => {
                let c3 = (3.0 * PI / n).cos();
                let c6 = (6.0 * PI / n).cos();
                let c9 = (9.0 * PI / n).cos();
                let c12 = (12.0 * PI / n).cos();
                let den = (2.0 * c6 + 1.0) * (c12 + c6);
                let base = r * c3 / den;
                (
                    vec![base, base * (1.0 + 2.0 * c6), base * (1.0 + 2.0 * c6 + 2.0 * c9)],
                    base,
                )
            }
        }
    }
}

impl fmt::Display for CircularType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CircularType::Center => "center",
            CircularType::Pair => "pair",
            CircularType::Q => "q",
            CircularType::QPlus1 => "q+1",
            CircularType::TwoQ => "2q",
            CircularType::TwoQPlus1 => "2q+1",
            CircularType::ThreeQ => "3q",
        };
        f.write_str(s)
    }
}

/// A concrete circular-field arrangement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularArrangement {
    pub kind: CircularType,
    /// Number of congruent arcs `q`.
    pub arcs: usize,
    /// BS at the field centre (`t = 1`).
    pub center: bool,
    /// Radial distances of the BSs on each arc's symmetry line, ascending, meters.
    pub radii: Vec<f64>,
    /// Min-max farthest distance given by the closed form for this type.
    pub table_rf: f64,
    /// True when `n_bs` is outside every tabulated set and the type was chosen by evaluation.
    pub extrapolated: bool,
}

impl CircularArrangement {
    pub fn n_bs(&self) -> usize {
        self.arcs * self.radii.len() + usize::from(self.center)
    }

    fn build(kind: CircularType, n_bs: usize, radius: f64, extrapolated: bool) -> Option<Self> {
        let arcs = kind.arcs(n_bs)?;
        let (radii, table_rf) = kind.formulas(n_bs, radius);
        let ascending = radii.windows(2).all(|w| w[0] < w[1]);
        let inside = radii.iter().all(|d| d.is_finite() && *d > 0.0 && *d < radius);
        if !(ascending && inside && table_rf.is_finite() && table_rf > 0.0) {
            return None;
        }
        let (_, t) = kind.tiers();
        Some(Self {
            kind,
            arcs,
            center: t == 1,
            radii,
            table_rf,
            extrapolated,
        })
    }

    /// Largest farthest distance over the Voronoi cells of the constructed layout.
    pub fn layout_rf(&self, radius: f64) -> Result<f64> {
        let field = FieldSpec::circle(radius)?;
        let cells = voronoi_partition(&circular_layout(field, self)?)?;
        Ok(cells.iter().map(|c| c.farthest).fold(0.0, f64::max))
    }
}

/// Catalog arrangement for `n_bs` BSs in a circular field of radius `radius`.
///
/// Counts with a tabulated type use it directly. Other counts (46, 47, 49, …) try every
/// type whose `p·q + t` decomposition exists with admissible radii and keep the one whose
/// constructed layout has the smallest max farthest distance.
pub fn circular_catalog(n_bs: usize, radius: f64) -> Result<CircularArrangement> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", format!("must be positive, got {radius}")));
    }
    if n_bs == 1 {
        return CircularArrangement::build(CircularType::Center, 1, radius, false)
            .ok_or(Error::UnsupportedArrangement { n_bs });
    }
    if n_bs == 2 {
        return CircularArrangement::build(CircularType::Pair, 2, radius, false)
            .ok_or(Error::UnsupportedArrangement { n_bs });
    }
    if let Some(kind) = CircularType::TABULATED.iter().find(|k| k.lists(n_bs)) {
        return CircularArrangement::build(*kind, n_bs, radius, false)
            .ok_or(Error::UnsupportedArrangement { n_bs });
    }
    let mut best: Option<(f64, CircularArrangement)> = None;
    for kind in CircularType::TABULATED {
        let Some(arr) = CircularArrangement::build(kind, n_bs, radius, true) else {
            continue;
        };
        let rf = arr.layout_rf(radius)?;
        if best.as_ref().is_none_or(|(b, _)| rf < *b) {
            best = Some((rf, arr));
        }
    }
    best.map(|(_, a)| a)
        .ok_or(Error::UnsupportedArrangement { n_bs })
}

/// Tabulated min-max farthest distance for the catalog arrangement of `n_bs`.
pub fn circular_minmax_rf(n_bs: usize, radius: f64) -> Result<f64> {
    Ok(circular_catalog(n_bs, radius)?.table_rf)
}

/// Cell shapes compared against the equilateral triangle at equal farthest distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellShape {
    Triangle,
    Square,
    Hexagon,
    Circle,
}

impl CellShape {
    /// Area of the shape whose centre-to-boundary maximum is `r_f`.
    pub fn area(&self, r_f: f64) -> f64 {
        let s3 = 3f64.sqrt();
        match self {
            CellShape::Triangle => 3.0 * s3 * r_f * r_f / 4.0,
            CellShape::Square => 2.0 * r_f * r_f,
            CellShape::Hexagon => 3.0 * s3 * r_f * r_f / 2.0,
            CellShape::Circle => PI * r_f * r_f,
        }
    }
}

/// Percentage more UEs (at density `λ`) covered by `shape` than by a triangle with the same `r_f`.
pub fn shape_coverage_gain(shape: CellShape, density: f64, r_f: f64) -> Result<f64> {
    if !(density > 0.0) {
        return Err(invalid("density", format!("must be positive, got {density}")));
    }
    if !(r_f > 0.0) {
        return Err(invalid("r_f", format!("must be positive, got {r_f}")));
    }
    let tri = density * CellShape::Triangle.area(r_f);
    let other = density * shape.area(r_f);
    Ok(100.0 * (other - tri) / tri)
}
