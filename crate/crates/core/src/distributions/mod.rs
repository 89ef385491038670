//! Distance from a BS to a uniformly dropped UE, and the farthest-UE order statistics.

mod appendix;
mod farthest;

use serde::Serialize;

pub use farthest::{dirac_limit, farthest_multi, farthest_single, nth_moment, FarthestDistribution};

use crate::error::{invalid, Error, Result};
use crate::geometry::{Cell, Point, Region};
use crate::quadrature::integrate;

/// A law on radial distance `r ∈ [0, support_max]` that can be integrated against.
///
/// The law may be defective (total mass below one).
pub trait RadialLaw {
    /// `∫ g(r) dF(r)` to relative tolerance `rel_tol`.
    fn expect<G: Fn(f64) -> f64>(&self, g: G, rel_tol: f64) -> Result<f64>;

    fn support_max(&self) -> f64;

    fn total_mass(&self) -> f64;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Law {
    SquareOffset { a: f64, d: f64 },
    TrianglePeak { a: f64, d: f64 },
    Region { region: Region, bs: Point, area: f64 },
}

/// Distance from a BS to a point uniformly distributed over a region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceDistribution {
    law: Law,
    breakpoints: Vec<f64>,
    support_max: f64,
}

fn square_polygon(a: f64) -> Vec<Point> {
    vec![
        Point::new(-a, -a),
        Point::new(a, -a),
        Point::new(a, a),
        Point::new(-a, a),
    ]
}

fn triangle_polygon(a: f64) -> Vec<Point> {
    vec![Point::ORIGIN, Point::new(-a, -a), Point::new(a, -a)]
}

fn check_offset(a: f64, d: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid("a", format!("must be positive, got {a}")));
    }
    if !(d.is_finite() && (0.0..a).contains(&d)) {
        return Err(Error::OffsetOutOfRange { d, max: a });
    }
    Ok(())
}

impl DistanceDistribution {
    /// Law of `|U - bs|` for `U` uniform on `region`.
    pub fn from_region(region: Region, bs: Point) -> Result<Self> {
        let area = region.area();
        if !(area > 0.0) {
            return Err(invalid("region", "cell has zero area"));
        }
        let breakpoints = region.critical_radii(bs);
        let support_max = region.farthest_distance_from(bs);
        Ok(Self {
            law: Law::Region { region, bs, area },
            breakpoints,
            support_max,
        })
    }

    /// Radii where the CDF changes analytic form, ascending.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn support_max(&self) -> f64 {
        self.support_max
    }

    /// Whether the law is evaluated by exact region intersection rather than a closed form.
    pub fn is_numeric(&self) -> bool {
        matches!(self.law, Law::Region { .. })
    }

    pub fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.support_max {
            return 1.0;
        }
        let v = match &self.law {
            Law::SquareOffset { a, d } => appendix::square_cdf(*a, *d, r),
            Law::TrianglePeak { a, d } => appendix::triangle_cdf(*a, *d, r),
            Law::Region { region, bs, area } => region.disc_overlap(*bs, r).area / area,
        };
        v.clamp(0.0, 1.0)
    }

    pub fn pdf(&self, r: f64) -> f64 {
        if r < 0.0 || r > self.support_max {
            return 0.0;
        }
        match &self.law {
            Law::SquareOffset { a, d } => appendix::square_pdf(*a, *d, r),
            Law::TrianglePeak { a, d } => appendix::triangle_pdf(*a, *d, r),
            Law::Region { region, bs, area } => r * region.disc_overlap(*bs, r).boundary_angle / area,
        }
    }
}

impl RadialLaw for DistanceDistribution {
    fn expect<G: Fn(f64) -> f64>(&self, g: G, rel_tol: f64) -> Result<f64> {
        integrate(|r| g(r) * self.pdf(r), 0.0, self.support_max, &self.breakpoints, rel_tol)
    }

    fn support_max(&self) -> f64 {
        self.support_max
    }

    fn total_mass(&self) -> f64 {
        1.0
    }
}

/// Square field `[-a, a]²` with the BS at distance `d` left of the centre.
///
/// Closed forms cover `d <= a/4`; larger offsets fall back to exact region intersection.
pub fn square_offset_distribution(a: f64, d: f64) -> Result<DistanceDistribution> {
    check_offset(a, d)?;
    if d > a / 4.0 {
        return DistanceDistribution::from_region(square_region(a), Point::new(-d, 0.0));
    }
    let h = a - d;
    let k = a + d;
    let mut breakpoints = vec![h, a, k, (h * h + a * a).sqrt(), (k * k + a * a).sqrt()];
    breakpoints.dedup();
    Ok(DistanceDistribution {
        law: Law::SquareOffset { a, d },
        support_max: (k * k + a * a).sqrt(),
        breakpoints,
    })
}

/// Right-isoceles triangle of area `a²` with the BS at distance `d` from the right-angle peak,
/// on the symmetry axis.
///
/// Closed forms cover `d <= a/2`; larger offsets fall back to exact region intersection.
pub fn triangle_peak_distribution(a: f64, d: f64) -> Result<DistanceDistribution> {
    check_offset(a, d)?;
    if d > a / 2.0 {
        return DistanceDistribution::from_region(triangle_region(a), Point::new(0.0, -d));
    }
    let h = a - d;
    let mut breakpoints: Vec<f64> = vec![d / 2f64.sqrt(), d, h, (h * h + a * a).sqrt()]
        .into_iter()
        .filter(|b| *b > 0.0)
        .collect();
    breakpoints.dedup();
    Ok(DistanceDistribution {
        law: Law::TrianglePeak { a, d },
        support_max: (h * h + a * a).sqrt(),
        breakpoints,
    })
}

/// The square `[-a, a]²` used by [`square_offset_distribution`].
pub fn square_region(a: f64) -> Region {
    Region::new(square_polygon(a), None)
}

/// The triangle used by [`triangle_peak_distribution`].
pub fn triangle_region(a: f64) -> Region {
    Region::new(triangle_polygon(a), None)
}

/// Distance law of a Voronoi cell: `F(r) = area(cell ∩ disc(bs, r)) / A_i`.
///
/// Both CDF and PDF come from exact intersection geometry, so no tolerance is involved.
pub fn numeric_cell_distribution(cell: &Cell) -> Result<DistanceDistribution> {
    DistanceDistribution::from_region(cell.region.clone(), cell.bs)
}

/// Distance from the centre of a `2·half_w × 2·half_h` rectangle.
pub fn centered_rectangle_distribution(half_w: f64, half_h: f64) -> Result<DistanceDistribution> {
    if !(half_w > 0.0 && half_h > 0.0) {
        return Err(invalid("rectangle", "half sizes must be positive"));
    }
    let poly = vec![
        Point::new(-half_w, -half_h),
        Point::new(half_w, -half_h),
        Point::new(half_w, half_h),
        Point::new(-half_w, half_h),
    ];
    DistanceDistribution::from_region(Region::new(poly, None), Point::ORIGIN)
}
