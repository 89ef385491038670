//! Service fields, base-station layouts and their Voronoi cells.

mod region;

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

pub use region::{Disc, DiscOverlap, Region};

use crate::deployment::CircularArrangement;
use crate::error::{invalid, Error, Result};

/// A point in the plane, in meters. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// The service region, centred on the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum FieldSpec {
    /// Square `[-a, a] × [-a, a]`; the side length is `2a`.
    Square { half_side: f64 },
    /// Disc of radius `R`.
    Circle { radius: f64 },
}

impl FieldSpec {
    pub fn square(half_side: f64) -> Result<Self> {
        Self::Square { half_side }.validated()
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::Circle { radius }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.extent();
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid("field", format!("dimension must be positive, got {v}")));
        }
        Ok(self)
    }

    /// Half-side for squares, radius for circles.
    pub fn extent(&self) -> f64 {
        match *self {
            FieldSpec::Square { half_side } => half_side,
            FieldSpec::Circle { radius } => radius,
        }
    }

    /// Total area `W`.
    pub fn area(&self) -> f64 {
        match *self {
            FieldSpec::Square { half_side: a } => 4.0 * a * a,
            FieldSpec::Circle { radius: r } => PI * r * r,
        }
    }

    pub fn centroid(&self) -> Point {
        Point::ORIGIN
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            FieldSpec::Square { half_side: a } => p.x.abs() <= a && p.y.abs() <= a,
            FieldSpec::Circle { radius: r } => p.norm() <= r,
        }
    }

    /// The whole field as a [`Region`].
    pub fn region(&self) -> Region {
        let e = self.extent();
        let square = vec![
            Point::new(-e, -e),
            Point::new(e, -e),
            Point::new(e, e),
            Point::new(-e, e),
        ];
        match self {
            FieldSpec::Square { .. } => Region::new(square, None),
            FieldSpec::Circle { radius } => {
                Region::new(square, Some(Disc::new(Point::ORIGIN, *radius)))
            }
        }
    }
}

/// Base-station positions inside a field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsLayout {
    pub field: FieldSpec,
    pub points: Vec<Point>,
}

impl BsLayout {
    /// Validates that the layout is nonempty, inside the field and free of duplicates.
    pub fn new(field: FieldSpec, points: Vec<Point>) -> Result<Self> {
        let field = field.validated()?;
        if points.is_empty() {
            return Err(Error::EmptyLayout);
        }
        let tol = 1e-9 * field.extent();
        for (index, p) in points.iter().enumerate() {
            let inside = match field {
                FieldSpec::Square { half_side: a } => p.x.abs() < a && p.y.abs() < a,
                FieldSpec::Circle { radius } => p.norm() < radius,
            };
            if !inside || !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::PointOutsideField {
                    index,
                    x: p.x,
                    y: p.y,
                });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist(points[j]) <= tol {
                    return Err(Error::DuplicatePoints {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self { field, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the closest base station; ties go to the lower index.
    pub fn nearest(&self, p: Point) -> usize {
        let mut best = 0;
        let mut best_d2 = f64::INFINITY;
        for (i, b) in self.points.iter().enumerate() {
            let d2 = (p.x - b.x).powi(2) + (p.y - b.y).powi(2);
            if d2 < best_d2 {
                best = i;
                best_d2 = d2;
            }
        }
        best
    }
}

/// One Voronoi cell of a layout, clipped to the field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub bs: Point,
    pub region: Region,
    /// Cell area `A_i` in m².
    pub area: f64,
    /// Farthest Euclidean distance `r_f` from the base station to the cell boundary.
    pub farthest: f64,
}

impl Cell {
    pub fn from_region(index: usize, bs: Point, region: Region) -> Self {
        let area = region.area();
        let farthest = region.farthest_distance_from(bs);
        Self {
            index,
            bs,
            region,
            area,
            farthest,
        }
    }
}

/// Partitions the field into the Voronoi cells of the layout by half-plane intersection.
pub fn voronoi_partition(layout: &BsLayout) -> Result<Vec<Cell>> {
    let layout = BsLayout::new(layout.field, layout.points.clone())?;
    let base = layout.field.region();
    let cells = layout
        .points
        .iter()
        .enumerate()
        .map(|(i, &bs)| {
            let mut region = base.clone();
            for (j, &other) in layout.points.iter().enumerate() {
                if i == j {
                    continue;
                }
                // keep points closer to `bs` than to `other`
                let normal = other - bs;
                let mid = bs.lerp(other, 0.5);
                region.clip_half_plane(normal, normal.dot(mid));
            }
            Cell::from_region(i, bs, region)
        })
        .collect();
    Ok(cells)
}

/// Maximum distance from the cell's base station to its boundary.
pub fn farthest_euclidean_distance(cell: &Cell) -> f64 {
    cell.farthest
}

/// `m` rows by `n` columns of base stations at the centres of a regular partition of a square field.
pub fn grid_layout(field: FieldSpec, m: usize, n: usize) -> Result<BsLayout> {
    let FieldSpec::Square { half_side: a } = field else {
        return Err(Error::NotSquareField);
    };
    if m == 0 || n == 0 {
        return Err(invalid("grid", format!("rows and columns must be >= 1, got {m}x{n}")));
    }
    let mut points = Vec::with_capacity(m * n);
    for row in 0..m {
        let y = -a + (2 * row + 1) as f64 * a / m as f64;
        for col in 0..n {
            let x = -a + (2 * col + 1) as f64 * a / n as f64;
            points.push(Point::new(x, y));
        }
    }
    BsLayout::new(field, points)
}

/// Places base stations for a circular-field arrangement.
///
/// Arc `k` has its symmetry line at angle `π/q + 2πk/q`; within an arc the stations
/// sit on that line at the arrangement's radii (meters), inner tier first. A centre station,
/// when present, comes first.
pub fn circular_layout(field: FieldSpec, arrangement: &CircularArrangement) -> Result<BsLayout> {
    if !matches!(field, FieldSpec::Circle { .. }) {
        return Err(Error::NotCircleField);
    }
    let mut points = Vec::with_capacity(arrangement.n_bs());
    if arrangement.center {
        points.push(Point::ORIGIN);
    }
    let q = arrangement.arcs;
    for k in 0..q {
        let angle = PI / q as f64 + 2.0 * PI * k as f64 / q as f64;
        for &d in &arrangement.radii {
            points.push(Point::polar(d, angle));
        }
    }
    BsLayout::new(field, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_generator_covers_field() {
        let field = FieldSpec::square(500.0).unwrap();
        let layout = BsLayout::new(field, vec![Point::new(120.0, -40.0)]).unwrap();
        let cells = voronoi_partition(&layout).unwrap();
        assert_eq!(cells.len(), 1);
        assert!((cells[0].area - 1.0e6).abs() < 1e-6);
    }

    #[test]
    fn quadrant_cells_are_congruent() {
        let field = FieldSpec::square(500.0).unwrap();
        let layout = grid_layout(field, 2, 2).unwrap();
        let cells = voronoi_partition(&layout).unwrap();
        for c in &cells {
            assert!((c.area - 250_000.0).abs() < 1e-6);
            assert!((c.farthest - 250.0 * 2f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn centered_square_half_diagonal() {
        let field = FieldSpec::square(500.0).unwrap();
        let layout = grid_layout(field, 1, 1).unwrap();
        assert_eq!(layout.points, vec![Point::ORIGIN]);
        let cells = voronoi_partition(&layout).unwrap();
        assert!((cells[0].farthest - 500.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn rectangle_cells() {
        let field = FieldSpec::square(500.0).unwrap();
        let (m, n) = (3, 4);
        let cells = voronoi_partition(&grid_layout(field, m, n).unwrap()).unwrap();
        assert_eq!(cells.len(), 12);
        let expected = ((500.0 / m as f64).powi(2) + (500.0 / n as f64).powi(2)).sqrt();
        for c in &cells {
            assert!((c.farthest - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_three_by_three_positions() {
        let field = FieldSpec::square(500.0).unwrap();
        let layout = grid_layout(field, 3, 3).unwrap();
        let s = 1000.0 / 3.0;
        for p in &layout.points {
            for v in [p.x, p.y] {
                assert!([-s, 0.0, s].iter().any(|t| (v - t).abs() < 1e-9), "{v}");
            }
        }
    }

    #[test]
    fn grid_requires_square() {
        let field = FieldSpec::circle(500.0).unwrap();
        assert_eq!(grid_layout(field, 2, 2), Err(Error::NotSquareField));
    }

    #[test]
    fn layout_validation() {
        let field = FieldSpec::square(10.0).unwrap();
        assert_eq!(BsLayout::new(field, vec![]), Err(Error::EmptyLayout));
        assert!(matches!(
            BsLayout::new(field, vec![Point::new(11.0, 0.0)]),
            Err(Error::PointOutsideField { index: 0, .. })
        ));
        assert!(matches!(
            BsLayout::new(field, vec![Point::new(1.0, 1.0), Point::new(1.0, 1.0)]),
            Err(Error::DuplicatePoints { first: 0, second: 1 })
        ));
        assert!(FieldSpec::circle(-1.0).is_err());
    }

    #[test]
    fn nearest_ties_go_low() {
        let field = FieldSpec::square(10.0).unwrap();
        let layout =
            BsLayout::new(field, vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        assert_eq!(layout.nearest(Point::new(0.0, 3.0)), 0);
        assert_eq!(layout.nearest(Point::new(0.1, 3.0)), 1);
    }

    #[test]
    fn layout_json_shape() {
        let field = FieldSpec::square(1.0).unwrap();
        let layout = BsLayout::new(field, vec![Point::new(0.5, -0.25)]).unwrap();
        let json = serde_json::to_string(&layout).unwrap();
        assert_eq!(
            json,
            r#"{"field":{"shape":"square","half_side":1.0},"points":[[0.5,-0.25]]}"#
        );
        let back: BsLayout = serde_json::from_str(&json).unwrap();
        assert_eq!(back, layout);
    }
}
