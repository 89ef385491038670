//! Exact measurements on convex regions bounded by straight edges and circular arcs.
//!
//! A [`Region`] is a convex polygon optionally intersected with a disc (the
//! circular service field). Areas are computed with Green's theorem by walking
//! the boundary pieces of every constituent set and keeping the pieces that lie
//! inside all the others, so the result is exact up to floating-point rounding.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::Point;

/// A closed disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    fn point_at(&self, theta: f64) -> Point {
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    fn contains(&self, p: Point, eps: f64) -> bool {
        self.center.dist(p) <= self.radius + eps
    }
}

/// Convex region: `polygon ∩ clip` where `polygon` is counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    polygon: Vec<Point>,
    clip: Option<Disc>,
}

/// Result of intersecting a region with a disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscOverlap {
    /// Area of `region ∩ disc`.
    pub area: f64,
    /// Total angle (radians) of the disc's boundary circle lying inside the region.
    pub boundary_angle: f64,
}

impl Region {
    /// Builds a region from a convex polygon (any orientation) and an optional clipping disc.
    pub fn new(mut polygon: Vec<Point>, clip: Option<Disc>) -> Self {
        if signed_area(&polygon) < 0.0 {
            polygon.reverse();
        }
        Self { polygon, clip }
    }

    pub fn polygon(&self) -> &[Point] {
        &self.polygon
    }

    pub fn clip(&self) -> Option<Disc> {
        self.clip
    }

    fn scale(&self) -> f64 {
        let mut s = self
            .polygon
            .iter()
            .fold(0.0_f64, |acc, p| acc.max(p.x.abs()).max(p.y.abs()));
        if let Some(d) = self.clip {
            s = s.max(d.radius + d.center.norm());
        }
        s.max(1e-300)
    }

    fn eps(&self) -> f64 {
        1e-11 * self.scale()
    }

    /// Keeps the part of the polygon where `(p - origin) · normal <= offset`.
    pub(crate) fn clip_half_plane(&mut self, normal: Point, offset: f64) {
        let n = self.polygon.len();
        if n == 0 {
            return;
        }
        let side = |p: Point| p.x * normal.x + p.y * normal.y - offset;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            let (sa, sb) = (side(a), side(b));
            if sa <= 0.0 {
                out.push(a);
            }
            if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
                let t = sa / (sa - sb);
                out.push(a.lerp(b, t));
            }
        }
        // drop near-duplicate consecutive vertices created by clipping through a vertex
        let eps = 1e-12 * self.scale();
        let mut dedup: Vec<Point> = Vec::with_capacity(out.len());
        for p in out {
            if dedup.last().is_none_or(|q| q.dist(p) > eps) {
                dedup.push(p);
            }
        }
        if dedup.len() > 1 && dedup[0].dist(*dedup.last().unwrap()) <= eps {
            dedup.pop();
        }
        self.polygon = dedup;
    }

    pub fn contains(&self, p: Point) -> bool {
        self.contains_eps(p, self.eps())
    }

    fn contains_eps(&self, p: Point, eps: f64) -> bool {
        in_polygon(&self.polygon, p, eps) && self.clip.is_none_or(|d| d.contains(p, eps))
    }

    pub fn area(&self) -> f64 {
        let discs: Vec<Disc> = self.clip.into_iter().collect();
        measure(&self.polygon, &discs, None, self.eps()).0
    }

    /// Area of `self ∩ disc(center, radius)` and the angle of that disc's circle inside `self`.
    pub fn disc_overlap(&self, center: Point, radius: f64) -> DiscOverlap {
        if radius <= 0.0 {
            let inside = self.contains(center);
            return DiscOverlap {
                area: 0.0,
                boundary_angle: if inside { TAU } else { 0.0 },
            };
        }
        let query = Disc::new(center, radius);
        let eps = self.eps();
        let mut discs = Vec::with_capacity(2);
        if let Some(field) = self.clip {
            // query disc inside the field disc: the field boundary is irrelevant
            if field.center.dist(center) + radius > field.radius + eps {
                discs.push(field);
            }
        }
        // query disc covers the whole region
        if self.farthest_distance_from(center) <= radius {
            let angle = if self.farthest_distance_from(center) < radius - eps {
                0.0
            } else {
                let idx = discs.len();
                discs.push(query);
                measure(&self.polygon, &discs, Some(idx), eps).1
            };
            return DiscOverlap {
                area: self.area(),
                boundary_angle: angle,
            };
        }
        let idx = discs.len();
        discs.push(query);
        let (area, angle) = measure(&self.polygon, &discs, Some(idx), eps);
        DiscOverlap {
            area,
            boundary_angle: angle,
        }
    }

    /// Extreme points of the region: polygon corners and edge/arc junctions.
    pub fn vertices(&self) -> Vec<Point> {
        let eps = self.eps();
        let mut out = Vec::new();
        let n = self.polygon.len();
        for i in 0..n {
            let a = self.polygon[i];
            if self.clip.is_none_or(|d| d.contains(a, eps)) {
                out.push(a);
            }
            if let Some(d) = self.clip {
                let b = self.polygon[(i + 1) % n];
                for t in segment_circle_params(a, b, &d) {
                    if (0.0..=1.0).contains(&t) {
                        out.push(a.lerp(b, t));
                    }
                }
            }
        }
        out
    }

    /// Maximum Euclidean distance from `p` to any point of the region.
    pub fn farthest_distance_from(&self, p: Point) -> f64 {
        let eps = self.eps();
        let mut best = self
            .vertices()
            .into_iter()
            .map(|v| v.dist(p))
            .fold(0.0_f64, f64::max);
        if let Some(d) = self.clip {
            let off = d.center.dist(p);
            let candidate = if off > eps {
                let dir = (d.center - p).scale(1.0 / off);
                d.center + dir.scale(d.radius)
            } else {
                d.point_at(0.0)
            };
            // arcs that end on polygon edges are already covered by the vertices
            if in_polygon(&self.polygon, candidate, eps) {
                best = best.max(candidate.dist(p));
            }
        }
        best
    }

    /// Radii at which `r ↦ area(self ∩ disc(p, r))` is not smooth, sorted and deduplicated.
    pub fn critical_radii(&self, p: Point) -> Vec<f64> {
        let eps = self.eps();
        let mut radii: Vec<f64> = self.vertices().into_iter().map(|v| v.dist(p)).collect();
        let n = self.polygon.len();
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            let ab = b - a;
            let len2 = ab.dot(ab);
            if len2 == 0.0 {
                continue;
            }
            let t = (p - a).dot(ab) / len2;
            if (0.0..=1.0).contains(&t) {
                let foot = a.lerp(b, t);
                if self.clip.is_none_or(|d| d.contains(foot, eps)) {
                    radii.push(foot.dist(p));
                }
            }
        }
        if let Some(d) = self.clip {
            let off = d.center.dist(p);
            let nearest = if off > eps {
                d.center + (p - d.center).scale(d.radius / off)
            } else {
                d.point_at(0.0)
            };
            if in_polygon(&self.polygon, nearest, eps) {
                radii.push(d.radius - off);
            }
        }
        let rmax = self.farthest_distance_from(p);
        radii.push(rmax);
        radii.retain(|r| *r > eps && *r <= rmax + eps);
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * rmax);
        radii
    }
}

pub(crate) fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| poly[i].cross(poly[(i + 1) % n]))
        .sum::<f64>()
        * 0.5
}

fn in_polygon(poly: &[Point], p: Point, eps: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        len == 0.0 || e.cross(p - a) >= -eps * len
    })
}

/// Parameters `t` where the line `a + t (b - a)` meets the circle of `disc`.
fn segment_circle_params(a: Point, b: Point, disc: &Disc) -> Vec<f64> {
    let d = b - a;
    let f = a - disc.center;
    let qa = d.dot(d);
    if qa == 0.0 {
        return Vec::new();
    }
    let qb = f.dot(d);
    let qc = f.dot(f) - disc.radius * disc.radius;
    let disc_ = qb * qb - qa * qc;
    // tangent lines land on either side of zero by rounding; keep the touching point
    if disc_ <= 1e-12 * qa * disc.radius * disc.radius {
        return if disc_ >= -1e-12 * qa * disc.radius * disc.radius {
            vec![-qb / qa]
        } else {
            Vec::new()
        };
    }
    let s = disc_.sqrt();
    // numerically stable roots of qa t^2 + 2 qb t + qc = 0
    let q = -(qb + qb.signum() * s);
    if q == 0.0 {
        return vec![0.0];
    }
    let mut ts = vec![q / qa, qc / q];
    ts.sort_by(f64::total_cmp);
    ts
}

fn circle_circle_angles(c: &Disc, other: &Disc) -> Vec<f64> {
    let delta = other.center - c.center;
    let dist = delta.norm();
    if dist == 0.0 || dist > c.radius + other.radius || dist < (c.radius - other.radius).abs() {
        return Vec::new();
    }
    let base = delta.y.atan2(delta.x);
    let cos_t = (c.radius * c.radius + dist * dist - other.radius * other.radius)
        / (2.0 * c.radius * dist);
    let spread = cos_t.clamp(-1.0, 1.0).acos();
    vec![base - spread, base + spread]
}

fn coincident(a: &Disc, b: &Disc, eps: f64) -> bool {
    a.center.dist(b.center) <= eps && (a.radius - b.radius).abs() <= eps
}

/// Area of `polygon ∩ discs[0] ∩ discs[1] ∩ …`, plus the angle of `discs[track]`'s
/// circle lying inside the intersection of the remaining sets.
fn measure(polygon: &[Point], discs: &[Disc], track: Option<usize>, eps: f64) -> (f64, f64) {
    let mut twice_area = 0.0;
    let n = polygon.len();
    if n < 3 {
        return (0.0, 0.0);
    }

    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let mut ts = vec![0.0, 1.0];
        for d in discs {
            ts.extend(
                segment_circle_params(a, b, d)
                    .into_iter()
                    .filter(|t| *t > 0.0 && *t < 1.0),
            );
        }
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            if w[1] - w[0] <= 0.0 {
                continue;
            }
            let mid = a.lerp(b, 0.5 * (w[0] + w[1]));
            if discs.iter().all(|d| d.contains(mid, eps)) {
                let p0 = a.lerp(b, w[0]);
                let p1 = a.lerp(b, w[1]);
                twice_area += p0.cross(p1);
            }
        }
    }

    let mut tracked_angle = 0.0;
    for (j, disc) in discs.iter().enumerate() {
        let mut angles = vec![0.0, TAU];
        for i in 0..n {
            let a = polygon[i];
            let b = polygon[(i + 1) % n];
            for t in segment_circle_params(a, b, disc) {
                let p = a.lerp(b, t) - disc.center;
                angles.push(p.y.atan2(p.x).rem_euclid(TAU));
            }
        }
        for (k, other) in discs.iter().enumerate() {
            if k != j {
                angles.extend(
                    circle_circle_angles(disc, other)
                        .into_iter()
                        .map(|t| t.rem_euclid(TAU)),
                );
            }
        }
        angles.sort_by(f64::total_cmp);
        // arcs shared with an earlier coincident disc are integrated once
        let duplicate = discs[..j].iter().any(|o| coincident(o, disc, eps));
        for w in angles.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 - t0 <= 0.0 {
                continue;
            }
            let mid = disc.point_at(0.5 * (t0 + t1));
            let inside = in_polygon(polygon, mid, eps)
                && discs
                    .iter()
                    .enumerate()
                    .all(|(k, o)| k == j || coincident(o, disc, eps) || o.contains(mid, eps));
            if !inside {
                continue;
            }
            if Some(j) == track {
                tracked_angle += t1 - t0;
            }
            if !duplicate {
                let (cx, cy, r) = (disc.center.x, disc.center.y, disc.radius);
                twice_area += r * (cx * (t1.sin() - t0.sin()) - cy * (t1.cos() - t0.cos()))
                    + r * r * (t1 - t0);
            }
        }
    }
    (0.5 * twice_area, tracked_angle)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn edge_tangent_to_clip_circle() {
        // the edge x = −500 only touches the circle; the region is a sector
        let r = 500.0;
        let h = 363.271_264_002_680_5;
        let poly = vec![Point::new(0.0, 0.0), Point::new(-r, h), Point::new(-r, -h)];
        let region = Region::new(poly, Some(Disc::new(Point::ORIGIN, r)));
        let half = (h / r).atan();
        assert!((region.area() - half * r * r).abs() < 1e-6);
    }

    fn square(a: f64) -> Vec<Point> {
        vec![
            Point::new(-a, -a),
            Point::new(a, -a),
            Point::new(a, a),
            Point::new(-a, a),
        ]
    }

    #[test]
    fn polygon_area_and_orientation() {
        let mut poly = square(2.0);
        poly.reverse();
        let r = Region::new(poly, None);
        assert!((r.area() - 16.0).abs() < 1e-12);
        assert!(signed_area(r.polygon()) > 0.0);
    }

    #[test]
    fn disc_region_area() {
        let r = Region::new(square(3.0), Some(Disc::new(Point::ORIGIN, 3.0)));
        assert!((r.area() - 9.0 * PI).abs() < 1e-10);
        assert!((r.farthest_distance_from(Point::ORIGIN) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn inscribed_circle_in_square() {
        let r = Region::new(square(1.0), None);
        let o = r.disc_overlap(Point::ORIGIN, 1.0);
        assert!((o.area - PI).abs() < 1e-12);
        assert!((o.boundary_angle - TAU).abs() < 1e-12);
        let o = r.disc_overlap(Point::ORIGIN, 2.0f64.sqrt());
        assert!((o.area - 4.0).abs() < 1e-12);
    }

    #[test]
    fn half_disc_by_clipping() {
        let mut r = Region::new(square(2.0), Some(Disc::new(Point::ORIGIN, 2.0)));
        r.clip_half_plane(Point::new(-1.0, 0.0), 0.0);
        assert!((r.area() - 2.0 * PI).abs() < 1e-10);
        let far = r.farthest_distance_from(Point::new(0.5, 0.0));
        assert!((far - (4.0f64 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn corner_quarter_disc() {
        let r = Region::new(square(1.0), None);
        let o = r.disc_overlap(Point::new(-1.0, -1.0), 1.0);
        assert!((o.area - PI / 4.0).abs() < 1e-12);
        assert!((o.boundary_angle - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn lens_of_two_discs() {
        // unit field disc and a unit query disc centred on its rim
        let r = Region::new(square(1.0), Some(Disc::new(Point::ORIGIN, 1.0)));
        let o = r.disc_overlap(Point::new(1.0, 0.0), 1.0);
        let lens = 2.0 * PI / 3.0 - 3.0f64.sqrt() / 2.0;
        assert!((o.area - lens).abs() < 1e-12);
        assert!((o.boundary_angle - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn critical_radii_of_offset_square() {
        let r = Region::new(square(1.0), None);
        let p = Point::new(-0.2, 0.0);
        let radii = r.critical_radii(p);
        let expected = [0.8, 1.0, 1.2, (0.64f64 + 1.0).sqrt(), (1.44f64 + 1.0).sqrt()];
        assert_eq!(radii.len(), expected.len());
        for (a, b) in radii.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
