//! Closed-form distance laws for an offset BS in a square and a peak-offset BS in a right triangle.

use std::f64::consts::{FRAC_PI_2, PI};

/// `acos(x / r)` clamped against round-off.
fn acos_ratio(x: f64, r: f64) -> f64 {
    (x / r).clamp(-1.0, 1.0).acos()
}

/// Half-chord `√(r² − x²)`, zero when the line is out of reach.
fn chord(x: f64, r: f64) -> f64 {
    (r * r - x * x).max(0.0).sqrt()
}

/// Square `[-a, a]²`, BS at `(-d, 0)`, valid for `0 <= d <= a/4`.
pub(super) fn square_cdf(a: f64, d: f64, r: f64) -> f64 {
    let h = a - d;
    let k = a + d;
    let norm = 4.0 * a * a;
    let near_corner = (h * h + a * a).sqrt();
    let far_corner = (k * k + a * a).sqrt();
    let v = if r < h {
        PI * r * r
    } else if r < a {
        h * chord(h, r) + (PI - acos_ratio(h, r)) * r * r
    } else if r < k {
        h * chord(h, r) + 2.0 * a * chord(a, r)
            + (PI - acos_ratio(h, r) - 2.0 * acos_ratio(a, r)) * r * r
    } else if r < near_corner {
        h * chord(h, r)
            + 2.0 * a * chord(a, r)
            + k * chord(k, r)
            + (PI - acos_ratio(h, r) - acos_ratio(k, r) - 2.0 * acos_ratio(a, r)) * r * r
    } else if r < far_corner {
        2.0 * a * h
            + a * chord(a, r)
            + k * chord(k, r)
            + (FRAC_PI_2 - acos_ratio(a, r) - acos_ratio(k, r)) * r * r
    } else {
        norm
    };
    v / norm
}

pub(super) fn square_pdf(a: f64, d: f64, r: f64) -> f64 {
    let h = a - d;
    let k = a + d;
    let near_corner = (h * h + a * a).sqrt();
    let far_corner = (k * k + a * a).sqrt();
    let angle = if r < h {
        PI
    } else if r < a {
        PI - acos_ratio(h, r)
    } else if r < k {
        PI - acos_ratio(h, r) - 2.0 * acos_ratio(a, r)
    } else if r < near_corner {
        PI - acos_ratio(h, r) - acos_ratio(k, r) - 2.0 * acos_ratio(a, r)
    } else if r < far_corner {
        FRAC_PI_2 - acos_ratio(a, r) - acos_ratio(k, r)
    } else {
        0.0
    };
    (angle * r / (2.0 * a * a)).max(0.0)
}

/// Right-isoceles triangle with its right-angle peak at the origin and base corners
/// `(±a, -a)` (area `a²`), BS at `(0, -d)`; valid for `0 <= d <= a/2`.
pub(super) fn triangle_cdf(a: f64, d: f64, r: f64) -> f64 {
    let s = d / 2f64.sqrt();
    let h = a - d;
    let corner = (h * h + a * a).sqrt();
    let norm = a * a;
    let v = if r < s {
        PI * r * r
    } else if r < d {
        2.0 * s * chord(s, r) + (PI - 2.0 * acos_ratio(s, r)) * r * r
    } else if r < h {
        d * d / 2.0 + s * chord(s, r) + (0.75 * PI - acos_ratio(s, r)) * r * r
    } else if r < corner {
        d * d / 2.0
            + s * chord(s, r)
            + h * chord(h, r)
            + (0.75 * PI - acos_ratio(s, r) - acos_ratio(h, r)) * r * r
    } else {
        norm
    };
    v / norm
}

pub(super) fn triangle_pdf(a: f64, d: f64, r: f64) -> f64 {
    let s = d / 2f64.sqrt();
    let h = a - d;
    let corner = (h * h + a * a).sqrt();
    let angle = if r < s {
        PI
    } else if r < d {
        PI - 2.0 * acos_ratio(s, r)
    } else if r < h {
        0.75 * PI - acos_ratio(s, r)
    } else if r < corner {
        0.75 * PI - acos_ratio(s, r) - acos_ratio(h, r)
    } else {
        0.0
    };
    (2.0 * angle * r / (a * a)).max(0.0)
}
