use std::f64::consts::PI;

use approx::assert_relative_eq;
use green_planner::deployment::{
    circular_catalog, circular_minmax_rf, optimal_grid, shape_coverage_gain, single_bs_location,
    CellShape, CircularType, GridArrangement,
};
use green_planner::distributions::square_offset_distribution;
use green_planner::geometry::FieldSpec;
use green_planner::Error;

const R: f64 = 500.0;

fn brute_force_grid(n_bs: usize) -> GridArrangement {
    let cost = |m: usize, n: usize| (1.0 / (m * m) as f64 + 1.0 / (n * n) as f64).sqrt();
    let mut best: Option<(f64, GridArrangement)> = None;
    for m in 1..=n_bs {
        if !n_bs.is_multiple_of(m) {
            continue;
        }
        let n = n_bs / m;
        let c = cost(m, n);
        // (m, n) and (n, m) tie; keep m <= n
        if m <= n && best.is_none_or(|(b, _)| c < b - 1e-15) {
            best = Some((c, GridArrangement { m, n }));
        }
    }
    best.unwrap().1
}

#[test]
fn grid_matches_brute_force() {
    for n_bs in 1..=200 {
        assert_eq!(optimal_grid(n_bs).unwrap(), brute_force_grid(n_bs), "n_bs={n_bs}");
    }
    assert_eq!(optimal_grid(9).unwrap(), GridArrangement { m: 3, n: 3 });
    assert_eq!(optimal_grid(12).unwrap(), GridArrangement { m: 3, n: 4 });
}

#[test]
fn farthest_grows_with_imbalance() {
    for n_bs in [12, 24, 36, 60, 120, 180] {
        let mut pairs: Vec<GridArrangement> = (1..=n_bs)
            .filter(|m| n_bs % m == 0 && *m <= n_bs / m)
            .map(|m| GridArrangement { m, n: n_bs / m })
            .collect();
        pairs.sort_by_key(|g| g.omega().abs());
        for w in pairs.windows(2) {
            assert!(w[0].farthest(R) <= w[1].farthest(R));
        }
    }
}

#[test]
fn single_bs_centre_beats_offsets() {
    for field in [FieldSpec::square(R).unwrap(), FieldSpec::circle(R).unwrap()] {
        let c = single_bs_location(&field);
        assert_eq!((c.x, c.y), (0.0, 0.0));
    }
    let centre = square_offset_distribution(R, 0.0).unwrap().support_max();
    for i in 1..=20 {
        let d = 0.49 * R * i as f64 / 20.0;
        assert!(square_offset_distribution(R, d).unwrap().support_max() > centre);
    }
}

#[test]
fn spot_values() {
    let three = circular_catalog(3, R).unwrap();
    assert_eq!(three.kind, CircularType::Q);
    assert_relative_eq!(three.radii[0], 0.5 * R, max_relative = 1e-12);
    assert_relative_eq!(three.table_rf, 3f64.sqrt() / 2.0 * R, max_relative = 1e-12);
    let four = circular_catalog(4, R).unwrap();
    assert_relative_eq!(four.radii[0], R / 2f64.sqrt(), max_relative = 1e-12);
}

#[test]
fn table_agrees_with_layout_except_two_tier_rows() {
    for n_bs in 1..=35 {
        let arr = circular_catalog(n_bs, R).unwrap();
        let built = arr.layout_rf(R).unwrap();
        let gap = (built - arr.table_rf).abs();
        if arr.kind == CircularType::TwoQ {
            assert!(gap > 1e-6 * R, "n_bs={n_bs} unexpectedly reconciles");
        } else {
            assert!(gap <= 1e-6 * R, "n_bs={n_bs} gap {gap}");
        }
    }
}

#[test]
fn q_plus_one_cross_check() {
    // outer BSs at d1 on q = N_b − 1 arcs around a central BS
    for n_bs in 7..=19 {
        let arr = circular_catalog(n_bs, R).unwrap();
        if arr.kind != CircularType::QPlus1 {
            continue;
        }
        let q = (n_bs - 1) as f64;
        let expect = R / (4.0 * (PI / q).cos().powi(2) - 1.0);
        assert_relative_eq!(arr.table_rf, expect, max_relative = 1e-9);
        assert_relative_eq!(arr.layout_rf(R).unwrap(), expect, max_relative = 1e-9);
    }
}

#[test]
fn minmax_nonincreasing_within_type() {
    for kind in CircularType::TABULATED {
        let mut prev = f64::INFINITY;
        for n_bs in 3..=60 {
            if !kind.lists(n_bs) {
                continue;
            }
            let rf = circular_minmax_rf(n_bs, R).unwrap();
            assert!(rf <= prev + 1e-9, "{kind} n_bs={n_bs}");
            prev = rf;
        }
    }
}

#[test]
fn small_counts_are_extensions() {
    let one = circular_catalog(1, R).unwrap();
    assert_eq!(one.n_bs(), 1);
    assert_eq!(one.table_rf, R);
    let two = circular_catalog(2, R).unwrap();
    assert_eq!(two.n_bs(), 2);
    assert_relative_eq!(two.layout_rf(R).unwrap(), two.table_rf, max_relative = 1e-12);
    assert!(matches!(circular_catalog(0, R), Err(Error::UnsupportedArrangement { .. })));
}

#[test]
fn shape_gains() {
    let g = |s| shape_coverage_gain(s, 1e-4, 100.0).unwrap();
    assert!((g(CellShape::Square) - 53.96).abs() < 0.01);
    assert!((g(CellShape::Hexagon) - 100.0).abs() < 0.01);
    assert!((g(CellShape::Circle) - 141.84).abs() < 0.01);
    assert_eq!(g(CellShape::Triangle), 0.0);
    assert!(shape_coverage_gain(CellShape::Square, 0.0, 1.0).is_err());
}
