//! Falsification screens for the "exactly one / exactly two" remarks: a
//! 41-point scan of relative distances counts how many produce grid-constant
//! transformed curvatures. A scan cannot prove uniqueness; it can only
//! refute the counts, which is what these tests probe.

mod common;

use common::constant_mean_fixture;
use relgeo::frame::build_frame;
use relgeo::grid::GridSpec;
use relgeo::harness::{mu_scan, scan_distances};
use relgeo::parallel::evaluate_pair;
use relgeo::surface::eval_surface;
use relgeo::tol;

fn base_fields(grid: usize) -> Vec<(f64, f64)> {
    let (spec, support) = constant_mean_fixture();
    GridSpec::new(grid, grid)
        .points(spec.domain)
        .into_iter()
        .map(|u| {
            let sj = eval_surface(&spec, u, 4 + support.order_cost()).unwrap();
            let f = build_frame(&sj, &support, &spec.params).unwrap();
            (f.curvature, f.mean_curvature)
        })
        .collect()
}

#[test]
fn constant_mean_surface_has_one_special_distance_of_each_kind() {
    // H = 1 constant, K = 1 - u1 u2 non-constant: among the scanned
    // distances, exactly mu = 1/(2H) = 0.5 gives constant K* and exactly
    // mu = 1/H = 1 gives constant H* (mu = 0 is excluded as the identity).
    let fields = base_fields(8);
    let entries = mu_scan(&fields, &scan_distances(), tol::SCAN_CONSTANT);
    let constant_k: Vec<f64> = entries
        .iter()
        .filter(|e| !e.censused && e.constant_curvature)
        .map(|e| e.mu)
        .collect();
    let constant_h: Vec<f64> = entries
        .iter()
        .filter(|e| !e.censused && e.constant_mean)
        .map(|e| e.mu)
        .collect();
    assert_eq!(constant_k.len(), 1, "constant-K* distances: {constant_k:?}");
    assert!((constant_k[0] - 0.5).abs() < 1e-12);
    assert_eq!(constant_h.len(), 1, "constant-H* distances: {constant_h:?}");
    assert!((constant_h[0] - 1.0).abs() < 1e-12);
}

#[test]
fn constant_curvature_surface_has_two_constant_mean_distances() {
    // The parallel of the constant-mean fixture at mu = 0.5 has constant
    // K* = 4 and non-constant H*: the scan finds exactly the two distances
    // -/+ 1/sqrt(K*) = -/+ 0.5 with constant transformed mean curvature.
    let (spec, support) = constant_mean_fixture();
    let fields: Vec<(f64, f64)> = GridSpec::new(8, 8)
        .points(spec.domain)
        .into_iter()
        .map(|u| {
            let pair = evaluate_pair(&spec, &support, 0.5, u, 4).unwrap();
            (pair.star.curvature, pair.star.mean_curvature)
        })
        .collect();
    for (k, _) in &fields {
        assert!((k - 4.0).abs() < 1e-9, "derived surface must have K = 4");
    }
    let entries = mu_scan(&fields, &scan_distances(), tol::SCAN_CONSTANT);
    let constant_h: Vec<f64> = entries
        .iter()
        .filter(|e| !e.censused && e.constant_mean)
        .map(|e| e.mu)
        .collect();
    assert_eq!(constant_h.len(), 2, "constant-H* distances: {constant_h:?}");
    assert!((constant_h[0] + 0.5).abs() < 1e-12);
    assert!((constant_h[1] - 0.5).abs() < 1e-12);
    // No scanned distance yields a constant transformed curvature: that
    // would force a constant H*, which this surface does not have.
    assert!(entries
        .iter()
        .filter(|e| !e.censused)
        .all(|e| !e.constant_curvature));
}
