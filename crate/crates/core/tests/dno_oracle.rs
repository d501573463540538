mod common;

use common::elliptic::{cosine_fixture, dno_fd, dno_oracle};
use wilton_core::waterwaves::{dno_apply, Grid};
use wilton_core::PhysicalParams;

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    diff / b.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

#[test]
fn flat_strip_oracle_matches_multiplier() {
    let grid = Grid::new(64).unwrap();
    let surf = cosine_fixture(&grid, 0.0, 1.0);
    let g = dno_oracle(&grid, &surf, 64);
    let t = 1.0_f64.tanh();
    for (i, v) in g.iter().enumerate() {
        assert!((v - t * grid.x(i).cos()).abs() < 1e-6, "{v}");
    }
}

#[test]
fn dno_matches_elliptic_solution() {
    let grid = Grid::new(256).unwrap();
    let surf = cosine_fixture(&grid, 0.05, 1.0);
    let oracle = dno_oracle(&grid, &surf, 64);
    let p = PhysicalParams::finite(1.0, 1.0, 1.0);
    let g = dno_apply(&p, &grid, &surf.eta, &surf.psi, 4);
    let err = rel_err(&g, &oracle);
    assert!(err < 1e-4, "relative error {err:e}");
    // the truncation at order 1 is visibly worse
    let g1 = dno_apply(&p, &grid, &surf.eta, &surf.psi, 1);
    assert!(rel_err(&g1, &oracle) > 10.0 * err);
}

#[test]
fn finite_difference_converges_at_second_order() {
    let grid = Grid::new(64).unwrap();
    let surf = cosine_fixture(&grid, 0.05, 1.0);
    let exact = dno_oracle(&grid, &surf, 128);
    let e1 = rel_err(&dno_fd(&grid, &surf, 32), &exact);
    let e2 = rel_err(&dno_fd(&grid, &surf, 64), &exact);
    let rate = (e1 / e2).log2();
    assert!((rate - 2.0).abs() < 0.3, "rate {rate}");
}
