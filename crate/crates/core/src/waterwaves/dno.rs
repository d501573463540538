//! Taylor expansion of the Dirichlet-Neumann operator `G(eta) psi`.
//!
//! With `A_m = D^m` for even `m` and `A_m = D^{m-1} G0` for odd `m`
//! (`D = -i d/dx`, `G0 = D tanh(hD)`), the potential at the surface is
//! expanded around `y = 0` and the flux form
//! `G(eta) psi = -d/dx int_{-h}^{eta} phi_x dy` gives
//!
//! ```text
//! phi_0 = psi
//! phi_n = - sum_{m=1}^{n} P[ eta^m/m! A_m phi_{n-m} ]
//! G_n psi = G0 phi_n + sum_{m=1}^{n} D P[ eta^m/m! D A_{m-1} phi_{n-m} ]
//! ```
//!
//! where `P` is the 2/3-rule projection. `G_1 psi = D eta D psi - G0 eta G0 psi`.

use super::grid::{Grid, C};
use crate::spectra::{g0_symbol, PhysicalParams};

/// Maximum supported expansion order.
pub const MAX_ORDER: usize = 4;

fn a_symbol(params: &PhysicalParams, m: usize, k: f64) -> f64 {
    let a = k.abs();
    if m % 2 == 0 {
        a.powi(m as i32)
    } else {
        a.powi(m as i32 - 1) * g0_symbol(params, a)
    }
}

/// Homogeneous pieces `G_0 psi, ..., G_order psi` as dealiased Fourier coefficients.
pub fn dno_terms(params: &PhysicalParams, grid: &Grid, eta_hat: &[C], psi_hat: &[C], order: usize) -> Vec<Vec<C>> {
    let order = order.min(MAX_ORDER);
    let eta = grid.to_real(eta_hat);
    // powers[m] = eta^m / m! on the grid
    let mut powers: Vec<Vec<f64>> = vec![vec![1.0; grid.m()], eta.clone()];
    for m in 2..=order {
        let p = grid.product(&powers[m - 1], &eta);
        powers.push(p.iter().map(|v| v / m as f64).collect());
    }
    let g0 = |k: f64| g0_symbol(params, k);
    let mut phis: Vec<Vec<C>> = vec![psi_hat.to_vec()];
    let mut out = vec![grid.apply(psi_hat, g0)];
    for n in 1..=order {
        let mut phi_n = vec![C::new(0.0, 0.0); grid.m()];
        let mut flux = vec![C::new(0.0, 0.0); grid.m()];
        for m in 1..=n {
            let src = &phis[n - m];
            let am = grid.to_real(&grid.apply(src, |k| a_symbol(params, m, k)));
            let t = grid.project(&mul(&powers[m], &am));
            for (a, b) in phi_n.iter_mut().zip(&t) {
                *a -= b;
            }
            // D f D g = -(f g_x)_x
            let dam = grid.to_real(&grid.dx(&grid.apply(src, |k| a_symbol(params, m - 1, k))));
            let t = grid.project(&mul(&powers[m], &dam));
            for (a, b) in flux.iter_mut().zip(grid.dx(&t)) {
                *a -= b;
            }
        }
        let mut g_n = grid.apply(&phi_n, g0);
        for (a, b) in g_n.iter_mut().zip(&flux) {
            *a += b;
        }
        grid.dealias(&mut g_n);
        phis.push(phi_n);
        out.push(g_n);
    }
    out
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// `sum_{n=0}^{order} G_n(eta) psi` in Fourier.
pub fn dno_apply_hat(params: &PhysicalParams, grid: &Grid, eta_hat: &[C], psi_hat: &[C], order: usize) -> Vec<C> {
    let terms = dno_terms(params, grid, eta_hat, psi_hat, order);
    let mut out = vec![C::new(0.0, 0.0); grid.m()];
    for t in &terms {
        for (a, b) in out.iter_mut().zip(t) {
            *a += b;
        }
    }
    out
}

/// `G(eta) psi` on the grid for grid samples of `eta` and `psi`.
pub fn dno_apply(params: &PhysicalParams, grid: &Grid, eta: &[f64], psi: &[f64], order: usize) -> Vec<f64> {
    let eh = grid.project(eta);
    let ph = grid.project(psi);
    grid.to_real(&dno_apply_hat(params, grid, &eh, &ph, order))
}
