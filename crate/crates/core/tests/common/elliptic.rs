//! Laplace problem on the strip `-h < y < eta(x)`, mapped to the rectangle
//! `s = (y + h)/(eta + h)` in `[0, 1]`.
//!
//! Fourier in `x`, second-order finite differences in `s`. Solved by defect
//! correction with the flat-strip operator as preconditioner.

use num_complex::Complex64 as C;
use wilton_core::waterwaves::Grid;

pub struct Surface {
    pub h: f64,
    pub eta: Vec<f64>,
    pub eta_x: Vec<f64>,
    pub eta_xx: Vec<f64>,
    pub psi: Vec<f64>,
    pub psi_x: Vec<f64>,
}

/// `G(eta) psi` on the grid from an `ns`-interval discretization in `s`.
pub fn dno_fd(grid: &Grid, surf: &Surface, ns: usize) -> Vec<f64> {
    let m = grid.m();
    let ds = 1.0 / ns as f64;
    let d: Vec<f64> = surf.eta.iter().map(|e| e + surf.h).collect();
    let alpha: Vec<f64> = (0..m).map(|i| surf.eta_x[i] / d[i]).collect();
    let curv: Vec<f64> = (0..m).map(|i| surf.eta_xx[i] / d[i]).collect();

    let mut phi: Vec<Vec<f64>> = vec![surf.psi.clone(); ns + 1];
    let k = grid.wavenumbers().to_vec();
    for _ in 0..400 {
        // residual at levels 0..ns-1
        let mut res = vec![vec![0.0; m]; ns];
        let mut worst = 0.0_f64;
        for i in 0..ns {
            let s = i as f64 * ds;
            let (up, dn) = (&phi[i + 1], if i == 0 { &phi[1] } else { &phi[i - 1] });
            let ph_s: Vec<f64> = (0..m).map(|j| (up[j] - dn[j]) / (2.0 * ds)).collect();
            let ph_ss: Vec<f64> = (0..m).map(|j| (up[j] - 2.0 * phi[i][j] + dn[j]) / (ds * ds)).collect();
            let ph_xx = grid.to_real(&grid.apply(&grid.to_hat(&phi[i]), |k| -k * k));
            let ph_xs = grid.to_real(&grid.dx(&grid.to_hat(&ph_s)));
            for j in 0..m {
                let a = alpha[j];
                let r = ph_xx[j] - 2.0 * s * a * ph_xs[j]
                    + (s * s * a * a + 1.0 / (d[j] * d[j])) * ph_ss[j]
                    + s * (2.0 * a * a - curv[j]) * ph_s[j];
                res[i][j] = r;
                worst = worst.max(r.abs());
            }
        }
        if worst < 1e-11 {
            break;
        }
        let corr = flat_solve(grid, &k, &res, surf.h, ds);
        for i in 0..ns {
            for j in 0..m {
                phi[i][j] -= corr[i][j];
            }
        }
    }

    let (a, b, c) = (&phi[ns], &phi[ns - 1], &phi[ns - 2]);
    (0..m)
        .map(|j| {
            let phi_s = (3.0 * a[j] - 4.0 * b[j] + c[j]) / (2.0 * ds);
            let ex = surf.eta_x[j];
            phi_s * (1.0 + ex * ex) / d[j] - ex * surf.psi_x[j]
        })
        .collect()
}

/// Solve `delta_xx + delta_ss / h^2 = r` with `delta = 0` at `s = 1` and a
/// Neumann ghost point at `s = 0`, one tridiagonal system per Fourier mode.
fn flat_solve(grid: &Grid, k: &[f64], r: &[Vec<f64>], h: f64, ds: f64) -> Vec<Vec<f64>> {
    let ns = r.len();
    let m = grid.m();
    let hats: Vec<Vec<C>> = r.iter().map(|row| grid.to_hat(row)).collect();
    let mut out_hat = vec![vec![C::new(0.0, 0.0); m]; ns];
    let off = 1.0 / (h * h * ds * ds);
    for slot in 0..m {
        let diag = -2.0 * off - k[slot] * k[slot];
        // rows i = 0..ns-1, sub/super diagonals; row 0 has super = 2*off
        let mut cp = vec![0.0; ns];
        let mut dp = vec![C::new(0.0, 0.0); ns];
        for i in 0..ns {
            let lower = if i == 0 { 0.0 } else { off };
            let upper = if i == 0 { 2.0 * off } else if i + 1 < ns { off } else { 0.0 };
            let denom = diag - lower * if i == 0 { 0.0 } else { cp[i - 1] };
            cp[i] = upper / denom;
            let prev = if i == 0 { C::new(0.0, 0.0) } else { dp[i - 1] };
            dp[i] = (hats[i][slot] - prev * lower) / denom;
        }
        let mut x = C::new(0.0, 0.0);
        for i in (0..ns).rev() {
            x = dp[i] - if i + 1 < ns { cp[i] * x } else { 0.0 * x };
            out_hat[i][slot] = x;
        }
    }
    out_hat.iter().map(|h| grid.to_real(h)).collect()
}

/// Richardson-extrapolated `G(eta) psi` from `ns` and `2 ns` intervals.
pub fn dno_oracle(grid: &Grid, surf: &Surface, ns: usize) -> Vec<f64> {
    let coarse = dno_fd(grid, surf, ns);
    let fine = dno_fd(grid, surf, 2 * ns);
    fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
}

/// `eta = a cos x`, `psi = cos x`, depth `h`.
pub fn cosine_fixture(grid: &Grid, a: f64, h: f64) -> Surface {
    let xs: Vec<f64> = (0..grid.m()).map(|i| grid.x(i)).collect();
    Surface {
        h,
        eta: xs.iter().map(|x| a * x.cos()).collect(),
        eta_x: xs.iter().map(|x| -a * x.sin()).collect(),
        eta_xx: xs.iter().map(|x| -a * x.cos()).collect(),
        psi: xs.iter().map(|x| x.cos()).collect(),
        psi_x: xs.iter().map(|x| -x.sin()).collect(),
    }
}
