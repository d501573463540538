//! Fourier conventions, Sobolev norms, the complex change of variables,
//! a Bony-Weyl paraproduct for function symbols and the good unknown.
//!
//! A [`FourierField`] stores `u_hat(n)`, `|n| <= N`, with
//! `u(x) = (2pi)^{-1/2} sum_n u_hat(n) e^{inx}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{lambda_symbol, PhysicalParams};
use crate::state::SpectralState;
use crate::waterwaves::grid::Grid;
use crate::waterwaves::solver::{Solver, WaveState};

type C = Complex64;

/// Fourier coefficients `u_hat(n)` for `|n| <= N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierField {
    n: usize,
    coeffs: Vec<C>,
}

impl FourierField {
    pub fn zeros(n: usize) -> Self {
        Self { n, coeffs: vec![C::new(0.0, 0.0); 2 * n + 1] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `u_hat(k)`, zero outside the stored range.
    pub fn get(&self, k: i64) -> C {
        if k.unsigned_abs() as usize > self.n {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.n as i64) as usize]
        }
    }

    /// Panics if `|k| > N`.
    pub fn set(&mut self, k: i64, v: C) {
        assert!(k.unsigned_abs() as usize <= self.n, "mode {k} out of range");
        self.coeffs[(k + self.n as i64) as usize] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C)> + '_ {
        let n = self.n as i64;
        self.coeffs.iter().enumerate().map(move |(i, &v)| (i as i64 - n, v))
    }

    pub fn map(&self, f: impl Fn(i64, C) -> C) -> Self {
        Self { n: self.n, coeffs: self.iter().map(|(k, v)| f(k, v)).collect() }
    }

    /// Truncate or zero-pad to `|n| <= m`.
    pub fn resize(&self, m: usize) -> Self {
        let mut out = Self::zeros(m);
        for k in -(m.min(self.n) as i64)..=m.min(self.n) as i64 {
            out.set(k, self.get(k));
        }
        out
    }

    /// Coefficients from a grid transform (`FFT/M`), modes `|k| <= n`.
    pub fn from_internal(grid: &Grid, hat: &[C], n: usize) -> Self {
        let n = n.min(grid.m() / 2 - 1);
        let scale = (2.0 * PI).sqrt();
        let mut out = Self::zeros(n);
        for k in -(n as i64)..=n as i64 {
            out.set(k, hat[grid.slot(k)] * scale);
        }
        out
    }

    /// Inverse of [`FourierField::from_internal`]; modes beyond the grid are dropped.
    pub fn to_internal(&self, grid: &Grid) -> Vec<C> {
        let scale = 1.0 / (2.0 * PI).sqrt();
        let lim = (grid.m() / 2) as i64;
        let mut out = vec![C::new(0.0, 0.0); grid.m()];
        for (k, v) in self.iter() {
            if k.abs() < lim {
                out[grid.slot(k)] = v * scale;
            }
        }
        out
    }

    pub fn from_samples(grid: &Grid, f: &[f64], n: usize) -> Self {
        Self::from_internal(grid, &grid.to_hat(f), n)
    }

    pub fn to_samples(&self, grid: &Grid) -> Vec<f64> {
        grid.to_real(&self.to_internal(grid))
    }

    /// Homogeneous norm `(sum_{n != 0} |n|^{2s} |u_hat(n)|^2)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|k| (k.abs() as f64).powf(2.0 * s), true)
    }

    /// Inhomogeneous norm with weight `<n>^{2s} = (1 + n^2)^s`.
    pub fn h_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|k| (1.0 + (k * k) as f64).powf(s), false)
    }

    fn weighted_norm(&self, w: impl Fn(i64) -> f64, skip_zero: bool) -> f64 {
        self.iter().filter(|(k, _)| !(skip_zero && *k == 0)).map(|(k, v)| w(k) * v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_n |u_hat(n) - conj u_hat(-n)|`.
    pub fn reality_defect(&self) -> f64 {
        self.iter().map(|(k, v)| (v - self.get(-k).conj()).norm()).fold(0.0, f64::max)
    }

    /// Translation `u(x) -> u(x + theta)`.
    pub fn translate(&self, theta: f64) -> Self {
        self.map(|k, v| v * C::from_polar(1.0, k as f64 * theta))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let n = self.n.max(other.n) as i64;
        (-n..=n).map(|k| (self.get(k) - other.get(k)).norm()).fold(0.0, f64::max)
    }

    /// Copy of the nonzero modes into a [`SpectralState`] of size `n`.
    pub fn to_spectral_state(&self, n: usize) -> SpectralState {
        let mut z = SpectralState::zeros(n);
        for j in z.modes().collect::<Vec<_>>() {
            z.set(j, self.get(j));
        }
        z
    }

    pub fn from_spectral_state(z: &SpectralState) -> Self {
        let mut out = Self::zeros(z.n());
        for (j, v) in z.iter() {
            out.set(j, v);
        }
        out
    }
}

/// `||eta||_{H^{s+1/4}} + ||psi||_{H^{s-1/4}}` (homogeneous in `psi`).
pub fn mixed_norm(eta: &FourierField, psi: &FourierField, s: f64) -> f64 {
    eta.h_norm(s + 0.25) + psi.sobolev_norm(s - 0.25)
}

/// `u = (Lambda psi + i Lambda^{-1} eta)/sqrt 2`, mode `0` dropped.
pub fn to_complex(params: &PhysicalParams, eta: &FourierField, psi: &FourierField) -> FourierField {
    let n = eta.n().max(psi.n());
    let s2 = std::f64::consts::SQRT_2;
    let mut u = FourierField::zeros(n);
    for k in (-(n as i64)..=n as i64).filter(|&k| k != 0) {
        let lam = lambda_symbol(params, k as f64);
        u.set(k, (psi.get(k) * lam + C::new(0.0, 1.0) * eta.get(k) / lam) / s2);
    }
    u
}

/// Inverse of [`to_complex`]: `eta = -(i/sqrt 2) Lambda (u - conj u)`,
/// `psi = (1/sqrt 2) Lambda^{-1} (u + conj u)`.
pub fn from_complex(params: &PhysicalParams, u: &FourierField) -> (FourierField, FourierField) {
    let n = u.n();
    let s2 = std::f64::consts::SQRT_2;
    let mut eta = FourierField::zeros(n);
    let mut psi = FourierField::zeros(n);
    for k in (-(n as i64)..=n as i64).filter(|&k| k != 0) {
        let lam = lambda_symbol(params, k as f64);
        let (a, b) = (u.get(k), u.get(-k).conj());
        eta.set(k, C::new(0.0, -1.0) / s2 * lam * (a - b));
        psi.set(k, (a + b) / (s2 * lam));
    }
    (eta, psi)
}

/// Cutoff parameters of the Bony-Weyl quantization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BonyWeylConfig {
    pub delta: f64,
}

impl Default for BonyWeylConfig {
    fn default() -> Self {
        Self { delta: 0.3 }
    }
}

impl BonyWeylConfig {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(Self { delta })
    }

    /// `chi(xi', xi) = theta(|xi'| / (delta <xi>))`.
    pub fn chi(&self, xi_p: f64, xi: f64) -> f64 {
        bump(xi_p.abs() / (self.delta * (1.0 + xi * xi).sqrt()))
    }
}

/// Smoothstep bump: 1 on `[0, 1/2]`, 0 on `[1, inf)`.
pub fn bump(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        let t = 2.0 * r - 1.0;
        1.0 - t * t * (3.0 - 2.0 * t)
    }
}

/// `(Op(a) u)_hat(k) = (2pi)^{-1/2} sum_j chi(k-j, (k+j)/2) a_hat(k-j) u_hat(j)`
/// for `|k| <= N`, where `N` is the size of `u`.
pub fn bony_weyl_apply(grid: &Grid, a: &[f64], u: &FourierField, cfg: &BonyWeylConfig) -> FourierField {
    let a_hat = FourierField::from_samples(grid, a, grid.m() / 2 - 1);
    let active: Vec<(i64, C)> = a_hat.iter().filter(|(_, v)| v.norm() > 0.0).collect();
    let n = u.n() as i64;
    let norm = 1.0 / (2.0 * PI).sqrt();
    let mut out = FourierField::zeros(u.n());
    for k in -n..=n {
        let mut acc = C::new(0.0, 0.0);
        for &(p, av) in &active {
            let j = k - p;
            if j.abs() > n {
                continue;
            }
            let w = cfg.chi(p as f64, 0.5 * (k + j) as f64);
            if w > 0.0 {
                acc += av * u.get(j) * w;
            }
        }
        out.set(k, acc * norm);
    }
    out
}

/// Good unknown `omega = psi - Op(B) eta` with `B` from the velocity trace.
pub fn good_unknown(solver: &Solver, state: &WaveState, cfg: &BonyWeylConfig) -> FourierField {
    let grid = &solver.grid;
    let n = grid.kmax();
    let (b, _) = solver.velocity_trace(state);
    let eta = FourierField::from_samples(grid, &state.eta, n);
    let psi = FourierField::from_samples(grid, &state.psi, n);
    let op = bony_weyl_apply(grid, &b, &eta, cfg);
    let mut omega = psi.map(|k, v| v - op.get(k));
    omega.set(0, C::new(0.0, 0.0));
    omega
}

/// Complex variable of a wave state, built on the good unknown.
pub fn wave_to_complex(solver: &Solver, state: &WaveState, cfg: &BonyWeylConfig) -> FourierField {
    let eta = FourierField::from_samples(&solver.grid, &state.eta, solver.grid.kmax());
    to_complex(&solver.params, &eta, &good_unknown(solver, state, cfg))
}

/// Wave state with complex variable `u` (no good-unknown correction).
pub fn complex_to_wave(params: &PhysicalParams, grid: &Grid, u: &FourierField) -> WaveState {
    let (eta, psi) = from_complex(params, u);
    WaveState { eta: eta.to_samples(grid), psi: psi.to_samples(grid) }
}
