//! Pseudo-spectral integration of the free-surface system
//!
//! ```text
//! eta_t = G(eta) psi
//! psi_t = -g eta - psi_x^2/2 + (eta_x psi_x + G(eta) psi)^2 / (2 (1 + eta_x^2))
//!         + kappa d/dx( eta_x / sqrt(1 + eta_x^2) )
//! ```
//!
//! The linear part `eta_t = G0 psi`, `psi_t = -(g + kappa k^2) eta` is
//! integrated exactly per mode and the rest by the Lawson (integrating
//! factor) fourth-order Runge-Kutta method.

use serde::{Deserialize, Serialize};

use super::dno::{dno_terms, MAX_ORDER};
use super::grid::{Grid, C};
use crate::error::{Error, Result};
use crate::spectra::{g0_symbol, omega, PhysicalParams};
use crate::transforms::{mixed_norm, to_complex, FourierField};

/// Solver settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub m: usize,
    pub dno_order: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Retained fraction of the spectrum; only 2/3 is supported.
    pub dealias: f64,
    /// Exponent of the optional exponential filter `exp(-36 (k/kmax)^p)`.
    pub filter_strength: Option<f64>,
    pub record_every: usize,
    pub sobolev_s: f64,
    /// Halt when the mixed norm exceeds this value.
    pub ceiling: f64,
    /// Number of `|u_k|` columns, `k = 1..=modes_out`.
    pub modes_out: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            m: 256,
            dno_order: 3,
            dt: 0.01,
            t_final: 1.0,
            dealias: 2.0 / 3.0,
            filter_strength: None,
            record_every: 10,
            sobolev_s: 8.0,
            ceiling: 1e3,
            modes_out: 4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 16 || !self.m.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("M must be a power of two >= 16, got {}", self.m)));
        }
        if !(1..=MAX_ORDER).contains(&self.dno_order) {
            return Err(Error::InvalidParameter(format!("dno_order must be in 1..=4, got {}", self.dno_order)));
        }
        if !(self.dt > 0.0) || !(self.t_final > 0.0) {
            return Err(Error::InvalidParameter("dt and T must be > 0".into()));
        }
        if (self.dealias - 2.0 / 3.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("only the 2/3 dealiasing rule is supported, got {}", self.dealias)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Real samples of `(eta, psi)` on a uniform grid over `[0, 2pi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    pub eta: Vec<f64>,
    pub psi: Vec<f64>,
}

impl WaveState {
    pub fn zeros(m: usize) -> Self {
        Self { eta: vec![0.0; m], psi: vec![0.0; m] }
    }

    /// Check that both fields have length `m` and zero mean.
    pub fn validate(&self, m: usize) -> Result<()> {
        if self.eta.len() != m || self.psi.len() != m {
            return Err(Error::InvalidParameter(format!("state must have {m} samples")));
        }
        let scale = self.eta.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let mean = self.eta.iter().sum::<f64>() / m as f64;
        if mean.abs() > 1e-13 * scale {
            return Err(Error::InvalidParameter(format!("eta must have zero mean, got {mean:e}")));
        }
        Ok(())
    }
}

/// Spectral workspace for one parameter set and grid.
#[derive(Clone, Debug)]
pub struct Solver {
    pub params: PhysicalParams,
    pub grid: Grid,
    pub order: usize,
    g0: Vec<f64>,
    stiff: Vec<f64>,
    om: Vec<f64>,
    filter: Option<Vec<f64>>,
}

/// State in Fourier, both fields dealiased and mean free.
#[derive(Clone, Debug, PartialEq)]
pub struct HatState {
    pub eta: Vec<C>,
    pub psi: Vec<C>,
}

impl Solver {
    pub fn new(params: PhysicalParams, m: usize, order: usize, filter_strength: Option<f64>) -> Result<Self> {
        let grid = Grid::new(m)?;
        let k = grid.wavenumbers().to_vec();
        let g0 = k.iter().map(|&k| g0_symbol(&params, k)).collect();
        let stiff = k.iter().map(|&k| params.g + params.kappa * k * k).collect();
        let om = k.iter().map(|&k| omega(&params, k)).collect();
        let kmax = grid.kmax() as f64;
        let filter = filter_strength.map(|p| k.iter().map(|&k| (-36.0 * (k.abs() / kmax).powf(p)).exp()).collect());
        Ok(Self { params, grid, order: order.clamp(1, MAX_ORDER), g0, stiff, om, filter })
    }

    pub fn from_config(params: PhysicalParams, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Self::new(params, cfg.m, cfg.dno_order, cfg.filter_strength)
    }

    pub fn to_hat(&self, s: &WaveState) -> HatState {
        let mut eta = self.grid.project(&s.eta);
        let mut psi = self.grid.project(&s.psi);
        eta[0] = C::new(0.0, 0.0);
        psi[0] = C::new(0.0, 0.0);
        HatState { eta, psi }
    }

    pub fn to_state(&self, h: &HatState) -> WaveState {
        WaveState { eta: self.grid.to_real(&h.eta), psi: self.grid.to_real(&h.psi) }
    }

    /// `G(eta) psi` on the grid.
    pub fn dno(&self, s: &WaveState) -> Vec<f64> {
        let h = self.to_hat(s);
        self.grid.to_real(&sum(&dno_terms(&self.params, &self.grid, &h.eta, &h.psi, self.order)))
    }

    /// Nonlinear part of the right-hand side in Fourier.
    pub fn nonlinear(&self, h: &HatState) -> HatState {
        let grid = &self.grid;
        let terms = dno_terms(&self.params, grid, &h.eta, &h.psi, self.order);
        let mut n_eta = sum(&terms[1..]);
        let g_full = grid.to_real(&sum(&terms));
        let eta_x = grid.to_real(&grid.dx(&h.eta));
        let psi_x = grid.to_real(&grid.dx(&h.psi));
        let ex_px = grid.product(&eta_x, &psi_x);
        let psi_x2 = grid.product(&psi_x, &psi_x);
        let mut bern = vec![0.0; grid.m()];
        let mut cap = vec![0.0; grid.m()];
        for i in 0..grid.m() {
            let q = ex_px[i] + g_full[i];
            let e2 = eta_x[i] * eta_x[i];
            let r = (1.0 + e2).sqrt();
            bern[i] = -0.5 * psi_x2[i] + 0.5 * q * q / (1.0 + e2);
            // eta_x / sqrt(1 + eta_x^2) - eta_x, written without cancellation
            cap[i] = -eta_x[i] * e2 / (r * (1.0 + r));
        }
        let mut n_psi = grid.project(&bern);
        let cap_x = grid.dx(&grid.project(&cap));
        for (a, b) in n_psi.iter_mut().zip(&cap_x) {
            *a += b * self.params.kappa;
        }
        n_eta[0] = C::new(0.0, 0.0);
        n_psi[0] = C::new(0.0, 0.0);
        grid.dealias(&mut n_eta);
        grid.dealias(&mut n_psi);
        HatState { eta: n_eta, psi: n_psi }
    }

    /// Full right-hand side `(eta_t, psi_t)` on the grid.
    pub fn rhs(&self, s: &WaveState) -> WaveState {
        let h = self.to_hat(s);
        let n = self.nonlinear(&h);
        let mut eta_t = n.eta;
        let mut psi_t = n.psi;
        for i in 0..self.grid.m() {
            eta_t[i] += self.g0[i] * h.psi[i];
            psi_t[i] -= self.stiff[i] * h.eta[i];
        }
        WaveState { eta: self.grid.to_real(&eta_t), psi: self.grid.to_real(&psi_t) }
    }

    /// Exact linear propagator over time `tau`.
    pub fn propagate(&self, h: &HatState, tau: f64) -> HatState {
        let mut out = h.clone();
        for i in 0..self.grid.m() {
            let w = self.om[i];
            if w == 0.0 {
                continue;
            }
            let (s, c) = (w * tau).sin_cos();
            out.eta[i] = c * h.eta[i] + (self.g0[i] / w) * s * h.psi[i];
            out.psi[i] = c * h.psi[i] - (self.stiff[i] / w) * s * h.eta[i];
        }
        out
    }

    /// One Lawson RK4 step.
    pub fn step(&self, u: &HatState, dt: f64) -> HatState {
        let half = |h: &HatState| self.propagate(h, 0.5 * dt);
        let axpy = |a: &HatState, s: f64, b: &HatState| HatState {
            eta: a.eta.iter().zip(&b.eta).map(|(x, y)| x + y * s).collect(),
            psi: a.psi.iter().zip(&b.psi).map(|(x, y)| x + y * s).collect(),
        };
        let k1 = self.nonlinear(u);
        let eu = half(u);
        let k2 = self.nonlinear(&half(&axpy(u, 0.5 * dt, &k1)));
        let k3 = self.nonlinear(&axpy(&eu, 0.5 * dt, &k2));
        let k4 = self.nonlinear(&axpy(&half(&eu), dt, &half(&k3)));
        // E(dt) u + dt/6 (E(dt) k1 + 2 E(dt/2)(k2 + k3) + k4)
        let mid = half(&axpy(&half(&k1), 2.0, &axpy(&k2, 1.0, &k3)));
        let mut next = half(&eu);
        for i in 0..self.grid.m() {
            next.eta[i] += dt / 6.0 * (mid.eta[i] + k4.eta[i]);
            next.psi[i] += dt / 6.0 * (mid.psi[i] + k4.psi[i]);
        }
        if let Some(f) = &self.filter {
            for i in 0..self.grid.m() {
                next.eta[i] *= f[i];
                next.psi[i] *= f[i];
            }
        }
        next
    }

    /// `1/2 int psi G psi + g/2 int eta^2 + kappa int (sqrt(1 + eta_x^2) - 1)`.
    pub fn hamiltonian(&self, s: &WaveState) -> f64 {
        let grid = &self.grid;
        let h = self.to_hat(s);
        let g = grid.to_real(&sum(&dno_terms(&self.params, grid, &h.eta, &h.psi, self.order)));
        let psi = grid.to_real(&h.psi);
        let eta = grid.to_real(&h.eta);
        let eta_x = grid.to_real(&grid.dx(&h.eta));
        let surf: Vec<f64> = eta_x.iter().map(|e| e * e / ((1.0 + e * e).sqrt() + 1.0)).collect();
        let ones = vec![1.0; grid.m()];
        0.5 * grid.integral(&psi, &g) + 0.5 * self.params.g * grid.integral(&eta, &eta)
            + self.params.kappa * grid.integral(&surf, &ones)
    }

    /// Quadratic part `1/2 int psi G0 psi + g/2 int eta^2 + kappa/2 int eta_x^2`.
    pub fn hamiltonian_quadratic(&self, s: &WaveState) -> f64 {
        let grid = &self.grid;
        let h = self.to_hat(s);
        let g0psi = grid.to_real(&grid.apply(&h.psi, |k| g0_symbol(&self.params, k)));
        let psi = grid.to_real(&h.psi);
        let eta = grid.to_real(&h.eta);
        let eta_x = grid.to_real(&grid.dx(&h.eta));
        0.5 * grid.integral(&psi, &g0psi)
            + 0.5 * self.params.g * grid.integral(&eta, &eta)
            + 0.5 * self.params.kappa * grid.integral(&eta_x, &eta_x)
    }

    /// `int eta_x psi dx`.
    pub fn momentum(&self, s: &WaveState) -> f64 {
        let h = self.to_hat(s);
        let eta_x = self.grid.to_real(&self.grid.dx(&h.eta));
        self.grid.integral(&eta_x, &s.psi)
    }

    /// `int eta dx`.
    pub fn mass(&self, s: &WaveState) -> f64 {
        self.grid.mean(&s.eta) * 2.0 * std::f64::consts::PI
    }

    /// Unit-normalized fields of a Fourier state.
    pub fn fields(&self, h: &HatState) -> (FourierField, FourierField) {
        let n = self.grid.kmax();
        (FourierField::from_internal(&self.grid, &h.eta, n), FourierField::from_internal(&self.grid, &h.psi, n))
    }

    /// `||eta||_{H^{s+1/4}} + ||psi||_{H^{s-1/4}}`.
    pub fn mixed_norm_hat(&self, h: &HatState, s: f64) -> f64 {
        let (e, p) = self.fields(h);
        mixed_norm(&e, &p, s)
    }

    /// `(B, V)` on the grid: `B = (G psi + eta_x psi_x)/(1 + eta_x^2)`, `V = psi_x - eta_x B`.
    pub fn velocity_trace(&self, s: &WaveState) -> (Vec<f64>, Vec<f64>) {
        let grid = &self.grid;
        let h = self.to_hat(s);
        let g = grid.to_real(&sum(&dno_terms(&self.params, grid, &h.eta, &h.psi, self.order)));
        let eta_x = grid.to_real(&grid.dx(&h.eta));
        let psi_x = grid.to_real(&grid.dx(&h.psi));
        let ex_px = grid.product(&eta_x, &psi_x);
        let b: Vec<f64> = (0..grid.m()).map(|i| (g[i] + ex_px[i]) / (1.0 + eta_x[i] * eta_x[i])).collect();
        let ex_b = grid.product(&eta_x, &b);
        let v = (0..grid.m()).map(|i| psi_x[i] - ex_b[i]).collect();
        (b, v)
    }
}

fn sum(terms: &[Vec<C>]) -> Vec<C> {
    let m = terms.first().map_or(0, Vec::len);
    let mut out = vec![C::new(0.0, 0.0); m];
    for t in terms {
        for (a, b) in out.iter_mut().zip(t) {
            *a += b;
        }
    }
    out
}

/// One recorded sample of the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WwRecord {
    pub t: f64,
    pub hamiltonian: f64,
    pub mass: f64,
    pub momentum: f64,
    pub mixed_norm: f64,
    pub mode_amp: Vec<f64>,
}

/// Why the run stopped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WwStatus {
    Completed,
    Ceiling { t: f64, norm: f64 },
    NonFinite { t: f64 },
}

/// Result of [`integrate_ww`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WwTrajectory {
    pub records: Vec<WwRecord>,
    pub status: WwStatus,
    pub final_state: WaveState,
}

/// Record of the current state.
pub fn record(solver: &Solver, h: &HatState, t: f64, cfg: &SolverConfig) -> WwRecord {
    let s = solver.to_state(h);
    let (e, p) = solver.fields(h);
    let u = to_complex(&solver.params, &e, &p);
    WwRecord {
        t,
        hamiltonian: solver.hamiltonian(&s),
        mass: solver.mass(&s),
        momentum: solver.momentum(&s),
        mixed_norm: mixed_norm(&e, &p, cfg.sobolev_s),
        mode_amp: (1..=cfg.modes_out as i64).map(|k| u.get(k).norm()).collect(),
    }
}

/// Integrate from `state0` to `cfg.t_final`, with a blow-up guard on the mixed norm.
pub fn integrate_ww(params: &PhysicalParams, state0: &WaveState, cfg: &SolverConfig) -> Result<WwTrajectory> {
    let solver = Solver::from_config(*params, cfg)?;
    state0.validate(cfg.m)?;
    let steps = (cfg.t_final / cfg.dt).round().max(1.0) as usize;
    let dt = cfg.t_final / steps as f64;
    let mut h = solver.to_hat(state0);
    let mut records = vec![record(&solver, &h, 0.0, cfg)];
    let mut status = WwStatus::Completed;
    for step in 0..steps {
        h = solver.step(&h, dt);
        let t = (step + 1) as f64 * dt;
        let norm = solver.mixed_norm_hat(&h, cfg.sobolev_s);
        if !norm.is_finite() {
            status = WwStatus::NonFinite { t };
        } else if norm > cfg.ceiling {
            status = WwStatus::Ceiling { t, norm };
        }
        if status != WwStatus::Completed || (step + 1) % cfg.record_every == 0 || step + 1 == steps {
            records.push(record(&solver, &h, t, cfg));
        }
        if status != WwStatus::Completed {
            break;
        }
    }
    Ok(WwTrajectory { records, status, final_state: solver.to_state(&h) })
}
