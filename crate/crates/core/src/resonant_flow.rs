//! Truncated resonant normal-form dynamics
//! `dz/dt = i Omega(D) z + i d_{conj z} H3_res(z_L)` with `z_H` evolving linearly.
//!
//! The state is advanced in the rotating frame `w = e^{-i Omega t} z`, so the
//! linear part is exact and modes outside the low block never change in `w`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::birkhoff::{gradient_zbar, hamiltonian_h2, CubicHamiltonian};
use crate::error::{Error, Result};
use crate::resonance::resonance_cutoff;
use crate::spectra::{omega, PhysicalParams};
use crate::state::SpectralState;

/// Time stepping scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ImplicitMidpoint,
    Rk4RotatingFrame,
}

/// Integration settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    pub record_every: usize,
    pub sobolev_s: f64,
    /// Low-mode cutoff; `None` uses the resonance cutoff.
    pub cutoff: Option<f64>,
    /// Integrate the negated vector field.
    pub backward: bool,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            t_final: 1.0,
            scheme: Scheme::ImplicitMidpoint,
            record_every: 1,
            sobolev_s: 1.0,
            cutoff: None,
            backward: false,
            fixed_point_tol: 1e-13,
            fixed_point_max_iter: 50,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!("T must be > 0, got {}", self.t_final)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// One recorded time with the rotating-frame state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub t: f64,
    pub w: SpectralState,
}

/// Recorded trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: PhysicalParams,
    pub cutoff: f64,
    /// `+1` forward, `-1` for the negated field.
    pub direction: f64,
    pub records: Vec<FlowRecord>,
}

impl Trajectory {
    /// Physical state `z = e^{i direction Omega t} w` of a record.
    pub fn physical(&self, idx: usize) -> SpectralState {
        let r = &self.records[idx];
        rotate(&self.params, &r.w, self.direction * r.t)
    }
}

fn rotate(params: &PhysicalParams, w: &SpectralState, t: f64) -> SpectralState {
    let mut z = w.clone();
    for (j, v) in w.iter() {
        z.set(j, v * Complex64::from_polar(1.0, omega(params, j as f64) * t));
    }
    z
}

/// Split into modes `|j| <= cutoff` and the rest.
pub fn split_low_high(z: &SpectralState, cutoff: f64) -> (SpectralState, SpectralState) {
    let mut low = SpectralState::zeros(z.n());
    let mut high = SpectralState::zeros(z.n());
    for (j, v) in z.iter() {
        if (j.abs() as f64) <= cutoff {
            low.set(j, v);
        } else {
            high.set(j, v);
        }
    }
    (low, high)
}

struct Field<'a> {
    h: &'a CubicHamiltonian,
    low: Vec<bool>,
    omegas: Vec<f64>,
    direction: f64,
}

impl Field<'_> {
    /// Rotating-frame nonlinearity `e^{-i d Omega t} i d grad(e^{i d Omega t} w)` on low modes.
    fn eval(&self, t: f64, w: &SpectralState) -> SpectralState {
        let mut z = SpectralState::zeros(w.n());
        for (idx, (j, v)) in w.iter().enumerate() {
            if self.low[idx] {
                z.set(j, v * Complex64::from_polar(1.0, self.direction * self.omegas[idx] * t));
            }
        }
        let g = gradient_zbar(self.h, &z);
        let mut out = SpectralState::zeros(w.n());
        let i_d = Complex64::new(0.0, self.direction);
        for (idx, (j, v)) in g.iter().enumerate() {
            if self.low[idx] {
                out.set(j, i_d * v * Complex64::from_polar(1.0, -self.direction * self.omegas[idx] * t));
            }
        }
        out
    }
}

fn axpy(w: &SpectralState, a: f64, k: &SpectralState) -> SpectralState {
    let mut out = w.clone();
    for (o, kv) in out.as_mut_slice().iter_mut().zip(k.as_slice()) {
        *o += kv * a;
    }
    out
}

fn sup(w: &SpectralState) -> f64 {
    w.as_slice().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Integrate the resonant system from `z0` up to `cfg.t_final`.
pub fn integrate_resonant(
    params: &PhysicalParams,
    h: &CubicHamiltonian,
    z0: &SpectralState,
    cfg: &FlowConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let cutoff = cfg.cutoff.unwrap_or_else(|| resonance_cutoff(params));
    let direction = if cfg.backward { -1.0 } else { 1.0 };
    let low: Vec<bool> = z0.modes().map(|j| (j.abs() as f64) <= cutoff).collect();
    let omegas: Vec<f64> = z0.modes().map(|j| omega(params, j as f64)).collect();
    let field = Field { h, low, omegas, direction };
    let steps = (cfg.t_final / cfg.dt).round().max(1.0) as usize;
    let dt = cfg.t_final / steps as f64;
    let mut w = z0.clone();
    let mut records = vec![FlowRecord { t: 0.0, w: w.clone() }];
    for step in 0..steps {
        let t = step as f64 * dt;
        w = match cfg.scheme {
            Scheme::Rk4RotatingFrame => {
                let k1 = field.eval(t, &w);
                let k2 = field.eval(t + 0.5 * dt, &axpy(&w, 0.5 * dt, &k1));
                let k3 = field.eval(t + 0.5 * dt, &axpy(&w, 0.5 * dt, &k2));
                let k4 = field.eval(t + dt, &axpy(&w, dt, &k3));
                let mut out = w.clone();
                for (i, o) in out.as_mut_slice().iter_mut().enumerate() {
                    let inc = k1.as_slice()[i] + 2.0 * k2.as_slice()[i] + 2.0 * k3.as_slice()[i] + k4.as_slice()[i];
                    if inc != Complex64::new(0.0, 0.0) {
                        *o += inc * (dt / 6.0);
                    }
                }
                out
            }
            Scheme::ImplicitMidpoint => {
                let tm = t + 0.5 * dt;
                let mut next = axpy(&w, dt, &field.eval(t, &w));
                let mut converged = false;
                for _ in 0..cfg.fixed_point_max_iter {
                    let mut mid = w.clone();
                    for (m, n) in mid.as_mut_slice().iter_mut().zip(next.as_slice()) {
                        *m = 0.5 * (*m + n);
                    }
                    let f = field.eval(tm, &mid);
                    let mut cand = w.clone();
                    for (c, fv) in cand.as_mut_slice().iter_mut().zip(f.as_slice()) {
                        if *fv != Complex64::new(0.0, 0.0) {
                            *c += fv * dt;
                        }
                    }
                    let delta = cand
                        .as_slice()
                        .iter()
                        .zip(next.as_slice())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    next = cand;
                    if delta <= cfg.fixed_point_tol * sup(&next) {
                        converged = true;
                        break;
                    }
                }
                if !converged {
                    return Err(Error::StepRejected { t, iterations: cfg.fixed_point_max_iter });
                }
                next
            }
        };
        if (step + 1) % cfg.record_every == 0 || step + 1 == steps {
            records.push(FlowRecord { t: (step + 1) as f64 * dt, w: w.clone() });
        }
    }
    Ok(Trajectory { params: *params, cutoff, direction, records })
}

/// Per-record diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowDiagnostics {
    pub t: f64,
    pub h2: f64,
    pub h3: f64,
    pub momentum: f64,
    pub sobolev_s_norm: f64,
    pub equiv_norm: f64,
}

/// `H2(z_L)`, `H3(z_L)`, `sum j |z_j|^2`, `||z||_{H^s}` and
/// `(H2(z_L) + ||z_H||^2_{H^s})^{1/2}` along the trajectory.
pub fn flow_diagnostics(traj: &Trajectory, h: &CubicHamiltonian, s: f64) -> Vec<FlowDiagnostics> {
    (0..traj.records.len())
        .map(|i| {
            let r = &traj.records[i];
            // Moduli are frame independent, so everything but H3 uses w directly.
            let (w_low, w_high) = split_low_high(&r.w, traj.cutoff);
            let z_low = rotate(&traj.params, &w_low, traj.direction * r.t);
            let h2 = hamiltonian_h2(&traj.params, &w_low);
            let hs = w_high.sobolev_norm(s);
            FlowDiagnostics {
                t: r.t,
                h2,
                h3: h.evaluate(&z_low).re,
                momentum: r.w.momentum(),
                sobolev_s_norm: r.w.sobolev_norm(s),
                equiv_norm: (h2 + hs * hs).sqrt(),
            }
        })
        .collect()
}

/// Constant `C(s)` with `||z_L(t)||_{H^s} <= C(s) ||z_L(0)||_{H^s}` whenever `H2(z_L)` is conserved:
/// `C(s)^2 = max |j|^{2s}/Omega(j) * max Omega(j)/|j|^{2s}` over `0 < |j| <= min(cutoff, n)`.
pub fn norm_equivalence_constant(params: &PhysicalParams, cutoff: f64, n: usize, s: f64) -> f64 {
    let top = (cutoff.floor() as usize).min(n).max(1);
    let mut a = 0.0_f64;
    let mut b = 0.0_f64;
    for j in 1..=top {
        let x = j as f64;
        let ratio = x.powf(2.0 * s) / omega(params, x);
        a = a.max(ratio);
        b = b.max(1.0 / ratio);
    }
    (a * b).sqrt()
}
