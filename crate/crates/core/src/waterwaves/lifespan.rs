//! Exit time from the ball of radius `threshold_factor * eps` and the fitted
//! exponent of `T(eps)` against `1/eps`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::C;
use super::solver::{Solver, WaveState};
use crate::error::{Error, Result};
use crate::spectra::{lambda_mult, PhysicalParams};
use crate::transforms::{complex_to_wave, mixed_norm, FourierField};

/// Settings of the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifespanConfig {
    pub m: usize,
    pub dno_order: usize,
    pub dt: f64,
    pub t_max: f64,
    pub sobolev_s: f64,
    pub threshold_factor: f64,
}

impl Default for LifespanConfig {
    fn default() -> Self {
        Self { m: 64, dno_order: 3, dt: 0.02, t_max: 2500.0, sobolev_s: 8.0, threshold_factor: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifespanRow {
    pub epsilon: f64,
    /// Exit time, or `t_max` when censored.
    pub t_eps: f64,
    pub censored: bool,
    pub max_ratio: f64,
}

/// Least-squares fit of `log T = c + p log(1/eps)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifespanResult {
    pub rows: Vec<LifespanRow>,
    pub fit: Option<ExponentFit>,
    pub all_censored: bool,
}

impl LifespanResult {
    /// Fitted exponent at least `p_min`, or every run censored.
    pub fn consistent(&self, p_min: f64) -> bool {
        self.all_censored || self.fit.as_ref().is_some_and(|f| f.slope >= p_min)
    }
}

/// Seed with complex variable `u_n = i sqrt(2) a_n / Lambda(n)` on `n = 1, 2`,
/// `a = (1, 1/2)`, i.e. `eta = cos x + cos(2x)/2`, scaled to mixed norm `eps`.
pub fn seed_state(params: &PhysicalParams, solver: &Solver, eps: f64, s: f64) -> Result<WaveState> {
    let n = solver.grid.kmax();
    let mut u = FourierField::zeros(n);
    for (k, a) in [(1_i64, 1.0), (2, 0.5)] {
        u.set(k, C::new(0.0, std::f64::consts::SQRT_2 * a / lambda_mult(params, k)?));
    }
    let mut state = complex_to_wave(params, &solver.grid, &u);
    let eta = FourierField::from_samples(&solver.grid, &state.eta, n);
    let psi = FourierField::from_samples(&solver.grid, &state.psi, n);
    let norm = mixed_norm(&eta, &psi, s);
    let tail = eta.iter().chain(psi.iter()).filter(|(k, _)| k.unsigned_abs() as usize >= n).map(|(_, v)| v.norm()).fold(0.0, f64::max);
    if tail > 1e-12 * norm {
        return Err(Error::UnderResolved { ratio: tail / norm, cutoff: n });
    }
    let scale = eps / norm;
    state.eta.iter_mut().chain(state.psi.iter_mut()).for_each(|v| *v *= scale);
    Ok(state)
}

/// One run: first time the mixed norm exceeds `threshold_factor * eps`.
pub fn exit_time(params: &PhysicalParams, eps: f64, cfg: &LifespanConfig) -> Result<LifespanRow> {
    let solver = Solver::new(*params, cfg.m, cfg.dno_order, None)?;
    let state = seed_state(params, &solver, eps, cfg.sobolev_s)?;
    let steps = (cfg.t_max / cfg.dt).round().max(1.0) as usize;
    let dt = cfg.t_max / steps as f64;
    let limit = cfg.threshold_factor * eps;
    let mut h = solver.to_hat(&state);
    let mut max_ratio = solver.mixed_norm_hat(&h, cfg.sobolev_s) / eps;
    for step in 0..steps {
        h = solver.step(&h, dt);
        let norm = solver.mixed_norm_hat(&h, cfg.sobolev_s);
        max_ratio = max_ratio.max(norm / eps);
        if !norm.is_finite() || norm > limit {
            return Ok(LifespanRow { epsilon: eps, t_eps: (step + 1) as f64 * dt, censored: false, max_ratio });
        }
    }
    Ok(LifespanRow { epsilon: eps, t_eps: cfg.t_max, censored: true, max_ratio })
}

/// Slope of `log T` against `log(1/eps)` with its standard error.
pub fn fit_exponent(rows: &[LifespanRow]) -> Option<ExponentFit> {
    if rows.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.epsilon).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.t_eps.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let std_err = if rows.len() > 2 {
        let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(ExponentFit { slope, intercept, std_err })
}

/// Run every `eps` in parallel and fit the exponent.
pub fn lifespan_experiment(params: &PhysicalParams, epsilons: &[f64], cfg: &LifespanConfig) -> Result<LifespanResult> {
    if epsilons.is_empty() || epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidParameter("epsilons must be positive and non-empty".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("epsilons must be strictly decreasing".into()));
    }
    if !(cfg.threshold_factor > 1.0) || !(cfg.dt > 0.0) || !(cfg.t_max > 0.0) {
        return Err(Error::InvalidParameter("need threshold_factor > 1, dt > 0, t_max > 0".into()));
    }
    let rows = epsilons.par_iter().map(|&e| exit_time(params, e, cfg)).collect::<Result<Vec<_>>>()?;
    let all_censored = rows.iter().all(|r| r.censored);
    let fit = fit_exponent(&rows);
    Ok(LifespanResult { rows, fit, all_censored })
}
