//! Uniform periodic grid on `[0, 2pi)` with FFT workspaces and 2/3-rule dealiasing.
//!
//! Internally a real field `f` is stored by the coefficients `c_k` of
//! `f(x) = sum_k c_k e^{ikx}`, i.e. the raw forward FFT divided by `M`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub type C = Complex64;

/// FFT plans, wavenumbers and the dealiasing mask for one grid size.
#[derive(Clone)]
pub struct Grid {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Signed wavenumber per FFT slot, Nyquist slot set to 0.
    k: Vec<f64>,
    keep: Vec<bool>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid").field("m", &self.m).finish()
    }
}

impl Grid {
    /// Grid of `m` points, `m` a power of two and at least 16.
    pub fn new(m: usize) -> Result<Self> {
        if m < 16 || !m.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("grid size must be a power of two >= 16, got {m}")));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let half = (m / 2) as i64;
        let k: Vec<f64> = (0..m as i64)
            .map(|i| {
                let w = if i < half { i } else { i - m as i64 };
                if w == -half {
                    0.0
                } else {
                    w as f64
                }
            })
            .collect();
        let cut = (m / 3) as i64;
        let keep = (0..m as i64)
            .map(|i| {
                let w = if i < half { i } else { i - m as i64 };
                w.abs() <= cut
            })
            .collect();
        Ok(Self { m, fwd, inv, k, keep })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest retained wavenumber `M/3`.
    pub fn kmax(&self) -> usize {
        self.m / 3
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn x(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * i as f64 / self.m as f64
    }

    /// FFT slot of wavenumber `n`, `|n| < M/2`.
    pub fn slot(&self, n: i64) -> usize {
        n.rem_euclid(self.m as i64) as usize
    }

    pub fn to_hat(&self, f: &[f64]) -> Vec<C> {
        let mut buf: Vec<C> = f.iter().map(|&v| C::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        let s = 1.0 / self.m as f64;
        buf.iter_mut().for_each(|v| *v *= s);
        buf
    }

    pub fn to_real(&self, h: &[C]) -> Vec<f64> {
        let mut buf = h.to_vec();
        self.inv.process(&mut buf);
        buf.iter().map(|v| v.re).collect()
    }

    /// Zero every coefficient with `|k| > M/3`.
    pub fn dealias(&self, h: &mut [C]) {
        for (v, &keep) in h.iter_mut().zip(&self.keep) {
            if !keep {
                *v = C::new(0.0, 0.0);
            }
        }
    }

    /// Apply a real Fourier symbol `s(k)`.
    pub fn apply(&self, h: &[C], s: impl Fn(f64) -> f64) -> Vec<C> {
        h.iter().zip(&self.k).map(|(v, &k)| v * s(k)).collect()
    }

    /// `d/dx` in Fourier.
    pub fn dx(&self, h: &[C]) -> Vec<C> {
        h.iter().zip(&self.k).map(|(v, &k)| v * C::new(0.0, k)).collect()
    }

    /// Dealiased transform of a grid function.
    pub fn project(&self, f: &[f64]) -> Vec<C> {
        let mut h = self.to_hat(f);
        self.dealias(&mut h);
        h
    }

    /// Dealiased pointwise product, on the grid.
    pub fn product(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.to_real(&self.project(&p))
    }

    /// `int_0^{2pi} f g dx` by the trapezoid rule.
    pub fn integral(&self, f: &[f64], g: &[f64]) -> f64 {
        let s: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum();
        s * 2.0 * std::f64::consts::PI / self.m as f64
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() / self.m as f64
    }
}
