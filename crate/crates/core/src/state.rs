//! Complex Fourier coefficients `z_j`, `0 < |j| <= N`, of the normal-form variable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::resonance::{Sign, SignedMode};

/// Coefficients `z_j` for `0 < |j| <= n`. Entries at `j` and `-j` are independent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralState {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralState {
    pub fn zeros(n: usize) -> Self {
        Self { n, coeffs: vec![Complex64::new(0.0, 0.0); 2 * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, j: i64) -> Option<usize> {
        let n = self.n as i64;
        if j == 0 || j.abs() > n {
            None
        } else if j < 0 {
            Some((j + n) as usize)
        } else {
            Some((j + n - 1) as usize)
        }
    }

    /// `z_j`, zero outside the stored range.
    pub fn get(&self, j: i64) -> Complex64 {
        self.index(j).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Set `z_j`. Panics if `j` is zero or out of range.
    pub fn set(&mut self, j: i64, v: Complex64) {
        let i = self.index(j).expect("mode out of range");
        self.coeffs[i] = v;
    }

    pub fn add(&mut self, j: i64, v: Complex64) {
        let i = self.index(j).expect("mode out of range");
        self.coeffs[i] += v;
    }

    /// `z_j` for `+`, `conj(z_j)` for `-`.
    pub fn signed(&self, m: SignedMode) -> Complex64 {
        let z = self.get(m.j);
        match m.sigma {
            Sign::Plus => z,
            Sign::Minus => z.conj(),
        }
    }

    /// Modes in increasing order, `-n..=-1, 1..=n`.
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.n as i64;
        (-n..=n).filter(|&j| j != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.modes().zip(self.coeffs.iter().copied())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// `(sum_j |j|^{2s} |z_j|^2)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.iter().map(|(j, z)| (j.abs() as f64).powf(2.0 * s) * z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sum_j j |z_j|^2`.
    pub fn momentum(&self) -> f64 {
        self.iter().map(|(j, z)| j as f64 * z.norm_sqr()).sum()
    }
}
