//! Coefficient-level solution of the homological equation.
//!
//! A key `(sigma, sigma', eps, n, k, j)` with `eps n + sigma' k = sigma j`
//! carries the divisor `d = sigma Omega(j) - sigma' Omega(k) - eps Omega(n)`.
//! Non-resonant coefficients are divided as `g = r / (i d)`, resonant ones
//! are left in the resonant remainder and `g = 0` there.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::{ResonanceSet, Sign, SignedMode};
use crate::spectra::{omega, PhysicalParams};

/// Index tuple of the homological equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HomKey {
    pub sigma: i8,
    pub sigma_p: i8,
    pub eps: i8,
    pub n: i64,
    pub k: i64,
    pub j: i64,
}

impl HomKey {
    /// Validated constructor: signs in `{-1, 1}`, nonzero modes and `eps n + sigma' k = sigma j`.
    pub fn new(sigma: Sign, sigma_p: Sign, eps: Sign, n: i64, k: i64, j: i64) -> Result<Self> {
        if n == 0 || k == 0 || j == 0 {
            return Err(Error::ZeroMode);
        }
        let m = eps.value() * n + sigma_p.value() * k - sigma.value() * j;
        if m != 0 {
            return Err(Error::Momentum(m));
        }
        Ok(Self {
            sigma: sigma.value() as i8,
            sigma_p: sigma_p.value() as i8,
            eps: eps.value() as i8,
            n,
            k,
            j,
        })
    }

    /// `sigma Omega(j) - sigma' Omega(k) - eps Omega(n)`.
    pub fn divisor(&self, params: &PhysicalParams) -> f64 {
        self.sigma as f64 * omega(params, self.j as f64)
            - self.sigma_p as f64 * omega(params, self.k as f64)
            - self.eps as f64 * omega(params, self.n as f64)
    }

    /// The cubic triple `(sigma, j), (-sigma', k), (-eps, n)` whose phase is the divisor.
    pub fn triple(&self) -> [SignedMode; 3] {
        [
            SignedMode::of(self.sigma as i64, self.j),
            SignedMode::of(-(self.sigma_p as i64), self.k),
            SignedMode::of(-(self.eps as i64), self.n),
        ]
    }

    pub fn max_abs(&self) -> i64 {
        self.n.abs().max(self.k.abs()).max(self.j.abs())
    }
}

impl std::fmt::Display for HomKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(sigma={}, sigma'={}, eps={}, n={}, k={}, j={})",
            self.sigma, self.sigma_p, self.eps, self.n, self.k, self.j
        )
    }
}

/// Sparse coefficient map over homological keys.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HomologicalCoefficients {
    pub terms: BTreeMap<HomKey, Complex64>,
}

impl HomologicalCoefficients {
    pub fn insert(&mut self, key: HomKey, v: Complex64) {
        self.terms.insert(key, v);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Solution of the homological equation and the identity residual.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalSolution {
    pub g: HomologicalCoefficients,
    /// Resonant part of the input, kept as is.
    pub resonant: HomologicalCoefficients,
    /// `max |i g d - (r - r_res)|` over all keys.
    pub residual: f64,
}

/// Solve `i d g = r - r_res` keywise. Resonance is decided by `resonances`;
/// a divisor with `|d| <= tol` on a key not flagged resonant is an error.
pub fn solve_homological(
    params: &PhysicalParams,
    r: &HomologicalCoefficients,
    resonances: &ResonanceSet,
    tol: f64,
) -> Result<HomologicalSolution> {
    let mut g = HomologicalCoefficients::default();
    let mut resonant = HomologicalCoefficients::default();
    let mut residual = 0.0_f64;
    let i = Complex64::new(0.0, 1.0);
    for (key, &rv) in &r.terms {
        let d = key.divisor(params);
        let flagged = key.max_abs() <= resonances.max_j && resonances.contains(key.triple());
        let (gv, rres) = if flagged {
            (Complex64::new(0.0, 0.0), rv)
        } else {
            if d.abs() <= tol {
                return Err(Error::ToleranceInconsistency { key: key.to_string(), divisor: d });
            }
            (rv / (i * d), Complex64::new(0.0, 0.0))
        };
        g.insert(*key, gv);
        if flagged {
            resonant.insert(*key, rres);
        }
        residual = residual.max((i * gv * d - (rv - rres)).norm());
    }
    Ok(HomologicalSolution { g, resonant, residual })
}

/// Same as [`solve_homological`] with the resonance set built from the keys.
pub fn solve_homological_auto(
    params: &PhysicalParams,
    r: &HomologicalCoefficients,
    tol: f64,
) -> Result<HomologicalSolution> {
    let max_j = r.terms.keys().map(HomKey::max_abs).max().unwrap_or(1);
    let set = ResonanceSet::new(params, max_j, tol);
    solve_homological(params, r, &set, tol)
}
