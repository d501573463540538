//! Independent oracle for the cubic coefficients.
//!
//! The real cubic energy `H3 = 1/2 int eta (psi_x^2 - (G0 psi)^2) dx` is
//! evaluated on a grid after substituting
//! `eta = -(i/sqrt 2) Lambda (u - conj u)` and `psi = (1/sqrt 2) Lambda^{-1} (u + conj u)`,
//! with every `u^sigma_j` treated as an independent complex variable.
//! Monomial coefficients are recovered by polarization.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::table::{flip_key, sorted_key, CubicHamiltonian, CubicKey, CubicTerm, multiplicity};
use crate::resonance::{all_triples, Sign, SignedMode};
use crate::spectra::{g0_mult, lambda_symbol, PhysicalParams};

struct Evaluator {
    params: PhysicalParams,
    m: usize,
    ifft: Arc<dyn Fft<f64>>,
}

impl Evaluator {
    fn new(params: PhysicalParams, max_j: i64) -> Self {
        let m = (4 * max_j as usize + 4).next_power_of_two();
        let ifft = FftPlanner::new().plan_fft_inverse(m);
        Self { params, m, ifft }
    }

    fn slot(&self, n: i64) -> usize {
        n.rem_euclid(self.m as i64) as usize
    }

    /// Cubic energy at the given variable values; unspecified variables are zero.
    fn energy(&self, vars: &[(SignedMode, Complex64)]) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let mut eta = vec![zero; self.m];
        let mut psi_x = vec![zero; self.m];
        let mut g0psi = vec![zero; self.m];
        let s2 = std::f64::consts::SQRT_2;
        let i = Complex64::new(0.0, 1.0);
        for &(v, val) in vars {
            // u^+_j contributes at frequency j, u^-_j (from conj u) at -j.
            let n = v.momentum();
            let lam = lambda_symbol(&self.params, n as f64);
            let sgn = match v.sigma {
                Sign::Plus => 1.0,
                Sign::Minus => -1.0,
            };
            let eta_hat = -i / s2 * lam * sgn * val;
            let psi_hat = val / (s2 * lam);
            let idx = self.slot(n);
            eta[idx] += eta_hat;
            psi_x[idx] += i * n as f64 * psi_hat;
            g0psi[idx] += g0_mult(&self.params, n) * psi_hat;
        }
        for buf in [&mut eta, &mut psi_x, &mut g0psi] {
            self.ifft.process(buf);
        }
        let norm = 1.0 / (2.0 * PI).sqrt();
        let mut acc = zero;
        for k in 0..self.m {
            let e = eta[k] * norm;
            let px = psi_x[k] * norm;
            let gp = g0psi[k] * norm;
            acc += e * (px * px - gp * gp);
        }
        acc * (0.5 * 2.0 * PI / self.m as f64)
    }

    /// Coefficient of the monomial `key` in the cubic energy.
    fn monomial_coefficient(&self, key: &CubicKey) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let [a, b, c] = *key;
        match multiplicity(key) {
            6 => {
                let p = |vs: &[SignedMode]| -> Complex64 {
                    let vars: Vec<_> = vs.iter().map(|&v| (v, one)).collect();
                    self.energy(&vars)
                };
                p(&[a, b, c]) - p(&[a, b]) - p(&[a, c]) - p(&[b, c]) + p(&[a]) + p(&[b]) + p(&[c])
            }
            3 => {
                let (rep, single) = if a == b { (a, c) } else if b == c { (b, a) } else { (a, b) };
                let q = |s: f64, t: f64| -> Complex64 {
                    self.energy(&[(rep, Complex64::new(s, 0.0)), (single, Complex64::new(t, 0.0))])
                };
                (q(1.0, 1.0) + q(-1.0, 1.0)) * 0.5 - q(0.0, 1.0)
            }
            _ => self.energy(&[(a, one)]),
        }
    }
}

/// Cubic coefficient table built from the real-variable energy on every
/// momentum-conserving key with `|j| <= max_j`. Coefficients are stored
/// symmetrized, i.e. monomial coefficient divided by multiplicity.
pub fn expand_h3_from_real(params: &PhysicalParams, max_j: i64) -> CubicHamiltonian {
    let ev = Evaluator::new(*params, max_j);
    let mut keys: Vec<CubicKey> = Vec::new();
    for t in all_triples(params, max_j) {
        let k = sorted_key(t.modes);
        keys.push(k);
        keys.push(flip_key(&k));
    }
    keys.sort();
    keys.dedup();
    let terms: Vec<(CubicKey, CubicTerm)> = keys
        .par_iter()
        .map(|k| {
            let m = multiplicity(k);
            let c = ev.monomial_coefficient(k);
            (*k, CubicTerm { coeff: c / m as f64, multiplicity: m })
        })
        .collect();
    let mut h = CubicHamiltonian::empty(*params);
    h.terms.extend(terms);
    h
}

/// Largest entrywise difference between two tables, missing entries count as zero.
pub fn max_coefficient_diff(a: &CubicHamiltonian, b: &CubicHamiltonian) -> (f64, Option<CubicKey>) {
    let zero = CubicTerm { coeff: Complex64::new(0.0, 0.0), multiplicity: 0 };
    let mut worst = (0.0, None);
    for k in a.terms.keys().chain(b.terms.keys()) {
        let x = a.terms.get(k).unwrap_or(&zero).coeff;
        let y = b.terms.get(k).unwrap_or(&zero).coeff;
        let d = (x - y).norm();
        if d > worst.0 || worst.1.is_none() {
            worst = (d, Some(*k));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::table::assemble_cubic_hamiltonian;

    #[test]
    fn oracle_matches_formula_small() {
        for p in [PhysicalParams::deep(1.0, 0.5), PhysicalParams::finite(2.0, 0.3, 0.7)] {
            let oracle = expand_h3_from_real(&p, 6);
            let formula = assemble_cubic_hamiltonian(&p, 6);
            assert_eq!(oracle.len(), formula.len());
            let (d, _) = max_coefficient_diff(&oracle, &formula);
            assert!(d < 1e-12, "max diff {d}");
            assert!(oracle.reality_defect() < 1e-12);
            for k in oracle.terms.keys() {
                assert_eq!(k.iter().map(|m| m.momentum()).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn energy_vanishes_off_momentum_lattice() {
        let p = PhysicalParams::deep(1.0, 1.0);
        let ev = Evaluator::new(p, 4);
        let key = sorted_key([SignedMode::of(1, 1), SignedMode::of(1, 1), SignedMode::of(1, 1)]);
        assert!(ev.monomial_coefficient(&key).norm() < 1e-15);
    }
}
