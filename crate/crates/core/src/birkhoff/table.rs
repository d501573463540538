//! Cubic Hamiltonians in complex coordinates.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::{all_triples, enumerate_resonances, Sign, SignedMode};
use crate::spectra::{g0_mult, lambda_symbol, omega, PhysicalParams};
use crate::state::SpectralState;

/// Sorted multiset of three signed modes.
pub type CubicKey = [SignedMode; 3];

/// Coefficient attached to a key.
///
/// `coeff` is the symmetrized value per ordered arrangement and
/// `multiplicity` the number of distinct arrangements, so the monomial
/// carries `multiplicity * coeff` in the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicTerm {
    pub coeff: Complex64,
    pub multiplicity: u32,
}

impl CubicTerm {
    pub fn monomial_coeff(&self) -> Complex64 {
        self.coeff * self.multiplicity as f64
    }
}

/// Sparse cubic Hamiltonian `sum multiplicity * coeff * z^{s1}_{j1} z^{s2}_{j2} z^{s3}_{j3}`.
///
/// A key and its sign flip are both stored; their coefficients are conjugate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicHamiltonian {
    pub params: PhysicalParams,
    pub terms: BTreeMap<CubicKey, CubicTerm>,
    pub symmetrized: bool,
}

/// Number of distinct orderings of a sorted key.
pub fn multiplicity(key: &CubicKey) -> u32 {
    let (a, b, c) = (key[0], key[1], key[2]);
    if a == b && b == c {
        1
    } else if a == b || b == c || a == c {
        3
    } else {
        6
    }
}

/// Distinct orderings of three modes.
pub fn arrangements(modes: &CubicKey) -> Vec<CubicKey> {
    let [a, b, c] = *modes;
    let mut out: Vec<CubicKey> = vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
    out.sort();
    out.dedup();
    out
}

pub fn sorted_key(modes: CubicKey) -> CubicKey {
    let mut k = modes;
    k.sort();
    k
}

pub fn flip_key(key: &CubicKey) -> CubicKey {
    sorted_key(key.map(|m| m.flip()))
}

fn check_momentum(modes: &CubicKey) -> Result<()> {
    let m: i64 = modes.iter().map(SignedMode::momentum).sum();
    if m != 0 {
        return Err(Error::Momentum(m));
    }
    Ok(())
}

/// Coefficient of the ordered tuple `(s1,j1),(s2,j2),(s3,j3)` in the cubic
/// Hamiltonian:
/// `i s2/(8 sqrt(pi)) (s1 s3 j1 j3 + G_{j1} G_{j3}) Lambda(j2) / (Lambda(j1) Lambda(j3))`.
pub fn h3_coefficient(params: &PhysicalParams, modes: &CubicKey) -> Result<Complex64> {
    if modes.iter().any(|m| m.j == 0) {
        return Err(Error::ZeroMode);
    }
    check_momentum(modes)?;
    let [m1, m2, m3] = *modes;
    let sym = (m1.sigma.value() * m3.sigma.value() * m1.j * m3.j) as f64
        + g0_mult(params, m1.j) * g0_mult(params, m3.j);
    let lam = lambda_symbol(params, m2.j as f64)
        / (lambda_symbol(params, m1.j as f64) * lambda_symbol(params, m3.j as f64));
    let pref = m2.sigma.as_f64() / (8.0 * std::f64::consts::PI.sqrt());
    Ok(Complex64::new(0.0, pref * sym * lam))
}

/// Symmetrized coefficient and multiplicity of a momentum-conserving key.
pub fn symmetrized_term(params: &PhysicalParams, key: &CubicKey) -> Result<CubicTerm> {
    let arr = arrangements(key);
    let mut sum = Complex64::new(0.0, 0.0);
    for a in &arr {
        sum += h3_coefficient(params, a)?;
    }
    Ok(CubicTerm { coeff: sum / arr.len() as f64, multiplicity: arr.len() as u32 })
}

impl CubicHamiltonian {
    pub fn empty(params: PhysicalParams) -> Self {
        Self { params, terms: BTreeMap::new(), symmetrized: true }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Insert a key and its flip with conjugate coefficients.
    pub fn insert_with_flip(&mut self, key: CubicKey, term: CubicTerm) {
        let key = sorted_key(key);
        let fk = flip_key(&key);
        self.terms.insert(key, term);
        self.terms.insert(fk, CubicTerm { coeff: term.coeff.conj(), multiplicity: term.multiplicity });
    }

    /// Largest `|j|` over stored keys.
    pub fn max_mode(&self) -> i64 {
        self.terms.keys().flat_map(|k| k.iter().map(|m| m.j.abs())).max().unwrap_or(0)
    }

    /// `H(z, conj z)`.
    pub fn evaluate(&self, z: &SpectralState) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, t)| t.monomial_coeff() * z.signed(k[0]) * z.signed(k[1]) * z.signed(k[2]))
            .sum()
    }

    /// Largest violation of `coeff(flip) = conj(coeff)`.
    pub fn reality_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, t)| match self.terms.get(&flip_key(k)) {
                Some(f) => (f.coeff - t.coeff.conj()).norm(),
                None => t.coeff.norm(),
            })
            .fold(0.0, f64::max)
    }
}

/// Full cubic Hamiltonian on every momentum-conserving key with `|j| <= max_j`.
pub fn assemble_cubic_hamiltonian(params: &PhysicalParams, max_j: i64) -> CubicHamiltonian {
    let mut h = CubicHamiltonian::empty(*params);
    for t in all_triples(params, max_j) {
        let term = symmetrized_term(params, &t.modes).expect("momentum holds by construction");
        h.insert_with_flip(t.modes, term);
    }
    h
}

/// Resonant part: the cubic coefficients restricted to the triples found by
/// the resonance enumerator.
pub fn assemble_resonant_hamiltonian(params: &PhysicalParams, max_j: i64, tol: f64) -> CubicHamiltonian {
    let mut h = CubicHamiltonian::empty(*params);
    for t in enumerate_resonances(params, max_j, tol) {
        let term = symmetrized_term(params, &t.modes).expect("momentum holds by construction");
        h.insert_with_flip(t.modes, term);
    }
    h
}

/// `sum_j Omega(j) |z_j|^2`.
pub fn hamiltonian_h2(params: &PhysicalParams, z: &SpectralState) -> f64 {
    z.iter().map(|(j, v)| omega(params, j as f64) * v.norm_sqr()).sum()
}

/// `d H / d conj(z_k)` for every stored `k`, with `z` and `conj z` independent.
pub fn gradient_zbar(h: &CubicHamiltonian, z: &SpectralState) -> SpectralState {
    let mut out = SpectralState::zeros(z.n());
    let n = z.n() as i64;
    for (k, t) in &h.terms {
        let c = t.monomial_coeff();
        for i in 0..3 {
            if k[i].sigma != Sign::Minus || k[i].j.abs() > n {
                continue;
            }
            let others: Complex64 = (0..3).filter(|&l| l != i).map(|l| z.signed(k[l])).product();
            out.add(k[i].j, c * others);
        }
    }
    out
}
