//! Polynomial tables in `(u_j, conj u_j)`, Poisson brackets and vector fields.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use super::table::CubicHamiltonian;
use crate::resonance::SignedMode;
use crate::spectra::{omega, PhysicalParams};

/// Sorted list of factors. `(+, j)` stands for `u_j`, `(-, j)` for `conj u_j`.
pub type Monomial = Vec<SignedMode>;

/// Sparse polynomial: monomial to total coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyTable {
    pub terms: BTreeMap<Monomial, Complex64>,
}

impl PolyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut mono: Monomial, c: Complex64) {
        mono.sort();
        *self.terms.entry(mono).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus, 0 when empty.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Partial derivative with respect to the variable `v`.
    pub fn derivative(&self, v: SignedMode) -> PolyTable {
        let mut out = PolyTable::new();
        for (mono, c) in &self.terms {
            let count = mono.iter().filter(|&&m| m == v).count();
            if count == 0 {
                continue;
            }
            let pos = mono.iter().position(|&m| m == v).expect("counted above");
            let mut rest = mono.clone();
            rest.remove(pos);
            out.add(rest, c * count as f64);
        }
        out
    }

    pub fn mul(&self, other: &PolyTable) -> PolyTable {
        let mut out = PolyTable::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add(m, ca * cb);
            }
        }
        out
    }

    pub fn add_table(&mut self, other: &PolyTable, scale: Complex64) {
        for (m, c) in &other.terms {
            self.add(m.clone(), c * scale);
        }
    }

    /// Set of `|j|`-signed indices `j` appearing in any factor.
    pub fn modes(&self) -> BTreeSet<i64> {
        self.terms.keys().flat_map(|m| m.iter().map(|f| f.j)).collect()
    }
}

impl From<&CubicHamiltonian> for PolyTable {
    fn from(h: &CubicHamiltonian) -> Self {
        let mut out = PolyTable::new();
        for (k, t) in &h.terms {
            out.add(k.to_vec(), t.monomial_coeff());
        }
        out
    }
}

/// `H2 = sum_{0<|j|<=max_j} Omega(j) u_j conj(u_j)`.
pub fn h2_table(params: &PhysicalParams, max_j: i64) -> PolyTable {
    let mut out = PolyTable::new();
    for j in (-max_j..=max_j).filter(|&j| j != 0) {
        out.add(
            vec![SignedMode::of(1, j), SignedMode::of(-1, j)],
            Complex64::new(omega(params, j as f64), 0.0),
        );
    }
    out
}

/// `{F, H} = i sum_j (d_{u_j} H d_{conj u_j} F - d_{conj u_j} H d_{u_j} F)`.
pub fn poisson_bracket(f: &PolyTable, h: &PolyTable) -> PolyTable {
    let modes: BTreeSet<i64> = f.modes().union(&h.modes()).copied().collect();
    let i = Complex64::new(0.0, 1.0);
    let mut out = PolyTable::new();
    for j in modes {
        let up = SignedMode::of(1, j);
        let dn = SignedMode::of(-1, j);
        out.add_table(&h.derivative(up).mul(&f.derivative(dn)), i);
        out.add_table(&h.derivative(dn).mul(&f.derivative(up)), -i);
    }
    out
}

/// Vector field: `(target, monomial) -> coefficient` for the component along `d_{u^sigma_j}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorFieldTable {
    pub terms: BTreeMap<(SignedMode, Monomial), Complex64>,
}

impl VectorFieldTable {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest entrywise difference, treating missing entries as zero.
    pub fn max_diff(&self, other: &VectorFieldTable) -> f64 {
        let keys: BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        let zero = Complex64::new(0.0, 0.0);
        keys.into_iter()
            .map(|k| (self.terms.get(k).unwrap_or(&zero) - other.terms.get(k).unwrap_or(&zero)).norm())
            .fold(0.0, f64::max)
    }
}

/// `X_F = sum_{sigma,k} i sigma d_{u^{-sigma}_k} F d_{u^sigma_k}`.
pub fn hamiltonian_vector_field(f: &PolyTable) -> VectorFieldTable {
    let mut out = VectorFieldTable::default();
    let vars: BTreeSet<SignedMode> = f.terms.keys().flat_map(|m| m.iter().copied()).collect();
    for v in vars {
        let target = v.flip();
        let factor = Complex64::new(0.0, target.sigma.as_f64());
        for (mono, c) in f.derivative(v).terms {
            if c != Complex64::new(0.0, 0.0) {
                *out.terms.entry((target, mono)).or_insert(Complex64::new(0.0, 0.0)) += factor * c;
            }
        }
    }
    out
}

/// Keeps the entries `u^{s1}_{j1} ... d_{u^sigma_j}` with
/// `|-sigma Omega(j) + sum s_i Omega(j_i)| <= tol`.
pub fn pi_ker(table: &VectorFieldTable, params: &PhysicalParams, tol: f64) -> VectorFieldTable {
    let terms = table
        .terms
        .iter()
        .filter(|((target, mono), _)| {
            let mut phase = -target.sigma.as_f64() * omega(params, target.j as f64);
            for m in mono {
                phase += m.sigma.as_f64() * omega(params, m.j as f64);
            }
            phase.abs() <= tol
        })
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    VectorFieldTable { terms }
}
