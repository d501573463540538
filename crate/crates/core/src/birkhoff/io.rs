//! Line-oriented text format for cubic coefficient tables.
//!
//! ```text
//! # g 1.0000000000000000e0
//! # kappa 5.0000000000000000e-1
//! # depth inf
//! # tol 1.0000000000000000e-9
//! sigma1 j1 sigma2 j2 sigma3 j3 re im multiplicity
//! 1 2 -1 1 -1 1 0.0000000000000000e0 5.2031534282962992e-2 3
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::table::{sorted_key, CubicHamiltonian, CubicTerm};
use crate::error::{Error, Result};
use crate::resonance::{Sign, SignedMode};
use crate::spectra::{Depth, PhysicalParams};

const COLUMNS: &str = "sigma1 j1 sigma2 j2 sigma3 j3 re im multiplicity";

/// Serialize with 17 significant digits. `tol` is recorded in the header when given.
pub fn write_table(h: &CubicHamiltonian, tol: Option<f64>) -> String {
    let mut s = String::new();
    s.push_str(&format!("# g {:.16e}\n", h.params.g));
    s.push_str(&format!("# kappa {:.16e}\n", h.params.kappa));
    s.push_str(&format!("# depth {}\n", h.params.depth));
    if let Some(t) = tol {
        s.push_str(&format!("# tol {t:.16e}\n"));
    }
    s.push_str(COLUMNS);
    s.push('\n');
    for (k, t) in &h.terms {
        for m in k {
            s.push_str(&format!("{} {} ", m.sigma.value(), m.j));
        }
        s.push_str(&format!("{:.16e} {:.16e} {}\n", t.coeff.re, t.coeff.im, t.multiplicity));
    }
    s
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|e| parse_err(line, format!("bad number '{s}': {e}")))
}

/// Parse a table written by [`write_table`]; returns the table and the header tolerance.
pub fn read_table(text: &str) -> Result<(CubicHamiltonian, Option<f64>)> {
    let mut header: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut terms = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l == COLUMNS {
            continue;
        }
        if let Some(rest) = l.strip_prefix('#') {
            let mut it = rest.split_whitespace();
            if let (Some(k), Some(v)) = (it.next(), it.next()) {
                header.insert(k.to_string(), (line, v.to_string()));
            }
            continue;
        }
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 9 {
            return Err(parse_err(line, format!("expected 9 fields, found {}", f.len())));
        }
        let mut modes = [SignedMode::of(1, 1); 3];
        for (i, slot) in modes.iter_mut().enumerate() {
            let s: i64 = f[2 * i].parse().map_err(|_| parse_err(line, format!("bad sign '{}'", f[2 * i])))?;
            let j: i64 = f[2 * i + 1].parse().map_err(|_| parse_err(line, format!("bad mode '{}'", f[2 * i + 1])))?;
            let sign = Sign::from_i64(s).map_err(|e| parse_err(line, e.to_string()))?;
            *slot = SignedMode::new(sign, j).map_err(|e| parse_err(line, e.to_string()))?;
        }
        let momentum: i64 = modes.iter().map(SignedMode::momentum).sum();
        if momentum != 0 {
            return Err(parse_err(line, format!("momentum violation {momentum}")));
        }
        let re = parse_f64(line, f[6])?;
        let im = parse_f64(line, f[7])?;
        let mult: u32 = f[8].parse().map_err(|_| parse_err(line, format!("bad multiplicity '{}'", f[8])))?;
        terms.insert(sorted_key(modes), CubicTerm { coeff: Complex64::new(re, im), multiplicity: mult });
    }
    let get = |k: &str| -> Result<(usize, String)> {
        header.get(k).cloned().ok_or_else(|| parse_err(0, format!("missing header '{k}'")))
    };
    let (lg, g) = get("g")?;
    let (lk, kappa) = get("kappa")?;
    let (ld, depth) = get("depth")?;
    let g = parse_f64(lg, &g)?;
    let kappa = parse_f64(lk, &kappa)?;
    let depth = if depth == "inf" { Depth::Infinite } else { Depth::Finite(parse_f64(ld, &depth)?) };
    let params = PhysicalParams::new(g, kappa, depth).map_err(|e| parse_err(lg, e.to_string()))?;
    let tol = match header.get("tol") {
        Some((l, v)) => Some(parse_f64(*l, v)?),
        None => None,
    };
    Ok((CubicHamiltonian { params, terms, symmetrized: true }, tol))
}
