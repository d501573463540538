//! Three-wave resonances, small divisors and Wilton ripple parameters.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{bound_constant, omega, Depth, PhysicalParams};

/// Default resonance tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Sign of a complex coordinate: `+` is `z_j`, `-` is `conj(z_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {s}"))),
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A pair `(sigma, j)` with `j != 0`.
///
/// The ordering puts `+` before `-`, then `|j|` descending, then `j`
/// descending. Sorting three modes with it gives the canonical layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedMode {
    pub sigma: Sign,
    pub j: i64,
}

impl SignedMode {
    pub fn new(sigma: Sign, j: i64) -> Result<Self> {
        if j == 0 {
            return Err(Error::ZeroMode);
        }
        Ok(Self { sigma, j })
    }

    /// Panicking constructor for literals, `s` is `+1` or `-1`.
    pub fn of(s: i64, j: i64) -> Self {
        Self::new(Sign::from_i64(s).expect("bad sign"), j).expect("zero mode")
    }

    /// Signed frequency `sigma * j` carried by this factor.
    pub fn momentum(&self) -> i64 {
        self.sigma.value() * self.j
    }

    pub fn flip(&self) -> Self {
        Self { sigma: self.sigma.flip(), j: self.j }
    }
}

impl Ord for SignedMode {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .sigma
            .value()
            .cmp(&self.sigma.value())
            .then(other.j.abs().cmp(&self.j.abs()))
            .then(other.j.cmp(&self.j))
    }
}

impl PartialOrd for SignedMode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for SignedMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sigma == Sign::Plus { '+' } else { '-' };
        write!(f, "({s},{})", self.j)
    }
}

/// A momentum-conserving triple in canonical form with its phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub modes: [SignedMode; 3],
    pub phase: f64,
}

impl Triple {
    /// Build a triple in canonical form. Fails on momentum violation.
    pub fn new(params: &PhysicalParams, modes: [SignedMode; 3]) -> Result<Self> {
        let m: i64 = modes.iter().map(SignedMode::momentum).sum();
        if m != 0 {
            return Err(Error::Momentum(m));
        }
        let modes = canonicalize(modes);
        let phase = phase_raw(params, &modes);
        Ok(Self { modes, phase })
    }

    pub fn max_abs_j(&self) -> i64 {
        self.modes.iter().map(|m| m.j.abs()).max().unwrap_or(0)
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}{}", self.modes[0], self.modes[1], self.modes[2])
    }
}

/// Canonical representative of a triple up to permutation and global sign flip.
///
/// The orientation is chosen so the number of `+` signs is 1 or 3, which
/// makes the result invariant under the flip. Modes are then sorted with
/// the `SignedMode` order.
pub fn canonicalize(modes: [SignedMode; 3]) -> [SignedMode; 3] {
    let plus = modes.iter().filter(|m| m.sigma == Sign::Plus).count();
    let mut out = if plus == 0 || plus == 2 { modes.map(|m| m.flip()) } else { modes };
    out.sort();
    out
}

fn phase_raw(params: &PhysicalParams, modes: &[SignedMode; 3]) -> f64 {
    modes.iter().map(|m| m.sigma.as_f64() * omega(params, m.j as f64)).sum()
}

/// `sigma_1 Omega(j_1) + sigma_2 Omega(j_2) + sigma_3 Omega(j_3)`; momentum is not required.
pub fn phase_of(params: &PhysicalParams, modes: &[SignedMode; 3]) -> Result<f64> {
    if modes.iter().any(|m| m.j == 0) {
        return Err(Error::ZeroMode);
    }
    Ok(phase_raw(params, modes))
}

/// Visit every canonical momentum-conserving triple with `max|j| <= max_j`,
/// in parallel over the first free index. `keep` filters and the result is sorted.
fn sweep<F>(params: &PhysicalParams, max_j: i64, keep: F) -> Vec<Triple>
where
    F: Fn(&Triple) -> bool + Sync,
{
    let js: Vec<i64> = (-max_j..=max_j).filter(|&j| j != 0).collect();
    let mut out: Vec<Triple> = js
        .par_iter()
        .flat_map_iter(|&a| {
            let mut local = Vec::new();
            for &b in &js {
                // pattern + - -: a = b + c
                let c = a - b;
                if c != 0 && c.abs() <= max_j {
                    let raw = [SignedMode::of(1, a), SignedMode::of(-1, b), SignedMode::of(-1, c)];
                    if canonicalize(raw) == raw {
                        let t = Triple { modes: raw, phase: phase_raw(params, &raw) };
                        if keep(&t) {
                            local.push(t);
                        }
                    }
                }
                // pattern + + +: a + b + c = 0
                let c = -a - b;
                if c != 0 && c.abs() <= max_j {
                    let raw = [SignedMode::of(1, a), SignedMode::of(1, b), SignedMode::of(1, c)];
                    if canonicalize(raw) == raw {
                        let t = Triple { modes: raw, phase: phase_raw(params, &raw) };
                        if keep(&t) {
                            local.push(t);
                        }
                    }
                }
            }
            local
        })
        .collect();
    out.sort_by(|x, y| x.modes.cmp(&y.modes));
    out
}

/// All canonical momentum-conserving triples with `max|j| <= max_j` and
/// `|phase| <= tol`, sorted lexicographically.
pub fn enumerate_resonances(params: &PhysicalParams, max_j: i64, tol: f64) -> Vec<Triple> {
    if max_j < 1 {
        return Vec::new();
    }
    sweep(params, max_j, |t| t.phase.abs() <= tol)
}

/// Every canonical momentum-conserving triple with `max|j| <= max_j`.
pub fn all_triples(params: &PhysicalParams, max_j: i64) -> Vec<Triple> {
    if max_j < 1 {
        return Vec::new();
    }
    sweep(params, max_j, |_| true)
}

/// Set of canonical resonant triples, used to flag resonant index tuples.
#[derive(Clone, Debug, Default)]
pub struct ResonanceSet {
    pub max_j: i64,
    pub tol: f64,
    set: BTreeSet<[SignedMode; 3]>,
}

impl ResonanceSet {
    pub fn new(params: &PhysicalParams, max_j: i64, tol: f64) -> Self {
        let set = enumerate_resonances(params, max_j, tol).into_iter().map(|t| t.modes).collect();
        Self { max_j, tol, set }
    }

    /// Whether the triple (any order, any orientation) is resonant.
    pub fn contains(&self, modes: [SignedMode; 3]) -> bool {
        self.set.contains(&canonicalize(modes))
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Smallest `|phase| > exclude_tol` over canonical triples with `max|j| <= max_j`.
pub fn min_gap(params: &PhysicalParams, max_j: i64, exclude_tol: f64) -> Result<(f64, Triple)> {
    if max_j < 2 {
        return Err(Error::InvalidParameter(format!("max_j must be >= 2, got {max_j}")));
    }
    let all = sweep(params, max_j, |t| t.phase.abs() > exclude_tol);
    all.into_iter()
        .min_by(|x, y| {
            x.phase.abs().total_cmp(&y.phase.abs()).then(x.modes.cmp(&y.modes))
        })
        .map(|t| (t.phase.abs(), t))
        .ok_or_else(|| Error::InvalidParameter("no triple above exclude_tol".into()))
}

/// Cutoff `2 (30 C)^2 / kappa` beyond which no exact resonance exists,
/// clamped below at 1.
pub fn resonance_cutoff(params: &PhysicalParams) -> f64 {
    let c = bound_constant(params);
    (2.0 * (30.0 * c).powi(2) / params.kappa).max(1.0)
}

/// Surface tension making `(2j; j, j)` exactly resonant.
pub fn wilton_kappa(g: f64, depth: Depth, j: i64) -> Result<f64> {
    if !(g > 0.0) || j < 1 {
        return Err(Error::InvalidParameter(format!("need g > 0 and j >= 1, got g={g}, j={j}")));
    }
    let jf = j as f64;
    if depth.is_infinite() {
        return Ok(g / (2.0 * jf * jf));
    }
    let f = |kappa: f64| -> f64 {
        let p = PhysicalParams { g, kappa, depth };
        omega(&p, 2.0 * jf) - 2.0 * omega(&p, jf)
    };
    let mut lo = 0.0_f64;
    let mut hi = g / (2.0 * jf * jf);
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Err(Error::NoRoot { lo, hi });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    if root <= 0.0 {
        return Err(Error::NoRoot { lo, hi });
    }
    Ok(root)
}

/// A violation of one of the two inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub n2: i64,
    pub n3: i64,
    pub value: f64,
    pub bound: f64,
}

/// Result of [`verify_lemma_bounds`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub max_j: i64,
    pub bound_constant: f64,
    pub threshold: f64,
    pub checked_a: u64,
    pub checked_b: u64,
    pub min_ratio_a: f64,
    pub min_ratio_b: Option<f64>,
    pub violations_a: Vec<Violation>,
    pub violations_b: Vec<Violation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations_a.is_empty() && self.violations_b.is_empty()
    }
}

const MAX_LISTED: usize = 100;

/// `(n2+n3)^{3/2} - n2^{3/2} - n3^{3/2}` in a cancellation-free rationalized form.
pub fn superadditivity_gap(n2: f64, n3: f64) -> f64 {
    let x = 3.0 * (n2 * n2 * n3 + n2 * n3 * n3);
    let y = 2.0 * (n2 * n3).powf(1.5);
    let num = 9.0 * (n2.powi(4) * n3 * n3 + n2 * n2 * n3.powi(4)) + 14.0 * (n2 * n3).powi(3);
    let den = ((n2 + n3).powf(1.5) + n2.powf(1.5) + n3.powf(1.5)) * (x + y);
    num / den
}

/// Sweep the two lower bounds for `1 <= n3 <= n2 <= max_j`:
/// (a) `(n2+n3)^{3/2} - n2^{3/2} - n3^{3/2} >= sqrt(n2)/5`,
/// (b) `|Omega(n2+n3) - Omega(n2) - Omega(n3)| >= sqrt(n2 kappa)/10`
/// whenever `n2 n3 >= (30 C)^2/kappa`.
pub fn verify_lemma_bounds(params: &PhysicalParams, max_j: i64) -> Result<LemmaReport> {
    if max_j < 2 {
        return Err(Error::InvalidParameter(format!("max_j must be >= 2, got {max_j}")));
    }
    let c = bound_constant(params);
    let threshold = (30.0 * c).powi(2) / params.kappa;
    let sk = params.kappa.sqrt();
    struct Row {
        a: u64,
        b: u64,
        min_a: f64,
        min_b: f64,
        va: Vec<Violation>,
        vb: Vec<Violation>,
    }
    let rows: Vec<Row> = (1..=max_j)
        .into_par_iter()
        .map(|n2| {
            let x2 = n2 as f64;
            let mut row = Row { a: 0, b: 0, min_a: f64::INFINITY, min_b: f64::INFINITY, va: vec![], vb: vec![] };
            let om2 = omega(params, x2);
            for n3 in 1..=n2 {
                let x3 = n3 as f64;
                let lhs = superadditivity_gap(x2, x3);
                let bound = x2.sqrt() / 5.0;
                row.a += 1;
                row.min_a = row.min_a.min(lhs / bound);
                if lhs < bound {
                    row.va.push(Violation { n2, n3, value: lhs, bound });
                }
                if x2 * x3 >= threshold {
                    let v = (omega(params, x2 + x3) - om2 - omega(params, x3)).abs();
                    let bound = x2.sqrt() * sk / 10.0;
                    row.b += 1;
                    row.min_b = row.min_b.min(v / bound);
                    if v < bound {
                        row.vb.push(Violation { n2, n3, value: v, bound });
                    }
                }
            }
            row
        })
        .collect();
    let mut report = LemmaReport {
        max_j,
        bound_constant: c,
        threshold,
        checked_a: 0,
        checked_b: 0,
        min_ratio_a: f64::INFINITY,
        min_ratio_b: None,
        violations_a: vec![],
        violations_b: vec![],
    };
    let mut min_b = f64::INFINITY;
    for row in rows {
        report.checked_a += row.a;
        report.checked_b += row.b;
        report.min_ratio_a = report.min_ratio_a.min(row.min_a);
        min_b = min_b.min(row.min_b);
        for v in row.va {
            if report.violations_a.len() < MAX_LISTED {
                report.violations_a.push(v);
            }
        }
        for v in row.vb {
            if report.violations_b.len() < MAX_LISTED {
                report.violations_b.push(v);
            }
        }
    }
    if report.checked_b > 0 {
        report.min_ratio_b = Some(min_b);
    }
    Ok(report)
}
