//! TOML run configuration. Every section is optional and falls back to defaults.

use serde::{Deserialize, Serialize};
use wilton_core::resonant_flow::{FlowConfig, Scheme};
use wilton_core::waterwaves::{LifespanConfig, SolverConfig};
use wilton_core::{Depth, PhysicalParams};

/// Config failure with the offending line when known.
#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub msg: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "config error at line {l}: {}", self.msg),
            None => write!(f, "config error: {}", self.msg),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DepthSpec {
    Finite(f64),
    Named(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSection {
    pub g: f64,
    pub kappa: f64,
    /// `"inf"` or a positive number.
    pub depth: DepthSpec,
}

impl Default for ParamsSection {
    fn default() -> Self {
        Self { g: 1.0, kappa: 0.5, depth: DepthSpec::Named("inf".into()) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResonanceSection {
    pub max_j: i64,
    pub tol: f64,
}

impl Default for ResonanceSection {
    fn default() -> Self {
        Self { max_j: 64, tol: wilton_core::resonance::DEFAULT_TOL }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinGapSection {
    pub max_j: i64,
    pub exclude_tol: f64,
}

impl Default for MinGapSection {
    fn default() -> Self {
        Self { max_j: 100, exclude_tol: 1e-12 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WiltonSection {
    pub j: i64,
}

impl Default for WiltonSection {
    fn default() -> Self {
        Self { j: 1 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoeffsSection {
    pub max_j: i64,
    pub resonant_only: bool,
}

impl Default for CoeffsSection {
    fn default() -> Self {
        Self { max_j: 8, resonant_only: true }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub lemma_max_j: i64,
    pub oracle_max_j: i64,
    pub homological_instances: usize,
    pub homological_size: usize,
    pub bracket_max_j: i64,
    /// Coefficient table to check against the oracle.
    pub table: Option<String>,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            lemma_max_j: 1000,
            oracle_max_j: 20,
            homological_instances: 50,
            homological_size: 200,
            bracket_max_j: 32,
            table: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BnfSection {
    /// Truncation of the resonant Hamiltonian and of the state.
    pub max_j: i64,
}

impl Default for BnfSection {
    fn default() -> Self {
        Self { max_j: 8 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeValue {
    pub j: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSection {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    pub record_every: usize,
    pub sobolev_s: f64,
    pub cutoff: Option<f64>,
    pub backward: bool,
    /// Explicit initial modes; when empty, random modes of size `random_amplitude` from the seed.
    pub modes: Vec<ModeValue>,
    pub random_amplitude: f64,
    /// Also write the physical state per record.
    pub dump_modes: bool,
}

impl Default for FlowSection {
    fn default() -> Self {
        let f = FlowConfig::default();
        Self {
            dt: f.dt,
            t_final: 100.0,
            scheme: f.scheme,
            record_every: 100,
            sobolev_s: f.sobolev_s,
            cutoff: None,
            backward: false,
            modes: Vec::new(),
            random_amplitude: 0.01,
            dump_modes: false,
        }
    }
}

impl FlowSection {
    pub fn flow_config(&self) -> FlowConfig {
        FlowConfig {
            dt: self.dt,
            t_final: self.t_final,
            scheme: self.scheme,
            record_every: self.record_every,
            sobolev_s: self.sobolev_s,
            cutoff: self.cutoff,
            backward: self.backward,
            ..FlowConfig::default()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WwSection {
    pub m: usize,
    pub dno_order: usize,
    pub dt: f64,
    pub t_final: f64,
    pub record_every: usize,
    pub sobolev_s: f64,
    pub ceiling: f64,
    pub modes_out: usize,
    pub filter_strength: Option<f64>,
    /// Mixed norm of the initial data.
    pub epsilon: f64,
}

impl Default for WwSection {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            m: s.m,
            dno_order: s.dno_order,
            dt: s.dt,
            t_final: 10.0,
            record_every: s.record_every,
            sobolev_s: s.sobolev_s,
            ceiling: s.ceiling,
            modes_out: s.modes_out,
            filter_strength: None,
            epsilon: 0.01,
        }
    }
}

impl WwSection {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            m: self.m,
            dno_order: self.dno_order,
            dt: self.dt,
            t_final: self.t_final,
            record_every: self.record_every,
            sobolev_s: self.sobolev_s,
            ceiling: self.ceiling,
            modes_out: self.modes_out,
            filter_strength: self.filter_strength,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifespanSection {
    pub epsilons: Vec<f64>,
    pub m: usize,
    pub dno_order: usize,
    pub dt: f64,
    pub t_max: f64,
    pub sobolev_s: f64,
    pub threshold_factor: f64,
    /// Exponent the fit is compared against.
    pub p_min: f64,
}

impl Default for LifespanSection {
    fn default() -> Self {
        let l = LifespanConfig::default();
        Self {
            epsilons: vec![0.08, 0.04, 0.02],
            m: l.m,
            dno_order: l.dno_order,
            dt: l.dt,
            t_max: l.t_max,
            sobolev_s: l.sobolev_s,
            threshold_factor: l.threshold_factor,
            p_min: 1.8,
        }
    }
}

impl LifespanSection {
    pub fn lifespan_config(&self) -> LifespanConfig {
        LifespanConfig {
            m: self.m,
            dno_order: self.dno_order,
            dt: self.dt,
            t_max: self.t_max,
            sobolev_s: self.sobolev_s,
            threshold_factor: self.threshold_factor,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    pub params: ParamsSection,
    pub resonance: ResonanceSection,
    pub min_gap: MinGapSection,
    pub wilton: WiltonSection,
    pub coeffs: CoeffsSection,
    pub verify: VerifySection,
    pub bnf: BnfSection,
    pub flow: FlowSection,
    pub ww: WwSection,
    pub lifespan: LifespanSection,
}

/// First line of `key = ...` inside `[section]` (top level when `section` is empty).
fn line_of(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if let Some(name) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = l.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

impl RunConfig {
    /// Parse and validate. `text` is kept only for error locations.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
            ConfigError { line, msg: e.message().to_string() }
        })?;
        cfg.validate().map_err(|(section, key, msg)| ConfigError { line: line_of(text, section, key), msg })?;
        Ok(cfg)
    }

    pub fn physical(&self) -> wilton_core::Result<PhysicalParams> {
        let depth = match &self.params.depth {
            DepthSpec::Finite(h) => Depth::Finite(*h),
            DepthSpec::Named(s) if s == "inf" => Depth::Infinite,
            DepthSpec::Named(s) => {
                return Err(wilton_core::Error::InvalidParameter(format!("depth must be \"inf\" or a number, got \"{s}\"")))
            }
        };
        PhysicalParams::new(self.params.g, self.params.kappa, depth)
    }

    fn validate(&self) -> Result<(), (&'static str, &'static str, String)> {
        let e = |s, k, m: String| Err((s, k, m));
        if let Err(err) = self.physical() {
            let key = match &err {
                wilton_core::Error::InvalidParameter(m) if m.starts_with("g ") => "g",
                wilton_core::Error::InvalidParameter(m) if m.starts_with("kappa") => "kappa",
                _ => "depth",
            };
            return e("params", key, err.to_string());
        }
        let r = &self.resonance;
        if r.max_j < 1 {
            return e("resonance", "max_j", format!("max_j must be >= 1, got {}", r.max_j));
        }
        if !(r.tol > 0.0) {
            return e("resonance", "tol", format!("tol must be > 0, got {}", r.tol));
        }
        if self.min_gap.max_j < 2 {
            return e("min_gap", "max_j", format!("max_j must be >= 2, got {}", self.min_gap.max_j));
        }
        if !(self.min_gap.exclude_tol >= 0.0) {
            return e("min_gap", "exclude_tol", "exclude_tol must be >= 0".into());
        }
        if self.wilton.j < 1 {
            return e("wilton", "j", format!("j must be >= 1, got {}", self.wilton.j));
        }
        if self.coeffs.max_j < 1 {
            return e("coeffs", "max_j", format!("max_j must be >= 1, got {}", self.coeffs.max_j));
        }
        let v = &self.verify;
        if v.lemma_max_j < 2 {
            return e("verify", "lemma_max_j", format!("lemma_max_j must be >= 2, got {}", v.lemma_max_j));
        }
        if v.oracle_max_j < 1 {
            return e("verify", "oracle_max_j", format!("oracle_max_j must be >= 1, got {}", v.oracle_max_j));
        }
        if v.bracket_max_j < 2 {
            return e("verify", "bracket_max_j", format!("bracket_max_j must be >= 2, got {}", v.bracket_max_j));
        }
        if v.homological_size < 1 || v.homological_size > 2000 {
            return e("verify", "homological_size", "homological_size must be in 1..=2000".into());
        }
        if self.bnf.max_j < 1 {
            return e("bnf", "max_j", format!("max_j must be >= 1, got {}", self.bnf.max_j));
        }
        let f = &self.flow;
        if let Err(err) = f.flow_config().validate() {
            let key = if !(f.dt > 0.0) { "dt" } else if !(f.t_final > 0.0) { "t_final" } else { "record_every" };
            return e("flow", key, err.to_string());
        }
        if let Some(m) = f.modes.iter().find(|m| m.j == 0 || m.j.abs() > self.bnf.max_j) {
            return e("flow", "modes", format!("mode {} outside 1..={} in modulus", m.j, self.bnf.max_j));
        }
        if !(f.random_amplitude > 0.0) {
            return e("flow", "random_amplitude", "random_amplitude must be > 0".into());
        }
        let w = &self.ww;
        if let Err(err) = w.solver_config().validate() {
            return e("ww", ww_key(&err.to_string()), err.to_string());
        }
        if !(w.epsilon > 0.0) {
            return e("ww", "epsilon", format!("epsilon must be > 0, got {}", w.epsilon));
        }
        let l = &self.lifespan;
        if l.epsilons.is_empty() || l.epsilons.iter().any(|x| !(*x > 0.0)) {
            return e("lifespan", "epsilons", "epsilons must be positive and non-empty".into());
        }
        if l.epsilons.windows(2).any(|p| p[1] >= p[0]) {
            return e("lifespan", "epsilons", "epsilons must be strictly decreasing".into());
        }
        let sc = SolverConfig { m: l.m, dno_order: l.dno_order, dt: l.dt, t_final: l.t_max, ..SolverConfig::default() };
        if let Err(err) = sc.validate() {
            return e("lifespan", ww_key(&err.to_string()), err.to_string());
        }
        if !(l.threshold_factor > 1.0) {
            return e("lifespan", "threshold_factor", "threshold_factor must be > 1".into());
        }
        Ok(())
    }
}

fn ww_key(msg: &str) -> &'static str {
    let keys = ["dno_order", "record_every", "sobolev_s", "ceiling", "modes_out", "filter", "dt", "t_final", "T "];
    if msg.starts_with("M ") {
        return "m";
    }
    for k in keys {
        if msg.contains(k) {
            return match k {
                "filter" => "filter_strength",
                "T " => "t_final",
                other => other,
            };
        }
    }
    "m"
}
