//! One function per subcommand.

use std::path::Path;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use wilton_core::birkhoff::{
    assemble_cubic_hamiltonian, assemble_resonant_hamiltonian, expand_h3_from_real, h2_table, max_coefficient_diff,
    poisson_bracket, read_table, solve_homological, write_table, CubicKey, HomKey, HomologicalCoefficients, PolyTable,
};
use wilton_core::resonance::{enumerate_resonances, min_gap, verify_lemma_bounds, wilton_kappa, ResonanceSet, Sign};
use wilton_core::resonant_flow::{flow_diagnostics, integrate_resonant};
use wilton_core::waterwaves::{integrate_ww, lifespan_experiment, seed_state, Solver, WwStatus};
use wilton_core::{PhysicalParams, SpectralState};

use crate::config::RunConfig;
use crate::run::{fmt_f, Csv, Run};

/// Failure of a command, mapped to an exit code by the caller.
#[derive(Debug)]
pub enum CmdError {
    /// Bad input: exit 2.
    Config(String),
    /// Failed check or module error: exit 1.
    Failed(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Config(m) | CmdError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Failed(format!("i/o error: {e}"))
    }
}

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub text: Option<&'a str>,
    pub out: &'a Path,
    pub seed: u64,
}

impl Ctx<'_> {
    fn params(&self) -> Result<PhysicalParams, CmdError> {
        self.cfg.physical().map_err(|e| CmdError::Config(e.to_string()))
    }

    fn run(&self, cmd: &str) -> Result<Run, CmdError> {
        let mut run = Run::create(self.out, cmd, self.cfg, self.text)?;
        run.set("seed", json!(self.seed));
        eprintln!("run directory: {}", run.dir.display());
        Ok(run)
    }
}

fn key_string(k: &CubicKey) -> String {
    k.iter().map(ToString::to_string).collect::<Vec<_>>().join("")
}

fn failed(run: Run, msg: String) -> Result<(), CmdError> {
    let mut run = run;
    run.set("error", json!(msg));
    run.finish("partial")?;
    Err(CmdError::Failed(msg))
}

pub fn resonances(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let rc = &ctx.cfg.resonance;
    let mut run = ctx.run("resonances")?;
    let found = enumerate_resonances(&p, rc.max_j, rc.tol);
    let mut csv = Csv::new(&["sigma1", "j1", "sigma2", "j2", "sigma3", "j3", "phase"]);
    for t in &found {
        let mut cells: Vec<String> = t.modes.iter().flat_map(|m| [m.sigma.value().to_string(), m.j.to_string()]).collect();
        cells.push(fmt_f(t.phase));
        csv.row(&cells);
    }
    run.write("resonances.csv", csv.as_str())?;
    println!("resonances: {}", found.len());
    run.set("count", json!(found.len()));
    match min_gap(&p, rc.max_j.max(2), rc.tol) {
        Ok((gap, t)) => {
            println!("min_gap: {}", fmt_f(gap));
            run.set("min_gap", json!({ "gap": gap, "triple": key_string(&t.modes) }));
        }
        Err(e) => {
            println!("min_gap: none ({e})");
            run.set("min_gap", json!(null));
        }
    }
    run.finish("complete")?;
    Ok(())
}

pub fn min_gap_cmd(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let mc = &ctx.cfg.min_gap;
    let mut run = ctx.run("min-gap")?;
    let (gap, t) = match min_gap(&p, mc.max_j, mc.exclude_tol) {
        Ok(v) => v,
        Err(e) => return failed(run, e.to_string()),
    };
    let mut csv = Csv::new(&["max_j", "gap", "sigma1", "j1", "sigma2", "j2", "sigma3", "j3"]);
    let mut cells = vec![mc.max_j.to_string(), fmt_f(gap)];
    cells.extend(t.modes.iter().flat_map(|m| [m.sigma.value().to_string(), m.j.to_string()]));
    csv.row(&cells);
    run.write("min_gap.csv", csv.as_str())?;
    println!("min_gap: {} at {}", fmt_f(gap), key_string(&t.modes));
    run.set("min_gap", json!({ "gap": gap, "triple": key_string(&t.modes) }));
    run.finish("complete")?;
    Ok(())
}

pub fn wilton(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let j = ctx.cfg.wilton.j;
    let mut run = ctx.run("wilton")?;
    let kappa = match wilton_kappa(p.g, p.depth, j) {
        Ok(k) => k,
        Err(e) => return failed(run, e.to_string()),
    };
    let mut csv = Csv::new(&["j", "kappa"]);
    csv.row(&[j.to_string(), fmt_f(kappa)]);
    run.write("wilton.csv", csv.as_str())?;
    println!("{kappa}");
    run.set("kappa", json!(kappa));
    run.finish("complete")?;
    Ok(())
}

pub fn coeffs(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let cc = &ctx.cfg.coeffs;
    let tol = ctx.cfg.resonance.tol;
    let mut run = ctx.run("coeffs")?;
    let (h, t) = if cc.resonant_only {
        (assemble_resonant_hamiltonian(&p, cc.max_j, tol), Some(tol))
    } else {
        (assemble_cubic_hamiltonian(&p, cc.max_j), None)
    };
    run.write("coeffs.txt", &write_table(&h, t))?;
    println!("terms: {}", h.len());
    run.set("terms", json!(h.len()));
    run.finish("complete")?;
    Ok(())
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn random_homological(rng: &mut ChaCha8Rng, size: usize, max_j: i64) -> HomologicalCoefficients {
    let sign = |s: i64| Sign::from_i64(s).expect("unit sign");
    let mut r = HomologicalCoefficients::default();
    r.insert(HomKey::new(sign(1), sign(1), sign(1), 1, 1, 2).expect("momentum"), C::new(0.7, -0.2));
    let pm = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1_i64 } else { -1 };
    while r.len() < size {
        let (s, sp, e) = (pm(rng), pm(rng), pm(rng));
        let n = rng.gen_range(1..=max_j) * pm(rng);
        let k = rng.gen_range(1..=max_j) * pm(rng);
        let sj = e * n + sp * k;
        if sj == 0 || sj.abs() > max_j {
            continue;
        }
        let key = HomKey::new(sign(s), sign(sp), sign(e), n, k, s * sj).expect("momentum");
        r.insert(key, C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    r
}

fn table_check(path: &str) -> Result<Check, CmdError> {
    let text = std::fs::read_to_string(path).map_err(|e| CmdError::Config(format!("cannot read table {path}: {e}")))?;
    let (table, _) = read_table(&text).map_err(|e| CmdError::Config(format!("table {path}: {e}")))?;
    let oracle = expand_h3_from_real(&table.params, table.max_mode());
    let mut worst = (0.0_f64, None);
    for (k, t) in &table.terms {
        let d = match oracle.terms.get(k) {
            Some(o) if o.multiplicity == t.multiplicity => (o.coeff - t.coeff).norm(),
            _ => f64::INFINITY,
        };
        if d > worst.0 || worst.1.is_none() {
            worst = (d.max(worst.0), Some(*k));
        }
    }
    let at = worst.1.map_or("none".into(), |k| key_string(&k));
    Ok(Check {
        name: "coefficient table",
        passed: worst.0 < 1e-12,
        detail: format!("{path}: {} keys, oracle mismatch {:.2e} at {at}", table.len(), worst.0),
    })
}

pub fn verify(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let vc = &ctx.cfg.verify;
    let tol = ctx.cfg.resonance.tol;
    let table = vc.table.as_deref().map(table_check).transpose()?;
    let mut run = ctx.run("verify")?;
    let mut checks = Vec::new();

    let lemma = verify_lemma_bounds(&p, vc.lemma_max_j).map_err(|e| CmdError::Failed(e.to_string()))?;
    checks.push(Check {
        name: "inequality sweep",
        passed: lemma.passed(),
        detail: format!(
            "max_j {}: {} + {} pairs, {} + {} violations",
            lemma.max_j,
            lemma.checked_a,
            lemma.checked_b,
            lemma.violations_a.len(),
            lemma.violations_b.len()
        ),
    });

    let a = expand_h3_from_real(&p, vc.oracle_max_j);
    let b = assemble_cubic_hamiltonian(&p, vc.oracle_max_j);
    let (d, at) = max_coefficient_diff(&a, &b);
    checks.push(Check {
        name: "coefficient oracle",
        passed: a.len() == b.len() && d < 1e-12,
        detail: format!("{} keys, max diff {d:.2e}{}", b.len(), at.map_or(String::new(), |k| format!(" at {}", key_string(&k)))),
    });

    let set = ResonanceSet::new(&p, 12, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut worst = 0.0_f64;
    let mut hom_err = None;
    for _ in 0..vc.homological_instances {
        let r = random_homological(&mut rng, vc.homological_size, 12);
        match solve_homological(&p, &r, &set, tol) {
            Ok(sol) => worst = worst.max(sol.residual),
            Err(e) => {
                hom_err = Some(e.to_string());
                break;
            }
        }
    }
    checks.push(Check {
        name: "homological residual",
        passed: hom_err.is_none() && worst < 1e-12,
        detail: hom_err.unwrap_or_else(|| {
            format!("{} x {} keys, max residual {worst:.2e}", vc.homological_instances, vc.homological_size)
        }),
    });

    let h3 = PolyTable::from(&assemble_resonant_hamiltonian(&p, vc.bracket_max_j, tol));
    let br = poisson_bracket(&h3, &h2_table(&p, vc.bracket_max_j)).max_abs();
    checks.push(Check {
        name: "bracket cancellation",
        passed: br < 1e-13,
        detail: format!("{} resonant monomials, max |coeff| {br:.2e}", h3.len()),
    });

    checks.extend(table);

    let all = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let report = json!({
        "passed": all,
        "lemma_max_j": vc.lemma_max_j,
        "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
    });
    run.write("verify.json", &(serde_json::to_string_pretty(&report).unwrap_or_default() + "\n"))?;
    run.set("lemma_max_j", json!(vc.lemma_max_j));
    run.set("passed", json!(all));
    run.finish("complete")?;
    if all {
        Ok(())
    } else {
        let names: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Err(CmdError::Failed(format!("failed checks: {}", names.join(", "))))
    }
}

pub fn bnf_flow(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let (bc, fc) = (&ctx.cfg.bnf, &ctx.cfg.flow);
    let n = bc.max_j as usize;
    let mut z0 = SpectralState::zeros(n);
    if fc.modes.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let a = fc.random_amplitude;
        for j in z0.clone().modes() {
            z0.set(j, C::new(rng.gen_range(-a..a), rng.gen_range(-a..a)));
        }
    } else {
        for m in &fc.modes {
            z0.set(m.j, C::new(m.re, m.im));
        }
    }
    let h = assemble_resonant_hamiltonian(&p, bc.max_j, ctx.cfg.resonance.tol);
    let mut run = ctx.run("bnf-flow")?;
    run.set("resonant_terms", json!(h.len()));
    let tr = match integrate_resonant(&p, &h, &z0, &fc.flow_config()) {
        Ok(t) => t,
        Err(e) => return failed(run, e.to_string()),
    };
    let diag = flow_diagnostics(&tr, &h, fc.sobolev_s);
    let mut csv = Csv::new(&["t", "H2", "H3", "momentum", "sobolev_s_norm", "equiv_norm"]);
    for d in &diag {
        csv.row(&[d.t, d.h2, d.h3, d.momentum, d.sobolev_s_norm, d.equiv_norm].map(fmt_f));
    }
    run.write("flow.csv", csv.as_str())?;
    if fc.dump_modes {
        let mut m = Csv::new(&["t", "j", "re", "im"]);
        for i in 0..tr.records.len() {
            for (j, v) in tr.physical(i).iter() {
                m.row(&[fmt_f(tr.records[i].t), j.to_string(), fmt_f(v.re), fmt_f(v.im)]);
            }
        }
        run.write("flow_modes.csv", m.as_str())?;
    }
    let drift = |f: fn(&wilton_core::resonant_flow::FlowDiagnostics) -> f64| {
        let v0 = f(&diag[0]);
        diag.iter().map(|d| ((f(d) - v0) / v0).abs()).fold(0.0, f64::max)
    };
    let drifts = json!({ "H2": drift(|d| d.h2), "H3": drift(|d| d.h3), "momentum": drift(|d| d.momentum) });
    println!("records: {}, relative drift {drifts}", diag.len());
    run.set("cutoff", json!(tr.cutoff));
    run.set("relative_drift", drifts);
    run.finish("complete")?;
    Ok(())
}

pub fn ww_sim(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let wc = &ctx.cfg.ww;
    let sc = wc.solver_config();
    let solver = Solver::from_config(p, &sc).map_err(|e| CmdError::Config(e.to_string()))?;
    let mut run = ctx.run("ww-sim")?;
    let state = match seed_state(&p, &solver, wc.epsilon, wc.sobolev_s) {
        Ok(s) => s,
        Err(e) => return failed(run, e.to_string()),
    };
    let tr = match integrate_ww(&p, &state, &sc) {
        Ok(t) => t,
        Err(e) => return failed(run, e.to_string()),
    };
    let mut header: Vec<String> = ["t", "H", "mass", "momentum", "mixed_norm"].map(String::from).to_vec();
    header.extend((1..=wc.modes_out).map(|k| format!("mode_amp_{k}")));
    let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for r in &tr.records {
        let mut cells = vec![fmt_f(r.t), fmt_f(r.hamiltonian), fmt_f(r.mass), fmt_f(r.momentum), fmt_f(r.mixed_norm)];
        cells.extend(r.mode_amp.iter().map(|v| fmt_f(*v)));
        csv.row(&cells);
    }
    run.write("ww.csv", csv.as_str())?;
    let status = match tr.status {
        WwStatus::Completed => "complete",
        WwStatus::Ceiling { .. } => "partial: norm ceiling reached",
        WwStatus::NonFinite { .. } => "partial: non-finite state",
    };
    println!("records: {}, status: {status}", tr.records.len());
    run.set("solver_status", serde_json::to_value(&tr.status).unwrap_or_default());
    run.finish(status)?;
    Ok(())
}

pub fn lifespan(ctx: &Ctx) -> Result<(), CmdError> {
    let p = ctx.params()?;
    let lc = &ctx.cfg.lifespan;
    let mut run = ctx.run("lifespan")?;
    let res = match lifespan_experiment(&p, &lc.epsilons, &lc.lifespan_config()) {
        Ok(r) => r,
        Err(e) => return failed(run, e.to_string()),
    };
    let mut csv = Csv::new(&["epsilon", "T_eps", "censored_flag"]);
    for r in &res.rows {
        csv.row(&[fmt_f(r.epsilon), fmt_f(r.t_eps), u8::from(r.censored).to_string()]);
        println!("eps {} T {}{}", r.epsilon, r.t_eps, if r.censored { " (censored)" } else { "" });
    }
    run.write("lifespan.csv", csv.as_str())?;
    let consistent = res.consistent(lc.p_min);
    match &res.fit {
        Some(f) => println!("fitted exponent {:.4} +/- {:.4}; consistent with p >= {}: {consistent}", f.slope, f.std_err, lc.p_min),
        None => println!("no fit; consistent with p >= {}: {consistent}", lc.p_min),
    }
    run.set("fit", serde_json::to_value(&res.fit).unwrap_or_default());
    run.set("all_censored", json!(res.all_censored));
    run.set("max_ratio", json!(res.rows.iter().map(|r| r.max_ratio).collect::<Vec<_>>()));
    run.set("consistent", json!(consistent));
    run.finish("complete")?;
    Ok(())
}
