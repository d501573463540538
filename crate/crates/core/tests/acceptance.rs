//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::elliptic::{cosine_fixture, dno_oracle};
use wilton_core::birkhoff::{
    assemble_cubic_hamiltonian, assemble_resonant_hamiltonian, expand_h3_from_real, h2_table, max_coefficient_diff,
    poisson_bracket, solve_homological, HomKey, HomologicalCoefficients, PolyTable,
};
use wilton_core::resonance::{canonicalize, enumerate_resonances, verify_lemma_bounds, ResonanceSet, Sign, SignedMode, DEFAULT_TOL};
use wilton_core::resonant_flow::{flow_diagnostics, integrate_resonant, FlowConfig};
use wilton_core::transforms::{complex_to_wave, wave_to_complex, BonyWeylConfig, FourierField};
use wilton_core::waterwaves::{
    dno_apply, integrate_ww, lifespan_experiment, seed_state, Grid, LifespanConfig, Solver, SolverConfig, WwStatus,
};
use wilton_core::{PhysicalParams, SpectralState};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let out = f();
    let el = t0.elapsed();
    let in_time = el <= budget;
    let pass = out.pass && in_time;
    println!(
        "{} {name}: {} [{:.2}s / budget {:.0}s{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        el.as_secs_f64(),
        budget.as_secs_f64(),
        if in_time { "" } else { ", over budget" }
    );
    pass
}

fn inequality_sweep() -> Outcome {
    let r = verify_lemma_bounds(&PhysicalParams::deep(1.0, 1.0), 1000).expect("valid sweep");
    Outcome {
        pass: r.violations_a.is_empty() && r.checked_a == 500_500,
        detail: format!("{} pairs, {} violations, min ratio {:.4}", r.checked_a, r.violations_a.len(), r.min_ratio_a),
    }
}

fn resonance_ground_truth() -> Outcome {
    let wil = enumerate_resonances(&PhysicalParams::deep(1.0, 0.5), 512, DEFAULT_TOL);
    let gen = enumerate_resonances(&PhysicalParams::deep(1.0, 1.0), 512, DEFAULT_TOL);
    let mut orbit = vec![
        canonicalize([SignedMode::of(1, 2), SignedMode::of(-1, 1), SignedMode::of(-1, 1)]),
        canonicalize([SignedMode::of(1, -2), SignedMode::of(-1, -1), SignedMode::of(-1, -1)]),
    ];
    orbit.sort();
    let found: Vec<_> = wil.iter().map(|t| t.modes).collect();
    Outcome {
        pass: found == orbit && gen.is_empty(),
        detail: format!("kappa=0.5: {} triples (orbit match {}), kappa=1: {} triples", wil.len(), found == orbit, gen.len()),
    }
}

fn coefficient_oracle() -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for p in [PhysicalParams::deep(1.0, 0.5), PhysicalParams::deep(1.0, 1.0), PhysicalParams::finite(9.81, 0.07, 2.0)] {
        let a = expand_h3_from_real(&p, 20);
        let b = assemble_cubic_hamiltonian(&p, 20);
        if a.len() != b.len() {
            return Outcome { pass: false, detail: format!("key count {} vs {}", a.len(), b.len()) };
        }
        count += a.len();
        worst = worst.max(max_coefficient_diff(&a, &b).0);
    }
    Outcome { pass: worst < 1e-12, detail: format!("{count} keys over 3 parameter sets, max diff {worst:.2e}") }
}

fn bracket_cancellation() -> Outcome {
    let p = PhysicalParams::deep(1.0, 0.5);
    let h3 = PolyTable::from(&assemble_resonant_hamiltonian(&p, 32, DEFAULT_TOL));
    let b = poisson_bracket(&h3, &h2_table(&p, 32));
    Outcome { pass: !h3.is_empty() && b.max_abs() < 1e-13, detail: format!("max |coeff| {:.2e}", b.max_abs()) }
}

fn homological_residual() -> Outcome {
    let p = PhysicalParams::deep(1.0, 0.5);
    let set = ResonanceSet::new(&p, 12, DEFAULT_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sign = |s: i64| Sign::from_i64(s).expect("unit sign");
    let mut worst = 0.0_f64;
    let mut resonant = 0;
    for _ in 0..50 {
        let mut r = HomologicalCoefficients::default();
        r.insert(HomKey::new(sign(1), sign(1), sign(1), 1, 1, 2).expect("momentum"), C::new(0.7, -0.2));
        while r.len() < 200 {
            let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let sp = if rng.gen_bool(0.5) { 1 } else { -1 };
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            let n = rng.gen_range(1..=12) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let k = rng.gen_range(1..=12) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let sj: i64 = e * n + sp * k;
            if sj == 0 || sj.abs() > 12 {
                continue;
            }
            let key = HomKey::new(sign(s), sign(sp), sign(e), n, k, s * sj).expect("momentum");
            r.insert(key, C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        match solve_homological(&p, &r, &set, DEFAULT_TOL) {
            Ok(sol) => {
                worst = worst.max(sol.residual);
                resonant += sol.resonant.len();
            }
            Err(e) => return Outcome { pass: false, detail: e.to_string() },
        }
    }
    Outcome { pass: worst < 1e-12, detail: format!("50 x 200 keys, {resonant} resonant, max residual {worst:.2e}") }
}

fn resonant_flow_conservation() -> Outcome {
    let p = PhysicalParams::deep(1.0, 0.5);
    let h = assemble_resonant_hamiltonian(&p, 16, DEFAULT_TOL);
    let mut z0 = SpectralState::zeros(6);
    z0.set(1, C::new(0.05, 0.0));
    z0.set(2, C::from_polar(0.02, 0.3));
    z0.set(-1, C::from_polar(0.025, 1.0));
    z0.set(-2, C::from_polar(0.01, -0.7));
    z0.set(4, C::new(0.001, 0.002));
    z0.set(-5, C::new(-0.003, 0.001));
    let cfg = FlowConfig { dt: 0.01, t_final: 1000.0, record_every: 100, cutoff: Some(2.0), ..Default::default() };
    let tr = match integrate_resonant(&p, &h, &z0, &cfg) {
        Ok(t) => t,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let d = flow_diagnostics(&tr, &h, 1.0);
    let drift = |f: &dyn Fn(usize) -> f64| (0..d.len()).map(|i| ((f(i) - f(0)) / f(0)).abs()).fold(0.0, f64::max);
    let (dh2, dh3, dm) = (drift(&|i| d[i].h2), drift(&|i| d[i].h3), drift(&|i| d[i].momentum));
    let bit_exact = tr
        .records
        .iter()
        .all(|r| [3_i64, -3, 4, -4, 5, -5, 6, -6].iter().all(|&j| r.w.get(j).norm().to_bits() == z0.get(j).norm().to_bits()));
    Outcome {
        pass: dh2 < 1e-8 && dh3 < 1e-8 && dm < 1e-8 && bit_exact,
        detail: format!("drift H2 {dh2:.2e}, H3 {dh3:.2e}, momentum {dm:.2e}; high modes bit-exact {bit_exact}"),
    }
}

fn full_solver_conservation() -> Outcome {
    let p = PhysicalParams::deep(1.0, 1.0);
    let cfg = SolverConfig { m: 256, dt: 0.01, t_final: 100.0, record_every: 100, sobolev_s: 8.0, ..Default::default() };
    let solver = Solver::from_config(p, &cfg).expect("valid config");
    let st = seed_state(&p, &solver, 0.01, 8.0).expect("resolved seed");
    let tr = match integrate_ww(&p, &st, &cfg) {
        Ok(t) => t,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let (h0, m0) = (tr.records[0].hamiltonian, tr.records[0].momentum);
    let dh = tr.records.iter().map(|r| ((r.hamiltonian - h0) / h0).abs()).fold(0.0, f64::max);
    let dm = tr.records.iter().map(|r| ((r.momentum - m0) / m0).abs()).fold(0.0, f64::max);

    let grid = Grid::new(256).expect("grid");
    let surf = cosine_fixture(&grid, 0.05, 1.0);
    let oracle = dno_oracle(&grid, &surf, 64);
    let g = dno_apply(&PhysicalParams::finite(1.0, 1.0, 1.0), &grid, &surf.eta, &surf.psi, 4);
    let num = g.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let den = oracle.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let dno_err = num / den;
    Outcome {
        pass: tr.status == WwStatus::Completed && dh < 1e-6 && dm < 1e-8 && dno_err < 1e-4,
        detail: format!("H drift {dh:.2e}, momentum drift {dm:.2e}, DNO vs elliptic {dno_err:.2e}"),
    }
}

fn lifespan_scaling() -> Outcome {
    let p = PhysicalParams::deep(1.0, 1.0);
    match lifespan_experiment(&p, &[0.08, 0.04, 0.02], &LifespanConfig::default()) {
        Ok(r) => {
            let rows: Vec<String> = r
                .rows
                .iter()
                .map(|x| format!("eps={} T={}{}", x.epsilon, x.t_eps, if x.censored { " (censored)" } else { "" }))
                .collect();
            let fit = r.fit.as_ref().map_or("none".into(), |f| format!("{:.3} +/- {:.3}", f.slope, f.std_err));
            Outcome {
                pass: r.consistent(1.8),
                detail: format!("{}; slope {fit}; all censored {}", rows.join(", "), r.all_censored),
            }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn correspondence() -> Outcome {
    let p = PhysicalParams::deep(1.0, 0.5);
    let eps = 0.02;
    let mut z0 = SpectralState::zeros(8);
    z0.set(1, C::new(eps, 0.0));
    let h = assemble_resonant_hamiltonian(&p, 8, DEFAULT_TOL);
    let fc = FlowConfig { dt: 0.01, t_final: 1.0 / eps, record_every: 100, cutoff: Some(8.0), ..Default::default() };
    let nf = match integrate_resonant(&p, &h, &z0, &fc) {
        Ok(t) => t,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let solver = Solver::new(p, 64, 3, None).expect("grid");
    let u0 = FourierField::from_spectral_state(&z0).resize(solver.grid.kmax());
    let mut hat = solver.to_hat(&complex_to_wave(&p, &solver.grid, &u0));
    let bw = BonyWeylConfig::default();
    let (mut err, mut scale) = ([0.0_f64; 2], [0.0_f64; 2]);
    for (idx, rec) in nf.records.iter().enumerate() {
        if idx > 0 {
            for _ in 0..100 {
                hat = solver.step(&hat, 0.01);
            }
        }
        let u = wave_to_complex(&solver, &solver.to_state(&hat), &bw);
        for (i, k) in [1_i64, 2].into_iter().enumerate() {
            err[i] = err[i].max((u.get(k).norm() - rec.w.get(k).norm()).abs());
            scale[i] = scale[i].max(rec.w.get(k).norm());
        }
    }
    let (r1, r2) = (err[0] / scale[0], err[1] / scale[1]);
    Outcome { pass: r1 <= 0.2 && r2 <= 0.2, detail: format!("relative error |z1| {r1:.2e}, |z2| {r2:.2e} on t <= 50") }
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        run("inequality sweep (n2 <= 1000)", s(1), inequality_sweep),
        run("resonance ground truth (maxJ = 512)", s(10), resonance_ground_truth),
        run("coefficient oracle (|j| <= 20)", s(30), coefficient_oracle),
        run("bracket cancellation", s(60), bracket_cancellation),
        run("homological residual", s(60), homological_residual),
        run("resonant-flow conservation (T = 1000)", s(60), resonant_flow_conservation),
        run("full-solver conservation (T = 100)", s(300), full_solver_conservation),
        run("lifespan scaling", s(1800), lifespan_scaling),
        run("normal-form correspondence", s(300), correspondence),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} acceptance criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
