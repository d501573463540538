use num_complex::Complex64 as C;

use wilton_core::birkhoff::assemble_resonant_hamiltonian;
use wilton_core::resonance::DEFAULT_TOL;
use wilton_core::resonant_flow::{integrate_resonant, FlowConfig};
use wilton_core::spectra::{g0_symbol, omega};
use wilton_core::transforms::{
    complex_to_wave, good_unknown, mixed_norm, to_complex, wave_to_complex, BonyWeylConfig, FourierField,
};
use wilton_core::waterwaves::{integrate_ww, seed_state, Solver, SolverConfig, WaveState, WwStatus};
use wilton_core::{PhysicalParams, SpectralState};

fn smooth_state(solver: &Solver, a: f64) -> WaveState {
    let g = &solver.grid;
    let x: Vec<f64> = (0..g.m()).map(|i| g.x(i)).collect();
    WaveState {
        eta: x.iter().map(|x| a * (x.cos() + 0.4 * (2.0 * x + 0.3).sin() - 0.1 * (3.0 * x).cos())).collect(),
        psi: x.iter().map(|x| a * (0.8 * x.sin() - 0.3 * (2.0 * x).cos() + 0.05 * (4.0 * x).sin())).collect(),
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn sup(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

#[test]
fn linear_regime_matches_exact_flow() {
    let p = PhysicalParams::finite(1.0, 0.5, 2.0);
    let cfg = SolverConfig { m: 64, dt: 0.01, t_final: 10.0, record_every: 1000, ..Default::default() };
    let solver = Solver::from_config(p, &cfg).unwrap();
    let rel = |e: f64| {
        let st = smooth_state(&solver, e);
        let tr = integrate_ww(&p, &st, &cfg).unwrap();
        let exact = solver.to_state(&solver.propagate(&solver.to_hat(&st), 10.0));
        let err = sup_diff(&tr.final_state.eta, &exact.eta).max(sup_diff(&tr.final_state.psi, &exact.psi));
        err / sup(&exact.eta).max(sup(&exact.psi))
    };
    // the deviation is the quadratic nonlinearity: exactly linear in the amplitude
    let (a, b) = (rel(1e-6), rel(1e-7));
    assert!((a / b - 10.0).abs() < 1e-3, "{a:e} {b:e}");
    assert!(rel(1e-9) < 1e-8);
}

#[test]
fn hamiltonian_is_quadratic_to_third_order() {
    let p = PhysicalParams::deep(1.0, 0.7);
    let solver = Solver::new(p, 64, 3, None).unwrap();
    let err = |e: f64| {
        let st = smooth_state(&solver, e);
        let h = solver.hamiltonian(&st);
        let (eta, psi) = solver.fields(&solver.to_hat(&st));
        let u = to_complex(&p, &eta, &psi);
        let h2c: f64 = u.iter().map(|(k, v)| omega(&p, k as f64) * v.norm_sqr()).sum();
        let h2 = solver.hamiltonian_quadratic(&st);
        assert!((h2 - h2c).abs() < 1e-12 * h2);
        (h - h2).abs()
    };
    let (a, b) = (err(1e-2), err(5e-3));
    assert!(((a / b).log2() - 3.0).abs() < 0.1, "rate {}", (a / b).log2());
}

#[test]
fn velocity_trace_first_order() {
    let p = PhysicalParams::finite(1.0, 1.0, 1.0);
    let solver = Solver::new(p, 64, 3, None).unwrap();
    let err = |e: f64| {
        let st = smooth_state(&solver, e);
        let (b, v) = solver.velocity_trace(&st);
        let h = solver.to_hat(&st);
        let g0psi = solver.grid.to_real(&solver.grid.apply(&h.psi, |k| g0_symbol(&p, k)));
        // V = psi_x - eta_x B by construction
        let eta_x = solver.grid.to_real(&solver.grid.dx(&h.eta));
        let psi_x = solver.grid.to_real(&solver.grid.dx(&h.psi));
        let ex_b = solver.grid.product(&eta_x, &b);
        for i in 0..b.len() {
            assert!((v[i] - (psi_x[i] - ex_b[i])).abs() < 1e-13);
        }
        sup_diff(&b, &g0psi)
    };
    let (a, b) = (err(1e-2), err(5e-3));
    assert!(((a / b).log2() - 2.0).abs() < 0.1);
}

#[test]
fn conservation_at_eps_001() {
    let p = PhysicalParams::deep(1.0, 1.0);
    let cfg = SolverConfig { m: 256, dt: 0.01, t_final: 100.0, record_every: 100, ..Default::default() };
    let solver = Solver::from_config(p, &cfg).unwrap();
    let st = seed_state(&p, &solver, 0.01, 8.0).unwrap();
    let tr = integrate_ww(&p, &st, &cfg).unwrap();
    assert_eq!(tr.status, WwStatus::Completed);
    let (h0, m0) = (tr.records[0].hamiltonian, tr.records[0].momentum);
    for r in &tr.records {
        assert!(((r.hamiltonian - h0) / h0).abs() < 1e-6);
        assert!(((r.momentum - m0) / m0).abs() < 1e-8);
        assert!(r.mass.abs() < 1e-12);
    }
}

#[test]
fn forward_then_backward_returns() {
    let p = PhysicalParams::deep(1.0, 0.5);
    let solver = Solver::new(p, 64, 3, None).unwrap();
    let st = smooth_state(&solver, 0.02);
    let h0 = solver.to_hat(&st);
    let mut h = h0.clone();
    for _ in 0..500 {
        h = solver.step(&h, 0.01);
    }
    for _ in 0..500 {
        h = solver.step(&h, -0.01);
    }
    let back = solver.to_state(&h);
    let err = sup_diff(&back.eta, &st.eta).max(sup_diff(&back.psi, &st.psi));
    assert!(err < 1e-10 * sup(&st.eta), "{err:e}");
}

#[test]
fn doubling_the_grid_changes_little() {
    let p = PhysicalParams::deep(1.0, 1.0);
    let run = |m: usize| {
        let cfg = SolverConfig { m, dt: 0.01, t_final: 10.0, record_every: 1000, ..Default::default() };
        let solver = Solver::from_config(p, &cfg).unwrap();
        let unit = smooth_state(&solver, 1.0);
        let (e, s) = solver.fields(&solver.to_hat(&unit));
        let st = smooth_state(&solver, 0.01 / mixed_norm(&e, &s, 8.0));
        let tr = integrate_ww(&p, &st, &cfg).unwrap();
        let h = solver.to_hat(&tr.final_state);
        let (e, s) = solver.fields(&h);
        (e.resize(20), s.resize(20))
    };
    let (e1, s1) = run(64);
    let (e2, s2) = run(128);
    let de = e1.map(|k, v| v - e2.get(k));
    let ds = s1.map(|k, v| v - s2.get(k));
    assert!(mixed_norm(&de, &ds, 8.0) < 1e-8);
}

#[test]
fn ceiling_halts_the_run() {
    let p = PhysicalParams::deep(1.0, 1.0);
    let cfg = SolverConfig { m: 32, dt: 0.01, t_final: 1.0, ceiling: 1e-3, ..Default::default() };
    let solver = Solver::from_config(p, &cfg).unwrap();
    let st = seed_state(&p, &solver, 0.01, 8.0).unwrap();
    let tr = integrate_ww(&p, &st, &cfg).unwrap();
    assert!(matches!(tr.status, WwStatus::Ceiling { .. }));
    assert_eq!(tr.records.len(), 2);
}

#[test]
fn good_unknown_properties() {
    let p = PhysicalParams::deep(1.0, 1.0);
    let solver = Solver::new(p, 128, 3, None).unwrap();
    let grid = &solver.grid;
    let bw = BonyWeylConfig::default();
    let x: Vec<f64> = (0..grid.m()).map(|i| grid.x(i)).collect();

    let flat = WaveState { eta: vec![0.0; 128], psi: x.iter().map(|x| x.cos()).collect() };
    let om = good_unknown(&solver, &flat, &bw);
    let psi = FourierField::from_samples(grid, &flat.psi, grid.kmax());
    assert!(om.max_diff(&psi) < 1e-15);

    let state = |e: f64| WaveState {
        eta: x.iter().map(|x| e * (20.0 * x).cos()).collect(),
        psi: x.iter().map(|x| e * x.cos()).collect(),
    };
    let mut ratios = vec![];
    for e in [1e-2, 1e-3, 1e-4] {
        let st = state(e);
        let om = good_unknown(&solver, &st, &bw);
        let psi = FourierField::from_samples(grid, &st.psi, grid.kmax());
        let corr = om.map(|k, v| v - psi.get(k));
        ratios.push(corr.sobolev_norm(1.0) / (e * e));
        if e == 1e-3 {
            let (b, _) = solver.velocity_trace(&st);
            let prod: Vec<f64> = b.iter().zip(&st.eta).map(|(b, n)| -b * n).collect();
            let mut prod = FourierField::from_samples(grid, &prod, grid.kmax());
            prod.set(0, C::new(0.0, 0.0));
            let diff = corr.map(|k, v| v - prod.get(k));
            assert!(diff.sobolev_norm(0.0) < 0.1 * corr.sobolev_norm(0.0));
        }
    }
    assert!(ratios.iter().all(|r| (r / ratios[2] - 1.0).abs() < 0.1), "{ratios:?}");
}

#[test]
fn resonant_flow_tracks_full_solver_at_wilton() {
    let p = PhysicalParams::deep(1.0, 0.5);
    let eps = 0.02;
    let t_final = 1.0 / eps;
    let mut z0 = SpectralState::zeros(8);
    z0.set(1, C::new(eps, 0.0));
    let h = assemble_resonant_hamiltonian(&p, 8, DEFAULT_TOL);
    let fc = FlowConfig { dt: 0.01, t_final, record_every: 100, cutoff: Some(8.0), ..Default::default() };
    let nf = integrate_resonant(&p, &h, &z0, &fc).unwrap();

    let solver = Solver::new(p, 64, 3, None).unwrap();
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
    assert!(err[0] / scale[0] < 0.2 && err[1] / scale[1] < 0.2, "{err:?} {scale:?}");
    // mode 2 is driven by the resonance
    assert!(scale[1] > 0.1 * eps);
}
