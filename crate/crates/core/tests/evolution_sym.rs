use outflow_core::discrete::{Fields, Layout};
use outflow_core::error::Error;
use outflow_core::evolution::*;
use outflow_core::grid::RadialGrid;
use outflow_core::model::FluidParams;
use outflow_core::stationary::solve_steady;

fn max_abs(f: &Fields) -> f64 {
    f.rho.iter().chain(&f.ur).chain(&f.ut).fold(0.0, |m, x| m.max(x.abs()))
}

fn setup(r_max: f64, m: usize, balanced: bool) -> (Scheme, Fields) {
    let p = FluidParams::default();
    let l = Layout::Sym(RadialGrid::stretched(r_max, m, 0.1).unwrap());
    let prof = solve_steady(&p, l.radial(), 1e-7).unwrap();
    let bg = Fields::from_profile(&l, &prof).unwrap();
    (Scheme::new(l, p, bg.clone(), balanced).unwrap(), bg)
}

fn bumped(s: &Scheme, bg: &Fields, amp: f64) -> Fields {
    let pert = Perturbation { amplitude: amp, ..Perturbation::default() };
    let mut x = pert.apply(&s.layout, bg, 1.0);
    s.apply_bc(&mut x, None);
    x
}

#[test]
fn steady_profile_is_nearly_fixed() {
    let (raw, bg) = setup(40.0, 255, false);
    let mut b = bg.clone();
    raw.apply_bc(&mut b, None);
    let residual = max_abs(&raw.rhs(&b));
    assert!(residual > 0.0 && residual < 1e-2, "{residual}");
    let dt = 0.9 * raw.cfl_limit(&b);
    let mut s = b.clone();
    for n in 0..1000 {
        s = raw.step(&s, n as f64 * dt, dt).unwrap();
    }
    let drift = max_abs(&s.minus(&b));
    assert!(drift <= 10.0 * residual * 1000.0 * dt, "{drift} vs residual {residual}");

    // balanced: the profile is a fixed point
    let (bal, _) = setup(40.0, 255, true);
    let mut s = b.clone();
    for n in 0..1000 {
        s = bal.step(&s, n as f64 * dt, dt).unwrap();
    }
    assert!(max_abs(&s.minus(&b)) < 1e-13);
}

#[test]
fn uniform_rest_state_of_no_flow_has_zero_rhs() {
    // with u ≡ 0 and constant density every term vanishes (u_b is only imposed on r = 1)
    let p = FluidParams::default();
    let l = Layout::Sym(RadialGrid::uniform(5.0, 40).unwrap());
    let n = l.len();
    let s = Fields { rho: vec![1.3; n], ur: vec![0.0; n], ut: vec![0.0; n] };
    let sch = Scheme::new(l, p, s.clone(), false).unwrap();
    assert!(max_abs(&sch.raw_rhs(&s)) < 1e-13);
}

#[test]
fn zero_viscosity_is_rejected() {
    let p = FluidParams { mu: 0.0, ..FluidParams::default() };
    let l = Layout::Sym(RadialGrid::uniform(5.0, 40).unwrap());
    let n = l.len();
    let s = Fields { rho: vec![1.0; n], ur: vec![0.0; n], ut: vec![0.0; n] };
    assert!(Scheme::new(l, p, s, false).is_err());
}

#[test]
fn cfl_and_positivity_errors() {
    let (s, bg) = setup(20.0, 63, true);
    let x = bumped(&s, &bg, 0.02);
    let lim = s.cfl_limit(&x);
    assert!(matches!(s.step(&x, 0.0, 1.01 * lim), Err(Error::CflViolation { .. })));
    let mut bad = x.clone();
    bad.rho[5] = -0.1;
    assert!(matches!(s.sym_rhs(&bad.to_sym(0.0)), Err(Error::PositivityLoss { node: 5, .. })));
}

#[test]
fn boundary_velocity_is_preserved() {
    let (s, bg) = setup(20.0, 127, true);
    let pert = Perturbation { amplitude: 0.04, support: (1.01, 2.0), ..Perturbation::default() };
    let mut x = pert.apply(&s.layout, &bg, 1.0);
    s.apply_bc(&mut x, None);
    let d = s.rhs(&x);
    assert_eq!(d.ur[0], 0.0);
    let dt = 0.9 * s.cfl_limit(&x);
    let y = s.step(&x, 0.0, dt).unwrap();
    // ψ = u − ũ on r = 1: its discrete time difference is exactly zero
    assert_eq!(y.ur[0] - x.ur[0], 0.0);
    assert_eq!(y.ur[0], s.params.u_b);
    // ρ is evolved on r = 1
    assert!(y.rho[0] != x.rho[0]);
}

#[test]
fn mass_bookkeeping_per_step() {
    // unbalanced, so the change of mass is exactly the boundary fluxes
    let (s, bg) = setup(20.0, 127, false);
    let x = bumped(&s, &bg, 0.04);
    let dt = 0.9 * s.cfl_limit(&x);
    let mut s1 = x.clone();
    let d0 = s.rhs(&x);
    for k in 0..x.len() {
        s1.rho[k] += dt * d0.rho[k];
        s1.ur[k] += dt * d0.ur[k];
    }
    s.apply_bc(&mut s1, None);
    let y = s.step(&x, 0.0, dt).unwrap();
    let net = |f: &Fields| {
        let (i, o) = s.mass_fluxes(f);
        i - o
    };
    let dm = s.evolved_mass(&y) - s.evolved_mass(&x);
    let expect = 0.5 * dt * (net(&x) + net(&s1));
    let scale = dm.abs().max(dt * s.mass_fluxes(&x).0.abs());
    assert!((dm - expect).abs() <= 1e-8 * scale, "{dm} {expect}");
}

#[test]
fn step_doubling_is_second_order() {
    let (s, bg) = setup(20.0, 190, true);
    let x = bumped(&s, &bg, 0.02);
    let (diffs, orders) = time_refinement(&s, &x, 1.0, 1.0 / 600.0, 4).unwrap();
    assert!(diffs[0] > 0.0);
    for o in &orders {
        assert!((o - 2.0).abs() < 0.2, "{orders:?}");
    }
}

#[test]
fn manufactured_solution_converges() {
    let p = FluidParams { lambda: 0.5, ..FluidParams::default() };
    let st = mms_convergence_sym(p, 40, 3, 0.2).unwrap();
    assert!(st.fitted_order() >= 1.8, "{st:?}");
    assert!(st.levels.windows(2).all(|w| w[1].1 < w[0].1));
}

fn settings(t_end: f64, amp: f64) -> RunSettings {
    RunSettings {
        t_end,
        dt: None,
        cfl_safety: DEFAULT_SAFETY,
        perturbation: Perturbation { amplitude: amp, ..Perturbation::default() },
        output_every: 0.5,
        reform_every: 10,
        steady_tol: 1e-7,
        keep_snapshots: false,
        probe_radii: vec![2.0],
        decay_factor: 10.0,
    }
}

#[test]
fn zero_perturbation_passes_trivially() {
    let l = Layout::Sym(RadialGrid::stretched(30.0, 127, 0.1).unwrap());
    let log = run_stability(l, FluidParams::default(), &settings(2.0, 0.0)).unwrap();
    assert!(log.decay.peak < 1e-13, "{:?}", log.decay);
    assert!(log.pass(), "{:?}", log.checks);
    log.require_decay().unwrap();
}

#[test]
fn amplitude_sweep_energy_is_quadratic() {
    let l = Layout::Sym(RadialGrid::stretched(60.0, 511, 0.1).unwrap());
    let mut peaks = Vec::new();
    for amp in [0.01, 0.02, 0.04] {
        let log = run_stability(l.clone(), FluidParams::default(), &settings(25.0, amp)).unwrap();
        assert!(log.pass(), "amplitude {amp}: {:?}", log.checks);
        peaks.push(log.reports.iter().map(|r| r.total_relative_energy).fold(0.0, f64::max));
    }
    for w in peaks.windows(2) {
        let ratio = w[1] / w[0];
        assert!((ratio - 4.0).abs() <= 0.3 * 4.0, "{peaks:?}");
    }
}

#[test]
fn short_run_is_deterministic() {
    let l = Layout::Sym(RadialGrid::stretched(30.0, 127, 0.1).unwrap());
    let a = run_stability(l.clone(), FluidParams::default(), &settings(1.0, 0.02)).unwrap();
    let b = run_stability(l, FluidParams::default(), &settings(1.0, 0.02)).unwrap();
    assert_eq!(a.final_state, b.final_state);
}

#[test]
fn unfinished_decay_is_dnf() {
    let l = Layout::Sym(RadialGrid::stretched(30.0, 127, 0.1).unwrap());
    let mut cfg = settings(0.05, 0.02);
    cfg.decay_factor = 1e6;
    let log = run_stability(l, FluidParams::default(), &cfg).unwrap();
    assert!(matches!(log.require_decay(), Err(Error::DidNotFinish(_))));
}

#[test]
fn perturbation_validation() {
    let l = Layout::Sym(RadialGrid::stretched(30.0, 127, 0.1).unwrap());
    let mut cfg = settings(1.0, 0.02);
    cfg.perturbation.support = (0.9, 2.0);
    assert!(matches!(run_stability(l.clone(), FluidParams::default(), &cfg), Err(Error::ConstraintViolation(_))));
    cfg.perturbation.support = (1.5, 3.0);
    cfg.perturbation.amplitude = 0.9;
    assert!(run_stability(l, FluidParams::default(), &cfg).is_err());
}
