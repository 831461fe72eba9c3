use outflow_core::{solve_steady, verify_decay, div_u_tilde, Error, FluidParams, RadialGrid};
use proptest::prelude::*;

fn profile(p: &FluidParams) -> outflow_core::SteadyProfile {
    solve_steady(p, &RadialGrid::geometric(200.0, 1024).unwrap(), 1e-9).unwrap()
}

#[test]
fn default_profile_boundary_and_far_field() {
    let p = FluidParams::default();
    let s = profile(&p);
    assert!((s.u_t[0] - p.u_b).abs() < 1e-14);
    let last = s.len() - 1;
    assert!(s.rho_dev[last].abs() <= 1e-9 * p.rho_plus);
    assert!(s.rho_t[0] < p.rho_plus, "outflow thins the gas at the boundary");
}

#[test]
fn decay_rates() {
    let rep = verify_decay(&profile(&FluidParams::default())).unwrap();
    for q in ["rho-rho_plus", "d_u", "d_rho", "d2_rho"] {
        let f = rep.get(q).unwrap();
        assert!(f.within(0.2), "{q}: slope {} vs {}", f.slope, f.target);
    }
    // U'' ~ r^-4 in three dimensions
    assert!((rep.get("d2_u").unwrap().slope + 4.0).abs() < 0.2);
}

#[test]
fn divergence_is_positive() {
    let s = profile(&FluidParams::default());
    let d = div_u_tilde(&s);
    assert!(d.values.iter().all(|v| *v > 0.0));
}

#[test]
fn inflow_rejected() {
    let p = FluidParams { u_b: 0.1, ..FluidParams::default() };
    let e = solve_steady(&p, &RadialGrid::geometric(200.0, 256).unwrap(), 1e-9).unwrap_err();
    assert!(matches!(e, Error::ConstraintViolation(ref m) if m.contains("u_b < 0")), "{e}");
}

#[test]
fn zero_boundary_speed_is_rest() {
    let p = FluidParams { u_b: 0.0, ..FluidParams::default() };
    let s = solve_steady(&p, &RadialGrid::geometric(50.0, 128).unwrap(), 1e-9).unwrap();
    assert!(s.rho_t.iter().all(|r| *r == p.rho_plus));
    assert!(s.u_t.iter().all(|u| *u == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monotone_with_constant_flux(u_b in -0.1f64..-0.01, mu in 0.5f64..2.0, gamma in 1.1f64..2.0) {
        let p = FluidParams { u_b, mu, gamma, ..FluidParams::default() };
        let s = profile(&p);
        for i in 1..s.len() {
            prop_assert!(s.rho_t[i] >= s.rho_t[i - 1]);
            prop_assert!(s.u_t[i].abs() <= s.u_t[i - 1].abs());
        }
        let r = s.grid.nodes();
        let flux0 = s.rho_t[0] * s.u_t[0];
        for i in 0..s.len() {
            let f = r[i] * r[i] * s.rho_t[i] * s.u_t[i];
            prop_assert!(((f - flux0) / flux0).abs() <= 1e-10, "flux drift at r = {}", r[i]);
        }
    }
}
