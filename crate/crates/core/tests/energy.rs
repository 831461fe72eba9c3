use outflow_core::energy::{equivalence_constants, h_identities, h_quadrature, potential_energy_h, verify_energy};
use outflow_core::FluidParams;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_is_nonnegative_and_vanishes_on_diagonal(z in 0.2f64..3.0, x in 0.2f64..3.0, gamma in 1.0f64..2.5) {
        let p = FluidParams { gamma, ..FluidParams::default() };
        let h = potential_energy_h(z, x, &p).unwrap();
        prop_assert!(h >= 0.0);
        prop_assert!(potential_energy_h(x, x, &p).unwrap().abs() <= 1e-14);
        if (z - x).abs() > 1e-3 {
            prop_assert!(h > 0.0);
        }
    }

    #[test]
    fn closed_form_matches_integral(z in 0.3f64..2.5, x in 0.3f64..2.5, gamma in 1.0f64..2.5) {
        let p = FluidParams { gamma, ..FluidParams::default() };
        let h = potential_energy_h(z, x, &p).unwrap();
        let q = h_quadrature(z, x, &p).unwrap();
        prop_assert!((h - q).abs() <= 1e-8 * q.abs().max(1e-12));
    }

    #[test]
    fn identities_hold(z in 0.3f64..2.5, x in 0.3f64..2.5, gamma in 1.05f64..2.5) {
        prop_assume!((z - x).abs() > 1e-2);
        let p = FluidParams { gamma, ..FluidParams::default() };
        prop_assert!(h_identities(z, x, &p).unwrap().max() <= 1e-6);
    }
}

#[test]
fn quadratic_equivalence_constants_are_ordered() {
    for gamma in [1.0, 1.4, 2.0, 3.0] {
        let p = FluidParams { gamma, ..FluidParams::default() };
        let (lo, hi) = equivalence_constants(0.5, 1.5, 41, &p).unwrap();
        assert!(0.0 < lo && lo <= hi, "gamma {gamma}: [{lo}, {hi}]");
    }
}

#[test]
fn full_suite_passes() {
    let s = verify_energy(10).unwrap();
    assert!(s.all_pass(), "{:?}", s.failures());
}
