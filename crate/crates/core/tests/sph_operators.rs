use outflow_core::sph::cutoff::DEFAULT_WIDTH;
use outflow_core::sph::hardy::{hardy_check, HardyGrid, HARDY_CONSTANT};
use outflow_core::sph::ops::{cart_div, cart_grad, cart_laplacian, sph_div, sph_grad, sph_lap};
use outflow_core::sph::{build_cutoffs, Chart, Vec3};
use proptest::prelude::*;

fn field(x: Vec3) -> f64 {
    (0.3 * x[0]).sin() * (0.2 * x[1] + 0.1).cos() + x[2] * x[2] / (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
}

fn vfield(x: Vec3) -> Vec3 {
    [field(x), x[0] * x[1] * 0.1, (0.5 * x[2]).sin() * x[0]]
}

/// Points with 1.2 < |x| < 5 that both charts can evaluate.
fn point() -> impl Strategy<Value = Vec3> {
    (1.2f64..5.0, 0.45f64..2.7, 0.0f64..std::f64::consts::TAU).prop_filter_map("chart axis", |(r, th, ph)| {
        let x = [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()];
        let off_h = (x[0] * x[0] + x[2] * x[2]).sqrt() / r;
        (th.sin() > 0.4 && off_h > 0.4).then_some(x)
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spherical_operators_match_cartesian(x in point()) {
        for chart in [Chart::V, Chart::H] {
            let g = sph_grad(&field, chart, x).unwrap();
            let gc = cart_grad(&field, x);
            for k in 0..3 {
                prop_assert!(close(g[k], gc[k], 1e-6), "{chart:?} grad {k}: {} vs {}", g[k], gc[k]);
            }
            prop_assert!(close(sph_lap(&field, chart, x).unwrap(), cart_laplacian(&field, x), 1e-5));
            prop_assert!(close(sph_div(&vfield, chart, x).unwrap(), cart_div(&vfield, x), 1e-6));
        }
    }

    #[test]
    fn cutoffs_partition(r in 1.0f64..10.0, th in 0.0f64..std::f64::consts::PI, ph in 0.0f64..std::f64::consts::TAU) {
        let cut = build_cutoffs(DEFAULT_WIDTH).unwrap();
        let x = [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()];
        let (v, h) = (cut.chi(Chart::V, x), cut.chi(Chart::H, x));
        prop_assert!((0.0..=1.0).contains(&v) && (0.0..=1.0).contains(&h));
        prop_assert!(v + h >= 1.0 - 1e-12, "chi_V + chi_H = {}", v + h);
    }
}

#[test]
fn hardy_holds_for_decaying_field() {
    let u = |x: Vec3| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        [x[1] / (r2 * r2), 1.0 / r2, x[0] * x[2] / (r2 * r2)]
    };
    let res = hardy_check(&u, &HardyGrid::default()).unwrap();
    assert!(res.holds(), "{res:?}");
    assert!(res.ratio <= HARDY_CONSTANT);
}
