//! Compatibility of initial data with the boundary condition at r = 1.

use crate::fd::fornberg;
use crate::grid::RadialGrid;
use crate::model::{FluidParams, SymState};

/// (res1, res2): velocity mismatch on r = 1, and the momentum balance
/// -rho u.grad u + L u - grad P(rho) evaluated there with one-sided
/// differences.
pub fn compatibility_residual(state0: &SymState, grid: &RadialGrid, params: &FluidParams) -> (f64, f64) {
    let res1 = (state0.u_rad[0] - params.u_b).abs();
    let n1 = params.dim_n as f64 - 1.0;
    let xs: Vec<f64> = grid.nodes()[..4].to_vec();
    let w1 = fornberg(1.0, &xs, 1);
    let w2 = fornberg(1.0, &xs, 2);
    let dot = |w: &[f64], f: &[f64]| w.iter().zip(f).map(|(a, b)| a * b).sum::<f64>();
    let (rho, u) = (&state0.rho[..4], &state0.u_rad[..4]);
    let (u_r, u_rr, rho_r) = (dot(&w1, u), dot(&w2, u), dot(&w1, rho));
    // d/dr div u, with div u = u_r + (n-1) u / r at r = 1
    let ddiv = u_rr + n1 * (u_r - u[0]);
    let res2 = (-rho[0] * u[0] * u_r + params.nu() * ddiv - params.dpressure(rho[0]) * rho_r).abs();
    (res1, res2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::solve_steady;

    fn setup(m: usize) -> (FluidParams, RadialGrid, SymState) {
        let p = FluidParams::default();
        let g = RadialGrid::geometric(100.0, m).unwrap();
        let prof = solve_steady(&p, &g, 1e-10).unwrap();
        let s = SymState { t: 0.0, rho: prof.rho_t.clone(), u_rad: prof.u_t.clone() };
        (p, g, s)
    }

    #[test]
    fn steady_state_is_compatible_to_truncation() {
        let (p, g, s) = setup(256);
        let (r1, r2a) = compatibility_residual(&s, &g, &p);
        assert_eq!(r1, 0.0);
        let (p, g, s) = setup(512);
        let (_, r2b) = compatibility_residual(&s, &g, &p);
        // second-order one-sided stencils: halving h quarters the residual
        assert!(r2a < 1e-2 && r2b < r2a / 3.0, "{r2a} {r2b}");
    }

    #[test]
    fn boundary_velocity_mismatch() {
        let (p, g, mut s) = setup(256);
        s.u_rad[0] += 0.1;
        let (r1, _) = compatibility_residual(&s, &g, &p);
        assert!((r1 - 0.1).abs() < 1e-15);
    }

    #[test]
    fn interior_perturbation_is_invisible() {
        let (p, g, s0) = setup(256);
        let mut s = s0.clone();
        for (i, &r) in g.nodes().iter().enumerate() {
            if r > 2.0 && r < 3.0 {
                s.rho[i] += 0.02 * ((r - 2.0) * (3.0 - r)).powi(3);
            }
        }
        assert_eq!(compatibility_residual(&s, &g, &p), compatibility_residual(&s0, &g, &p));
    }
}
