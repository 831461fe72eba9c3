//! Perturbation form of the equations around a steady background and the
//! check that it is algebraically the same discrete system.
//!
//! With φ = ρ − ρ̃, ψ = u − ũ, q(ρ) = P'(ρ)/ρ and q₊ = q(ρ₊):
//!
//! mass:     φ_t + u·∇φ + ρ₊ div ψ = f⁰ − S⁰
//!   f⁰ = −φ div ψ + (ρ₊ − ρ̃) div ψ − ψ·∇ρ̃ − φ div ũ,  S⁰ = ũ·∇ρ̃ + ρ̃ div ũ
//!
//! momentum: ψ_t − (μ/ρ₊)Δψ − ((μ+λ)/ρ₊)∇div ψ + q₊∇φ = f − (ρ̃/ρ) S
//!   f = −(ρ − ρ₊)/(ρ₊ρ) (μΔψ + (μ+λ)∇div ψ) + f̃
//!   f̃ = −ψ·∇ψ − ũ·∇ψ − ψ·∇ũ − (φ/ρ) ũ·∇ũ + (q₊ − q(ρ))∇φ − (P'(ρ) − P'(ρ̃))/ρ ∇ρ̃
//!   S = ũ·∇ũ + q(ρ̃)∇ρ̃ − (μΔũ + (μ+λ)∇div ũ)/ρ̃
//!
//! S⁰ and S vanish for an exact steady state; keeping them makes the
//! identity hold for the discrete background too. Note the sign of the
//! last term of f̃ and that it carries P'(ρ̃), not P'(ρ₊).

use crate::discrete::{adv, adv_scalar, div, grad, grad_div, lap_vec, Fields, Jet2, Layout, Parity};
use crate::error::{Error, Result};
use crate::model::{FluidParams, SymState};
use crate::stationary::SteadyProfile;

/// Agreement required between the two residuals, relative to 1 + max|orig|.
pub const REFORM_TOL: f64 = 1e-8;

/// Residuals (mass, radial momentum, polar momentum) on interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReformResidual {
    pub nodes: Vec<usize>,
    pub orig: Vec<[f64; 3]>,
    pub reform: Vec<[f64; 3]>,
    pub orig_max: f64,
    pub reform_max: f64,
    pub max_diff: f64,
    /// max_diff / (1 + orig_max)
    pub agreement: f64,
}

impl ReformResidual {
    pub fn pass(&self) -> bool {
        self.agreement <= REFORM_TOL
    }
}

fn positive(what: &str, rho: &[f64]) -> Result<()> {
    if let Some((k, v)) = rho.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::DensityBound(format!("{what} density {v} at node {k}")));
    }
    Ok(())
}

struct Jets {
    rho: Vec<Jet2>,
    ur: Vec<Jet2>,
    ut: Vec<Jet2>,
}

impl Jets {
    fn new(layout: &Layout, f: &Fields) -> Self {
        Self {
            rho: layout.jets(&f.rho, Parity::Even),
            ur: layout.jets(&f.ur, Parity::Even),
            ut: layout.jets(&f.ut, Parity::Odd),
        }
    }
}

#[inline]
fn max_abs(v: &[[f64; 3]]) -> f64 {
    v.iter().flat_map(|a| a.iter()).fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Both residuals for the step prev → state (backward Euler in time,
/// nodal stencils in space) around the background `bg`.
pub fn reformulation_residual(
    layout: &Layout,
    state: &Fields,
    prev: &Fields,
    dt: f64,
    bg: &Fields,
    p: &FluidParams,
) -> Result<ReformResidual> {
    state.check(layout)?;
    prev.check(layout)?;
    bg.check(layout)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    positive("current", &state.rho)?;
    positive("previous", &prev.rho)?;
    positive("background", &bg.rho)?;

    let pert = state.minus(bg);
    let pert_prev = prev.minus(bg);
    let (ju, jp, jb) = (Jets::new(layout, state), Jets::new(layout, &pert), Jets::new(layout, bg));
    let (mu, ml) = (p.mu, p.mu + p.lambda);
    let rp = p.rho_plus;
    let qp = p.q_plus();

    let nodes: Vec<usize> = layout.interior().collect();
    let mut orig = Vec::with_capacity(nodes.len());
    let mut reform = Vec::with_capacity(nodes.len());
    for &k in &nodes {
        let g = layout.geo(k);
        let rho = state.rho[k];
        let rt = bg.rho[k];
        let u = [state.ur[k], state.ut[k]];
        let ub = [bg.ur[k], bg.ut[k]];
        let psi = [pert.ur[k], pert.ut[k]];
        let phi = pert.rho[k];

        // original form
        let m0 = (rho - prev.rho[k]) / dt + adv_scalar(u, &ju.rho[k], g) + rho * div(&ju.ur[k], &ju.ut[k], g);
        let a = adv(u, &ju.ur[k], &ju.ut[k], g);
        let gr = grad(&ju.rho[k], g);
        let lap = lap_vec(&ju.ur[k], &ju.ut[k], g);
        let gd = grad_div(&ju.ur[k], &ju.ut[k], g);
        let dp = p.dpressure(rho);
        let du = [state.ur[k] - prev.ur[k], state.ut[k] - prev.ut[k]];
        let mo = [0, 1].map(|c| rho * (du[c] / dt + a[c]) + dp * gr[c] - mu * lap[c] - ml * gd[c]);
        orig.push([m0, mo[0], mo[1]]);

        // perturbation form
        let div_psi = div(&jp.ur[k], &jp.ut[k], g);
        let div_ub = div(&jb.ur[k], &jb.ut[k], g);
        let f0 = -phi * div_psi + (rp - rt) * div_psi - adv_scalar(psi, &jb.rho[k], g) - phi * div_ub;
        let s0 = adv_scalar(ub, &jb.rho[k], g) + rt * div_ub;
        let m1 = (phi - pert_prev.rho[k]) / dt + adv_scalar(u, &jp.rho[k], g) + rp * div_psi - f0 + s0;

        let lap_psi = lap_vec(&jp.ur[k], &jp.ut[k], g);
        let gd_psi = grad_div(&jp.ur[k], &jp.ut[k], g);
        let g_phi = grad(&jp.rho[k], g);
        let g_rt = grad(&jb.rho[k], g);
        let a_pp = adv(psi, &jp.ur[k], &jp.ut[k], g);
        let a_up = adv(ub, &jp.ur[k], &jp.ut[k], g);
        let a_pu = adv(psi, &jb.ur[k], &jb.ut[k], g);
        let a_uu = adv(ub, &jb.ur[k], &jb.ut[k], g);
        let lap_ub = lap_vec(&jb.ur[k], &jb.ut[k], g);
        let gd_ub = grad_div(&jb.ur[k], &jb.ut[k], g);
        let (q, qt) = (p.q_unchecked(rho), p.q_unchecked(rt));
        let dp_t = p.dpressure(rt);
        let dpsi = [psi[0] - pert_prev.ur[k], psi[1] - pert_prev.ut[k]];
        let mr = [0, 1].map(|c| {
            let ft = -a_pp[c] - a_up[c] - a_pu[c] - phi / rho * a_uu[c] + (qp - q) * g_phi[c]
                - (dp - dp_t) / rho * g_rt[c];
            let f = -(rho - rp) / (rp * rho) * (mu * lap_psi[c] + ml * gd_psi[c]) + ft;
            let s = a_uu[c] + qt * g_rt[c] - (mu * lap_ub[c] + ml * gd_ub[c]) / rt;
            rho * (dpsi[c] / dt - mu / rp * lap_psi[c] - ml / rp * gd_psi[c] + qp * g_phi[c] - f) + rt * s
        });
        reform.push([m1, mr[0], mr[1]]);
    }

    let orig_max = max_abs(&orig);
    let reform_max = max_abs(&reform);
    let max_diff = orig
        .iter()
        .zip(&reform)
        .flat_map(|(a, b)| (0..3).map(move |c| (a[c] - b[c]).abs()))
        .fold(0.0f64, f64::max);
    Ok(ReformResidual { nodes, orig, reform, orig_max, reform_max, max_diff, agreement: max_diff / (1.0 + orig_max) })
}

/// Spherically symmetric convenience wrapper; the profile must live on the
/// state's grid.
pub fn reformulation_residual_sym(
    state: &SymState,
    prev: &SymState,
    profile: &SteadyProfile,
    p: &FluidParams,
) -> Result<ReformResidual> {
    let layout = Layout::Sym(profile.grid.clone());
    let bg = Fields::from_profile(&layout, profile)?;
    reformulation_residual(&layout, &Fields::from_sym(state), &Fields::from_sym(prev), state.t - prev.t, &bg, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AngularGrid, RadialGrid};

    fn params() -> FluidParams {
        FluidParams { gamma: 1.4, mu: 1.0, lambda: 0.5, rho_plus: 1.0, ..FluidParams::default() }
    }

    fn layout() -> Layout {
        Layout::Axi(RadialGrid::stretched(6.0, 48, 0.05).unwrap(), AngularGrid::new(16).unwrap())
    }

    fn fill(layout: &Layout, f: impl Fn(f64, f64) -> [f64; 3]) -> Fields {
        let n = layout.len();
        let mut out = Fields { rho: vec![0.0; n], ur: vec![0.0; n], ut: vec![0.0; n] };
        for k in 0..n {
            let (i, j) = (k / layout.n_theta(), k % layout.n_theta());
            let v = f(layout.radial().r(i), layout.theta(j));
            out.rho[k] = v[0];
            out.ur[k] = v[1];
            out.ut[k] = v[2];
        }
        out
    }

    fn background(layout: &Layout) -> Fields {
        fill(layout, |r, _| [1.0 + 0.3 / (r * r), -0.05 / (r * r), 0.0])
    }

    fn manufactured(layout: &Layout, t: f64) -> Fields {
        let bg = background(layout);
        let pert = fill(layout, |r, th| {
            let b = (-(r - 2.0).powi(2)).exp();
            [
                0.1 * b * th.cos() * (1.0 + 0.5 * t),
                0.05 * b * th.cos() * (1.0 - t * t),
                -0.03 * b * th.sin() * (0.3 + t).sin(),
            ]
        });
        let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Fields { rho: add(&bg.rho, &pert.rho), ur: add(&bg.ur, &pert.ur), ut: add(&bg.ut, &pert.ut) }
    }

    #[test]
    fn manufactured_perturbation_agrees() {
        let l = layout();
        let bg = background(&l);
        for &g in &[1.0, 1.4, 2.0] {
            let p = FluidParams { gamma: g, ..params() };
            let r = reformulation_residual(&l, &manufactured(&l, 0.31), &manufactured(&l, 0.3), 0.01, &bg, &p).unwrap();
            assert!(r.orig_max > 1e-2, "{}", r.orig_max);
            assert!(r.pass(), "gamma {g}: {}", r.agreement);
        }
    }

    #[test]
    fn zero_perturbation_gives_steady_residual() {
        let l = layout();
        let bg = background(&l);
        let r = reformulation_residual(&l, &bg, &bg, 0.7, &bg, &params()).unwrap();
        // the background is not steady, so both residuals are its steady residual
        assert!(r.orig_max > 1e-3);
        assert!(r.max_diff <= 1e-13 * (1.0 + r.orig_max), "{}", r.max_diff);
    }

    #[test]
    fn rejects_bad_density() {
        let l = layout();
        let bg = background(&l);
        let mut s = bg.clone();
        s.rho[5] = -1.0;
        assert!(matches!(reformulation_residual(&l, &s, &bg, 0.1, &bg, &params()), Err(Error::DensityBound(_))));
    }

    #[test]
    fn sign_of_pressure_term_matters() {
        // Flipping the sign of the last term of f~ breaks the identity
        // whenever φ and ∇ρ̃ are both nonzero.
        let l = layout();
        let bg = background(&l);
        let (s, pr) = (manufactured(&l, 0.31), manufactured(&l, 0.3));
        let p = params();
        let mut worst = 0.0f64;
        let sj = l.jets(&bg.rho, Parity::Even);
        for k in l.interior() {
            let g = l.geo(k);
            let term = (p.dpressure(s.rho[k]) - p.dpressure(bg.rho[k])) * grad(&sj[k], g)[0];
            worst = worst.max((2.0 * term).abs());
        }
        let r = reformulation_residual(&l, &s, &pr, 0.01, &bg, &p).unwrap();
        assert!(worst > 1e3 * r.max_diff);
    }
}
