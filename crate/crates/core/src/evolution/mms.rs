//! Manufactured solutions: a smooth time-dependent exact solution whose
//! residual in the continuous equations is added as forcing. The residual
//! uses exact derivative jets in the same pointwise operator formulas.

use super::scheme::Scheme;
use crate::discrete::{adv, adv_scalar, div, grad, grad_div, lap_vec, Fields, Geo, Jet2, Layout};
use crate::error::Result;
use crate::grid::{AngularGrid, RadialGrid};
use crate::model::FluidParams;

/// g(r) h(θ) from [g, g', g''] and [h, h', h''].
fn product(g: [f64; 3], h: [f64; 3]) -> Jet2 {
    Jet2 { v: g[0] * h[0], r: g[1] * h[0], t: g[0] * h[1], rr: g[2] * h[0], tt: g[0] * h[2], rt: g[1] * h[1] }
}

fn sum(a: Jet2, b: Jet2) -> Jet2 {
    Jet2 { v: a.v + b.v, r: a.r + b.r, t: a.t + b.t, rr: a.rr + b.rr, tt: a.tt + b.tt, rt: a.rt + b.rt }
}

fn radial(g: [f64; 3]) -> Jet2 {
    product(g, [1.0, 0.0, 0.0])
}

/// e^{−(r−2.5)²}
fn bump(r: f64) -> [f64; 3] {
    let x = r - 2.5;
    let e = (-x * x).exp();
    [e, -2.0 * x * e, (4.0 * x * x - 2.0) * e]
}

/// (r − 1) e^{−(r−2.5)²}, vanishing on r = 1
fn bump0(r: f64) -> [f64; 3] {
    let b = bump(r);
    let y = r - 1.0;
    [y * b[0], b[0] + y * b[1], 2.0 * b[1] + y * b[2]]
}

/// Exact solution
///   ρ = 1 + 0.1/r² + n(t) e^{−(r−2.5)²} Θ(θ)
///   u = u_b/r² r̂ + m(t) (r−1) e^{−(r−2.5)²} [cos θ r̂ − sin θ θ̂]   (axisymmetric)
/// with Θ = cos θ, or the θ-independent radial reduction.
#[derive(Debug, Clone, Copy)]
pub struct Manufactured {
    pub params: FluidParams,
}

struct Point {
    rho: Jet2,
    ur: Jet2,
    ut: Jet2,
    rho_t: f64,
    ur_t: f64,
    ut_t: f64,
}

impl Manufactured {
    fn amplitudes(t: f64) -> ([f64; 2], [f64; 2]) {
        // (value, derivative) of n and m
        ([0.05 * (1.0 + 0.5 * t.sin()), 0.025 * t.cos()], [0.05 * (0.5 + t).cos(), -0.05 * (0.5 + t).sin()])
    }

    fn point(&self, r: f64, theta: Option<f64>, t: f64) -> Point {
        let (n, m) = Self::amplitudes(t);
        let ub = self.params.u_b;
        let base_rho = radial([1.0 + 0.1 / (r * r), -0.2 / r.powi(3), 0.6 / r.powi(4)]);
        let base_u = radial([ub / (r * r), -2.0 * ub / r.powi(3), 6.0 * ub / r.powi(4)]);
        let (c, s) = theta.map_or((1.0, 0.0), |th| (th.cos(), th.sin()));
        let (hc, hs) = match theta {
            Some(_) => ([c, -s, -c], [s, c, -s]),
            None => ([1.0, 0.0, 0.0], [0.0; 3]),
        };
        let (b, b0) = (bump(r), bump0(r));
        let scale = |g: [f64; 3], a: f64| g.map(|x| a * x);
        Point {
            rho: sum(base_rho, product(scale(b, n[0]), hc)),
            ur: sum(base_u, product(scale(b0, m[0]), hc)),
            ut: product(scale(b0, -m[0]), hs),
            rho_t: n[1] * b[0] * hc[0],
            ur_t: m[1] * b0[0] * hc[0],
            ut_t: -m[1] * b0[0] * hs[0],
        }
    }

    fn theta(layout: &Layout, k: usize) -> Option<f64> {
        match layout {
            Layout::Sym(_) => None,
            Layout::Axi(..) => Some(layout.theta(k % layout.n_theta())),
        }
    }

    pub fn exact(&self, layout: &Layout, t: f64) -> Fields {
        let n = layout.len();
        let mut f = Fields { rho: vec![0.0; n], ur: vec![0.0; n], ut: vec![0.0; n] };
        for k in 0..n {
            let p = self.point(layout.geo(k).r, Self::theta(layout, k), t);
            f.rho[k] = p.rho.v;
            f.ur[k] = p.ur.v;
            f.ut[k] = p.ut.v;
        }
        f
    }

    /// ∂_t q − (continuous right-hand side)(q) at every node.
    pub fn forcing(&self, layout: &Layout, t: f64) -> Fields {
        let n = layout.len();
        let pr = &self.params;
        let (mu, ml) = (pr.mu, pr.mu + pr.lambda);
        let mut f = Fields { rho: vec![0.0; n], ur: vec![0.0; n], ut: vec![0.0; n] };
        for k in 0..n {
            let g: Geo = layout.geo(k);
            let p = self.point(g.r, Self::theta(layout, k), t);
            let u = [p.ur.v, p.ut.v];
            let rho = p.rho.v;
            f.rho[k] = p.rho_t + adv_scalar(u, &p.rho, g) + rho * div(&p.ur, &p.ut, g);
            let a = adv(u, &p.ur, &p.ut, g);
            let gr = grad(&p.rho, g);
            let lap = lap_vec(&p.ur, &p.ut, g);
            let gd = grad_div(&p.ur, &p.ut, g);
            let q = pr.q_unchecked(rho);
            let rhs = [0, 1].map(|c| -a[c] - q * gr[c] + (mu * lap[c] + ml * gd[c]) / rho);
            f.ur[k] = p.ur_t - rhs[0];
            f.ut[k] = p.ut_t - rhs[1];
        }
        f
    }
}

/// Max-norm error at t_end of the forced run started from the exact data.
pub fn mms_error(layout: Layout, params: FluidParams, t_end: f64, safety: f64) -> Result<(f64, f64)> {
    let mms = Manufactured { params };
    let init = mms.exact(&layout, 0.0);
    let scheme = Scheme::new(layout, params, init.clone(), false)?.with_safety(safety);
    let steps = (t_end / scheme.cfl_limit(&init)).ceil() as usize;
    let dt = t_end / steps as f64;
    let far = |t: f64| mms.exact(&scheme.layout, t);
    let force = |t: f64| mms.forcing(&scheme.layout, t);
    let mut s = init;
    for n in 0..steps {
        s = scheme.step_with(&s, n as f64 * dt, dt, Some(&far), Some(&force))?;
    }
    let e = mms.exact(&scheme.layout, t_end);
    let err = s
        .rho
        .iter()
        .zip(&e.rho)
        .chain(s.ur.iter().zip(&e.ur))
        .chain(s.ut.iter().zip(&e.ut))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((err, dt))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// (radial intervals, max error)
    pub levels: Vec<(usize, f64)>,
    /// log2 error ratios between consecutive levels
    pub orders: Vec<f64>,
}

impl ConvergenceStudy {
    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Least-squares slope of log error against log h over all levels.
    pub fn fitted_order(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self.levels.iter().map(|&(m, e)| (-(m as f64).ln(), e.ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }
}

fn study(errs: Vec<(usize, f64)>) -> ConvergenceStudy {
    let orders = errs.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect();
    ConvergenceStudy { levels: errs, orders }
}

/// Spatial refinement on [1, 5] with dt tied to the viscous limit (so the
/// time error is O(h⁴)).
pub fn mms_convergence_sym(params: FluidParams, base: usize, levels: usize, t_end: f64) -> Result<ConvergenceStudy> {
    let mut errs = Vec::new();
    for l in 0..levels {
        let m = base << l;
        let layout = Layout::Sym(RadialGrid::uniform(5.0, m)?);
        errs.push((m, mms_error(layout, params, t_end, 0.5)?.0));
    }
    Ok(study(errs))
}

/// As [`mms_convergence_sym`], refining the polar cells together.
pub fn mms_convergence_axi(
    params: FluidParams,
    base: usize,
    base_theta: usize,
    levels: usize,
    t_end: f64,
) -> Result<ConvergenceStudy> {
    let mut errs = Vec::new();
    for l in 0..levels {
        let layout = Layout::Axi(RadialGrid::uniform(5.0, base << l)?, AngularGrid::new(base_theta << l)?);
        errs.push((base << l, mms_error(layout, params, t_end, 0.5)?.0));
    }
    Ok(study(errs))
}

/// Step-doubling study: the same run to `t_end` with dt0, dt0/2, ...;
/// returns max-norm differences between consecutive levels and their log2
/// ratios (≈ 2 for a second-order integrator).
pub fn time_refinement(
    scheme: &Scheme,
    init: &Fields,
    t_end: f64,
    dt0: f64,
    levels: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut finals = Vec::with_capacity(levels);
    for l in 0..levels {
        let steps = ((t_end / dt0).round() as usize) << l;
        let dt = t_end / steps as f64;
        let mut s = init.clone();
        for n in 0..steps {
            s = scheme.step(&s, n as f64 * dt, dt)?;
        }
        finals.push(s);
    }
    let diffs: Vec<f64> = finals
        .windows(2)
        .map(|w| {
            let d = w[0].minus(&w[1]);
            d.rho.iter().chain(&d.ur).chain(&d.ut).fold(0.0f64, |m, x| m.max(x.abs()))
        })
        .collect();
    let orders = diffs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok((diffs, orders))
}
