//! Semi-discrete operator and two-stage SSP time step shared by the
//! spherically symmetric and axisymmetric solvers.
//!
//! Mass is updated in finite-volume form, velocity in nodal form:
//!   u_t = −(u·∇)u − q(ρ)∇ρ + (μΔu + (μ+λ)∇div u)/ρ,   q = P'(ρ)/ρ.
//! Boundary rows: u_r = u_b, u_θ = 0 at r = 1 (ρ is evolved there);
//! every field is held at the far-field data on r = R.

use crate::discrete::{adv, grad, grad_div, lap_vec, Fields, Layout, Parity};
use crate::error::{Error, Result};
use crate::model::{AxiState, FluidParams, SymState};
use crate::stationary::SteadyProfile;
use rayon::prelude::*;

/// Default fraction of the stable step.
pub const DEFAULT_SAFETY: f64 = 0.8;

/// Time-dependent data (far-field values or forcing) for manufactured runs.
pub type TimeFields<'a> = &'a (dyn Fn(f64) -> Fields + Sync);

#[derive(Debug, Clone)]
pub struct Scheme {
    pub layout: Layout,
    pub params: FluidParams,
    /// far-field data on r = R (and the state subtracted when balancing)
    pub background: Fields,
    pub safety: f64,
    balance: Option<Fields>,
}

impl Scheme {
    /// With `well_balanced` the discrete residual of the background is
    /// subtracted, so the background is an exact fixed point.
    pub fn new(layout: Layout, params: FluidParams, background: Fields, well_balanced: bool) -> Result<Self> {
        params.validate().into_result()?;
        background.check(&layout)?;
        if layout.n_r() < 4 {
            return Err(Error::Grid(format!("need at least 4 radial nodes, got {}", layout.n_r())));
        }
        let mut s = Self { layout, params, background, safety: DEFAULT_SAFETY, balance: None };
        if well_balanced {
            let mut b = s.background.clone();
            s.apply_bc(&mut b, None);
            check_positive(&b, 0.0)?;
            s.balance = Some(s.raw_rhs(&b));
        }
        Ok(s)
    }

    /// Well-balanced scheme around a steady profile on the layout's radial grid.
    pub fn around_profile(layout: Layout, params: FluidParams, profile: &SteadyProfile) -> Result<Self> {
        let bg = Fields::from_profile(&layout, profile)?;
        Self::new(layout, params, bg, true)
    }

    pub fn with_safety(mut self, safety: f64) -> Self {
        self.safety = safety;
        self
    }

    pub fn is_balanced(&self) -> bool {
        self.balance.is_some()
    }

    /// Time derivative of the unbalanced semi-discrete system.
    pub fn raw_rhs(&self, s: &Fields) -> Fields {
        let l = &self.layout;
        let (nr, nt) = (l.n_r(), l.n_theta());
        let p = &self.params;
        let (mu, ml) = (p.mu, p.mu + p.lambda);
        let jr = l.jets(&s.rho, Parity::Even);
        let ja = l.jets(&s.ur, Parity::Even);
        let jb = l.jets(&s.ut, Parity::Odd);
        let mut out = Fields { rho: l.mass_rhs(&s.rho, &s.ur, &s.ut), ur: vec![0.0; nr * nt], ut: vec![0.0; nr * nt] };
        let row = |i: usize, or: &mut [f64], ot: &mut [f64]| {
            if i == 0 || i + 1 == nr {
                return;
            }
            for j in 0..nt {
                let k = i * nt + j;
                let g = l.geo(k);
                let rho = s.rho[k];
                let a = adv([s.ur[k], s.ut[k]], &ja[k], &jb[k], g);
                let gr = grad(&jr[k], g);
                let lap = lap_vec(&ja[k], &jb[k], g);
                let gd = grad_div(&ja[k], &jb[k], g);
                let q = p.q_unchecked(rho);
                or[j] = -a[0] - q * gr[0] + (mu * lap[0] + ml * gd[0]) / rho;
                ot[j] = -a[1] - q * gr[1] + (mu * lap[1] + ml * gd[1]) / rho;
            }
        };
        // rows are independent, so the result does not depend on the thread count
        if nt == 1 {
            out.ur.chunks_mut(1).zip(out.ut.chunks_mut(1)).enumerate().for_each(|(i, (a, b))| row(i, a, b));
        } else {
            out.ur
                .par_chunks_mut(nt)
                .zip(out.ut.par_chunks_mut(nt))
                .enumerate()
                .with_min_len(8)
                .for_each(|(i, (a, b))| row(i, a, b));
        }
        out
    }

    /// Time derivative used by the stepper (balanced if requested).
    pub fn rhs(&self, s: &Fields) -> Fields {
        let mut d = self.raw_rhs(s);
        if let Some(b) = &self.balance {
            for (x, y) in [(&mut d.rho, &b.rho), (&mut d.ur, &b.ur), (&mut d.ut, &b.ut)] {
                x.iter_mut().zip(y).for_each(|(x, y)| *x -= y);
            }
        }
        d
    }

    /// Impose u_r = u_b, u_θ = 0 on r = 1 and the far-field data on r = R.
    pub fn apply_bc(&self, s: &mut Fields, far: Option<&Fields>) {
        let (nr, nt) = (self.layout.n_r(), self.layout.n_theta());
        for j in 0..nt {
            s.ur[j] = self.params.u_b;
            s.ut[j] = 0.0;
        }
        let far = far.unwrap_or(&self.background);
        let last = (nr - 1) * nt..nr * nt;
        s.rho[last.clone()].copy_from_slice(&far.rho[last.clone()]);
        s.ur[last.clone()].copy_from_slice(&far.ur[last.clone()]);
        s.ut[last.clone()].copy_from_slice(&far.ut[last]);
    }

    /// Largest stable step times the safety factor: acoustic
    /// h/(|u| + c) and viscous 2/λ with
    /// λ = (ν/ρ)(4/h_r² + 4/(r dθ)² + 2/r²) + μ/(ρ r² sin²θ).
    pub fn cfl_limit(&self, s: &Fields) -> f64 {
        let l = &self.layout;
        let g = l.radial();
        let (nr, nt) = (l.n_r(), l.n_theta());
        let p = &self.params;
        let nu = p.nu();
        let dth = match l {
            Layout::Sym(_) => None,
            Layout::Axi(_, a) => Some(a.dtheta()),
        };
        let mut lim = f64::INFINITY;
        for i in 0..nr - 1 {
            let h = if i == 0 { g.r(1) - g.r(0) } else { (g.r(i) - g.r(i - 1)).min(g.r(i + 1) - g.r(i)) };
            for j in 0..nt {
                let k = i * nt + j;
                let geo = l.geo(k);
                let rho = s.rho[k].max(f64::MIN_POSITIVE);
                let c = p.sound_speed(rho);
                let mut adv = h / (s.ur[k].abs() + c);
                let mut lam = nu / rho * (4.0 / (h * h) + 2.0 / (geo.r * geo.r));
                if let Some(dt) = dth {
                    let ht = geo.r * dt;
                    adv = adv.min(ht / (s.ut[k].abs() + c));
                    lam += nu / rho * 4.0 / (ht * ht) + p.mu / (rho * (geo.r * geo.sin).powi(2));
                }
                lim = lim.min(adv).min(2.0 / lam);
            }
        }
        self.safety * lim
    }

    /// One Heun (SSPRK2) step with the stored far-field data.
    pub fn step(&self, s: &Fields, t: f64, dt: f64) -> Result<Fields> {
        self.step_with(s, t, dt, None, None)
    }

    /// One Heun step with optional time-dependent far-field data and forcing.
    pub fn step_with(
        &self,
        s: &Fields,
        t: f64,
        dt: f64,
        far: Option<TimeFields>,
        forcing: Option<TimeFields>,
    ) -> Result<Fields> {
        let limit = self.cfl_limit(s);
        if !(dt > 0.0) || dt > limit {
            return Err(Error::CflViolation { dt, limit });
        }
        let eval = |x: &Fields, tt: f64| {
            let mut d = self.rhs(x);
            if let Some(f) = forcing {
                let f = f(tt);
                self.add_forcing(&mut d, &f);
            }
            d
        };
        let far_new = far.map(|f| f(t + dt));
        let d0 = eval(s, t);
        let mut s1 = axpy(s, dt, &d0);
        self.apply_bc(&mut s1, far_new.as_ref());
        check_positive(&s1, t + dt)?;
        let d1 = eval(&s1, t + dt);
        let mut s2 = axpy(&s1, dt, &d1);
        for (a, b) in [(&mut s2.rho, &s.rho), (&mut s2.ur, &s.ur), (&mut s2.ut, &s.ut)] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x = 0.5 * (*x + y));
        }
        self.apply_bc(&mut s2, far_new.as_ref());
        check_positive(&s2, t + dt)?;
        Ok(s2)
    }

    /// Forcing enters the evolved rows only: mass away from r = R,
    /// momentum strictly inside.
    fn add_forcing(&self, d: &mut Fields, f: &Fields) {
        let (nr, nt) = (self.layout.n_r(), self.layout.n_theta());
        for k in 0..(nr - 1) * nt {
            d.rho[k] += f.rho[k];
            if k >= nt {
                d.ur[k] += f.ur[k];
                d.ut[k] += f.ut[k];
            }
        }
    }

    /// Mass fluxes (through r = 1 into the domain, through the last
    /// interior face out of it), so that d/dt Σ V ρ = inner − outer over
    /// the evolved rows.
    pub fn mass_fluxes(&self, s: &Fields) -> (f64, f64) {
        let l = &self.layout;
        let g = l.radial();
        let (nr, nt) = (l.n_r(), l.n_theta());
        let outer = (0..nt)
            .map(|j| {
                let w = match l {
                    Layout::Sym(_) => 4.0 * std::f64::consts::PI,
                    Layout::Axi(_, a) => 2.0 * std::f64::consts::PI * a.sin_weight(j),
                };
                let f = |i: usize| g.r(i).powi(2) * s.rho[i * nt + j] * s.ur[i * nt + j];
                w * 0.5 * (f(nr - 2) + f(nr - 1))
            })
            .sum();
        (l.boundary_mass_flux(&s.rho, &s.ur), outer)
    }

    /// Σ V_k ρ_k over the evolved rows (all but r = R).
    pub fn evolved_mass(&self, s: &Fields) -> f64 {
        let nt = self.layout.n_theta();
        (0..(self.layout.n_r() - 1) * nt).map(|k| self.layout.volume(k) * s.rho[k]).sum()
    }
}

impl Scheme {
    fn sym_fields(&self, s: &SymState) -> Result<Fields> {
        if !matches!(self.layout, Layout::Sym(_)) {
            return Err(Error::GridMismatch("spherically symmetric state on an axisymmetric layout".into()));
        }
        let f = Fields::from_sym(s);
        f.check(&self.layout)?;
        Ok(f)
    }

    fn axi_fields(&self, s: &AxiState) -> Result<Fields> {
        if !matches!(self.layout, Layout::Axi(..)) || s.n_r != self.layout.n_r() || s.n_theta != self.layout.n_theta() {
            return Err(Error::GridMismatch(format!(
                "state is {}x{}, layout {}x{}",
                s.n_r,
                s.n_theta,
                self.layout.n_r(),
                self.layout.n_theta()
            )));
        }
        let f = Fields::from_axi(s);
        f.check(&self.layout)?;
        Ok(f)
    }

    /// (∂_t ρ, ∂_t u) of a radial state; zero on rows held by boundary data.
    pub fn sym_rhs(&self, s: &SymState) -> Result<Fields> {
        let f = self.sym_fields(s)?;
        check_positive(&f, s.t)?;
        Ok(self.rhs(&f))
    }

    pub fn sym_step(&self, s: &SymState, dt: f64) -> Result<SymState> {
        let f = self.sym_fields(s)?;
        Ok(self.step(&f, s.t, dt)?.to_sym(s.t + dt))
    }

    pub fn axi_rhs(&self, s: &AxiState) -> Result<Fields> {
        let f = self.axi_fields(s)?;
        check_positive(&f, s.t)?;
        Ok(self.rhs(&f))
    }

    pub fn axi_step(&self, s: &AxiState, dt: f64) -> Result<AxiState> {
        let f = self.axi_fields(s)?;
        Ok(self.step(&f, s.t, dt)?.to_axi(s.t + dt, &self.layout))
    }
}

fn axpy(s: &Fields, dt: f64, d: &Fields) -> Fields {
    let f = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + dt * y).collect();
    Fields { rho: f(&s.rho, &d.rho), ur: f(&s.ur, &d.ur), ut: f(&s.ut, &d.ut) }
}

fn check_positive(s: &Fields, t: f64) -> Result<()> {
    let bad = |v: &f64| !v.is_finite();
    if let Some(node) = s.rho.iter().position(|r| !(*r > 0.0) || bad(r)) {
        return Err(Error::PositivityLoss { node, t });
    }
    if let Some(node) = s.ur.iter().chain(&s.ut).position(bad) {
        return Err(Error::PositivityLoss { node: node % s.rho.len(), t });
    }
    Ok(())
}
