//! Relative energy, dissipation and boundary functionals, discrete Sobolev
//! norms and the energy norm N(T).
//!
//! ‖F‖_k is the H^k norm (all orders 0..=k) with |D^l F| the Frobenius norm
//! of the Cartesian derivative tensor. The solvers resolve:
//! spherically symmetric scalars up to k = 3, radial vectors up to k = 2;
//! axisymmetric scalars up to k = 2, vectors up to k = 1.

use super::potential::h_unchecked;
use crate::discrete::{div, grad_sq_vec, Fields, Jet2, Layout, Parity};
use crate::error::{Error, Result};
use crate::grid::AngularGrid;
use crate::model::{AxiState, FluidParams, SymState};
use crate::stationary::SteadyProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormGroup {
    /// enters N² through the sup over time
    Sup,
    /// enters N² through the time integral
    Integral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormPiece {
    pub name: String,
    /// squared norm
    pub value: f64,
    pub group: NormGroup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    pub total_relative_energy: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub viscous_dissipation: f64,
    pub boundary_h: f64,
    pub weighted_phi: f64,
    pub weighted_radial_psi: f64,
    pub sup_perturbation: f64,
    pub norm_pieces: Vec<NormPiece>,
}

impl EnergyReport {
    /// Integrand of the time integral in the dissipation monitor.
    pub fn dissipative_rate(&self) -> f64 {
        self.viscous_dissipation + self.boundary_h + self.weighted_phi + self.weighted_radial_psi
    }
}

/// A nodal field handed to [`sobolev_norm`].
#[derive(Debug, Clone, Copy)]
pub enum FieldRef<'a> {
    Scalar(&'a [f64]),
    /// radial and polar components
    Vector(&'a [f64], &'a [f64]),
}

/// Highest order [`sobolev_norm`] resolves for a field on a layout.
pub fn max_order(layout: &Layout, field: &FieldRef) -> usize {
    match (layout, field) {
        (Layout::Sym(_), FieldRef::Scalar(_)) => 3,
        (Layout::Sym(_), FieldRef::Vector(..)) => 2,
        (Layout::Axi(..), FieldRef::Scalar(_)) => 2,
        (Layout::Axi(..), FieldRef::Vector(..)) => 1,
    }
}

fn volume_sum(layout: &Layout, density: impl Fn(usize) -> f64) -> f64 {
    (0..layout.len()).map(|k| layout.volume(k) * density(k)).sum()
}

/// ∫ |D^l F|² over the layout.
pub fn derivative_sq(layout: &Layout, field: FieldRef, l: usize) -> Result<f64> {
    let avail = max_order(layout, &field);
    if l > avail {
        return Err(Error::OrderTooHigh { requested: l, available: avail });
    }
    match field {
        FieldRef::Scalar(f) => layout.check_len("field", f.len())?,
        FieldRef::Vector(a, b) => {
            layout.check_len("field", a.len())?;
            layout.check_len("field", b.len())?;
        }
    }
    let geo = |k: usize| layout.geo(k);
    let out = match (field, l) {
        (FieldRef::Scalar(f), 0) => volume_sum(layout, |k| f[k] * f[k]),
        (FieldRef::Vector(a, b), 0) => volume_sum(layout, |k| a[k] * a[k] + b[k] * b[k]),
        (FieldRef::Scalar(f), _) => {
            let j = layout.jets(f, Parity::Even);
            match (layout, l) {
                (_, 1) => volume_sum(layout, |k| {
                    let r = geo(k).r;
                    j[k].r * j[k].r + j[k].t * j[k].t / (r * r)
                }),
                (Layout::Sym(_), 2) => volume_sum(layout, |k| {
                    let r = geo(k).r;
                    j[k].rr * j[k].rr + 2.0 * (j[k].r / r).powi(2)
                }),
                (Layout::Sym(_), _) => {
                    let second: Vec<f64> = j.iter().map(|x| x.rr).collect();
                    let j3 = layout.jets(&second, Parity::Even);
                    volume_sum(layout, |k| {
                        let r = geo(k).r;
                        let (d1, d2, d3) = (j[k].r, j[k].rr, j3[k].r);
                        let g1 = d2 / r - d1 / (r * r);
                        d3 * d3 + 2.0 * g1 * g1 + 4.0 * (d2 - d1 / r).powi(2) / (r * r)
                    })
                }
                (Layout::Axi(..), _) => volume_sum(layout, |k| hessian_sq(&j[k], geo(k).r, geo(k).cot)),
            }
        }
        (FieldRef::Vector(a, b), _) => {
            let ja = layout.jets(a, Parity::Even);
            let jb = layout.jets(b, Parity::Odd);
            match (layout, l) {
                (_, 1) => volume_sum(layout, |k| grad_sq_vec(&ja[k], &jb[k], geo(k))),
                _ => volume_sum(layout, |k| {
                    // radial field Ψ(r) r̂
                    let r = geo(k).r;
                    let (p0, p1, p2) = (ja[k].v, ja[k].r, ja[k].rr);
                    p2 * p2 + 2.0 * (p1 / r - p0 / (r * r)).powi(2) + 4.0 * (p1 - p0 / r).powi(2) / (r * r)
                }),
            }
        }
    };
    Ok(out)
}

/// Frobenius norm² of the Hessian of an axisymmetric scalar.
fn hessian_sq(j: &Jet2, r: f64, cot: f64) -> f64 {
    let r2 = r * r;
    let hrr = j.rr;
    let hrt = j.rt / r - j.t / r2;
    let htt = j.tt / r2 + j.r / r;
    let hpp = j.r / r + cot * j.t / r2;
    hrr * hrr + 2.0 * hrt * hrt + htt * htt + hpp * hpp
}

/// H^k norm: (Σ_{l ≤ k} ∫ |D^l F|²)^{1/2}.
pub fn sobolev_norm(layout: &Layout, field: FieldRef, k: usize) -> Result<f64> {
    let mut acc = 0.0;
    for l in 0..=k {
        acc += derivative_sq(layout, field, l)?;
    }
    Ok(acc.sqrt())
}

/// Σ_{lo ≤ l ≤ hi} ∫ |D^l F|², with hi clipped to what the layout resolves.
fn clipped(layout: &Layout, field: FieldRef, lo: usize, hi: usize) -> Result<(f64, usize)> {
    let hi = hi.min(max_order(layout, &field));
    let mut acc = 0.0;
    for l in lo..=hi {
        acc += derivative_sq(layout, field, l)?;
    }
    Ok((acc, hi))
}

/// Summands of N² at one time, each at the highest order resolved.
/// `rates` are ∂_t(ρ, u), typically the solver's right-hand side.
pub fn norm_pieces(layout: &Layout, pert: &Fields, rates: Option<&Fields>) -> Result<Vec<NormPiece>> {
    let phi = FieldRef::Scalar(&pert.rho);
    let psi = FieldRef::Vector(&pert.ur, &pert.ut);
    let mut out = Vec::new();
    let mut push = |name: &str, (value, k): (f64, usize), group| {
        out.push(NormPiece { name: format!("{name}@{k}"), value, group });
    };
    push("phi", clipped(layout, phi, 0, 3)?, NormGroup::Sup);
    push("psi", clipped(layout, psi, 0, 3)?, NormGroup::Sup);
    push("grad_phi", clipped(layout, phi, 1, 3)?, NormGroup::Integral);
    push("grad_psi", clipped(layout, psi, 1, 4)?, NormGroup::Integral);
    if let Some(d) = rates {
        let dphi = FieldRef::Scalar(&d.rho);
        let dpsi = FieldRef::Vector(&d.ur, &d.ut);
        push("dt_phi", clipped(layout, dphi, 0, 2)?, NormGroup::Sup);
        push("dt_psi", clipped(layout, dpsi, 0, 1)?, NormGroup::Sup);
        push("dt_phi", clipped(layout, dphi, 0, 3)?, NormGroup::Integral);
        push("dt_psi", clipped(layout, dpsi, 0, 2)?, NormGroup::Integral);
    }
    Ok(out)
}

/// All monitored functionals of the state relative to the background.
pub fn relative_energy(
    layout: &Layout,
    t: f64,
    state: &Fields,
    bg: &Fields,
    rates: Option<&Fields>,
    p: &FluidParams,
) -> Result<EnergyReport> {
    state.check(layout)?;
    bg.check(layout)?;
    if let Some(d) = rates {
        d.check(layout)?;
    }
    if let Some(k) = (0..layout.len()).find(|&k| !(state.rho[k] > 0.0 && bg.rho[k] > 0.0)) {
        return Err(Error::DensityBound(format!("non-positive density at node {k}")));
    }
    let pert = state.minus(bg);
    let ub = p.u_b.abs();
    let kinetic = volume_sum(layout, |k| 0.5 * state.rho[k] * (pert.ur[k].powi(2) + pert.ut[k].powi(2)));
    let potential = volume_sum(layout, |k| h_unchecked(state.rho[k], bg.rho[k], p));
    let ja = layout.jets(&pert.ur, Parity::Even);
    let jb = layout.jets(&pert.ut, Parity::Odd);
    let viscous_dissipation = volume_sum(layout, |k| {
        let g = layout.geo(k);
        let d = div(&ja[k], &jb[k], g);
        0.5 * p.mu * grad_sq_vec(&ja[k], &jb[k], g) + (p.mu + p.lambda) * d * d
    });
    let boundary_h =
        ub * (0..layout.n_theta()).map(|k| layout.boundary_area(k) * h_unchecked(state.rho[k], bg.rho[k], p)).sum::<f64>();
    let r7 = |k: usize| layout.geo(k).r.powi(7);
    let weighted_phi = ub.powi(3) * volume_sum(layout, |k| pert.rho[k].powi(2) / r7(k));
    let weighted_radial_psi = ub * volume_sum(layout, |k| pert.ur[k].powi(2) / r7(k));
    let sup_perturbation = (0..layout.len())
        .map(|k| (pert.rho[k].powi(2) + pert.ur[k].powi(2) + pert.ut[k].powi(2)).sqrt())
        .fold(0.0, f64::max);
    Ok(EnergyReport {
        t,
        total_relative_energy: kinetic + potential,
        kinetic,
        potential,
        viscous_dissipation,
        boundary_h,
        weighted_phi,
        weighted_radial_psi,
        sup_perturbation,
        norm_pieces: norm_pieces(layout, &pert, rates)?,
    })
}

/// Report for a spherically symmetric state; the profile must be on its grid.
pub fn relative_energy_sym(state: &SymState, profile: &SteadyProfile, p: &FluidParams) -> Result<EnergyReport> {
    let layout = Layout::Sym(profile.grid.clone());
    let bg = Fields::from_profile(&layout, profile)?;
    relative_energy(&layout, state.t, &Fields::from_sym(state), &bg, None, p)
}

/// Report for an axisymmetric state on uniform polar cells.
pub fn relative_energy_axi(state: &AxiState, profile: &SteadyProfile, p: &FluidParams) -> Result<EnergyReport> {
    if state.n_r != profile.grid.len() {
        return Err(Error::GridMismatch(format!("state has {} radial nodes, profile {}", state.n_r, profile.grid.len())));
    }
    let layout = Layout::Axi(profile.grid.clone(), AngularGrid::new(state.n_theta)?);
    let bg = Fields::from_profile(&layout, profile)?;
    relative_energy(&layout, state.t, &Fields::from_axi(state), &bg, None, p)
}

/// N(T) from a report history: sup of the Sup pieces plus the trapezoid
/// time integral of the Integral pieces.
pub fn energy_norm_n(history: &[EnergyReport]) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let group = |r: &EnergyReport, g: NormGroup| r.norm_pieces.iter().filter(|p| p.group == g).map(|p| p.value).sum::<f64>();
    let sup = history.iter().map(|r| group(r, NormGroup::Sup)).fold(0.0, f64::max);
    let int: f64 = history
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (group(&w[0], NormGroup::Integral) + group(&w[1], NormGroup::Integral)))
        .sum();
    Ok((sup + int).sqrt())
}

/// ρ₊/2 ≤ ρ ≤ 3ρ₊/2 at every node.
pub fn density_corridor(rho: &[f64], p: &FluidParams) -> bool {
    rho.iter().all(|&r| r >= 0.5 * p.rho_plus && r <= 1.5 * p.rho_plus)
}

/// Discrete dissipation monitor M(t) = ∫E(t) + ∫₀ᵗ (dissipation + boundary
/// + weighted terms), which should be nonincreasing up to O(Δt + h²).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CompositeMonitor {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    last: Option<(f64, f64)>,
    integral: f64,
}

impl CompositeMonitor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: &EnergyReport) {
        let rate = r.dissipative_rate();
        if let Some((t0, d0)) = self.last {
            self.integral += 0.5 * (r.t - t0) * (rate + d0);
        }
        self.last = Some((r.t, rate));
        self.times.push(r.t);
        self.values.push(r.total_relative_energy + self.integral);
    }

    /// Largest rise of M above its running minimum (0 if nonincreasing).
    pub fn violation(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut worst = 0.0f64;
        for &m in &self.values {
            worst = worst.max(m - lo);
            lo = lo.min(m);
        }
        worst
    }

    /// C in violation = C (Δt + h²) M(0).
    pub fn fitted_c(&self, dt: f64, h: f64) -> f64 {
        let m0 = self.values.first().copied().unwrap_or(0.0);
        let scale = (dt + h * h) * m0;
        if self.violation() == 0.0 {
            0.0
        } else if scale > 0.0 {
            self.violation() / scale
        } else {
            f64::INFINITY
        }
    }
}
