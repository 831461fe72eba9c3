//! Stability runs: perturb the steady profile, integrate, and record the
//! energy reports, Legendre-mode amplitudes and the checks on them.

use super::modes::{mode_amplitudes, probe_rows};
use super::scheme::Scheme;
use crate::discrete::{Fields, Layout};
use crate::energy::{density_corridor, reformulation_residual, relative_energy, CompositeMonitor, EnergyReport, REFORM_TOL};
use crate::error::{Error, Result};
use crate::model::FluidParams;
use crate::stationary::{solve_steady, SteadyProfile};

/// Highest Legendre degree tracked.
pub const L_MAX: usize = 4;

/// Largest admissible fitted constant C in the dissipation monitor
/// violation ≤ C (Δt + h²) M(0).
pub const MONITOR_C_MAX: f64 = 1.0;

/// Mode peaks below this fraction of the largest mode peak are not
/// considered excited.
pub const EXCITED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// C^∞ bump exp(1 − 1/(1 − s²)), s ∈ (−1, 1) across the support
    Bump,
    /// cos² lobe across the support
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Density,
    RadialVelocity,
}

/// Initial perturbation A·ρ₊·b(r)·P_ℓ(cos θ) of the density (or A·b·P_ℓ of
/// the radial velocity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub amplitude: f64,
    pub shape: Shape,
    pub support: (f64, f64),
    pub target: Target,
    pub legendre: usize,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self { amplitude: 0.02, shape: Shape::Bump, support: (1.5, 3.0), target: Target::Density, legendre: 0 }
    }
}

impl Perturbation {
    pub fn radial(&self, r: f64) -> f64 {
        let (a, b) = self.support;
        let s = (2.0 * r - a - b) / (b - a);
        if s.abs() >= 1.0 {
            return 0.0;
        }
        match self.shape {
            Shape::Bump => (1.0 - 1.0 / (1.0 - s * s)).exp(),
            Shape::Cosine => (0.5 * std::f64::consts::PI * s).cos().powi(2),
        }
    }

    pub fn validate(&self, r_max: f64) -> Result<()> {
        let (a, b) = self.support;
        if !(a > 1.0 && b > a && b < r_max) {
            return Err(Error::ConstraintViolation(format!(
                "perturbation support ({a}, {b}) must lie strictly inside (1, {r_max})"
            )));
        }
        if !self.amplitude.is_finite() || self.amplitude.abs() > 0.5 {
            return Err(Error::ConstraintViolation(format!("perturbation amplitude {} out of range", self.amplitude)));
        }
        if self.legendre > L_MAX {
            return Err(Error::ConstraintViolation(format!("Legendre degree {} > {L_MAX}", self.legendre)));
        }
        Ok(())
    }

    /// The perturbed state.
    pub fn apply(&self, layout: &Layout, base: &Fields, rho_plus: f64) -> Fields {
        let mut s = base.clone();
        let nt = layout.n_theta();
        for k in 0..layout.len() {
            let b = self.radial(layout.geo(k).r);
            if b == 0.0 {
                continue;
            }
            let pl = match layout {
                Layout::Sym(_) => 1.0,
                Layout::Axi(..) => super::modes::legendre(self.legendre, layout.theta(k % nt).cos())[self.legendre],
            };
            match self.target {
                Target::Density => s.rho[k] += self.amplitude * rho_plus * b * pl,
                Target::RadialVelocity => s.ur[k] += self.amplitude * b * pl,
            }
        }
        s
    }
}

/// Settings shared by both geometries.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub t_end: f64,
    /// fixed step; None picks 0.9 of the stable step of the initial state
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    pub perturbation: Perturbation,
    /// time between energy reports
    pub output_every: f64,
    /// run the reformulation check on every n-th step (0: never)
    pub reform_every: usize,
    pub steady_tol: f64,
    pub keep_snapshots: bool,
    /// radii at which Legendre modes are projected
    pub probe_radii: Vec<f64>,
    /// required decay factor of sup|(φ, ψ)| from its peak
    pub decay_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decay {
    pub peak: f64,
    pub peak_t: f64,
    /// max of the sampled quantity over the last 5% of the run
    pub tail: f64,
    pub factor: f64,
}

impl Decay {
    pub fn from_series(times: &[f64], values: &[f64]) -> Self {
        let (mut peak, mut peak_t) = (0.0, 0.0);
        for (&t, &v) in times.iter().zip(values) {
            if v > peak {
                peak = v;
                peak_t = t;
            }
        }
        let t_last = times.last().copied().unwrap_or(0.0);
        let t0 = times.first().copied().unwrap_or(0.0);
        let cut = t_last - 0.05 * (t_last - t0);
        let tail = times.iter().zip(values).filter(|(t, _)| **t >= cut).map(|(_, v)| *v).fold(0.0, f64::max);
        let factor = if peak <= 1e-14 || tail == 0.0 {
            f64::INFINITY
        } else {
            peak / tail
        };
        Self { peak, peak_t, tail, factor }
    }
}

/// One named PASS/FAIL item of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct RunLog {
    pub layout: Layout,
    pub params: FluidParams,
    pub profile: SteadyProfile,
    pub dt: f64,
    pub steps: usize,
    pub reports: Vec<EnergyReport>,
    /// (t, max over probe radii of |a_ℓ(φ)| for ℓ = 0..=L_MAX)
    pub modes: Vec<(f64, Vec<f64>)>,
    pub monitor: CompositeMonitor,
    pub fitted_c: f64,
    /// (step, agreement) of the reformulation check
    pub reform: Vec<(usize, f64)>,
    /// first time the density corridor was left
    pub corridor_exit: Option<f64>,
    pub decay: Decay,
    /// (ℓ, decay) of excited modes
    pub mode_decay: Vec<(usize, Decay)>,
    pub snapshots: Vec<(f64, Fields)>,
    pub final_state: Fields,
    pub checks: Vec<Check>,
}

impl RunLog {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn reform_worst(&self) -> f64 {
        self.reform.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    /// Err(DidNotFinish) if the required decay was not reached by t_end.
    pub fn require_decay(&self) -> Result<()> {
        match self.checks.iter().find(|c| c.name == "decay" && !c.pass) {
            Some(c) => Err(Error::DidNotFinish(c.detail.clone())),
            None => Ok(()),
        }
    }
}

fn report(scheme: &Scheme, t: f64, s: &Fields) -> Result<EnergyReport> {
    let rates = scheme.rhs(s);
    relative_energy(&scheme.layout, t, s, &scheme.background, Some(&rates), &scheme.params)
}

/// Steady profile on the layout's radial grid.
pub fn profile_on(layout: &Layout, params: &FluidParams, tol: f64) -> Result<SteadyProfile> {
    solve_steady(params, layout.radial(), tol)
}

/// Integrate the perturbed profile and evaluate the checks.
pub fn run_stability(layout: Layout, params: FluidParams, cfg: &RunSettings) -> Result<RunLog> {
    params.validate().into_result()?;
    if !(cfg.t_end > 0.0 && cfg.output_every > 0.0) {
        return Err(Error::ConstraintViolation("t_end and output_every must be positive".into()));
    }
    cfg.perturbation.validate(layout.radial().r_max())?;
    let profile = profile_on(&layout, &params, cfg.steady_tol)?;
    let bg = Fields::from_profile(&layout, &profile)?;
    let scheme = Scheme::new(layout.clone(), params, bg.clone(), true)?.with_safety(cfg.cfl_safety);
    let mut s = cfg.perturbation.apply(&layout, &bg, params.rho_plus);
    scheme.apply_bc(&mut s, None);

    let dt0 = match cfg.dt {
        Some(dt) => dt,
        None => 0.9 * scheme.cfl_limit(&s),
    };
    let steps = (cfg.t_end / dt0).ceil() as usize;
    let dt = cfg.t_end / steps as f64;
    let rows = probe_rows(&layout, &cfg.probe_radii);
    let h = layout.radial().h_min();

    let mut reports = Vec::new();
    let mut modes = Vec::new();
    let mut snapshots = Vec::new();
    let mut monitor = CompositeMonitor::new();
    let mut reform = Vec::new();
    let mut corridor_exit = None;
    let mut record = |t: f64, s: &Fields, reports: &mut Vec<EnergyReport>| -> Result<()> {
        let r = report(&scheme, t, s)?;
        monitor.push(&r);
        reports.push(r);
        let phi: Vec<f64> = s.rho.iter().zip(&bg.rho).map(|(a, b)| a - b).collect();
        modes.push((t, mode_amplitudes(&layout, &phi, &rows, L_MAX)));
        if cfg.keep_snapshots {
            snapshots.push((t, s.clone()));
        }
        Ok(())
    };
    record(0.0, &s, &mut reports)?;
    if !density_corridor(&s.rho, &params) {
        corridor_exit = Some(0.0);
    }
    let mut next_out = cfg.output_every;
    for n in 0..steps {
        let t = n as f64 * dt;
        let new = scheme.step(&s, t, dt)?;
        if cfg.reform_every > 0 && (n + 1) % cfg.reform_every == 0 {
            let r = reformulation_residual(&layout, &new, &s, dt, &bg, &params)?;
            reform.push((n + 1, r.agreement));
        }
        s = new;
        let t_new = (n + 1) as f64 * dt;
        if corridor_exit.is_none() && !density_corridor(&s.rho, &params) {
            corridor_exit = Some(t_new);
        }
        if t_new >= next_out - 1e-9 * dt || n + 1 == steps {
            record(t_new, &s, &mut reports)?;
            while next_out <= t_new + 1e-9 * dt {
                next_out += cfg.output_every;
            }
        }
    }

    let times: Vec<f64> = reports.iter().map(|r| r.t).collect();
    let sup: Vec<f64> = reports.iter().map(|r| r.sup_perturbation).collect();
    let decay = Decay::from_series(&times, &sup);
    let fitted_c = monitor.fitted_c(dt, h);

    let mode_times: Vec<f64> = modes.iter().map(|m| m.0).collect();
    let series: Vec<Vec<f64>> = (0..=L_MAX).map(|l| modes.iter().map(|m| m.1[l]).collect()).collect();
    let peaks: Vec<f64> = series.iter().map(|v| v.iter().copied().fold(0.0, f64::max)).collect();
    let top = peaks.iter().copied().fold(0.0, f64::max);
    let mode_decay: Vec<(usize, Decay)> = if matches!(layout, Layout::Axi(..)) {
        (0..=L_MAX)
            .filter(|&l| top > 1e-12 && peaks[l] >= EXCITED_FRACTION * top)
            .map(|l| (l, Decay::from_series(&mode_times, &series[l])))
            .collect()
    } else {
        Vec::new()
    };

    let mut checks = vec![
        Check {
            name: "decay".into(),
            pass: decay.factor >= cfg.decay_factor,
            detail: format!(
                "sup|(phi,psi)| peak {:.3e} at t={:.3}, tail {:.3e}, factor {:.2} (need >= {})",
                decay.peak, decay.peak_t, decay.tail, decay.factor, cfg.decay_factor
            ),
        },
        Check {
            name: "density-corridor".into(),
            pass: corridor_exit.is_none(),
            detail: match corridor_exit {
                None => "rho_+/2 <= rho <= 3rho_+/2 throughout".into(),
                Some(t) => format!("left the corridor at t={t}"),
            },
        },
        Check {
            name: "dissipation-monitor".into(),
            pass: fitted_c <= MONITOR_C_MAX,
            detail: format!(
                "max rise {:.3e}, M(0) {:.3e}, fitted C {:.3e} (dt {:.3e}, h {:.3e}; need <= {MONITOR_C_MAX})",
                monitor.violation(),
                monitor.values.first().copied().unwrap_or(0.0),
                fitted_c,
                dt,
                h
            ),
        },
    ];
    if cfg.reform_every > 0 {
        let worst = reform.iter().map(|r: &(usize, f64)| r.1).fold(0.0, f64::max);
        checks.push(Check {
            name: "reformulation".into(),
            pass: worst <= REFORM_TOL,
            detail: format!("{} checks, worst agreement {worst:.3e} (need <= {REFORM_TOL:e})", reform.len()),
        });
    }
    for (l, d) in &mode_decay {
        checks.push(Check {
            name: format!("mode-{l}"),
            pass: d.factor >= cfg.decay_factor,
            detail: format!("peak {:.3e}, tail {:.3e}, factor {:.2}", d.peak, d.tail, d.factor),
        });
    }

    Ok(RunLog {
        layout,
        params,
        profile,
        dt,
        steps,
        reports,
        modes,
        monitor,
        fitted_c,
        reform,
        corridor_exit,
        decay,
        mode_decay,
        snapshots,
        final_state: s,
        checks,
    })
}
