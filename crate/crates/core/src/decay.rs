//! Quantitative properties of a stationary profile: algebraic decay rates,
//! the divergence of the steady velocity, its gradient split and the
//! viscous term.

use crate::error::{Error, Result};
use crate::stationary::SteadyProfile;

/// Smallest admissible fit window, in decades of r.
pub const MIN_FIT_DECADES: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub quantity: &'static str,
    pub slope: f64,
    pub target: f64,
    /// max/min of |quantity| * r^{-target} over the window
    pub prefactor_ratio: f64,
    pub prefactor_max: f64,
}

impl RateFit {
    pub fn within(&self, tol: f64) -> bool {
        (self.slope - self.target).abs() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub lo: f64,
    pub hi: f64,
    pub decades: f64,
    pub points: usize,
    pub fits: Vec<RateFit>,
}

impl RateReport {
    pub fn get(&self, quantity: &str) -> Option<&RateFit> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }
}

/// Least-squares slope of log|y| against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, v)| v.abs() > 0.0 && v.is_finite())
        .map(|(a, b)| (a.ln(), b.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn fit(quantity: &'static str, r: &[f64], y: &[f64], target: f64) -> RateFit {
    let slope = loglog_slope(r, y);
    let scaled: Vec<f64> = r.iter().zip(y).map(|(r, y)| y.abs() * r.powf(-target)).collect();
    let max = scaled.iter().copied().fold(0.0, f64::max);
    let min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    RateFit { quantity, slope, target, prefactor_ratio: max / min, prefactor_max: max }
}

/// Decay slopes over the default window [R^0.4, R^0.9].
pub fn verify_decay(profile: &SteadyProfile) -> Result<RateReport> {
    let r_max = profile.grid.r_max();
    verify_decay_window(profile, r_max.powf(0.4), r_max.powf(0.9))
}

pub fn verify_decay_window(profile: &SteadyProfile, lo: f64, hi: f64) -> Result<RateReport> {
    let decades = (hi / lo).log10();
    if !(decades >= MIN_FIT_DECADES) {
        return Err(Error::FitWindowTooSmall { lo, hi, decades });
    }
    let n = profile.dim_n as f64;
    let idx: Vec<usize> = (0..profile.len()).filter(|&i| (lo..=hi).contains(&profile.grid.r(i))).collect();
    if idx.len() < 8 {
        return Err(Error::FitWindowTooSmall { lo, hi, decades });
    }
    let r: Vec<f64> = idx.iter().map(|&i| profile.grid.r(i)).collect();
    let pick = |v: &[f64]| -> Vec<f64> { idx.iter().map(|&i| v[i]).collect() };
    let fits = vec![
        fit("rho-rho_plus", &r, &pick(&profile.rho_dev), -(2.0 * n - 2.0)),
        fit("d_u", &r, &pick(&profile.d_u), -n),
        fit("d_rho", &r, &pick(&profile.d_rho), -(2.0 * n - 1.0)),
        fit("d2_u", &r, &pick(&profile.d2_u), -2.0 * n),
        fit("d2_rho", &r, &pick(&profile.d2_rho), -2.0 * n),
    ];
    Ok(RateReport { lo, hi, decades, points: idx.len(), fits })
}

/// div u for the steady field, two ways.
#[derive(Debug, Clone, PartialEq)]
pub struct DivField {
    /// (r^{n-1} U)_r / r^{n-1}, using the node-wise flux r^{n-1} rho U.
    pub values: Vec<f64>,
    /// rho(1)|u_b| rho_r / (r^{n-1} rho^2)
    pub from_density: Vec<f64>,
    pub max_rel_diff: f64,
}

pub fn div_u_tilde(profile: &SteadyProfile) -> DivField {
    let n = profile.dim_n as i32;
    let rho1 = profile.rho_t[0];
    let ub = profile.params.u_b;
    let mut values = Vec::with_capacity(profile.len());
    let mut alt = Vec::with_capacity(profile.len());
    let mut diff: f64 = 0.0;
    for i in 0..profile.len() {
        let r = profile.grid.r(i);
        let a = r.powi(n - 1);
        let rho = profile.rho_t[i];
        let flux = a * rho * profile.u_t[i];
        // (a U)_r = (flux / rho)_r with flux constant
        let v = -flux * profile.d_rho[i] / (rho * rho) / a;
        let w = rho1 * ub.abs() * profile.d_rho[i] / (a * rho * rho);
        if v != 0.0 || w != 0.0 {
            diff = diff.max((v - w).abs() / v.abs().max(w.abs()));
        }
        values.push(v);
        alt.push(w);
    }
    DivField { values, from_density: alt, max_rel_diff: diff }
}

pub type Mat3 = [[f64; 3]; 3];

/// (grad u)_+ = (U_r - U/r) x(x)x / r^2 and (grad u)_- = (U/r) I at x.
pub fn grad_u_tilde_split(profile: &SteadyProfile, x: [f64; 3]) -> Result<(Mat3, Mat3)> {
    let r = norm(x);
    if !(r >= 1.0) || r > profile.grid.r_max() {
        return Err(Error::Domain(format!("|x| = {r} outside [1, R]")));
    }
    let q = profile.eval(r);
    let a = (q.d_u - q.u / r) / (r * r);
    let mut plus = [[0.0; 3]; 3];
    let mut minus = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            plus[i][j] = a * x[i] * x[j];
        }
        minus[i][i] = q.u / r;
    }
    Ok((plus, minus))
}

/// grad u of the Cartesian extension U(|x|) x/|x| by central differences;
/// entry [i][j] = d_j u_i.
pub fn grad_u_tilde_fd(profile: &SteadyProfile, x: [f64; 3], h: f64) -> Mat3 {
    let field = |y: [f64; 3]| {
        let r = norm(y);
        let u = profile.eval(r).u;
        [u * y[0] / r, u * y[1] / r, u * y[2] / r]
    };
    let mut g = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (field(xp), field(xm));
        for i in 0..3 {
            g[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    g
}

/// |L u| for the steady field, L u = mu Lap u + (mu+lambda) grad div u
/// = (2mu+lambda) grad div u for the radial gradient field.
pub fn viscous_lu_tilde(profile: &SteadyProfile) -> Vec<f64> {
    let p = &profile.params;
    let c = p.nu() * profile.rho_t[0] * p.u_b.abs();
    (0..profile.len())
        .map(|i| {
            let r = profile.grid.r(i);
            let rho = profile.rho_t[i];
            let d1 = profile.d_rho[i];
            let d2 = profile.d2_rho[i];
            let bracket = d2 / (r * r * rho * rho) - 2.0 * d1 / (r.powi(3) * rho * rho) - 2.0 * d1 * d1 / (r * r * rho.powi(3));
            c * bracket.abs()
        })
        .collect()
}

fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}
