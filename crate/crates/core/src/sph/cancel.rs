//! r_hat . Lap V - d_r div V contains no second radial derivative.

use super::chart::{chart_partial, chart_partial_vec, dot, norm, Chart, Vec3};
use super::corpus::OpSample;
use super::ops::{sph_div, sph_lap};
use crate::error::Result;

type VFn<'a> = &'a dyn Fn(Vec3) -> Vec3;

struct Partials {
    frame: [Vec3; 3],
    r: f64,
    s: f64,
    c: f64,
    d: std::collections::HashMap<[usize; 3], Vec3>,
}

fn partials(v: VFn, chart: Chart, x: Vec3) -> Result<Partials> {
    let q = chart.coords(x)?;
    let mut d = std::collections::HashMap::new();
    for o in [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0], [0, 2, 0], [0, 0, 1], [0, 0, 2], [1, 1, 0], [1, 0, 1]] {
        d.insert(o, chart_partial_vec(chart, &v, q, o));
    }
    Ok(Partials { frame: chart.frame(q), r: q[0], s: q[1].sin(), c: q[1].cos(), d })
}

/// r_hat . Lap V expanded in chart derivatives of the Cartesian vector V.
fn rhat_lap(p: &Partials) -> f64 {
    let (e, r, s, c, d) = (&p.frame, p.r, p.s, p.c, &p.d);
    dot(e[0], d[&[2, 0, 0]])
        + 2.0 / r * dot(e[0], d[&[1, 0, 0]])
        + c / s / (r * r) * dot(e[0], d[&[0, 1, 0]])
        + dot(e[0], d[&[0, 2, 0]]) / (r * r)
        + dot(e[0], d[&[0, 0, 2]]) / (r * r * s * s)
}

/// d_r div V expanded in chart derivatives.
fn dr_div(p: &Partials) -> f64 {
    let (e, r, s, d) = (&p.frame, p.r, p.s, &p.d);
    dot(e[0], d[&[2, 0, 0]]) + dot(e[1], d[&[1, 1, 0]]) / r + dot(e[2], d[&[1, 0, 1]]) / (r * s)
        - dot(e[1], d[&[0, 1, 0]]) / (r * r)
        - dot(e[2], d[&[0, 0, 1]]) / (r * r * s)
}

/// The same with its last term written as -r_hat.V/r^2 - cot theta_hat.V/r^2;
/// it lacks -d_phi(phi_hat.V)/(r^2 sin theta).
pub fn dr_div_short_form(v: VFn, chart: Chart, x: Vec3) -> Result<f64> {
    let p = partials(v, chart, x)?;
    let (e, r, s, c, d) = (&p.frame, p.r, p.s, p.c, &p.d);
    Ok(dot(e[0], d[&[2, 0, 0]]) + dot(e[1], d[&[1, 1, 0]]) / r + dot(e[2], d[&[1, 0, 1]]) / (r * s)
        - dot(e[1], d[&[0, 1, 0]]) / (r * r)
        - dot(e[0], d[&[0, 0, 0]]) / (r * r)
        - c / s * dot(e[1], d[&[0, 0, 0]]) / (r * r))
}

/// The difference with the d_r^2 terms cancelled by hand.
fn difference(p: &Partials) -> f64 {
    let (e, r, s, c, d) = (&p.frame, p.r, p.s, p.c, &p.d);
    let r2 = r * r;
    2.0 / r * dot(e[0], d[&[1, 0, 0]])
        + c / s / r2 * dot(e[0], d[&[0, 1, 0]])
        + dot(e[0], d[&[0, 2, 0]]) / r2
        + dot(e[0], d[&[0, 0, 2]]) / (r2 * s * s)
        - dot(e[1], d[&[1, 1, 0]]) / r
        - dot(e[2], d[&[1, 0, 1]]) / (r * s)
        + dot(e[1], d[&[0, 1, 0]]) / r2
        + dot(e[2], d[&[0, 0, 1]]) / (r2 * s)
}

/// (direct, cancelled) values of r_hat . Lap V - d_r div V at x.
pub fn rr_pair(v: VFn, chart: Chart, x: Vec3) -> Result<(f64, f64)> {
    let q = chart.coords(x)?;
    let fr = chart.frame(q);
    let mut lap = [0.0; 3];
    for (i, l) in lap.iter_mut().enumerate() {
        *l = sph_lap(&|y: Vec3| v(y)[i], chart, x)?;
    }
    let div_r = chart_partial(chart, &|y: Vec3| sph_div(&v, chart, y).unwrap_or(f64::NAN), q, [1, 0, 0]);
    let direct = dot(fr[0], lap) - div_r;
    Ok((direct, difference(&partials(v, chart, x)?)))
}

/// Individual expansions (r_hat . Lap V, d_r div V) and their difference.
pub fn rr_expansions(v: VFn, chart: Chart, x: Vec3) -> Result<(f64, f64, f64)> {
    let p = partials(v, chart, x)?;
    Ok((rhat_lap(&p), dr_div(&p), difference(&p)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RrReport {
    pub field: String,
    pub chart: Chart,
    pub points: usize,
    /// max |direct - cancelled| / max(1, |direct|)
    pub max_err: f64,
    /// max change of the cancelled difference when W(r) r_hat is added
    pub max_shift: f64,
    /// max change of r_hat . Lap V alone under the same addition
    pub max_individual_change: f64,
}

/// Radial augmentation W(r) r_hat with W = 50 r^3 (W'' = 300 r).
pub fn radial_augmentation(x: Vec3) -> Vec3 {
    let r = norm(x);
    let w = 50.0 * r * r * r;
    [w * x[0] / r, w * x[1] / r, w * x[2] / r]
}

pub fn rr_cancellation(sample: &OpSample) -> Result<RrReport> {
    let v: VFn = &*sample.vector.f;
    let aug = |x: Vec3| {
        let (a, b) = (v(x), radial_augmentation(x));
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    };
    let mut max_err: f64 = 0.0;
    let mut max_shift: f64 = 0.0;
    let mut max_ind: f64 = 0.0;
    for &x in &sample.points {
        let (a, b) = rr_pair(v, sample.chart, x)?;
        max_err = max_err.max((a - b).abs() / a.abs().max(1.0));
        let (l0, _, d0) = rr_expansions(v, sample.chart, x)?;
        let (l1, _, d1) = rr_expansions(&aug, sample.chart, x)?;
        max_shift = max_shift.max((d1 - d0).abs() / d0.abs().max(1.0));
        max_ind = max_ind.max((l1 - l0).abs());
    }
    Ok(RrReport {
        field: sample.vector.name.clone(),
        chart: sample.chart,
        points: sample.points.len(),
        max_err,
        max_shift,
        max_individual_change: max_ind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: Vec3 = [1.3, 0.4, -0.9];

    #[test]
    fn identity_field_gives_zero() {
        let v = |x: Vec3| x;
        let (a, b) = rr_pair(&v, Chart::V, X).unwrap();
        assert!(a.abs() < 1e-6 && b.abs() < 1e-8);
    }

    #[test]
    fn radial_fields_are_invisible() {
        let v = |x: Vec3| {
            let r = norm(x);
            [x[0] * r, x[1] * r, x[2] * r]
        };
        let (_, _, d0) = rr_expansions(&v, Chart::H, X).unwrap();
        let aug = |x: Vec3| {
            let r = norm(x);
            [x[0] * r * r, x[1] * r * r, x[2] * r * r]
        };
        let sum = |x: Vec3| {
            let (a, b) = (v(x), aug(x));
            [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
        };
        let (_, _, d1) = rr_expansions(&sum, Chart::H, X).unwrap();
        assert!((d1 - d0).abs() < 1e-4);
    }

    #[test]
    fn short_form_misses_azimuthal_term() {
        // phi_hat . V = x_1 depends on phi, so the missing term is visible.
        let v = |x: Vec3| {
            let rho2 = x[0] * x[0] + x[1] * x[1];
            let rho = rho2.sqrt();
            // x_1 phi_hat
            [-x[1] * x[0] / rho, x[0] * x[0] / rho, 0.0]
        };
        let p = partials(&v, Chart::V, X).unwrap();
        let full = dr_div(&p);
        let short = dr_div_short_form(&v, Chart::V, X).unwrap();
        let q = Chart::V.coords(X).unwrap();
        let fphi = |y: Vec3| {
            let qq = Chart::V.coords_unchecked(y);
            dot(Chart::V.frame(qq)[2], v(y))
        };
        let missing = -chart_partial(Chart::V, &fphi, q, [0, 0, 1]) / (q[0] * q[0] * q[1].sin());
        assert!(missing.abs() > 1e-2);
        assert!((full - (short + missing)).abs() < 1e-7);
        let direct = chart_partial(Chart::V, &|y: Vec3| sph_div(&v, Chart::V, y).unwrap(), q, [1, 0, 0]);
        assert!((direct - full).abs() < 1e-6);
    }
}
