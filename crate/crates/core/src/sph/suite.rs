//! The full operator suite: every identity and inequality of the toolkit,
//! evaluated on the manufactured corpus and reported row by row.

use super::cancel::rr_cancellation;
use super::chart::{chart_partial, chart_partial_vec, chart_step, dot, Chart, Dir, Vec3};
use super::commutator::{commutator_check, CommKind};
use super::corpus::{corpus, sample_points, OpSample};
use super::cutoff::{build_cutoffs, xi_tilde_deriv, xi_tilde_eval, CutoffFamily, DEFAULT_WIDTH};
use super::hardy::{hardy_check, hardy_corpus, HardyGrid};
use super::ops::{
    cart_div, cart_grad, cart_grad_div, cart_laplacian, grad_div_spherical, sph_derivative, sph_derivative_cartesian,
    sph_div, sph_grad, sph_lap,
};
use crate::error::Result;
use crate::fd::derivative_1d;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub check: String,
    pub detail: String,
    /// measured error (or violation) — passes when value <= tol
    pub value: f64,
    pub tol: f64,
    /// fitted constant where the check has one
    pub fitted_c: Option<f64>,
}

impl SuiteRow {
    pub fn new(check: &str, detail: impl Into<String>, value: f64, tol: f64) -> Self {
        Self { check: check.into(), detail: detail.into(), value, tol, fitted_c: None }
    }

    pub fn pass(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Debug, Clone)]
pub struct OpsSuite {
    pub rows: Vec<SuiteRow>,
}

impl OpsSuite {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(SuiteRow::pass)
    }

    pub fn failures(&self) -> Vec<&SuiteRow> {
        self.rows.iter().filter(|r| !r.pass()).collect()
    }

    /// Rows whose check name starts with `prefix`.
    pub fn select(&self, prefix: &str) -> Vec<&SuiteRow> {
        self.rows.iter().filter(|r| r.check.starts_with(prefix)).collect()
    }

    /// Worst value/tol ratio over rows with the given prefix.
    pub fn worst(&self, prefix: &str) -> Option<&SuiteRow> {
        self.select(prefix).into_iter().max_by(|a, b| (a.value / a.tol).total_cmp(&(b.value / b.tol)))
    }
}

fn inf(a: Vec3) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

fn rel3(a: Vec3, b: Vec3) -> f64 {
    inf([a[0] - b[0], a[1] - b[1], a[2] - b[2]]) / inf(a).max(1.0)
}

/// d_theta and d_phi of the unit vectors against the closed relations
/// d_th r = th, d_ph r = s ph, d_th th = -r, d_ph th = c ph, d_th ph = 0,
/// d_ph ph = -s r - c th. Returns (max relation error, max Gram error).
pub fn frame_relations(chart: Chart, points: &[Vec3]) -> (f64, f64) {
    let (mut err, mut gram): (f64, f64) = (0.0, 0.0);
    for &x in points {
        let q = chart.coords_unchecked(x);
        let e = match chart.unit_vectors(x) {
            Ok(e) => e,
            Err(_) => continue,
        };
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                gram = gram.max((dot(e[i], e[j]) - id).abs());
            }
        }
        let (s, c) = (q[1].sin(), q[1].cos());
        let unit = |k: usize| move |y: Vec3| chart.unit_vectors(y).map(|f| f[k]).unwrap_or([f64::NAN; 3]);
        let lin = |a: f64, u: Vec3, b: f64, v: Vec3| [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]];
        let expect = [
            (0, [0, 1, 0], e[1]),
            (0, [0, 0, 1], lin(s, e[2], 0.0, e[2])),
            (1, [0, 1, 0], lin(-1.0, e[0], 0.0, e[0])),
            (1, [0, 0, 1], lin(c, e[2], 0.0, e[2])),
            (2, [0, 1, 0], [0.0; 3]),
            (2, [0, 0, 1], lin(-s, e[0], -c, e[1])),
        ];
        for (k, o, want) in expect {
            let got = chart_partial_vec(chart, &unit(k), q, o);
            err = err.max(inf([got[0] - want[0], got[1] - want[1], got[2] - want[2]]));
        }
    }
    (err, gram)
}

fn operator_rows(samples: &[OpSample]) -> Vec<SuiteRow> {
    let mut out = Vec::new();
    let (mut dmax, mut gmax, mut vmax, mut lmax, mut gdmax, mut comm): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut n = 0;
    for s in samples {
        let f = &*s.scalar.f;
        let v = &*s.vector.f;
        for &x in &s.points {
            n += 1;
            for d in Dir::ALL {
                let a = sph_derivative(&f, s.chart, d, x).unwrap_or(f64::NAN);
                let b = sph_derivative_cartesian(&f, s.chart, d, x).unwrap_or(f64::NAN);
                dmax = dmax.max(rel(b, a));
            }
            let q = s.chart.coords_unchecked(x);
            let rt = chart_partial(s.chart, &f, q, [1, 1, 0]);
            let dr_then_dt = derivative_1d(
                |t| chart_partial(s.chart, &f, [q[0], t, q[2]], [1, 0, 0]),
                q[1],
                1,
                chart_step(1),
            );
            comm = comm.max((rt - dr_then_dt).abs());
            gmax = gmax.max(rel3(cart_grad(&f, x), sph_grad(&f, s.chart, x).unwrap_or([f64::NAN; 3])));
            vmax = vmax.max(rel(cart_div(&v, x), sph_div(&v, s.chart, x).unwrap_or(f64::NAN)));
            lmax = lmax.max(rel(cart_laplacian(&f, x), sph_lap(&f, s.chart, x).unwrap_or(f64::NAN)));
            gdmax = gdmax.max(rel3(cart_grad_div(&v, x), grad_div_spherical(&v, s.chart, x).unwrap_or([f64::NAN; 3])));
        }
    }
    let detail = format!("{n} points");
    out.push(SuiteRow::new("deriv-scaled", &detail, dmax, 1e-6));
    out.push(SuiteRow::new("deriv-commute-r-theta", &detail, comm, 1e-5));
    out.push(SuiteRow::new("sph-grad", &detail, gmax, 1e-5));
    out.push(SuiteRow::new("sph-div", &detail, vmax, 1e-5));
    out.push(SuiteRow::new("sph-lap", &detail, lmax, 1e-5));
    out.push(SuiteRow::new("sph-grad-div", &detail, gdmax, 1e-5));
    out
}

fn cutoff_rows(cut: &CutoffFamily, seed: u64) -> Vec<SuiteRow> {
    let mut out = Vec::new();
    // profile
    let (mut range, mut zero, mut plateau, mut ineq): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..=2000 {
        let t = PI * k as f64 / 2000.0;
        let v = xi_tilde_eval(t).unwrap_or(f64::NAN);
        let d = xi_tilde_deriv(t, 1).unwrap_or(f64::NAN);
        range = range.max((-v).max(v - 1.0).max(0.0));
        if t <= PI / 8.0 || t >= 7.0 * PI / 8.0 {
            zero = zero.max(v.abs());
        }
        if (3.0 * PI / 8.0..=5.0 * PI / 8.0).contains(&t) {
            plateau = plateau.max((v - 1.0).abs());
        }
        ineq = ineq.max(d * d - 128.0 / (PI * PI) * v);
    }
    out.push(SuiteRow::new("xi-tilde-range", "2001 angles", range, 0.0));
    out.push(SuiteRow::new("xi-tilde-zero", "[0,pi/8] u [7pi/8,pi]", zero, 0.0));
    out.push(SuiteRow::new("xi-tilde-plateau", "[3pi/8,5pi/8]", plateau, 0.0));
    out.push(SuiteRow::new("xi-tilde-slope", "(xi')^2 <= 128/pi^2 xi", ineq.max(0.0), 1e-12));

    // partition and support on a dense sphere sample
    let (mut part, mut support, mut range_chi): (f64, f64, f64) = (1.0, 0.0, 0.0);
    let m = 120;
    for i in 0..=m {
        let th = PI * i as f64 / m as f64;
        for j in 0..2 * m {
            let ph = PI * j as f64 / m as f64;
            let x = Chart::V.to_cart([1.5, th, ph]);
            let (a, b) = (cut.chi(Chart::V, x), cut.chi(Chart::H, x));
            part = part.min(a + b);
            range_chi = range_chi.max((-a).max(a - 1.0).max(-b).max(b - 1.0).max(0.0));
            for chart in [Chart::V, Chart::H] {
                let t = chart.coords_unchecked(x)[1];
                if !(PI / 9.0..=8.0 * PI / 9.0).contains(&t) {
                    support = support.max(cut.chi(chart, x).abs());
                }
            }
        }
    }
    let pts = format!("{} sphere points", (m + 1) * 2 * m);
    out.push(SuiteRow::new("chi-partition", &pts, (1.0 - part).max(0.0), 1e-10));
    out.push(SuiteRow::new("chi-range", &pts, range_chi, 0.0));
    out.push(SuiteRow::new("chi-support", &pts, support, 0.0));

    // gradient: direction, formula, and |grad chi|^2 <= C chi
    for chart in [Chart::V, Chart::H] {
        let pts: Vec<Vec3> = sample_points(chart, 100, seed + 100)
            .into_iter()
            .chain((0..100).map(|k| {
                // dense in the transition bands
                let th = PI / 9.0 + (7.0 * PI / 9.0) * k as f64 / 99.0;
                chart.to_cart([1.0 + 0.02 * k as f64, th, 0.37 * k as f64])
            }))
            .collect();
        let (mut radial, mut azim, mut formula, mut c_fit): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
        for &x in &pts {
            let Ok(e) = chart.unit_vectors(x) else { continue };
            let chi = |y: Vec3| cut.chi(chart, y);
            let g = [0, 1, 2].map(|i| {
                derivative_1d(
                    |t| {
                        let mut y = x;
                        y[i] = t;
                        chi(y)
                    },
                    x[i],
                    1,
                    1e-4,
                )
            });
            radial = radial.max(dot(e[0], g).abs());
            azim = azim.max(dot(e[2], g).abs());
            let closed = cut.grad_chi(chart, x);
            formula = formula.max(inf([g[0] - closed[0], g[1] - closed[1], g[2] - closed[2]]));
            let c = chi(x);
            if c > 1e-12 {
                c_fit = c_fit.max(dot(closed, closed) / c);
            }
        }
        let d = format!("chart {chart:?}, {} points", pts.len());
        out.push(SuiteRow::new("chi-grad-radial", &d, radial, 1e-8));
        out.push(SuiteRow::new("chi-grad-azimuthal", &d, azim, 1e-8));
        out.push(SuiteRow::new("chi-grad-formula", &d, formula, 1e-6));
        let mut row = SuiteRow::new("chi-grad-bound", &d, if c_fit.is_finite() { 0.0 } else { f64::INFINITY }, 0.0);
        row.fitted_c = Some(c_fit);
        out.push(row);
    }
    out
}

fn frame_rows(seed: u64) -> Vec<SuiteRow> {
    let mut out = Vec::new();
    for chart in [Chart::V, Chart::H] {
        let pts = sample_points(chart, 100, seed + 200);
        let (rel_err, gram) = frame_relations(chart, &pts);
        let d = format!("chart {chart:?}, 100 points");
        out.push(SuiteRow::new("frame-orthonormal", &d, gram, 1e-12));
        out.push(SuiteRow::new("frame-derivatives", &d, rel_err, 1e-6));
    }
    out
}

fn commutator_rows(samples: &[OpSample], cut: &CutoffFamily) -> Vec<SuiteRow> {
    let mut jobs = Vec::new();
    for kind in CommKind::ALL {
        for n in 1..=3 {
            jobs.push((kind, n));
        }
    }
    jobs.par_iter()
        .map(|&(kind, n)| {
            let dirs: &[Dir] = if kind == CommKind::Adv { &Dir::ALL } else { &[Dir::Theta, Dir::Phi] };
            let (mut err, mut c, mut pts): (f64, f64, usize) = (0.0, 0.0, 0);
            for s in samples {
                for &d in dirs {
                    let r = commutator_check(kind, n, d, s, cut);
                    err = err.max(r.max_err);
                    c = c.max(r.fitted_c);
                    pts += r.points;
                }
            }
            let mut row = SuiteRow::new(&format!("commutator-{}-N{n}", kind.name()), format!("{pts} evaluations"), err, 1e-4);
            row.fitted_c = Some(c);
            row
        })
        .collect()
}

fn cancellation_rows(samples: &[OpSample]) -> Result<Vec<SuiteRow>> {
    let (mut err, mut shift, mut n): (f64, f64, usize) = (0.0, 0.0, 0);
    for s in samples {
        let r = rr_cancellation(s)?;
        err = err.max(r.max_err);
        shift = shift.max(r.max_shift);
        n += r.points;
    }
    Ok(vec![
        SuiteRow::new("rr-cancellation", format!("{n} points"), err, 1e-4),
        SuiteRow::new("rr-radial-insensitivity", format!("{n} points, W = 50 r^3"), shift, 1e-4),
    ])
}

fn hardy_rows() -> Result<Vec<SuiteRow>> {
    let grid = HardyGrid::default();
    let mut out = Vec::new();
    for (name, f) in hardy_corpus() {
        let r = hardy_check(&f, &grid)?;
        let mut row = SuiteRow::new(
            "hardy-inequality",
            format!("{name}: lhs {:.10e}, rhs {:.10e}", r.lhs, r.rhs),
            (r.lhs - r.rhs).max(0.0),
            0.0,
        );
        row.fitted_c = Some(r.ratio);
        out.push(row);
        if name == "inverse_square" {
            let e = ((r.lhs / (16.0 * PI / 3.0) - 1.0).abs()).max((r.rhs / (32.0 * PI) - 1.0).abs());
            out.push(SuiteRow::new("hardy-closed-form", "lhs = 16pi/3, rhs = 32pi", e, 1e-3));
        }
    }
    Ok(out)
}

/// Runs the whole suite. `points_per_sample` points are drawn for each of
/// the five corpus samples.
pub fn verify_ops(seed: u64, points_per_sample: usize) -> Result<OpsSuite> {
    let cut = build_cutoffs(DEFAULT_WIDTH)?;
    let samples = corpus(seed, points_per_sample);
    let mut rows = frame_rows(seed);
    rows.extend(operator_rows(&samples));
    rows.extend(cutoff_rows(&cut, seed));
    rows.extend(commutator_rows(&samples, &cut));
    rows.extend(cancellation_rows(&samples)?);
    rows.extend(hardy_rows()?);
    Ok(OpsSuite { rows })
}
