//! The exterior Hardy inequality
//! ∫_Ω |u|²/|x|² + ∮_{|x|=1} |u|² ≤ 2n ∫_Ω |∇u|²  (n = 3),
//! checked by quadrature on a truncated exterior domain.

use super::chart::{norm, Vec3};
use crate::error::{Error, Result};
use crate::fd::derivative_1d;
use crate::quad::{gauss_legendre, Rule};
use std::f64::consts::PI;

/// Hardy constant for n = 3.
pub const HARDY_CONSTANT: f64 = 6.0;

/// Relative change allowed between the R and 2R quadratures.
pub const TAIL_TOL: f64 = 1e-2;

const GRAD_STEP: f64 = 1e-3;

/// Quadrature on 1 ≤ |x| ≤ r_max: Gauss–Legendre on dyadic radial panels,
/// Gauss–Legendre in cos θ, trapezoid in φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyGrid {
    pub r_max: f64,
    pub radial_points: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for HardyGrid {
    fn default() -> Self {
        Self { r_max: 32.0, radial_points: 12, n_theta: 16, n_phi: 32 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyResult {
    pub lhs: f64,
    pub rhs: f64,
    /// lhs / rhs, 0 when both vanish
    pub ratio: f64,
    /// max relative change of lhs, rhs between R and 2R
    pub tail_change: f64,
}

impl HardyResult {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12) + 1e-300
    }
}

struct Sphere {
    dirs: Vec<(Vec3, f64)>,
}

impl Sphere {
    fn new(n_theta: usize, n_phi: usize) -> Self {
        let (mu, wmu) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut dirs = Vec::with_capacity(n_theta * n_phi);
        for (c, w) in mu.iter().zip(&wmu) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..n_phi {
                let ph = (k as f64 + 0.5) * dphi;
                dirs.push(([s * ph.cos(), s * ph.sin(), *c], w * dphi));
            }
        }
        Self { dirs }
    }
}

fn grad_sq<F: Fn(Vec3) -> Vec3>(u: &F, x: Vec3) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let line = |t: f64| {
            let mut y = x;
            y[i] = t;
            u(y)
        };
        for c in 0..3 {
            let d = derivative_1d(|t| line(t)[c], x[i], 1, GRAD_STEP);
            acc += d * d;
        }
    }
    acc
}

/// (∫ |u|²/|x|², ∫ |∇u|²) over the shell a ≤ |x| ≤ b.
fn shell<F: Fn(Vec3) -> Vec3>(u: &F, sphere: &Sphere, rule: &Rule, a: f64, b: f64) -> (f64, f64) {
    let (mut l, mut g) = (0.0, 0.0);
    for (r, wr) in rule.on(a, b) {
        for &(d, wa) in &sphere.dirs {
            let x = [r * d[0], r * d[1], r * d[2]];
            let v = u(x);
            let w = wr * wa * r * r;
            l += w * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) / (r * r);
            g += w * grad_sq(u, x);
        }
    }
    (l, g)
}

fn rel_change(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((b - a) / b).abs()
    }
}

/// Hardy check for a vector field (a scalar field is passed as one component).
pub fn hardy_check<F: Fn(Vec3) -> Vec3>(u: &F, grid: &HardyGrid) -> Result<HardyResult> {
    if !(grid.r_max > 1.0) || grid.radial_points == 0 || grid.n_theta == 0 || grid.n_phi == 0 {
        return Err(Error::Grid(format!("invalid Hardy grid {grid:?}")));
    }
    let sphere = Sphere::new(grid.n_theta, grid.n_phi);
    let rule = Rule::new(grid.radial_points);
    let boundary: f64 = sphere
        .dirs
        .iter()
        .map(|&(d, w)| {
            let v = u(d);
            w * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
        })
        .sum();
    let (mut l, mut g) = (0.0, 0.0);
    let mut a = 1.0;
    while a < grid.r_max {
        let b = (2.0 * a).min(grid.r_max);
        let (dl, dg) = shell(u, &sphere, &rule, a, b);
        l += dl;
        g += dg;
        a = b;
    }
    let (tl, tg) = shell(u, &sphere, &rule, grid.r_max, 2.0 * grid.r_max);
    let tail_change = rel_change(l, l + tl).max(rel_change(g, g + tg));
    if tail_change > TAIL_TOL {
        return Err(Error::TailNotConverged(tail_change));
    }
    let lhs = l + tl + boundary;
    let rhs = HARDY_CONSTANT * (g + tg);
    let ratio = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(HardyResult { lhs, rhs, ratio, tail_change })
}

pub fn hardy_check_scalar<F: Fn(Vec3) -> f64>(u: &F, grid: &HardyGrid) -> Result<HardyResult> {
    hardy_check(&|x: Vec3| [u(x), 0.0, 0.0], grid)
}

pub type HardyField = Box<dyn Fn(Vec3) -> Vec3 + Send + Sync>;

/// Named fields for the Hardy check; the first is |x|^-2 with
/// lhs = 16π/3 and rhs = 32π.
pub fn hardy_corpus() -> Vec<(&'static str, HardyField)> {
    vec![
        ("inverse_square", Box::new(|x: Vec3| [1.0 / (norm(x) * norm(x)), 0.0, 0.0])),
        ("exp_decay", Box::new(|x: Vec3| [(1.0 - norm(x)).exp(), 0.0, 0.0])),
        ("gaussian_linear", Box::new(|x: Vec3| [(-(norm(x).powi(2)) / 4.0).exp() * (1.0 + x[0]), 0.0, 0.0])),
        ("dipole", Box::new(|x: Vec3| [x[2] / norm(x).powi(3), 0.0, 0.0])),
        (
            "swirl",
            Box::new(|x: Vec3| {
                let e = (-norm(x) / 2.0).exp();
                [x[1] * e, -x[0] * e, 0.3 * x[2] * e]
            }),
        ),
        ("zero", Box::new(|_: Vec3| [0.0; 3])),
    ]
}
