//! Angular cut-offs: the piecewise-quadratic profile, its mollification
//! and the partition of unity built from it on the two charts.

use super::chart::{axis_margin, Chart, Vec3};
use crate::error::{Error, Result};
use crate::quad::Rule;
use std::f64::consts::PI;

/// Default mollifier half-width: the largest that keeps the support in
/// [pi/9, 8pi/9].
pub const DEFAULT_WIDTH: f64 = PI / 72.0;

const A: f64 = 32.0 / (PI * PI);

/// Piecewise profile; zero outside [pi/8, 7pi/8] (also outside [0, pi]).
fn xi_tilde_ext(t: f64, k: usize) -> f64 {
    let p8 = PI / 8.0;
    let (v, d1, d2) = if t < p8 || t >= 7.0 * p8 {
        (0.0, 0.0, 0.0)
    } else if t < 2.0 * p8 {
        let s = t - p8;
        (A * s * s, 2.0 * A * s, 2.0 * A)
    } else if t < 3.0 * p8 {
        let s = t - 3.0 * p8;
        (1.0 - A * s * s, -2.0 * A * s, -2.0 * A)
    } else if t < 5.0 * p8 {
        (1.0, 0.0, 0.0)
    } else if t < 6.0 * p8 {
        let s = t - 5.0 * p8;
        (1.0 - A * s * s, -2.0 * A * s, -2.0 * A)
    } else {
        let s = t - 7.0 * p8;
        (A * s * s, 2.0 * A * s, 2.0 * A)
    };
    match k {
        0 => v,
        1 => d1,
        2 => d2,
        _ => panic!("profile derivative of order {k} is not tabulated"),
    }
}

pub fn xi_tilde_eval(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("angle {theta} outside [0, pi]")));
    }
    Ok(xi_tilde_ext(theta, 0))
}

pub fn xi_tilde_deriv(theta: f64, k: usize) -> Result<f64> {
    xi_tilde_eval(theta)?;
    Ok(xi_tilde_ext(theta, k))
}

fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

#[derive(Debug, Clone)]
pub struct CutoffFamily {
    width: f64,
    norm: f64,
    rule: Rule,
}

pub fn build_cutoffs(width: f64) -> Result<CutoffFamily> {
    if !(width > 0.0) {
        return Err(Error::Domain(format!("mollifier width must be positive, got {width}")));
    }
    if PI / 8.0 - width < PI / 9.0 * (1.0 - 1e-12) {
        return Err(Error::SupportViolation(format!(
            "width {width} spreads the support to [{:.6}, {:.6}]",
            PI / 8.0 - width,
            7.0 * PI / 8.0 + width
        )));
    }
    let rule = Rule::new(24);
    let panels = 16;
    let norm: f64 = (0..panels)
        .map(|k| {
            let a = -1.0 + 2.0 * k as f64 / panels as f64;
            rule.integrate(a, a + 2.0 / panels as f64, bump)
        })
        .sum();
    Ok(CutoffFamily { width, norm, rule })
}

impl CutoffFamily {
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Mollifier density on [-width, width], unit mass.
    pub fn eta(&self, s: f64) -> f64 {
        bump(s / self.width) / (self.width * self.norm)
    }

    /// k-th derivative (k <= 2) of the mollified profile.
    pub fn xi_deriv(&self, theta: f64, k: usize) -> f64 {
        let w = self.width;
        if theta <= PI / 8.0 - w || theta >= 7.0 * PI / 8.0 + w {
            return 0.0;
        }
        if k == 0 && (3.0 * PI / 8.0 + w..=5.0 * PI / 8.0 - w).contains(&theta) {
            return 1.0;
        }
        // split the convolution at the profile's kinks
        let mut cuts = vec![-w, w];
        for b in 1..=7 {
            let s = theta - b as f64 * PI / 8.0;
            if s > -w && s < w {
                cuts.push(s);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut acc = 0.0;
        for pair in cuts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            // sub-panels keep the bump's steep flanks resolved
            let sub = 4;
            for q in 0..sub {
                let lo = a + (b - a) * q as f64 / sub as f64;
                let hi = a + (b - a) * (q + 1) as f64 / sub as f64;
                acc += self.rule.integrate(lo, hi, |s| xi_tilde_ext(theta - s, k) * self.eta(s));
            }
        }
        acc
    }

    /// Clamped to [0, 1], which the exact convolution satisfies; the
    /// quadrature may overshoot by rounding.
    pub fn xi(&self, theta: f64) -> f64 {
        self.xi_deriv(theta, 0).clamp(0.0, 1.0)
    }

    pub fn chi(&self, chart: Chart, x: Vec3) -> f64 {
        self.xi(chart.coords_unchecked(x)[1])
    }

    /// grad chi = theta_hat xi'(theta) / r.
    pub fn grad_chi(&self, chart: Chart, x: Vec3) -> Vec3 {
        let q = chart.coords_unchecked(x);
        if q[1].sin() < axis_margin() {
            return [0.0; 3];
        }
        let d = self.xi_deriv(q[1], 1) / q[0];
        chart.frame(q)[1].map(|c| c * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sph::chart::dot;

    #[test]
    fn profile_table() {
        assert_eq!(xi_tilde_eval(PI / 2.0).unwrap(), 1.0);
        assert_eq!(xi_tilde_eval(PI / 8.0).unwrap(), 0.0);
        assert!((xi_tilde_eval(PI / 4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(xi_tilde_eval(-0.1).is_err());
        assert!(xi_tilde_eval(3.2).is_err());
        for k in 0..=400 {
            let t = PI * k as f64 / 400.0;
            let v = xi_tilde_eval(t).unwrap();
            let d = xi_tilde_deriv(t, 1).unwrap();
            assert!((0.0..=1.0).contains(&v));
            assert!(d * d <= 128.0 / (PI * PI) * v + 1e-12);
        }
    }

    #[test]
    fn mollifier_has_unit_mass() {
        let c = build_cutoffs(DEFAULT_WIDTH).unwrap();
        let r = Rule::new(40);
        let w = c.width();
        let m: f64 = (0..8).map(|k| r.integrate(-w + k as f64 * w / 4.0, -w + (k + 1) as f64 * w / 4.0, |s| c.eta(s))).sum();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn width_limits() {
        assert!(matches!(build_cutoffs(PI / 60.0), Err(Error::SupportViolation(_))));
        assert!(build_cutoffs(0.0).is_err());
        assert!(build_cutoffs(PI / 100.0).is_ok());
    }

    #[test]
    fn derivative_of_mollified_profile() {
        let c = build_cutoffs(DEFAULT_WIDTH).unwrap();
        for &t in &[0.38, 0.5, 0.8, 1.1, 2.0, 2.5] {
            let h = 1e-4;
            let fd = (c.xi(t + h) - c.xi(t - h)) / (2.0 * h);
            assert!((fd - c.xi_deriv(t, 1)).abs() < 1e-6, "{t}");
        }
    }

    #[test]
    fn gradient_is_angular() {
        let c = build_cutoffs(DEFAULT_WIDTH).unwrap();
        let x = [1.2, -0.7, 1.9];
        for chart in [Chart::V, Chart::H] {
            let g = c.grad_chi(chart, x);
            let f = chart.unit_vectors(x).unwrap();
            assert!(dot(g, f[0]).abs() < 1e-14 && dot(g, f[2]).abs() < 1e-14);
            let h = 1e-5;
            for i in 0..3 {
                let (mut a, mut b) = (x, x);
                a[i] += h;
                b[i] -= h;
                let fd = (c.chi(chart, a) - c.chi(chart, b)) / (2.0 * h);
                assert!((fd - g[i]).abs() < 1e-7);
            }
        }
    }
}
