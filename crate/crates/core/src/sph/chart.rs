//! The two pole-avoiding spherical charts, their unit vectors and
//! derivatives of fields in chart coordinates (r, theta, phi).

use super::jet::Jet;
use crate::error::{Error, Result};
use crate::fd::{mixed_partial, mixed_partial_vec};
use std::cell::Cell;
use std::f64::consts::PI;

pub type Vec3 = [f64; 3];

/// Smallest sine of the chart polar angle at which a chart is evaluated.
pub fn axis_margin() -> f64 {
    (PI / 9.0).sin() / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// polar axis along e_3
    V,
    /// polar axis along e_2
    H,
}

/// Coordinate direction in a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    R,
    Theta,
    Phi,
}

impl Dir {
    pub fn index(self) -> usize {
        match self {
            Dir::R => 0,
            Dir::Theta => 1,
            Dir::Phi => 2,
        }
    }

    pub const ALL: [Dir; 3] = [Dir::R, Dir::Theta, Dir::Phi];
}

/// Local frame (r_hat, theta_hat, phi_hat) as rows.
pub type Frame = [Vec3; 3];

impl Chart {
    /// Maps between the chart's canonical ordering and Cartesian components.
    #[inline]
    fn perm(self, v: Vec3) -> Vec3 {
        match self {
            Chart::V => v,
            Chart::H => [v[0], v[2], v[1]],
        }
    }

    pub fn to_cart(self, q: Vec3) -> Vec3 {
        let [r, th, ph] = q;
        self.perm([r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()])
    }

    /// Chart coordinates (r, theta, phi) of x, theta in [0, pi].
    pub fn coords_unchecked(self, x: Vec3) -> Vec3 {
        let y = self.perm(x);
        let r = norm(y);
        [r, (y[2] / r).clamp(-1.0, 1.0).acos(), y[1].atan2(y[0])]
    }

    pub fn coords(self, x: Vec3) -> Result<Vec3> {
        let q = self.coords_unchecked(x);
        if !(q[1].sin() >= axis_margin()) {
            return Err(Error::AxisDegeneracy(format!("{self:?} chart at x = {x:?}")));
        }
        Ok(q)
    }

    /// Unit vectors from the Cartesian component formulas.
    pub fn unit_vectors(self, x: Vec3) -> Result<Frame> {
        self.coords(x)?;
        let y = self.perm(x);
        let r = norm(y);
        let rho = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let rh = [y[0] / r, y[1] / r, y[2] / r];
        let th = [y[0] * y[2] / (r * rho), y[1] * y[2] / (r * rho), -(rho * rho) / (r * rho)];
        let ph = [-y[1] / rho, y[0] / rho, 0.0];
        Ok([self.perm(rh), self.perm(th), self.perm(ph)])
    }

    /// Frame as a function of chart coordinates.
    pub fn frame(self, q: Vec3) -> Frame {
        let j = self.frame_jets(q, Dir::R);
        j.map(|v| v.map(|c| c.value()))
    }

    /// Taylor jets of the frame along coordinate direction `dir`.
    pub fn frame_jets(self, q: Vec3, dir: Dir) -> [[Jet; 3]; 3] {
        let (th, ph) = (q[1], q[2]);
        let c = Jet::constant;
        let (st, ct) = if dir == Dir::Theta { (Jet::sin_at(th), Jet::cos_at(th)) } else { (c(th.sin()), c(th.cos())) };
        let (sp, cp) = if dir == Dir::Phi { (Jet::sin_at(ph), Jet::cos_at(ph)) } else { (c(ph.sin()), c(ph.cos())) };
        let rh = [st * cp, st * sp, ct];
        let thh = [ct * cp, ct * sp, -st];
        let phh = [-sp, cp, c(0.0)];
        let p = |v: [Jet; 3]| match self {
            Chart::V => v,
            Chart::H => [v[0], v[2], v[1]],
        };
        [p(rh), p(thh), p(phh)]
    }
}

/// Scalar coefficient jets along `dir`: (1/r, 1/(r sin theta), cot theta, 1/sin^2 theta).
pub fn coefficient_jets(q: Vec3, dir: Dir) -> [Jet; 4] {
    let c = Jet::constant;
    let inv_r = if dir == Dir::R { Jet::variable(q[0]).recip() } else { c(1.0 / q[0]) };
    let (st, ct) = if dir == Dir::Theta { (Jet::sin_at(q[1]), Jet::cos_at(q[1])) } else { (c(q[1].sin()), c(q[1].cos())) };
    let csc = st.recip();
    [inv_r, inv_r * csc, ct * csc, csc * csc]
}

/// Derivative of a jet-valued vector.
pub fn jet_vec_deriv(v: &[Jet; 3], k: usize) -> Vec3 {
    [v[0].deriv(k), v[1].deriv(k), v[2].deriv(k)]
}

thread_local! {
    static STEP_SCALE: Cell<f64> = const { Cell::new(1.0) };
}

/// Run `f` with every chart step multiplied by `scale` on this thread.
pub fn with_step_scale<R>(scale: f64, f: impl FnOnce() -> R) -> R {
    let old = STEP_SCALE.with(|s| s.replace(scale));
    let out = f();
    STEP_SCALE.with(|s| s.set(old));
    out
}

/// Finite-difference step in chart coordinates for a given total derivative
/// order: balances fourth-order truncation against rounding.
pub fn chart_step(total_order: usize) -> f64 {
    let h = match total_order {
        0..=2 => 1e-2,
        3 => 2e-2,
        4 => 3e-2,
        _ => 4e-2,
    };
    h * STEP_SCALE.with(Cell::get)
}

fn orders_of(orders: [usize; 3]) -> [f64; 3] {
    [chart_step(orders.iter().sum()); 3]
}

/// d_r^a d_theta^b d_phi^c of the scalar field f in chart coordinates.
pub fn chart_partial<F: Fn(Vec3) -> f64>(chart: Chart, f: &F, q: Vec3, orders: [usize; 3]) -> f64 {
    if orders == [0, 0, 0] {
        return f(chart.to_cart(q));
    }
    mixed_partial(&|p| f(chart.to_cart(p)), q, orders, orders_of(orders))
}

/// Component-wise chart partial of a Cartesian vector field.
pub fn chart_partial_vec<F: Fn(Vec3) -> Vec3>(chart: Chart, f: &F, q: Vec3, orders: [usize; 3]) -> Vec3 {
    if orders == [0, 0, 0] {
        return f(chart.to_cart(q));
    }
    mixed_partial_vec(&|p| f(chart.to_cart(p)), q, orders, orders_of(orders))
}

/// Orders array for `k` derivatives along `dir` on top of `base`.
pub fn with_dir(base: [usize; 3], dir: Dir, k: usize) -> [usize; 3] {
    let mut o = base;
    o[dir.index()] += k;
    o
}

pub fn norm(x: Vec3) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn axpy(acc: &mut Vec3, s: f64, v: Vec3) {
    for i in 0..3 {
        acc[i] += s * v[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_error(f: &Frame) -> f64 {
        let mut e: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                e = e.max((dot(f[i], f[j]) - id).abs());
            }
        }
        e
    }

    #[test]
    fn frame_examples() {
        let f = Chart::H.unit_vectors([0.0, 0.0, 2.0]).unwrap();
        assert_eq!(f[0], [0.0, 0.0, 1.0]);
        assert!(gram_error(&f) < 1e-12);
        let f = Chart::V.unit_vectors([2.0, 0.0, 0.0]).unwrap();
        assert_eq!(f[2], [0.0, 1.0, 0.0]);
        assert!(matches!(Chart::V.unit_vectors([0.0, 0.01, 2.0]), Err(Error::AxisDegeneracy(_))));
    }

    #[test]
    fn coordinates_round_trip_and_frames_agree() {
        for chart in [Chart::V, Chart::H] {
            for &x in &[[1.0, 2.0, 0.5], [-0.3, 1.1, -0.7], [2.0, -1.0, 1.5]] {
                let q = chart.coords(x).unwrap();
                let y = chart.to_cart(q);
                for i in 0..3 {
                    assert!((x[i] - y[i]).abs() < 1e-14);
                }
                let a = chart.unit_vectors(x).unwrap();
                let b = chart.frame(q);
                for k in 0..3 {
                    for i in 0..3 {
                        assert!((a[k][i] - b[k][i]).abs() < 1e-14);
                    }
                }
                assert!(gram_error(&a) < 1e-12);
                // x = r r_hat, d x / d theta = r theta_hat, d x / d phi = r sin(theta) phi_hat
                let dth = chart_partial_vec(chart, &|p| p, q, [0, 1, 0]);
                let dph = chart_partial_vec(chart, &|p| p, q, [0, 0, 1]);
                for i in 0..3 {
                    assert!((dth[i] - q[0] * b[1][i]).abs() < 1e-8);
                    assert!((dph[i] - q[0] * q[1].sin() * b[2][i]).abs() < 1e-8);
                }
            }
        }
    }
}
