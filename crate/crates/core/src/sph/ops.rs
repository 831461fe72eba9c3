//! Spherical derivatives and the spherical forms of grad, div, the
//! Laplacian and grad div, with Cartesian finite-difference counterparts.

use super::chart::{axpy, chart_partial, dot, norm, Chart, Dir, Vec3};
use crate::error::Result;
use crate::fd::{central_stencil, derivative_1d};

/// Step of the Cartesian reference stencils.
pub const CART_STEP: f64 = 2e-2;

/// D F at x for D in {d_r, d_theta, d_phi} of the chart, computed by
/// differentiating F along the chart coordinate.
pub fn sph_derivative<F: Fn(Vec3) -> f64>(f: &F, chart: Chart, which: Dir, x: Vec3) -> Result<f64> {
    let q = chart.coords(x)?;
    let mut o = [0; 3];
    o[which.index()] = 1;
    Ok(chart_partial(chart, f, q, o))
}

/// The same derivative from its definition as a scaled directional
/// derivative: r_hat.grad, |x| theta_hat.grad, sqrt(x1^2+x2^2) phi_hat.grad.
pub fn sph_derivative_cartesian<F: Fn(Vec3) -> f64>(f: &F, chart: Chart, which: Dir, x: Vec3) -> Result<f64> {
    let fr = chart.unit_vectors(x)?;
    let g = cart_grad(f, x);
    let q = chart.coords(x)?;
    Ok(match which {
        Dir::R => dot(fr[0], g),
        Dir::Theta => norm(x) * dot(fr[1], g),
        // distance to the chart's polar axis
        Dir::Phi => q[0] * q[1].sin() * dot(fr[2], g),
    })
}

pub fn cart_grad<F: Fn(Vec3) -> f64>(f: &F, x: Vec3) -> Vec3 {
    let mut g = [0.0; 3];
    for (i, gi) in g.iter_mut().enumerate() {
        *gi = derivative_1d(
            |t| {
                let mut y = x;
                y[i] = t;
                f(y)
            },
            x[i],
            1,
            CART_STEP,
        );
    }
    g
}

pub fn cart_laplacian<F: Fn(Vec3) -> f64>(f: &F, x: Vec3) -> f64 {
    (0..3)
        .map(|i| {
            derivative_1d(
                |t| {
                    let mut y = x;
                    y[i] = t;
                    f(y)
                },
                x[i],
                2,
                CART_STEP,
            )
        })
        .sum()
}

pub fn cart_div<F: Fn(Vec3) -> Vec3>(v: &F, x: Vec3) -> f64 {
    (0..3).map(|i| cart_grad(&|y| v(y)[i], x)[i]).sum()
}

/// Cartesian Laplacian of each component.
pub fn cart_vec_laplacian<F: Fn(Vec3) -> Vec3>(v: &F, x: Vec3) -> Vec3 {
    [0, 1, 2].map(|i| cart_laplacian(&|y| v(y)[i], x))
}

/// grad div V from second differences (mixed ones by the 4th-order
/// tensor stencil).
pub fn cart_grad_div<F: Fn(Vec3) -> Vec3>(v: &F, x: Vec3) -> Vec3 {
    let (offs, w) = central_stencil(1);
    let h = CART_STEP;
    let mut out = [0.0; 3];
    for (i, oi) in out.iter_mut().enumerate() {
        // d_i d_j V_j
        for j in 0..3 {
            if i == j {
                *oi += derivative_1d(
                    |t| {
                        let mut y = x;
                        y[i] = t;
                        v(y)[i]
                    },
                    x[i],
                    2,
                    h,
                );
            } else {
                let mut acc = 0.0;
                for (a, wa) in offs.iter().zip(&w) {
                    for (b, wb) in offs.iter().zip(&w) {
                        if *wa == 0.0 || *wb == 0.0 {
                            continue;
                        }
                        let mut y = x;
                        y[i] += *a as f64 * h;
                        y[j] += *b as f64 * h;
                        acc += wa * wb * v(y)[j];
                    }
                }
                *oi += acc / (h * h);
            }
        }
    }
    out
}

/// Spherical components (r_hat.V, theta_hat.V, phi_hat.V) as functions of
/// the chart coordinates.
pub fn component<F: Fn(Vec3) -> Vec3>(chart: Chart, v: &F, c: usize) -> impl Fn(Vec3) -> f64 + '_ {
    move |x: Vec3| {
        let q = chart.coords_unchecked(x);
        dot(chart.frame(q)[c], v(x))
    }
}

/// Partial derivative in chart coordinates; `o` = (r, theta, phi) orders.
fn p<F: Fn(Vec3) -> f64>(chart: Chart, f: &F, q: Vec3, o: [usize; 3]) -> f64 {
    chart_partial(chart, f, q, o)
}

pub fn sph_grad<F: Fn(Vec3) -> f64>(f: &F, chart: Chart, x: Vec3) -> Result<Vec3> {
    let q = chart.coords(x)?;
    let fr = chart.frame(q);
    let (r, s) = (q[0], q[1].sin());
    let mut g = [0.0; 3];
    axpy(&mut g, p(chart, f, q, [1, 0, 0]), fr[0]);
    axpy(&mut g, p(chart, f, q, [0, 1, 0]) / r, fr[1]);
    axpy(&mut g, p(chart, f, q, [0, 0, 1]) / (r * s), fr[2]);
    Ok(g)
}

pub fn sph_div<F: Fn(Vec3) -> Vec3>(v: &F, chart: Chart, x: Vec3) -> Result<f64> {
    let q = chart.coords(x)?;
    let (r, th) = (q[0], q[1]);
    let vr = component(chart, v, 0);
    let vt = component(chart, v, 1);
    let vp = component(chart, v, 2);
    let radial = |y: Vec3| norm(y).powi(2) * vr(y);
    let polar = |y: Vec3| chart.coords_unchecked(y)[1].sin() * vt(y);
    Ok(p(chart, &radial, q, [1, 0, 0]) / (r * r)
        + p(chart, &polar, q, [0, 1, 0]) / (r * th.sin())
        + p(chart, &vp, q, [0, 0, 1]) / (r * th.sin()))
}

pub fn sph_lap<F: Fn(Vec3) -> f64>(f: &F, chart: Chart, x: Vec3) -> Result<f64> {
    let q = chart.coords(x)?;
    let (r, s, c) = (q[0], q[1].sin(), q[1].cos());
    Ok(p(chart, f, q, [2, 0, 0])
        + 2.0 * p(chart, f, q, [1, 0, 0]) / r
        + (p(chart, f, q, [0, 2, 0]) + c / s * p(chart, f, q, [0, 1, 0])) / (r * r)
        + p(chart, f, q, [0, 0, 2]) / (r * r * s * s))
}

/// (grad F, div V, Lap F) from the spherical formulas.
pub fn sph_grad_div_lap<F: Fn(Vec3) -> f64, G: Fn(Vec3) -> Vec3>(
    f: &F,
    v: &G,
    chart: Chart,
    x: Vec3,
) -> Result<(Vec3, f64, f64)> {
    Ok((sph_grad(f, chart, x)?, sph_div(v, chart, x)?, sph_lap(f, chart, x)?))
}

/// grad div V written out in spherical components.
pub fn grad_div_spherical<F: Fn(Vec3) -> Vec3>(v: &F, chart: Chart, x: Vec3) -> Result<Vec3> {
    let q = chart.coords(x)?;
    let fr = chart.frame(q);
    let (r, s, c) = (q[0], q[1].sin(), q[1].cos());
    let cot = c / s;
    let vr = component(chart, v, 0);
    let vt = component(chart, v, 1);
    let vp = component(chart, v, 2);
    let d = |f: &dyn Fn(Vec3) -> f64, o: [usize; 3]| chart_partial(chart, &f, q, o);
    let r2 = r * r;
    let er = d(&vr, [2, 0, 0]) + 2.0 * (d(&vr, [1, 0, 0]) / r - d(&vr, [0, 0, 0]) / r2)
        + (d(&vt, [1, 1, 0]) / r - d(&vt, [0, 1, 0]) / r2)
        + (d(&vt, [1, 0, 0]) * cot / r - d(&vt, [0, 0, 0]) * cot / r2)
        + (d(&vp, [1, 0, 1]) / (r * s) - d(&vp, [0, 0, 1]) / (r2 * s));
    let et = d(&vr, [1, 1, 0]) / r
        + 2.0 * d(&vr, [0, 1, 0]) / r2
        + d(&vt, [0, 2, 0]) / r2
        + (d(&vt, [0, 1, 0]) * cot - d(&vt, [0, 0, 0]) / (s * s)) / r2
        + (d(&vp, [0, 1, 1]) - cot * d(&vp, [0, 0, 1])) / (r2 * s);
    let ep = d(&vr, [1, 0, 1]) / (r * s)
        + 2.0 * d(&vr, [0, 0, 1]) / (r2 * s)
        + d(&vt, [0, 1, 1]) / (r2 * s)
        + d(&vt, [0, 0, 1]) * c / (r2 * s * s)
        + d(&vp, [0, 0, 2]) / (r2 * s * s);
    let mut out = [0.0; 3];
    axpy(&mut out, er, fr[0]);
    axpy(&mut out, et, fr[1]);
    axpy(&mut out, ep, fr[2]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: Vec3 = [1.1, -0.8, 0.9];

    #[test]
    fn radial_coordinate_derivatives() {
        let f = |x: Vec3| norm(x);
        for chart in [Chart::V, Chart::H] {
            assert!((sph_derivative(&f, chart, Dir::R, X).unwrap() - 1.0).abs() < 1e-10);
            assert!(sph_derivative(&f, chart, Dir::Theta, X).unwrap().abs() < 1e-10);
            assert!(sph_derivative(&f, chart, Dir::Phi, X).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn polar_derivative_of_height() {
        let f = |x: Vec3| x[2];
        let d = sph_derivative(&f, Chart::V, Dir::Theta, X).unwrap();
        assert!((d + (X[0] * X[0] + X[1] * X[1]).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn chart_and_directional_derivatives_agree() {
        let f = |x: Vec3| (x[0] * x[1]).sin() + x[2] * x[2] * x[0] / norm(x);
        for chart in [Chart::V, Chart::H] {
            for d in Dir::ALL {
                let a = sph_derivative(&f, chart, d, X).unwrap();
                let b = sph_derivative_cartesian(&f, chart, d, X).unwrap();
                assert!((a - b).abs() < 1e-6, "{chart:?} {d:?}: {a} {b}");
            }
        }
    }

    #[test]
    fn elementary_operator_values() {
        let inv = |x: Vec3| 1.0 / norm(x);
        let id = |x: Vec3| x;
        let poly = |x: Vec3| x[0] * x[0] * x[1] - x[2].powi(3);
        for chart in [Chart::V, Chart::H] {
            assert!(sph_lap(&inv, chart, X).unwrap().abs() < 1e-6);
            assert!((sph_div(&id, chart, X).unwrap() - 3.0).abs() < 1e-8);
            let l = sph_lap(&poly, chart, X).unwrap();
            assert!((l - (2.0 * X[1] - 6.0 * X[2])).abs() < 1e-5);
            let gd = grad_div_spherical(&id, chart, X).unwrap();
            assert!(norm(gd) < 1e-6);
        }
    }

    #[test]
    fn grad_div_matches_cartesian() {
        let v = |x: Vec3| [x[1] * x[2] * x[2], (x[0] + x[2]).sin(), x[0] * x[1] / norm(x)];
        for chart in [Chart::V, Chart::H] {
            let a = grad_div_spherical(&v, chart, X).unwrap();
            let b = cart_grad_div(&v, X);
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-5, "{chart:?}: {a:?} {b:?}");
            }
        }
    }
}
