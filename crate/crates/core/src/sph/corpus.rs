//! Manufactured smooth fields and evaluation points for the operator
//! identity checks.

use super::chart::{norm, Chart, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

pub type ScalarFn = Arc<dyn Fn(Vec3) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(Vec3) -> Vec3 + Send + Sync>;

#[derive(Clone)]
pub struct NamedScalar {
    pub name: String,
    pub f: ScalarFn,
}

#[derive(Clone)]
pub struct NamedVector {
    pub name: String,
    pub f: VectorFn,
}

/// A scalar field, a vector field and points inside one chart.
#[derive(Clone)]
pub struct OpSample {
    pub scalar: NamedScalar,
    pub vector: NamedVector,
    pub chart: Chart,
    pub points: Vec<Vec3>,
}

fn scalar(name: &str, f: impl Fn(Vec3) -> f64 + Send + Sync + 'static) -> NamedScalar {
    NamedScalar { name: name.into(), f: Arc::new(f) }
}

fn vector(name: &str, f: impl Fn(Vec3) -> Vec3 + Send + Sync + 'static) -> NamedVector {
    NamedVector { name: name.into(), f: Arc::new(f) }
}

pub fn scalar_corpus() -> Vec<NamedScalar> {
    vec![
        scalar("gauss_linear", |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 8.0).exp() * (x[0] + 0.5 * x[1] * x[2])),
        scalar("cubic", |x| x[0] * x[0] * x[1] - x[2].powi(3)),
        scalar("inverse_r", |x| 1.0 / norm(x)),
        scalar("wave", |x| x[0].sin() * (0.5 * x[1]).cos() * (-0.2 * x[2]).exp() / norm(x)),
        scalar("rational", |x| (x[0] * x[1] + x[2]) / (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2])),
    ]
}

/// Fixed vector fields plus one random trigonometric field per seed.
pub fn vector_corpus(seed: u64) -> Vec<NamedVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coef = [[0.0f64; 5]; 6];
    for row in coef.iter_mut() {
        for c in row.iter_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
    }
    vec![
        vector("identity", |x| x),
        vector("gauss_mixed", |x| {
            let g = (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 10.0).exp();
            [x[1] * x[2] * g, -x[0] * g, x[0] * x[1] * x[2] * g]
        }),
        vector("trig_over_r", |x| {
            let r = norm(x);
            [x[1].sin() / r, x[2].cos() / r, x[0] * x[0] / r]
        }),
        vector("radial_quadratic", |x| {
            let r = norm(x);
            [x[0] * r, x[1] * r, x[2] * r]
        }),
        vector(&format!("random_trig_{seed}"), move |x| {
            let damp = (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 20.0).exp();
            let mut out = [0.0; 3];
            for (i, o) in out.iter_mut().enumerate() {
                let (a, b) = (coef[2 * i], coef[2 * i + 1]);
                *o = damp * (a[0] * (a[1] * x[0] + a[2] * x[1] + a[3] * x[2] + a[4]).sin()
                    + b[0] * (b[1] * x[0] + b[2] * x[1] + b[3] * x[2] + b[4]).cos());
            }
            out
        }),
    ]
}

/// Points with 1.2 <= |x| <= 3 and chart polar angle in [pi/6, 5pi/6].
pub fn sample_points(chart: Chart, n: usize, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = rng.gen_range(1.2..3.0);
            let th = rng.gen_range(PI / 6.0..5.0 * PI / 6.0);
            let ph = rng.gen_range(-PI..PI);
            chart.to_cart([r, th, ph])
        })
        .collect()
}

/// Pairs every scalar field with a vector field, alternating charts.
pub fn corpus(seed: u64, points_per_sample: usize) -> Vec<OpSample> {
    scalar_corpus()
        .into_iter()
        .zip(vector_corpus(seed))
        .enumerate()
        .map(|(k, (s, v))| {
            let chart = if k % 2 == 0 { Chart::V } else { Chart::H };
            OpSample { scalar: s, vector: v, chart, points: sample_points(chart, points_per_sample, seed + k as u64) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_lie_in_chart_interior() {
        for chart in [Chart::V, Chart::H] {
            for x in sample_points(chart, 200, 7) {
                let q = chart.coords(x).unwrap();
                assert!(q[0] >= 1.2 - 1e-12 && q[0] <= 3.0 + 1e-12);
                assert!(q[1] >= PI / 6.0 - 1e-12 && q[1] <= 5.0 * PI / 6.0 + 1e-12);
            }
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(3, 4);
        let b = corpus(3, 4);
        assert_eq!(a.len(), 5);
        for (s, t) in a.iter().zip(&b) {
            assert_eq!(s.points, t.points);
            assert_eq!((s.vector.f)([1.0, 2.0, 0.5]), (t.vector.f)([1.0, 2.0, 0.5]));
        }
    }
}
