//! Radial and polar discretisations of the exterior domain.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes `1 = r_0 < r_1 < ... < r_M = R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

pub const MIN_RADIAL_INTERVALS: usize = 16;

impl RadialGrid {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < MIN_RADIAL_INTERVALS + 1 {
            return Err(Error::Grid(format!(
                "need at least {} intervals, got {}",
                MIN_RADIAL_INTERVALS,
                nodes.len().saturating_sub(1)
            )));
        }
        if nodes[0] != 1.0 {
            return Err(Error::Grid(format!("r_0 must be exactly 1, got {}", nodes[0])));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Grid(format!("nodes not strictly increasing at {} -> {}", w[0], w[1])));
        }
        Ok(Self { nodes })
    }

    pub fn uniform(r_max: f64, intervals: usize) -> Result<Self> {
        let h = (r_max - 1.0) / intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals).map(|i| 1.0 + h * i as f64).collect();
        if let Some(last) = nodes.last_mut() {
            *last = r_max;
        }
        Self::from_nodes(nodes)
    }

    /// Constant ratio between consecutive nodes: r_i = R^{i/M}.
    pub fn geometric(r_max: f64, intervals: usize) -> Result<Self> {
        if !(r_max > 1.0) {
            return Err(Error::Grid(format!("R must exceed 1, got {r_max}")));
        }
        let lr = r_max.ln();
        let mut nodes: Vec<f64> = (0..=intervals)
            .map(|i| (lr * i as f64 / intervals as f64).exp())
            .collect();
        nodes[0] = 1.0;
        nodes[intervals] = r_max;
        Self::from_nodes(nodes)
    }

    /// Spacings growing geometrically from `h0` at r = 1 so that the last
    /// node lands on `r_max`. Falls back to uniform spacing when `h0` is at
    /// least the uniform spacing.
    pub fn stretched(r_max: f64, intervals: usize, h0: f64) -> Result<Self> {
        let len = r_max - 1.0;
        let m = intervals as f64;
        if !(h0 > 0.0) || !(len > 0.0) {
            return Err(Error::Grid(format!("bad stretched grid R={r_max}, h0={h0}")));
        }
        if h0 * m >= len {
            return Self::uniform(r_max, intervals);
        }
        // Solve h0 (q^M - 1)/(q - 1) = len for q > 1 by bisection on ln q.
        let total = |q: f64| h0 * ((q.ln() * m).exp_m1()) / (q - 1.0);
        let (mut lo, mut hi) = (1.0 + 1e-14, 2.0);
        while total(hi) < len {
            hi = 1.0 + 2.0 * (hi - 1.0);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if total(mid) < len {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = 0.5 * (lo + hi);
        let mut nodes = Vec::with_capacity(intervals + 1);
        let mut r = 1.0;
        let mut h = h0;
        nodes.push(r);
        for _ in 0..intervals {
            r += h;
            h *= q;
            nodes.push(r);
        }
        nodes[intervals] = r_max;
        Self::from_nodes(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of nodes (M + 1).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn h_min(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Face radius between nodes i and i+1.
    #[inline]
    pub fn face(&self, i: usize) -> f64 {
        0.5 * (self.nodes[i] + self.nodes[i + 1])
    }

    /// Radial extent of the dual cell around node i: `[face(i-1), face(i)]`,
    /// clipped to `[1, R]` at the ends.
    pub fn dual_bounds(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { self.nodes[0] } else { self.face(i - 1) };
        let hi = if i + 1 == self.nodes.len() { self.r_max() } else { self.face(i) };
        (lo, hi)
    }

    /// Volume of the spherical shell dual cell around node i (3D).
    pub fn shell_volume(&self, i: usize) -> f64 {
        let (a, b) = self.dual_bounds(i);
        4.0 * PI / 3.0 * (b * b * b - a * a * a)
    }

    /// `\int r^2 dr` over the dual cell around node i.
    pub fn r2_weight(&self, i: usize) -> f64 {
        let (a, b) = self.dual_bounds(i);
        (b * b * b - a * a * a) / 3.0
    }

    /// Three-point first-derivative weights at node i (central in the
    /// interior, second-order one-sided at the ends). Returns (offset of
    /// first node, weights).
    pub fn d1_weights(&self, i: usize) -> (usize, [f64; 3]) {
        let n = self.nodes.len();
        let (s, k) = if i == 0 {
            (0, 0)
        } else if i + 1 == n {
            (n - 3, 2)
        } else {
            (i - 1, 1)
        };
        let x = [self.nodes[s], self.nodes[s + 1], self.nodes[s + 2]];
        (s, lagrange_d1(x, k))
    }

    /// Three-point second-derivative weights at an interior node.
    pub fn d2_weights(&self, i: usize) -> [f64; 3] {
        let (a, b, c) = (self.nodes[i - 1], self.nodes[i], self.nodes[i + 1]);
        let hm = b - a;
        let hp = c - b;
        [2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))]
    }

    /// Discrete derivative of nodal values (second order everywhere).
    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (s, w) = self.d1_weights(i);
                w[0] * f[s] + w[1] * f[s + 1] + w[2] * f[s + 2]
            })
            .collect()
    }

    /// Trapezoidal-in-volume quadrature of nodal values with weight r^{n-1}
    /// over the dual cells, times the sphere area for n = 3.
    pub fn integrate_3d(&self, f: &[f64]) -> f64 {
        f.iter()
            .enumerate()
            .map(|(i, v)| v * self.shell_volume(i))
            .sum()
    }
}

/// Derivative weights of the quadratic interpolant through `x` at `x[k]`.
fn lagrange_d1(x: [f64; 3], k: usize) -> [f64; 3] {
    let mut w = [0.0; 3];
    for j in 0..3 {
        // d/dx of L_j at x_k
        let mut sum = 0.0;
        for m in 0..3 {
            if m == j {
                continue;
            }
            let mut prod = 1.0 / (x[j] - x[m]);
            for l in 0..3 {
                if l != j && l != m {
                    prod *= (x[k] - x[l]) / (x[j] - x[l]);
                }
            }
            sum += prod;
        }
        w[j] = sum;
    }
    w
}

/// Uniform polar discretisation. Cell edges include both poles; the
/// time-dependent solver stores unknowns at cell centres so no unknown
/// sits on the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    n_cells: usize,
    // sin and cot at centres, sin θ over each cell, sin at edges
    sin_c: Vec<f64>,
    cot_c: Vec<f64>,
    sin_w: Vec<f64>,
    sin_e: Vec<f64>,
}

pub const MIN_THETA_CELLS: usize = 8;

impl AngularGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < MIN_THETA_CELLS {
            return Err(Error::Grid(format!("need at least {MIN_THETA_CELLS} polar cells, got {n_cells}")));
        }
        let d = PI / n_cells as f64;
        let c = |j: usize| (j as f64 + 0.5) * d;
        Ok(Self {
            n_cells,
            sin_c: (0..n_cells).map(|j| c(j).sin()).collect(),
            cot_c: (0..n_cells).map(|j| c(j).cos() / c(j).sin()).collect(),
            sin_w: (0..n_cells).map(|j| (j as f64 * d).cos() - ((j + 1) as f64 * d).cos()).collect(),
            sin_e: (0..=n_cells).map(|j| if j == n_cells { 0.0 } else { (j as f64 * d).sin() }).collect(),
        })
    }

    /// sin θ_j and cot θ_j at cell centres.
    #[inline]
    pub fn center_trig(&self, j: usize) -> (f64, f64) {
        (self.sin_c[j], self.cot_c[j])
    }

    /// sin θ at edge j.
    #[inline]
    pub fn edge_sin(&self, j: usize) -> f64 {
        self.sin_e[j]
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dtheta(&self) -> f64 {
        PI / self.n_cells as f64
    }

    /// Cell edges 0 = theta_0 < ... < theta_N = pi.
    pub fn edges(&self) -> Vec<f64> {
        let d = self.dtheta();
        let mut e: Vec<f64> = (0..=self.n_cells).map(|j| d * j as f64).collect();
        e[self.n_cells] = PI;
        e
    }

    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dtheta()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.center(j)).collect()
    }

    /// `\int sin(theta) d theta` over cell j.
    #[inline]
    pub fn sin_weight(&self, j: usize) -> f64 {
        self.sin_w[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_invariants() {
        let g = RadialGrid::geometric(200.0, 64).unwrap();
        assert_eq!(g.r(0), 1.0);
        assert_eq!(g.r_max(), 200.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(RadialGrid::uniform(10.0, 8).is_err());
        assert!(RadialGrid::from_nodes((0..20).map(|i| 1.0 + i as f64 * 0.1).rev().collect()).is_err());
        let mut bad: Vec<f64> = (0..20).map(|i| 1.0 + i as f64).collect();
        bad[0] = 1.0 + 1e-9;
        assert!(RadialGrid::from_nodes(bad).is_err());
    }

    #[test]
    fn stretched_grid_hits_endpoints() {
        let g = RadialGrid::stretched(300.0, 1024, 0.05).unwrap();
        assert!((g.r(1) - 1.05).abs() < 1e-12);
        assert_eq!(g.r_max(), 300.0);
        let gaps: Vec<f64> = g.nodes().windows(2).map(|w| w[1] - w[0]).collect();
        assert!(gaps.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)));
        assert!((gaps[gaps.len() - 2] / gaps[gaps.len() - 3] - gaps[1] / gaps[0]).abs() < 1e-6);
    }

    #[test]
    fn derivative_exact_on_quadratics() {
        let g = RadialGrid::stretched(20.0, 40, 0.1).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| 3.0 * r * r - 2.0 * r + 1.0).collect();
        let d = g.derivative(&f);
        for (i, r) in g.nodes().iter().enumerate() {
            assert!((d[i] - (6.0 * r - 2.0)).abs() < 1e-9 * (1.0 + r), "node {i}");
        }
        for i in 1..g.len() - 1 {
            let w = g.d2_weights(i);
            let v = w[0] * f[i - 1] + w[1] * f[i] + w[2] * f[i + 1];
            assert!((v - 6.0).abs() < 1e-8);
        }
    }

    #[test]
    fn shell_volumes_sum_to_ball_shell() {
        let g = RadialGrid::geometric(5.0, 32).unwrap();
        let total: f64 = (0..g.len()).map(|i| g.shell_volume(i)).sum();
        let exact = 4.0 * PI / 3.0 * (125.0 - 1.0);
        assert!((total - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn angular_grid() {
        let a = AngularGrid::new(32).unwrap();
        let e = a.edges();
        assert_eq!(e[0], 0.0);
        assert_eq!(e[32], PI);
        let s: f64 = (0..32).map(|j| a.sin_weight(j)).sum();
        assert!((s - 2.0).abs() < 1e-14);
        assert!(AngularGrid::new(7).is_err());
    }
}
