//! Legendre-mode content of axisymmetric fields on polar cells.

use crate::discrete::Layout;
use crate::grid::AngularGrid;

/// P_0..=P_n at x.
pub fn legendre(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0; n + 1];
    if n >= 1 {
        p[1] = x;
    }
    for l in 2..=n {
        p[l] = ((2 * l - 1) as f64 * x * p[l - 1] - (l - 1) as f64 * p[l - 2]) / l as f64;
    }
    p
}

/// Exact cell integrals ∫ P_ℓ(cos θ) sin θ dθ over each polar cell, from
/// (2ℓ+1) P_ℓ = (P_{ℓ+1} − P_{ℓ−1})'. Their sum over the cells telescopes,
/// so a θ-independent field has no ℓ ≥ 1 content up to round-off.
pub fn cell_weights(angular: &AngularGrid, l_max: usize) -> Vec<Vec<f64>> {
    let edges = angular.edges();
    let anti = |l: usize, x: f64| {
        let p = legendre(l + 1, x);
        if l == 0 {
            x
        } else {
            (p[l + 1] - p[l - 1]) / (2 * l + 1) as f64
        }
    };
    (0..=l_max)
        .map(|l| (0..angular.n_cells()).map(|j| anti(l, edges[j].cos()) - anti(l, edges[j + 1].cos())).collect())
        .collect()
}

/// Coefficients a_ℓ(r_i) = (2ℓ+1)/2 ∫ f(r_i, θ) P_ℓ(cos θ) sin θ dθ of a
/// nodal field on radial row i. A spherically symmetric layout only has ℓ = 0.
pub fn project_row(layout: &Layout, f: &[f64], i: usize, l_max: usize) -> Vec<f64> {
    match layout {
        Layout::Sym(_) => {
            let mut a = vec![0.0; l_max + 1];
            a[0] = f[i];
            a
        }
        Layout::Axi(_, ang) => {
            let nt = ang.n_cells();
            cell_weights(ang, l_max)
                .iter()
                .enumerate()
                .map(|(l, w)| 0.5 * (2 * l + 1) as f64 * (0..nt).map(|j| w[j] * f[i * nt + j]).sum::<f64>())
                .collect()
        }
    }
}

/// Radial rows nearest to the requested radii (deduplicated, sorted).
pub fn probe_rows(layout: &Layout, radii: &[f64]) -> Vec<usize> {
    let g = layout.radial();
    let mut rows: Vec<usize> = radii
        .iter()
        .map(|&r| {
            (0..g.len())
                .min_by(|&a, &b| (g.r(a) - r).abs().total_cmp(&(g.r(b) - r).abs()))
                .unwrap_or(0)
        })
        .collect();
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// max over probe rows of |a_ℓ| for ℓ = 0..=l_max.
pub fn mode_amplitudes(layout: &Layout, f: &[f64], rows: &[usize], l_max: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; l_max + 1];
    for &i in rows {
        for (o, a) in out.iter_mut().zip(project_row(layout, f, i, l_max)) {
            *o = o.max(a.abs());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;

    #[test]
    fn legendre_values() {
        let p = legendre(4, 0.5);
        assert!((p[2] - (-0.125)).abs() < 1e-15);
        assert!((p[3] - (-0.4375)).abs() < 1e-15);
        assert!((p[4] - (-0.2890625)).abs() < 1e-15);
    }

    #[test]
    fn projection_recovers_modes() {
        let l = Layout::Axi(RadialGrid::uniform(3.0, 16).unwrap(), AngularGrid::new(64).unwrap());
        let nt = l.n_theta();
        // cell averages of 0.3 P_1 + 0.2 P_3 have exactly these coefficients
        let w = cell_weights(&AngularGrid::new(64).unwrap(), 3);
        let a = AngularGrid::new(64).unwrap();
        let f: Vec<f64> = (0..l.len())
            .map(|k| {
                let j = k % nt;
                (0.3 * w[1][j] + 0.2 * w[3][j]) / a.sin_weight(j)
            })
            .collect();
        let c = project_row(&l, &f, 2, 4);
        assert!((c[1] - 0.3).abs() < 1e-3 && (c[3] - 0.2).abs() < 1e-3, "{c:?}");
        assert!(c[0].abs() < 1e-12 && c[2].abs() < 1e-3 && c[4].abs() < 1e-3);
        let flat = vec![1.7; l.len()];
        let c = project_row(&l, &flat, 3, 4);
        assert!((c[0] - 1.7).abs() < 1e-14);
        assert!(c[1..].iter().all(|x| x.abs() < 1e-14), "{c:?}");
    }
}
