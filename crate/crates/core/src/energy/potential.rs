//! Potential energy density H(ζ, ξ) = ζ ∫_ξ^ζ (P(z) − P(ξ))/z² dz and its
//! algebraic identities.

use crate::error::{Error, Result};
use crate::model::FluidParams;
use crate::quad::Rule;

fn check(zeta: f64, xi: f64) -> Result<()> {
    if !(zeta > 0.0 && xi > 0.0) || !zeta.is_finite() || !xi.is_finite() {
        return Err(Error::Domain(format!("H needs positive densities, got ({zeta}, {xi})")));
    }
    Ok(())
}

/// t^γ − 1 − γ(t − 1) with s = t − 1, accurate for small |s|.
fn gamma_excess(gamma: f64, s: f64) -> f64 {
    if s.abs() < 1e-2 {
        // binomial series from k = 2
        let mut c = gamma * (gamma - 1.0) / 2.0;
        let mut p = s * s;
        let mut acc = 0.0;
        for k in 2..16 {
            acc += c * p;
            c *= (gamma - k as f64) / (k + 1) as f64;
            p *= s;
        }
        acc
    } else {
        (gamma * s.ln_1p()).exp_m1() - gamma * s
    }
}

/// (1 + s) ln(1 + s) − s, accurate for small |s|.
fn log_excess(s: f64) -> f64 {
    if s.abs() < 1e-2 {
        let mut acc = 0.0;
        let mut p = s * s;
        for k in 2..16 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * p / (k * (k - 1)) as f64;
            p *= s;
        }
        acc
    } else {
        (1.0 + s) * s.ln_1p() - s
    }
}

/// Closed form of H, evaluated without cancellation near ζ = ξ.
pub fn potential_energy_h(zeta: f64, xi: f64, p: &FluidParams) -> Result<f64> {
    check(zeta, xi)?;
    Ok(h_unchecked(zeta, xi, p))
}

#[inline]
pub fn h_unchecked(zeta: f64, xi: f64, p: &FluidParams) -> f64 {
    let s = (zeta - xi) / xi;
    if p.gamma == 1.0 {
        p.k_pressure * xi * log_excess(s)
    } else {
        p.k_pressure / (p.gamma - 1.0) * xi.powf(p.gamma) * gamma_excess(p.gamma, s)
    }
}

/// H from its defining integral (Gauss–Legendre, independent of the closed form).
pub fn h_quadrature(zeta: f64, xi: f64, p: &FluidParams) -> Result<f64> {
    check(zeta, xi)?;
    let pxi = p.pressure_unchecked(xi);
    let rule = Rule::new(40);
    let panels = 4;
    let mut acc = 0.0;
    for k in 0..panels {
        let a = xi + (zeta - xi) * k as f64 / panels as f64;
        let b = xi + (zeta - xi) * (k + 1) as f64 / panels as f64;
        acc += rule.integrate(a, b, |z| (p.pressure_unchecked(z) - pxi) / (z * z));
    }
    Ok(zeta * acc)
}

/// Relative residuals of the H identities, partial derivatives by central
/// differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HIdentities {
    /// ζ ∂_ζ H − H − P(ζ) + P(ξ)
    pub zeta_derivative: f64,
    /// ξ ∂_ξ H + P'(ξ)(ζ − ξ)
    pub xi_derivative: f64,
    /// ζ ∂_ζ H + ξ ∂_ξ H − γ H
    pub homogeneity: f64,
    /// P(ζ) − P(ξ) − P'(ξ)(ζ − ξ) − (γ − 1) H
    pub taylor: f64,
}

impl HIdentities {
    pub fn max(&self) -> f64 {
        self.zeta_derivative.abs().max(self.xi_derivative.abs()).max(self.homogeneity.abs()).max(self.taylor.abs())
    }
}

pub fn h_identities(zeta: f64, xi: f64, p: &FluidParams) -> Result<HIdentities> {
    check(zeta, xi)?;
    let h = |a: f64, b: f64| h_unchecked(a, b, p);
    let hz = 1e-5 * zeta;
    let hx = 1e-5 * xi;
    // fourth-order central differences
    let dz = (-h(zeta + 2.0 * hz, xi) + 8.0 * h(zeta + hz, xi) - 8.0 * h(zeta - hz, xi) + h(zeta - 2.0 * hz, xi)) / (12.0 * hz);
    let dx = (-h(zeta, xi + 2.0 * hx) + 8.0 * h(zeta, xi + hx) - 8.0 * h(zeta, xi - hx) + h(zeta, xi - 2.0 * hx)) / (12.0 * hx);
    let hv = h(zeta, xi);
    let (pz, px, dpx) = (p.pressure_unchecked(zeta), p.pressure_unchecked(xi), p.dpressure(xi));
    let scale = hv.abs().max(pz.abs()).max(px.abs()).max(f64::MIN_POSITIVE);
    Ok(HIdentities {
        zeta_derivative: (zeta * dz - hv - pz + px) / scale,
        xi_derivative: (xi * dx + dpx * (zeta - xi)) / scale,
        homogeneity: (zeta * dz + xi * dx - p.gamma * hv) / scale,
        taylor: (pz - px - dpx * (zeta - xi) - (p.gamma - 1.0) * hv) / scale,
    })
}

/// Empirical (min, max) of H(ρ, ρ̃)/|ρ − ρ̃|² over an n×n grid of the range.
pub fn equivalence_constants(rho_lo: f64, rho_hi: f64, n: usize, p: &FluidParams) -> Result<(f64, f64)> {
    if !(rho_lo > 0.0 && rho_hi > rho_lo && rho_hi.is_finite()) {
        return Err(Error::Domain(format!("need 0 < rho_* < rho^*, got [{rho_lo}, {rho_hi}]")));
    }
    let n = n.max(2);
    let node = |k: usize| rho_lo + (rho_hi - rho_lo) * k as f64 / (n - 1) as f64;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let (z, x) = (node(a), node(b));
            let r = h_unchecked(z, x, p) / ((z - x) * (z - x));
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(Error::Domain(format!("degenerate equivalence constants ({lo}, {hi})")));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64, k: f64) -> FluidParams {
        FluidParams { gamma, k_pressure: k, ..FluidParams::default() }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(potential_energy_h(1.7, 1.7, &params(1.4, 1.0)).unwrap(), 0.0);
        assert!((potential_energy_h(2.0, 1.0, &params(2.0, 1.0)).unwrap() - 1.0).abs() < 1e-14);
        let e = std::f64::consts::E;
        assert!((potential_energy_h(e, 1.0, &params(1.0, 1.0)).unwrap() - 1.0).abs() < 1e-14);
        assert!(potential_energy_h(0.0, 1.0, &params(1.4, 1.0)).is_err());
    }

    #[test]
    fn quadrature_agrees() {
        for &g in &[1.0, 1.4, 2.0, 3.0] {
            let p = params(g, 1.3);
            for &(z, x) in &[(2.0, 1.0), (0.5, 1.5), (1.01, 1.0), (0.9, 1.1)] {
                let a = potential_energy_h(z, x, &p).unwrap();
                let b = h_quadrature(z, x, &p).unwrap();
                assert!((a - b).abs() <= 1e-10 * a.abs(), "{g} {z} {x}: {a} {b}");
            }
        }
    }

    #[test]
    fn series_branch_is_continuous() {
        for &g in &[1.0, 1.4, 2.0] {
            let p = params(g, 1.0);
            let (a, b) = (h_unchecked(1.0 + 0.9999e-2, 1.0, &p), h_unchecked(1.0 + 1.0001e-2, 1.0, &p));
            // H grows like s^2: relative change 4e-4 between the two points
            assert!(((b - a) / a - 4e-4).abs() < 1e-5, "{g}: {}", (b - a) / a);
            let tiny = h_unchecked(1.0 + 1e-7, 1.0, &p);
            assert!((tiny / (g * 0.5e-14) - 1.0).abs() < 1e-6, "{g}: {tiny}");
        }
    }

    #[test]
    fn identities_hold() {
        let p = params(2.0, 1.0);
        let r = h_identities(2.0, 1.0, &p).unwrap();
        assert!(r.max() < 1e-8, "{r:?}");
        let r = h_identities(1.3, 1.3, &params(1.4, 1.0)).unwrap();
        assert!(r.max() < 1e-10);
    }

    #[test]
    fn equivalence() {
        let (a, b) = equivalence_constants(0.5, 1.5, 30, &params(2.0, 1.0)).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
        let (a, b) = equivalence_constants(0.5, 1.5, 30, &params(1.0, 1.0)).unwrap();
        // the diagonal limit K / (2 xi) at xi = 1 lies inside the bracket
        assert!(a < 0.5 && b > 0.5 && a > 0.2 && b < 1.0);
        assert!(equivalence_constants(1.0, 1.0, 10, &params(1.4, 1.0)).is_err());
    }
}
