//! Physical parameters, the barotropic closure and the state containers
//! shared by the stationary and time-dependent solvers.

use crate::error::{Error, Result};

/// Physical constants of the isentropic flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub gamma: f64,
    pub k_pressure: f64,
    pub mu: f64,
    pub lambda: f64,
    pub rho_plus: f64,
    /// Normal boundary speed on |x| = 1; negative for outflow.
    pub u_b: f64,
    pub dim_n: usize,
}

impl Default for FluidParams {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            k_pressure: 1.0,
            mu: 1.0,
            lambda: 0.0,
            rho_plus: 1.0,
            u_b: -0.05,
            dim_n: 3,
        }
    }
}

/// A single violated admissibility constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, constraint: &str) -> bool {
        self.violations.iter().any(|v| v.constraint == constraint)
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let msg = self
                .violations
                .iter()
                .map(|v| format!("{} ({})", v.constraint, v.detail))
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::ConstraintViolation(msg))
        }
    }
}

pub fn validate_params(p: &FluidParams) -> ValidationReport {
    let mut violations = Vec::new();
    let mut check = |ok: bool, constraint: &'static str, detail: String| {
        if !ok {
            violations.push(Violation { constraint, detail });
        }
    };
    // NaN fails every comparison below, so it is reported as a violation.
    check(p.gamma >= 1.0, "gamma >= 1", format!("gamma = {}", p.gamma));
    check(p.k_pressure > 0.0, "K > 0", format!("K = {}", p.k_pressure));
    check(p.mu > 0.0, "mu > 0", format!("mu = {}", p.mu));
    check(
        2.0 * p.mu + 3.0 * p.lambda >= 0.0,
        "2mu+3lambda >= 0",
        format!("2mu+3lambda = {}", 2.0 * p.mu + 3.0 * p.lambda),
    );
    check(p.rho_plus > 0.0, "rho_plus > 0", format!("rho_plus = {}", p.rho_plus));
    check(p.u_b < 0.0, "u_b < 0", format!("u_b = {}", p.u_b));
    check(p.dim_n >= 2, "n >= 2", format!("n = {}", p.dim_n));
    ValidationReport { violations }
}

impl FluidParams {
    pub fn validate(&self) -> ValidationReport {
        validate_params(self)
    }

    /// Longitudinal viscosity 2mu + lambda.
    pub fn nu(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// P(rho) = K rho^gamma.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.pressure_unchecked(rho))
    }

    /// q(rho) = P'(rho) / rho.
    pub fn q(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.q_unchecked(rho))
    }

    #[inline]
    pub fn pressure_unchecked(&self, rho: f64) -> f64 {
        self.k_pressure * rho.powf(self.gamma)
    }

    /// P'(rho), the squared sound speed.
    #[inline]
    pub fn dpressure(&self, rho: f64) -> f64 {
        self.gamma * self.k_pressure * rho.powf(self.gamma - 1.0)
    }

    #[inline]
    pub fn q_unchecked(&self, rho: f64) -> f64 {
        self.gamma * self.k_pressure * rho.powf(self.gamma - 2.0)
    }

    pub fn sound_speed(&self, rho: f64) -> f64 {
        self.dpressure(rho).sqrt()
    }

    pub fn q_plus(&self) -> f64 {
        self.q_unchecked(self.rho_plus)
    }

    /// Damping rate rho_+^2 q_+ / (2mu + lambda) of the radial density derivative.
    pub fn beta(&self) -> f64 {
        self.rho_plus * self.rho_plus * self.q_plus() / self.nu()
    }

    /// h(rho_+ + d) - h(rho_+) for the enthalpy h' = P'/rho, written to
    /// stay accurate when |d| is many orders below rho_+.
    pub fn enthalpy_increment(&self, d: f64) -> f64 {
        let x = (d / self.rho_plus).ln_1p();
        if self.gamma == 1.0 {
            self.k_pressure * x
        } else {
            let g1 = self.gamma - 1.0;
            self.k_pressure * self.gamma / g1 * self.rho_plus.powf(g1) * (g1 * x).exp_m1()
        }
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("density must be positive, got {rho}")))
    }
}

/// Spherically symmetric state on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SymState {
    pub t: f64,
    pub rho: Vec<f64>,
    pub u_rad: Vec<f64>,
}

impl SymState {
    pub fn min_density(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Axisymmetric state: arrays are indexed `[i * n_theta + j]` with `i` the
/// radial node and `j` the polar cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiState {
    pub t: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub rho: Vec<f64>,
    pub u_r: Vec<f64>,
    pub u_theta: Vec<f64>,
}

impl AxiState {
    pub fn zeros(n_r: usize, n_theta: usize) -> Self {
        let n = n_r * n_theta;
        Self {
            t: 0.0,
            n_r,
            n_theta,
            rho: vec![0.0; n],
            u_r: vec![0.0; n],
            u_theta: vec![0.0; n],
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    pub fn min_density(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> FluidParams {
        FluidParams {
            gamma: 1.4,
            k_pressure: 1.0,
            mu: 1.0,
            lambda: 0.0,
            rho_plus: 1.0,
            u_b: -0.01,
            dim_n: 3,
        }
    }

    #[test]
    fn pressure_and_q_values() {
        let p = FluidParams { gamma: 2.0, k_pressure: 1.0, ..base() };
        assert_eq!(p.pressure(1.0).unwrap(), 1.0);
        assert_eq!(p.q(1.0).unwrap(), 2.0);
        let p = FluidParams { gamma: 1.0, k_pressure: 3.0, ..base() };
        assert_eq!(p.pressure(1.0).unwrap(), 3.0);
        assert_eq!(p.q(1.0).unwrap(), 3.0);
        assert!(matches!(p.pressure(0.0), Err(Error::Domain(_))));
        assert!(matches!(p.q(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn beta_unit_case() {
        let p = FluidParams { gamma: 2.0, k_pressure: 1.0, mu: 1.0, lambda: 0.0, ..base() };
        // nu = 2, q_+ = 2
        assert_eq!(p.beta(), 1.0);
    }

    #[test]
    fn validation_examples() {
        assert!(validate_params(&base()).is_valid());
        let r = validate_params(&FluidParams { lambda: -1.0, ..base() });
        assert!(!r.is_valid());
        assert!(r.violates("2mu+3lambda >= 0"));
        let r = validate_params(&FluidParams { u_b: 0.1, ..base() });
        assert!(r.violates("u_b < 0"));
        let r = validate_params(&FluidParams { mu: 0.0, ..base() });
        assert!(r.violates("mu > 0"));
    }

    #[test]
    fn validation_boundary_cases() {
        // Each constraint exactly at its edge.
        assert!(validate_params(&FluidParams { gamma: 1.0, ..base() }).is_valid());
        assert!(validate_params(&FluidParams { gamma: 1.0 - 1e-15, ..base() }).violates("gamma >= 1"));
        assert!(validate_params(&FluidParams { lambda: -2.0 / 3.0, ..base() }).is_valid());
        assert!(validate_params(&FluidParams { lambda: -2.0 / 3.0 - 1e-12, ..base() })
            .violates("2mu+3lambda >= 0"));
        assert!(validate_params(&FluidParams { k_pressure: 0.0, ..base() }).violates("K > 0"));
        assert!(validate_params(&FluidParams { rho_plus: 0.0, ..base() }).violates("rho_plus > 0"));
        assert!(validate_params(&FluidParams { u_b: 0.0, ..base() }).violates("u_b < 0"));
        assert!(validate_params(&FluidParams { u_b: -1e-300, ..base() }).is_valid());
        assert!(validate_params(&FluidParams { dim_n: 1, ..base() }).violates("n >= 2"));
        assert!(validate_params(&FluidParams { gamma: f64::NAN, ..base() }).violates("gamma >= 1"));
    }

    #[test]
    fn enthalpy_increment_matches_direct_difference() {
        for &g in &[1.0, 1.4, 2.0] {
            let p = FluidParams { gamma: g, ..base() };
            let h = |rho: f64| {
                if g == 1.0 {
                    rho.ln()
                } else {
                    g / (g - 1.0) * rho.powf(g - 1.0)
                }
            };
            let d = 0.3;
            let direct = h(1.3) - h(1.0);
            assert!((p.enthalpy_increment(d) - direct).abs() < 1e-13);
        }
    }

    proptest::proptest! {
        #[test]
        fn pressure_derivative_consistent(rho in 0.2f64..5.0, g in 1.0f64..3.0, k in 0.1f64..4.0) {
            let p = FluidParams { gamma: g, k_pressure: k, ..base() };
            let h = 1e-5 * rho;
            let fd = (p.pressure_unchecked(rho + h) - p.pressure_unchecked(rho - h)) / (2.0 * h);
            let exact = rho * p.q_unchecked(rho);
            proptest::prop_assert!(((fd - exact) / exact).abs() <= 1e-6);
        }

        #[test]
        fn validation_matches_inequalities(
            g in 0.5f64..2.0, k in -1.0f64..1.0, mu in -1.0f64..1.0,
            lam in -2.0f64..1.0, rp in -1.0f64..1.0, ub in -1.0f64..1.0,
        ) {
            let p = FluidParams { gamma: g, k_pressure: k, mu, lambda: lam, rho_plus: rp, u_b: ub, dim_n: 3 };
            let expected = g >= 1.0 && k > 0.0 && mu > 0.0 && 2.0 * mu + 3.0 * lam >= 0.0 && rp > 0.0 && ub < 0.0;
            proptest::prop_assert_eq!(validate_params(&p).is_valid(), expected);
        }
    }
}
