//! `key = value` run configuration. Unknown keys are rejected; omitted keys
//! take the defaults below.

use outflow_core::evolution::{Perturbation, RunSettings, Shape, Target, L_MAX};
use outflow_core::{Error, FluidParams, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: FluidParams,

    pub steady_r_max: f64,
    pub steady_intervals: usize,
    pub steady_tol: f64,

    pub sym_r_max: f64,
    pub sym_intervals: usize,
    pub sym_h0: f64,
    pub sym_t_end: f64,
    pub sym_decay_factor: f64,

    pub axi_r_max: f64,
    pub axi_intervals: usize,
    pub axi_h0: f64,
    pub axi_n_theta: usize,
    pub axi_t_end: f64,
    pub axi_legendre: usize,
    pub axi_decay_factor: f64,
    /// length of the pure ℓ = 0 run behind the symmetry check
    pub axi_symmetry_t: f64,

    pub amplitude: f64,
    pub max_amplitude: f64,
    pub support: (f64, f64),
    pub shape: Shape,
    pub target: Target,

    /// None: 0.9 of the stable step of the initial state
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    pub output_every: f64,
    pub reform_every: usize,
    pub evolve_steady_tol: f64,
    pub probe_radii: Vec<f64>,
    pub keep_snapshots: bool,

    pub ops_points: usize,
    pub energy_grid: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            params: FluidParams::default(),
            steady_r_max: 200.0,
            steady_intervals: 2048,
            steady_tol: 1e-10,
            sym_r_max: 300.0,
            sym_intervals: 1023,
            sym_h0: 0.1,
            sym_t_end: 200.0,
            sym_decay_factor: 10.0,
            axi_r_max: 40.0,
            axi_intervals: 128,
            axi_h0: 0.1,
            axi_n_theta: 32,
            axi_t_end: 200.0,
            axi_legendre: 1,
            axi_decay_factor: 5.0,
            axi_symmetry_t: 5.0,
            amplitude: 0.02,
            max_amplitude: 0.05,
            support: (1.5, 3.0),
            shape: Shape::Bump,
            target: Target::Density,
            dt: None,
            cfl_safety: 0.8,
            output_every: 1.0,
            reform_every: 10,
            evolve_steady_tol: 1e-9,
            probe_radii: vec![2.0, 4.0],
            keep_snapshots: false,
            ops_points: 20,
            energy_grid: 20,
        }
    }
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse { line, msg: format!("`{key}`: cannot parse `{v}`") })
}

impl Config {
    fn set(&mut self, line: usize, key: &str, v: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "gamma" => p.gamma = num(line, key, v)?,
            "k_pressure" => p.k_pressure = num(line, key, v)?,
            "mu" => p.mu = num(line, key, v)?,
            "lambda" => p.lambda = num(line, key, v)?,
            "rho_plus" => p.rho_plus = num(line, key, v)?,
            "u_b" => p.u_b = num(line, key, v)?,
            "dim_n" => p.dim_n = num(line, key, v)?,
            "steady_r_max" => self.steady_r_max = num(line, key, v)?,
            "steady_intervals" => self.steady_intervals = num(line, key, v)?,
            "steady_tol" => self.steady_tol = num(line, key, v)?,
            "sym_r_max" => self.sym_r_max = num(line, key, v)?,
            "sym_intervals" => self.sym_intervals = num(line, key, v)?,
            "sym_h0" => self.sym_h0 = num(line, key, v)?,
            "sym_t_end" => self.sym_t_end = num(line, key, v)?,
            "sym_decay_factor" => self.sym_decay_factor = num(line, key, v)?,
            "axi_r_max" => self.axi_r_max = num(line, key, v)?,
            "axi_intervals" => self.axi_intervals = num(line, key, v)?,
            "axi_h0" => self.axi_h0 = num(line, key, v)?,
            "axi_n_theta" => self.axi_n_theta = num(line, key, v)?,
            "axi_t_end" => self.axi_t_end = num(line, key, v)?,
            "axi_legendre" => self.axi_legendre = num(line, key, v)?,
            "axi_decay_factor" => self.axi_decay_factor = num(line, key, v)?,
            "axi_symmetry_t" => self.axi_symmetry_t = num(line, key, v)?,
            "amplitude" => self.amplitude = num(line, key, v)?,
            "max_amplitude" => self.max_amplitude = num(line, key, v)?,
            "support_lo" => self.support.0 = num(line, key, v)?,
            "support_hi" => self.support.1 = num(line, key, v)?,
            "shape" => {
                self.shape = match v {
                    "bump" => Shape::Bump,
                    "cosine" => Shape::Cosine,
                    _ => return Err(Error::Parse { line, msg: format!("shape must be bump or cosine, got `{v}`") }),
                }
            }
            "target" => {
                self.target = match v {
                    "density" => Target::Density,
                    "velocity" => Target::RadialVelocity,
                    _ => return Err(Error::Parse { line, msg: format!("target must be density or velocity, got `{v}`") }),
                }
            }
            "dt" => self.dt = if v == "auto" { None } else { Some(num(line, key, v)?) },
            "cfl_safety" => self.cfl_safety = num(line, key, v)?,
            "output_every" => self.output_every = num(line, key, v)?,
            "reform_every" => self.reform_every = num(line, key, v)?,
            "evolve_steady_tol" => self.evolve_steady_tol = num(line, key, v)?,
            "probe_radii" => {
                self.probe_radii = v.split(',').map(|s| num(line, key, s.trim())).collect::<Result<_>>()?;
            }
            "keep_snapshots" => self.keep_snapshots = num(line, key, v)?,
            "ops_points" => self.ops_points = num(line, key, v)?,
            "energy_grid" => self.energy_grid = num(line, key, v)?,
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Everything but the physical parameters, which `FluidParams`
    /// validation covers.
    pub fn validate(&self) -> Result<()> {
        self.params.validate().into_result()?;
        let bad = |m: String| Err(Error::ConstraintViolation(m));
        let positive = [
            ("steady_r_max", self.steady_r_max - 1.0),
            ("steady_tol", self.steady_tol),
            ("sym_r_max", self.sym_r_max - 1.0),
            ("sym_h0", self.sym_h0),
            ("sym_t_end", self.sym_t_end),
            ("sym_decay_factor", self.sym_decay_factor),
            ("axi_r_max", self.axi_r_max - 1.0),
            ("axi_h0", self.axi_h0),
            ("axi_t_end", self.axi_t_end),
            ("axi_decay_factor", self.axi_decay_factor),
            ("axi_symmetry_t", self.axi_symmetry_t),
            ("output_every", self.output_every),
            ("evolve_steady_tol", self.evolve_steady_tol),
            ("max_amplitude", self.max_amplitude),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{k} out of range"));
            }
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad(format!("0 < cfl_safety <= 1, got {}", self.cfl_safety));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.amplitude.abs() <= self.max_amplitude * self.params.rho_plus) {
            return bad(format!("|amplitude| <= max_amplitude * rho_plus ({} > {})", self.amplitude, self.max_amplitude));
        }
        let (a, b) = self.support;
        let r_min = self.sym_r_max.min(self.axi_r_max);
        if !(a > 1.0 && b > a && b < r_min) {
            return bad(format!("perturbation support ({a}, {b}) must lie strictly inside (1, {r_min})"));
        }
        if self.axi_legendre > L_MAX {
            return bad(format!("axi_legendre <= {L_MAX}, got {}", self.axi_legendre));
        }
        if self.probe_radii.is_empty() || self.probe_radii.iter().any(|r| !(*r >= 1.0 && *r <= r_min)) {
            return bad(format!("probe_radii must lie in [1, {r_min}]"));
        }
        if self.ops_points == 0 || self.energy_grid < 2 {
            return bad("ops_points >= 1 and energy_grid >= 2".into());
        }
        Ok(())
    }

    /// Canonical `key = value` listing (sorted keys, full precision).
    pub fn canonical(&self) -> String {
        let p = &self.params;
        let mut m: BTreeMap<&str, String> = BTreeMap::new();
        let f = |x: f64| format!("{x:?}");
        m.insert("gamma", f(p.gamma));
        m.insert("k_pressure", f(p.k_pressure));
        m.insert("mu", f(p.mu));
        m.insert("lambda", f(p.lambda));
        m.insert("rho_plus", f(p.rho_plus));
        m.insert("u_b", f(p.u_b));
        m.insert("dim_n", p.dim_n.to_string());
        m.insert("steady_r_max", f(self.steady_r_max));
        m.insert("steady_intervals", self.steady_intervals.to_string());
        m.insert("steady_tol", f(self.steady_tol));
        m.insert("sym_r_max", f(self.sym_r_max));
        m.insert("sym_intervals", self.sym_intervals.to_string());
        m.insert("sym_h0", f(self.sym_h0));
        m.insert("sym_t_end", f(self.sym_t_end));
        m.insert("sym_decay_factor", f(self.sym_decay_factor));
        m.insert("axi_r_max", f(self.axi_r_max));
        m.insert("axi_intervals", self.axi_intervals.to_string());
        m.insert("axi_h0", f(self.axi_h0));
        m.insert("axi_n_theta", self.axi_n_theta.to_string());
        m.insert("axi_t_end", f(self.axi_t_end));
        m.insert("axi_legendre", self.axi_legendre.to_string());
        m.insert("axi_decay_factor", f(self.axi_decay_factor));
        m.insert("axi_symmetry_t", f(self.axi_symmetry_t));
        m.insert("amplitude", f(self.amplitude));
        m.insert("max_amplitude", f(self.max_amplitude));
        m.insert("support_lo", f(self.support.0));
        m.insert("support_hi", f(self.support.1));
        m.insert("shape", if self.shape == Shape::Bump { "bump" } else { "cosine" }.into());
        m.insert("target", if self.target == Target::Density { "density" } else { "velocity" }.into());
        m.insert("dt", self.dt.map_or("auto".into(), f));
        m.insert("cfl_safety", f(self.cfl_safety));
        m.insert("output_every", f(self.output_every));
        m.insert("reform_every", self.reform_every.to_string());
        m.insert("evolve_steady_tol", f(self.evolve_steady_tol));
        m.insert("probe_radii", self.probe_radii.iter().map(|r| f(*r)).collect::<Vec<_>>().join(","));
        m.insert("keep_snapshots", self.keep_snapshots.to_string());
        m.insert("ops_points", self.ops_points.to_string());
        m.insert("energy_grid", self.energy_grid.to_string());
        m.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// SHA-256 of [`Config::canonical`], hex.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn perturbation(&self, legendre: usize) -> Perturbation {
        Perturbation { amplitude: self.amplitude, shape: self.shape, support: self.support, target: self.target, legendre }
    }

    pub fn run_settings(&self, t_end: f64, legendre: usize, decay_factor: f64) -> RunSettings {
        RunSettings {
            t_end,
            dt: self.dt,
            cfl_safety: self.cfl_safety,
            perturbation: self.perturbation(legendre),
            output_every: self.output_every,
            reform_every: self.reform_every,
            steady_tol: self.evolve_steady_tol,
            keep_snapshots: self.keep_snapshots,
            probe_radii: self.probe_radii.clone(),
            decay_factor,
        }
    }
}

/// Parse and validate configuration text.
pub fn parse_config_str(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(Error::Parse { line, msg: format!("expected `key = value`, got `{body}`") });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse { line, msg: "empty key or value".into() });
        }
        if let Some(first) = seen.insert(k.to_string(), line) {
            return Err(Error::Parse { line, msg: format!("`{k}` already set on line {first}") });
        }
        cfg.set(line, k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trips() {
        let c = Config { dt: Some(1e-3), shape: Shape::Cosine, probe_radii: vec![1.5, 2.25], ..Config::default() };
        let back = parse_config_str(&c.canonical()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_ne!(Config::default().hash(), c.hash());
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_config_str("# header\n\n  mu = 2.0  # viscosity\n").unwrap();
        assert_eq!(c.params.mu, 2.0);
    }
}
