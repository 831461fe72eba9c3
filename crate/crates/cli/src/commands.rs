//! One function per subcommand. Each writes its tables into the output
//! directory and returns the criterion items it evaluated.

use crate::config::Config;
use crate::output::{num, read_criteria, write_criteria, write_table};
use outflow_core::criteria::*;
use outflow_core::discrete::Layout;
use outflow_core::energy::verify_energy;
use outflow_core::evolution::{run_stability, RunLog};
use outflow_core::sph::suite::{verify_ops, OpsSuite};
use outflow_core::{verify_decay, Error, Result};
use std::path::Path;
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 7;

/// What a subcommand produced. `failure` carries a run that completed but
/// should still exit with an error status (did not finish).
pub struct Outcome {
    pub criteria: Vec<Criterion>,
    pub files: Vec<String>,
    pub failure: Option<Error>,
}

impl Outcome {
    fn new(criteria: Vec<Criterion>, files: &[&str]) -> Self {
        Self { criteria, files: files.iter().map(|s| s.to_string()).collect(), failure: None }
    }
}

pub fn steady(cfg: &Config, out: &Path) -> Result<Outcome> {
    let t = Instant::now();
    let prof = acceptance_profile(&cfg.params, cfg.steady_r_max, cfg.steady_intervals, cfg.steady_tol)?;
    let items = steady_criteria(&prof, t.elapsed())?;
    let n = prof.grid.len();
    write_table(
        &out.join("profile.csv"),
        &["r", "rho", "rho_minus_rho_plus", "u", "d_rho", "d2_rho", "d_u", "d2_u"],
        (0..n).map(|i| {
            [prof.grid.r(i), prof.rho_t[i], prof.rho_dev[i], prof.u_t[i], prof.d_rho[i], prof.d2_rho[i], prof.d_u[i], prof.d2_u[i]]
                .into_iter()
                .map(num)
                .collect()
        }),
    )?;
    let rep = verify_decay(&prof)?;
    write_table(
        &out.join("rates.csv"),
        &["quantity", "slope", "target", "prefactor_ratio", "prefactor_max", "r_lo", "r_hi", "points"],
        rep.fits.iter().map(|f| {
            vec![
                f.quantity.to_string(),
                num(f.slope),
                num(f.target),
                num(f.prefactor_ratio),
                num(f.prefactor_max),
                num(rep.lo),
                num(rep.hi),
                rep.points.to_string(),
            ]
        }),
    )?;
    write_criteria(&out.join("criteria.csv"), &items)?;
    Ok(Outcome::new(items, &["profile.csv", "rates.csv", "criteria.csv"]))
}

fn write_suite(path: &Path, suite: &OpsSuite) -> Result<()> {
    write_table(
        path,
        &["check", "detail", "value", "tol", "fitted_c", "status"],
        suite.rows.iter().map(|r| {
            vec![
                r.check.clone(),
                r.detail.clone(),
                num(r.value),
                num(r.tol),
                r.fitted_c.map_or(String::new(), num),
                if r.pass() { "PASS" } else { "FAIL" }.into(),
            ]
        }),
    )
}

pub fn verify_ops_cmd(cfg: &Config, out: &Path, seed: u64) -> Result<Outcome> {
    let t = Instant::now();
    let suite = verify_ops(seed, cfg.ops_points)?;
    let el = t.elapsed();
    let mut items = ops_criteria(&suite, el);
    items.push(hardy_budget(el));
    write_suite(&out.join("ops.csv"), &suite)?;
    write_criteria(&out.join("criteria.csv"), &items)?;
    Ok(Outcome::new(items, &["ops.csv", "criteria.csv"]))
}

pub fn verify_energy_cmd(cfg: &Config, out: &Path) -> Result<Outcome> {
    let t = Instant::now();
    let suite = verify_energy(cfg.energy_grid)?;
    let items = energy_criteria(&suite, t.elapsed());
    write_suite(&out.join("energy.csv"), &suite)?;
    write_criteria(&out.join("criteria.csv"), &items)?;
    Ok(Outcome::new(items, &["energy.csv", "criteria.csv"]))
}

fn require_3d(cfg: &Config) -> Result<()> {
    if cfg.params.dim_n != 3 {
        return Err(Error::ConstraintViolation(format!("evolution needs dim_n = 3 (dim_n = {})", cfg.params.dim_n)));
    }
    Ok(())
}

fn write_run(out: &Path, log: &RunLog) -> Result<()> {
    let piece_names: Vec<String> =
        log.reports.first().map_or(Vec::new(), |r| r.norm_pieces.iter().map(|p| p.name.clone()).collect());
    let mut header: Vec<&str> = vec![
        "t",
        "total_relative_energy",
        "kinetic",
        "potential",
        "viscous_dissipation",
        "boundary_h",
        "weighted_phi",
        "weighted_radial_psi",
        "sup_perturbation",
        "monitor",
    ];
    header.extend(piece_names.iter().map(|s| s.as_str()));
    write_table(
        &out.join("energy_report.csv"),
        &header,
        log.reports.iter().enumerate().map(|(k, r)| {
            let mut row: Vec<String> = [
                r.t,
                r.total_relative_energy,
                r.kinetic,
                r.potential,
                r.viscous_dissipation,
                r.boundary_h,
                r.weighted_phi,
                r.weighted_radial_psi,
                r.sup_perturbation,
                log.monitor.values.get(k).copied().unwrap_or(f64::NAN),
            ]
            .into_iter()
            .map(num)
            .collect();
            row.extend(r.norm_pieces.iter().map(|p| num(p.value)));
            row
        }),
    )?;

    let layout = &log.layout;
    let nt = layout.n_theta();
    let s = &log.final_state;
    let theta = |k: usize| match layout {
        Layout::Sym(_) => 0.0,
        Layout::Axi(_, a) => a.center(k % nt),
    };
    write_table(
        &out.join("state_final.csv"),
        &["r", "theta", "rho", "u_r", "u_theta"],
        (0..s.len()).map(|k| [layout.geo(k).r, theta(k), s.rho[k], s.ur[k], s.ut[k]].into_iter().map(num).collect()),
    )
}

/// Runs that stop short of the requested decay are reported as not finished.
fn outcome_of(log: &RunLog, items: Vec<Criterion>, files: &[&str]) -> Outcome {
    let mut o = Outcome::new(items, files);
    o.failure = log.require_decay().err();
    o
}

pub fn evolve_sym(cfg: &Config, out: &Path) -> Result<Outcome> {
    require_3d(cfg)?;
    let t = Instant::now();
    let layout = sym_layout(cfg.sym_r_max, cfg.sym_intervals, cfg.sym_h0)?;
    let log = run_stability(layout, cfg.params, &cfg.run_settings(cfg.sym_t_end, 0, cfg.sym_decay_factor))?;
    let items = sym_run_criteria(&log, t.elapsed());
    write_run(out, &log)?;
    write_criteria(&out.join("criteria.csv"), &items)?;
    Ok(outcome_of(&log, items, &["energy_report.csv", "state_final.csv", "criteria.csv"]))
}

pub fn evolve_axi(cfg: &Config, out: &Path) -> Result<Outcome> {
    require_3d(cfg)?;
    let layout = axi_layout(cfg.axi_r_max, cfg.axi_intervals, cfg.axi_h0, cfg.axi_n_theta)?;
    let settings = cfg.run_settings(cfg.axi_t_end, cfg.axi_legendre, cfg.axi_decay_factor);
    let (main, side) = rayon::join(
        || {
            let t = Instant::now();
            run_stability(layout.clone(), cfg.params, &settings).map(|log| (log, t.elapsed()))
        },
        || axi_side_checks(&layout, &cfg.params, cfg.axi_symmetry_t, cfg.evolve_steady_tol),
    );
    let (log, elapsed) = main?;
    let items = axi_run_criteria(&log, elapsed, side?);
    write_run(out, &log)?;
    let n_modes = log.modes.first().map_or(0, |m| m.1.len());
    let mut header = vec!["t".to_string()];
    header.extend((0..n_modes).map(|l| format!("a{l}")));
    write_table(
        &out.join("modes.csv"),
        &header.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        log.modes.iter().map(|(t, a)| std::iter::once(*t).chain(a.iter().copied()).map(num).collect()),
    )?;
    write_criteria(&out.join("criteria.csv"), &items)?;
    Ok(outcome_of(&log, items, &["energy_report.csv", "modes.csv", "state_final.csv", "criteria.csv"]))
}

/// Criterion 10, then every `criteria.csv` found one level below `out`
/// gathered into `summary.csv` together with it.
pub fn report(cfg: &Config, out: &Path) -> Result<Outcome> {
    let items = convergence_criteria(&cfg.params)?;
    write_criteria(&out.join("criteria.csv"), &items)?;
    let mut subdirs: Vec<_> = std::fs::read_dir(out)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.join("criteria.csv").is_file())
        .collect();
    subdirs.sort();
    let mut rows = Vec::new();
    for dir in &subdirs {
        let src = dir.file_name().map_or(String::new(), |s| s.to_string_lossy().into_owned());
        rows.extend(read_criteria(&dir.join("criteria.csv"))?.into_iter().map(|c| (src.clone(), c)));
    }
    rows.extend(items.iter().cloned().map(|c| ("report".to_string(), c)));
    write_table(
        &out.join("summary.csv"),
        &["source", "id", "status", "detail"],
        rows.iter()
            .map(|(s, c)| vec![s.clone(), c.id.clone(), if c.pass { "PASS" } else { "FAIL" }.into(), c.detail.clone()]),
    )?;
    // the report itself passes on its own items; the summary lists the rest
    Ok(Outcome::new(items, &["criteria.csv", "summary.csv"]))
}
