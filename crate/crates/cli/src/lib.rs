//! Command-line front end: configuration files, subcommand dispatch, CSV
//! output and the run manifest.

pub mod commands;
pub mod config;
pub mod output;

pub use config::{parse_config, parse_config_str, Config};
pub use output::RunManifest;

use output::{now, CriterionEntry, RunManifest as Manifest};
use outflow_core::{Error, Result};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Process exit statuses.
pub mod exit {
    pub const PASS: i32 = 0;
    /// ran to completion, some criterion failed
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONFIG: i32 = 3;
    pub const IO: i32 = 4;
    pub const NONCONVERGENCE: i32 = 5;
    /// time step or positivity failure during evolution
    pub const UNSTABLE_STEP: i32 = 6;
    pub const DID_NOT_FINISH: i32 = 7;
    pub const OTHER: i32 = 8;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UnknownKey(_) | Error::ConstraintViolation(_) => exit::CONFIG,
        Error::Io(_) => exit::IO,
        Error::NonConvergence { .. } | Error::TailNotConverged(_) => exit::NONCONVERGENCE,
        Error::CflViolation { .. } | Error::PositivityLoss { .. } => exit::UNSTABLE_STEP,
        Error::DidNotFinish(_) => exit::DID_NOT_FINISH,
        _ => exit::OTHER,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Steady,
    EvolveSym,
    EvolveAxi,
    VerifyOps,
    VerifyEnergy,
    Report,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::Steady,
        Subcommand::EvolveSym,
        Subcommand::EvolveAxi,
        Subcommand::VerifyOps,
        Subcommand::VerifyEnergy,
        Subcommand::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Steady => "steady",
            Subcommand::EvolveSym => "evolve-sym",
            Subcommand::EvolveAxi => "evolve-axi",
            Subcommand::VerifyOps => "verify-ops",
            Subcommand::VerifyEnergy => "verify-energy",
            Subcommand::Report => "report",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown subcommand `{s}`"))
    }
}

/// Runs one subcommand into `out` and writes the manifest. Returns the exit
/// status; progress and criterion lines go to stdout, errors to stderr.
pub fn dispatch(cmd: Subcommand, cfg: &Config, out: &Path, seed: Option<u64>, threads: usize) -> i32 {
    let started = now();
    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("error: {}: {e}", out.display());
        return exit::IO;
    }
    let seed = seed.unwrap_or(commands::DEFAULT_SEED);
    let res = match cmd {
        Subcommand::Steady => commands::steady(cfg, out),
        Subcommand::EvolveSym => commands::evolve_sym(cfg, out),
        Subcommand::EvolveAxi => commands::evolve_axi(cfg, out),
        Subcommand::VerifyOps => commands::verify_ops_cmd(cfg, out, seed),
        Subcommand::VerifyEnergy => commands::verify_energy_cmd(cfg, out),
        Subcommand::Report => commands::report(cfg, out),
    };

    let mut manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        subcommand: cmd.name().into(),
        config_sha256: cfg.hash(),
        config: cfg.canonical(),
        seed,
        threads,
        started,
        finished: 0.0,
        exit_code: 0,
        error: None,
        files: Vec::new(),
        criteria: Vec::new(),
    };
    let code = match res {
        Ok(o) => {
            for c in &o.criteria {
                println!("{}", c.line());
            }
            manifest.criteria = o.criteria.iter().map(|c| CriterionEntry { id: c.id.clone(), pass: c.pass }).collect();
            let files: Result<Vec<_>> = o.files.iter().map(|f| Manifest::file_entry(out, f)).collect();
            let failure = match files {
                Ok(f) => {
                    manifest.files = f;
                    o.failure
                }
                Err(e) => Some(e),
            };
            match failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    manifest.error = Some(e.to_string());
                    exit_code(&e)
                }
                None => {
                    if o.criteria.iter().all(|c| c.pass) {
                        exit::PASS
                    } else {
                        exit::FAIL
                    }
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            manifest.error = Some(e.to_string());
            exit_code(&e)
        }
    };
    manifest.exit_code = code;
    manifest.finished = now();
    match manifest.write(out) {
        Ok(_) => code,
        Err(e) => {
            eprintln!("error: manifest: {e}");
            exit::IO
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subcommand_names_round_trip() {
        for c in Subcommand::ALL {
            assert_eq!(c.name().parse::<Subcommand>().unwrap(), c);
        }
        assert!("evolve".parse::<Subcommand>().is_err());
    }

    #[test]
    fn exit_codes_are_distinct() {
        let errs = [
            Error::UnknownKey("x".into()),
            Error::Io("x".into()),
            Error::DidNotFinish("x".into()),
            Error::Domain("x".into()),
        ];
        let mut codes: Vec<i32> = errs.iter().map(exit_code).collect();
        codes.extend([exit::PASS, exit::FAIL, exit::USAGE]);
        let n = codes.len();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), n);
    }
}
