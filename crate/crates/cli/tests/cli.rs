use outflow_cli::{exit, parse_config, parse_config_str, Config};
use outflow_core::Error;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn outflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_outflow")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write_cfg(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// Small grids so evolution subcommands finish in seconds.
const SMALL: &str = "
sym_r_max = 30
sym_intervals = 127
sym_t_end = 3
sym_decay_factor = 1.5
axi_r_max = 20
axi_intervals = 63
axi_n_theta = 8
axi_t_end = 2
axi_decay_factor = 1.2
axi_symmetry_t = 0.5
evolve_steady_tol = 1e-7
output_every = 0.5
";

#[test]
fn minimal_config_takes_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.cfg");
    fs::write(&p, "# nothing but\nmu = 1.0\n").unwrap();
    assert_eq!(parse_config(&p).unwrap(), Config::default());
}

#[test]
fn inflow_boundary_speed_rejected() {
    let e = parse_config_str("u_b = 0.1\n").unwrap_err();
    assert!(matches!(&e, Error::ConstraintViolation(m) if m.contains("u_b < 0")), "{e}");
}

#[test]
fn unknown_key_is_named() {
    assert_eq!(parse_config_str("gamm = 1.4\n").unwrap_err(), Error::UnknownKey("gamm".into()));
}

#[test]
fn malformed_lines_report_line_numbers() {
    for (text, line) in [("mu = 1\nmu\n", 2), ("\n\ngamma = fast\n", 3), ("mu = 1\nmu = 2\n", 2)] {
        match parse_config_str(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn out_of_range_run_settings_rejected() {
    for text in ["cfl_safety = 1.5", "support_lo = 0.9", "amplitude = 0.2", "axi_legendre = 7", "dt = -1"] {
        assert!(matches!(parse_config_str(text), Err(Error::ConstraintViolation(_))), "{text}");
    }
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = outflow(&["evolve"]);
    assert_eq!(code(&o), exit::USAGE);
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_config_exits_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "gamm = 1.4\n");
    let o = outflow(&["verify-energy", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), exit::CONFIG);
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamm"));
}

#[test]
fn verify_ops_writes_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ops");
    let cfg = write_cfg(dir.path(), "ops_points = 4\n");
    let o = outflow(&["verify-ops", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "11"]);
    assert_eq!(code(&o), exit::PASS, "{}", String::from_utf8_lossy(&o.stdout));
    let table = fs::read_to_string(out.join("ops.csv")).unwrap();
    assert!(table.starts_with("check,detail,value,tol,fitted_c,status\n"));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 11);
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["files"].as_array().unwrap().len(), 2);
    assert!(!out.join(".manifest.json.tmp").exists());
}

#[test]
fn steady_outputs_and_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "steady_intervals = 1024\nsteady_tol = 1e-9\n");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = outflow(&["steady", "--config", &cfg, "--out", a.to_str().unwrap()]);
    let ob = outflow(&["steady", "--config", &cfg, "--out", b.to_str().unwrap()]);
    // the u'' decay-rate item fails as expected, so the run reports FAIL
    assert_eq!(code(&oa), exit::FAIL, "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(code(&ob), exit::FAIL);
    let stdout = String::from_utf8_lossy(&oa.stdout);
    assert!(stdout.contains("PASS criterion 1-rho"), "{stdout}");
    assert!(stdout.contains("PASS criterion 2"), "{stdout}");
    for f in ["profile.csv", "rates.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let profile = fs::read_to_string(a.join("profile.csv")).unwrap();
    assert_eq!(profile.lines().count(), 1 + 1025);
    let first: Vec<f64> = profile.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert!((first[3] + 0.05).abs() < 1e-12, "u(1) = u_b");
}

#[test]
fn evolve_sym_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), SMALL);
    let out = dir.path().join("sym");
    let o = outflow(&["evolve-sym", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("criterion 8-decay"), "{stdout}");
    assert!(stdout.contains("PASS criterion 7-sym"), "{stdout}");
    let report = fs::read_to_string(out.join("energy_report.csv")).unwrap();
    assert!(report.starts_with("t,total_relative_energy,"));
    assert_eq!(report.lines().count(), 1 + 7, "t = 0, 0.5, ..., 3");
    assert_eq!(fs::read_to_string(out.join("state_final.csv")).unwrap().lines().count(), 1 + 128);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn evolve_sym_unreachable_decay_did_not_finish() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{SMALL}\nsym_decay_factor = 1e9\n").replace("sym_decay_factor = 1.5\n", ""));
    let out = dir.path().join("sym");
    let o = outflow(&["evolve-sym", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), exit::DID_NOT_FINISH, "{}", String::from_utf8_lossy(&o.stderr));
    // outputs are still written and listed
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["exit_code"], exit::DID_NOT_FINISH);
    assert_eq!(m["files"].as_array().unwrap().len(), 3);
}

#[test]
fn evolution_needs_three_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "dim_n = 2\n");
    let o = outflow(&["evolve-sym", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(code(&o), exit::CONFIG);
}

#[test]
fn evolve_axi_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), SMALL);
    let out = dir.path().join("axi");
    let o = outflow(&["evolve-axi", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS criterion 9-reduction"), "{stdout}");
    assert!(stdout.contains("PASS criterion 9-symmetry"), "{stdout}");
    let modes = fs::read_to_string(out.join("modes.csv")).unwrap();
    assert!(modes.starts_with("t,a0,a1,a2,a3,a4\n"));
    assert_eq!(fs::read_to_string(out.join("state_final.csv")).unwrap().lines().count(), 1 + 64 * 8);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["threads"], 2);
}

#[test]
fn report_consolidates_subdirectories() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let e = outflow(&["verify-energy", "--out", root.join("energy").to_str().unwrap()]);
    assert_eq!(code(&e), exit::PASS);
    let o = outflow(&["report", "--out", root.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("criterion 10-mms-sym"), "{stdout}");
    let summary = fs::read_to_string(root.join("summary.csv")).unwrap();
    assert!(summary.contains("energy,6-closed-form,PASS"), "{summary}");
    assert!(summary.contains("report,10-time-sym"), "{summary}");
}
