use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hybridom(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hybridom"));
    cmd.args(args).env_remove("HYBRIDOM_OUT_DIR");
    if let Some(dir) = out_env {
        cmd.env("HYBRIDOM_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &str = "\
name = small
g0_hz = 1.2e6
g_ac_hz = 0.0
kappa_hz = 1e6
escape_efficiency = 0.5
e_l_hz = 2e6
axis = delta
axis_min_hz = 5e6
axis_max_hz = 15e6
axis_count = 21
outputs = T_sq, phi, tau_g
";

#[test]
fn lists_every_preset() {
    let o = hybridom(&["list-presets"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["fig2a", "fig4a", "fig5", "fig7"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn runs_config_into_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.conf");
    fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("results");
    let o = hybridom(
        &[
            "run",
            cfg.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
            "--workers",
            "2",
            "--tolerance-profile",
            "strict",
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("small.csv")).unwrap();
    assert!(csv.starts_with("delta_hz,t_sq,phi_rad,tau_g_s,error\n"));
    assert_eq!(csv.lines().count(), 22);
    let meta = fs::read_to_string(out.join("small.meta")).unwrap();
    assert!(meta.contains("tolerance_profile = strict"));
    assert!(out.join("small.plot").exists());
}

#[test]
fn env_var_sets_default_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.conf");
    fs::write(&cfg, SMALL).unwrap();
    let o = hybridom(
        &["run", cfg.to_str().unwrap(), "--variant", "paper-literal"],
        Some(dir.path()),
    );
    assert!(o.status.success());
    let meta = fs::read_to_string(dir.path().join("small.meta")).unwrap();
    assert!(meta.contains("variant = paper-literal"));
}

#[test]
fn failed_points_give_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(
        &cfg,
        "name = bad\naxis = pump_power\naxis_min_w = -1e-6\naxis_max_w = 1e-6\naxis_count = 3\n",
    )
    .unwrap();
    let o = hybridom(&["run", cfg.to_str().unwrap()], Some(dir.path()));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1 failed"));
    assert!(dir.path().join("bad.csv").exists());
}

#[test]
fn validate_reports_bad_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.conf");
    fs::write(&good, SMALL).unwrap();
    assert!(hybridom(&["validate", good.to_str().unwrap()], None)
        .status
        .success());

    let bad = dir.path().join("bad.conf");
    fs::write(&bad, SMALL.replace("kappa_hz", "kappa_w")).unwrap();
    let o = hybridom(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));
}

#[test]
fn unknown_target_is_an_error() {
    let o = hybridom(&["run", "no-such-preset-or-file"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_check_passes_on_a_preset() {
    let o = hybridom(&["oracle-check", "val-red-1.2", "--points", "2"], None);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
    assert_eq!(
        hybridom(&["oracle-check", "val-nope"], None).status.code(),
        Some(2)
    );
}

#[test]
fn meta_scenario_block_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.conf");
    fs::write(&cfg, SMALL).unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    assert!(hybridom(
        &[
            "run",
            cfg.to_str().unwrap(),
            "--out-dir",
            first.to_str().unwrap()
        ],
        None
    )
    .status
    .success());
    let meta = fs::read_to_string(first.join("small.meta")).unwrap();
    let replay = dir.path().join("replay.conf");
    fs::write(&replay, &meta[meta.find("# scenario").unwrap()..]).unwrap();
    assert!(hybridom(
        &[
            "run",
            replay.to_str().unwrap(),
            "--out-dir",
            second.to_str().unwrap()
        ],
        None
    )
    .status
    .success());
    assert_eq!(
        fs::read(first.join("small.csv")).unwrap(),
        fs::read(second.join("small.csv")).unwrap()
    );
}
