use std::process::{Command, Output};

use d4nlse_cli::table::{parse_json, Cell};

fn d4nlse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d4nlse"))
        .args(args)
        .env_remove("D4NLSE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["ground", "--gamma-im", "3", "--L", "29", "--seed", "7"];
    let (a, b) = (d4nlse(&args), d4nlse(&args));
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_d4nlse"))
        .args(["zeromode", "--gamma-re", "-1", "--L", "5"])
        .env("D4NLSE_SEED", "11")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("# config.seed = 11"));
    let bad = Command::new(env!("CARGO_BIN_EXE_d4nlse"))
        .args(["zeromode", "--L", "5"])
        .env("D4NLSE_SEED", "eleven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn zero_mode_singleton_row() {
    let out = d4nlse(&["zeromode", "--gamma-re", "-1", "--L", "21"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "gamma_re,gamma_im,L,localization_ratio,residual,seed_amplitude,mirrored");
    let f: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(f[3].parse::<f64>().unwrap(), 0.0);
    assert_eq!(f[4].parse::<f64>().unwrap(), 0.0);
    assert_eq!(f[5].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(d4nlse(&["ground", "--L", "abc"]).status.code(), Some(2));
    assert_eq!(d4nlse(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(d4nlse(&["ground", "--L", "2"]).status.code(), Some(2));
    assert_eq!(d4nlse(&["zeromode-scan", "--grid-re", "1:2"]).status.code(), Some(2));
    let even = d4nlse(&["zeromode", "--L", "20"]);
    assert_eq!(even.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&even.stderr).starts_with("error[construction-impossible]"));
}

#[test]
fn json_output_round_trips() {
    let out = d4nlse(&["stability", "--gamma-im", "4.4", "--L", "8", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let (meta, table) = parse_json(&stdout(&out)).unwrap();
    assert_eq!(meta["command"], "stability");
    assert_eq!(meta["config"]["L"], 8);
    assert_eq!(table.rows.len(), 8);
    let p_pi = table.rows.iter().find(|r| matches!(r[1], Cell::Float(p) if (p - std::f64::consts::PI).abs() < 1e-12)).unwrap();
    match p_pi[4] {
        Cell::Float(g) => assert!(g > 0.0),
        ref other => panic!("unexpected growth cell {other:?}"),
    }
}

#[test]
fn even_lattice_scan_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = d4nlse(&[
        "zeromode-scan", "--L", "20", "--grid-re", "0:1:3", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!path.exists());
}

#[test]
fn json_file_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = d4nlse(&[
        "zeromode-scan", "--L", "9", "--grid-re", "-1:1:3", "--grid-im", "0.5:0.5:1", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let (meta, table) = parse_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(meta["config"]["grid_re"], "-1:1:3");
    assert_eq!(table.rows.len(), 3);
    assert_eq!(table.rows[2][0], Cell::Float(1.0));
    assert_eq!(table.rows[2][1], Cell::Float(0.5));
}

#[test]
fn full_plane_scan_has_every_point() {
    let out = d4nlse(&["zeromode-scan", "--L", "21", "--grid-re", "-2:2:41", "--grid-im", "-2:2:41"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(data_lines(&text).len(), 1 + 41 * 41);
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "gamma_re = -1.0\nL = 9\nformat = \"json\"\n").unwrap();
    let out = d4nlse(&["zeromode", "--config", cfg.to_str().unwrap(), "--L", "21"]);
    assert_eq!(out.status.code(), Some(0));
    let (meta, table) = parse_json(&stdout(&out)).unwrap();
    assert_eq!(meta["config"]["L"], 21);
    assert_eq!(meta["config"]["gamma_re"], -1.0);
    assert_eq!(table.rows[0][2], Cell::Int(21));
}

#[test]
fn evolution_conserves_norm() {
    let out = d4nlse(&["evolve", "--gamma-im", "1", "--L", "12", "--init", "random", "--seed", "3", "--steps", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let drift: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# max_norm_drift = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(drift < 1e-8, "norm drift {drift}");
}
