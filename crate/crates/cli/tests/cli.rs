use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nevbound"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(config: &Path) -> Output {
    bin().arg("run").arg(config).output().unwrap()
}

const GRID: &str = "[grid]\nr_min = 1e2\nr_max = 1e5\nper_decade = 4\n";

#[test]
fn presets_listing() {
    let out = bin().arg("presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["b38", "b79", "b83", "ex-b36"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn example_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ex_b6.toml");
    std::fs::copy(configs().join("ex_b6.toml"), &cfg).unwrap();
    let out = run(&cfg);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("ex_b6.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == "margin_upper").unwrap();
    let mut n = 0;
    for line in lines {
        let margin: f64 = line.split(',').nth(k).unwrap().parse().unwrap();
        assert!(margin >= 0.0, "{line}");
        n += 1;
    }
    assert_eq!(n, 17);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ex_b6.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["case"]["index"], "1/4");
}

#[test]
fn expression_data_with_fitted_angle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("power_law.toml");
    std::fs::copy(configs().join("power_law.toml"), &cfg).unwrap();
    assert_eq!(run(&cfg).status.code(), Some(0));
    assert!(dir.path().join("power_law.bounds.csv").exists());
}

#[test]
fn malformed_family_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &format!("family = \"example_b7(3, 1)\"\nchecks = [\"measure\"]\n{GRID}"));
    let out = run(&cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("example_b7"));
}

#[test]
fn invalid_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bodies = [
        "family = \"example_b6(3, 1)\"\nchecks = [\"measure\"]\n[grid]\nr_min = 1e2\nr_max = 1e4\nper_decade = 2\n".to_string(),
        format!("family = \"example_b6(3, 1)\"\nchecks = [\"measure\"]\neps = 0\n{GRID}"),
        format!("family = \"example_b6(3, 1)\"\nchecks = [\"upper\"]\n{GRID}"),
        format!("family = \"example_b6(3, 1)\"\nchecks = [\"plot\"]\n{GRID}"),
        "family = \"example_b6(3, 1)\"\nchecks = [\"measure\"]\n[grid]\nr_min = 1e4\nr_max = 1e2\n".to_string(),
    ];
    for (i, b) in bodies.iter().enumerate() {
        let out = run(&write(dir.path(), &format!("c{i}.toml"), b));
        assert_eq!(out.status.code(), Some(2), "config {i}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn flat_tails_make_the_bound_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        "family = \"example_b6(3, 1)\"\nchecks = [\"upper\"]\n\n[data]\nd_l = \"power(-3)\"\nd_phi = \"const(1)\"\nc_l = \"const(1)\"\nc_phi = \"const(1)\"\n\n{GRID}"
    );
    let out = run(&write(dir.path(), "flat.toml", &body));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound trivial ≳ R"));
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        "family = \"example_b6(3, 0)\"\nchecks = [\"measure\", \"upper\"]\nseed = 7\n[data]\nspec = \"example_b6(3, 0)\"\n{GRID}"
    );
    let a = write(dir.path(), "a.toml", &body);
    let b = write(dir.path(), "b.toml", &body);
    assert!(run(&a).status.success());
    let out = bin().env("NEVBOUND_THREADS", "1").arg("run").arg(&b).output().unwrap();
    assert!(out.status.success());
    let x = std::fs::read(dir.path().join("a.bounds.csv")).unwrap();
    let y = std::fs::read(dir.path().join("b.bounds.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn measure_and_bound_print_csv() {
    let out = bin().args(["measure", "example_b6(3, 1)", "--rmin", "10", "--rmax", "1e4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("R,logM,N_trunc"));
    assert_eq!(text.lines().count(), 14);

    let out = bin()
        .args(["bound", "example_b6(3, 1)", "example_b6(3, 1)", "--rmin", "100", "--rmax", "1000"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("R,kR,hR"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn thread_variable_is_validated() {
    let out = bin().env("NEVBOUND_THREADS", "zero").arg("presets").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
