use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahowald"))
        .args(args)
        .env("MAHOWALD_CACHE_DIR", cache)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn resolve_sphere_shows_h0_tower() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["resolve", "sphere:0", "--smax", "8", "--tmax", "22"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let stem0: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("0\t"))
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(stem0, ["0", "1", "2", "3", "4", "5", "6", "7", "8"]);
}

#[test]
fn resolve_quaternionic_cells_and_cache_hit() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["resolve", "stunted:H:-4:-1", "--smax", "6", "--tmax", "12"];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stderr(&first).contains("cells in degrees -16, -12, -8, -4"), "{}", stderr(&first));
    assert!(!stderr(&first).contains("cache hit"));
    let second = run(dir.path(), &args);
    assert!(stderr(&second).contains("cache hit"));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn chart_formats() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["chart", "sphere:0", "--smax", "4", "--tmax", "10"];
    let svg = run(dir.path(), &base);
    assert_eq!(svg.status.code(), Some(0));
    assert!(stdout(&svg).starts_with("<?xml"));
    assert!(stdout(&svg).contains("class=\"h1\""));
    let json = run(dir.path(), &[&base[..], &["--format", "json"]].concat());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(!v["lines"].as_array().unwrap().is_empty());
    let out = dir.path().join("chart.tsv");
    let tsv = run(dir.path(), &[&base[..], &["--format", "tsv", "--out", out.to_str().unwrap()]].concat());
    assert_eq!(tsv.status.code(), Some(0));
    assert!(std::fs::read_to_string(out).unwrap().contains("stem\tfiltration\tcount\tlabels"));
}

#[test]
fn mahowald_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["mahowald", "C", "h1", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], 2);
    assert!(v["coset"][0]["names"].as_array().unwrap().contains(&"h2".into()));

    let o = run(dir.path(), &["mahowald", "H", "h2^2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], 3);
    assert!(v["coset"][0]["names"].as_array().unwrap().contains(&"h3^2".into()));
}

#[test]
fn unit_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["mahowald", "C", "h0^0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("degenerate"));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["mahowald", "C", "eta"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("known classes"));
    assert!(stderr(&o).contains("h2^3"));
    let o = run(dir.path(), &["mahowald", "C", "h0h1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["mahowald", "Q", "h1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["resolve", "disk:3", "--smax", "2", "--tmax", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["resolve", "sphere:0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["mahowald", "C", "h2", "--top", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("safe bound"));
}

#[test]
fn resource_overflow() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["resolve", "sphere:0", "--smax", "400", "--tmax", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(dir.path(), &["mahowald", "C", "h3^3", "--nmax", "400"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn small_nmax_is_indefinite() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["mahowald", "C", "h2^3", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn selftest_json_and_corrupt_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["selftest", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], true);

    let mut corrupted = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &text[..text.len() / 3]).unwrap();
        corrupted += 1;
    }
    assert!(corrupted > 0);
    let again = run(dir.path(), &["selftest", "--json"]);
    assert_eq!(again.status.code(), Some(0));
    assert!(stderr(&again).contains("ignoring cache file"));
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn config_file_and_env_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let from_config = dir.path().join("from_config");
    let from_env = dir.path().join("from_env");
    let cfg = dir.path().join("mahowald.toml");
    std::fs::write(
        &cfg,
        format!("cache_dir = {:?}\nthreads = 2\nformat = \"json\"\n", from_config.to_str().unwrap()),
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mahowald"))
        .args(["resolve", "sphere:0", "--smax", "2", "--tmax", "6", "--config", cfg.to_str().unwrap()])
        .env_remove("MAHOWALD_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_start().starts_with('{'));
    assert!(from_config.exists());

    let o = run(&from_env, &["resolve", "sphere:0", "--smax", "2", "--tmax", "7", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(from_env.exists());

    std::fs::write(&cfg, "threads = 0\n").unwrap();
    let o = run(dir.path(), &["selftest", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
