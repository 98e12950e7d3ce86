use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn zenolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zenolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_panels_write_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    for (panel, rows) in [("left", 60 * 21 * 3), ("right", 60 * 20 * 3)] {
        let out = dir.path().join(format!("{panel}.csv"));
        let o = zenolab(&["sweep", "--panel", panel, "--out", path_str(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("variant,M,lambda,zeta,J0tau,Qbar,B"));
        assert_eq!(lines.count(), rows);
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{panel}.manifest.json"))).unwrap())
                .unwrap();
        assert_eq!(manifest["command"], "sweep");
        assert_eq!(manifest["parameters"]["panel"], panel);
    }
}

#[test]
fn sweep_usage_errors_exit_2() {
    let empty = zenolab(&["sweep", "--m", "5:1:1", "--lambda", "0.1", "--zeta", "0.5"]);
    assert_eq!(empty.status.code(), Some(2));
    let conflict = zenolab(&["sweep", "--panel", "right", "--zeta", "0.5"]);
    assert_eq!(conflict.status.code(), Some(2));
    let missing = zenolab(&["sweep", "--m", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad = zenolab(&["sweep", "--m", "1", "--lambda", "x", "--zeta", "0.5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn custom_sweep_to_stdout() {
    let o = zenolab(&["sweep", "--m", "1,2", "--lambda", "0.1", "--zeta", "0:0.5:0.5", "--qbar", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 3);
    // ζ = 0 rows: every variant equals the strong bound.
    let zero: Vec<&str> = text.lines().filter(|l| l.starts_with("group,1,0.1,0.0,")).collect();
    let strong: Vec<&str> = text.lines().filter(|l| l.starts_with("strong,1,0.1,0.0,")).collect();
    assert_eq!(zero[0].rsplit(',').next(), strong[0].rsplit(',').next());
}

#[test]
fn simulate_is_deterministic_and_respects_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = zenolab(&[
            "simulate", "--seed", "7", "--m", "1,4", "--epsilon", "1,strong", "--variant", "group,generators,none",
            "--out", path_str(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("variant,M,epsilon,zeta,deviation,bound,bound_ok"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 2 * 2);
    for r in &rows {
        match r[0] {
            "none" => assert_eq!((r[5], r[6]), ("", "")),
            _ => assert_eq!(r[6], "true"),
        }
    }
    // Without measurements the deviation does not depend on M or ε.
    let none: Vec<f64> = rows.iter().filter(|r| r[0] == "none").map(|r| r[4].parse().unwrap()).collect();
    assert!(none.iter().all(|d| (d - none[0]).abs() < 1e-12));
    assert!(none[0] > 0.0);
}

#[test]
fn simulate_reads_config_and_replays_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("spec.json");
    fs::write(
        &config,
        r#"{"n":4,"bath_dim":2,"seed":3,"j0":1,"j1":0.1,"tau":1,"m_list":[2],
            "epsilon_list":[3],"variant_list":["strong"],"logical_state":{"logical":"10"}}"#,
    )
    .unwrap();
    let out = dir.path().join("run.csv");
    let o = zenolab(&["simulate", "--config", path_str(&config), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    let replay_spec = dir.path().join("replay.json");
    fs::write(&replay_spec, manifest["parameters"].to_string()).unwrap();
    let replay = dir.path().join("replay.csv");
    let o = zenolab(&["simulate", "--config", path_str(&replay_spec), "--out", path_str(&replay)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&replay).unwrap());
}

#[test]
fn simulate_rejects_bad_input() {
    let bad_variant = zenolab(&["simulate", "--variant", "sometimes", "--m", "1"]);
    assert_eq!(bad_variant.status.code(), Some(2));
    let zero_m = zenolab(&["simulate", "--m", "0"]);
    assert_eq!(zero_m.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, r#"{"n": 4}"#).unwrap();
    let o = zenolab(&["simulate", "--config", path_str(&config)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_suite_and_fault_injection() {
    let o = zenolab(&["verify", "--only", "halflemma"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("PASS halflemma"));

    let clean = zenolab(&["verify", "--only", "sumrule"]);
    assert_eq!(clean.status.code(), Some(0));
    let broken = zenolab(&["verify", "--only", "sumrule", "--inject-fault", "kraus-sign"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(String::from_utf8(broken.stdout).unwrap().starts_with("FAIL sumrule"));

    let unknown = zenolab(&["verify", "--only", "everything"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn twolocal_table() {
    let o = zenolab(&["twolocal", "--seeds", "5", "--epsilon", "0.5,strong"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v_hat,seed,epsilon,residual,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}
