use std::process::Command;

fn conflap(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_conflap"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn kappa_example_reports_exact_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = conflap(&["kappa", "--n", "8", "--ahat", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("kappa.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["exact"], 1);
    assert_eq!(v["lower"], 1);
    let pos: Vec<usize> = ["n", "alpha", "lower", "upper", "exact", "witnesses", "notes"]
        .iter()
        .map(|k| text.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"exact\": 1"));
    assert!(dir.path().join("kappa.csv").exists());
    assert!(dir.path().join("kappa.summary.json").exists());
}

#[test]
fn kato_three_reports_two_thirds() {
    let dir = tempfile::tempdir().unwrap();
    let out = conflap(&["kato", "--n", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("kato.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let comp: f64 = row[9].parse().unwrap();
    assert!((comp - 2.0 / 3.0).abs() < 1e-15);
    let summary = std::fs::read_to_string(dir.path().join("kato.summary.json")).unwrap();
    assert!(summary.contains("\"pass\": true"));
    assert!(summary.contains("refined Kato projection"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(conflap(&["nonsense"]).status.code(), Some(2));
    assert_eq!(conflap(&["kappa"]).status.code(), Some(2));
    assert_eq!(conflap(&["kappa", "--n", "8", "--ahat", "3", "--spin", "false"]).status.code(), Some(2));
    assert_eq!(conflap(&["kato", "--radii", "0.1"]).status.code(), Some(2));
    let out = conflap(&["neck-sweep", "--radii", "0.1,0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit"], 2);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"experiment": "kappa", "params": {"n": 12, "ahat": 8}}"#).unwrap();
    let out_dir = dir.path().join("res");
    let out = conflap(&[
        "kappa",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "8",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("kappa.json")).unwrap()).unwrap();
    assert_eq!(v["n"], 8);
    assert_eq!(v["alpha"], 8);

    std::fs::write(&cfg, r#"{"params": {"n": 8, "colour": 1}}"#).unwrap();
    assert_eq!(conflap(&["kappa", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"experiment": "kato"}"#).unwrap();
    assert_eq!(
        conflap(&["kappa", "--n", "8", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn repeated_runs_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = Vec::new();
    for run in ["a", "b"] {
        let d = dir.path().join(run);
        let out = conflap(&["cheeger", "--radii", "0.2,0.1", "--samples", "2048", "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        csv.push(std::fs::read(d.join("cheeger.csv")).unwrap());
    }
    assert_eq!(csv[0], csv[1]);
    let text = String::from_utf8(csv.pop().unwrap()).unwrap();
    assert!(text.starts_with("r,h_sweep,cut_t,mu1,h_sq_over_4\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn failed_check_exits_one() {
    // a grid this coarse cannot meet the 1.5% torus tolerance on the 7th eigenvalue
    let dir = tempfile::tempdir().unwrap();
    let out = conflap(&["spectrum", "--grid", "8", "--k", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let rec: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["failed"][0]["name"], "max_rel_gap");
}
