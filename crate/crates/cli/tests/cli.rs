use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semigroup-lab"));
    cmd.args(args).env_remove("SEMIGROUP_LAB_SEED");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn reference_sweep_stays_under_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("main.csv");
    let o = run(lab(&[
        "sweep-main", "--dim", "2", "--reference", "--t", "0.5,1,2", "--z", "-10,-50,-250", "--out",
    ])
    .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 9);
    for row in &rows {
        assert_eq!(row[0], "main");
        assert_eq!(row[3], "reference");
        let ratio: f64 = row[10].parse().unwrap();
        assert!(ratio <= 1.0);
    }
}

#[test]
fn counterexample_reports_exponential_growth() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("counter.csv");
    let o = run(lab(&["counterexample", "--out"]).arg(&out));
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&out);
    let error_at = |t: f64, re_z: f64| -> f64 {
        let row = rows
            .iter()
            .find(|r| r[4].parse::<f64>().unwrap() == t && r[5].parse::<f64>().unwrap() == re_z)
            .unwrap();
        row[8].parse().unwrap()
    };
    for s in [1.0f64, 5.0, 10.0] {
        let e = error_at(-1.0, -s);
        assert!((e - s.exp()).abs() <= 1e-6 * s.exp());
    }
    assert!((error_at(1.0, -10.0) - (-10f64).exp()).abs() <= 1e-12);
    assert!(String::from_utf8_lossy(&o.stdout).contains("negative-time-error"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["sweep-main", "--z", "-10+"][..],
        &["sweep-main", "--dim", "0"][..],
        &["sweep-zeno", "--k", "0"][..],
        &["sweep-main", "--projection", "diagonal"][..],
        &["no-such-command"][..],
    ] {
        let o = run(&mut lab(args));
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"sweep": {"seed": 1, "sed": 2}}"#).unwrap();
    let o = run(lab(&["sweep-main", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_for_another_subcommand_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"subcommand": "sweep-zeno"}"#).unwrap();
    let o = run(lab(&["sweep-main", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let from_file = dir.path().join("file.jsonl");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"sweep": {{"seed": 3, "dim": 4, "t_grid": [1.0], "z_list": [-100, "-200+5i", [-300, 0]]}},
                "format": "json-lines", "output_path": {:?}}}"#,
            from_file
        ),
    )
    .unwrap();
    let o = run(lab(&["sweep-main", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&from_file)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|v| v["seed"] == 3 && v["dim"] == 4));
    assert_eq!((lines[1]["re_z"].as_f64(), lines[1]["im_z"].as_f64()), (Some(-200.0), Some(5.0)));

    let overridden = dir.path().join("flags.jsonl");
    let o = run(lab(&["sweep-main", "--seed", "9", "--t", "0.5", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&overridden));
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&overridden).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["seed"], 9);
    assert_eq!(first["dim"], 4);
    assert_eq!(first["t"], 0.5);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env.csv");
    let o = run(lab(&["sweep-main", "--dim", "3", "--t", "1", "--z", "-100", "--out"])
        .arg(&out)
        .env("SEMIGROUP_LAB_SEED", "42"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&out)[0][1], "42");

    let o = run(lab(&["sweep-main", "--seed", "5", "--dim", "3", "--t", "1", "--z", "-100", "--out"])
        .arg(&out)
        .env("SEMIGROUP_LAB_SEED", "42"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&out)[0][1], "5");
}

#[test]
fn zeno_sweep_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zeno.jsonl");
    let o = run(lab(&["sweep-zeno", "--reference", "--t", "1,2", "--k", "4,16", "--format", "json-lines", "--out"])
        .arg(&out));
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let records: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let products: Vec<&serde_json::Value> = records.iter().filter(|v| v["experiment"] == "zeno").collect();
    assert_eq!(products.len(), 4);
    for v in products {
        let (t, k, e) = (v["t"].as_f64().unwrap(), v["k"].as_f64().unwrap(), v["error"].as_f64().unwrap());
        assert!((e * k / t - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn bound_constants_of_reference_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bp.csv");
    let o = run(lab(&["bound-constants", "--reference", "--t", "0.5,1", "--out"]).arg(&out));
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let value = |name: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{name},")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(value("delta"), 1.0);
    assert!((value("big_r") - 4.0).abs() < 1e-12);
    let e2 = 1f64.exp().powi(2);
    assert!((value("c1") - 4.0 * e2).abs() < 1e-10 * e2);
}

#[test]
fn localize_spectrum_writes_suite_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("loc.json");
    let o = run(lab(&["localize-spectrum", "--dim", "5", "--instances", "3", "--out"]).arg(&out));
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["samples"], 9);
}
