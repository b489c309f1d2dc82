use std::process::{Command, Output};

fn qillum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qillum"))
        .args(args)
        .env_remove("QI_DEFAULT_SLACK")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn vacuum_probe_has_zero_exponent() {
    let o = qillum(&["exponent", "--probe", "vacuum"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["exponent"], 0.0);
}

#[test]
fn coherent_exponent_example() {
    let o = qillum(&["exponent", "--probe", "coherent", "--eta", "0.01", "--energy", "0.01", "--noise", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o)["exponent"].as_f64().unwrap();
    assert!((v - 4.9271e-6).abs() < 5e-11, "{v}");
}

#[test]
fn tmsv_six_db_example() {
    let o = qillum(&["exponent", "--probe", "tmsv", "--eta", "0.01", "--energy", "0.01", "--noise", "625"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["advantage_db"].as_f64().unwrap() >= 6.0);
}

#[test]
fn total_scales_with_modes() {
    let per = qillum(&["exponent", "--probe", "coherent", "--modes", "3"]);
    let total = qillum(&["exponent", "--probe", "coherent", "--modes", "3", "--total"]);
    let (per, total) = (json(&per)["exponent"].as_f64().unwrap(), json(&total)["exponent"].as_f64().unwrap());
    assert!((total - 3.0 * per).abs() < 1e-15);
    assert_eq!(qillum(&["exponent", "--per-mode", "--total"]).status.code(), Some(2));
}

#[test]
fn invalid_flags_exit_2() {
    for args in [
        &["exponent", "--eta", "1.5"][..],
        &["exponent", "--noise", "-1"],
        &["exponent", "--probe", "squeezed"],
        &["exponent", "--modes", "0"],
        &["sweep", "--axis", "eta", "--values", ""],
        &["sweep", "--axis", "eta", "--values", "0.2,0.1,0.3"],
        &["sweep", "--axis", "eta"],
        &["verify", "--samples", "0"],
        &["verify", "--slack", "-1"],
        &["nonsense"],
    ] {
        let o = qillum(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn sweep_csv_schema() {
    let o = qillum(&["sweep", "--axis", "E", "--start", "0.001", "--stop", "1", "--count", "9", "--scale", "log"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(
        lines.next(),
        Some("eta,E,N_B,exponent_coherent,exponent_tmsv,advantage_db,modes_required")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for r in &rows {
        assert_eq!(r.len(), 7);
        assert!(r[4] >= 0.0 && r[4] >= r[3]);
    }
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
}

#[test]
fn single_value_sweep_matches_exponent_command() {
    let sweep = qillum(&["sweep", "--axis", "N_B", "--values", "625", "--eta", "0.01", "--energy", "0.01"]);
    let row: Vec<String> = stdout(&sweep).lines().nth(2).unwrap().split(',').map(String::from).collect();
    let tmsv = json(&qillum(&["exponent", "--probe", "tmsv", "--eta", "0.01", "--energy", "0.01", "--noise", "625"]));
    let coh = json(&qillum(&["exponent", "--probe", "coherent", "--eta", "0.01", "--energy", "0.01", "--noise", "625"]));
    let close = |s: &str, v: f64| (s.parse::<f64>().unwrap() - v).abs() <= 1e-11 * v.abs();
    assert!(close(&row[3], coh["exponent"].as_f64().unwrap()));
    assert!(close(&row[4], tmsv["exponent"].as_f64().unwrap()));
    assert!(close(&row[5], tmsv["advantage_db"].as_f64().unwrap()));
    assert_eq!(row[6], tmsv["modes_required"].to_string());
}

#[test]
fn zero_energy_sweep_uses_sentinels() {
    let o = qillum(&["sweep", "--axis", "E", "--values", "0,0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().nth(2).unwrap().to_string();
    assert!(first.ends_with(",nan,inf"), "{first}");
}

#[test]
fn verify_defaults_pass_and_are_deterministic() {
    let args = ["verify", "--theorem", "all", "--samples", "1000", "--seed", "7"];
    let a = qillum(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = qillum(&args);
    assert_eq!(a.stdout, b.stdout);
    let reports = json(&a);
    let names: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["theorem"].as_str().unwrap()).collect();
    assert_eq!(names, ["theorem1", "theorem2", "theorem3", "lemma1", "theorem1_fock"]);
    assert!(reports.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn different_seeds_differ() {
    let a = qillum(&["verify", "--theorem", "1", "--samples", "20", "--seed", "1"]);
    let b = qillum(&["verify", "--theorem", "1", "--samples", "20", "--seed", "2"]);
    assert_ne!(json(&a)[0]["worst_case_seed"], json(&b)[0]["worst_case_seed"]);
}

#[test]
fn failed_verification_exits_1() {
    let o = qillum(&["verify", "--theorem", "lemma1", "--lemma-samples", "3", "--lemma-tolerance", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)[0]["passed"], false);
}

#[test]
fn slack_environment_override() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_qillum"))
            .args(["verify", "--theorem", "2", "--samples", "10"])
            .env("QI_DEFAULT_SLACK", value)
            .output()
            .unwrap()
    };
    let o = run("0.5");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)[0]["slack"], 0.5);
    assert_eq!(run("lots").status.code(), Some(2));
    let flag = Command::new(env!("CARGO_BIN_EXE_qillum"))
        .args(["verify", "--theorem", "2", "--samples", "10", "--slack", "1e-3"])
        .env("QI_DEFAULT_SLACK", "0.5")
        .output()
        .unwrap();
    assert_eq!(json(&flag)[0]["slack"], 1e-3);
}

#[test]
fn oracle_check_examples() {
    let o = qillum(&["oracle-check", "--quantity", "entropy", "--energy", "1", "--tolerance", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["gap"].as_f64().unwrap() < 1e-6);
    let o = qillum(&["oracle-check", "--quantity", "exponent-with-memory", "--eta", "0.3", "--energy", "0.2", "--noise", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = qillum(&["oracle-check", "--quantity", "exponent-no-memory", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("quantity,gaussian,oracle,gap"));
}

#[test]
fn oracle_check_exit_codes() {
    let o = qillum(&["oracle-check", "--quantity", "exponent-with-memory", "--noise", "50"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("smaller"));
    let o = qillum(&["oracle-check", "--quantity", "conditional-entropy", "--tolerance", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
