use qillum_web::{summary, sweep_rows, verify_report, MAX_SAMPLES};

#[test]
fn summary_at_six_db_point() {
    let s = summary(0.01, 0.01, 625.0, 1).unwrap();
    assert!(s.advantage_db.unwrap() >= 6.0);
    assert!(s.regime.low_reflectivity && s.regime.bright_noise && s.regime.faint_probe);
    assert!(summary(1.5, 0.1, 1.0, 1).is_err());
}

#[test]
fn sweep_rows_are_ordered() {
    let rows = sweep_rows("E", 1e-3, 1.0, 25, true, 0.1, 0.0, 1.0).unwrap();
    assert_eq!(rows.len(), 25);
    assert!(rows.windows(2).all(|w| w[1].energy > w[0].energy));
    assert!(rows.iter().all(|r| r.exponent_tmsv >= r.exponent_coherent));
    assert!(sweep_rows("bogus", 0.1, 0.2, 2, false, 0.1, 0.1, 1.0).is_err());
}

#[test]
fn verify_reports_parse() {
    for t in ["1", "2", "3"] {
        let json = verify_report(t, 50, 7, 0.1, 0.3, 1.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["passed"], true);
    }
    assert!(verify_report("lemma1", 5, 7, 0.1, 0.3, 1.0).is_err());
    assert!(verify_report("1", MAX_SAMPLES + 1, 7, 0.1, 0.3, 1.0).is_err());
}
