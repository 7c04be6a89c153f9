use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ruijsenaars"))
}

#[test]
fn verify_thm_main_passes() {
    let out = cli().args(["verify", "thm-main", "--n", "2", "--degree", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS thm-main"));
}

#[test]
fn degenerate_parameters_exit_2() {
    // τ² = q
    let out = cli().args(["verify", "eigen", "--n", "2", "--q", "16/81", "--tau", "4/9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = cli().args(["verify", "eigen", "--q", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn printed_convention_alone_fails() {
    let out = cli().args(["verify", "n1", "--degree", "2", "--convention", "printed"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = cli().args(["verify", "n1", "--degree", "2", "--convention", "kappa-inverted"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn golden_round_trip_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let args = ["verify", "p-limit", "--n", "2", "--degree", "2"];
    let status = cli().args(args).arg("--write-golden").arg(&file).status().unwrap();
    assert!(status.success());
    let out = cli().args(args).arg("--golden").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("GOLDEN MATCH"));

    let mut text = std::fs::read_to_string(&file).unwrap();
    text.push_str("y1^9 1/1\n");
    std::fs::write(&file, text).unwrap();
    let out = cli().args(args).arg("--golden").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_report_is_deterministic() {
    let run = || {
        let out = cli().args(["verify", "bispectral", "--n", "2", "--degree", "3", "--json", "-"]).output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let json_start = a.find('{').unwrap();
    let value: serde_json::Value = serde_json::from_str(&a[json_start..]).unwrap();
    assert_eq!(value["schema"], "ruijsenaars-report/1");
    assert_eq!(value["status"], "pass");
    assert!(value.get("wall_time_ms").is_none());
}

#[test]
fn dump_matches_between_runs() {
    let run = || cli().args(["dump", "f-gl", "--n", "3", "--degree", "2"]).output().unwrap().stdout;
    let a = run();
    assert!(!a.is_empty());
    assert_eq!(a, run());
}
