use std::process::Command;

fn hecke(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn unknown_kind_is_a_usage_error() {
    let out = hecke(&["root", "nosuch"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuch"));
}

#[test]
fn bad_flags_exit_one() {
    let out = hecke(&["elliptic", "g2", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn elliptic_g2_reports_three_elliptic_classes() {
    let out = hecke(&["elliptic", "g2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], "1.0.0");
    assert_eq!(v["result"]["elliptic_class_count"], 3);
    assert_eq!(v["result"]["order"], 12);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn same_argv_same_bytes() {
    let args = ["residual", "f4", "--json"];
    let a = hecke(&args);
    let b = hecke(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_csv_has_the_expected_header() {
    let out = hecke(&["table", "g2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let header = text.lines().next().unwrap();
    assert_eq!(header, "label,s,coords,d_b,G2,E6<E8,3E6");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn cn_rejects_a_size_mismatch() {
    let out = hecke(&["cn", "--n", "3", "--params", "1000,2,2", "--bp", "1|1"]);
    assert_eq!(out.status.code(), Some(1));
}
