use std::path::PathBuf;
use std::process::{Command, Output};

fn sym2k(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sym2k"))
        .args(args)
        .env("SYM2K_OFFLINE", "1")
        .env_remove("SYM2K_OEIS_CACHE")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn factor_catalan_prints_kernel() {
    let o = sym2k(&["factor", "--input", &data("catalan.json"), "--c", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("kernel: [(n^2 + 3*n + 2), (-4*n^2 - 16*n - 16), (4*n^2 + 20*n + 25)]"), "{out}");
}

#[test]
fn factor_json_round_trips_kernel() {
    let o = sym2k(&["factor", "--input", &data("pi1.json"), "--c", "1/4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficient_sum_zero"], true);
    assert_eq!(v["kernel"]["order"], 2);
}

#[test]
fn factor_rejects_nonzero_coefficient_sum() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"order": 2, "coeffs": [["1"], ["1"], ["1"]]}"#).unwrap();
    let o = sym2k(&["factor", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL coefficient sum"));
    assert!(!o.stderr.is_empty());
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{").unwrap();
    assert_eq!(sym2k(&["factor", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(sym2k(&["factor"]).status.code(), Some(2));
    let o = sym2k(&["expand", "--params", "1/2,1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--params"));
}

#[test]
fn kernels_report_json_lists_claims() {
    let o = sym2k(&["kernels", "--name", "catalan", "--report", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let chain = v[0]["chain"].as_array().unwrap();
    assert!(!chain.is_empty());
    assert!(chain.iter().all(|s| s["passed"] == true));
}

#[test]
fn accessory_csv_matches_plotted_points() {
    let o = sym2k(&["accessory", "--lambda", "0,1/2,1", "--n", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("lambda,n,exact,decimal10\n"));
    assert!(out.contains("\n1,2,7/8,0.8750000000\n"));
    assert!(out.contains("\n0,1,0,0.0000000000\n"));
    assert!(out.lines().any(|l| l.starts_with("1/2,20,") && l.ends_with(",0.0629627641")));
    assert_eq!(out.lines().count(), 1 + 3 * 21);
}

#[test]
fn accessory_classify_and_limits() {
    let o = sym2k(&["accessory", "--classify", "--scheme=0,0,1/2,1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lambda0: 1/2\ngauss: a=1/2 b=1/2 c=1\n"));
    assert_eq!(sym2k(&["accessory", "--n", "1001"]).status.code(), Some(2));
    assert_eq!(sym2k(&["accessory", "--scheme", "0,0,1/2,1"]).status.code(), Some(2));
}

#[test]
fn scan_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = sym2k(&["scan", "--config", &data("scan.toml"), "--out", p.to_str().unwrap(), "--offline"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().nth(2).unwrap().starts_with("2,1/2,1/2,1,\"[0,4]/[1,-2,1]\",4,1,8,152,2880,"));
}

#[test]
fn scan_depth_override_and_json() {
    let o = sym2k(&["scan", "--depth", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0]["terms"], serde_json::json!(["1", "4", "60", "888", "13960", "231904", "4025904", "72372528"]));
    assert_eq!(rows[0]["oeis"], "not found");
    assert_eq!(sym2k(&["scan", "--depth", "3"]).status.code(), Some(2));
}

#[test]
fn nonexist_row_two() {
    let o = sym2k(&["nonexist", "--row", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("39x39") && out.contains("PASS printed residue 881437"), "{out}");
    assert_eq!(sym2k(&["nonexist", "--row", "6"]).status.code(), Some(2));
}

#[test]
fn oeis_uses_fixtures_offline() {
    assert_eq!(stdout(&sym2k(&["oeis", "1,4,28,256,2716"])), "A002895\n");
    assert_eq!(stdout(&sym2k(&["oeis", "3,1,4,1,5,9"])), "offline\n");
}

#[test]
fn verify_gauge_passes() {
    let o = sym2k(&["verify-gauge", "--params", "1/5,2/7,3/4", "--depth", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["phi"]["dim"], 3);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn expand_formats() {
    let o = sym2k(&["expand", "--params", "1/2,1/2,1", "--depth", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "index,numerator,denominator\n0,1,1\n1,1,4\n2,9,64\n3,25,256\n4,1225,16384\n");
    let o = sym2k(&["expand", "--params", "1/2,1/2,1", "--lambda", "16", "--square", "--depth", "3", "--format", "json"]);
    let v: Vec<String> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v, ["1", "8", "88", "1088"]);
}

#[test]
fn report_single_criterion() {
    let o = sym2k(&["report", "--criterion", "1", "--criterion", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS criterion  1") && out.contains("PASS criterion  8"));
    assert!(out.ends_with("2/2 criteria passed\n"));
    assert_eq!(sym2k(&["report", "--criterion", "13"]).status.code(), Some(2));
}
