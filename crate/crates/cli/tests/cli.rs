use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbundle")).args(args).env("RUST_LOG", "warn").output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cbundle-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report on stdout")
}

fn read_report(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("report.json")).unwrap()).unwrap()
}

fn generate(dir: &Path, instance: &[&str]) -> PathBuf {
    let out = dir.join("gen");
    let mut args = vec!["generate", "--out", out.to_str().unwrap()];
    args.extend_from_slice(instance);
    let o = cbundle(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.join("bundle.txt")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn product_generate_writes_bundle_and_provenance() {
    let dir = scratch("product");
    let bundle = generate(&dir, &["product", "--base", "path:4", "--fiber", "path:4"]);
    let r = read_report(bundle.parent().unwrap());
    assert_eq!(r["result"]["summary"]["total_vertices"], 16);
    assert!(bundle.parent().unwrap().join("provenance.json").exists());
    assert!(r["invariants"].as_array().unwrap().iter().all(|i| i["held"] == true));
}

#[test]
fn horocycle_round_trips_through_verify() {
    let dir = scratch("horo");
    let bundle = generate(&dir, &["horocycle", "--radius", "4", "--width", "16"]);
    let o = cbundle(&["verify", s(&bundle)]);
    assert!(o.status.success());
    let r = report(&o);
    let gen = read_report(bundle.parent().unwrap());
    assert_eq!(r["result"]["summary"], gen["result"]["summary"]);
}

#[test]
fn bad_monodromy_is_a_usage_error() {
    let dir = scratch("badmono");
    let o = cbundle(&["generate", "--out", s(&dir), "extension", "--base", "interval:3", "--monodromy", "a->zz"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("monodromy"));
}

#[test]
fn corrupted_bundle_fails_verify_with_witness() {
    let dir = scratch("corrupt");
    let bundle = generate(&dir, &["product", "--base", "path:3", "--fiber", "path:3"]);
    let text = std::fs::read_to_string(&bundle).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Drop the last base edge so the base loses a vertex.
    let truncated = lines[..lines.len() - 1].join("\n") + "\n";
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, truncated).unwrap();
    let o = cbundle(&["verify", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["invariants"][0]["held"], false);
    assert!(r["invariants"][0]["detail"].as_str().is_some());
}

#[test]
fn product_analysis_records_flaring_fail() {
    let dir = scratch("prodflare");
    let bundle = generate(&dir, &["product", "--base", "path:6", "--fiber", "path:6"]);
    let o = cbundle(&["analyze", s(&bundle)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["result"]["flaring"]["report"]["primary"], "FAIL");
    assert_eq!(r["result"]["flaring"]["necessity"]["flaring"], "FAIL");
}

#[test]
fn horocycle_analysis_records_flaring_pass() {
    let dir = scratch("horoflare");
    let bundle = generate(&dir, &["horocycle", "--radius", "6", "--width", "32"]);
    let o = cbundle(&["analyze", s(&bundle), "--which", "flaring"]);
    assert!(o.status.success());
    assert_eq!(report(&o)["result"]["flaring"]["report"]["primary"], "PASS");
}

#[test]
fn tree_fibers_have_zero_delta() {
    let dir = scratch("tree");
    let bundle = generate(&dir, &["product", "--base", "path:5", "--fiber", "tree:2x3"]);
    let o = cbundle(&["analyze", s(&bundle), "--which", "hyperbolicity"]);
    assert!(o.status.success());
    assert_eq!(report(&o)["result"]["hyperbolicity"]["fiber_delta_4pt_max"], 0.0);
}

#[test]
fn same_seed_gives_identical_reports_and_check_passes() {
    let dir = scratch("determinism");
    let bundle = generate(&dir, &["horocycle", "--radius", "4", "--width", "16"]);
    let a = cbundle(&["analyze", s(&bundle), "--seed", "9"]);
    let b = cbundle(&["analyze", s(&bundle), "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let saved = dir.join("saved.json");
    std::fs::write(&saved, &a.stdout).unwrap();
    let check = cbundle(&["report", s(&saved), "--check"]);
    assert!(check.status.success());
    assert_eq!(report(&check)["result"]["reproduced"], true);

    let edited = String::from_utf8(a.stdout).unwrap().replacen("\"seed\": 9", "\"seed\": 10", 1);
    std::fs::write(&saved, edited).unwrap();
    assert_eq!(cbundle(&["report", s(&saved), "--check"]).status.code(), Some(1));
}

#[test]
fn paths_dump_trivial_pairs_and_reject_out_of_range() {
    let dir = scratch("paths");
    let bundle = generate(&dir, &["horocycle", "--radius", "4", "--width", "16"]);
    let pairs = dir.join("pairs.txt");
    std::fs::write(&pairs, "# x y\n5 5\n0 40\n").unwrap();
    let out = dir.join("p");
    let o = cbundle(&["paths", s(&bundle), "--pairs-file", s(&pairs), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dump = std::fs::read_to_string(out.join("paths.jsonl")).unwrap();
    let first: Value = serde_json::from_str(dump.lines().next().unwrap()).unwrap();
    assert_eq!(first["path"], serde_json::json!([5]));
    assert_eq!(dump.lines().count(), 2);

    std::fs::write(&pairs, "0 100000\n").unwrap();
    let o = cbundle(&["paths", s(&bundle), "--pairs-file", s(&pairs)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));
}

#[test]
fn grid_product_fails_hamenstadt_check() {
    let dir = scratch("grid");
    let bundle = generate(&dir, &["product", "--base", "path:8", "--fiber", "path:8"]);
    let o = cbundle(&["paths", s(&bundle), "--family", "canonical"]);
    assert!(o.status.success());
    assert_eq!(report(&o)["result"]["hamenstadt"]["verdict"], "FAIL");
}

#[test]
fn section_and_ladder_commands_produce_artifacts() {
    let dir = scratch("section");
    let bundle = generate(&dir, &["horocycle", "--radius", "4", "--width", "16"]);
    let out = dir.join("s");
    let o = cbundle(&["section", s(&bundle), "--through", "10", "--level-with", "40", "--out", s(&out)]);
    assert!(o.status.success());
    let r = read_report(&out);
    assert!(r["result"]["level_set"].is_object());
    let text = std::fs::read_to_string(out.join("section.txt")).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().nth(1) == Some("10")));

    let o = cbundle(&["ladder", s(&bundle), "--s1", "10", "--s2", "40"]);
    assert!(o.status.success());
    assert!(report(&o)["result"]["lipschitz"]["constant"].as_u64().unwrap() >= 1);
}

#[test]
fn config_file_overrides_parameters() {
    let dir = scratch("config");
    let bundle = generate(&dir, &["horocycle", "--radius", "4", "--width", "16"]);
    let cfg = dir.join("params.toml");
    std::fs::write(&cfg, "ladder_radius = 2\n[flare]\nwindow = 2\n").unwrap();
    let o = cbundle(&["flare", s(&bundle), "--config", s(&cfg)]);
    assert!(o.status.success());
    let r = report(&o);
    assert_eq!(r["config"]["params"]["ladder_radius"], 2);
    assert_eq!(r["config"]["params"]["flare"]["window"], 2);
}
