use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn engel(args: &[&str], manifest: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_engel"))
        .args(args)
        .arg(manifest)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const PROLONGED3: &str = "\
[chart]
coords = x, y, z
box = [-1, 1]
[sampling]
grid = 3
random = 10
[fields]
V0 = (0, 0, 1)
V1 = (1, z, 0)
[structure d3]
kind = prolongation
frame = V0, V1
n = 3
";

fn with_task(expect: i64) -> String {
    format!("{PROLONGED3}[task tw]\nkind = invariant\nstructure = d3\nexpect = {expect}\n")
}

#[test]
fn text_report_has_one_line_per_task() {
    let o = engel(&["verify"], &fixture("standard-engel-r4.manifest"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    assert!(lines[..3].iter().all(|l| l.starts_with("PASS")));
    assert_eq!(lines[3], "3/3 tasks passed");
}

#[test]
fn twisting_expectation_decides_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.manifest");
    let bad = dir.path().join("bad.manifest");
    std::fs::write(&good, with_task(3)).unwrap();
    std::fs::write(&bad, with_task(2)).unwrap();

    let o = engel(&["invariant", "--format", "json"], &good);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tasks"][0]["value"], serde_json::json!([3]));

    let o = engel(&["invariant", "--format", "json"], &bad);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tasks"][0]["verdict"], "fail");
    assert_eq!(report["tasks"][0]["expected"], serde_json::json!([2]));
}

#[test]
fn json_keys_come_in_fixed_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = engel(
        &["verify", "--format", "json", "--report", path.to_str().unwrap()],
        &fixture("standard-contact-r3.manifest"),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(keys.first(), Some(&"version"));
    assert_eq!(keys.get(1), Some(&"manifest_digest"));
    assert_eq!(keys.get(2), Some(&"tasks"));
    assert_eq!(keys.last(), Some(&"duration_ms"));
}

#[test]
fn empty_manifest_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.manifest");
    std::fs::write(&path, "[chart]\ncoords = x, y, z\nbox = [0, 1]\n").unwrap();
    let o = engel(&["run", "--format", "json"], &path);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tasks"], serde_json::json!([]));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.manifest");
    std::fs::write(&path, "[chart]\ncoords = x, y, z, w\nbox = [-1, 1]\n[fields]\nX = (0, 0, 0, 1)\n[structure d]\nkind = engel_frame\nframe = X, V9\n").unwrap();
    let o = engel(&["verify"], &path);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 8") && err.contains("V9"), "{err}");

    let good = fixture("standard-contact-r3.manifest");
    assert_eq!(engel(&["verify", "--tol-zero", "-1"], &good).status.code(), Some(2));
    assert_eq!(engel(&["verify", "--samples-grid", "1"], &good).status.code(), Some(2));
    assert_eq!(engel(&["verify", "--no-such-flag"], &good).status.code(), Some(2));
    assert_eq!(
        engel(&["verify"], &dir.path().join("missing.manifest")).status.code(),
        Some(2)
    );
    // No structure in the contact fixture has an integer invariant.
    assert_eq!(engel(&["invariant"], &good).status.code(), Some(2));
}

#[test]
fn sampling_flags_change_the_report() {
    let path = fixture("standard-contact-r3.manifest");
    let a = stdout(&engel(&["verify", "--format", "json", "--seed", "0"], &path));
    let b = stdout(&engel(
        &["verify", "--format", "json", "--seed", "1", "--samples-grid", "3"],
        &path,
    ));
    let (a, b): (Value, Value) = (serde_json::from_str(&a).unwrap(), serde_json::from_str(&b).unwrap());
    assert_eq!(a["sampling"]["seed"], 0);
    assert_eq!(b["sampling"]["seed"], 1);
    assert_eq!(b["sampling"]["grid"], serde_json::json!([3]));
}

#[test]
fn construct_writes_a_manifest_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("d3.manifest");
    std::fs::write(&src, PROLONGED3).unwrap();
    let out = dir.path().join("built.manifest");
    let o = engel(&["construct", "--out", out.to_str().unwrap()], &src);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = engel(&["run", "--format", "json"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tasks"][1]["value"], serde_json::json!([3]));

    // Several construct tasks get one file each.
    let many = dir.path().join("many.manifest");
    std::fs::write(
        &many,
        std::fs::read_to_string(fixture("extension-n1.manifest")).unwrap(),
    )
    .unwrap();
    let o = engel(&["construct", "--out", out.to_str().unwrap()], &many);
    assert_eq!(o.status.code(), Some(0));
    for id in ["quarter-construct", "small-construct", "wavy-construct"] {
        assert!(dir.path().join(format!("built.{id}.manifest")).exists(), "{id}");
    }
}
