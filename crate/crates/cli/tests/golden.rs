//! Runs the binary and compares reports with the pinned files in `golden/`.
//! Set `KURATREE_BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn core_fixture(rel: &str) -> String {
    manifest().join("../core/fixtures").join(rel).to_string_lossy().into_owned()
}

fn data(rel: &str) -> String {
    manifest().join("tests/data").join(rel).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("golden");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs `kuratree args… --out <tmp>` and returns the exit code, report text and stderr.
fn run(name: &str, args: &[&str]) -> (i32, String, String) {
    let out = scratch(&format!("{name}.json"));
    let _ = std::fs::remove_file(&out);
    let o = Command::new(env!("CARGO_BIN_EXE_kuratree"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (o.status.code().unwrap(), text, String::from_utf8_lossy(&o.stderr).into_owned())
}

fn golden(name: &str, args: &[&str], code: i32) -> Value {
    let (c, text, err) = run(name, args);
    assert_eq!(c, code, "{name}: {err}");
    let path = manifest().join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("KURATREE_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let pinned = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(text, pinned, "{name} differs from its golden report");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn trees_of_a_single_vertex() {
    let v = golden("trees", &["trees", "--k", "2"], 0);
    assert_eq!(v["schema"], "kuratree/trees");
    assert_eq!(v["version"], 1);
    assert_eq!(v["summary"]["trees"], 1);
    assert_eq!(v["records"][0]["canonical"], "[0|](*,*)");
}

#[test]
fn boundary_and_corners() {
    let v = golden("boundary", &["boundary", "--k", "1", "--beta", "1"], 0);
    assert_eq!(v["summary"]["terms"], 2);
    let v = golden("corners", &["corners", "--k", "1", "--ell", "1", "--beta", "1", "--codim", "2"], 0);
    assert!(v["summary"]["strata"].as_u64().unwrap() > 0);
}

#[test]
fn corner_count_multiplicities_are_two() {
    let args = ["check-corner-count", "--m1", "1", "--m2", "1", "--kmax", "2", "--lmax", "1", "--emax", "2"];
    let v = golden("check-corner-count", &args, 0);
    let mut seen = 0;
    for r in v["records"].as_array().unwrap() {
        assert_eq!(r["expected"], 2);
        for d in r["descriptors"].as_array().unwrap() {
            assert_eq!(d["multiplicity"], 2);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn d_squared_under_both_conventions() {
    let v = golden("check-d2", &["check-d2", "--kmax", "2", "--emax", "2", "--format", "summary"], 0);
    assert!(v.get("records").is_none());
    assert_eq!(v["summary"]["unpaired"], 0);
    let (code, text, _) = run("check-d2-unshifted", &["check-d2", "--kmax", "2", "--emax", "2", "--convention", "unshifted"]);
    assert_eq!(code, 1);
    assert!(!text.is_empty());
}

#[test]
fn operation_tables() {
    golden("check-ainf", &["check-ainf", "--table", &core_fixture("novikov/gauge.json")], 0);
    let v = golden("check-ainf-broken", &["check-ainf", "--table", &data("broken-dga.json")], 1);
    assert_eq!(v["passed"], false);
    golden("check-family", &["check-family", "--family", &core_fixture("novikov/gauge-path.json")], 0);
}

#[test]
fn cover_round_trip() {
    let model = core_fixture("cover/two-level.json");
    golden("build-cover", &["build-cover", "--model", &model, "--format", "summary"], 0);
    let a = scratch("cover-forward.json");
    let b = scratch("cover-reverse.json");
    for (path, order) in [(&a, "forward"), (&b, "reverse")] {
        let o = Command::new(env!("CARGO_BIN_EXE_kuratree"))
            .args(["build-cover", "--model", &model, "--order", order, "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(o.success());
    }
    let a = a.to_string_lossy();
    let b = b.to_string_lossy();
    let v = golden("verify-cover", &["verify-cover", "--model", &model, "--cover", &a, "--format", "summary"], 0);
    assert_eq!(v["summary"]["failed_clauses"], Value::Array(vec![]));
    let v = golden("compare-covers", &["compare-covers", "--model", &model, "--first", &a, "--second", &b], 0);
    assert_eq!(v["summary"]["relation"], "equivalent");
    let (code, _, _) =
        run("compare-shallow", &["compare-covers", "--model", &model, "--first", &a, "--second", &b, "--zigzag-depth", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn blaschke_subcommands() {
    let v = golden("blaschke-dim", &["blaschke", "dim"], 0);
    assert_eq!(v["summary"]["checked"], 14);
    let v = golden("blaschke-winding", &["blaschke", "winding", "--zeros", "0.5,0.1;0,-0.9999", "--theta", "1"], 0);
    assert_eq!(v["summary"]["maslov"], 4);
    golden("blaschke-fiber", &["blaschke", "fiber", "--first", "1,2", "--second", "1,1", "--slot", "2", "--seeds", "8"], 0);
    let v = golden("blaschke-degenerate", &["blaschke", "degenerate", "--d1", "1", "--d2", "2"], 0);
    assert_eq!(v["summary"]["tree"], "[1|]([2|]())");
}

#[test]
fn reports_are_deterministic() {
    let args = ["blaschke", "fiber", "--first", "2,2", "--second", "1,0", "--slot", "1", "--seeds", "16"];
    let (_, a, _) = run("det-a", &args);
    let (_, b, _) = run("det-b", &args);
    assert_eq!(a, b);
}

#[test]
fn configuration_errors_exit_with_two() {
    let (code, text, err) = run("bad-monoid", &["trees", "--k", "2", "--monoid", &data("bad-monoid.json")]);
    assert_eq!(code, 2);
    assert!(text.is_empty());
    assert!(err.contains("\"c\""), "{err}");
    let (code, _, err) = run("bad-e0", &["check-ainf", "--table", &core_fixture("novikov/dga.json"), "--e0", "-1"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run("bad-slot", &["blaschke", "fiber", "--first", "1,1", "--second", "1,1", "--slot", "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = run("missing", &["check-ainf", "--table", "/nonexistent.json"]);
    assert_eq!(code, 2);
}
