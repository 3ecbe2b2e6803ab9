use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn supcheck(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supcheck"))
        .args(args)
        .env("SUPCHECK_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cache_in(dir: &tempfile::TempDir) -> std::path::PathBuf {
    dir.path().join("orders.tsv")
}

#[test]
fn check_sp_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let ok = supcheck(&c, &["check", "sp", "--p", "2", "--q", "4", "--primes", "2..10000"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verdict"], "HOLDS");

    let bad = supcheck(&c, &["check", "sp", "--p", "4", "--q", "2", "--primes", "2..100"]);
    assert_eq!(bad.status.code(), Some(1));
    let report = json(&bad);
    assert_eq!(report["verdict"], "VIOLATED");
    let ps: Vec<u64> = report["violations"].as_array().unwrap().iter().map(|v| v["p"].as_u64().unwrap()).collect();
    assert!(ps.contains(&5));

    let tolerated = supcheck(&c, &["check", "sp", "--p", "4", "--q", "2", "--primes", "2..100", "--budget", "100"]);
    assert_eq!(tolerated.status.code(), Some(0));
    assert_eq!(json(&tolerated)["verdict"], "HOLDS_WITH_EXCEPTIONS");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    for args in [
        &["check", "sp", "--p", "0", "--q", "2"][..],
        &["check", "lsp", "--p", "2", "--q", "4"],
        &["check", "lsp", "--p", "2", "--q", "4", "--ell", "4"],
        &["check", "sp", "--p", "2", "--q", "4", "--primes", "10..5"],
        &["check", "wmsp", "--p", "2", "--q", "4"],
        &["decompose", "--point", "-1,1"],
        &["relate", "--group", "ec:0,-2", "--p", "3,5", "--q", "3,-5"],
        &["nonsense"],
    ] {
        let out = supcheck(&c, args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn components_and_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    assert_eq!(json(&supcheck(&c, &["components", "--point", "2,-2"]))["components"], 2);
    assert_eq!(json(&supcheck(&c, &["components", "--point", "4,4"]))["components"], 1);
    let d = json(&supcheck(&c, &["decompose", "--point", "2,4"]));
    assert_eq!(d["J"], serde_json::json!([1]));
    assert_eq!(d["d"], 1);
    let d = json(&supcheck(&c, &["decompose", "--point", "-2,3"]));
    assert_eq!(d["J"], serde_json::json!([1, 2]));
    assert_eq!(d["d"], 1);
    let d = json(&supcheck(&c, &["decompose", "--point", "-1,2"]));
    assert_eq!(d["J"], serde_json::json!([2]));
    assert_eq!(d["d"], 2);
}

#[test]
fn order_lines() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let out = supcheck(&c, &["order", "--group", "gm:1", "--point", "2", "--primes", "2..20", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0]["skipped"].is_string());
    let orders: Vec<u64> = lines[1..].iter().map(|l| l["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, vec![2, 4, 3, 10, 12, 8, 18]);
    assert_eq!(lines[6]["v_2"], 3);
}

#[test]
fn relate_torus_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let r = json(&supcheck(&c, &["relate", "--p", "2,3", "--q", "12"]));
    assert_eq!(r["relation"]["c"], 1);
    let r = json(&supcheck(&c, &["relate", "--p", "4", "--q", "2"]));
    assert_eq!(r["relation"]["c"], 2);
    let r = json(&supcheck(&c, &["relate", "--p", "2", "--q", "3"]));
    assert!(r["relation"].is_null());
    let r = json(&supcheck(&c, &["relate", "--group", "ec:0,-2", "--p", "3,5", "--q", "3,-5", "--bound", "5"]));
    assert_eq!(r["relation"]["c"], 1);
    assert_eq!(r["exhaustive"], false);
}

#[test]
fn gallery_listing_and_case() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let list = supcheck(&c, &["gallery"]);
    assert!(String::from_utf8(list.stdout).unwrap().contains("nobar1"));
    let out = supcheck(&c, &["gallery", "nobar1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cases"][0]["status"], "PASS");
    assert!(String::from_utf8(out.stderr).unwrap().contains("PASS"));
    assert_eq!(supcheck(&c, &["gallery", "nope"]).status.code(), Some(2));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let args = ["check", "lsp", "--p", "256,-1", "--q", "2,1", "--ell", "2", "--primes", "2..3000"];
    let cold = supcheck(&c, &args);
    assert!(c.exists());
    let entries = std::fs::read_to_string(&c).unwrap().lines().count();
    assert!(entries > 0);
    let warm = supcheck(&c, &args);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.status.code(), warm.status.code());
    assert_eq!(std::fs::read_to_string(&c).unwrap().lines().count(), entries);

    let mut no_cache = vec!["--no-cache"];
    no_cache.extend_from_slice(&args);
    assert_eq!(supcheck(&c, &no_cache).stdout, cold.stdout);
}

#[test]
fn corrupt_cache_lines_warn() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let args = ["order", "--point", "3,5", "--primes", "2..200"];
    let reference = supcheck(&c, &args).stdout;
    let mut text = std::fs::read_to_string(&c).unwrap();
    text.push_str("this is not a cache line\n");
    std::fs::write(&c, text).unwrap();
    let out = supcheck(&c, &args);
    assert_eq!(out.stdout, reference);
    assert!(String::from_utf8(out.stderr).unwrap().contains("warning"));
}

#[test]
fn concurrent_appends_stay_readable() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let c = c.clone();
            std::thread::spawn(move || {
                let point = format!("{},{}", i + 2, 2 * i + 3);
                supcheck(&c, &["order", "--point", &point, "--primes", "2..3000"])
            })
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap().status.code(), Some(0));
    }
    let check = supcheck(&c, &["order", "--point", "2,3", "--primes", "2..50"]);
    assert!(check.stderr.is_empty(), "{}", String::from_utf8_lossy(&check.stderr));
    let text = std::fs::read_to_string(&c).unwrap();
    assert!(text.lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let c = cache_in(&dir);
    let r = json(&supcheck(&c, &["relate", "--p", "256,-1", "--q", "2,1"]));
    assert_eq!(r["relation"]["c"], 8);
    let r = json(&supcheck(&c, &["relate", "--p", "2", "--q", "4"]));
    assert_eq!(r["relation"]["c"], 1);
    assert_eq!(r["relation"]["blocks"][0]["matrix"], serde_json::json!([[2]]));
    let none = supcheck(&c, &["relate", "--p", "2,-1", "--q", "3,1"]);
    assert_eq!(none.status.code(), Some(0));
    assert!(json(&none)["relation"].is_null());

    let mixed = json(&supcheck(
        &c,
        &["relate", "--group", "gm:1*ec:0,-2", "--p", "2*3;5", "--q", "4*3;-5", "--bound", "3"],
    ));
    assert_eq!(mixed["relation"]["c"], 1);
    assert_eq!(mixed["relation"]["blocks"].as_array().unwrap().len(), 2);

    let inf = supcheck(&c, &["order", "--group", "ec:0,1", "--point", "inf", "--primes", "5..5"]);
    let line: Value = serde_json::from_slice(&inf.stdout).unwrap();
    assert_eq!(line["order"], 1);
    let ones = supcheck(&c, &["order", "--group", "gm:1", "--point", "1", "--primes", "2..50"]);
    assert!(String::from_utf8(ones.stdout).unwrap().lines().all(|l| l.contains("\"order\":1")));
    assert_eq!(supcheck(&c, &["check", "lsp", "--ell", "2", "--p", "2", "--q", "2"]).status.code(), Some(0));
}
