use std::fs;
use std::path::Path;
use std::process::Command;

use nilrep_cli::cache::{cache_gc, FileStore};
use nilrep_cli::parse::parse_str;
use nilrep_cli::report::Budgets;
use nilrep_cli::run::run_suite;
use nilrep_cli::DEFAULT_CATALOG;
use nilrep_core::laurent::BasisStore;
use proptest::prelude::*;

fn nilrep(args: &[&str], dir: &Path) -> (Option<i32>, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilrep")).args(args).current_dir(dir).output().expect("binary runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn reports_are_reproducible() {
    let cat = parse_str(DEFAULT_CATALOG).unwrap();
    for suite in ["lemma1", "eq3", "induction"] {
        let a = run_suite(&cat, suite, Budgets::default(), 7).unwrap().without_timing().to_json();
        let b = run_suite(&cat, suite, Budgets::default(), 7).unwrap().without_timing().to_json();
        assert_eq!(a, b, "{suite}");
    }
}

#[test]
fn seed_changes_random_instances() {
    let cat = parse_str("").unwrap();
    let a = run_suite(&cat, "lemma1", Budgets::default(), 1).unwrap();
    let b = run_suite(&cat, "lemma1", Budgets::default(), 2).unwrap();
    let details = |r: &nilrep_cli::report::RunReport| r.suites[0].cases.iter().map(|c| c.detail.clone()).collect::<Vec<_>>();
    assert_ne!(details(&a), details(&b));
}

#[test]
fn empty_catalog_lemma7() {
    let r = run_suite(&parse_str("").unwrap(), "lemma7", Budgets::default(), 42).unwrap();
    assert_eq!(r.case_count(), 0);
    assert!(r.passed);
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(run_suite(&parse_str("").unwrap(), "lemma99", Budgets::default(), 42).is_err());
}

#[test]
fn budget_overrides() {
    let mut b = Budgets::default();
    b.set("random=3").unwrap();
    b.set("annihilator_degree=9").unwrap();
    b.set("collapse_levels=2").unwrap();
    assert_eq!((b.random, b.annihilator_degree, b.collapse_levels), (Some(3), Some(9), 2));
    assert!(b.set("random").is_err());
    assert!(b.set("random=x").is_err());
    assert!(b.set("speed=1").is_err());
    let r = run_suite(&parse_str("").unwrap(), "lemma1", b, 42).unwrap();
    assert_eq!(r.case_count(), 3);
}

#[test]
fn report_schema() {
    let cat = parse_str(DEFAULT_CATALOG).unwrap();
    let r = run_suite(&cat, "descent", Budgets::default(), 42).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["toolkit_version", "catalog_hash", "suite", "seed", "budgets", "passed", "elapsed_ms", "notes", "suites", "descent"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let case = &v["suites"][0]["cases"][0];
    for key in ["name", "status", "verdict", "detail"] {
        assert!(case.get(key).is_some(), "{key}");
    }
    let audit = v["descent"].as_object().unwrap().values().next().unwrap();
    for key in ["depth", "verdict", "conditions", "trace", "lifting", "red_flag", "note"] {
        assert!(audit.get(key).is_some(), "{key}");
    }
}

#[test]
fn file_store_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let store = FileStore::open(dir.path().join("nested")).unwrap();
    assert_eq!(store.read("k1").unwrap(), None);
    store.write("k1", "x1^2 - 3\nx2").unwrap();
    assert_eq!(store.read("k1").unwrap().as_deref(), Some("x1^2 - 3\nx2"));
    assert_eq!(store.load("k2"), None);
    store.store("k2", "1");
    assert_eq!(store.load("k2").as_deref(), Some("1"));
    // a file under the wrong name is a miss
    fs::copy(store.path_for("k1"), store.path_for("k3")).unwrap();
    assert_eq!(store.read("k3").unwrap(), None);
}

#[test]
fn gc_empty_dir() {
    let dir = tempfile::tempdir().unwrap();
    let s = cache_gc(dir.path(), 0).unwrap();
    assert_eq!((s.entries, s.evicted, s.bytes_before, s.bytes_after), (0, 0, 0, 0));
}

#[test]
fn gc_evicts_oldest_first() {
    let dir = tempfile::tempdir().unwrap();
    let store = FileStore::open(dir.path()).unwrap();
    for i in 0..4 {
        store.write(&format!("key{i}"), &"v".repeat(100)).unwrap();
        std::thread::sleep(std::time::Duration::from_millis(20));
    }
    // reading key0 makes it the most recently used
    store.read("key0").unwrap();
    fs::write(dir.path().join("notes.txt"), "kept").unwrap();
    let size = fs::metadata(store.path_for("key0")).unwrap().len();
    let s = cache_gc(dir.path(), 2 * size).unwrap();
    assert_eq!((s.entries, s.evicted), (4, 2));
    assert!(s.bytes_after <= 2 * size);
    assert!(store.read("key0").unwrap().is_some());
    assert!(store.read("key3").unwrap().is_some());
    assert!(store.read("key1").unwrap().is_none());
    assert!(dir.path().join("notes.txt").exists());
    let again = cache_gc(dir.path(), 2 * size).unwrap();
    assert_eq!(again.evicted, 0);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = nilrep(&["check", "default", "--suite", "lemma3"], dir.path());
    assert_eq!(code, Some(0), "{out}");
    // an unmet expectation exits 1
    let altered = DEFAULT_CATALOG.replace(r#"expect=HypothesisFailed("char")"#, "expect=LIFT");
    assert_ne!(altered, DEFAULT_CATALOG);
    fs::write(dir.path().join("bad.catalog"), altered).unwrap();
    let (code, out, _) = nilrep(&["check", "bad.catalog", "--suite", "lemma8"], dir.path());
    assert_eq!(code, Some(1), "{out}");
    assert!(out.contains("L8neg4"));
    let (code, _, err) = nilrep(&["check", "missing.catalog"], dir.path());
    assert_eq!(code, Some(2));
    assert!(err.contains("missing.catalog"));
    let (code, _, _) = nilrep(&["check", "default", "--budget", "speed=1"], dir.path());
    assert_eq!(code, Some(2));
}

#[test]
fn binary_writes_report_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) =
        nilrep(&["check", "default", "--suite", "eq3", "--report", "r.json", "--cache", "cache", "--budget", "random=2"], dir.path());
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["budgets"]["random"], 2);
    assert!(fs::read_dir(dir.path().join("cache")).unwrap().count() > 0);
    let (code, out, _) = nilrep(&["cache-gc", "cache", "--max-bytes", "0"], dir.path());
    assert_eq!(code, Some(0));
    let stats: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(stats["bytes_after"], 0);
    assert_eq!(stats["evicted"], stats["entries"]);
}

#[test]
fn binary_parse_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = nilrep(&["parse", "default"], dir.path());
    assert_eq!(code, Some(0));
    assert!(err.contains("entries"));
    let again = parse_str(&out).unwrap();
    assert_eq!(again.render(), out);
    assert_eq!(again.len(), parse_str(DEFAULT_CATALOG).unwrap().len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn store_round_trips_any_text(key in "[a-z0-9 ]{1,30}", value in "(?s).{0,200}") {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        store.write(&key, &value).unwrap();
        prop_assert_eq!(store.read(&key).unwrap(), Some(value));
    }

    #[test]
    fn budget_numbers_parse(n in 0usize..100_000) {
        let mut b = Budgets::default();
        b.set(&format!("vector_trials={n}")).unwrap();
        prop_assert_eq!(b.vector_trials, n);
    }
}
