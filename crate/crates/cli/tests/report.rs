use std::path::Path;

use serde_json::Value;
use toda_cli::{run_suite, Report, RunConfig, Suite, SCHEMA_VERSION};

const FIELDS: [&str; 9] = ["tag", "pair", "n", "kind", "status", "metric", "tolerance", "elapsed", "detail"];

#[test]
fn degenerate_report_matches_golden() {
    let report = run_suite(Suite::PaperDegenerate, &RunConfig::default()).unwrap();
    assert!(report.passed);
    assert_eq!(report.schema_version, SCHEMA_VERSION);
    let got: Value = serde_json::from_str(&report.to_json()).unwrap();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/paper-degenerate.json");
    let want: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    for key in ["schemaVersion", "suite", "seed", "passed"] {
        assert_eq!(got[key], want[key], "{key}");
    }
    let (g, w) = (got["records"].as_array().unwrap(), want["records"].as_array().unwrap());
    assert_eq!(g.len(), w.len());
    for (a, b) in g.iter().zip(w) {
        let keys: Vec<&str> = a.as_object().unwrap().keys().map(String::as_str).collect();
        let mut fields = FIELDS.to_vec();
        fields.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, fields);
        for k in ["tag", "pair", "n", "kind", "status", "tolerance", "detail"] {
            if k == "detail" {
                // rates and gaps are printed from floats; compare the symbolic part
                let cut = |v: &Value| v.as_str().unwrap().split("; rate").next().unwrap().to_string();
                assert_eq!(cut(&a[k]), cut(&b[k]), "{}", a["tag"]);
            } else {
                assert_eq!(a[k], b[k], "{} {k}", a["tag"]);
            }
        }
        // extrapolated gaps sit near rounding level; compare on the tolerance's scale
        let (x, y, tol) = (a["metric"].as_f64().unwrap(), b["metric"].as_f64().unwrap(), b["tolerance"].as_f64().unwrap());
        assert!((x - y).abs() <= 1e-3 * tol, "{}: {x} vs {y}", a["tag"]);
    }
}

#[test]
fn records_are_sorted_and_failures_flip_the_verdict() {
    let mut report = run_suite(Suite::PaperDegenerate, &RunConfig::default()).unwrap();
    let tags: Vec<&str> = report.records.iter().map(|r| r.tag.as_str()).collect();
    let mut sorted = tags.clone();
    sorted.sort();
    assert_eq!(tags, sorted);
    assert_eq!(report.exit_code(), 0);
    let mut records = std::mem::take(&mut report.records);
    records[0] = records[0].clone().measured(1.0, 0.5);
    let bad = Report::new("paper-degenerate", 0, records);
    assert!(!bad.passed);
    assert_eq!(bad.exit_code(), 1);
    assert_eq!(bad.failures().count(), 1);
}

#[test]
fn report_round_trips() {
    let report = run_suite(Suite::PaperDegenerate, &RunConfig::default()).unwrap();
    let back: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn unknown_suite() {
    let e = Suite::parse("everything").unwrap_err();
    assert_eq!(e.exit_code(), 2);
}
