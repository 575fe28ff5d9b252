use super::*;

#[test]
fn manifest_is_well_formed() {
    let m = manifest();
    assert!(m.len() >= 16);
    let mut names: Vec<&str> = m.iter().map(|e| e.name.as_str()).collect();
    let sorted = names.clone();
    names.dedup();
    assert_eq!(names, sorted, "names sorted and unique");
    for e in &m {
        assert!(e.payload().is_ok(), "{}", e.name);
        assert!(e.companion_payload().is_ok(), "{}", e.name);
        assert!(!e.expect.is_empty(), "{}", e.name);
        for (k, _) in &e.stated {
            assert!(e.expected(k).is_some(), "{}: stated {k} has no expectation", e.name);
        }
    }
    // every bundled file is used by some entry
    for (f, _) in FILES {
        assert!(m.iter().any(|e| e.file == *f || e.companion.as_deref() == Some(f)), "{f} unused");
    }
}

#[test]
fn every_entry_passes() {
    let results = run_all(None).unwrap();
    let failed: Vec<String> = results.iter().filter(|r| !r.pass()).map(|r| r.to_string()).collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}

#[test]
fn run_all_is_deterministic_across_job_counts() {
    let one = run_all(Some(1)).unwrap();
    let many = run_all(Some(4)).unwrap();
    assert_eq!(one, many);
    assert_eq!(summary(&one), summary(&many));
}

#[test]
fn wrong_expectations_fail_and_report() {
    let mut e = entry("h5-bismut").unwrap();
    e.expect = vec![
        ("holonomy_dim".into(), "7".into()),
        ("omega^1_5".into(), "e3".into()),
        ("no such key".into(), "1".into()),
        ("omega^1_9".into(), "0".into()),
    ];
    let r = run(&e);
    assert!(!r.pass());
    assert_eq!(r.failures().count(), 4);
    assert_eq!(r.checks[0].actual, "8");
    assert_eq!(r.checks[1].actual, "-e3");
    assert!(r.checks[2].actual.starts_with("error: invalid input"));
    assert!(r.checks[3].actual.contains("out of range"));
}

#[test]
fn stated_values_are_carried_into_reports() {
    let r = run(&entry("three-step8-bismut").unwrap());
    let c = r.checks.iter().find(|c| c.key == "holonomy_dim").unwrap();
    assert_eq!(c.stated.as_deref(), Some("15"));
    assert!(r.to_string().contains("stated: 15"));
}

#[test]
fn probe_evaluates_keys_outside_the_list() {
    let e = entry("h5-bismut").unwrap();
    assert_eq!(probe(&e, "curvature_rank").unwrap(), Value::Text("4".into()));
    assert!(probe(&entry("jacobi-failure").unwrap(), "omega^1_2").is_err());
}
