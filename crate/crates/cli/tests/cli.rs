use std::fs;
use std::process::{Command, Output};

use khr_cli::*;
use khr_core::braid::BraidWord;
use khr_core::hochschild::TriGradedTable;
use khr_core::verify::{Status, VerifyReport};
use proptest::prelude::*;

fn khr(args: &[&str]) -> Output {
    khr_env(args, None)
}

fn khr_env(args: &[&str], max_degree: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_khr"));
    cmd.args(args).env_remove("KHR_MAX_DEGREE");
    if let Some(d) = max_degree {
        cmd.env("KHR_MAX_DEGREE", d);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn homfly_unknot_anchors() {
    for (n, word) in [("1", ""), ("2", "1"), ("3", "1 2")] {
        let o = khr(&["--format", "json", "homfly", "--n", n, "--braid", word]);
        assert!(o.status.success());
        let r: HomflyReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r.normalized.len(), 1, "n={n}");
        assert_eq!(r.normalized["a^0"], "1");
    }
}

#[test]
fn homfly_text_mentions_both_values() {
    let o = khr(&["homfly", "--n", "2", "--braid", "1 1 1"]);
    let s = stdout(&o);
    assert!(s.starts_with("normalized"));
    assert!(s.contains("trace:"));
}

#[test]
fn rouquier_json_schema() {
    let o = khr(&["--format", "json", "rouquier", "--n", "2", "--braid", "1 1", "--minimize"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let degrees: Vec<i64> = v.as_array().unwrap().iter().map(|d| d["degree"].as_i64().unwrap()).collect();
    assert_eq!(degrees, vec![0, 1, 2]);
    assert_eq!(v[0]["objects"][0]["label"], "B1");
    assert_eq!(v[0]["objects"][0]["shift"], -1);
    assert_eq!(v[2]["objects"][0]["label"], "R");
    assert_eq!(v[2]["objects"][0]["rank"], "v^-2");
    let typed: Vec<DegreeEntry> = serde_json::from_value(v).unwrap();
    assert_eq!(typed.len(), 3);
}

#[test]
fn unminimized_rouquier_is_larger() {
    let b = BraidWord::new(2, vec![1, -1]).unwrap();
    let full = rouquier_report(&b, false, None).unwrap();
    let min = rouquier_report(&b, true, None).unwrap();
    assert!(full.iter().map(|d| d.objects.len()).sum::<usize>() > 1);
    assert_eq!(min.len(), 1);
    assert_eq!(min[0].objects[0].label, "R");
}

#[test]
fn hhh_json_and_csv() {
    let o = khr(&["--format", "json", "hhh", "--n", "2", "--braid", "1", "--max-degree", "4"]);
    assert!(o.status.success());
    let r: HhhReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.table.truncation, 4);
    assert!(r.euler_check.matches);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["euler_check"]["match"], true);
    assert_eq!(v["euler_check"]["order"], 4);
    assert!(v["entries"][0].get("dim").is_some());
    let o = khr(&["--format", "csv", "hhh", "--n", "2", "--braid", "1", "--max-degree", "4"]);
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("k,i,j,dim"));
    assert_eq!(csv.lines().count(), r.table.entries.len() + 1);
}

#[test]
fn max_degree_precedence() {
    let truncation = |o: Output| serde_json::from_str::<HhhReport>(&stdout(&o)).unwrap().table.truncation;
    let args = ["--format", "json", "hhh", "--n", "1", "--braid", ""];
    assert_eq!(truncation(khr_env(&args, None)), 12);
    assert_eq!(truncation(khr_env(&args, Some("4"))), 4);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--max-degree", "2"]);
    assert_eq!(truncation(khr_env(&with_flag, Some("4"))), 2);
    assert!(!khr_env(&args, Some("-1")).status.success());
}

#[test]
fn braid_from_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    fs::write(&path, r#"{"n": 3, "word": [1, -2]}"#).unwrap();
    let o = khr(&["--format", "json", "homfly", "--input", path.to_str().unwrap()]);
    assert!(o.status.success());
    let direct = khr(&["--format", "json", "homfly", "--n", "3", "--braid", "1 -2"]);
    assert_eq!(stdout(&o), stdout(&direct));
    fs::write(&path, r#"{"n": 2, "word": [3]}"#).unwrap();
    let bad = khr(&["homfly", "--input", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cache_is_reused_and_repaired() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ComplexCache::new(dir.path()).unwrap();
    let b = BraidWord::new(3, vec![1, 2, -1]).unwrap();
    let first = rouquier_report(&b, true, Some(&cache)).unwrap();
    let path = cache.path_for(&b);
    assert!(path.exists());
    let name = path.file_name().unwrap().to_str().unwrap();
    assert!(name.starts_with(&format!("v{}-n3-", khr_core::complex::CONVENTION_VERSION)), "{name}");
    assert_eq!(rouquier_report(&b, true, Some(&cache)).unwrap(), first);
    fs::write(&path, "not json").unwrap();
    assert_eq!(rouquier_report(&b, true, Some(&cache)).unwrap(), first);
    assert!(serde_json::from_str::<serde_json::Value>(&fs::read_to_string(&path).unwrap()).is_ok());
    let uncached = hhh_report(&b, 4, None).unwrap();
    assert_eq!(hhh_report(&b, 4, Some(&cache)).unwrap(), uncached);
    let cli = khr(&["rouquier", "--n", "3", "--braid", "1 2 -1", "--minimize", "--cache", dir.path().to_str().unwrap()]);
    assert!(cli.status.success());
}

#[test]
fn verify_exit_status_and_skip() {
    let o = khr(&["--format", "json", "verify", "--suite", "a1", "--suite", "a2", "--skip", "a2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.suites[0].status, Status::Passed);
    assert_eq!(r.suites[1].status, Status::Skipped);
    let bad = khr(&["verify", "--suite", "euler", "--max-degree", "4", "--euler-v-power", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
    let csv = khr(&["--format", "csv", "verify", "--suite", "jm"]);
    assert_eq!(csv.status.code(), Some(2));
}

fn arb_map() -> impl Strategy<Value = std::collections::BTreeMap<String, String>> {
    prop::collection::btree_map("a\\^-?[0-9]", "[-v0-9^ +]{1,10}", 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn homfly_reports_round_trip(trace in arb_map(), normalized in arb_map()) {
        let r = HomflyReport { trace, normalized };
        prop_assert_eq!(serde_json::from_str::<HomflyReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn rouquier_reports_round_trip(entries in prop::collection::vec(
        (any::<i8>(), prop::collection::vec(("B[12]{0,3}", any::<i8>(), "[v^0-9 +-]{1,8}"), 0..3)), 0..4)) {
        let r: Vec<DegreeEntry> = entries.into_iter().map(|(d, objs)| DegreeEntry {
            degree: d as i64,
            objects: objs.into_iter().map(|(label, shift, rank)| ObjectEntry { label, shift: shift as i64, rank }).collect(),
        }).collect();
        prop_assert_eq!(serde_json::from_str::<Vec<DegreeEntry>>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn hhh_reports_round_trip(
        entries in prop::collection::btree_map((0usize..4, -5i64..5, -12i64..12), 1usize..9, 0..8),
        truncation in 0i64..20,
        matches in any::<bool>(),
    ) {
        let r = HhhReport {
            table: TriGradedTable { truncation, entries },
            euler_check: EulerCheck { matches, order: truncation },
        };
        prop_assert_eq!(serde_json::from_str::<HhhReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }
}
