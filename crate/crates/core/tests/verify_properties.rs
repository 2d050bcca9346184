use std::collections::BTreeSet;
use std::time::Duration;

use khr_core::braid::BraidWord;
use khr_core::complex::{minimal_rouquier_complex, BimoduleChainComplex};
use khr_core::hochschild::EulerNormalization;
use khr_core::verify::*;
use proptest::prelude::*;

fn config(suites: &[Suite]) -> VerifyConfig {
    VerifyConfig { max_degree: 6, suites: suites.to_vec(), ..VerifyConfig::default() }
}

#[test]
fn rank_one_cones_pass() {
    let checks = rank_one_cones().unwrap();
    assert!(checks.len() >= 8);
    for c in &checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}

#[test]
fn rank_one_square_is_the_displayed_one() {
    let f = a1_square().unwrap();
    f.verify().unwrap();
    assert_eq!(f.source.to_string(), "[-1] B1(-1) → [0] R");
    assert_eq!(f.target.to_string(), "[-1] B1(-1) → [0] B1(1)");
    // flipping the identity component breaks the square
    let mut bad = f.clone();
    let id = &mut bad.components.get_mut(&-1).unwrap()[0][0];
    *id = id.neg();
    assert!(bad.verify().is_err());
}

#[test]
fn rank_two_cones_pass() {
    let report = run_suite(Suite::A2, &config(&[Suite::A2]));
    assert_eq!(report.status, Status::Passed, "{:#?}", report.checks);
}

#[test]
fn exhausted_budget_is_a_timeout_not_a_failure() {
    let cfg = VerifyConfig { a2_budget: Duration::ZERO, ..config(&[Suite::A2]) };
    let report = verify_all(&cfg);
    assert_eq!(report.suites[0].status, Status::TimedOut);
    assert!(!report.passed);
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn bad_normalization_fails_the_euler_suite() {
    let good = run_suite(Suite::Euler, &config(&[Suite::Euler]));
    assert_eq!(good.status, Status::Passed);
    let cfg = VerifyConfig { euler_normalization: EulerNormalization { sign: -1, v_power: 0 }, ..config(&[Suite::Euler]) };
    let bad = verify_all(&cfg);
    assert_eq!(bad.suites[0].status, Status::Failed);
    assert_ne!(bad.exit_code(), 0);
    assert!(bad.suites[0].checks.iter().any(|c| !c.passed && !c.detail.is_empty()));
}

#[test]
fn skipped_suites_are_reported() {
    let cfg = VerifyConfig { skip: BTreeSet::from([Suite::A2]), ..config(&[Suite::Jm, Suite::A2]) };
    let report = verify_all(&cfg);
    assert_eq!(report.suites.len(), 2);
    assert_eq!(report.suites[0].status, Status::Passed);
    assert_eq!(report.suites[1].status, Status::Skipped);
    assert!(report.suites[1].checks.is_empty());
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
    }
    assert!("all".parse::<Suite>().is_err());
}

#[test]
fn report_json_shape() {
    let report = verify_all(&config(&[Suite::Weights]));
    let v: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "weights");
    assert_eq!(v["suites"][0]["status"], "passed");
    assert!(v["suites"][0]["checks"][0].get("detail").is_none());
}

fn arb_check() -> impl Strategy<Value = Check> {
    ("[a-z ]{0,12}", any::<bool>(), "[a-z0-9 ]{0,12}").prop_map(|(name, passed, detail)| Check { name, passed, detail })
}

fn arb_suite_report() -> impl Strategy<Value = SuiteReport> {
    (
        prop::sample::select(Suite::ALL.to_vec()),
        prop::sample::select(vec![Status::Passed, Status::Failed, Status::Skipped, Status::TimedOut]),
        prop::collection::vec(arb_check(), 0..4),
        any::<u32>(),
    )
        .prop_map(|(suite, status, checks, ms)| SuiteReport { suite, status, checks, elapsed_ms: ms as u64 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn reports_round_trip(suites in prop::collection::vec(arb_suite_report(), 0..4), passed in any::<bool>()) {
        let r = VerifyReport { passed, suites };
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<VerifyReport>(&text).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn complexes_round_trip(letters in prop::collection::vec(prop::sample::select(vec![1i32, -1, 2, -2]), 0..4)) {
        let c = minimal_rouquier_complex(&BraidWord::new(3, letters).unwrap()).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<BimoduleChainComplex>(&text).unwrap(), c);
    }
}

#[test]
fn corrupted_complex_is_rejected() {
    let c = minimal_rouquier_complex(&BraidWord::new(2, vec![1, 1]).unwrap()).unwrap();
    let mut v = serde_json::to_value(&c).unwrap();
    // doubling one differential keeps shapes but breaks d∘d = 0
    let entry = &mut v["levels"][0]["differential"][0][0]["entries"][0][2][0][1];
    let q: i64 = entry.as_str().unwrap().parse().unwrap();
    *entry = serde_json::Value::String((2 * q).to_string());
    assert!(serde_json::from_value::<BimoduleChainComplex>(v).is_err());
}
