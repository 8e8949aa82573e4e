//! End-to-end acceptance checks, one per advertised guarantee. Each test
//! prints a single [PASS]/[FAIL] line; thresholds and budgets are stated
//! inline rather than shared, so every line stands on its own.

use freeprob::ncpart::NcPartition;
use freeprob::ncpart::{catalan_number, enumerate_nc, enumerate_ncpp, enumerate_set_partitions};
use freeprob::report::Report;
use freeprob::scenario::{bundled_scenario, parse_scenario};
use freeprob::suites::{run_scenario, RunConfig};
use std::time::{Duration, Instant};

fn conclude(criterion: &str, ok: bool, detail: &str) {
    let verdict = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{verdict} {criterion}: {detail}");
    assert!(ok, "{criterion}: {detail}");
}

fn run_inline(text: &str, config: RunConfig) -> Report {
    let scenario = parse_scenario(text).expect("inline scenario parses");
    run_scenario(&scenario, text.as_bytes(), &config).expect("suite runs")
}

fn run_bundled(name: &str) -> Report {
    let text = bundled_scenario(name).expect("bundled scenario exists");
    let scenario = parse_scenario(text).expect("bundled scenario parses");
    run_scenario(&scenario, text.as_bytes(), &RunConfig::default()).expect("suite runs")
}

fn failing_checks(report: &Report) -> String {
    report
        .checks
        .iter()
        .filter(|c| c.status != freeprob::report::Status::Pass)
        .map(|c| format!("{}={:e}", c.name, c.value))
        .collect::<Vec<_>>()
        .join(", ")
}

#[test]
fn c01_partition_counts() {
    let started = Instant::now();
    let expected: [u64; 8] = [1, 2, 5, 14, 42, 132, 429, 1430];
    let mut ok = true;
    let mut detail = String::new();
    for (i, &want) in expected.iter().enumerate() {
        let n = i + 1;
        let generated = enumerate_nc(n).unwrap().len() as u64;
        let filtered = enumerate_set_partitions(n)
            .unwrap()
            .into_iter()
            .filter(|sp| NcPartition::from_set_partition(sp.clone()).is_ok())
            .count() as u64;
        if generated != want || filtered != want {
            ok = false;
            detail = format!("n={n}: generated {generated}, filtered {filtered}, want {want}");
            break;
        }
    }
    if ok {
        for k in 1..=6 {
            let count = enumerate_ncpp(2 * k).unwrap().len() as u64;
            if count != catalan_number(k) {
                ok = false;
                detail = format!("pair partitions of 2k={}: {count}", 2 * k);
                break;
            }
        }
    }
    let elapsed = started.elapsed();
    if ok && elapsed >= Duration::from_secs(5) {
        ok = false;
        detail = format!("exceeded 5 s budget: {elapsed:?}");
    }
    if ok {
        detail = format!(
            "non-crossing counts n<=8 by generation and filtering, pair counts 2k<=12, {elapsed:?}"
        );
    }
    conclude("C1", ok, &detail);
}

#[test]
fn c02_moment_cumulant_roundtrip() {
    let text = r#"{"schema_version":1,"name":"roundtrip","kind":"cumulants","payload":{
        "systems":[{"dim":1,"max_order":5,"count":100},{"dim":2,"max_order":4,"count":25}],
        "closed_form_samples":100,
        "tolerance":1e-12
    }}"#;
    let report = run_inline(text, RunConfig::default());
    conclude(
        "C2",
        report.passed,
        &if report.passed {
            "inversion roundtrips (100 scalar systems to order 5, 25 two-dimensional to order 4) \
             and order-2/3 closed forms on 100 random tables, all within 1e-12"
                .to_string()
        } else {
            failing_checks(&report)
        },
    );
}

#[test]
fn c03_fock_models_match_combinatorial_oracles() {
    let started = Instant::now();
    let text = r#"{"schema_version":1,"name":"fock-oracle","kind":"fock","payload":{
        "covariance":{"names":["x","y","z"],"cov":[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0]]},
        "max_word_len":8,
        "tolerance":1e-10
    }}"#;
    let report = run_inline(text, RunConfig::default());
    let elapsed = started.elapsed();
    let ok = report.passed && elapsed < Duration::from_secs(60);
    conclude(
        "C3",
        ok,
        &if report.passed {
            format!(
                "both models match their oracles on all 9840 words (len <= 8, 3 orthonormal \
                 generators) and single-variable sequences, {elapsed:?}"
            )
        } else {
            failing_checks(&report)
        },
    );
}

#[test]
fn c04_amplified_cumulants_vanish() {
    let started = Instant::now();
    let report = run_bundled("thm1-forward");
    let elapsed = started.elapsed();
    let ok = report.passed && elapsed < Duration::from_secs(120);
    conclude(
        "C4",
        ok,
        &if report.passed {
            format!(
                "cumulant functionals of orders 0, 2, 3, 4 vanish to 1e-10 for 3x3 amplifications \
                 of 2 free semicirculars across 50 trials, {elapsed:?}"
            )
        } else {
            failing_checks(&report)
        },
    );
}

#[test]
fn c05_detection_on_squared_element() {
    let report = run_bundled("thm1-converse");
    let detections = report
        .checks
        .iter()
        .find(|c| c.name == "powered_detections")
        .map(|c| c.value)
        .unwrap_or(f64::NAN);
    conclude(
        "C5",
        report.passed,
        &if report.passed {
            format!(
                "squared-semicircular family detected in {detections}/50 trials (need >= 49), \
                 genuine family 0/50"
            )
        } else {
            failing_checks(&report)
        },
    );
}

#[test]
fn c06_standard_polynomial_identities() {
    let started = Instant::now();
    let report = run_bundled("al");
    let elapsed = started.elapsed();
    let ok = report.passed && elapsed < Duration::from_secs(30);
    conclude(
        "C6",
        ok,
        &if report.passed {
            format!(
                "degree-4 and degree-6 vanishing on 2x2 and 3x3 to 1e-10; nonvanishing \
                 matrix-unit witnesses at degrees 3 and 5, {elapsed:?}"
            )
        } else {
            failing_checks(&report)
        },
    );
}

#[test]
fn c07_block_expectation_chain() {
    let report = run_bundled("thm2-chain");
    conclude(
        "C7",
        report.passed,
        &if report.passed {
            "operator-side block expectations equal the pairing expansion for words up to \
             length 4 at coefficient dimensions 2 and 3, 25 trials, 1e-10"
                .to_string()
        } else {
            failing_checks(&report)
        },
    );
}

#[test]
fn c08_cyclic_corner_compression() {
    let report = run_bundled("symfock");
    let flagged = report
        .checks
        .iter()
        .filter(|c| c.name.starts_with("shift_discrepancies"))
        .count();
    let ok = report.passed && flagged == 8;
    conclude(
        "C8",
        ok,
        &if ok {
            "corner-compressed invariant exact for all permutations, n <= 5, m <= 2; raw-product \
             discrepancy flagged for every nontrivial cyclic shift"
                .to_string()
        } else {
            format!("flagged={flagged}; {}", failing_checks(&report))
        },
    );
}

#[test]
fn c09_circular_elements() {
    let star = run_bundled("def42");
    let complex_check = run_bundled("cor43");
    let ok = star.passed && complex_check.passed;
    conclude(
        "C9",
        ok,
        &if ok {
            "star-word moments match the pairing oracle for all words len <= 6 to 1e-10; \
             complex amplification decomposition passes on random coefficients"
                .to_string()
        } else {
            format!(
                "star: {}; complex: {}",
                failing_checks(&star),
                failing_checks(&complex_check)
            )
        },
    );
}

#[test]
fn c10_deterministic_reports() {
    let bin = env!("CARGO_BIN_EXE_freeprob");
    let dir = std::env::temp_dir();
    let out1 = dir.join("freeprob_accept_rep1.json");
    let out2 = dir.join("freeprob_accept_rep2.json");
    for out in [&out1, &out2] {
        let status = std::process::Command::new(bin)
            .args(["run", "--bundled", "al", "--out"])
            .arg(out)
            .output()
            .expect("binary runs");
        assert!(status.status.success(), "al suite must pass");
    }
    let strip = |path: &std::path::Path| {
        let text = std::fs::read_to_string(path).expect("report written");
        let mut v: serde_json::Value = serde_json::from_str(&text).expect("report parses");
        let timing = v.as_object_mut().unwrap().remove("timing");
        assert!(timing.is_some(), "timing field present");
        serde_json::to_string(&v).unwrap()
    };
    let r1 = strip(&out1);
    let r2 = strip(&out2);
    let _ = std::fs::remove_file(&out1);
    let _ = std::fs::remove_file(&out2);
    conclude(
        "C10",
        r1 == r2,
        "repeated runs produce byte-identical reports once the isolated timing field is removed",
    );
}
