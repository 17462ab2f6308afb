use fdviews::oracle::{run_suite, Suite, Verdict, DEFAULT_BUDGET};

fn run(suite: Suite) {
    let r = run_suite(suite, 7, DEFAULT_BUDGET).unwrap();
    let failed: Vec<String> = r
        .reports
        .iter()
        .filter(|c| c.verdict == Verdict::Fail)
        .map(|c| c.to_string())
        .collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}

#[test]
fn contracts_suite_passes() {
    run(Suite::Contracts);
}

#[test]
fn theorems_suite_passes() {
    run(Suite::Theorems);
}

#[test]
fn table1_suite_passes() {
    run(Suite::Table1);
}

#[test]
fn lemmas_suite_passes() {
    run(Suite::Lemmas);
}

#[test]
fn events_suite_passes() {
    run(Suite::Events);
}
