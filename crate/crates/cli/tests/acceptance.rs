//! Acceptance checks, one PASS/FAIL line each.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use fdviews::bench::{relative, run_benchmark};
use fdviews::decompose::check_catalog;
use fdviews::model::{Model, PostMode};
use fdviews::oracle::{check_boolean_identities, classify_view, run_suite, CheckReport, Suite, Verdict, DEFAULT_BUDGET};
use fdviews::prelude::{Value, View};
use fdviews::views::Classification;

const SEED: u64 = 7;

struct Line {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn failures(rs: &[CheckReport]) -> Vec<String> {
    rs.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.to_string()).collect()
}

fn suite(s: Suite) -> (Vec<CheckReport>, Duration) {
    let t = Instant::now();
    let r = run_suite(s, SEED, DEFAULT_BUDGET).expect("suite runs");
    (r.reports, t.elapsed())
}

fn verdict_of(rs: &[CheckReport], name: &str) -> Option<Verdict> {
    rs.iter().find(|r| r.name == name).map(|r| r.verdict)
}

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn load(file: &str, n: Option<usize>) -> Model {
    let text = std::fs::read_to_string(models().join(file)).expect("model file");
    Model::parse_with_size(&text, n).expect("model parses")
}

fn theorems(rs: &[CheckReport], took: Duration) -> Line {
    let fails = failures(rs);
    let families = [
        "id", "neg", "minus", "offset(-3)", "offset(1)", "offset(5)", "scale(2)", "scale(3)", "scale(-2)", "affine(-1,2)",
        "const(0)", "const(1)", "complement", "singleton",
    ];
    let missing: Vec<&str> = families
        .iter()
        .copied()
        .filter(|f| !rs.iter().any(|r| r.name.contains(&format!("/{f}/contraction"))))
        .collect();
    let props = ["contraction", "monotonicity", "assoc", "preservation"];
    let counts: Vec<usize> = props
        .iter()
        .map(|p| rs.iter().filter(|r| r.name.ends_with(&format!("/{p}"))).count())
        .collect();
    Line {
        name: "theorem-suite",
        ok: fails.is_empty() && missing.is_empty() && counts.iter().all(|&c| c > 0) && took < Duration::from_secs(60),
        detail: format!(
            "checks={} fail={} missing_families={:?} per_property={:?} seconds={:.1}",
            rs.len(),
            fails.len(),
            missing,
            counts,
            took.as_secs_f64()
        ),
    }
}

fn table1(rs: &[CheckReport]) -> Line {
    let fails = failures(rs);
    let rows = ["domain", "boundsD", "boundsZ", "boundsR"];
    let cols = ["bijective", "injective", "arbitrary"];
    let mut cells = 0;
    for r in rows {
        for c in cols {
            let prefix = format!("table1/{r}/{c}/complete-");
            if rs.iter().any(|x| x.name.starts_with(&prefix) && x.verdict == Verdict::Pass) {
                cells += 1;
            }
        }
    }
    let witness = ["one-step", "violated-domain", "violated-boundsZ", "holds-boundsR"]
        .iter()
        .all(|w| verdict_of(rs, &format!("table1/witness/2x+2y=5/{w}")) == Some(Verdict::Pass))
        && verdict_of(rs, "table1/witness/2x+2y+2z=5/engine-fixpoint") == Some(Verdict::Pass);
    Line {
        name: "table1-matrix",
        ok: fails.is_empty() && cells == 12 && witness,
        detail: format!("cells={cells}/12 witness={witness} fail={}", fails.len()),
    }
}

fn lemmas(rs: &[CheckReport]) -> Line {
    let fails = failures(rs);
    let ints: Vec<Value> = (-2..=2).map(Value::Int).collect();
    let s2 = classify_view(&View::scale(2).unwrap(), &ints).0;
    let off = classify_view(&View::offset(1), &ints).0;
    let minus = classify_view(&View::minus(), &ints).0;
    let ok_class = s2 == Classification::IntervalInjective
        && off == Classification::IntervalBijective
        && minus == Classification::IntervalBijective;
    let lemma_lines = rs
        .iter()
        .filter(|r| r.name.ends_with("/dom-injective") || r.name.ends_with("/preimage-meet"))
        .count();
    Line {
        name: "lemma-suite",
        ok: fails.is_empty() && ok_class && lemma_lines > 0,
        detail: format!("lemma_checks={lemma_lines} scale(2)={s2} offset(1)={off} minus={minus} fail={}", fails.len()),
    }
}

fn idempotence(rs: &[CheckReport]) -> Line {
    let picked: Vec<&CheckReport> = rs
        .iter()
        .filter(|r| {
            (r.name.starts_with("theorems/mult/") || r.name.starts_with("theorems/reified_eq/"))
                && (r.name.ends_with("/idempotence") || r.name.ends_with("/subsumption") || r.name.ends_with("/status"))
        })
        .collect();
    let fam_ok = ["minus", "offset"]
        .iter()
        .all(|f| picked.iter().any(|r| r.name.contains(&format!("/{f}"))));
    let bad = picked.iter().filter(|r| r.verdict != Verdict::Pass).count();
    Line {
        name: "idempotence-subsumption",
        ok: !picked.is_empty() && fam_ok && bad == 0,
        detail: format!("checks={} non_pass={bad}", picked.len()),
    }
}

fn events(rs: &[CheckReport]) -> Line {
    let fails = failures(rs);
    let sets = rs.iter().filter(|r| r.name.ends_with("/event-set")).count();
    let engine = rs
        .iter()
        .find(|r| r.name == "events/engine/declared-vs-all-dmc")
        .map(|r| (r.verdict, r.instances));
    let ok = fails.is_empty() && sets > 0 && matches!(engine, Some((Verdict::Pass, n)) if n >= 1000);
    Line {
        name: "event-correctness",
        ok,
        detail: format!("event_set_checks={sets} engine={engine:?} fail={}", fails.len()),
    }
}

fn boolean() -> Line {
    let rs = check_boolean_identities().expect("boolean identities run");
    let bad: Vec<String> = failures(&rs);
    Line {
        name: "boolean-identities",
        ok: bad.is_empty() && rs.len() == 3,
        detail: rs.iter().map(|r| format!("{}:{}:{}", r.name, r.verdict, r.instances)).collect::<Vec<_>>().join(" "),
    }
}

fn decomposition() -> Line {
    let rs = check_catalog(SEED).expect("catalog runs");
    let pairs = rs.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let mut mismatched = Vec::new();
    let mut runs: Vec<(String, Model)> = (8..=12).map(|n| (format!("queens-{n}"), load("queens.mod", Some(n)))).collect();
    runs.push(("eq20".into(), load("eq20.mod", None)));
    runs.push(("alpha".into(), load("alpha.mod", None)));
    for (label, m) in &runs {
        let a = run_benchmark(label, m, PostMode::Derived, 1, 10_000_000).expect("derived run");
        let b = run_benchmark(label, m, PostMode::Decomposed, 1, 10_000_000).expect("decomposed run");
        if a.nodes != b.nodes || a.solutions != b.solutions {
            mismatched.push(format!("{label}:{}/{}", a.nodes, b.nodes));
        }
    }
    Line {
        name: "decomposition-equivalence",
        ok: pairs >= 5 && pairs == rs.len() && mismatched.is_empty(),
        detail: format!("pairs={pairs}/{} models={} node_mismatch={mismatched:?}", rs.len(), runs.len()),
    }
}

fn benchmark() -> Line {
    let t = Instant::now();
    let runs = [
        ("queens-100", load("queens.mod", Some(100))),
        ("eq20", load("eq20.mod", None)),
        ("alpha", load("alpha.mod", None)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, m) in &runs {
        let a = run_benchmark(label, m, PostMode::Derived, 11, 50_000_000).expect("derived run");
        let b = run_benchmark(label, m, PostMode::Decomposed, 11, 50_000_000).expect("decomposed run");
        let r = relative(&a, &b);
        ok &= r.time_pct >= 110.0 && r.space_pct > 100.0 && r.same_nodes;
        parts.push(format!("{label}:time={:.1}%,space={:.1}%,nodes={}", r.time_pct, r.space_pct, a.nodes));
    }
    let took = t.elapsed();
    ok &= took < Duration::from_secs(300);
    Line {
        name: "benchmark-direction",
        ok,
        detail: format!("{} seconds={:.1}", parts.join(" "), took.as_secs_f64()),
    }
}

fn determinism() -> Line {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fdviews"))
            .args(["check", "--suite", "all", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout;
    Line {
        name: "determinism",
        ok: same && a.status.success() && !a.stdout.is_empty(),
        detail: format!("bytes={} identical={same} exit={:?}", a.stdout.len(), a.status.code()),
    }
}

fn main() {
    let (th, th_t) = suite(Suite::Theorems);
    let (t1, _) = suite(Suite::Table1);
    let (le, _) = suite(Suite::Lemmas);
    let (ev, _) = suite(Suite::Events);
    let lines = vec![
        theorems(&th, th_t),
        table1(&t1),
        lemmas(&le),
        idempotence(&th),
        events(&ev),
        boolean(),
        decomposition(),
        benchmark(),
        determinism(),
    ];
    let mut failed = 0;
    for l in &lines {
        println!("{} {} {}", if l.ok { "PASS" } else { "FAIL" }, l.name, l.detail);
        failed += !l.ok as usize;
    }
    println!("{} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
