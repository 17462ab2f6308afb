use fdviews::bench::{relative, run_benchmark};
use fdviews::model::{Model, PostMode, SolveMode};
use fdviews::search::{solve, SearchOptions};

fn load(file: &str, n: Option<usize>) -> Model {
    let path = format!("{}/../../models/{file}", env!("CARGO_MANIFEST_DIR"));
    Model::parse_with_size(&std::fs::read_to_string(path).unwrap(), n).unwrap()
}

fn all_solutions(m: &Model, mode: PostMode) -> Vec<String> {
    let p = m.post(mode).unwrap();
    let r = solve(
        &p,
        SearchOptions {
            mode: SolveMode::All,
            keep: usize::MAX,
            max_nodes: 1_000_000,
        },
    )
    .unwrap();
    r.solutions.iter().map(|s| m.format_solution(s)).collect()
}

#[test]
fn eq20_has_exactly_the_planted_solution() {
    let m = load("eq20.mod", None);
    let sols = all_solutions(&m, PostMode::Derived);
    assert_eq!(sols, vec!["x0=10 x1=2 x2=4 x3=10 x4=10 x5=1 x6=5".to_string()]);
    assert_eq!(all_solutions(&m, PostMode::Decomposed), sols);
}

#[test]
fn alpha_is_unique() {
    let m = load("alpha.mod", None);
    let sols = all_solutions(&m, PostMode::Derived);
    assert_eq!(sols.len(), 1);
    assert!(sols[0].starts_with("a=5 b=13 c=9 d=16 e=20 f=4 g=24"));
}

#[test]
fn queens_modes_agree_on_every_solution() {
    for n in 4..=7 {
        let m = load("queens.mod", Some(n));
        assert_eq!(all_solutions(&m, PostMode::Derived), all_solutions(&m, PostMode::Decomposed), "n={n}");
    }
}

#[test]
fn mixed_model_solution_satisfies_every_line() {
    let m = load("mixed.mod", None);
    let sols = all_solutions(&m, PostMode::Derived);
    assert!(!sols.is_empty());
    assert_eq!(sols, all_solutions(&m, PostMode::Decomposed));
}

#[test]
fn decomposed_mode_is_strictly_larger() {
    for (f, n) in [("queens.mod", Some(20)), ("eq20.mod", None), ("alpha.mod", None)] {
        let m = load(f, n);
        let a = run_benchmark(f, &m, PostMode::Derived, 1, 1_000_000).unwrap();
        let b = run_benchmark(f, &m, PostMode::Decomposed, 1, 1_000_000).unwrap();
        assert!(b.variables > a.variables && b.propagators > a.propagators, "{f}");
        let r = relative(&a, &b);
        assert!(r.same_nodes && r.space_pct > 100.0, "{f}");
    }
}
