//! `fdviews`: oracle suites, benchmarks and model runs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fdviews::bench::{relative, run_benchmark, Metrics, CSV_HEADER};
use fdviews::kernel::Outcome;
use fdviews::model::{Model, PostMode, SolveMode};
use fdviews::oracle::{run_suite, Suite, SuiteReport, DEFAULT_BUDGET};
use fdviews::search::{solve, SearchOptions};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fdviews", version, about = "View-derived propagators: oracle checks and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Derived,
    Decomposed,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run an oracle suite.
    Check {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stores checked per property before sampling takes over.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Benchmark a model with derived propagators, their decomposition, or both.
    Bench {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long, default_value_t = 11)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Size for `gen` directives.
        #[arg(long)]
        n: Option<usize>,
        /// Search node limit.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate and search a model, printing its solutions.
    ModelRun {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Derived)]
        mode: Mode,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: fdviews::Error| e.to_string())
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<fdviews::Error> for Fail {
    fn from(e: fdviews::Error) -> Fail {
        match e {
            fdviews::Error::Usage(_) => Fail(2, e.to_string()),
            _ => Fail(1, e.to_string()),
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, n: Option<usize>) -> Result<Model, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(1, format!("{}: {e}", path.display())))?;
    Model::parse_with_size(&text, n).map_err(|e| Fail(1, format!("{}: {e}", path.display())))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn suite_csv(r: &SuiteReport) -> String {
    let mut s = String::from("name,verdict,instances,mode,note\n");
    for c in &r.reports {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&c.name),
            c.verdict,
            c.instances,
            c.mode,
            csv_field(c.note.as_deref().unwrap_or(""))
        ));
    }
    s
}

fn check(suite: Suite, seed: u64, budget: u64, format: Format, out: &Option<PathBuf>) -> Result<bool, Fail> {
    let report = run_suite(suite, seed, budget)?;
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
        Format::Csv => suite_csv(&report),
    };
    emit(out, &text)?;
    Ok(report.passed())
}

fn modes(m: Mode) -> Vec<PostMode> {
    match m {
        Mode::Derived => vec![PostMode::Derived],
        Mode::Decomposed => vec![PostMode::Decomposed],
        Mode::Both => vec![PostMode::Derived, PostMode::Decomposed],
    }
}

fn metrics_text(m: &Metrics) -> String {
    format!(
        "BENCH model={} mode={} reps={} time_ms={:.3} variables={} propagators={} cells={} space={} executions={} nodes={} failures={} solutions={}\n",
        m.model, m.mode, m.reps, m.time_ms, m.variables, m.propagators, m.cells, m.space, m.executions, m.nodes, m.failures, m.solutions
    )
}

#[allow(clippy::too_many_arguments)]
fn bench(path: &Path, mode: Mode, reps: usize, format: Format, n: Option<usize>, budget: u64, out: &Option<PathBuf>) -> Result<(), Fail> {
    let model = load(path, n)?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let label = match n {
        Some(n) => format!("{stem}-{n}"),
        None => stem,
    };
    let ms: Vec<Metrics> = modes(mode)
        .into_iter()
        .map(|m| run_benchmark(&label, &model, m, reps, budget))
        .collect::<Result<_, _>>()?;
    let rel = (ms.len() == 2).then(|| relative(&ms[0], &ms[1]));
    let text = match format {
        Format::Text => {
            let mut s: String = ms.iter().map(metrics_text).collect();
            if let Some(r) = &rel {
                s.push_str(&format!(
                    "RELATIVE model={} time_pct={:.2} space_pct={:.2} same_nodes={}\n",
                    r.model, r.time_pct, r.space_pct, r.same_nodes
                ));
            }
            s
        }
        Format::Json => {
            let mut v = json!({ "model": label, "runs": ms });
            if let Some(r) = &rel {
                v["relative"] = json!(r);
            }
            serde_json::to_string_pretty(&v).expect("metrics serialize") + "\n"
        }
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for m in &ms {
                s.push_str(&m.csv_row());
                s.push('\n');
            }
            s
        }
    };
    emit(out, &text)
}

fn model_run(path: &Path, mode: Mode, n: Option<usize>, budget: u64, format: Format, out: &Option<PathBuf>) -> Result<(), Fail> {
    let model = load(path, n)?;
    let post = match mode {
        Mode::Derived => PostMode::Derived,
        Mode::Decomposed => PostMode::Decomposed,
        Mode::Both => return Err(Fail(2, "model-run takes --mode derived or decomposed".into())),
    };
    let posted = model.post(post)?;
    let keep = match model.solve {
        SolveMode::All => usize::MAX,
        _ => 1,
    };
    let r = solve(
        &posted,
        SearchOptions {
            mode: model.solve,
            keep,
            max_nodes: budget,
        },
    )?;
    let text = match format {
        Format::Json => {
            let sols: Vec<String> = r.solutions.iter().map(|s| model.format_solution(s)).collect();
            let v = json!({
                "solve": model.solve.to_string(),
                "root": if r.root_outcome == Outcome::Failed { "failed" } else { "stable" },
                "solutions": sols,
                "stats": r.stats,
            });
            serde_json::to_string_pretty(&v).expect("result serializes") + "\n"
        }
        _ => {
            let mut s = String::new();
            if model.solve == SolveMode::None {
                if r.root_outcome == Outcome::Failed {
                    s.push_str("UNSAT\n");
                } else {
                    s.push_str(&format!("FIXPOINT {}\n", model.format_solution(&r.root)));
                }
            } else {
                for sol in &r.solutions {
                    s.push_str(&format!("SOLUTION {}\n", model.format_solution(sol)));
                }
                if r.stats.solutions == 0 {
                    s.push_str("UNSAT\n");
                }
            }
            s.push_str(&format!(
                "STATS solutions={} nodes={} failures={} depth={}\n",
                r.stats.solutions, r.stats.nodes, r.stats.failures, r.stats.depth
            ));
            s
        }
    };
    emit(out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Check {
            suite,
            seed,
            budget,
            format,
            out,
        } => check(suite, seed, budget, format, &out).map(|ok| if ok { 0 } else { 1 }),
        Command::Bench {
            model,
            mode,
            reps,
            format,
            n,
            budget,
            seed: _,
            out,
        } => bench(&model, mode, reps, format, n, budget, &out).map(|_| 0),
        Command::ModelRun {
            model,
            mode,
            n,
            budget,
            format,
            out,
        } => model_run(&model, mode, n, budget, format, &out).map(|_| 0),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
