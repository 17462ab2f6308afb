//! Derived against decomposed propagation on a model: wall time, a space
//! proxy, propagator executions and search nodes.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Outcome;
use crate::model::{Model, PostMode};
use crate::search::{solve, SearchOptions, SearchStats};

/// Measurements of one model in one mode.
#[derive(Debug, Clone, Serialize)]
pub struct Metrics {
    pub model: String,
    pub mode: String,
    pub reps: usize,
    /// Median wall time over the measured reps, in milliseconds.
    pub time_ms: f64,
    pub times_ms: Vec<f64>,
    pub variables: usize,
    pub propagators: usize,
    /// Domain cells of the initial store.
    pub cells: usize,
    /// `cells + propagators`.
    pub space: usize,
    pub executions: u64,
    pub nodes: u64,
    pub failures: u64,
    pub solutions: u64,
    pub outcome: String,
}

/// Decomposed over derived, in percent.
#[derive(Debug, Clone, Serialize)]
pub struct Relative {
    pub model: String,
    pub time_pct: f64,
    pub space_pct: f64,
    pub same_nodes: bool,
}

pub const CSV_HEADER: &str =
    "model,mode,reps,time_ms,variables,propagators,cells,space,executions,nodes,failures,solutions,outcome";

impl Metrics {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.3},{},{},{},{},{},{},{},{},{}",
            self.model,
            self.mode,
            self.reps,
            self.time_ms,
            self.variables,
            self.propagators,
            self.cells,
            self.space,
            self.executions,
            self.nodes,
            self.failures,
            self.solutions,
            self.outcome
        )
    }
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Runs `reps` measured repetitions after one discarded warmup.
pub fn run_benchmark(label: &str, model: &Model, mode: PostMode, reps: usize, max_nodes: u64) -> Result<Metrics> {
    if reps == 0 {
        return Err(Error::Usage("reps must be at least 1".into()));
    }
    let opts = SearchOptions {
        mode: model.solve,
        keep: 0,
        max_nodes,
    };
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for rep in 0..=reps {
        let start = Instant::now();
        let posted = model.post(mode)?;
        let r = solve(&posted, opts)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        if rep > 0 {
            times.push(ms);
        }
        last = Some((posted.store.len(), posted.propagators.len(), posted.store.cells(), r));
    }
    let (variables, propagators, cells, r) = last.expect("at least one rep");
    let SearchStats {
        nodes,
        failures,
        solutions,
        ..
    } = r.stats;
    Ok(Metrics {
        model: label.to_string(),
        mode: mode.to_string(),
        reps,
        time_ms: median(&times),
        times_ms: times,
        variables,
        propagators,
        cells,
        space: cells + propagators,
        executions: r.engine.executions,
        nodes,
        failures,
        solutions,
        outcome: match r.root_outcome {
            Outcome::Stable => "stable".into(),
            Outcome::Failed => "failed".into(),
        },
    })
}

pub fn relative(derived: &Metrics, decomposed: &Metrics) -> Relative {
    Relative {
        model: derived.model.clone(),
        time_pct: decomposed.time_ms / derived.time_ms * 100.0,
        space_pct: decomposed.space as f64 / derived.space as f64 * 100.0,
        same_nodes: derived.nodes == decomposed.nodes && derived.solutions == decomposed.solutions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn decomposed_queens_is_larger() {
        let m = Model::parse("gen queens 6\nsolve first\n").unwrap();
        let a = run_benchmark("q6", &m, PostMode::Derived, 1, 10_000).unwrap();
        let b = run_benchmark("q6", &m, PostMode::Decomposed, 1, 10_000).unwrap();
        assert_eq!(b.variables, a.variables + 18);
        assert_eq!(b.propagators, a.propagators + 18);
        assert!(relative(&a, &b).same_nodes);
        assert!(relative(&a, &b).space_pct > 100.0);
    }
}
