//! Depth-first search: branch on the original variable with the smallest
//! domain (lowest index on ties), left `x = min`, right `x ≠ min`. Set
//! variables branch on their smallest undecided element, included first.

use crate::domains::{DomainStore, Sort, VarId};
use crate::error::{Error, Result};
use crate::kernel::{Engine, Outcome, Stats};
use crate::model::{Posted, SolveMode};

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub failures: u64,
    pub solutions: u64,
    pub depth: u64,
}

pub struct SearchResult {
    pub stats: SearchStats,
    pub engine: Stats,
    /// Solutions restricted to the original variables, up to the kept limit.
    pub solutions: Vec<DomainStore>,
    /// Root fixpoint, restricted to the original variables.
    pub root: DomainStore,
    pub root_outcome: Outcome,
}

/// Options for [`solve`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub mode: SolveMode,
    /// Solutions kept in the result; all are counted.
    pub keep: usize,
    /// Node budget; exceeding it is an error.
    pub max_nodes: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SolveMode::First,
            keep: 1,
            max_nodes: u64::MAX,
        }
    }
}

/// Smallest non-fixed domain among the first `n` variables.
pub fn select(store: &DomainStore, n: usize) -> Option<VarId> {
    let mut best: Option<(u64, VarId)> = None;
    for x in store.vars().take(n) {
        let s = store.size(x);
        if s > 1 && best.is_none_or(|(b, _)| s < b) {
            best = Some((s, x));
        }
    }
    best.map(|b| b.1)
}

struct Dfs {
    engine: Engine,
    original: usize,
    opts: SearchOptions,
    stats: SearchStats,
    solutions: Vec<DomainStore>,
}

impl Dfs {
    /// Explores below a propagated store; returns true to stop.
    fn node(&mut self, store: DomainStore, depth: u64) -> Result<bool> {
        self.stats.nodes += 1;
        self.stats.depth = self.stats.depth.max(depth);
        if self.stats.nodes > self.opts.max_nodes {
            return Err(Error::CapExceeded {
                estimate: self.stats.nodes,
                cap: self.opts.max_nodes,
            });
        }
        let Some(x) = select(&store, self.original) else {
            self.stats.solutions += 1;
            if self.solutions.len() < self.opts.keep {
                self.solutions.push(crate::decompose::project(&store, self.original));
            }
            return Ok(self.opts.mode == SolveMode::First);
        };
        // integers: x = v | x ≠ v; sets: v ∈ x | v ∉ x
        let v = if x.sort == Sort::Set {
            let d = store.set_domain(x);
            *d.ub().difference(d.lb()).next().expect("unfixed set has an undecided element")
        } else {
            store.min(x)
        };
        let saved = self.engine.subsumed().to_vec();
        for left in [true, false] {
            let mut s = store.clone();
            s.clear_changes();
            let ok = match (x.sort, left) {
                (Sort::Set, true) => s.include(x, v),
                (Sort::Set, false) => s.exclude(x, v),
                (_, true) => s.fix(x, v),
                (_, false) => s.remove(x, v),
            };
            let o = if ok.is_err() {
                Outcome::Failed
            } else {
                self.engine.resume(&mut s)?
            };
            if o == Outcome::Failed {
                self.stats.nodes += 1;
                self.stats.failures += 1;
            } else if self.node(s, depth + 1)? {
                return Ok(true);
            }
            self.engine.restore_subsumed(&saved);
        }
        Ok(false)
    }
}

/// Propagates `posted` and, unless the mode is `none`, searches it.
pub fn solve(posted: &Posted, opts: SearchOptions) -> Result<SearchResult> {
    let mut engine = Engine::new(posted.propagators.clone());
    let mut store = posted.store.clone();
    let root_outcome = engine.run(&mut store)?;
    let root = crate::decompose::project(&store, posted.original);
    let mut dfs = Dfs {
        engine,
        original: posted.original,
        opts,
        stats: SearchStats::default(),
        solutions: Vec::new(),
    };
    if root_outcome == Outcome::Failed {
        dfs.stats.nodes = 1;
        dfs.stats.failures = 1;
    } else if opts.mode != SolveMode::None {
        dfs.node(store, 0)?;
    } else {
        dfs.stats.nodes = 1;
    }
    Ok(SearchResult {
        stats: dfs.stats,
        engine: dfs.engine.stats,
        solutions: dfs.solutions,
        root,
        root_outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Model, PostMode};

    fn count(text: &str, mode: PostMode) -> SearchStats {
        let m = Model::parse(text).unwrap();
        let p = m.post(mode).unwrap();
        solve(
            &p,
            SearchOptions {
                mode: m.solve,
                keep: 0,
                max_nodes: 1_000_000,
            },
        )
        .unwrap()
        .stats
    }

    #[test]
    fn queens_solution_counts() {
        for (n, sols) in [(4, 2), (5, 10), (6, 4), (8, 92)] {
            let text = format!("gen queens {n}\nsolve all\n");
            let a = count(&text, PostMode::Derived);
            let b = count(&text, PostMode::Decomposed);
            assert_eq!(a.solutions, sols);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn inconsistent_root_counts_one_failed_node() {
        let s = count("var int x 0 1\ncon linear 5 1*x eq\nsolve all\n", PostMode::Derived);
        assert_eq!((s.nodes, s.failures, s.solutions), (1, 1, 0));
    }
}
