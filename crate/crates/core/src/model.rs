//! Line-oriented model files.
//!
//! ```text
//! var int <name> <lo> <hi>
//! var bool <name>
//! var set <name> of <lo>..<hi>
//! con linear <c> [<coef>*<name>]+ eq|neq
//! con distinct [<offset>+<name>]+
//! con max <x> <y> <z>
//! con element <label> idx <x> [+<o>] val <y> of <c1,...,cn>
//! con or [<name>]+ = <name>
//! con card geq|leq <c> [<name>]+
//! con intersect <x> <y> <z>
//! con member <intvar> <setvar>
//! gen queens <n>
//! solve none|all|first
//! ```
//!
//! Blank lines and text after `#` are ignored. `gen queens <n>` expands to
//! the three offset-distinct constraints of the n-queens problem over fresh
//! variables `q1..qn`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::decompose::decompose_into;
use crate::derive::Derived;
use crate::domains::{DomainStore, IntSet, Sort, VarId};
use crate::error::{Error, Result};
use crate::kernel::Propagator;
use crate::propagators as cat;
use crate::views::View;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    #[default]
    None,
    All,
    First,
}

impl FromStr for SolveMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(SolveMode::None),
            "all" => Ok(SolveMode::All),
            "first" => Ok(SolveMode::First),
            _ => Err(format!("unknown solve mode `{s}`")),
        }
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::None => "none",
            SolveMode::All => "all",
            SolveMode::First => "first",
        })
    }
}

/// How constraints with views are posted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostMode {
    /// One derived propagator per constraint.
    Derived,
    /// Fresh variables, one view constraint per position and the base.
    Decomposed,
}

impl FromStr for PostMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "derived" => Ok(PostMode::Derived),
            "decomposed" => Ok(PostMode::Decomposed),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl fmt::Display for PostMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PostMode::Derived => "derived",
            PostMode::Decomposed => "decomposed",
        })
    }
}

/// A parsed model: variables, constraints as derived propagators, solve mode.
#[derive(Clone, Default)]
pub struct Model {
    pub store: DomainStore,
    pub names: Vec<String>,
    pub constraints: Vec<Derived>,
    pub solve: SolveMode,
}

/// A model posted in one mode. Variables `0..original` are the model's.
pub struct Posted {
    pub store: DomainStore,
    pub propagators: Vec<Arc<dyn Propagator>>,
    pub original: usize,
}

impl Model {
    pub fn parse(text: &str) -> Result<Model> {
        Parser::default().run(text, None)
    }

    /// Parses with `gen` directives resized to `n`.
    pub fn parse_with_size(text: &str, n: Option<usize>) -> Result<Model> {
        Parser::default().run(text, n)
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| self.store.var(i))
    }

    pub fn post(&self, mode: PostMode) -> Result<Posted> {
        let mut store = self.store.clone();
        let mut propagators: Vec<Arc<dyn Propagator>> = Vec::new();
        match mode {
            PostMode::Derived => propagators.extend(self.constraints.iter().map(|p| p.clone().into_dyn())),
            PostMode::Decomposed => {
                let mut channels = Vec::new();
                for p in &self.constraints {
                    decompose_into(p, &mut store, &mut propagators, &mut channels)?;
                }
            }
        }
        store.clear_changes();
        Ok(Posted {
            store,
            propagators,
            original: self.store.len(),
        })
    }

    /// `name=value` pairs of an assigned store, in declaration order.
    pub fn format_solution(&self, store: &DomainStore) -> String {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let d = store.get(store.var(i));
                match d.value() {
                    Some(v) => format!("{n}={v}"),
                    None => format!("{n}={d}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Default)]
struct Parser {
    model: Model,
    index: HashMap<String, VarId>,
    solve_seen: bool,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn int(line: usize, s: &str) -> Result<i64> {
    s.parse().map_err(|_| perr(line, format!("expected an integer, found `{s}`")))
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Parser {
    fn run(mut self, text: &str, size: Option<usize>) -> Result<Model> {
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            match toks[0] {
                "var" => self.var(line, &toks[1..])?,
                "con" => {
                    let p = self.con(line, &toks[1..])?;
                    self.model.constraints.push(p);
                }
                "gen" => self.gen(line, &toks[1..], size)?,
                "solve" => {
                    if self.solve_seen {
                        return Err(perr(line, "duplicate solve line"));
                    }
                    if toks.len() != 2 {
                        return Err(perr(line, "expected `solve none|all|first`"));
                    }
                    self.model.solve = toks[1].parse().map_err(|e: String| perr(line, e))?;
                    self.solve_seen = true;
                }
                t => return Err(perr(line, format!("unknown directive `{t}`"))),
            }
        }
        self.model.store.clear_changes();
        Ok(self.model)
    }

    fn declare(&mut self, line: usize, name: &str, add: impl FnOnce(&mut DomainStore) -> Result<VarId>) -> Result<VarId> {
        if !valid_name(name) {
            return Err(perr(line, format!("invalid variable name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(perr(line, format!("variable `{name}` declared twice")));
        }
        let x = add(&mut self.model.store).map_err(|e| perr(line, e.to_string()))?;
        self.index.insert(name.to_string(), x);
        self.model.names.push(name.to_string());
        Ok(x)
    }

    fn var(&mut self, line: usize, t: &[&str]) -> Result<()> {
        match t {
            ["int", name, lo, hi] => {
                let (lo, hi) = (int(line, lo)?, int(line, hi)?);
                if lo > hi {
                    return Err(perr(line, format!("empty domain {lo}..{hi}")));
                }
                self.declare(line, name, |s| s.add_int(lo, hi))?;
            }
            ["bool", name] => {
                self.declare(line, name, |s| Ok(s.add_bool()))?;
            }
            ["set", name, "of", range] => {
                let (lo, hi) = range
                    .split_once("..")
                    .ok_or_else(|| perr(line, format!("expected <lo>..<hi>, found `{range}`")))?;
                let (lo, hi) = (int(line, lo)?, int(line, hi)?);
                let ub: IntSet = (lo..=hi).collect();
                self.declare(line, name, |s| Ok(s.add_set(ub)))?;
            }
            _ => return Err(perr(line, "expected `var int <name> <lo> <hi>`, `var bool <name>` or `var set <name> of <lo>..<hi>`")),
        }
        Ok(())
    }

    fn lookup(&self, line: usize, name: &str, sort: Sort) -> Result<VarId> {
        let x = *self
            .index
            .get(name)
            .ok_or_else(|| perr(line, format!("unknown variable `{name}`")))?;
        if x.sort != sort {
            return Err(perr(line, format!("`{name}` is {}, expected {sort}", x.sort)));
        }
        Ok(x)
    }

    fn lookups(&self, line: usize, names: &[&str], sort: Sort) -> Result<Vec<VarId>> {
        names.iter().map(|n| self.lookup(line, n, sort)).collect()
    }

    fn distinct_vars(line: usize, xs: &[VarId]) -> Result<()> {
        for (i, x) in xs.iter().enumerate() {
            if xs[..i].contains(x) {
                return Err(perr(line, format!("variable {x} occurs twice in one constraint")));
            }
        }
        Ok(())
    }

    fn con(&mut self, line: usize, t: &[&str]) -> Result<Derived> {
        let wrap = |r: Result<Derived>| r.map_err(|e| perr(line, e.to_string()));
        let Some((&kind, rest)) = t.split_first() else {
            return Err(perr(line, "missing constraint kind"));
        };
        match kind {
            "linear" => {
                if rest.len() < 3 {
                    return Err(perr(line, "expected `con linear <c> [<coef>*<name>]+ eq|neq`"));
                }
                let c = int(line, rest[0])?;
                let rel = rest[rest.len() - 1];
                let mut terms = Vec::new();
                for term in &rest[1..rest.len() - 1] {
                    let (a, name) = term
                        .split_once('*')
                        .ok_or_else(|| perr(line, format!("expected <coef>*<name>, found `{term}`")))?;
                    let a = int(line, a)?;
                    if a == 0 {
                        return Err(perr(line, format!("zero coefficient in `{term}`")));
                    }
                    terms.push((a, self.lookup(line, name, Sort::Int)?));
                }
                Self::distinct_vars(line, &terms.iter().map(|t| t.1).collect::<Vec<_>>())?;
                let unit = terms.iter().all(|t| t.0 == 1);
                let xs: Vec<VarId> = terms.iter().map(|t| t.1).collect();
                match (rel, unit) {
                    ("eq", true) => wrap(cat::linear_eq_unit(&xs, c)),
                    ("eq", false) => wrap(cat::linear_eq(&terms, c)),
                    ("neq", true) => wrap(cat::linear_neq_unit(&xs, c)),
                    ("neq", false) => wrap(cat::linear_neq(&terms, c)),
                    _ => Err(perr(line, format!("expected eq or neq, found `{rel}`"))),
                }
            }
            "distinct" => {
                if rest.is_empty() {
                    return Err(perr(line, "distinct needs at least one term"));
                }
                let mut terms = Vec::new();
                for term in rest {
                    let (o, name) = match term.rsplit_once('+') {
                        Some((o, name)) if !o.is_empty() => (int(line, o)?, name),
                        _ => (0, term.trim_start_matches('+')),
                    };
                    terms.push((o, self.lookup(line, name, Sort::Int)?));
                }
                Self::distinct_vars(line, &terms.iter().map(|t| t.1).collect::<Vec<_>>())?;
                if terms.iter().all(|t| t.0 == 0) {
                    wrap(cat::distinct(&terms.iter().map(|t| t.1).collect::<Vec<_>>()))
                } else {
                    wrap(cat::distinct_offset(&terms))
                }
            }
            "max" => match rest {
                [x, y, z] => {
                    let v = self.lookups(line, &[x, y, z], Sort::Int)?;
                    Self::distinct_vars(line, &v)?;
                    wrap(cat::max_ternary(v[0], v[1], v[2]))
                }
                _ => Err(perr(line, "expected `con max <x> <y> <z>`")),
            },
            "element" => self.element(line, rest),
            "or" => {
                let eq = rest
                    .iter()
                    .position(|&s| s == "=")
                    .ok_or_else(|| perr(line, "expected `con or [<name>]+ = <name>`"))?;
                if eq == 0 || eq + 2 != rest.len() {
                    return Err(perr(line, "expected `con or [<name>]+ = <name>`"));
                }
                let xs = self.lookups(line, &rest[..eq], Sort::Bool)?;
                let y = self.lookup(line, rest[eq + 1], Sort::Bool)?;
                let mut all = xs.clone();
                all.push(y);
                Self::distinct_vars(line, &all)?;
                wrap(cat::bool_or_n(&xs, y))
            }
            "card" => {
                if rest.len() < 3 {
                    return Err(perr(line, "expected `con card geq|leq <c> [<name>]+`"));
                }
                let c = int(line, rest[1])?;
                let xs = self.lookups(line, &rest[2..], Sort::Bool)?;
                Self::distinct_vars(line, &xs)?;
                match rest[0] {
                    "geq" => wrap(cat::bool_card_geq(&xs, c)),
                    "leq" => wrap(cat::bool_card_leq(&xs, c)),
                    r => Err(perr(line, format!("expected geq or leq, found `{r}`"))),
                }
            }
            "intersect" => match rest {
                [x, y, z] => {
                    let v = self.lookups(line, &[x, y, z], Sort::Set)?;
                    Self::distinct_vars(line, &v)?;
                    wrap(cat::set_intersect(v[0], v[1], v[2]))
                }
                _ => Err(perr(line, "expected `con intersect <x> <y> <z>`")),
            },
            "member" => match rest {
                [x, s] => {
                    let x = self.lookup(line, x, Sort::Int)?;
                    let s = self.lookup(line, s, Sort::Set)?;
                    wrap(cat::member(x, s))
                }
                _ => Err(perr(line, "expected `con member <intvar> <setvar>`")),
            },
            k => Err(perr(line, format!("unknown constraint `{k}`"))),
        }
    }

    fn element(&mut self, line: usize, t: &[&str]) -> Result<Derived> {
        let usage = || perr(line, "expected `con element <label> idx <x> [+<o>] val <y> of <c1,...,cn>`");
        let (x, o, rest) = match t {
            [_, "idx", x, o, "val", rest @ ..] if o.starts_with('+') || o.starts_with('-') => {
                (x, int(line, o.trim_start_matches('+'))?, rest)
            }
            [_, "idx", x, "val", rest @ ..] => (x, 0, rest),
            _ => return Err(usage()),
        };
        let (y, cs) = match rest {
            [y, "of", cs] => (y, cs),
            _ => return Err(usage()),
        };
        let cs: Vec<i64> = cs.split(',').map(|c| int(line, c.trim())).collect::<Result<_>>()?;
        let xv = self.lookup(line, x, Sort::Int)?;
        let yv = self.lookup(line, y, Sort::Int)?;
        Self::distinct_vars(line, &[xv, yv])?;
        let p = cat::element_vals(&cs, xv, yv).map_err(|e| perr(line, e.to_string()))?;
        if o == 0 {
            return Ok(p);
        }
        p.with_views(&[View::offset(o), View::identity(Sort::Int)])
            .map_err(|e| perr(line, e.to_string()))
    }

    fn gen(&mut self, line: usize, t: &[&str], size: Option<usize>) -> Result<()> {
        match t {
            ["queens", n] => {
                let n = match size {
                    Some(n) => n as i64,
                    None => int(line, n)?,
                };
                if n < 1 {
                    return Err(perr(line, "queens needs n >= 1"));
                }
                let qs: Vec<VarId> = (1..=n)
                    .map(|i| self.declare(line, &format!("q{i}"), |s| s.add_int(1, n)))
                    .collect::<Result<_>>()?;
                let up: Vec<(i64, VarId)> = qs.iter().enumerate().map(|(i, &q)| (i as i64, q)).collect();
                let down: Vec<(i64, VarId)> = qs.iter().enumerate().map(|(i, &q)| (-(i as i64), q)).collect();
                let wrap = |r: Result<Derived>| r.map_err(|e| perr(line, e.to_string()));
                self.model.constraints.push(wrap(cat::distinct(&qs))?);
                self.model.constraints.push(wrap(cat::distinct_offset(&up))?);
                self.model.constraints.push(wrap(cat::distinct_offset(&down))?);
                Ok(())
            }
            _ => Err(perr(line, "expected `gen queens <n>`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_directive() {
        let m = Model::parse(
            "var int x 0 3\nvar int y 0 3 # comment\nvar bool a\nvar bool b\nvar set s of 0..2\nvar set t of 0..2\nvar set u of 0..2\n\
             con linear 3 1*x 2*y eq\ncon distinct 0+x 1+y\ncon element e idx x +1 val y of 1,2,3,4\n\
             con or a = b\ncon card geq 1 a b\ncon intersect s t u\ncon member x s\nsolve first\n",
        )
        .unwrap();
        assert_eq!(m.store.len(), 7);
        assert_eq!(m.constraints.len(), 7);
        assert_eq!(m.solve, SolveMode::First);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Model::parse("var int x 0 3\n\ncon linear 1 1*z eq\n").err().unwrap();
        assert_eq!(e, perr(3, "unknown variable `z`"));
        assert!(matches!(Model::parse("var int x 3 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Model::parse("var bool x\ncon max x x x"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn queens_generator_posts_three_distincts() {
        let m = Model::parse_with_size("gen queens 4\nsolve all\n", Some(6)).unwrap();
        assert_eq!(m.store.len(), 6);
        assert_eq!(m.constraints.len(), 3);
        let d = m.post(PostMode::Decomposed).unwrap();
        assert_eq!(d.store.len(), 6 + 18);
        assert_eq!(d.propagators.len(), 3 + 18);
    }
}
