//! Pairwise distinctness and the integer element constraint.

use crate::derive::{Access, Base};
use crate::domains::{Failure, IntDomain, PResult, Sort};
use crate::kernel::{EventMask, Level};

/// Largest arity for which [`DistinctDomain`] is offered by default.
pub const NAIVE_DISTINCT_MAX: usize = 6;

/// `distinct(x₁, …, xₙ)` keeping exactly the values that extend to a
/// solution, found by exhaustive search. Only meant for small `n`.
#[derive(Debug)]
pub struct DistinctDomain {
    pub n: usize,
}

fn extend(doms: &[IntDomain], used: &mut Vec<i64>, k: usize) -> bool {
    if k == doms.len() {
        return true;
    }
    for v in doms[k].iter() {
        if !used.contains(&v) {
            used.push(v);
            let ok = extend(doms, used, k + 1);
            used.pop();
            if ok {
                return true;
            }
        }
    }
    false
}

impl Base for DistinctDomain {
    fn name(&self) -> String {
        "distinct_dom".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; self.n]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::DMC; self.n]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let doms: Vec<IntDomain> = (0..self.n).map(|i| a.dom(i)).collect();
        let mut keep: Vec<Vec<i64>> = vec![Vec::new(); self.n];
        for i in 0..self.n {
            let others: Vec<IntDomain> = doms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, d)| d.clone())
                .collect();
            for v in doms[i].iter() {
                let mut used = vec![v];
                if extend(&others, &mut used, 0) {
                    keep[i].push(v);
                }
            }
        }
        for (i, k) in keep.into_iter().enumerate() {
            a.intersect(i, &IntDomain::from_values(k))?;
        }
        Ok((0..self.n).all(|i| a.is_fixed(i)))
    }
}

/// `distinct(x₁, …, xₙ)` by removing fixed values from the other variables.
#[derive(Debug)]
pub struct DistinctWeak {
    pub n: usize,
}

impl Base for DistinctWeak {
    fn name(&self) -> String {
        "distinct".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; self.n]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::FIX; self.n]
    }
    fn level(&self) -> Level {
        Level::Weak
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        loop {
            let mut fixed: Vec<i64> = (0..self.n).filter_map(|i| a.value(i)).collect();
            if fixed.len() == self.n {
                fixed.sort_unstable();
                return if fixed.windows(2).any(|w| w[0] == w[1]) { Err(Failure) } else { Ok(true) };
            }
            if fixed.is_empty() {
                return Ok(false);
            }
            fixed.sort_unstable();
            if fixed.windows(2).any(|w| w[0] == w[1]) {
                return Err(Failure);
            }
            // complement of the fixed values within the span of all positions
            let span_lo = (0..self.n).map(|i| a.min(i)).min().unwrap_or(0);
            let span_hi = (0..self.n).map(|i| a.max(i)).max().unwrap_or(0);
            let mut gaps = Vec::with_capacity(fixed.len() + 1);
            let mut lo = span_lo;
            for &v in &fixed {
                if v > lo {
                    gaps.push((lo, v - 1));
                }
                lo = v + 1;
            }
            if lo <= span_hi {
                gaps.push((lo, span_hi));
            }
            let free = IntDomain::from_ranges(gaps);
            let mut now = 0;
            for j in 0..self.n {
                if !a.is_fixed(j) {
                    a.intersect(j, &free)?;
                    now += a.is_fixed(j) as usize;
                }
            }
            if now == 0 {
                return Ok(false);
            }
        }
    }
}

/// `element(⟨c₁, …, cₙ⟩, x) = y` with 1-based `x`.
#[derive(Debug)]
pub struct ElementVals {
    pub cs: Vec<i64>,
}

impl Base for ElementVals {
    fn name(&self) -> String {
        let cs: Vec<String> = self.cs.iter().map(|c| c.to_string()).collect();
        format!("element[{}]", cs.join(","))
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; 2]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::DMC; 2]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let dy = a.dom(1);
        let idx = IntDomain::from_values(
            self.cs
                .iter()
                .enumerate()
                .filter(|(_, c)| dy.contains(**c))
                .map(|(i, _)| i as i64 + 1),
        );
        if idx.is_empty() {
            return Err(Failure);
        }
        a.intersect(0, &idx)?;
        let dx = a.dom(0);
        let vals = IntDomain::from_values(dx.iter().map(|i| self.cs[(i - 1) as usize]));
        a.intersect(1, &vals)?;
        Ok(a.is_fixed(0))
    }
}
