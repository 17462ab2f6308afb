//! Boolean connectives and cardinality.

use crate::derive::{Access, Base};
use crate::domains::{Failure, PResult, Sort};
use crate::kernel::{EventMask, Level};

/// `Σ xᵢ ≥ c` on Booleans.
///
/// Scans for `c + 1` literals that can still be true, the stateless
/// counterpart of keeping `c + 1` watches; pruning happens only once fewer
/// than `c + 1` remain.
#[derive(Debug)]
pub struct BoolCardGeq {
    pub n: usize,
    pub c: i64,
}

impl Base for BoolCardGeq {
    fn name(&self) -> String {
        format!("card_geq[{}]", self.c)
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Bool; self.n]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::FIX; self.n]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        if self.c <= 0 {
            return Ok(true);
        }
        let c = self.c as usize;
        let mut watches = 0;
        let mut ones = 0;
        for i in 0..self.n {
            if a.max(i) == 1 {
                watches += 1;
                if a.min(i) == 1 {
                    ones += 1;
                }
                if watches > c {
                    return Ok(ones >= c);
                }
            }
        }
        if watches < c {
            return Err(Failure);
        }
        for i in 0..self.n {
            if a.max(i) == 1 {
                a.fix(i, 1)?;
            }
        }
        Ok(true)
    }
}

/// `x₁ ∨ … ∨ xₙ = y`; `y` is the last position.
#[derive(Debug)]
pub struct BoolOrN {
    pub n: usize,
}

impl Base for BoolOrN {
    fn name(&self) -> String {
        "or".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Bool; self.n + 1]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::FIX; self.n + 1]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let y = self.n;
        if a.max(y) == 0 {
            for i in 0..self.n {
                a.fix(i, 0)?;
            }
            return Ok(true);
        }
        let mut free = None;
        let mut nfree = 0;
        for i in 0..self.n {
            if a.min(i) == 1 {
                a.fix(y, 1)?;
                return Ok(true);
            }
            if a.max(i) == 1 {
                nfree += 1;
                free = Some(i);
            }
        }
        match free {
            None => {
                a.fix(y, 0)?;
                Ok(true)
            }
            Some(i) if nfree == 1 && a.min(y) == 1 => {
                a.fix(i, 1)?;
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}

/// `(x ↔ y) = z`.
#[derive(Debug)]
pub struct BoolEqv;

impl Base for BoolEqv {
    fn name(&self) -> String {
        "eqv".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Bool; 3]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::FIX; 3]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        match (a.value(0), a.value(1), a.value(2)) {
            (Some(x), Some(y), _) => {
                a.fix(2, (x == y) as i64)?;
                Ok(true)
            }
            (Some(x), None, Some(z)) => {
                a.fix(1, if z == 1 { x } else { 1 - x })?;
                Ok(true)
            }
            (None, Some(y), Some(z)) => {
                a.fix(0, if z == 1 { y } else { 1 - y })?;
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}
