//! Set intersection and inclusion over lower/upper bound domains.

use crate::derive::{Access, Base};
use crate::domains::{PResult, Sort};
use crate::kernel::{EventMask, Level};

/// `x ∩ y = z`.
#[derive(Debug)]
pub struct SetIntersect;

impl Base for SetIntersect {
    fn name(&self) -> String {
        "intersect".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Set; 3]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::BC; 3]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        loop {
            let (lx, ux, ly, uy, lz, uz) = (a.lb(0), a.ub(0), a.lb(1), a.ub(1), a.lb(2), a.ub(2));
            let mut ch = false;
            for &v in lx.intersection(&ly) {
                ch |= a.include(2, v)?;
            }
            for &v in &uz {
                if !ux.contains(&v) || !uy.contains(&v) {
                    ch |= a.exclude(2, v)?;
                }
            }
            for &v in &lz {
                ch |= a.include(0, v)?;
                ch |= a.include(1, v)?;
            }
            for &v in &ly {
                if !uz.contains(&v) {
                    ch |= a.exclude(0, v)?;
                }
            }
            for &v in &lx {
                if !uz.contains(&v) {
                    ch |= a.exclude(1, v)?;
                }
            }
            if !ch {
                return Ok((0..3).all(|i| a.is_fixed(i)));
            }
        }
    }
}

/// `x ⊆ y`.
#[derive(Debug)]
pub struct Subset;

impl Base for Subset {
    fn name(&self) -> String {
        "subset".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Set; 2]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::LBC, EventMask::UBC]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        for v in a.lb(0) {
            a.include(1, v)?;
        }
        let uy = a.ub(1);
        for v in a.ub(0) {
            if !uy.contains(&v) {
                a.exclude(0, v)?;
            }
        }
        let ly = a.lb(1);
        Ok(a.ub(0).is_subset(&ly))
    }
}
