//! Reified integer equality.

use crate::derive::{Access, Base};
use crate::domains::{PResult, Sort};
use crate::kernel::{EventMask, Level};

/// `(x = y) ↔ b`.
#[derive(Debug)]
pub struct ReifiedEq;

impl Base for ReifiedEq {
    fn name(&self) -> String {
        "reif_eq".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int, Sort::Int, Sort::Bool]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::DMC, EventMask::DMC, EventMask::FIX]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        match a.value(2) {
            Some(1) => {
                let dy = a.dom(1);
                a.intersect(0, &dy)?;
                let dx = a.dom(0);
                a.intersect(1, &dx)?;
                Ok(a.is_fixed(0))
            }
            Some(_) => {
                for _ in 0..2 {
                    if let Some(v) = a.value(0) {
                        a.remove(1, v)?;
                    }
                    if let Some(v) = a.value(1) {
                        a.remove(0, v)?;
                    }
                }
                Ok(a.dom(0).intersect(&a.dom(1)).is_empty())
            }
            None => {
                let dx = a.dom(0);
                let dy = a.dom(1);
                if dx.intersect(&dy).is_empty() {
                    a.fix(2, 0)?;
                    Ok(true)
                } else if dx.is_fixed() && dx == dy {
                    a.fix(2, 1)?;
                    Ok(true)
                } else {
                    Ok(false)
                }
            }
        }
    }
}
