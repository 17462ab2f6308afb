//! Catalog of generic propagators. Each constructor returns the base on plain
//! variables; variants (min, Σaᵢxᵢ, ≤-cardinality, union, membership, …) are
//! derived from these through views.

pub mod arith;
pub mod boolean;
pub mod distinct;
pub mod reified;
pub mod sets;

use std::sync::Arc;

use crate::derive::{Binding, Derived};
use crate::domains::{DomainStore, IntSet, Sort, Value, VarId};
use crate::error::{Error, Result};
use crate::views::View;

pub use arith::{IntEq, IntEqBounds, LinearEqDom, LinearEqUnit, LinearNeqUnit, MaxTernary, MultPpp};
pub use boolean::{BoolCardGeq, BoolEqv, BoolOrN};
pub use distinct::{DistinctDomain, DistinctWeak, ElementVals, NAIVE_DISTINCT_MAX};
pub use reified::ReifiedEq;
pub use sets::{SetIntersect, Subset};

fn nonempty(xs: &[VarId], what: &str) -> Result<()> {
    if xs.is_empty() {
        Err(Error::Usage(format!("{what} needs at least one variable")))
    } else {
        Ok(())
    }
}

fn views_on(p: &Derived, view: &View) -> Result<Derived> {
    let vs = vec![view.clone(); p.params().len()];
    p.with_views(&vs)
}

/// `max(x, y) = z`, bounds(Z) complete.
pub fn max_ternary(x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(MaxTernary), &[x, y, z])
}

/// `min(x, y) = z` as `max(−x, −y) = −z`.
pub fn min_ternary(x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    views_on(&max_ternary(x, y, z)?, &View::minus())
}

/// `Σ xᵢ = c`, bounds(Z) complete.
pub fn linear_eq_unit(xs: &[VarId], c: i64) -> Result<Derived> {
    nonempty(xs, "linear_eq_unit")?;
    Derived::plain(Arc::new(LinearEqUnit { n: xs.len(), c }), xs)
}

/// `Σ xᵢ = c`, domain complete, at most three terms.
pub fn linear_eq_unit_dom(xs: &[VarId], c: i64) -> Result<Derived> {
    nonempty(xs, "linear_eq_unit_dom")?;
    if xs.len() > 3 {
        return Err(Error::Usage("linear_eq_unit_dom supports at most 3 terms".into()));
    }
    Derived::plain(Arc::new(LinearEqDom { n: xs.len(), c }), xs)
}

/// `Σ xᵢ ≠ c`, domain complete.
pub fn linear_neq_unit(xs: &[VarId], c: i64) -> Result<Derived> {
    nonempty(xs, "linear_neq_unit")?;
    Derived::plain(Arc::new(LinearNeqUnit { n: xs.len(), c }), xs)
}

fn scale_views(terms: &[(i64, VarId)]) -> Result<Vec<View>> {
    terms.iter().map(|&(a, _)| View::scale(a)).collect()
}

/// `Σ aᵢxᵢ = c` as the unit-coefficient propagator on scale views.
pub fn linear_eq(terms: &[(i64, VarId)], c: i64) -> Result<Derived> {
    let xs: Vec<VarId> = terms.iter().map(|t| t.1).collect();
    linear_eq_unit(&xs, c)?.with_views(&scale_views(terms)?)
}

/// `Σ aᵢxᵢ ≠ c` on scale views.
pub fn linear_neq(terms: &[(i64, VarId)], c: i64) -> Result<Derived> {
    let xs: Vec<VarId> = terms.iter().map(|t| t.1).collect();
    linear_neq_unit(&xs, c)?.with_views(&scale_views(terms)?)
}

/// `Σ xᵢ ≥ c` on Booleans, domain complete.
pub fn bool_card_geq(xs: &[VarId], c: i64) -> Result<Derived> {
    if c < 0 || c > xs.len() as i64 {
        return Err(Error::Usage(format!("cardinality bound {c} outside 0..={}", xs.len())));
    }
    Derived::plain(Arc::new(BoolCardGeq { n: xs.len(), c }), xs)
}

/// `Σ xᵢ ≤ c` as `Σ ¬xᵢ ≥ n − c`.
pub fn bool_card_leq(xs: &[VarId], c: i64) -> Result<Derived> {
    let n = xs.len() as i64;
    if c < 0 || c > n {
        return Err(Error::Usage(format!("cardinality bound {c} outside 0..={n}")));
    }
    views_on(&bool_card_geq(xs, n - c)?, &View::bool_neg())
}

/// `x₁ ∨ … ∨ xₙ = y`, domain complete.
pub fn bool_or_n(xs: &[VarId], y: VarId) -> Result<Derived> {
    nonempty(xs, "bool_or_n")?;
    let mut vars = xs.to_vec();
    vars.push(y);
    Derived::plain(Arc::new(BoolOrN { n: xs.len() }), &vars)
}

/// `x₁ ∧ … ∧ xₙ = y` as `¬x₁ ∨ … ∨ ¬xₙ = ¬y`.
pub fn bool_and_n(xs: &[VarId], y: VarId) -> Result<Derived> {
    views_on(&bool_or_n(xs, y)?, &View::bool_neg())
}

/// `(x ↔ y) = z`, domain complete.
pub fn bool_eqv(x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(BoolEqv), &[x, y, z])
}

/// `x ⊕ y = z` as `(x ↔ y) = ¬z`.
pub fn bool_xor(x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    bool_eqv(x, y, z)?.with_views(&[View::identity(Sort::Bool), View::identity(Sort::Bool), View::bool_neg()])
}

/// `distinct(xᵢ)`: domain complete for up to [`NAIVE_DISTINCT_MAX`]
/// variables, fixed-value elimination (weak) beyond.
pub fn distinct(xs: &[VarId]) -> Result<Derived> {
    if xs.len() <= NAIVE_DISTINCT_MAX {
        distinct_domain(xs)
    } else {
        distinct_weak(xs)
    }
}

pub fn distinct_domain(xs: &[VarId]) -> Result<Derived> {
    Derived::plain(Arc::new(DistinctDomain { n: xs.len() }), xs)
}

pub fn distinct_weak(xs: &[VarId]) -> Result<Derived> {
    Derived::plain(Arc::new(DistinctWeak { n: xs.len() }), xs)
}

/// `distinct(cᵢ + xᵢ)` on offset views.
pub fn distinct_offset(terms: &[(i64, VarId)]) -> Result<Derived> {
    let xs: Vec<VarId> = terms.iter().map(|t| t.1).collect();
    let views: Vec<View> = terms.iter().map(|&(c, _)| View::offset(c)).collect();
    distinct(&xs)?.with_views(&views)
}

/// `element(⟨c₁, …, cₙ⟩, x) = y`, 1-based, domain complete.
pub fn element_vals(cs: &[i64], x: VarId, y: VarId) -> Result<Derived> {
    if cs.is_empty() {
        return Err(Error::Usage("element needs at least one value".into()));
    }
    Derived::plain(Arc::new(ElementVals { cs: cs.to_vec() }), &[x, y])
}

/// `x · y = z` for strictly positive operands, bounds(Z) complete.
pub fn mult_ppp(x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(MultPpp), &[x, y, z])
}

/// [`mult_ppp`] that rejects stores where an operand can be non-positive.
pub fn mult_ppp_checked(store: &DomainStore, x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    for v in [x, y, z] {
        if v.sort != Sort::Int || store.min(v) < 1 {
            return Err(Error::Usage(format!("mult_ppp needs strictly positive {v}, domain {}", store.get(v))));
        }
    }
    mult_ppp(x, y, z)
}

/// `x ∩ y = z`.
pub fn set_intersect(x: VarId, y: VarId, z: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(SetIntersect), &[x, y, z])
}

/// `x ∪ y = z` as `(U∖x) ∩ (U∖y) = U∖z`.
pub fn set_union(x: VarId, y: VarId, z: VarId, universe: &IntSet) -> Result<Derived> {
    views_on(&set_intersect(x, y, z)?, &View::complement(universe.clone()))
}

/// `x ∩ y = ∅` by the constant empty set on the result position.
pub fn set_disjoint(x: VarId, y: VarId) -> Result<Derived> {
    Derived::new(
        Arc::new(SetIntersect),
        vec![Binding::id(x), Binding::id(y), Binding::Const(Value::Set(IntSet::new()))],
    )
}

/// `x ⊆ y`.
pub fn subset(x: VarId, y: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(Subset), &[x, y])
}

/// `x ∈ y` as `{x} ⊆ y` through a singleton view.
pub fn member(x: VarId, y: VarId) -> Result<Derived> {
    Derived::new(Arc::new(Subset), vec![Binding::Var(x, View::singleton()), Binding::id(y)])
}

/// `(x = y) ↔ b`, domain complete.
pub fn reified_eq(x: VarId, y: VarId, b: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(ReifiedEq), &[x, y, b])
}

/// `(x ≠ y) ↔ b` via a negation view on `b`.
pub fn reified_neq(x: VarId, y: VarId, b: VarId) -> Result<Derived> {
    reified_eq(x, y, b)?.with_views(&[View::identity(Sort::Int), View::identity(Sort::Int), View::bool_neg()])
}

/// `x = y`, domain complete.
pub fn int_eq(x: VarId, y: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(IntEq), &[x, y])
}

/// `x = y`, bounds(D) complete.
pub fn int_eq_bounds(x: VarId, y: VarId) -> Result<Derived> {
    Derived::plain(Arc::new(IntEqBounds), &[x, y])
}
