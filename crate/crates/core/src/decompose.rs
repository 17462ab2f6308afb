//! Decomposition of a derived propagator into fresh variables, one view
//! constraint per position, and the base propagator renamed to the fresh
//! variables.

use std::sync::Arc;

use crate::derive::{Binding, Derived};
use crate::domains::{DomainStore, IntDomain, VarDomain, VarId};
use crate::error::Result;
use crate::kernel::{Engine, EventMask, Propagator, PropagatorStatus};
use crate::oracle::{encode_store, CheckReport, Mode, Space, Witness};
use crate::propagators as cat;
use crate::views::View;

/// The view constraint `φ(x) = y`.
pub struct ViewChannel {
    x: VarId,
    y: VarId,
    view: View,
    subs: [(VarId, EventMask); 2],
}

impl ViewChannel {
    pub fn new(x: VarId, view: View, y: VarId) -> ViewChannel {
        ViewChannel {
            x,
            y,
            view,
            subs: [(x, EventMask::DMC), (y, EventMask::DMC)],
        }
    }
}

impl Propagator for ViewChannel {
    fn name(&self) -> String {
        format!("{}({}) = {}", self.view, self.x, self.y)
    }

    fn subscriptions(&self) -> &[(VarId, EventMask)] {
        &self.subs
    }

    fn is_idempotent(&self) -> bool {
        self.view.is_exact()
    }

    fn propagate(&self, store: &mut DomainStore) -> PropagatorStatus {
        let img = match self.view.image_domain(store.get(self.x), store.universe()) {
            Ok(d) => d,
            Err(_) => {
                store.fail();
                return PropagatorStatus::Failed;
            }
        };
        let step = |store: &mut DomainStore| -> crate::domains::PResult<bool> {
            let a = store.restrict(self.y, &img)?;
            let pre = self.view.preimage_domain(store.get(self.y));
            let b = store.restrict(self.x, &pre)?;
            Ok(a | b)
        };
        match step(store) {
            Err(_) => PropagatorStatus::Failed,
            Ok(_) if store.get(self.x).is_fixed() && store.get(self.y).is_fixed() => PropagatorStatus::Subsumed,
            Ok(false) => PropagatorStatus::Fixpoint,
            Ok(true) if self.is_idempotent() => PropagatorStatus::Fixpoint,
            Ok(true) => PropagatorStatus::Progress,
        }
    }
}

/// A derived propagator rewritten over fresh variables.
pub struct DecompositionModel {
    pub store: DomainStore,
    /// Number of variables of the input store; fresh ones follow.
    pub original: usize,
    pub fresh: Vec<VarId>,
    pub channels: Vec<(VarId, VarId)>,
    pub propagators: Vec<Arc<dyn Propagator>>,
}

impl DecompositionModel {
    /// The store restricted to the original variables.
    pub fn project(&self, store: &DomainStore) -> DomainStore {
        project(store, self.original)
    }

    /// Whether the bipartite variable/constraint incidence graph is a forest.
    pub fn is_berge_acyclic(&self) -> bool {
        let nv = self.store.len();
        let mut uf = UnionFind::new(nv + self.propagators.len());
        for (i, p) in self.propagators.iter().enumerate() {
            for x in p.vars() {
                if !uf.union(x.idx(), nv + i) {
                    return false;
                }
            }
        }
        true
    }
}

/// Restriction of a store to its first `n` variables.
pub fn project(store: &DomainStore, n: usize) -> DomainStore {
    let mut out = DomainStore::new(store.universe().clone());
    for d in store.domains().iter().take(n) {
        out.add_var(d.clone()).expect("domain fits its own universe");
    }
    if store.is_failed() {
        out.fail();
    }
    out.clear_changes();
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = a;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    /// Joins two classes; false when they were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Adds the decomposition of `p` to `store` and `out`; returns the fresh
/// variables in position order. Constants become fixed fresh variables.
pub fn decompose_into(
    p: &Derived,
    store: &mut DomainStore,
    out: &mut Vec<Arc<dyn Propagator>>,
    channels: &mut Vec<(VarId, VarId)>,
) -> Result<Vec<VarId>> {
    let sorts = p.base().sorts();
    let mut fresh = Vec::with_capacity(sorts.len());
    for (b, &sort) in p.family().iter().zip(&sorts) {
        match b {
            Binding::Var(x, v) => {
                let img = v.image_domain(store.get(*x), store.universe())?;
                let y = store.add_var(img)?;
                out.push(Arc::new(ViewChannel::new(*x, v.clone(), y)));
                channels.push((*x, y));
                fresh.push(y);
            }
            Binding::Const(k) => fresh.push(store.add_var(VarDomain::fixed(sort, k)?)?),
        }
    }
    out.push(Derived::plain(p.base().clone(), &fresh)?.into_dyn());
    store.clear_changes();
    Ok(fresh)
}

/// Decomposes a single derived propagator over `store`.
pub fn decompose(p: &Derived, store: &DomainStore) -> Result<DecompositionModel> {
    let mut s = store.clone();
    let mut props = Vec::new();
    let mut channels = Vec::new();
    let fresh = decompose_into(p, &mut s, &mut props, &mut channels)?;
    Ok(DecompositionModel {
        store: s,
        original: store.len(),
        fresh,
        channels,
        propagators: props,
    })
}

/// Compares the engine fixpoint of `p` with the projected fixpoint of its
/// decomposition on every store below `top`.
pub fn check_decomposition_equiv(p: &Derived, top: &DomainStore) -> Result<CheckReport> {
    let space = Space::new(top)?;
    let n = space.len();
    let model = decompose(p, top)?;
    if !model.is_berge_acyclic() {
        return Ok(CheckReport::fail("equivalence", n, Mode::Exhaustive, Witness::at(top))
            .with_note("decomposition graph has a cycle"));
    }
    for i in 0..n {
        let d = space.store(i);
        let mut a = d.clone();
        let oa = Engine::new(vec![p.clone().into_dyn()]).run(&mut a)?;
        let m = decompose(p, &d)?;
        let mut b = m.store.clone();
        let ob = Engine::new(m.propagators.clone()).run(&mut b)?;
        let pb = m.project(&b);
        if a != pb || oa != ob {
            return Ok(CheckReport::fail("equivalence", n, Mode::Exhaustive, Witness::with(&d, &a, &pb))
                .with_note(format!("decomposed store {}", encode_store(&b))));
        }
    }
    Ok(CheckReport::pass("equivalence", n, Mode::Exhaustive))
}

fn int_top(ranges: &[(i64, i64)]) -> Result<DomainStore> {
    let mut s = DomainStore::default();
    for &(l, h) in ranges {
        s.add_int(l, h)?;
    }
    Ok(s)
}

/// Representative (propagator, family) pairs checked for equivalence.
pub fn catalog_pairs() -> Result<Vec<(String, Derived, DomainStore)>> {
    use crate::domains::Sort;
    let mut out = Vec::new();

    let top = int_top(&[(0, 3); 3])?;
    let v: Vec<VarId> = top.vars().collect();
    out.push(("min".into(), cat::min_ternary(v[0], v[1], v[2])?, top.clone()));

    let top = int_top(&[(0, 4), (0, 4)])?;
    let eq = cat::int_eq(v[0], v[1])?.with_views(&[View::identity(Sort::Int), View::offset(1)])?;
    out.push(("x=y+1".into(), eq, top));

    let top = int_top(&[(-1, 2); 3])?;
    let lin = cat::linear_eq_unit(&v, 1)?.with_views(&[View::offset(1), View::minus(), View::identity(Sort::Int)])?;
    out.push(("linear-offset-minus".into(), lin, top));

    let top = int_top(&[(0, 2), (0, 2)])?;
    out.push(("2x+2y=5".into(), cat::linear_eq(&[(2, v[0]), (2, v[1])], 5)?, top));

    let top = int_top(&[(0, 3); 3])?;
    out.push((
        "distinct-offset".into(),
        cat::distinct_offset(&[(0, v[0]), (1, v[1]), (2, v[2])])?,
        top,
    ));

    let mut top = DomainStore::default();
    let b: Vec<VarId> = (0..3).map(|_| top.add_bool()).collect();
    out.push(("and".into(), cat::bool_and_n(&b[..2], b[2])?, top));

    let mut top = DomainStore::default();
    let u: crate::domains::IntSet = (0..3).collect();
    let s: Vec<VarId> = (0..3).map(|_| top.add_set(u.clone())).collect();
    out.push(("union".into(), cat::set_union(s[0], s[1], s[2], &u)?, top));

    let mut top = DomainStore::default();
    let x = top.add_var(VarDomain::Int(IntDomain::interval(0, 2)))?;
    let y = top.add_set((0..3).collect());
    out.push(("member".into(), cat::member(x, y)?, top));
    Ok(out)
}

/// Equivalence and acyclicity over [`catalog_pairs`].
pub fn check_catalog(_seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (label, p, top) in catalog_pairs()? {
        out.push(check_decomposition_equiv(&p, &top)?.named(format!("{label}/equivalence")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_equality_decomposes_into_three_propagators() {
        let top = int_top(&[(0, 4), (0, 4)]).unwrap();
        let (x, y) = (top.var(0), top.var(1));
        let p = cat::int_eq(x, y)
            .unwrap()
            .with_views(&[View::identity(crate::domains::Sort::Int), View::offset(1)])
            .unwrap();
        let m = decompose(&p, &top).unwrap();
        assert_eq!(m.store.len(), 4);
        assert_eq!(m.propagators.len(), 3);
        assert!(m.is_berge_acyclic());
        assert_eq!(m.store.int_domain(m.fresh[1]), IntDomain::interval(1, 5));
    }

    #[test]
    fn min_from_max_adds_three_channels() {
        let top = int_top(&[(0, 3); 3]).unwrap();
        let v: Vec<VarId> = top.vars().collect();
        let m = decompose(&cat::min_ternary(v[0], v[1], v[2]).unwrap(), &top).unwrap();
        assert_eq!(m.fresh.len(), 3);
        assert_eq!(m.channels.len(), 3);
        assert_eq!(m.propagators.len(), 4);
    }
}
