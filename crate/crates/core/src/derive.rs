//! Derived propagators `φ⁻ ∘ p ∘ φ`: a base propagator seen through a family
//! of views, with constant specialization and event-set translation.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::domains::{DomainStore, Failure, IntDomain, IntSet, PResult, Sort, Universe, Value, VarDomain, VarId};
use crate::error::{Error, Result};
use crate::kernel::{EventMask, Level, Propagator, PropagatorStatus};
use crate::relax::Relaxation;
use crate::views::{Map, Monotonicity, View};

/// A generic propagator over numbered parameter positions.
///
/// Implementations read and narrow positions only through [`Access`], so the
/// same code runs on plain variables, on views, and on constants.
pub trait Base: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    /// Sort of each parameter position.
    fn sorts(&self) -> Vec<Sort>;

    /// Events on each position that can make the propagator non-fixpoint.
    fn events(&self) -> Vec<EventMask>;

    fn level(&self) -> Level;

    /// Whether one call always reaches a fixpoint.
    fn idempotent(&self) -> bool;

    /// Exact real relaxation of the constraint, where one exists.
    fn relaxation(&self) -> Option<Relaxation> {
        None
    }

    /// Narrows the positions; returns `Ok(true)` when subsumed.
    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool>;
}

#[derive(Clone, Debug)]
pub(crate) enum Slot {
    Main(VarId, Map),
    Scratch(VarId),
}

static IDENTITY: Map = Map::Identity;

/// Per-call accessor that routes position reads and writes through views.
pub struct Access<'a> {
    main: &'a mut DomainStore,
    scratch: Option<&'a mut DomainStore>,
    slots: &'a [Slot],
    changed: bool,
}

#[inline]
fn ceil_div(a: i128, b: i128) -> i64 {
    Integer::div_ceil(&a, &b).clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

#[inline]
fn floor_div(a: i128, b: i128) -> i64 {
    Integer::div_floor(&a, &b).clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

impl<'a> Access<'a> {
    #[inline]
    fn at(&mut self, i: usize) -> (&mut DomainStore, VarId, &'a Map) {
        let slots: &'a [Slot] = self.slots;
        match &slots[i] {
            Slot::Main(x, m) => (&mut *self.main, *x, m),
            Slot::Scratch(s) => (self.scratch.as_deref_mut().expect("scratch store"), *s, &IDENTITY),
        }
    }

    #[inline]
    fn note(&mut self, r: PResult<bool>) -> PResult<bool> {
        if let Ok(true) = r {
            self.changed = true;
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    // ---- numeric positions --------------------------------------------

    #[inline]
    pub fn min(&mut self, i: usize) -> i64 {
        let (s, x, m) = self.at(i);
        match m {
            Map::Affine(a, o) if *a > 0 => s.min(x) * a + o,
            Map::Affine(a, o) => s.max(x) * a + o,
            _ => s.min(x),
        }
    }

    #[inline]
    pub fn max(&mut self, i: usize) -> i64 {
        let (s, x, m) = self.at(i);
        match m {
            Map::Affine(a, o) if *a > 0 => s.max(x) * a + o,
            Map::Affine(a, o) => s.min(x) * a + o,
            _ => s.max(x),
        }
    }

    pub fn size(&mut self, i: usize) -> u64 {
        let (s, x, _) = self.at(i);
        s.size(x)
    }

    pub fn is_fixed(&mut self, i: usize) -> bool {
        let (s, x, _) = self.at(i);
        s.get(x).is_fixed()
    }

    /// Value of a fixed numeric position.
    pub fn value(&mut self, i: usize) -> Option<i64> {
        if self.is_fixed(i) {
            Some(self.min(i))
        } else {
            None
        }
    }

    pub fn contains(&mut self, i: usize, v: i64) -> bool {
        let (s, x, m) = self.at(i);
        match m {
            Map::Affine(a, o) => {
                let d = v as i128 - *o as i128;
                d % (*a as i128) == 0 && s.contains(x, (d / *a as i128) as i64)
            }
            _ => s.contains(x, v),
        }
    }

    pub fn dom(&mut self, i: usize) -> IntDomain {
        let (s, x, m) = self.at(i);
        let d = s.int_domain(x);
        match m {
            Map::Affine(a, o) => d.map_affine(*a, *o).expect("view image checked when posted"),
            _ => d,
        }
    }

    pub fn adjust_min(&mut self, i: usize, v: i64) -> PResult<bool> {
        let (s, x, m) = self.at(i);
        let r = match m {
            Map::Affine(a, o) if *a > 0 => s.adjust_min(x, ceil_div(v as i128 - *o as i128, *a as i128)),
            Map::Affine(a, o) => s.adjust_max(x, floor_div(v as i128 - *o as i128, *a as i128)),
            _ => s.adjust_min(x, v),
        };
        self.note(r)
    }

    pub fn adjust_max(&mut self, i: usize, v: i64) -> PResult<bool> {
        let (s, x, m) = self.at(i);
        let r = match m {
            Map::Affine(a, o) if *a > 0 => s.adjust_max(x, floor_div(v as i128 - *o as i128, *a as i128)),
            Map::Affine(a, o) => s.adjust_min(x, ceil_div(v as i128 - *o as i128, *a as i128)),
            _ => s.adjust_max(x, v),
        };
        self.note(r)
    }

    pub fn remove(&mut self, i: usize, v: i64) -> PResult<bool> {
        let (s, x, m) = self.at(i);
        let r = match m {
            Map::Affine(a, o) => {
                let d = v as i128 - *o as i128;
                if d % (*a as i128) != 0 {
                    Ok(false)
                } else {
                    s.remove(x, (d / *a as i128) as i64)
                }
            }
            _ => s.remove(x, v),
        };
        self.note(r)
    }

    pub fn fix(&mut self, i: usize, v: i64) -> PResult<bool> {
        self.intersect(i, &IntDomain::singleton(v))
    }

    pub fn intersect(&mut self, i: usize, d: &IntDomain) -> PResult<bool> {
        let (s, x, m) = self.at(i);
        let r = match m {
            Map::Affine(a, o) => s.intersect(x, &d.preimage_affine(*a, *o)),
            _ => s.intersect(x, d),
        };
        self.note(r)
    }

    // ---- set positions ----------------------------------------------

    pub fn lb(&mut self, i: usize) -> IntSet {
        let (s, x, m) = self.at(i);
        let d = s.set_domain(x);
        match m {
            Map::Complement(u) => u.difference(d.ub()).copied().collect(),
            _ => d.lb().clone(),
        }
    }

    pub fn ub(&mut self, i: usize) -> IntSet {
        let (s, x, m) = self.at(i);
        let d = s.set_domain(x);
        match m {
            Map::Complement(u) => u.difference(d.lb()).copied().collect(),
            _ => d.ub().clone(),
        }
    }

    pub fn include(&mut self, i: usize, v: i64) -> PResult<bool> {
        let (s, x, m) = self.at(i);
        let r = match m {
            Map::Complement(u) if !u.contains(&v) => {
                s.fail();
                Err(Failure)
            }
            Map::Complement(_) => s.exclude(x, v),
            _ => s.include(x, v),
        };
        self.note(r)
    }

    pub fn exclude(&mut self, i: usize, v: i64) -> PResult<bool> {
        let (s, x, m) = self.at(i);
        let r = match m {
            Map::Complement(u) if !u.contains(&v) => Ok(false),
            Map::Complement(_) => s.include(x, v),
            _ => s.exclude(x, v),
        };
        self.note(r)
    }

    pub fn set_fixed(&mut self, i: usize) -> bool {
        self.is_fixed(i)
    }
}

/// One parameter of a derived propagator: a store variable seen through a
/// view, or a constant given as a value of the parameter's sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Var(VarId, View),
    Const(Value),
}

impl Binding {
    pub fn id(x: VarId) -> Binding {
        Binding::Var(x, View::identity(x.sort))
    }

    pub fn int(k: i64) -> Binding {
        Binding::Const(Value::Int(k))
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Var(x, v) if v.is_identity() => write!(f, "{x}"),
            Binding::Var(x, v) => write!(f, "{v} {x}"),
            Binding::Const(k) => write!(f, "{k}"),
        }
    }
}

/// A base propagator instantiated on a view family.
#[derive(Clone)]
pub struct Derived {
    base: Arc<dyn Base>,
    family: Vec<Binding>,
    slots: Vec<Slot>,
    scratch: Option<DomainStore>,
    subs: Vec<(VarId, EventMask)>,
    idempotent: bool,
    name: String,
}

impl fmt::Debug for Derived {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn value_fits(sort: Sort, v: &Value) -> bool {
    match (sort, v) {
        (Sort::Int, Value::Int(_)) | (Sort::Set, Value::Set(_)) => true,
        (Sort::Bool, Value::Int(b)) => (0..=1).contains(b),
        _ => false,
    }
}

/// Safe approximation of the events on a variable seen through `view`.
pub fn translate_mask(m: EventMask, view: &View) -> EventMask {
    let fix = m & EventMask::FIX;
    let rest = EventMask(m.0 & !EventMask::FIX.0);
    if rest.is_empty() {
        return fix;
    }
    fix | match view.monotonicity() {
        Monotonicity::Increasing => rest,
        Monotonicity::Decreasing => rest.swap_bounds(),
        Monotonicity::None => EventMask::DMC,
    }
}

/// Translates per-position base events to store-variable events.
pub fn translate_events(es: &[EventMask], family: &[Binding]) -> Vec<(VarId, EventMask)> {
    let mut out: Vec<(VarId, EventMask)> = Vec::new();
    for (m, b) in es.iter().zip(family) {
        if let Binding::Var(x, v) = b {
            let t = translate_mask(*m, v);
            match out.iter_mut().find(|e| e.0 == *x) {
                Some(e) => e.1 |= t,
                None => out.push((*x, t)),
            }
        }
    }
    out
}

impl Derived {
    /// Instantiates `base` on `family`, one binding per base position.
    pub fn new(base: Arc<dyn Base>, family: Vec<Binding>) -> Result<Derived> {
        let sorts = base.sorts();
        if sorts.len() != family.len() {
            return Err(Error::Usage(format!(
                "{} takes {} parameters, family has {}",
                base.name(),
                sorts.len(),
                family.len()
            )));
        }
        let mut slots = Vec::with_capacity(family.len());
        let mut scratch: Option<DomainStore> = None;
        let mut seen: Vec<VarId> = Vec::new();
        let mut has_const = false;
        let mut all_exact = true;
        for (i, (b, &sort)) in family.iter().zip(&sorts).enumerate() {
            match b {
                Binding::Var(x, v) => {
                    if v.source() != x.sort || v.target() != sort {
                        return Err(Error::Usage(format!(
                            "position {i} of {}: {v} maps {} to {}, variable {x} is {} and the position is {}",
                            base.name(),
                            v.source(),
                            v.target(),
                            x.sort,
                            sort
                        )));
                    }
                    if seen.contains(x) {
                        return Err(Error::Usage(format!("variable {x} is bound to two positions of {}", base.name())));
                    }
                    seen.push(*x);
                    all_exact &= v.is_exact();
                    match v.fused() {
                        Some(m) => slots.push(Slot::Main(*x, m)),
                        None => {
                            let s = scratch.get_or_insert_with(|| DomainStore::new(Universe::default()));
                            let id = s.add_var(VarDomain::empty(sort))?;
                            slots.push(Slot::Scratch(id));
                        }
                    }
                }
                Binding::Const(k) => {
                    if !value_fits(sort, k) {
                        return Err(Error::Usage(format!("constant {k} does not fit position {i} ({sort})")));
                    }
                    has_const = true;
                    let s = scratch.get_or_insert_with(|| DomainStore::new(Universe::default()));
                    let id = s.add_var(VarDomain::fixed(sort, k)?)?;
                    slots.push(Slot::Scratch(id));
                }
            }
        }
        let subs = translate_events(&base.events(), &family);
        let idempotent = base.idempotent() && !has_const && all_exact;
        let args: Vec<String> = family.iter().map(|b| b.to_string()).collect();
        let name = format!("{}({})", base.name(), args.join(", "));
        Ok(Derived {
            base,
            family,
            slots,
            scratch,
            subs,
            idempotent,
            name,
        })
    }

    /// Base propagator on plain variables.
    pub fn plain(base: Arc<dyn Base>, vars: &[VarId]) -> Result<Derived> {
        Self::new(base, vars.iter().map(|&x| Binding::id(x)).collect())
    }

    pub fn base(&self) -> &Arc<dyn Base> {
        &self.base
    }

    pub fn family(&self) -> &[Binding] {
        &self.family
    }

    /// Store variables in position order (constants skipped).
    pub fn params(&self) -> Vec<VarId> {
        self.family
            .iter()
            .filter_map(|b| match b {
                Binding::Var(x, _) => Some(*x),
                Binding::Const(_) => None,
            })
            .collect()
    }

    pub fn level(&self) -> Level {
        self.base.level()
    }

    pub fn has_constants(&self) -> bool {
        self.family.iter().any(|b| matches!(b, Binding::Const(_)))
    }

    /// Replaces the declared event set (for testing event-set checks).
    pub fn with_events(mut self, subs: Vec<(VarId, EventMask)>) -> Derived {
        self.subs = subs;
        self
    }

    /// Re-derives with `views[j]` on the j-th parameter, keeping the variables.
    pub fn with_views(&self, views: &[View]) -> Result<Derived> {
        let params = self.params();
        if views.len() != params.len() {
            return Err(Error::Usage(format!("{} views for {} parameters", views.len(), params.len())));
        }
        let outer: Vec<Binding> = params.into_iter().zip(views).map(|(x, v)| Binding::Var(x, v.clone())).collect();
        derive(self, &outer)
    }

    /// Checks that every view image of the current domains is representable.
    pub fn check_store(&self, store: &DomainStore) -> Result<()> {
        for b in &self.family {
            if let Binding::Var(x, v) = b {
                if x.idx() >= store.len() || store.var(x.idx()) != *x {
                    return Err(Error::Usage(format!("{} refers to unknown variable {x}", self.name)));
                }
                v.image_domain(store.get(*x), store.universe())?;
            }
        }
        Ok(())
    }

    pub fn into_dyn(self) -> Arc<dyn Propagator> {
        Arc::new(self)
    }

    /// Runs the base on the fused/scratch access path.
    fn run(&self, main: &mut DomainStore) -> PResult<(bool, bool)> {
        let mut scratch = self.scratch.clone();
        if let Some(s) = scratch.as_mut() {
            for (b, slot) in self.family.iter().zip(&self.slots) {
                if let (Binding::Var(x, v), Slot::Scratch(id)) = (b, slot) {
                    let img = v.image_domain(main.get(*x), main.universe()).expect("view image checked when posted");
                    s.reset_domain(*id, img);
                }
            }
            if s.is_failed() {
                return Err(Failure);
            }
        }
        let (subsumed, mut changed) = {
            let mut a = Access {
                main,
                scratch: scratch.as_mut(),
                slots: &self.slots,
                changed: false,
            };
            let sub = self.base.propagate(&mut a)?;
            (sub, a.changed)
        };
        if let Some(s) = scratch.as_ref() {
            if s.is_failed() {
                return Err(Failure);
            }
            for (b, slot) in self.family.iter().zip(&self.slots) {
                if let (Binding::Var(x, v), Slot::Scratch(id)) = (b, slot) {
                    changed |= main.restrict(*x, &v.preimage_domain(s.get(*id)))?;
                }
            }
        }
        Ok((subsumed, changed))
    }
}

impl Propagator for Derived {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn subscriptions(&self) -> &[(VarId, EventMask)] {
        &self.subs
    }

    fn is_idempotent(&self) -> bool {
        self.idempotent
    }

    fn propagate(&self, store: &mut DomainStore) -> PropagatorStatus {
        if store.is_failed() {
            return PropagatorStatus::Failed;
        }
        match self.run(store) {
            Err(Failure) => {
                store.fail();
                PropagatorStatus::Failed
            }
            Ok((true, _)) => PropagatorStatus::Subsumed,
            Ok((false, changed)) => {
                if !changed || self.idempotent {
                    PropagatorStatus::Fixpoint
                } else {
                    PropagatorStatus::Progress
                }
            }
        }
    }
}

/// `φ̂(p)`: binds the parameters of `p` (in [`Derived::params`] order) through
/// `family`. Views compose with the ones `p` already carries, so the result
/// wraps the original base exactly once.
pub fn derive(p: &Derived, family: &[Binding]) -> Result<Derived> {
    let nparams = p.family.iter().filter(|b| matches!(b, Binding::Var(..))).count();
    if family.len() != nparams {
        return Err(Error::Usage(format!(
            "{} has {nparams} parameters, family has {}",
            p.name,
            family.len()
        )));
    }
    let mut outer = family.iter();
    let mut out = Vec::with_capacity(p.family.len());
    for b in &p.family {
        match b {
            Binding::Const(k) => out.push(Binding::Const(k.clone())),
            Binding::Var(x, phi) => match outer.next().unwrap() {
                Binding::Var(y, psi) => {
                    if psi.target() != x.sort {
                        return Err(Error::Usage(format!("{psi} yields {}, parameter {x} is {}", psi.target(), x.sort)));
                    }
                    out.push(Binding::Var(*y, View::compose(phi, psi)?));
                }
                Binding::Const(k) => {
                    if !value_fits(x.sort, k) {
                        return Err(Error::Usage(format!("constant {k} does not fit parameter {x}")));
                    }
                    let img = phi
                        .map(k)
                        .ok_or_else(|| Error::Overflow(format!("{phi} is undefined on constant {k}")))?;
                    out.push(Binding::Const(img));
                }
            },
        }
    }
    Derived::new(p.base.clone(), out)
}
