//! Propagator contract, events, and the event-driven fixpoint engine.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::{DomainStore, Footprint, VarDomain, VarId};
use crate::error::{Error, Result};

/// Set of event kinds on one variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EventMask(pub u8);

impl EventMask {
    pub const NONE: EventMask = EventMask(0);
    /// The variable became fixed.
    pub const FIX: EventMask = EventMask(1);
    /// The lower bound (set sort: the lower bound set) changed.
    pub const LBC: EventMask = EventMask(2);
    /// The upper bound (set sort: the upper bound set) changed.
    pub const UBC: EventMask = EventMask(4);
    /// Any change.
    pub const DMC: EventMask = EventMask(8);
    pub const BC: EventMask = EventMask(2 | 4);
    pub const ALL: EventMask = EventMask(15);

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, other: EventMask) -> bool {
        self.0 & other.0 == other.0
    }

    #[inline]
    pub fn intersects(self, other: EventMask) -> bool {
        self.0 & other.0 != 0
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// Swaps the lower- and upper-bound events, keeping fix and dmc.
    pub fn swap_bounds(self) -> EventMask {
        let mut m = self.0 & !(2 | 4);
        if self.0 & 2 != 0 {
            m |= 4;
        }
        if self.0 & 4 != 0 {
            m |= 2;
        }
        EventMask(m)
    }
}

impl std::ops::BitOr for EventMask {
    type Output = EventMask;
    fn bitor(self, rhs: EventMask) -> EventMask {
        EventMask(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for EventMask {
    fn bitor_assign(&mut self, rhs: EventMask) {
        self.0 |= rhs.0;
    }
}

impl std::ops::BitAnd for EventMask {
    type Output = EventMask;
    fn bitand(self, rhs: EventMask) -> EventMask {
        EventMask(self.0 & rhs.0)
    }
}

impl fmt::Debug for EventMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for EventMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [(1, "fix"), (2, "lbc"), (4, "ubc"), (8, "dmc")];
        let parts: Vec<&str> = names.iter().filter(|(b, _)| self.0 & b != 0).map(|(_, n)| *n).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Events caused by narrowing a domain whose shape before the change was `fp`.
pub(crate) fn events_from(fp: Footprint, now: &VarDomain) -> EventMask {
    if now.is_empty() {
        return EventMask::NONE;
    }
    let mut m = EventMask::NONE;
    match (fp, now) {
        (Footprint::Num { min, max, size }, _) => {
            let d = now.as_int_domain().expect("numeric domain");
            if d.size() != size {
                m |= EventMask::DMC;
                if d.min().unwrap() > min {
                    m |= EventMask::LBC;
                }
                if d.max().unwrap() < max {
                    m |= EventMask::UBC;
                }
                if d.size() == 1 {
                    m |= EventMask::FIX;
                }
            }
        }
        (Footprint::Set { lb, ub }, VarDomain::Set(s)) => {
            if s.lb().len() > lb {
                m |= EventMask::LBC | EventMask::DMC;
            }
            if s.ub().len() < ub {
                m |= EventMask::UBC | EventMask::DMC;
            }
            if !m.is_empty() && s.is_fixed() {
                m |= EventMask::FIX;
            }
        }
        _ => unreachable!("footprint sort mismatch"),
    }
    m
}

/// Events between a store and a stronger one, per changed variable.
pub fn events_between(d: &DomainStore, d2: &DomainStore) -> Result<Vec<(VarId, EventMask)>> {
    if !d2.is_stronger(d)? {
        return Err(Error::Usage("events_between: second store is not stronger".into()));
    }
    if d2.is_failed() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for x in d.vars() {
        let m = events_from(Footprint::of(d.get(x)), d2.get(x));
        if !m.is_empty() {
            out.push((x, m));
        }
    }
    Ok(out)
}

/// Union of the masks `es` assigns to the variables changed between `d` and `d2`
/// intersected with the changes' events; true iff some declared event fired.
pub fn triggers(es: &[(VarId, EventMask)], d: &DomainStore, d2: &DomainStore) -> Result<bool> {
    let ev = events_between(d, d2)?;
    Ok(ev
        .iter()
        .any(|(x, m)| es.iter().any(|(y, mask)| y == x && mask.intersects(*m))))
}

/// Propagation strength a propagator claims for its constraint, strongest last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Level {
    Weak,
    BoundsR,
    BoundsZ,
    BoundsD,
    Domain,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::Domain, Level::BoundsD, Level::BoundsZ, Level::BoundsR, Level::Weak];
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Domain => "domain",
            Level::BoundsD => "boundsD",
            Level::BoundsZ => "boundsZ",
            Level::BoundsR => "boundsR",
            Level::Weak => "weak",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropagatorStatus {
    Failed,
    /// The result is a fixpoint of the propagator.
    Fixpoint,
    /// The store changed and may not be a fixpoint yet.
    Progress,
    /// Every stronger store is a fixpoint; the propagator can be dropped.
    Subsumed,
}

/// A contracting, monotone store transformer.
pub trait Propagator: Send + Sync {
    fn name(&self) -> String;

    /// Declared event set: the variables the propagator reads and the events
    /// on each that must wake it.
    fn subscriptions(&self) -> &[(VarId, EventMask)];

    fn vars(&self) -> Vec<VarId> {
        self.subscriptions().iter().map(|s| s.0).collect()
    }

    fn is_idempotent(&self) -> bool;

    fn propagate(&self, store: &mut DomainStore) -> PropagatorStatus;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EventPolicy {
    /// Wake propagators through their declared event sets.
    #[default]
    Declared,
    /// Wake every propagator on any change of any of its variables.
    AllDmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineOptions {
    pub policy: EventPolicy,
    /// Seed for picking queued propagators in random order instead of FIFO.
    pub shuffle: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct Stats {
    pub executions: u64,
    pub events: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Stable,
    Failed,
}

/// FIFO fixpoint engine over a fixed list of propagators.
pub struct Engine {
    props: Vec<Arc<dyn Propagator>>,
    subs: Vec<Vec<(usize, EventMask)>>,
    opts: EngineOptions,
    rng: Option<ChaCha8Rng>,
    subsumed: Vec<bool>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    changes: Vec<(VarId, Footprint)>,
    pub stats: Stats,
}

impl Engine {
    pub fn new(props: Vec<Arc<dyn Propagator>>) -> Self {
        Self::with_options(props, EngineOptions::default())
    }

    pub fn with_options(props: Vec<Arc<dyn Propagator>>, opts: EngineOptions) -> Self {
        let mut subs: Vec<Vec<(usize, EventMask)>> = Vec::new();
        for (i, p) in props.iter().enumerate() {
            for &(x, m) in p.subscriptions() {
                if subs.len() <= x.idx() {
                    subs.resize(x.idx() + 1, Vec::new());
                }
                let m = match opts.policy {
                    EventPolicy::Declared => m,
                    EventPolicy::AllDmc => EventMask::ALL,
                };
                subs[x.idx()].push((i, m));
            }
        }
        let n = props.len();
        Engine {
            props,
            subs,
            opts,
            rng: opts.shuffle.map(ChaCha8Rng::seed_from_u64),
            subsumed: vec![false; n],
            queue: VecDeque::new(),
            queued: vec![false; n],
            changes: Vec::new(),
            stats: Stats::default(),
        }
    }

    pub fn propagators(&self) -> &[Arc<dyn Propagator>] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    /// Which propagators have been found subsumed (search saves and restores this).
    pub fn subsumed(&self) -> &[bool] {
        &self.subsumed
    }

    pub fn restore_subsumed(&mut self, s: &[bool]) {
        self.subsumed.copy_from_slice(s);
    }

    fn validate(&self, store: &DomainStore) -> Result<()> {
        for p in &self.props {
            for &(x, _) in p.subscriptions() {
                if x.idx() >= store.len() || store.var(x.idx()) != x {
                    return Err(Error::Usage(format!("{} refers to unknown variable {x}", p.name())));
                }
            }
        }
        Ok(())
    }

    /// Runs every non-subsumed propagator to a mutual fixpoint.
    pub fn run(&mut self, store: &mut DomainStore) -> Result<Outcome> {
        self.validate(store)?;
        store.clear_changes();
        if store.is_failed() {
            return Ok(Outcome::Failed);
        }
        for i in 0..self.props.len() {
            self.push(i);
        }
        self.fixpoint(store)
    }

    /// Continues from a fixpoint after external narrowing (e.g. a branching
    /// decision); only propagators woken by the logged changes run.
    pub fn resume(&mut self, store: &mut DomainStore) -> Result<Outcome> {
        if store.is_failed() {
            store.clear_changes();
            return Ok(Outcome::Failed);
        }
        self.changes.clear();
        store.drain_changes_into(&mut self.changes);
        let changes = std::mem::take(&mut self.changes);
        self.wake(store, &changes, None);
        self.changes = changes;
        self.fixpoint(store)
    }

    fn push(&mut self, i: usize) {
        if !self.queued[i] && !self.subsumed[i] {
            self.queued[i] = true;
            self.queue.push_back(i);
        }
    }

    fn pop(&mut self) -> Option<usize> {
        match &mut self.rng {
            None => self.queue.pop_front(),
            Some(rng) => {
                if self.queue.is_empty() {
                    None
                } else {
                    let k = rng.gen_range(0..self.queue.len());
                    self.queue.swap_remove_back(k)
                }
            }
        }
    }

    fn wake(&mut self, store: &DomainStore, changes: &[(VarId, Footprint)], skip: Option<usize>) {
        for &(x, fp) in changes {
            let ev = events_from(fp, store.get(x));
            if ev.is_empty() {
                continue;
            }
            self.stats.events += ev.count() as u64;
            let Some(list) = self.subs.get(x.idx()) else { continue };
            for k in 0..list.len() {
                let (j, mask) = self.subs[x.idx()][k];
                if Some(j) != skip && mask.intersects(ev) {
                    self.push(j);
                }
            }
        }
    }

    fn fixpoint(&mut self, store: &mut DomainStore) -> Result<Outcome> {
        let mut changes = std::mem::take(&mut self.changes);
        while let Some(i) = self.pop() {
            self.queued[i] = false;
            if self.subsumed[i] {
                continue;
            }
            self.stats.executions += 1;
            let st = self.props[i].propagate(store);
            if let Some(x) = store.take_violation() {
                self.reset_queue();
                store.clear_changes();
                return Err(Error::ContractViolation(format!(
                    "{} enlarged the domain of {x}",
                    self.props[i].name()
                )));
            }
            if st == PropagatorStatus::Failed || store.is_failed() {
                store.fail();
                self.reset_queue();
                store.clear_changes();
                self.changes = changes;
                return Ok(Outcome::Failed);
            }
            if st == PropagatorStatus::Subsumed {
                self.subsumed[i] = true;
            }
            changes.clear();
            store.drain_changes_into(&mut changes);
            let skip = (st == PropagatorStatus::Fixpoint && self.opts.policy == EventPolicy::Declared).then_some(i);
            self.wake(store, &changes, skip);
        }
        self.changes = changes;
        Ok(Outcome::Stable)
    }

    fn reset_queue(&mut self) {
        while let Some(i) = self.queue.pop_front() {
            self.queued[i] = false;
        }
    }
}

/// One-shot fixpoint computation.
pub fn run_fixpoint(
    store: &DomainStore,
    props: Vec<Arc<dyn Propagator>>,
) -> Result<(DomainStore, Outcome, Stats)> {
    let mut s = store.clone();
    let mut e = Engine::new(props);
    let o = e.run(&mut s)?;
    Ok((s, o, e.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::IntDomain;

    #[test]
    fn events_examples() {
        let mut d = DomainStore::default();
        let x = d.add_int(1, 5).unwrap();
        let mut d2 = d.clone();
        d2.reset_domain(x, VarDomain::Int(IntDomain::interval(1, 3)));
        assert_eq!(events_between(&d, &d2).unwrap(), vec![(x, EventMask::UBC | EventMask::DMC)]);
        let mut d3 = d.clone();
        d3.reset_domain(x, VarDomain::Int(IntDomain::singleton(3)));
        assert_eq!(events_between(&d, &d3).unwrap(), vec![(x, EventMask::ALL)]);
        assert!(events_between(&d, &d).unwrap().is_empty());
        assert!(events_between(&d2, &d).is_err());
    }

    #[test]
    fn swap_bounds_keeps_fix_and_dmc() {
        assert_eq!(EventMask::LBC.swap_bounds(), EventMask::UBC);
        assert_eq!((EventMask::FIX | EventMask::UBC).swap_bounds(), EventMask::FIX | EventMask::LBC);
        assert_eq!(EventMask::DMC.swap_bounds(), EventMask::DMC);
    }
}
