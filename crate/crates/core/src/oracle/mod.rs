//! Brute-force oracles over small finite stores.
//!
//! Every check enumerates stores of a [`Space`] exhaustively when the space
//! fits the budget and samples it otherwise; the report says which.

mod boolean;
mod derived;
mod events;
mod lemmas;
mod suites;

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::derive::{Binding, Derived};
use crate::domains::{
    dom_of, enumerate_assignments, DomainStore, ExtensionalConstraint, IntDomain, Sort, Value, VarDomain, VarId,
};
use crate::error::{Error, Result};
use crate::kernel::{Level, Propagator, PropagatorStatus};
use crate::relax::Position;
use crate::Rational;

pub use derived::{
    check_idempotence_subsumption, check_table1, check_theorems, expected_level, family_class, materialize,
    Materialized,
};
pub use boolean::{check_boolean_identities, check_domain_equal};
pub use events::{check_event_set, compare_engines};
pub use lemmas::{check_view_lemmas, classify_view};
pub use suites::{run_suite, Suite, SuiteReport};

/// Default cap on the number of stores a check enumerates exhaustively.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Cap on sub-stores enumerated for a brute-force subsumption test.
pub const SUBSUMPTION_CAP: u64 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        })
    }
}

/// Counterexample: the input store plus what was expected and what happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub store: DomainStore,
    pub expected: Option<DomainStore>,
    pub actual: Option<DomainStore>,
}

impl Witness {
    pub fn at(store: &DomainStore) -> Witness {
        Witness {
            store: store.clone(),
            expected: None,
            actual: None,
        }
    }

    pub fn with(store: &DomainStore, expected: &DomainStore, actual: &DomainStore) -> Witness {
        Witness {
            store: store.clone(),
            expected: Some(expected.clone()),
            actual: Some(actual.clone()),
        }
    }
}

/// Store text without spaces, so it fits a single report token.
pub fn encode_store(d: &DomainStore) -> String {
    d.to_string().replace(' ', ";")
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", encode_store(&self.store))?;
        if let Some(e) = &self.expected {
            write!(f, "|expected={}", encode_store(e))?;
        }
        if let Some(a) = &self.actual {
            write!(f, "|actual={}", encode_store(a))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub instances: u64,
    pub mode: Mode,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, verdict: Verdict, instances: u64, mode: Mode) -> CheckReport {
        CheckReport {
            name: name.into(),
            verdict,
            instances,
            mode,
            witness: None,
            note: None,
        }
    }

    pub fn pass(name: impl Into<String>, instances: u64, mode: Mode) -> CheckReport {
        Self::new(name, Verdict::Pass, instances, mode)
    }

    pub fn fail(name: impl Into<String>, instances: u64, mode: Mode, w: Witness) -> CheckReport {
        let mut r = Self::new(name, Verdict::Fail, instances, mode);
        r.witness = Some(w);
        r
    }

    pub fn skip(name: impl Into<String>, note: impl Into<String>) -> CheckReport {
        let mut r = Self::new(name, Verdict::Skip, 0, Mode::Exhaustive);
        r.note = Some(note.into());
        r
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn named(mut self, name: impl Into<String>) -> CheckReport {
        self.name = name.into();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckReport {
        self.note = Some(note.into());
        self
    }

    /// A check that is expected to fail: PASS iff the inner one failed.
    pub fn expect_failure(self, name: impl Into<String>) -> CheckReport {
        let verdict = match self.verdict {
            Verdict::Fail => Verdict::Pass,
            Verdict::Pass => Verdict::Fail,
            Verdict::Skip => Verdict::Skip,
        };
        CheckReport {
            name: name.into(),
            verdict,
            instances: self.instances,
            mode: self.mode,
            note: Some(match verdict {
                Verdict::Pass => "violation detected as expected".to_string(),
                _ => "expected a violation, none found".to_string(),
            }),
            witness: self.witness,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} instances={} mode={}",
            self.name, self.verdict, self.instances, self.mode
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " note={}", n.replace(' ', "_"))?;
        }
        Ok(())
    }
}

impl Serialize for CheckReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CheckReport", 6)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("instances", &self.instances)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("witness", &self.witness.as_ref().map(|w| w.to_string()))?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

/// Runs one propagation step on a copy of `d`.
pub fn apply(p: &dyn Propagator, d: &DomainStore) -> (DomainStore, PropagatorStatus) {
    let mut s = d.clone();
    s.clear_changes();
    let st = p.propagate(&mut s);
    s.clear_changes();
    (s, st)
}

/// All non-failed stores below a top store, indexed in mixed radix.
pub struct Space {
    top: DomainStore,
    subs: Vec<Vec<VarDomain>>,
    index: Vec<HashMap<VarDomain, usize>>,
    below: Vec<Vec<Vec<usize>>>,
    covers: Vec<Vec<Vec<usize>>>,
    total: u64,
}

impl Space {
    /// Enumerates the sub-domains of every variable of `top`.
    pub fn new(top: &DomainStore) -> Result<Space> {
        if top.is_failed() {
            return Err(Error::Usage("space over a failed store".into()));
        }
        let mut subs = Vec::new();
        let mut index = Vec::new();
        let mut below = Vec::new();
        let mut covers = Vec::new();
        let mut total: u64 = 1;
        for d in top.domains() {
            if d.size() > 10 {
                return Err(Error::CapExceeded {
                    estimate: d.size(),
                    cap: 10,
                });
            }
            let ss: Vec<VarDomain> = d.subdomains().into_iter().filter(|s| !s.is_empty()).collect();
            let idx: HashMap<VarDomain, usize> = ss.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
            let bl: Vec<Vec<usize>> = ss
                .iter()
                .map(|a| (0..ss.len()).filter(|&j| ss[j].is_subset(a)).collect())
                .collect();
            let rank = |d: &VarDomain| match d {
                VarDomain::Set(s) => s.undecided() as u64,
                _ => d.size(),
            };
            let cv: Vec<Vec<usize>> = ss
                .iter()
                .enumerate()
                .map(|(i, a)| bl[i].iter().copied().filter(|&j| rank(&ss[j]) + 1 == rank(a)).collect())
                .collect();
            total = total.saturating_mul(ss.len() as u64);
            subs.push(ss);
            index.push(idx);
            below.push(bl);
            covers.push(cv);
        }
        let mut top = top.clone();
        top.clear_changes();
        Ok(Space {
            top,
            subs,
            index,
            below,
            covers,
            total,
        })
    }

    pub fn top(&self) -> &DomainStore {
        &self.top
    }

    pub fn vars(&self) -> Vec<VarId> {
        self.top.vars().collect()
    }

    /// Number of non-failed stores.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn digits(&self, mut i: u64) -> Vec<usize> {
        let mut ds = vec![0; self.subs.len()];
        for k in (0..self.subs.len()).rev() {
            let r = self.subs[k].len() as u64;
            ds[k] = (i % r) as usize;
            i /= r;
        }
        ds
    }

    pub fn index_of(&self, ds: &[usize]) -> u64 {
        ds.iter()
            .zip(&self.subs)
            .fold(0u64, |acc, (&d, s)| acc * s.len() as u64 + d as u64)
    }

    pub fn store_of(&self, ds: &[usize]) -> DomainStore {
        let mut s = self.top.clone();
        for (k, &d) in ds.iter().enumerate() {
            s.reset_domain(self.top.var(k), self.subs[k][d].clone());
        }
        s
    }

    pub fn store(&self, i: u64) -> DomainStore {
        self.store_of(&self.digits(i))
    }

    /// Digits of a non-failed store inside the space.
    pub fn locate(&self, d: &DomainStore) -> Option<Vec<usize>> {
        if d.is_failed() || d.len() != self.subs.len() {
            return None;
        }
        d.domains().iter().zip(&self.index).map(|(v, m)| m.get(v).copied()).collect()
    }

    pub fn sub_domain(&self, k: usize, digit: usize) -> &VarDomain {
        &self.subs[k][digit]
    }

    /// Digits of the non-empty sub-domains of variable `k`'s domain `digit`.
    pub fn below(&self, k: usize, digit: usize) -> &[usize] {
        &self.below[k][digit]
    }

    /// Digits of the domains immediately below `digit`.
    pub fn covers(&self, k: usize, digit: usize) -> &[usize] {
        &self.covers[k][digit]
    }

    /// Store indices to visit: all of them within `budget`, a seeded sample
    /// of `budget` stores otherwise.
    pub fn schedule(&self, budget: u64, seed: u64) -> (Mode, Vec<u64>) {
        if self.total <= budget {
            (Mode::Exhaustive, (0..self.total).collect())
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (Mode::Sampled, (0..budget).map(|_| rng.gen_range(0..self.total)).collect())
        }
    }

    /// Every assignment store of the space.
    pub fn assignments(&self) -> Result<Vec<DomainStore>> {
        let vars = self.vars();
        enumerate_assignments(&self.top, &vars, 1 << 22)?
            .map(|a| a.to_store(&self.top))
            .collect()
    }
}

/// Memoized propagation results over a space.
pub(crate) struct Cache<'a> {
    p: &'a dyn Propagator,
    space: &'a Space,
    map: HashMap<u64, (DomainStore, PropagatorStatus)>,
}

impl<'a> Cache<'a> {
    pub(crate) fn new(p: &'a dyn Propagator, space: &'a Space) -> Self {
        Cache {
            p,
            space,
            map: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, i: u64) -> &(DomainStore, PropagatorStatus) {
        let (p, space) = (self.p, self.space);
        self.map.entry(i).or_insert_with(|| apply(p, &space.store(i)))
    }
}

/// `c_p`: the assignments of the space that `p` leaves untouched.
pub fn associated_constraint(p: &dyn Propagator, space: &Space) -> Result<ExtensionalConstraint> {
    let vars = space.vars();
    let mut tuples = Vec::new();
    for a in enumerate_assignments(space.top(), &vars, 1 << 22)? {
        let s = a.to_store(space.top())?;
        let (r, _) = apply(p, &s);
        if !r.is_failed() {
            tuples.push(a.values);
        }
    }
    ExtensionalConstraint::from_tuples(vars, tuples)
}

/// Checks contraction and monotonicity of `p` over `space`.
pub fn check_contract(p: &dyn Propagator, space: &Space, budget: u64, seed: u64) -> Vec<CheckReport> {
    let (mode, idx) = space.schedule(budget, seed);
    let mut cache = Cache::new(p, space);
    let n = idx.len() as u64;
    let mut contraction = CheckReport::pass("contraction", n, mode);
    let mut monotone = CheckReport::pass("monotonicity", n, mode);
    for &i in &idx {
        let ds = space.digits(i);
        let d = space.store_of(&ds);
        let r = cache.get(i).0.clone();
        if contraction.passed() && !r.is_stronger(&d).unwrap_or(false) {
            contraction = CheckReport::fail("contraction", n, mode, Witness::with(&d, &d, &r));
        }
        if !monotone.passed() {
            continue;
        }
        'vars: for k in 0..ds.len() {
            for &c in space.covers(k, ds[k]) {
                let mut ds2 = ds.clone();
                ds2[k] = c;
                let j = space.index_of(&ds2);
                let r2 = cache.get(j).0.clone();
                if !r2.is_stronger(&r).unwrap_or(false) {
                    let mut w = Witness::with(&space.store_of(&ds2), &r, &r2);
                    w.store = space.store_of(&ds2);
                    monotone = CheckReport::fail("monotonicity", n, mode, w)
                        .with_note(format!("weaker store {} gives {}", encode_store(&d), encode_store(&r)));
                    break 'vars;
                }
            }
        }
    }
    vec![contraction, monotone]
}

/// Interval hull of a numeric domain; sets are already lattice hulls.
fn hull(d: &VarDomain) -> VarDomain {
    match d.as_int_domain() {
        Some(i) if d.sort().is_numeric() => VarDomain::numeric(d.sort(), i.hull()),
        _ => d.clone(),
    }
}

/// Store with every numeric domain replaced by its interval hull.
fn conv_store(d: &DomainStore) -> DomainStore {
    let mut out = d.clone();
    for x in d.vars() {
        out.reset_domain(x, hull(d.get(x)));
    }
    if d.is_failed() {
        out.fail();
    }
    out
}

fn hull_store(d: &DomainStore) -> DomainStore {
    conv_store(d)
}

/// A variable with inclusive integer bounds.
pub type VarBounds = (VarId, (i64, i64));

/// Integer bounds the real relaxation of `p`'s base implies on each store
/// variable of `d`; `None` when the relaxation has no point in the box.
pub fn relaxed_bounds(p: &Derived, d: &DomainStore) -> Result<Option<Vec<VarBounds>>> {
    let rel = p
        .base()
        .relaxation()
        .ok_or_else(|| Error::Refused(format!("{} has no real relaxation", p.base().name())))?;
    let mut pos = Vec::new();
    for b in p.family() {
        pos.push(match b {
            Binding::Var(x, v) => {
                let (a, o) = v
                    .as_affine()
                    .ok_or_else(|| Error::Refused(format!("bounds(R) needs affine views, found {v}")))?;
                let (lo, hi) = match (d.get(*x).as_int_domain().and_then(|i| i.min()), d.get(*x).as_int_domain().and_then(|i| i.max())) {
                    (Some(lo), Some(hi)) => (lo, hi),
                    _ => return Ok(None),
                };
                Position::Affine {
                    a,
                    o,
                    lo: Rational::from_integer(lo as i128),
                    hi: Rational::from_integer(hi as i128),
                }
            }
            Binding::Const(Value::Int(k)) => Position::Const(Rational::from_integer(*k as i128)),
            Binding::Const(k) => return Err(Error::Refused(format!("bounds(R) needs integer constants, found {k}"))),
        });
    }
    let Some(bounds) = rel.source_bounds(&pos) else {
        return Ok(None);
    };
    let mut out = Vec::new();
    for (b, bd) in p.family().iter().zip(bounds) {
        if let (Binding::Var(x, _), Some((l, u))) = (b, bd) {
            let clamp = |v: i128| v.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
            out.push((*x, (clamp(l), clamp(u))));
        }
    }
    Ok(Some(out))
}

/// The strongest store `p(d)` may return while being complete at `level`
/// for `c`.
pub fn completeness_target(
    p: &Derived,
    c: &ExtensionalConstraint,
    level: Level,
    d: &DomainStore,
) -> Result<DomainStore> {
    let mut failed = d.clone();
    failed.fail();
    Ok(match level {
        Level::Domain => dom_of(&c.restrict_to(d), d),
        Level::BoundsD => hull_store(&dom_of(&c.restrict_to(d), d)),
        Level::BoundsZ => {
            let cd = conv_store(d);
            let t = hull_store(&dom_of(&c.restrict_to(&cd), &cd));
            if t.is_failed() {
                failed
            } else {
                t.meet(d)?
            }
        }
        Level::BoundsR => match relaxed_bounds(p, d)? {
            None => failed,
            Some(bs) => {
                let mut t = d.clone();
                for (x, (l, u)) in bs {
                    let cur = d.get(x).as_int_domain().unwrap_or_else(IntDomain::empty);
                    t.reset_domain(x, VarDomain::numeric(x.sort, cur.intersect(&IntDomain::interval(l, u))));
                }
                t
            }
        },
        Level::Weak => {
            if !d.is_assigned() {
                d.clone()
            } else {
                let vals: Vec<Value> = c.vars.iter().map(|&x| d.get(x).value().unwrap()).collect();
                if c.contains(&vals) {
                    d.clone()
                } else {
                    failed
                }
            }
        }
    })
}

/// Checks `p(d) ⊆ target(d)` for every scheduled store. At the weak level it
/// also requires assignments of `c` to survive.
pub fn check_complete(
    p: &Derived,
    c: &ExtensionalConstraint,
    level: Level,
    space: &Space,
    budget: u64,
    seed: u64,
) -> CheckReport {
    let name = format!("complete/{level}");
    if level == Level::BoundsR {
        if let Err(e) = relaxed_bounds(p, space.top()) {
            return CheckReport::skip(name, e.to_string());
        }
    }
    let (mode, idx) = space.schedule(budget, seed);
    let n = idx.len() as u64;
    for &i in &idx {
        let d = space.store(i);
        let (r, _) = apply(p, &d);
        let t = match completeness_target(p, c, level, &d) {
            Ok(t) => t,
            Err(e) => return CheckReport::skip(name, e.to_string()),
        };
        let ok = r.is_stronger(&t).unwrap_or(false) && (level != Level::Weak || !d.is_assigned() || t.is_failed() || !r.is_failed());
        if !ok {
            return CheckReport::fail(name, n, mode, Witness::with(&d, &t, &r));
        }
    }
    CheckReport::pass(name, n, mode)
}

/// Strongest level at which `p` is complete for `c` over `space`, checking
/// from the strongest down.
pub fn strongest_level(p: &Derived, c: &ExtensionalConstraint, space: &Space, budget: u64, seed: u64) -> Level {
    for l in Level::ALL {
        if check_complete(p, c, l, space, budget, seed).passed() {
            return l;
        }
    }
    Level::Weak
}

/// Top store with one variable per sort and value list.
pub fn store_over(doms: &[(Sort, Vec<Value>)]) -> Result<DomainStore> {
    let mut s = DomainStore::default();
    for (sort, vals) in doms {
        let refs: Vec<&Value> = vals.iter().collect();
        s.add_var(VarDomain::from_values(*sort, &refs))?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators;

    fn int_store(ranges: &[(i64, i64)]) -> DomainStore {
        let mut s = DomainStore::default();
        for &(l, h) in ranges {
            s.add_int(l, h).unwrap();
        }
        s
    }

    #[test]
    fn space_counts_nonempty_stores() {
        let s = Space::new(&int_store(&[(0, 2), (0, 1)])).unwrap();
        assert_eq!(s.len(), 7 * 3);
        for i in 0..s.len() {
            assert_eq!(s.locate(&s.store(i)), Some(s.digits(i)));
        }
        // {0,1,2} is covered by the three two-element subsets
        let top = s.locate(s.top()).unwrap();
        assert_eq!(s.covers(0, top[0]).len(), 3);
    }

    #[test]
    fn max_is_bounds_z_not_domain() {
        let top = int_store(&[(0, 3), (0, 3), (0, 3)]);
        let space = Space::new(&top).unwrap();
        let vs = space.vars();
        let p = propagators::max_ternary(vs[0], vs[1], vs[2]).unwrap();
        let c = associated_constraint(&p, &space).unwrap();
        assert!(check_complete(&p, &c, Level::BoundsZ, &space, DEFAULT_BUDGET, 0).passed());
        let dom = check_complete(&p, &c, Level::Domain, &space, DEFAULT_BUDGET, 0);
        assert_eq!(dom.verdict, Verdict::Fail);
        assert!(dom.witness.is_some());
    }
}
