//! Oracles specific to derived propagators: the materialized route, the
//! transfer properties of views, completeness levels by view class, and
//! idempotence and subsumption.

use std::collections::HashMap;

use crate::derive::{derive, Binding, Derived};
use crate::domains::{DomainStore, IntSet, Universe, VarDomain, VarId};
use crate::error::Result;
use crate::kernel::{Level, PropagatorStatus};
use crate::views::Classification;

use super::{
    apply, associated_constraint, check_complete, check_contract, CheckReport, Mode, Space, Witness, SUBSUMPTION_CAP,
};

/// `φ(d)`, `p(φ(d))` and `φ⁻(p(φ(d)))` computed through an explicit store.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub image: DomainStore,
    pub base_out: DomainStore,
    pub base_status: PropagatorStatus,
    pub result: DomainStore,
}

/// The base of `p` on plain variables `0..arity`.
pub(crate) fn plain_base(p: &Derived) -> Result<Derived> {
    let vars: Vec<VarId> = p.base().sorts().into_iter().enumerate().map(|(i, s)| VarId::new(i, s)).collect();
    Derived::plain(p.base().clone(), &vars)
}

/// The store `φ(d)` seen by the base, one variable per position.
pub fn image_store(p: &Derived, d: &DomainStore) -> Result<DomainStore> {
    let sorts = p.base().sorts();
    let mut doms = Vec::with_capacity(sorts.len());
    for (b, &sort) in p.family().iter().zip(&sorts) {
        doms.push(match b {
            Binding::Var(x, v) => {
                if d.get(*x).is_empty() {
                    VarDomain::empty(sort)
                } else {
                    v.image_domain(d.get(*x), d.universe())?
                }
            }
            Binding::Const(k) => VarDomain::fixed(sort, k)?,
        });
    }
    let mut set: IntSet = d.universe().set.clone();
    for dom in &doms {
        if let Some(s) = dom.as_set() {
            set.extend(s.ub().iter().copied());
        }
    }
    let mut t = DomainStore::new(Universe { set, ..d.universe().clone() });
    for dom in doms {
        t.add_var(dom)?;
    }
    if d.is_failed() {
        t.fail();
    }
    t.clear_changes();
    Ok(t)
}

/// Runs `p` the long way: image store, plain base, preimage.
pub fn materialize(p: &Derived, plain: &Derived, d: &DomainStore) -> Result<Materialized> {
    let image = image_store(p, d)?;
    let (base_out, base_status) = apply(plain, &image);
    let mut result = d.clone();
    if base_out.is_failed() {
        result.fail();
    } else {
        let sorts = p.base().sorts();
        for (i, b) in p.family().iter().enumerate() {
            if let Binding::Var(x, v) = b {
                let pre = v.preimage_domain(base_out.get(VarId::new(i, sorts[i])));
                if result.restrict(*x, &pre).is_err() {
                    break;
                }
            }
        }
    }
    result.clear_changes();
    Ok(Materialized {
        image,
        base_out,
        base_status,
        result,
    })
}

/// Contraction, monotonicity, solution transfer, change preservation,
/// agreement with the materialized route, and domain completeness when the
/// base is domain complete.
pub fn check_theorems(p: &Derived, space: &Space, budget: u64, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = check_contract(p, space, budget, seed);
    let plain = plain_base(p)?;

    let sols = space.assignments()?;
    let mut assoc = CheckReport::pass("assoc", sols.len() as u64, Mode::Exhaustive);
    for a in &sols {
        let (r, _) = apply(p, a);
        let m = materialize(p, &plain, a)?;
        let base_accepts = !m.image.is_failed() && m.base_out == m.image;
        if r.is_failed() == base_accepts {
            assoc = CheckReport::fail("assoc", sols.len() as u64, Mode::Exhaustive, Witness::with(a, &m.image, &m.base_out));
            break;
        }
    }
    out.push(assoc);

    let (mode, idx) = space.schedule(budget, seed);
    let n = idx.len() as u64;
    let mut routes = CheckReport::pass("materialized", n, mode);
    let mut preserve = CheckReport::pass("preservation", n, mode);
    for &i in &idx {
        let d = space.store(i);
        let (r, _) = apply(p, &d);
        let m = materialize(p, &plain, &d)?;
        if routes.passed() && r != m.result {
            routes = CheckReport::fail("materialized", n, mode, Witness::with(&d, &m.result, &r));
        }
        if preserve.passed() && !m.image.is_failed() && m.base_out != m.image && m.result == d {
            preserve = CheckReport::fail("preservation", n, mode, Witness::with(&m.image, &m.image, &m.base_out))
                .with_note(format!("source store {} unchanged", super::encode_store(&d)));
        }
    }
    out.push(routes);
    out.push(preserve);

    if p.base().level() == Level::Domain {
        let c = associated_constraint(p, space)?;
        let r = check_complete(p, &c, Level::Domain, space, budget, seed).named("domain-transfer");
        let exact = p.family().iter().all(|b| !matches!(b, Binding::Var(_, v) if !v.is_exact()));
        out.push(if exact || r.passed() {
            r
        } else {
            CheckReport::skip("domain-transfer", "view image is not exact in the set interval representation")
        });
    }
    Ok(out)
}

/// Weakest view class in a family; constants do not count.
pub fn family_class(family: &[Binding]) -> Classification {
    family
        .iter()
        .filter_map(|b| match b {
            Binding::Var(_, v) => Some(v.classification()),
            Binding::Const(_) => None,
        })
        .min()
        .unwrap_or(Classification::IntervalBijective)
}

/// Completeness a derived propagator inherits from a base complete at `base`
/// through views of class `class`.
pub fn expected_level(base: Level, class: Classification) -> Level {
    use Classification::*;
    match (base, class) {
        (Level::Domain, _) => Level::Domain,
        (_, Arbitrary) => Level::Weak,
        (Level::BoundsD, _) => Level::BoundsD,
        (Level::BoundsZ, IntervalBijective) => Level::BoundsZ,
        (Level::BoundsZ, IntervalInjective) => Level::BoundsR,
        (Level::BoundsR, _) => Level::BoundsR,
        (Level::Weak, _) => Level::Weak,
    }
}

/// Derives `inner` (complete at `inner_level`) through `family` and checks
/// the derived propagator at the level predicted for the family's class.
pub fn check_table1(
    inner: &Derived,
    inner_level: Level,
    family: &[Binding],
    space: &Space,
    budget: u64,
    seed: u64,
) -> Result<(Derived, Level, CheckReport)> {
    let p = derive(inner, family)?;
    let class = family_class(family);
    let level = expected_level(inner_level, class);
    let c = associated_constraint(&p, space)?;
    let r = check_complete(&p, &c, level, space, budget, seed)
        .with_note(format!("row={inner_level} column={class} expected={level}"));
    Ok((p, level, r))
}

/// Whether every store of `space` is a fixpoint of `p`, by brute force.
fn all_fixpoints(p: &Derived, space: &Space) -> bool {
    (0..space.len()).all(|i| {
        let d = space.store(i);
        apply(p, &d).0 == d
    })
}

/// Brute-force subsumption at every store of a space via the cover relation.
struct SubsumedTable<'a> {
    space: &'a Space,
    fix: Vec<bool>,
    memo: HashMap<u64, bool>,
}

impl SubsumedTable<'_> {
    fn at(&mut self, i: u64) -> bool {
        if let Some(&b) = self.memo.get(&i) {
            return b;
        }
        let mut ok = self.fix[i as usize];
        if ok {
            let ds = self.space.digits(i);
            'outer: for k in 0..ds.len() {
                for &c in self.space.covers(k, ds[k]) {
                    let mut d2 = ds.clone();
                    d2[k] = c;
                    let j = self.space.index_of(&d2);
                    if !self.at(j) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert(i, ok);
        ok
    }
}

/// Idempotence and subsumption transfer from the base to the derived
/// propagator, and soundness of the reported statuses, by brute force.
pub fn check_idempotence_subsumption(p: &Derived, space: &Space) -> Result<Vec<CheckReport>> {
    use crate::kernel::Propagator;
    let plain = plain_base(p)?;
    let n = space.len();
    let exact_no_const = p
        .family()
        .iter()
        .all(|b| matches!(b, Binding::Var(_, v) if v.is_exact()));
    let results: Vec<(DomainStore, PropagatorStatus)> = (0..n).map(|i| apply(p, &space.store(i))).collect();
    let fix: Vec<bool> = (0..n)
        .map(|i| {
            let r = &results[i as usize].0;
            !r.is_failed() && *r == space.store(i)
        })
        .collect();
    let mut table = SubsumedTable {
        space,
        fix: fix.clone(),
        memo: HashMap::new(),
    };

    let mut base_idem = true;
    let mut derived_idem = true;
    let mut idem_w = None;
    let mut sub = CheckReport::pass("subsumption", n, Mode::Exhaustive);
    let mut status = CheckReport::pass("status", n, Mode::Exhaustive);
    let (mut base_sub_count, mut derived_sub_count, mut refused) = (0u64, 0u64, 0u64);
    for i in 0..n {
        let d = space.store(i);
        let (r, st) = &results[i as usize];
        if !r.is_failed() {
            let (r2, _) = apply(p, r);
            if r2 != *r {
                derived_idem = false;
                idem_w.get_or_insert_with(|| Witness::with(&d, r, &r2));
            }
        }
        let m = materialize(p, &plain, &d)?;
        if !m.base_out.is_failed() && apply(&plain, &m.base_out).0 != m.base_out {
            base_idem = false;
        }
        let derived_sub = table.at(i);
        derived_sub_count += derived_sub as u64;
        if status.passed() {
            let bad = match st {
                PropagatorStatus::Subsumed => space.locate(r).map(|ds| !table.at(space.index_of(&ds))).unwrap_or(false),
                PropagatorStatus::Fixpoint => !r.is_failed() && apply(p, r).0 != *r,
                _ => false,
            };
            if bad {
                status = CheckReport::fail("status", n, Mode::Exhaustive, Witness::with(&d, &d, r))
                    .with_note(format!("reported {st:?}"));
            }
        }
        if m.image.is_failed() || !exact_no_const {
            continue;
        }
        let ts = match Space::new(&m.image) {
            Ok(ts) if ts.len() <= SUBSUMPTION_CAP => ts,
            _ => {
                refused += 1;
                continue;
            }
        };
        let base_sub = all_fixpoints(&plain, &ts);
        base_sub_count += base_sub as u64;
        if sub.passed() && base_sub && !derived_sub {
            sub = CheckReport::fail("subsumption", n, Mode::Exhaustive, Witness::at(&d))
                .with_note("base subsumed at the image, derived not subsumed");
        }
    }
    let sub = if sub.passed() {
        sub.with_note(format!(
            "base subsumed at {base_sub_count} images, derived at {derived_sub_count} stores, {refused} over cap"
        ))
    } else {
        sub
    };

    let mut idem = if !exact_no_const {
        CheckReport::pass("idempotence", n, Mode::Exhaustive).with_note("family has constants or inexact views, transfer not claimed")
    } else if base_idem && !derived_idem {
        CheckReport::fail("idempotence", n, Mode::Exhaustive, idem_w.clone().unwrap())
    } else {
        CheckReport::pass("idempotence", n, Mode::Exhaustive).with_note(format!(
            "base idempotent on all images: {base_idem}, derived idempotent everywhere: {derived_idem}"
        ))
    };
    if p.is_idempotent() && !derived_idem {
        idem = CheckReport::fail("idempotence", n, Mode::Exhaustive, idem_w.unwrap())
            .with_note("declared idempotent but a second call changed the store");
    }
    Ok(vec![idem, sub, status])
}
