//! Named check suites over the propagator catalog and the shipped views.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::derive::{derive, Binding, Derived};
use crate::domains::{DomainStore, IntDomain, IntSet, SetDomain, Sort, Value, VarDomain, VarId};
use crate::error::{Error, Result};
use crate::kernel::{Engine, EventMask, Level, Outcome, Propagator, PropagatorStatus};
use crate::propagators as cat;
use crate::views::View;

use super::{
    apply, associated_constraint, check_complete, check_contract, check_event_set, check_idempotence_subsumption,
    check_table1, check_theorems, check_view_lemmas, compare_engines, completeness_target, encode_store,
    strongest_level, CheckReport, Mode, Space, Verdict, Witness,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Contracts,
    Theorems,
    Table1,
    Lemmas,
    Events,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Contracts, Suite::Theorems, Suite::Table1, Suite::Lemmas, Suite::Events];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Contracts => "contracts",
            Suite::Theorems => "theorems",
            Suite::Table1 => "table1",
            Suite::Lemmas => "lemmas",
            Suite::Events => "events",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "contracts" => Suite::Contracts,
            "theorems" => Suite::Theorems,
            "table1" => Suite::Table1,
            "lemmas" => Suite::Lemmas,
            "events" => Suite::Events,
            "all" => Suite::All,
            _ => return Err(Error::Usage(format!("unknown suite `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub budget: u64,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.reports.iter().filter(|r| r.verdict == v).count()
    }

    /// No check failed (skips are allowed).
    pub fn passed(&self) -> bool {
        self.count(Verdict::Fail) == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s.push_str(&format!(
            "SUMMARY suite={} seed={} pass={} fail={} skip={}\n",
            self.suite,
            self.seed,
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Skip)
        ));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs a suite. The output depends only on `seed` and `budget`.
pub fn run_suite(suite: Suite, seed: u64, budget: u64) -> Result<SuiteReport> {
    let mut reports = Vec::new();
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    for s in suites {
        let rs = match s {
            Suite::Contracts => contracts(seed, budget)?,
            Suite::Theorems => theorems(seed, budget)?,
            Suite::Table1 => table1(seed, budget)?,
            Suite::Lemmas => lemmas(seed)?,
            Suite::Events => events(seed)?,
            Suite::All => unreachable!(),
        };
        reports.extend(rs.into_iter().map(|r| {
            let name = format!("{s}/{}", r.name);
            r.named(name)
        }));
    }
    Ok(SuiteReport {
        suite: suite.to_string(),
        seed,
        budget,
        reports,
    })
}

// ---------------------------------------------------------------------------
// Catalog matrix
// ---------------------------------------------------------------------------

type Make = fn(&[VarId]) -> Result<Derived>;

/// A catalog base with the target values its positions should see.
struct Shape {
    label: &'static str,
    sorts: &'static [Sort],
    centers: &'static [i64],
    make: Make,
}

const I: Sort = Sort::Int;
const B: Sort = Sort::Bool;
const S: Sort = Sort::Set;

fn set_universe() -> IntSet {
    (0..3).collect()
}

fn shapes() -> Vec<Shape> {
    vec![
        Shape { label: "max", sorts: &[I, I, I], centers: &[1, 1, 1], make: |v| cat::max_ternary(v[0], v[1], v[2]) },
        Shape { label: "linear_eq3", sorts: &[I, I, I], centers: &[1, 1, 0], make: |v| cat::linear_eq_unit(v, 2) },
        Shape { label: "linear_eq2", sorts: &[I, I], centers: &[0, 1], make: |v| cat::linear_eq_unit(v, 1) },
        Shape { label: "linear_eq_dom3", sorts: &[I, I, I], centers: &[1, 1, 0], make: |v| cat::linear_eq_unit_dom(v, 2) },
        Shape { label: "linear_neq2", sorts: &[I, I], centers: &[0, 1], make: |v| cat::linear_neq_unit(v, 1) },
        Shape { label: "distinct3", sorts: &[I, I, I], centers: &[1, 1, 1], make: cat::distinct_domain },
        Shape { label: "distinct_weak3", sorts: &[I, I, I], centers: &[1, 1, 1], make: cat::distinct_weak },
        Shape { label: "element", sorts: &[I, I], centers: &[2, 1], make: |v| cat::element_vals(&[2, 0, 3, 1], v[0], v[1]) },
        Shape { label: "mult", sorts: &[I, I, I], centers: &[2, 2, 4], make: |v| cat::mult_ppp(v[0], v[1], v[2]) },
        Shape { label: "int_eq", sorts: &[I, I], centers: &[1, 1], make: |v| cat::int_eq(v[0], v[1]) },
        Shape { label: "int_eq_bounds", sorts: &[I, I], centers: &[1, 1], make: |v| cat::int_eq_bounds(v[0], v[1]) },
        Shape { label: "reified_eq", sorts: &[I, I, B], centers: &[1, 1, 0], make: |v| cat::reified_eq(v[0], v[1], v[2]) },
        Shape { label: "card_geq3", sorts: &[B, B, B], centers: &[0, 0, 0], make: |v| cat::bool_card_geq(v, 2) },
        Shape { label: "or2", sorts: &[B, B, B], centers: &[0, 0, 0], make: |v| cat::bool_or_n(&v[..2], v[2]) },
        Shape { label: "eqv", sorts: &[B, B, B], centers: &[0, 0, 0], make: |v| cat::bool_eqv(v[0], v[1], v[2]) },
        Shape { label: "set_intersect", sorts: &[S, S, S], centers: &[2, 2, 2], make: |v| cat::set_intersect(v[0], v[1], v[2]) },
        Shape { label: "subset", sorts: &[S, S], centers: &[2, 2], make: |v| cat::subset(v[0], v[1]) },
    ]
}

#[derive(Clone)]
enum Pos {
    View(View),
    Const(Value),
}

struct Family {
    label: String,
    pos: Vec<Pos>,
}

fn int_views() -> Vec<View> {
    vec![
        View::identity(Sort::Int),
        View::minus(),
        View::offset(-3),
        View::offset(1),
        View::offset(5),
        View::scale(2).unwrap(),
        View::scale(3).unwrap(),
        View::scale(-2).unwrap(),
        View::compose(&View::offset(2), &View::minus()).unwrap(),
    ]
}

fn identity_family(sh: &Shape) -> Family {
    Family {
        label: "id".into(),
        pos: sh.sorts.iter().map(|&s| Pos::View(View::identity(s))).collect(),
    }
}

/// Every applicable view family for a shape: one view on all positions of
/// its sort, a constant on the last position, a singleton on the first.
fn families(sh: &Shape) -> Vec<Family> {
    let mut out = vec![identity_family(sh)];
    let uniform = |sort: Sort, v: &View, label: String| Family {
        label,
        pos: sh
            .sorts
            .iter()
            .map(|&s| Pos::View(if s == sort { v.clone() } else { View::identity(s) }))
            .collect(),
    };
    if sh.sorts.contains(&I) {
        for v in int_views().iter().skip(1) {
            out.push(uniform(I, v, v.to_string()));
        }
    }
    if sh.sorts.contains(&B) {
        out.push(uniform(B, &View::bool_neg(), "neg".into()));
    }
    if sh.sorts.contains(&S) {
        out.push(uniform(S, &View::complement(set_universe()), "complement".into()));
    }
    let last = sh.sorts.len() - 1;
    let consts: Vec<Value> = match sh.sorts[last] {
        Sort::Int => vec![Value::Int(sh.centers[last])],
        Sort::Bool => vec![Value::Int(1), Value::Int(0)],
        Sort::Set => vec![Value::Set(IntSet::new()), Value::Set(set_universe())],
    };
    for k in consts {
        let mut f = identity_family(sh);
        f.label = format!("const({k})");
        f.pos[last] = Pos::Const(k);
        out.push(f);
    }
    if sh.sorts[0] == S {
        let mut f = identity_family(sh);
        f.label = "singleton".into();
        f.pos[0] = Pos::View(View::singleton());
        out.push(f);
    }
    out
}

/// `k` consecutive source values whose images under `v` sit around `center`.
fn source_values(v: &View, center: i64, k: i64) -> Vec<i64> {
    let v0 = match v.as_affine() {
        Some((a, o)) => ((center - o) as f64 / a as f64).round() as i64,
        None => center,
    };
    let lo = v0 - k / 2;
    (lo..lo + k).collect()
}

struct Instance {
    label: String,
    store: DomainStore,
    p: Derived,
}

fn instance(sh: &Shape, fam: &Family, int_width: Option<i64>) -> Result<Instance> {
    let placeholders: Vec<VarId> = sh.sorts.iter().enumerate().map(|(i, &s)| VarId::new(i, s)).collect();
    let plain = (sh.make)(&placeholders)?;
    let n_int = fam
        .pos
        .iter()
        .filter(|p| matches!(p, Pos::View(v) if v.source() == Sort::Int))
        .count() as i64;
    let k = int_width.unwrap_or(if n_int <= 2 { 5 } else { 4 });
    let mut store = DomainStore::default();
    let mut family = Vec::new();
    for (i, pos) in fam.pos.iter().enumerate() {
        match pos {
            Pos::Const(c) => family.push(Binding::Const(c.clone())),
            Pos::View(v) => {
                let dom = match v.source() {
                    Sort::Int => VarDomain::Int(IntDomain::from_values(source_values(v, sh.centers[i], k))),
                    Sort::Bool => VarDomain::Bool(crate::domains::BoolDomain::BOTH),
                    Sort::Set => VarDomain::Set(SetDomain::new(IntSet::new(), set_universe())),
                };
                let x = store.add_var(dom)?;
                family.push(Binding::Var(x, v.clone()));
            }
        }
    }
    let p = derive(&plain, &family)?;
    Ok(Instance {
        label: format!("{}/{}", sh.label, fam.label),
        store,
        p,
    })
}

fn prefixed(prefix: &str, rs: Vec<CheckReport>) -> Vec<CheckReport> {
    rs.into_iter()
        .map(|r| {
            let name = format!("{prefix}/{}", r.name);
            r.named(name)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Injected faults
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Fault {
    NonMonotone,
    Expanding,
}

struct Faulty {
    fault: Fault,
    subs: Vec<(VarId, EventMask)>,
}

impl Propagator for Faulty {
    fn name(&self) -> String {
        "faulty".into()
    }

    fn subscriptions(&self) -> &[(VarId, EventMask)] {
        &self.subs
    }

    fn is_idempotent(&self) -> bool {
        false
    }

    fn propagate(&self, store: &mut DomainStore) -> PropagatorStatus {
        let x = self.subs[0].0;
        match self.fault {
            // fixes x to its minimum only when it has two or more values
            Fault::NonMonotone => {
                if store.size(x) >= 2 {
                    let m = store.min(x);
                    if store.fix(x, m).is_err() {
                        return PropagatorStatus::Failed;
                    }
                }
            }
            Fault::Expanding => {
                let d = store.int_domain(x);
                if let (Some(lo), Some(hi)) = (d.min(), d.max()) {
                    store.replace(x, VarDomain::Int(IntDomain::interval(lo - 1, hi)));
                }
            }
        }
        PropagatorStatus::Progress
    }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

fn contracts(seed: u64, budget: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for sh in shapes() {
        let inst = instance(&sh, &identity_family(&sh), None)?;
        let space = Space::new(&inst.store)?;
        let mut rs = check_contract(&inst.p, &space, budget, seed);
        let c = associated_constraint(&inst.p, &space)?;
        let declared = inst.p.level();
        rs.push(check_complete(&inst.p, &c, declared, &space, budget, seed).named(format!("declared-{declared}")));
        if declared != Level::Weak {
            rs.push(check_complete(&inst.p, &c, Level::Weak, &space, budget, seed));
        }
        let strongest = strongest_level(&inst.p, &c, &space, budget, seed);
        rs.push(
            CheckReport::new(
                "strongest-level",
                if strongest >= declared { Verdict::Pass } else { Verdict::Fail },
                space.len(),
                Mode::Exhaustive,
            )
            .with_note(format!("declared={declared} verified={strongest}")),
        );
        out.extend(prefixed(sh.label, rs));
    }
    let mut top = DomainStore::default();
    let x = top.add_int(0, 3)?;
    let y = top.add_int(0, 3)?;
    let space = Space::new(&top)?;
    for (fault, label) in [(Fault::NonMonotone, "monotonicity"), (Fault::Expanding, "contraction")] {
        let p = Faulty {
            fault,
            subs: vec![(x, EventMask::ALL), (y, EventMask::ALL)],
        };
        let rs = check_contract(&p, &space, budget, seed);
        let r = rs.into_iter().find(|r| r.name == label).unwrap();
        out.push(r.expect_failure(format!("injected-fault/{label}")));
    }
    Ok(out)
}

fn theorems(seed: u64, budget: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for sh in shapes() {
        for fam in families(&sh) {
            let inst = instance(&sh, &fam, None)?;
            let space = Space::new(&inst.store)?;
            out.extend(prefixed(&inst.label, check_theorems(&inst.p, &space, budget, seed)?));
        }
    }
    for sh in shapes().into_iter().filter(|s| s.label == "mult" || s.label == "reified_eq") {
        let width = if sh.label == "mult" { 3 } else { 4 };
        for fam in families(&sh) {
            let keep = fam.label == "minus" || fam.label.starts_with("offset") || fam.label == "id";
            if !keep {
                continue;
            }
            let inst = instance(&sh, &fam, Some(width))?;
            let space = Space::new(&inst.store)?;
            out.extend(prefixed(&inst.label, check_idempotence_subsumption(&inst.p, &space)?));
        }
    }
    out.extend(prefixed("decompose", crate::decompose::check_catalog(seed)?));
    out.extend(prefixed("boolean", super::check_boolean_identities()?));
    Ok(out)
}

fn int_top(ranges: &[(i64, i64)]) -> Result<DomainStore> {
    let mut s = DomainStore::default();
    for &(l, h) in ranges {
        s.add_int(l, h)?;
    }
    Ok(s)
}

fn xs(n: usize) -> Vec<VarId> {
    (0..n).map(|i| VarId::new(i, Sort::Int)).collect()
}

fn ids(vs: &[VarId], views: &[View]) -> Vec<Binding> {
    vs.iter().zip(views).map(|(&x, v)| Binding::Var(x, v.clone())).collect()
}

fn shuffle_view() -> View {
    View::lookup([(0, 0), (1, 3), (2, 1), (3, 4), (4, 2)]).unwrap()
}

/// One cell of the level table: `inner` complete at `row`, derived through
/// `family` over `top`; arbitrary-column cells also show the row level is lost.
fn cell(
    label: &str,
    inner: &Derived,
    row: Level,
    family: &[Binding],
    top: &DomainStore,
    seed: u64,
    budget: u64,
) -> Result<Vec<CheckReport>> {
    let space = Space::new(top)?;
    let (p, level, r) = check_table1(inner, row, family, &space, budget, seed)?;
    let mut out = vec![r.named(format!("{label}/complete-{level}"))];
    if level < row && row != Level::BoundsR {
        let c = associated_constraint(&p, &space)?;
        out.push(
            check_complete(&p, &c, row, &space, budget, seed).expect_failure(format!("{label}/not-{row}")),
        );
    }
    Ok(out)
}

fn table1(seed: u64, budget: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let v = xs(3);
    let id = View::identity(Sort::Int);
    let s2 = View::scale(2)?;
    let bij = [id.clone(), View::offset(1)];
    let inj = [id.clone(), s2.clone()];
    let arb = [shuffle_view(), id.clone()];
    let sq = int_top(&[(0, 4), (0, 4)])?;

    // the rows' bases at their own level
    let lin5 = cat::linear_eq_unit(&v[..2], 5)?;
    let lin5_s2 = derive(&lin5, &ids(&v[..2], &[s2.clone(), s2.clone()]))?;
    let bases: Vec<(&str, Derived, Level, DomainStore)> = vec![
        ("int_eq", cat::int_eq(v[0], v[1])?, Level::Domain, sq.clone()),
        ("int_eq_bounds", cat::int_eq_bounds(v[0], v[1])?, Level::BoundsD, sq.clone()),
        ("max", cat::max_ternary(v[0], v[1], v[2])?, Level::BoundsZ, int_top(&[(0, 3); 3])?),
        ("linear_eq2", cat::linear_eq_unit(&v[..2], 3)?, Level::BoundsZ, sq.clone()),
        ("2x+2y=5", lin5_s2.clone(), Level::BoundsR, int_top(&[(0, 2), (0, 2)])?),
    ];
    for (label, p, level, top) in &bases {
        let space = Space::new(top)?;
        let c = associated_constraint(p, &space)?;
        out.push(check_complete(p, &c, *level, &space, budget, seed).named(format!("base/{label}/complete-{level}")));
    }

    // domain row
    let int_eq = cat::int_eq(v[0], v[1])?;
    out.extend(cell("domain/bijective", &int_eq, Level::Domain, &ids(&v[..2], &bij), &sq, seed, budget)?);
    out.extend(cell("domain/injective", &int_eq, Level::Domain, &ids(&v[..2], &inj), &sq, seed, budget)?);
    out.extend(cell("domain/arbitrary", &int_eq, Level::Domain, &ids(&v[..2], &arb), &sq, seed, budget)?);

    // bounds(D) row
    let eqb = cat::int_eq_bounds(v[0], v[1])?;
    out.extend(cell("boundsD/bijective", &eqb, Level::BoundsD, &ids(&v[..2], &bij), &sq, seed, budget)?);
    out.extend(cell("boundsD/injective", &eqb, Level::BoundsD, &ids(&v[..2], &inj), &sq, seed, budget)?);
    out.extend(cell("boundsD/arbitrary", &eqb, Level::BoundsD, &ids(&v[..2], &arb), &sq, seed, budget)?);

    // bounds(Z) row
    let max = cat::max_ternary(v[0], v[1], v[2])?;
    let minus3 = [View::minus(), View::minus(), View::minus()];
    out.extend(cell(
        "boundsZ/bijective",
        &max,
        Level::BoundsZ,
        &ids(&v, &minus3),
        &int_top(&[(-3, 0); 3])?,
        seed,
        budget,
    )?);
    out.extend(cell(
        "boundsZ/injective",
        &lin5,
        Level::BoundsZ,
        &ids(&v[..2], &[s2.clone(), s2.clone()]),
        &int_top(&[(0, 2), (0, 2)])?,
        seed,
        budget,
    )?);
    let lin3 = cat::linear_eq_unit(&v[..2], 3)?;
    out.extend(cell("boundsZ/arbitrary", &lin3, Level::BoundsZ, &ids(&v[..2], &arb), &sq, seed, budget)?);

    // bounds(R) row, on 2x + 2y = 5
    out.extend(cell(
        "boundsR/bijective",
        &lin5_s2,
        Level::BoundsR,
        &ids(&v[..2], &[View::minus(), View::minus()]),
        &int_top(&[(-2, 0), (-2, 0)])?,
        seed,
        budget,
    )?);
    out.extend(cell(
        "boundsR/injective",
        &lin5_s2,
        Level::BoundsR,
        &ids(&v[..2], &[View::scale(3)?, id.clone()]),
        &int_top(&[(-1, 1), (0, 2)])?,
        seed,
        budget,
    )?);
    out.extend(cell("boundsR/arbitrary", &lin5_s2, Level::BoundsR, &ids(&v[..2], &arb), &sq, seed, budget)?);

    out.extend(parity_witness()?);
    Ok(out)
}

/// `2x + 2y = 5` over `{0..2}²`: one step leaves `{1,2}²`, which has no
/// solution; bounds(R) holds while bounds(Z) and domain completeness do not.
fn parity_witness() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let top = int_top(&[(0, 2), (0, 2)])?;
    let v = xs(3);
    let s2 = View::scale(2)?;
    let p = cat::linear_eq(&[(2, v[0]), (2, v[1])], 5)?;
    let (r, _) = apply(&p, &top);
    let expect = int_top(&[(1, 2), (1, 2)])?;
    let name = "witness/2x+2y=5/one-step";
    out.push(if r == expect {
        CheckReport::pass(name, 1, Mode::Exhaustive).with_note(format!("result {}", encode_store(&r)))
    } else {
        CheckReport::fail(name, 1, Mode::Exhaustive, Witness::with(&top, &expect, &r))
    });
    let space = Space::new(&top)?;
    let c = associated_constraint(&p, &space)?;
    for level in [Level::Domain, Level::BoundsZ, Level::BoundsR] {
        let t = completeness_target(&p, &c, level, &top)?;
        let holds = r.is_stronger(&t)?;
        let name = format!("witness/2x+2y=5/{}-{level}", if level == Level::BoundsR { "holds" } else { "violated" });
        let ok = holds == (level == Level::BoundsR);
        let mut rep = CheckReport::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, 1, Mode::Exhaustive);
        rep.witness = Some(Witness::with(&top, &t, &r));
        out.push(rep);
    }
    let mut s = top.clone();
    let o = Engine::new(vec![p.into_dyn()]).run(&mut s)?;
    out.push(
        CheckReport::new(
            "witness/2x+2y=5/engine",
            if o == Outcome::Failed { Verdict::Pass } else { Verdict::Fail },
            1,
            Mode::Exhaustive,
        )
        .with_note("rerunning the step on {1,2}² detects the parity failure"),
    );
    let top3 = int_top(&[(0, 2); 3])?;
    let p3 = derive(&cat::linear_eq_unit(&v, 5)?, &ids(&v, &[s2.clone(), s2.clone(), s2]))?;
    let mut s3 = top3.clone();
    let o3 = Engine::new(vec![p3.clone().into_dyn()]).run(&mut s3)?;
    let space3 = Space::new(&top3)?;
    let none = associated_constraint(&p3, &space3)?.is_empty();
    let ok = o3 == Outcome::Stable && none;
    let rep = CheckReport::new(
        "witness/2x+2y+2z=5/engine-fixpoint",
        if ok { Verdict::Pass } else { Verdict::Fail },
        1,
        Mode::Exhaustive,
    )
    .with_note(format!("non-failed fixpoint {} without solutions", encode_store(&s3)));
    out.push(rep);
    Ok(out)
}

fn ints(lo: i64, hi: i64) -> Vec<Value> {
    (lo..=hi).map(Value::Int).collect()
}

fn lemmas(seed: u64) -> Result<Vec<CheckReport>> {
    let u = set_universe();
    let sets: Vec<Value> = SetDomain::new(IntSet::new(), u.clone()).members().into_iter().map(Value::Set).collect();
    let mut views: Vec<(View, Vec<Value>)> = int_views().into_iter().map(|v| (v, ints(-2, 2))).collect();
    views.push((View::bool_neg(), ints(0, 1)));
    views.push((View::complement(u), sets));
    views.push((View::singleton(), ints(0, 4)));
    views.push((shuffle_view(), ints(0, 4)));
    let mut out = Vec::new();
    for (i, (v, vals)) in views.iter().enumerate() {
        out.extend(prefixed(&v.to_string(), check_view_lemmas(v, vals, 200, seed.wrapping_add(i as u64))));
    }
    Ok(out)
}

fn events(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for sh in shapes() {
        for fam in families(&sh) {
            let inst = instance(&sh, &fam, None)?;
            let space = Space::new(&inst.store)?;
            let es = inst.p.subscriptions().to_vec();
            out.push(check_event_set(&inst.p, &es, &space).named(format!("{}/event-set", inst.label)));
        }
    }
    // a linear equation woken only on fixing misses bound changes
    let top = int_top(&[(0, 3); 3])?;
    let space = Space::new(&top)?;
    let v = xs(3);
    let p = cat::linear_eq_unit(&v, 4)?;
    let fix_only: Vec<(VarId, EventMask)> = v.iter().map(|&x| (x, EventMask::FIX)).collect();
    out.push(check_event_set(&p, &fix_only, &space).expect_failure("linear_eq3/fix-only/rejected"));
    out.extend(compare_engines(1000, seed)?);
    Ok(out)
}
