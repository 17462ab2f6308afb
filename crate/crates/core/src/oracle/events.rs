//! Event-set correctness by enumeration, and engine agreement between the
//! declared event sets and waking on every change.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derive::Derived;
use crate::domains::{DomainStore, Footprint, IntDomain, IntSet, Sort, VarDomain, VarId};
use crate::error::Result;
use crate::kernel::{events_from, Engine, EngineOptions, EventMask, EventPolicy, Outcome, Propagator};
use crate::propagators as cat;
use crate::views::View;

use super::{encode_store, CheckReport, Mode, Space, Witness};

/// Checks that `es` is a correct event set for `p` over `space`:
///
/// 1. if `p(d)` is not a fixpoint, the change from `d` to `p(d)` fires `es`;
/// 2. below a fixpoint `d`, every non-fixpoint `d′` differs from `d` by an
///    event in `es`.
pub fn check_event_set(p: &dyn Propagator, es: &[(VarId, EventMask)], space: &Space) -> CheckReport {
    let vars = space.vars();
    let mask: Vec<EventMask> = vars
        .iter()
        .map(|x| {
            es.iter()
                .filter(|e| e.0 == *x)
                .fold(EventMask::NONE, |m, e| m | e.1)
        })
        .collect();
    // ev[k][a][b]: events on variable k when its domain a narrows to b
    let nsub: Vec<usize> = (0..vars.len())
        .map(|k| {
            let top = space.locate(space.top()).unwrap();
            space.below(k, top[k]).len()
        })
        .collect();
    let ev: Vec<Vec<Vec<EventMask>>> = (0..vars.len())
        .map(|k| {
            (0..nsub[k])
                .map(|a| {
                    let from = Footprint::of(space.sub_domain(k, a));
                    (0..nsub[k]).map(|b| events_from(from, space.sub_domain(k, b))).collect()
                })
                .collect()
        })
        .collect();
    let n = space.len();
    let results: Vec<DomainStore> = (0..n).map(|i| super::apply(p, &space.store(i)).0).collect();
    let fix: Vec<bool> = (0..n)
        .map(|i| {
            let r = &results[i as usize];
            !r.is_failed() && *r == space.store(i)
        })
        .collect();
    let fires = |a: &[usize], b: &[usize]| (0..a.len()).any(|k| ev[k][a[k]][b[k]].intersects(mask[k]));

    for i in 0..n {
        let ds = space.digits(i);
        let r = &results[i as usize];
        if r.is_failed() || fix[i as usize] {
            continue;
        }
        let rs = space.locate(r).expect("result inside the space");
        if !fix[space.index_of(&rs) as usize] && !fires(&ds, &rs) {
            return CheckReport::fail(
                "event-set/non-idempotent-step",
                n,
                Mode::Exhaustive,
                Witness::with(&space.store(i), r, &results[space.index_of(&rs) as usize]),
            );
        }
    }
    for i in 0..n {
        if !fix[i as usize] {
            continue;
        }
        let ds = space.digits(i);
        let silent: Vec<Vec<usize>> = (0..ds.len())
            .map(|k| {
                space
                    .below(k, ds[k])
                    .iter()
                    .copied()
                    .filter(|&b| !ev[k][ds[k]][b].intersects(mask[k]))
                    .collect()
            })
            .collect();
        let mut cur = vec![0usize; ds.len()];
        loop {
            let sub: Vec<usize> = cur.iter().enumerate().map(|(k, &c)| silent[k][c]).collect();
            let j = space.index_of(&sub);
            if !fix[j as usize] {
                let d2 = space.store(j);
                return CheckReport::fail(
                    "event-set/silent-change",
                    n,
                    Mode::Exhaustive,
                    Witness::with(&space.store(i), &d2, &results[j as usize]),
                )
                .with_note(format!("{} is not a fixpoint", encode_store(&d2)));
            }
            let mut k = ds.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < silent[k].len() {
                    break;
                }
                cur[k] = 0;
            }
            if cur.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    CheckReport::pass("event-set", n, Mode::Exhaustive)
}

fn random_int_view(rng: &mut ChaCha8Rng) -> View {
    match rng.gen_range(0..5) {
        0 | 1 => View::identity(Sort::Int),
        2 => View::minus(),
        3 => View::offset(rng.gen_range(-2..=2)),
        _ => View::scale(2).unwrap(),
    }
}

fn random_domain(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> IntDomain {
    loop {
        let d = IntDomain::from_values((lo..=hi).filter(|_| rng.gen_bool(0.7)));
        if !d.is_empty() {
            return d;
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, xs: &[VarId], k: usize) -> Vec<VarId> {
    xs.choose_multiple(rng, k).copied().collect()
}

fn with_random_views(rng: &mut ChaCha8Rng, p: Derived) -> Result<Derived> {
    let views: Vec<View> = p
        .params()
        .iter()
        .map(|x| match x.sort {
            Sort::Int => random_int_view(rng),
            Sort::Bool if rng.gen_bool(0.3) => View::bool_neg(),
            Sort::Set if rng.gen_bool(0.3) => View::complement((0..3).collect()),
            s => View::identity(s),
        })
        .collect();
    p.with_views(&views)
}

/// A random small model: integer, Boolean and set variables with a few
/// catalog propagators on random views.
pub(crate) fn random_instance(rng: &mut ChaCha8Rng) -> Result<(DomainStore, Vec<std::sync::Arc<dyn Propagator>>)> {
    let mut s = DomainStore::default();
    let ni = rng.gen_range(3..=5);
    let ints: Vec<VarId> = (0..ni)
        .map(|_| s.add_var(VarDomain::Int(random_domain(rng, -3, 3))))
        .collect::<Result<_>>()?;
    let bools: Vec<VarId> = (0..3).map(|_| s.add_bool()).collect();
    let universe: IntSet = (0..3).collect();
    let sets: Vec<VarId> = (0..3).map(|_| s.add_set(universe.clone())).collect();
    let mut props = Vec::new();
    for _ in 0..rng.gen_range(2..=5) {
        let p = match rng.gen_range(0..12) {
            0 => {
                let v = pick(rng, &ints, 3);
                cat::max_ternary(v[0], v[1], v[2])?
            }
            1 => {
                let k = rng.gen_range(2..=3);
                let c = rng.gen_range(-2..=2);
                cat::linear_eq_unit(&pick(rng, &ints, k), c)?
            }
            2 => {
                let c = rng.gen_range(-2..=2);
                cat::linear_neq_unit(&pick(rng, &ints, 2), c)?
            }
            3 => {
                let c = rng.gen_range(-2..=2);
                cat::linear_eq_unit_dom(&pick(rng, &ints, 3), c)?
            }
            4 => cat::distinct_domain(&pick(rng, &ints, 3))?,
            5 => cat::distinct_weak(&pick(rng, &ints, 3))?,
            6 => {
                let v = pick(rng, &ints, 2);
                if rng.gen_bool(0.5) {
                    cat::int_eq(v[0], v[1])?
                } else {
                    cat::int_eq_bounds(v[0], v[1])?
                }
            }
            7 => {
                let v = pick(rng, &ints, 2);
                let cs: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
                cat::element_vals(&cs, v[0], v[1])?
            }
            8 => {
                let v = pick(rng, &ints, 2);
                let b = bools[rng.gen_range(0..3)];
                cat::reified_eq(v[0], v[1], b)?
            }
            9 => {
                let v = pick(rng, &ints, 3);
                // multiplication needs positive operands; no views here
                props.push(cat::mult_ppp(v[0], v[1], v[2])?.into_dyn());
                continue;
            }
            10 => {
                let b = pick(rng, &bools, 3);
                if rng.gen_bool(0.5) {
                    cat::bool_or_n(&b[..2], b[2])?
                } else {
                    let c = rng.gen_range(0..=3);
                    cat::bool_card_geq(&b, c)?
                }
            }
            _ => {
                let v = pick(rng, &sets, 3);
                if rng.gen_bool(0.5) {
                    cat::set_intersect(v[0], v[1], v[2])?
                } else {
                    cat::subset(v[0], v[1])?
                }
            }
        };
        props.push(with_random_views(rng, p)?.into_dyn());
    }
    Ok((s, props))
}

fn run(props: &[std::sync::Arc<dyn Propagator>], s: &DomainStore, opts: EngineOptions) -> Result<(DomainStore, Outcome)> {
    let mut st = s.clone();
    let o = Engine::with_options(props.to_vec(), opts).run(&mut st)?;
    Ok((st, o))
}

/// Runs `n` random instances with declared event sets, with waking on every
/// change, and with a shuffled queue; all three must reach the same store.
pub fn compare_engines(n: u64, seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dmc = CheckReport::pass("engine/declared-vs-all-dmc", n, Mode::Sampled);
    let mut shuf = CheckReport::pass("engine/fifo-vs-shuffled", n, Mode::Sampled);
    let mut stable = 0u64;
    for k in 0..n {
        let (s, props) = random_instance(&mut rng)?;
        let (a, oa) = run(&props, &s, EngineOptions::default())?;
        let (b, ob) = run(
            &props,
            &s,
            EngineOptions {
                policy: EventPolicy::AllDmc,
                shuffle: None,
            },
        )?;
        let (c, oc) = run(
            &props,
            &s,
            EngineOptions {
                policy: EventPolicy::Declared,
                shuffle: Some(seed ^ k),
            },
        )?;
        stable += (oa == Outcome::Stable) as u64;
        if dmc.passed() && (a != b || oa != ob) {
            dmc = CheckReport::fail(dmc.name.clone(), n, Mode::Sampled, Witness::with(&s, &b, &a));
        }
        if shuf.passed() && (a != c || oa != oc) {
            shuf = CheckReport::fail(shuf.name.clone(), n, Mode::Sampled, Witness::with(&s, &a, &c));
        }
    }
    let note = format!("{stable} of {n} instances reach a non-failed fixpoint");
    Ok(vec![dmc.with_note(note.clone()), shuf.with_note(note)])
}
