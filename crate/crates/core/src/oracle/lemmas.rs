//! View lemmas and view classification by enumeration over a finite source
//! universe.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::{Sort, Universe, Value, VarDomain};
use crate::views::{Classification, View};

use super::{CheckReport, Mode};

/// Strongest domain of `sort` holding `vals`, convex for numeric sorts.
fn conv(sort: Sort, vals: &[&Value]) -> VarDomain {
    let d = VarDomain::from_values(sort, vals);
    match d.as_int_domain() {
        Some(i) if sort.is_numeric() => VarDomain::numeric(sort, i.hull()),
        _ => d,
    }
}

fn subsets<T: Clone>(xs: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (1u32..(1 << xs.len())).map(move |m| {
        xs.iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .map(|(_, x)| x.clone())
            .collect()
    })
}

fn wide_universe() -> Universe {
    Universe::default().with_set((-64..=64).collect())
}

/// Verifies the interval equations of `view` over source values `vals`.
/// Returns the strongest class whose equation holds and, if some stronger
/// equation fails, a description of the first counterexample.
pub fn classify_view(view: &View, vals: &[Value]) -> (Classification, Option<String>) {
    let u = wide_universe();
    let images: Vec<Value> = vals.iter().filter_map(|v| view.map(v)).collect();
    for s in subsets(&images) {
        let refs: Vec<&Value> = s.iter().collect();
        let lhs = view.preimage_domain(&conv(view.target(), &refs));
        let pre: Vec<Value> = s.iter().filter_map(|v| view.unmap(v)).collect();
        let prefs: Vec<&Value> = pre.iter().collect();
        let rhs = conv(view.source(), &prefs);
        if lhs != rhs {
            let shown: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            return (
                Classification::Arbitrary,
                Some(format!("injective equation fails on {{{}}}: {lhs} vs {rhs}", shown.join(","))),
            );
        }
    }
    for dset in subsets(vals) {
        let refs: Vec<&Value> = dset.iter().collect();
        let lhs = match view.image_domain(&conv(view.source(), &refs), &u) {
            Ok(d) => d,
            Err(e) => return (Classification::IntervalInjective, Some(e.to_string())),
        };
        let imgs: Vec<Value> = dset.iter().filter_map(|v| view.map(v)).collect();
        let irefs: Vec<&Value> = imgs.iter().collect();
        let rhs = conv(view.target(), &irefs);
        if lhs != rhs {
            let shown: Vec<String> = dset.iter().map(|v| v.to_string()).collect();
            return (
                Classification::IntervalInjective,
                Some(format!("bijective equation fails on {{{}}}: {lhs} vs {rhs}", shown.join(","))),
            );
        }
    }
    (Classification::IntervalBijective, None)
}

type Relation = BTreeSet<Vec<Value>>;

fn dom_at(sort: Sort, rel: &Relation, i: usize) -> VarDomain {
    let vals: Vec<&Value> = rel.iter().map(|t| &t[i]).collect();
    VarDomain::from_values(sort, &vals)
}

fn random_relation(rng: &mut ChaCha8Rng, vals: &[Value], arity: usize) -> Relation {
    let mut out = Relation::new();
    let n = vals.len();
    let total = n.pow(arity as u32);
    for k in 0..total {
        if rng.gen_bool(0.4) {
            let mut t = Vec::with_capacity(arity);
            let mut r = k;
            for _ in 0..arity {
                t.push(vals[r % n].clone());
                r /= n;
            }
            out.insert(t);
        }
    }
    out
}

fn preimage_rel(view: &View, vals: &[Value], rel: &Relation, arity: usize) -> Relation {
    let mut out = Relation::new();
    let n = vals.len();
    for k in 0..n.pow(arity as u32) {
        let mut t = Vec::with_capacity(arity);
        let mut r = k;
        for _ in 0..arity {
            t.push(vals[r % n].clone());
            r /= n;
        }
        let img: Option<Vec<Value>> = t.iter().map(|v| view.map(v)).collect();
        if img.is_some_and(|im| rel.contains(&im)) {
            out.insert(t);
        }
    }
    out
}

/// Checks domain injectivity, preimage of intersections and the declared
/// classification of `view` over source values `vals`.
pub fn check_view_lemmas(view: &View, vals: &[Value], samples: u64, seed: u64) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    // φ⁻(dom(c)) = dom(φ⁻(c)) for c in the image of the view
    let unary = (1u64 << vals.len()) - 1;
    let mut dom_inj = CheckReport::pass("dom-injective", unary + samples, Mode::Sampled);
    let mut cases: Vec<(usize, Relation)> = subsets(vals).map(|s| (1, s.into_iter().map(|v| vec![v]).collect())).collect();
    cases.extend((0..samples).map(|_| (2, random_relation(&mut rng, vals, 2))));
    for (arity, src) in &cases {
        if src.is_empty() {
            continue;
        }
        let img: Relation = src
            .iter()
            .map(|t| t.iter().map(|v| view.map(v).expect("value in view domain")).collect())
            .collect();
        for i in 0..*arity {
            let lhs = view.preimage_domain(&dom_at(view.target(), &img, i));
            let rhs = dom_at(view.source(), src, i);
            if lhs != rhs && dom_inj.passed() {
                dom_inj.verdict = super::Verdict::Fail;
                dom_inj.note = Some(format!("position {i}: {lhs} vs {rhs}"));
            }
        }
    }
    out.push(dom_inj);

    // φ⁻(c₁ ∩ c₂) = φ⁻(c₁) ∩ φ⁻(c₂) over target relations, images and misses
    let mut targets: Vec<Value> = vals.iter().filter_map(|v| view.map(v)).collect();
    if view.target().is_numeric() {
        let extra: Vec<Value> = targets
            .iter()
            .filter_map(|v| v.as_int())
            .flat_map(|v| [v - 1, v + 1])
            .filter(|v| view.target() == Sort::Int || (0..=1).contains(v))
            .map(Value::Int)
            .collect();
        targets.extend(extra);
    }
    targets.sort();
    targets.dedup();
    let mut meet = CheckReport::pass("preimage-meet", samples, Mode::Sampled);
    for _ in 0..samples {
        let c1 = random_relation(&mut rng, &targets, 2);
        let c2 = random_relation(&mut rng, &targets, 2);
        let both: Relation = c1.intersection(&c2).cloned().collect();
        let lhs = preimage_rel(view, vals, &both, 2);
        let p1 = preimage_rel(view, vals, &c1, 2);
        let p2 = preimage_rel(view, vals, &c2, 2);
        let rhs: Relation = p1.intersection(&p2).cloned().collect();
        if lhs != rhs {
            meet.verdict = super::Verdict::Fail;
            meet.note = Some(format!("{} vs {} tuples", lhs.len(), rhs.len()));
            break;
        }
    }
    out.push(meet);

    let (class, why) = classify_view(view, vals);
    let declared = view.classification();
    let mut r = CheckReport::pass("classification", (1u64 << vals.len()) - 1, Mode::Exhaustive);
    if class != declared {
        r.verdict = super::Verdict::Fail;
    }
    let mut note = format!("declared={declared} verified={class}");
    if let Some(w) = why {
        note.push_str(&format!(" ({w})"));
    }
    out.push(r.with_note(note));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(lo: i64, hi: i64) -> Vec<Value> {
        (lo..=hi).map(Value::Int).collect()
    }

    #[test]
    fn classification_of_basic_views() {
        assert_eq!(classify_view(&View::minus(), &ints(0, 4)).0, Classification::IntervalBijective);
        let (c, why) = classify_view(&View::scale(2).unwrap(), &ints(0, 4));
        assert_eq!(c, Classification::IntervalInjective);
        assert!(why.unwrap().contains("bijective"));
        assert_eq!(classify_view(&View::singleton(), &ints(0, 4)).0, Classification::Arbitrary);
    }
}
