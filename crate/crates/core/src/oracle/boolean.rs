//! Boolean transformation identities against a brute-force domain
//! consistent oracle built from the formula, over every Boolean store.

use crate::derive::Derived;
use crate::domains::{dom_of, DomainStore, ExtensionalConstraint, Value, VarId};
use crate::error::Result;
use crate::propagators as cat;

use super::{apply, CheckReport, Mode, Space, Witness};

fn bools(n: usize) -> (DomainStore, Vec<VarId>) {
    let mut s = DomainStore::default();
    let xs = (0..n).map(|_| s.add_bool()).collect();
    (s, xs)
}

/// The constraint `{a ∈ {0,1}ⁿ : pred(a)}` over `vars`.
fn formula(vars: &[VarId], pred: impl Fn(&[i64]) -> bool) -> Result<ExtensionalConstraint> {
    let n = vars.len();
    let tuples = (0u32..1 << n).filter_map(|m| {
        let a: Vec<i64> = (0..n).map(|i| (m >> i & 1) as i64).collect();
        pred(&a).then(|| a.into_iter().map(Value::Int).collect())
    });
    ExtensionalConstraint::from_tuples(vars.to_vec(), tuples)
}

/// `p(d) = dom(c ∩ d)` on every store below `top`; failed results only need
/// to agree on failure.
pub fn check_domain_equal(name: &str, p: &Derived, c: &ExtensionalConstraint, top: &DomainStore) -> Result<CheckReport> {
    let space = Space::new(top)?;
    let n = space.len();
    for i in 0..n {
        let d = space.store(i);
        let (r, _) = apply(p, &d);
        let t = dom_of(&c.restrict_to(&d), &d);
        let same = if t.is_failed() || r.is_failed() { t.is_failed() == r.is_failed() } else { r == t };
        if !same {
            return Ok(CheckReport::fail(name, n, Mode::Exhaustive, Witness::with(&d, &t, &r)));
        }
    }
    Ok(CheckReport::pass(name, n, Mode::Exhaustive))
}

/// `Σ¬xᵢ ≥ n − c` against `Σxᵢ ≤ c` for n ≤ 6, conjunction from disjunction
/// and xor from equivalence.
pub fn check_boolean_identities() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let mut card = Vec::new();
    for n in 1..=6usize {
        let (top, xs) = bools(n);
        for c in 0..=n as i64 {
            let p = cat::bool_card_leq(&xs, c)?;
            let f = formula(&xs, |a| a.iter().sum::<i64>() <= c)?;
            card.push(check_domain_equal(&format!("card-leq/n={n}/c={c}"), &p, &f, &top)?);
        }
    }
    out.push(summarize("card-leq", card));

    let mut and = Vec::new();
    for n in 1..=5usize {
        let (top, v) = bools(n + 1);
        let p = cat::bool_and_n(&v[..n], v[n])?;
        let f = formula(&v, |a| (a[..n].iter().all(|&b| b == 1)) == (a[n] == 1))?;
        and.push(check_domain_equal(&format!("and/n={n}"), &p, &f, &top)?);
    }
    out.push(summarize("and-from-or", and));

    let (top, v) = bools(3);
    let p = cat::bool_xor(v[0], v[1], v[2])?;
    let f = formula(&v, |a| (a[0] ^ a[1]) == a[2])?;
    out.push(check_domain_equal("xor-from-eqv", &p, &f, &top)?);
    Ok(out)
}

/// Folds a family of reports into one: the first failure, or a pass counting
/// all instances.
fn summarize(name: &str, rs: Vec<CheckReport>) -> CheckReport {
    let total = rs.iter().map(|r| r.instances).sum();
    match rs.into_iter().find(|r| !r.passed()) {
        Some(f) => {
            let note = f.name.clone();
            let mut f = f.named(name);
            f.instances = total;
            f.with_note(note)
        }
        None => CheckReport::pass(name, total, Mode::Exhaustive),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_counts_models() {
        let (_, xs) = bools(3);
        assert_eq!(formula(&xs, |a| a.iter().sum::<i64>() <= 1).unwrap().len(), 4);
    }
}
