use fdviews::decompose::{catalog_pairs, check_decomposition_equiv, decompose};
use fdviews::oracle::Verdict;
use fdviews::prelude::*;

#[test]
fn catalog_pairs_are_equivalent_and_acyclic() {
    let pairs = catalog_pairs().unwrap();
    assert!(pairs.len() >= 5);
    for (label, p, top) in &pairs {
        let r = check_decomposition_equiv(p, top).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{label}: {r}");
        assert!(decompose(p, top).unwrap().is_berge_acyclic(), "{label}");
    }
}

#[test]
fn constants_become_fixed_fresh_variables() {
    let mut s = DomainStore::default();
    let x = s.add_set((0..3).collect());
    let y = s.add_set((0..3).collect());
    let m = decompose(&set_disjoint(x, y).unwrap(), &s).unwrap();
    assert_eq!(m.fresh.len(), 3);
    assert_eq!(m.channels.len(), 2);
    assert!(m.store.get(m.fresh[2]).is_fixed());
}

#[test]
fn failure_maps_to_failure() {
    let mut s = DomainStore::default();
    let x = s.add_int(0, 2).unwrap();
    let y = s.add_int(0, 2).unwrap();
    let p = linear_eq(&[(2, x), (2, y)], 5).unwrap();
    let (_, o, _) = fdviews::kernel::run_fixpoint(&s, vec![p.clone().into_dyn()]).unwrap();
    let m = decompose(&p, &s).unwrap();
    let (_, o2, _) = fdviews::kernel::run_fixpoint(&m.store, m.propagators.clone()).unwrap();
    assert_eq!(o, Outcome::Failed);
    assert_eq!(o2, Outcome::Failed);
}
