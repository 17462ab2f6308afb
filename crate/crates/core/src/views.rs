//! Injective per-variable value maps and their domain transforms.

use std::fmt;
use std::sync::Arc;

use crate::domains::{BoolDomain, IntDomain, IntSet, SetDomain, Sort, Universe, Value, VarDomain};
use crate::error::{Error, Result};

/// How a view interacts with interval hulls, weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Classification {
    Arbitrary,
    IntervalInjective,
    IntervalBijective,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Arbitrary => "arbitrary",
            Classification::IntervalInjective => "interval-injective",
            Classification::IntervalBijective => "interval-bijective",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

impl Monotonicity {
    fn then(self, other: Monotonicity) -> Monotonicity {
        use Monotonicity::*;
        match (self, other) {
            (None, _) | (_, None) => None,
            (a, b) if a == b => Increasing,
            _ => Decreasing,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ViewKind {
    Identity,
    /// `v ↦ scale·v + offset`, `scale ≠ 0`.
    Affine { scale: i64, offset: i64 },
    /// `s ↦ U ∖ s` for the carried universe `U`.
    Complement(Arc<IntSet>),
    /// `v ↦ {v}`, from integers to sets.
    Singleton,
    /// Finite injective table, sorted by source value.
    Lookup(Arc<Vec<(i64, i64)>>),
    /// Composition, innermost view first.
    Chain(Vec<View>),
}

/// Fused access path for views whose domain image is exact and cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Map {
    Identity,
    Affine(i64, i64),
    Complement(Arc<IntSet>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct View {
    source: Sort,
    target: Sort,
    kind: ViewKind,
}

impl fmt::Debug for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViewKind::Identity => f.write_str("id"),
            ViewKind::Affine { scale: -1, offset: 1 } if self.source == Sort::Bool => f.write_str("neg"),
            ViewKind::Affine { scale: -1, offset: 0 } => f.write_str("minus"),
            ViewKind::Affine { scale: 1, offset } => write!(f, "offset({offset})"),
            ViewKind::Affine { scale, offset: 0 } => write!(f, "scale({scale})"),
            ViewKind::Affine { scale, offset } => write!(f, "affine({scale},{offset})"),
            ViewKind::Complement(_) => f.write_str("complement"),
            ViewKind::Singleton => f.write_str("singleton"),
            ViewKind::Lookup(t) => {
                f.write_str("lookup[")?;
                for (i, (a, b)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}:{b}")?;
                }
                f.write_str("]")
            }
            ViewKind::Chain(vs) => {
                for (i, v) in vs.iter().rev().enumerate() {
                    if i > 0 {
                        f.write_str("∘")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl View {
    pub fn identity(sort: Sort) -> View {
        View {
            source: sort,
            target: sort,
            kind: ViewKind::Identity,
        }
    }

    /// Boolean negation `v ↦ 1 − v`.
    pub fn bool_neg() -> View {
        View {
            source: Sort::Bool,
            target: Sort::Bool,
            kind: ViewKind::Affine { scale: -1, offset: 1 },
        }
    }

    pub fn minus() -> View {
        Self::int_affine(-1, 0)
    }

    pub fn offset(o: i64) -> View {
        Self::int_affine(1, o)
    }

    pub fn scale(a: i64) -> Result<View> {
        if a == 0 {
            return Err(Error::Usage("scale view needs a non-zero factor".into()));
        }
        Ok(Self::int_affine(a, 0))
    }

    /// `v ↦ a·v + o` on integers.
    pub fn affine(a: i64, o: i64) -> Result<View> {
        if a == 0 {
            return Err(Error::Usage("affine view needs a non-zero factor".into()));
        }
        Ok(Self::int_affine(a, o))
    }

    fn int_affine(scale: i64, offset: i64) -> View {
        let kind = if scale == 1 && offset == 0 {
            ViewKind::Identity
        } else {
            ViewKind::Affine { scale, offset }
        };
        View {
            source: Sort::Int,
            target: Sort::Int,
            kind,
        }
    }

    /// Set complement with respect to `universe`.
    pub fn complement(universe: IntSet) -> View {
        View {
            source: Sort::Set,
            target: Sort::Set,
            kind: ViewKind::Complement(Arc::new(universe)),
        }
    }

    /// Channeling view from an integer to the singleton set holding it.
    pub fn singleton() -> View {
        View {
            source: Sort::Int,
            target: Sort::Set,
            kind: ViewKind::Singleton,
        }
    }

    /// Finite table view on integers; the source universe is the key set.
    pub fn lookup(pairs: impl IntoIterator<Item = (i64, i64)>) -> Result<View> {
        let mut t: Vec<(i64, i64)> = pairs.into_iter().collect();
        t.sort_unstable();
        let keys_unique = t.windows(2).all(|w| w[0].0 != w[1].0);
        let mut vals: Vec<i64> = t.iter().map(|p| p.1).collect();
        vals.sort_unstable();
        let vals_unique = vals.windows(2).all(|w| w[0] != w[1]);
        if t.is_empty() || !keys_unique || !vals_unique {
            return Err(Error::Usage("lookup view must be a non-empty injective table".into()));
        }
        Ok(View {
            source: Sort::Int,
            target: Sort::Int,
            kind: ViewKind::Lookup(Arc::new(t)),
        })
    }

    /// `outer ∘ inner`: first `inner`, then `outer`.
    pub fn compose(outer: &View, inner: &View) -> Result<View> {
        if inner.target != outer.source {
            return Err(Error::Usage(format!(
                "cannot compose {outer} ({}→{}) after {inner} ({}→{})",
                outer.source, outer.target, inner.source, inner.target
            )));
        }
        if matches!(inner.kind, ViewKind::Identity) {
            return Ok(outer.clone());
        }
        if matches!(outer.kind, ViewKind::Identity) {
            return Ok(inner.clone());
        }
        match (&outer.kind, &inner.kind) {
            (ViewKind::Affine { scale: a1, offset: o1 }, ViewKind::Affine { scale: a2, offset: o2 }) => {
                let folded = a1
                    .checked_mul(*a2)
                    .and_then(|a| Some((a, a1.checked_mul(*o2)?.checked_add(*o1)?)));
                if let Some((a, o)) = folded {
                    let kind = if a == 1 && o == 0 {
                        ViewKind::Identity
                    } else {
                        ViewKind::Affine { scale: a, offset: o }
                    };
                    return Ok(View {
                        source: inner.source,
                        target: outer.target,
                        kind,
                    });
                }
            }
            (ViewKind::Complement(u1), ViewKind::Complement(u2)) if u1 == u2 => {
                return Ok(View::identity(Sort::Set));
            }
            _ => {}
        }
        let mut parts = Vec::new();
        for v in [inner, outer] {
            match &v.kind {
                ViewKind::Chain(vs) => parts.extend(vs.iter().cloned()),
                _ => parts.push(v.clone()),
            }
        }
        Ok(View {
            source: inner.source,
            target: outer.target,
            kind: ViewKind::Chain(parts),
        })
    }

    pub fn source(&self) -> Sort {
        self.source
    }

    pub fn target(&self) -> Sort {
        self.target
    }

    pub fn kind(&self) -> &ViewKind {
        &self.kind
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, ViewKind::Identity)
    }

    /// `Some((a, o))` when the view is `v ↦ a·v + o` (identity included).
    pub fn as_affine(&self) -> Option<(i64, i64)> {
        match self.kind {
            ViewKind::Identity if self.source.is_numeric() => Some((1, 0)),
            ViewKind::Affine { scale, offset } => Some((scale, offset)),
            _ => None,
        }
    }

    pub fn classification(&self) -> Classification {
        match &self.kind {
            ViewKind::Identity | ViewKind::Complement(_) => Classification::IntervalBijective,
            ViewKind::Affine { scale, .. } if scale.abs() == 1 => Classification::IntervalBijective,
            ViewKind::Affine { .. } => Classification::IntervalInjective,
            ViewKind::Singleton | ViewKind::Lookup(_) => Classification::Arbitrary,
            ViewKind::Chain(vs) => vs.iter().map(View::classification).min().unwrap(),
        }
    }

    pub fn monotonicity(&self) -> Monotonicity {
        match &self.kind {
            ViewKind::Identity => Monotonicity::Increasing,
            ViewKind::Affine { scale, .. } if *scale > 0 => Monotonicity::Increasing,
            ViewKind::Affine { .. } | ViewKind::Complement(_) => Monotonicity::Decreasing,
            ViewKind::Singleton | ViewKind::Lookup(_) => Monotonicity::None,
            ViewKind::Chain(vs) => vs.iter().fold(Monotonicity::Increasing, |m, v| m.then(v.monotonicity())),
        }
    }

    /// True iff `image_domain` is the exact elementwise image.
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            ViewKind::Singleton => false,
            ViewKind::Chain(vs) => vs.iter().all(View::is_exact),
            _ => true,
        }
    }

    pub(crate) fn fused(&self) -> Option<Map> {
        match &self.kind {
            ViewKind::Identity => Some(Map::Identity),
            ViewKind::Affine { scale, offset } => Some(Map::Affine(*scale, *offset)),
            ViewKind::Complement(u) => Some(Map::Complement(u.clone())),
            _ => None,
        }
    }

    /// Elementwise map; `None` outside the view's source universe or on overflow.
    pub fn map(&self, v: &Value) -> Option<Value> {
        match (&self.kind, v) {
            (ViewKind::Identity, _) => Some(v.clone()),
            (ViewKind::Affine { scale, offset }, Value::Int(x)) => {
                let y = x.checked_mul(*scale)?.checked_add(*offset)?;
                if self.target == Sort::Bool && !(0..=1).contains(&y) {
                    return None;
                }
                Some(Value::Int(y))
            }
            (ViewKind::Complement(u), Value::Set(s)) => {
                if !s.is_subset(u) {
                    return None;
                }
                Some(Value::Set(u.difference(s).copied().collect()))
            }
            (ViewKind::Singleton, Value::Int(x)) => Some(Value::Set([*x].into())),
            (ViewKind::Lookup(t), Value::Int(x)) => {
                t.binary_search_by_key(x, |p| p.0).ok().map(|i| Value::Int(t[i].1))
            }
            (ViewKind::Chain(vs), _) => vs.iter().try_fold(v.clone(), |acc, w| w.map(&acc)),
            _ => None,
        }
    }

    /// Partial inverse of [`View::map`].
    pub fn unmap(&self, v: &Value) -> Option<Value> {
        match (&self.kind, v) {
            (ViewKind::Identity, _) => Some(v.clone()),
            (ViewKind::Affine { scale, offset }, Value::Int(y)) => {
                let d = (*y as i128) - (*offset as i128);
                let a = *scale as i128;
                if d % a != 0 {
                    return None;
                }
                i64::try_from(d / a).ok().map(Value::Int)
            }
            (ViewKind::Complement(u), Value::Set(s)) => {
                if !s.is_subset(u) {
                    return None;
                }
                Some(Value::Set(u.difference(s).copied().collect()))
            }
            (ViewKind::Singleton, Value::Set(s)) if s.len() == 1 => s.first().map(|&x| Value::Int(x)),
            (ViewKind::Lookup(t), Value::Int(y)) => t.iter().find(|p| p.1 == *y).map(|p| Value::Int(p.0)),
            (ViewKind::Chain(vs), _) => vs.iter().rev().try_fold(v.clone(), |acc, w| w.unmap(&acc)),
            _ => None,
        }
    }

    /// `φ(D)`: the image of a domain of the source sort. Errors when the image
    /// leaves the target universe or the source lies outside the view's domain.
    pub fn image_domain(&self, d: &VarDomain, universe: &Universe) -> Result<VarDomain> {
        if d.sort() != self.source {
            return Err(Error::Usage(format!("{self} expects a {} domain, got {}", self.source, d.sort())));
        }
        match &self.kind {
            ViewKind::Identity => Ok(d.clone()),
            ViewKind::Affine { scale, offset } => {
                let src = d.as_int_domain().expect("numeric");
                let img = src
                    .map_affine(*scale, *offset)
                    .ok_or_else(|| Error::Overflow(format!("{self} overflows on {d}")))?;
                if self.target == Sort::Bool {
                    if img.min().is_some_and(|m| m < 0) || img.max().is_some_and(|m| m > 1) {
                        return Err(Error::Overflow(format!("{self} leaves {{0,1}} on {d}")));
                    }
                    return Ok(VarDomain::Bool(BoolDomain::from_int_domain(&img)));
                }
                if !universe.int_contains(&img) {
                    return Err(Error::Overflow(format!(
                        "{self} maps {d} outside the integer universe {}..{}",
                        universe.int_min, universe.int_max
                    )));
                }
                Ok(VarDomain::Int(img))
            }
            ViewKind::Complement(u) => {
                let s = d.as_set().unwrap();
                if s.is_failed() {
                    return Ok(VarDomain::Set(SetDomain::failed()));
                }
                if !s.ub().is_subset(u) {
                    return Err(Error::Overflow(format!("{d} is not inside the complement universe")));
                }
                Ok(VarDomain::Set(SetDomain::new(
                    u.difference(s.ub()).copied().collect(),
                    u.difference(s.lb()).copied().collect(),
                )))
            }
            ViewKind::Singleton => {
                let src = d.as_int_domain().unwrap();
                if src.is_empty() {
                    return Ok(VarDomain::Set(SetDomain::failed()));
                }
                if src.size() > 1 << 16 {
                    return Err(Error::Overflow(format!("singleton image of {d} is too large")));
                }
                let ub: IntSet = src.iter().collect();
                let lb = if ub.len() == 1 { ub.clone() } else { IntSet::new() };
                Ok(VarDomain::Set(SetDomain::new(lb, ub)))
            }
            ViewKind::Lookup(t) => {
                let src = d.as_int_domain().unwrap();
                let mut out = Vec::with_capacity(src.size() as usize);
                for v in src.iter() {
                    match t.binary_search_by_key(&v, |p| p.0) {
                        Ok(i) => out.push(t[i].1),
                        Err(_) => return Err(Error::Overflow(format!("{v} is outside the table of {self}"))),
                    }
                }
                Ok(VarDomain::Int(IntDomain::from_values(out)))
            }
            ViewKind::Chain(vs) => vs.iter().try_fold(d.clone(), |acc, w| w.image_domain(&acc, universe)),
        }
    }

    /// `φ⁻(D′)`: every source value whose image lies in `D′`.
    pub fn preimage_domain(&self, d: &VarDomain) -> VarDomain {
        assert_eq!(d.sort(), self.target, "{self} preimage of a {} domain", d.sort());
        match &self.kind {
            ViewKind::Identity => d.clone(),
            ViewKind::Affine { scale, offset } => {
                let img = d.as_int_domain().unwrap();
                VarDomain::numeric(self.source, img.preimage_affine(*scale, *offset))
            }
            ViewKind::Complement(u) => {
                let s = d.as_set().unwrap();
                if s.is_failed() || !s.lb().is_subset(u) {
                    return VarDomain::Set(SetDomain::failed());
                }
                VarDomain::Set(SetDomain::new(
                    u.difference(s.ub()).copied().collect(),
                    u.difference(s.lb()).copied().collect(),
                ))
            }
            ViewKind::Singleton => {
                let s = d.as_set().unwrap();
                let dom = if s.is_failed() {
                    IntDomain::empty()
                } else {
                    match s.lb().len() {
                        0 => IntDomain::from_values(s.ub().iter().copied()),
                        1 => IntDomain::from_values(s.lb().iter().copied()),
                        _ => IntDomain::empty(),
                    }
                };
                VarDomain::Int(dom)
            }
            ViewKind::Lookup(t) => {
                let img = d.as_int_domain().unwrap();
                VarDomain::Int(IntDomain::from_values(
                    t.iter().filter(|p| img.contains(p.1)).map(|p| p.0),
                ))
            }
            ViewKind::Chain(vs) => vs.iter().rev().fold(d.clone(), |acc, w| w.preimage_domain(&acc)),
        }
    }

    /// Source values of a lookup view's table, if any constrain the domain.
    pub fn source_support(&self) -> Option<IntDomain> {
        match &self.kind {
            ViewKind::Lookup(t) => Some(IntDomain::from_values(t.iter().map(|p| p.0))),
            ViewKind::Chain(vs) => vs.first().and_then(View::source_support),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(d: IntDomain) -> VarDomain {
        VarDomain::Int(d)
    }

    #[test]
    fn image_examples() {
        let u = Universe::default();
        let s2 = View::scale(2).unwrap();
        assert_eq!(
            s2.image_domain(&int(IntDomain::interval(1, 3)), &u).unwrap(),
            int(IntDomain::from_values([2, 4, 6]))
        );
        assert_eq!(
            View::minus().image_domain(&int(IntDomain::interval(1, 3)), &u).unwrap(),
            int(IntDomain::interval(-3, -1))
        );
        assert_eq!(
            View::singleton().image_domain(&int(IntDomain::singleton(2)), &u).unwrap(),
            VarDomain::Set(SetDomain::fixed([2].into()))
        );
        let big = View::scale(1 << 20).unwrap();
        assert!(matches!(
            big.image_domain(&int(IntDomain::interval(0, 100)), &u),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn preimage_examples() {
        let s2 = View::scale(2).unwrap();
        assert_eq!(
            s2.preimage_domain(&int(IntDomain::interval(2, 4))),
            int(IntDomain::interval(1, 2))
        );
        assert_eq!(
            View::bool_neg().preimage_domain(&VarDomain::Bool(BoolDomain::FALSE)),
            VarDomain::Bool(BoolDomain::TRUE)
        );
        assert_eq!(
            View::singleton().preimage_domain(&VarDomain::Set(SetDomain::new(IntSet::new(), [1, 2].into()))),
            int(IntDomain::interval(1, 2))
        );
    }

    #[test]
    fn compose_examples() {
        let v = View::compose(&View::offset(3), &View::minus()).unwrap();
        assert_eq!(v.map(&Value::Int(1)), Some(Value::Int(2)));
        assert_eq!(v.as_affine(), Some((-1, 3)));
        assert_eq!(v.monotonicity(), Monotonicity::Decreasing);
        let mm = View::compose(&View::minus(), &View::minus()).unwrap();
        assert!(mm.is_identity());
        let id = View::compose(&View::identity(Sort::Int), &View::scale(3).unwrap()).unwrap();
        assert_eq!(id, View::scale(3).unwrap());
        assert!(View::compose(&View::minus(), &View::singleton()).is_err());
        let ch = View::compose(&View::singleton(), &View::offset(1)).unwrap();
        assert_eq!(ch.classification(), Classification::Arbitrary);
        assert_eq!(ch.map(&Value::Int(2)), Some(Value::Set([3].into())));
        assert_eq!(ch.unmap(&Value::Set([3].into())), Some(Value::Int(2)));
    }

    #[test]
    fn tags() {
        assert_eq!(View::scale(2).unwrap().classification(), Classification::IntervalInjective);
        assert_eq!(View::scale(-1).unwrap().classification(), Classification::IntervalBijective);
        assert_eq!(View::scale(-1).unwrap(), View::minus());
        assert_eq!(View::offset(3).classification(), Classification::IntervalBijective);
        assert_eq!(View::scale(-2).unwrap().monotonicity(), Monotonicity::Decreasing);
        assert_eq!(View::singleton().monotonicity(), Monotonicity::None);
        assert!(View::lookup([(0, 1), (1, 1)]).is_err());
    }

    #[test]
    fn complement_round_trip() {
        let u: IntSet = (0..4).collect();
        let c = View::complement(u.clone());
        let d = VarDomain::Set(SetDomain::new([1].into(), [1, 2].into()));
        let img = c.image_domain(&d, &Universe::default()).unwrap();
        assert_eq!(img, VarDomain::Set(SetDomain::new([0, 3].into(), [0, 2, 3].into())));
        assert_eq!(c.preimage_domain(&img), d);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn views() -> impl Strategy<Value = View> {
            prop_oneof![
                Just(View::identity(Sort::Int)),
                Just(View::minus()),
                (-5i64..5).prop_map(View::offset),
                prop_oneof![Just(-3i64), Just(-2), Just(2), Just(3)].prop_map(|a| View::scale(a).unwrap()),
                (-3i64..3, -3i64..3).prop_map(|(a, o)| View::compose(&View::offset(o), &View::scale(if a == 0 { 1 } else { a }).unwrap()).unwrap()),
            ]
        }

        proptest! {
            #[test]
            fn round_trip_and_cardinality(v in views(), vals in proptest::collection::vec(-8i64..8, 0..8)) {
                let d = VarDomain::Int(IntDomain::from_values(vals));
                let img = v.image_domain(&d, &Universe::default()).unwrap();
                prop_assert_eq!(img.size(), d.size());
                prop_assert_eq!(v.preimage_domain(&img), d.clone());
                for x in d.values() {
                    let y = v.map(&x).unwrap();
                    prop_assert!(img.contains(&y));
                    prop_assert_eq!(v.unmap(&y), Some(x));
                }
            }

            #[test]
            fn preimage_shrinks(v in views(), vals in proptest::collection::vec(-8i64..8, 0..8)) {
                let d = VarDomain::Int(IntDomain::from_values(vals));
                prop_assert!(v.preimage_domain(&d).size() <= d.size());
            }
        }
    }
}
