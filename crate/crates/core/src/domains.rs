//! Values, variable domains for the three sorts, the domain store, and the
//! `dom`/`conv` closure operators over extensional constraints.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Finite set of integers, the value type of set variables.
pub type IntSet = BTreeSet<i64>;

/// Marker returned when an operation empties a variable domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure;

pub type PResult<T> = std::result::Result<T, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Sort {
    Int,
    Bool,
    Set,
}

impl Sort {
    /// Int and Bool domains share the ordered-integer interface.
    pub fn is_numeric(self) -> bool {
        matches!(self, Sort::Int | Sort::Bool)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Int => "int",
            Sort::Bool => "bool",
            Sort::Set => "set",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub index: u32,
    pub sort: Sort,
}

impl VarId {
    pub fn new(index: usize, sort: Sort) -> Self {
        VarId { index: index as u32, sort }
    }

    #[inline]
    pub fn idx(self) -> usize {
        self.index as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.sort {
            Sort::Int => 'x',
            Sort::Bool => 'b',
            Sort::Set => 's',
        };
        write!(f, "{}{}", p, self.index)
    }
}

/// A value of any sort. Booleans are the integers 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Set(IntSet),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            Value::Set(_) => None,
        }
    }

    pub fn as_set(&self) -> Option<&IntSet> {
        match self {
            Value::Set(s) => Some(s),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Set(s) => fmt_set(f, s),
        }
    }
}

fn fmt_set(f: &mut fmt::Formatter<'_>, s: &IntSet) -> fmt::Result {
    f.write_str("{")?;
    for (i, v) in s.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("}")
}

// ---------------------------------------------------------------------------
// Integer domains
// ---------------------------------------------------------------------------

/// Sorted list of disjoint, non-adjacent closed ranges.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntDomain {
    ranges: Vec<(i64, i64)>,
}

impl fmt::Debug for IntDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &(lo, hi)) in self.ranges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if lo == hi {
                write!(f, "{lo}")?;
            } else {
                write!(f, "{lo}..{hi}")?;
            }
        }
        f.write_str("}")
    }
}

impl IntDomain {
    pub fn empty() -> Self {
        IntDomain { ranges: Vec::new() }
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        if lo > hi {
            Self::empty()
        } else {
            IntDomain { ranges: vec![(lo, hi)] }
        }
    }

    pub fn singleton(v: i64) -> Self {
        IntDomain { ranges: vec![(v, v)] }
    }

    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        let mut vs: Vec<i64> = values.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        let mut ranges: Vec<(i64, i64)> = Vec::new();
        for v in vs {
            match ranges.last_mut() {
                Some(last) if last.1.checked_add(1) == Some(v) => last.1 = v,
                _ => ranges.push((v, v)),
            }
        }
        IntDomain { ranges }
    }

    /// Builds a domain from arbitrary (possibly overlapping, unsorted) ranges.
    pub fn from_ranges<I: IntoIterator<Item = (i64, i64)>>(ranges: I) -> Self {
        let mut rs: Vec<(i64, i64)> = ranges.into_iter().filter(|r| r.0 <= r.1).collect();
        rs.sort_unstable();
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(rs.len());
        for (lo, hi) in rs {
            match out.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        IntDomain { ranges: out }
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    /// True iff the range list is sorted, disjoint and non-adjacent.
    pub fn is_normalized(&self) -> bool {
        self.ranges.iter().all(|r| r.0 <= r.1)
            && self
                .ranges
                .windows(2)
                .all(|w| w[0].1.checked_add(1).is_some_and(|n| n < w[1].0))
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    #[inline]
    pub fn min(&self) -> Option<i64> {
        self.ranges.first().map(|r| r.0)
    }

    #[inline]
    pub fn max(&self) -> Option<i64> {
        self.ranges.last().map(|r| r.1)
    }

    pub fn size(&self) -> u64 {
        self.ranges.iter().map(|&(lo, hi)| (hi - lo) as u64 + 1).sum()
    }

    pub fn is_fixed(&self) -> bool {
        self.ranges.len() == 1 && self.ranges[0].0 == self.ranges[0].1
    }

    pub fn value(&self) -> Option<i64> {
        if self.is_fixed() {
            Some(self.ranges[0].0)
        } else {
            None
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.ranges
            .binary_search_by(|&(lo, hi)| {
                if hi < v {
                    std::cmp::Ordering::Less
                } else if lo > v {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranges.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    pub fn is_subset(&self, other: &IntDomain) -> bool {
        let mut j = 0;
        for &(lo, hi) in &self.ranges {
            while j < other.ranges.len() && other.ranges[j].1 < lo {
                j += 1;
            }
            match other.ranges.get(j) {
                Some(&(olo, ohi)) if olo <= lo && hi <= ohi => {}
                _ => return false,
            }
        }
        true
    }

    pub fn intersect(&self, other: &IntDomain) -> IntDomain {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a0, a1) = self.ranges[i];
            let (b0, b1) = other.ranges[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntDomain { ranges: out }
    }

    pub fn union(&self, other: &IntDomain) -> IntDomain {
        IntDomain::from_ranges(self.ranges.iter().chain(other.ranges.iter()).copied())
    }

    /// Interval hull `{min..max}`.
    pub fn hull(&self) -> IntDomain {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => IntDomain::interval(lo, hi),
            _ => IntDomain::empty(),
        }
    }

    /// Removes values below `v`; returns whether anything changed.
    pub fn adjust_min(&mut self, v: i64) -> bool {
        match self.min() {
            Some(m) if m < v => {}
            _ => return false,
        }
        let k = self.ranges.iter().position(|r| r.1 >= v);
        match k {
            None => self.ranges.clear(),
            Some(k) => {
                self.ranges.drain(..k);
                if self.ranges[0].0 < v {
                    self.ranges[0].0 = v;
                }
            }
        }
        true
    }

    /// Removes values above `v`; returns whether anything changed.
    pub fn adjust_max(&mut self, v: i64) -> bool {
        match self.max() {
            Some(m) if m > v => {}
            _ => return false,
        }
        let k = self.ranges.iter().rposition(|r| r.0 <= v);
        match k {
            None => self.ranges.clear(),
            Some(k) => {
                self.ranges.truncate(k + 1);
                if self.ranges[k].1 > v {
                    self.ranges[k].1 = v;
                }
            }
        }
        true
    }

    pub fn remove(&mut self, v: i64) -> bool {
        let Some(k) = self.ranges.iter().position(|r| r.0 <= v && v <= r.1) else {
            return false;
        };
        let (lo, hi) = self.ranges[k];
        match (lo == v, hi == v) {
            (true, true) => {
                self.ranges.remove(k);
            }
            (true, false) => self.ranges[k].0 = v + 1,
            (false, true) => self.ranges[k].1 = v - 1,
            (false, false) => {
                self.ranges[k].1 = v - 1;
                self.ranges.insert(k + 1, (v + 1, hi));
            }
        }
        true
    }

    /// In-place intersection; returns whether anything changed.
    pub fn intersect_with(&mut self, other: &IntDomain) -> bool {
        if self.is_subset(other) {
            return false;
        }
        *self = self.intersect(other);
        true
    }

    /// Exact image under `v ↦ scale·v + offset`, or `None` on arithmetic overflow.
    pub fn map_affine(&self, scale: i64, offset: i64) -> Option<IntDomain> {
        let f = |v: i64| v.checked_mul(scale)?.checked_add(offset);
        if scale == 1 || scale == -1 {
            let mut rs = Vec::with_capacity(self.ranges.len());
            for &(lo, hi) in &self.ranges {
                let (a, b) = (f(lo)?, f(hi)?);
                rs.push((a.min(b), a.max(b)));
            }
            if scale < 0 {
                rs.reverse();
            }
            return Some(IntDomain { ranges: rs });
        }
        if self.is_empty() {
            return Some(IntDomain::empty());
        }
        f(self.min()?)?;
        f(self.max()?)?;
        let mut vals = Vec::with_capacity(self.size() as usize);
        for v in self.iter() {
            vals.push(f(v)?);
        }
        if scale < 0 {
            vals.reverse();
        }
        Some(IntDomain {
            ranges: vals.into_iter().map(|v| (v, v)).collect(),
        })
    }

    /// Exact preimage `{v : scale·v + offset ∈ self}`; values whose image is not
    /// in `self` (including non-multiples of `scale`) are discarded.
    pub fn preimage_affine(&self, scale: i64, offset: i64) -> IntDomain {
        use num_integer::Integer;
        debug_assert!(scale != 0);
        let mut rs = Vec::with_capacity(self.ranges.len());
        for &(lo, hi) in &self.ranges {
            let (l, h) = ((lo as i128) - offset as i128, (hi as i128) - offset as i128);
            let s = scale as i128;
            let (a, b) = if s > 0 {
                (Integer::div_ceil(&l, &s), Integer::div_floor(&h, &s))
            } else {
                (Integer::div_ceil(&h, &s), Integer::div_floor(&l, &s))
            };
            if a <= b {
                let a = a.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
                let b = b.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
                rs.push((a, b));
            }
        }
        IntDomain::from_ranges(rs)
    }

    /// All subsets of this domain (including the empty one), small domains only.
    pub fn subdomains(&self) -> Vec<IntDomain> {
        let vals: Vec<i64> = self.iter().collect();
        assert!(vals.len() <= 20, "subdomain enumeration over {} values", vals.len());
        (0u32..(1 << vals.len()))
            .map(|mask| {
                IntDomain::from_values(
                    vals.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &v)| v),
                )
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Boolean domains
// ---------------------------------------------------------------------------

/// Subset of {0,1} as a two-bit mask (bit 0: value 0, bit 1: value 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoolDomain(u8);

impl BoolDomain {
    pub const EMPTY: BoolDomain = BoolDomain(0);
    pub const FALSE: BoolDomain = BoolDomain(1);
    pub const TRUE: BoolDomain = BoolDomain(2);
    pub const BOTH: BoolDomain = BoolDomain(3);

    pub fn from_int_domain(d: &IntDomain) -> Self {
        BoolDomain((d.contains(0) as u8) | ((d.contains(1) as u8) << 1))
    }

    pub fn to_int_domain(self) -> IntDomain {
        match self.0 {
            1 => IntDomain::singleton(0),
            2 => IntDomain::singleton(1),
            3 => IntDomain::interval(0, 1),
            _ => IntDomain::empty(),
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: i64) -> bool {
        match v {
            0 => self.0 & 1 != 0,
            1 => self.0 & 2 != 0,
            _ => false,
        }
    }

    pub fn min(self) -> Option<i64> {
        match self.0 {
            0 => None,
            2 => Some(1),
            _ => Some(0),
        }
    }

    pub fn max(self) -> Option<i64> {
        match self.0 {
            0 => None,
            1 => Some(0),
            _ => Some(1),
        }
    }

    pub fn size(self) -> u64 {
        self.0.count_ones() as u64
    }

    pub fn is_fixed(self) -> bool {
        self.0 == 1 || self.0 == 2
    }

    pub fn is_subset(self, other: BoolDomain) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meet(self, other: BoolDomain) -> BoolDomain {
        BoolDomain(self.0 & other.0)
    }
}

impl fmt::Debug for BoolDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_int_domain(), f)
    }
}

// ---------------------------------------------------------------------------
// Set domains
// ---------------------------------------------------------------------------

/// Convex set domain `{s : lb ⊆ s ⊆ ub}`. A failed domain has `lb ⊄ ub`; it is
/// kept in the canonical form `failed = true` with both bounds cleared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetDomain {
    lb: IntSet,
    ub: IntSet,
    failed: bool,
}

impl SetDomain {
    pub fn new(lb: IntSet, ub: IntSet) -> Self {
        if lb.is_subset(&ub) {
            SetDomain { lb, ub, failed: false }
        } else {
            Self::failed()
        }
    }

    pub fn failed() -> Self {
        SetDomain {
            lb: IntSet::new(),
            ub: IntSet::new(),
            failed: true,
        }
    }

    pub fn fixed(s: IntSet) -> Self {
        SetDomain {
            lb: s.clone(),
            ub: s,
            failed: false,
        }
    }

    pub fn lb(&self) -> &IntSet {
        &self.lb
    }

    pub fn ub(&self) -> &IntSet {
        &self.ub
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    pub fn is_fixed(&self) -> bool {
        !self.failed && self.lb.len() == self.ub.len()
    }

    /// Number of undecided elements.
    pub fn undecided(&self) -> usize {
        if self.failed {
            0
        } else {
            self.ub.len() - self.lb.len()
        }
    }

    pub fn contains(&self, s: &IntSet) -> bool {
        !self.failed && self.lb.is_subset(s) && s.is_subset(&self.ub)
    }

    pub fn is_subset(&self, other: &SetDomain) -> bool {
        self.failed || (!other.failed && other.lb.is_subset(&self.lb) && self.ub.is_subset(&other.ub))
    }

    /// Greatest lower bound: `(lb₁ ∪ lb₂, ub₁ ∩ ub₂)`.
    pub fn meet(&self, other: &SetDomain) -> SetDomain {
        if self.failed || other.failed {
            return Self::failed();
        }
        SetDomain::new(
            self.lb.union(&other.lb).copied().collect(),
            self.ub.intersection(&other.ub).copied().collect(),
        )
    }

    /// Adds `v` to the lower bound. Returns whether the domain changed.
    pub fn include(&mut self, v: i64) -> PResult<bool> {
        if self.failed || !self.ub.contains(&v) {
            *self = Self::failed();
            return Err(Failure);
        }
        Ok(self.lb.insert(v))
    }

    /// Removes `v` from the upper bound. Returns whether the domain changed.
    pub fn exclude(&mut self, v: i64) -> PResult<bool> {
        if self.failed || self.lb.contains(&v) {
            *self = Self::failed();
            return Err(Failure);
        }
        Ok(self.ub.remove(&v))
    }

    /// Every set in the domain, small domains only.
    pub fn members(&self) -> Vec<IntSet> {
        if self.failed {
            return Vec::new();
        }
        let free: Vec<i64> = self.ub.difference(&self.lb).copied().collect();
        assert!(free.len() <= 20);
        (0u32..(1 << free.len()))
            .map(|mask| {
                let mut s = self.lb.clone();
                s.extend(free.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v));
                s
            })
            .collect()
    }

    /// All convex sub-domains (including the failed one), small domains only.
    pub fn subdomains(&self) -> Vec<SetDomain> {
        let mut out = vec![Self::failed()];
        if self.failed {
            return out;
        }
        let free: Vec<i64> = self.ub.difference(&self.lb).copied().collect();
        let n = free.len();
        assert!(n <= 12);
        let total = 3usize.pow(n as u32);
        for mut code in 0..total {
            let mut lb = self.lb.clone();
            let mut ub = self.lb.clone();
            for &v in &free {
                match code % 3 {
                    0 => {}
                    1 => {
                        ub.insert(v);
                    }
                    _ => {
                        lb.insert(v);
                        ub.insert(v);
                    }
                }
                code /= 3;
            }
            out.push(SetDomain::new(lb, ub));
        }
        out
    }
}

impl fmt::Debug for SetDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SetDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failed {
            return f.write_str("[failed]");
        }
        f.write_str("[")?;
        fmt_set(f, &self.lb)?;
        f.write_str("..")?;
        fmt_set(f, &self.ub)?;
        f.write_str("]")
    }
}

// ---------------------------------------------------------------------------
// Variable domains
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum VarDomain {
    Int(IntDomain),
    Bool(BoolDomain),
    Set(SetDomain),
}

impl fmt::Debug for VarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarDomain::Int(d) => fmt::Display::fmt(d, f),
            VarDomain::Bool(d) => fmt::Display::fmt(&d.to_int_domain(), f),
            VarDomain::Set(d) => fmt::Display::fmt(d, f),
        }
    }
}

impl VarDomain {
    pub fn sort(&self) -> Sort {
        match self {
            VarDomain::Int(_) => Sort::Int,
            VarDomain::Bool(_) => Sort::Bool,
            VarDomain::Set(_) => Sort::Set,
        }
    }

    /// The empty domain of a sort.
    pub fn empty(sort: Sort) -> Self {
        match sort {
            Sort::Int => VarDomain::Int(IntDomain::empty()),
            Sort::Bool => VarDomain::Bool(BoolDomain::EMPTY),
            Sort::Set => VarDomain::Set(SetDomain::failed()),
        }
    }

    /// The domain holding exactly `value` (sort inferred for sets; numeric
    /// values are built for `sort`).
    pub fn fixed(sort: Sort, value: &Value) -> Result<Self> {
        match (sort, value) {
            (Sort::Int, Value::Int(v)) => Ok(VarDomain::Int(IntDomain::singleton(*v))),
            (Sort::Bool, Value::Int(v)) if (0..=1).contains(v) => {
                Ok(VarDomain::Bool(BoolDomain::from_int_domain(&IntDomain::singleton(*v))))
            }
            (Sort::Set, Value::Set(s)) => Ok(VarDomain::Set(SetDomain::fixed(s.clone()))),
            _ => Err(Error::Usage(format!("value {value} does not belong to sort {sort}"))),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            VarDomain::Int(d) => d.is_empty(),
            VarDomain::Bool(d) => d.is_empty(),
            VarDomain::Set(d) => d.is_failed(),
        }
    }

    pub fn is_fixed(&self) -> bool {
        match self {
            VarDomain::Int(d) => d.is_fixed(),
            VarDomain::Bool(d) => d.is_fixed(),
            VarDomain::Set(d) => d.is_fixed(),
        }
    }

    /// The single value of a fixed domain.
    pub fn value(&self) -> Option<Value> {
        match self {
            VarDomain::Int(d) => d.value().map(Value::Int),
            VarDomain::Bool(d) if d.is_fixed() => d.min().map(Value::Int),
            VarDomain::Set(d) if d.is_fixed() => Some(Value::Set(d.lb().clone())),
            _ => None,
        }
    }

    /// Integer view of a numeric domain.
    pub fn as_int_domain(&self) -> Option<IntDomain> {
        match self {
            VarDomain::Int(d) => Some(d.clone()),
            VarDomain::Bool(d) => Some(d.to_int_domain()),
            VarDomain::Set(_) => None,
        }
    }

    pub fn as_set(&self) -> Option<&SetDomain> {
        match self {
            VarDomain::Set(d) => Some(d),
            _ => None,
        }
    }

    /// Builds a numeric domain of `sort` from integer values.
    pub fn numeric(sort: Sort, d: IntDomain) -> Self {
        match sort {
            Sort::Bool => VarDomain::Bool(BoolDomain::from_int_domain(&d)),
            _ => VarDomain::Int(d),
        }
    }

    /// Number of values (sets: 2^undecided, saturating).
    pub fn size(&self) -> u64 {
        match self {
            VarDomain::Int(d) => d.size(),
            VarDomain::Bool(d) => d.size(),
            VarDomain::Set(d) => {
                if d.is_failed() {
                    0
                } else {
                    1u64.checked_shl(d.undecided() as u32).unwrap_or(u64::MAX)
                }
            }
        }
    }

    pub fn contains(&self, value: &Value) -> bool {
        match (self, value) {
            (VarDomain::Int(d), Value::Int(v)) => d.contains(*v),
            (VarDomain::Bool(d), Value::Int(v)) => d.contains(*v),
            (VarDomain::Set(d), Value::Set(s)) => d.contains(s),
            _ => false,
        }
    }

    /// Pointwise inclusion as sets of values. Mismatched sorts are never related.
    pub fn is_subset(&self, other: &VarDomain) -> bool {
        match (self, other) {
            (VarDomain::Int(a), VarDomain::Int(b)) => a.is_subset(b),
            (VarDomain::Bool(a), VarDomain::Bool(b)) => a.is_subset(*b),
            (VarDomain::Set(a), VarDomain::Set(b)) => a.is_subset(b),
            _ => false,
        }
    }

    pub fn meet(&self, other: &VarDomain) -> VarDomain {
        match (self, other) {
            (VarDomain::Int(a), VarDomain::Int(b)) => VarDomain::Int(a.intersect(b)),
            (VarDomain::Bool(a), VarDomain::Bool(b)) => VarDomain::Bool(a.meet(*b)),
            (VarDomain::Set(a), VarDomain::Set(b)) => VarDomain::Set(a.meet(b)),
            _ => VarDomain::empty(self.sort()),
        }
    }

    /// All values, small domains only.
    pub fn values(&self) -> Vec<Value> {
        match self {
            VarDomain::Int(d) => d.iter().map(Value::Int).collect(),
            VarDomain::Bool(d) => d.to_int_domain().iter().map(Value::Int).collect(),
            VarDomain::Set(d) => d.members().into_iter().map(Value::Set).collect(),
        }
    }

    /// All sub-domains, including an empty one.
    pub fn subdomains(&self) -> Vec<VarDomain> {
        match self {
            VarDomain::Int(d) => d.subdomains().into_iter().map(VarDomain::Int).collect(),
            VarDomain::Bool(d) => (0..4u8)
                .map(BoolDomain)
                .filter(|s| s.is_subset(*d))
                .map(VarDomain::Bool)
                .collect(),
            VarDomain::Set(d) => d.subdomains().into_iter().map(VarDomain::Set).collect(),
        }
    }

    /// Strongest domain of this sort containing all `values`. Sets use the
    /// lattice hull `(∩, ∪)`, which is the strongest representable domain.
    pub fn from_values(sort: Sort, values: &[&Value]) -> VarDomain {
        match sort {
            Sort::Int | Sort::Bool => {
                VarDomain::numeric(sort, IntDomain::from_values(values.iter().filter_map(|v| v.as_int())))
            }
            Sort::Set => {
                let sets: Vec<&IntSet> = values.iter().filter_map(|v| v.as_set()).collect();
                if sets.is_empty() {
                    return VarDomain::Set(SetDomain::failed());
                }
                let mut lb = sets[0].clone();
                let mut ub = IntSet::new();
                for s in &sets {
                    lb.retain(|v| s.contains(v));
                    ub.extend(s.iter().copied());
                }
                VarDomain::Set(SetDomain::new(lb, ub))
            }
        }
    }

    /// Number of representation cells, the space proxy used by benchmarks.
    pub fn cells(&self) -> usize {
        match self {
            VarDomain::Int(d) => d.ranges().len().max(1),
            VarDomain::Bool(_) => 1,
            VarDomain::Set(d) => 1 + d.lb().len() + d.ub().len(),
        }
    }
}

// ---------------------------------------------------------------------------
// Domain store
// ---------------------------------------------------------------------------

/// Value universes shared by all variables of a store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    pub int_min: i64,
    pub int_max: i64,
    pub set: IntSet,
}

/// Default bound of the integer universe, `2^24`.
pub const DEFAULT_INT_BOUND: i64 = 1 << 24;

impl Default for Universe {
    fn default() -> Self {
        Universe {
            int_min: -DEFAULT_INT_BOUND,
            int_max: DEFAULT_INT_BOUND,
            set: (0..32).collect(),
        }
    }
}

impl Universe {
    pub fn with_set(mut self, set: IntSet) -> Self {
        self.set = set;
        self
    }

    pub fn int_contains(&self, d: &IntDomain) -> bool {
        d.is_empty() || (d.min().unwrap() >= self.int_min && d.max().unwrap() <= self.int_max)
    }
}

/// Shape of a domain just before its first change in a propagation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Footprint {
    Num { min: i64, max: i64, size: u64 },
    Set { lb: usize, ub: usize },
}

impl Footprint {
    pub(crate) fn of(d: &VarDomain) -> Footprint {
        match d {
            VarDomain::Int(x) => Footprint::Num {
                min: x.min().unwrap_or(0),
                max: x.max().unwrap_or(0),
                size: x.size(),
            },
            VarDomain::Bool(x) => Footprint::Num {
                min: x.min().unwrap_or(0),
                max: x.max().unwrap_or(0),
                size: x.size(),
            },
            VarDomain::Set(x) => Footprint::Set {
                lb: x.lb().len(),
                ub: x.ub().len(),
            },
        }
    }
}

/// The propagation state: one domain per variable.
///
/// Failure is store-wide. Once any domain is emptied, the store is failed and
/// every further narrowing reports [`Failure`]; reads stay valid.
#[derive(Clone)]
pub struct DomainStore {
    universe: Universe,
    doms: Vec<VarDomain>,
    failed: bool,
    touched: Vec<bool>,
    changes: Vec<(VarId, Footprint)>,
    violation: Option<VarId>,
}

impl fmt::Debug for DomainStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Compact text encoding, e.g. `x0={1..3} b1={0} s2=[{1}..{1,2}]`.
impl fmt::Display for DomainStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failed {
            f.write_str("FAILED")?;
            if !self.doms.is_empty() {
                f.write_str(" ")?;
            }
        }
        for (i, d) in self.doms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}={}", VarId::new(i, d.sort()), d)?;
        }
        Ok(())
    }
}

/// Stores compare as sets of assignments: all failed stores are equal.
impl PartialEq for DomainStore {
    fn eq(&self, other: &Self) -> bool {
        if self.failed || other.failed {
            return self.failed == other.failed && self.doms.len() == other.doms.len();
        }
        self.doms == other.doms
    }
}

impl Eq for DomainStore {}

impl Default for DomainStore {
    fn default() -> Self {
        Self::new(Universe::default())
    }
}

impl DomainStore {
    pub fn new(universe: Universe) -> Self {
        DomainStore {
            universe,
            doms: Vec::new(),
            failed: false,
            touched: Vec::new(),
            changes: Vec::new(),
            violation: None,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.doms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doms.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.doms.iter().enumerate().map(|(i, d)| VarId::new(i, d.sort()))
    }

    pub fn var(&self, index: usize) -> VarId {
        VarId::new(index, self.doms[index].sort())
    }

    pub fn add_int(&mut self, lo: i64, hi: i64) -> Result<VarId> {
        self.add_var(VarDomain::Int(IntDomain::interval(lo, hi)))
    }

    pub fn add_bool(&mut self) -> VarId {
        self.add_var(VarDomain::Bool(BoolDomain::BOTH)).expect("bool domain is always valid")
    }

    /// Adds a set variable with domain `[∅ .. ub]`.
    pub fn add_set(&mut self, ub: IntSet) -> VarId {
        self.add_var(VarDomain::Set(SetDomain::new(IntSet::new(), ub)))
            .expect("set domain is always valid")
    }

    pub fn add_var(&mut self, d: VarDomain) -> Result<VarId> {
        if let VarDomain::Int(x) = &d {
            if !self.universe.int_contains(x) {
                return Err(Error::Overflow(format!(
                    "domain {x} outside integer universe {}..{}",
                    self.universe.int_min, self.universe.int_max
                )));
            }
        }
        if d.is_empty() {
            self.failed = true;
        }
        let id = VarId::new(self.doms.len(), d.sort());
        self.doms.push(d);
        self.touched.push(false);
        Ok(id)
    }

    #[inline]
    pub fn get(&self, x: VarId) -> &VarDomain {
        &self.doms[x.idx()]
    }

    pub fn domains(&self) -> &[VarDomain] {
        &self.doms
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    /// Marks the whole store failed.
    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn is_assigned(&self) -> bool {
        !self.failed && self.doms.iter().all(|d| d.is_fixed())
    }

    /// Pointwise stronger-than; a failed store is stronger than any store.
    pub fn is_stronger(&self, other: &DomainStore) -> Result<bool> {
        check_same_vars(self, other)?;
        if self.failed {
            return Ok(true);
        }
        if other.failed {
            return Ok(false);
        }
        Ok(self.doms.iter().zip(&other.doms).all(|(a, b)| a.is_subset(b)))
    }

    /// Pointwise intersection.
    pub fn meet(&self, other: &DomainStore) -> Result<DomainStore> {
        check_same_vars(self, other)?;
        let mut out = self.clone();
        out.clear_changes();
        for (i, d) in other.doms.iter().enumerate() {
            let m = out.doms[i].meet(d);
            if m.is_empty() {
                out.failed = true;
            }
            out.doms[i] = m;
        }
        if other.failed {
            out.failed = true;
        }
        Ok(out)
    }

    // ---- numeric access -------------------------------------------------

    #[inline]
    pub fn min(&self, x: VarId) -> i64 {
        match &self.doms[x.idx()] {
            VarDomain::Int(d) => d.min().unwrap_or(i64::MAX),
            VarDomain::Bool(d) => d.min().unwrap_or(i64::MAX),
            VarDomain::Set(_) => panic!("min on set variable {x}"),
        }
    }

    #[inline]
    pub fn max(&self, x: VarId) -> i64 {
        match &self.doms[x.idx()] {
            VarDomain::Int(d) => d.max().unwrap_or(i64::MIN),
            VarDomain::Bool(d) => d.max().unwrap_or(i64::MIN),
            VarDomain::Set(_) => panic!("max on set variable {x}"),
        }
    }

    #[inline]
    pub fn contains(&self, x: VarId, v: i64) -> bool {
        match &self.doms[x.idx()] {
            VarDomain::Int(d) => d.contains(v),
            VarDomain::Bool(d) => d.contains(v),
            VarDomain::Set(_) => false,
        }
    }

    pub fn size(&self, x: VarId) -> u64 {
        self.doms[x.idx()].size()
    }

    /// Numeric domain of `x` as integer ranges.
    pub fn int_domain(&self, x: VarId) -> IntDomain {
        self.doms[x.idx()].as_int_domain().expect("numeric variable")
    }

    #[inline]
    fn note(&mut self, x: VarId) {
        let i = x.idx();
        if !self.touched[i] {
            self.touched[i] = true;
            self.changes.push((x, Footprint::of(&self.doms[i])));
        }
    }

    #[inline]
    fn settle(&mut self, x: VarId, changed: bool) -> PResult<bool> {
        if changed && self.doms[x.idx()].is_empty() {
            self.failed = true;
            return Err(Failure);
        }
        Ok(changed)
    }

    pub fn adjust_min(&mut self, x: VarId, v: i64) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        if self.min(x) >= v {
            return Ok(false);
        }
        self.note(x);
        let changed = match &mut self.doms[x.idx()] {
            VarDomain::Int(d) => d.adjust_min(v),
            VarDomain::Bool(d) => {
                let mut i = d.to_int_domain();
                let c = i.adjust_min(v);
                *d = BoolDomain::from_int_domain(&i);
                c
            }
            VarDomain::Set(_) => panic!("adjust_min on set variable {x}"),
        };
        self.settle(x, changed)
    }

    pub fn adjust_max(&mut self, x: VarId, v: i64) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        if self.max(x) <= v {
            return Ok(false);
        }
        self.note(x);
        let changed = match &mut self.doms[x.idx()] {
            VarDomain::Int(d) => d.adjust_max(v),
            VarDomain::Bool(d) => {
                let mut i = d.to_int_domain();
                let c = i.adjust_max(v);
                *d = BoolDomain::from_int_domain(&i);
                c
            }
            VarDomain::Set(_) => panic!("adjust_max on set variable {x}"),
        };
        self.settle(x, changed)
    }

    pub fn remove(&mut self, x: VarId, v: i64) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        if !self.contains(x, v) {
            return Ok(false);
        }
        self.note(x);
        let changed = match &mut self.doms[x.idx()] {
            VarDomain::Int(d) => d.remove(v),
            VarDomain::Bool(d) => {
                *d = BoolDomain(d.0 & !(1 << v));
                true
            }
            VarDomain::Set(_) => unreachable!(),
        };
        self.settle(x, changed)
    }

    pub fn fix(&mut self, x: VarId, v: i64) -> PResult<bool> {
        self.intersect(x, &IntDomain::singleton(v))
    }

    /// Intersects a numeric variable with `d`.
    pub fn intersect(&mut self, x: VarId, d: &IntDomain) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        let changed = match &self.doms[x.idx()] {
            VarDomain::Int(cur) => !cur.is_subset(d),
            VarDomain::Bool(cur) => !cur.is_subset(BoolDomain::from_int_domain(d)),
            VarDomain::Set(_) => panic!("intersect on set variable {x}"),
        };
        if !changed {
            return Ok(false);
        }
        self.note(x);
        match &mut self.doms[x.idx()] {
            VarDomain::Int(cur) => {
                cur.intersect_with(d);
            }
            VarDomain::Bool(cur) => *cur = cur.meet(BoolDomain::from_int_domain(d)),
            VarDomain::Set(_) => unreachable!(),
        }
        self.settle(x, true)
    }

    // ---- set access -----------------------------------------------------

    pub fn set_domain(&self, x: VarId) -> &SetDomain {
        match &self.doms[x.idx()] {
            VarDomain::Set(d) => d,
            _ => panic!("set access on numeric variable {x}"),
        }
    }

    pub fn include(&mut self, x: VarId, v: i64) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        if self.set_domain(x).lb().contains(&v) {
            return Ok(false);
        }
        self.note(x);
        let r = match &mut self.doms[x.idx()] {
            VarDomain::Set(d) => d.include(v),
            _ => unreachable!(),
        };
        if r.is_err() {
            self.failed = true;
        }
        r
    }

    pub fn exclude(&mut self, x: VarId, v: i64) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        if !self.set_domain(x).ub().contains(&v) {
            return Ok(false);
        }
        self.note(x);
        let r = match &mut self.doms[x.idx()] {
            VarDomain::Set(d) => d.exclude(v),
            _ => unreachable!(),
        };
        if r.is_err() {
            self.failed = true;
        }
        r
    }

    /// Intersects any variable with a domain of the same sort.
    pub fn restrict(&mut self, x: VarId, d: &VarDomain) -> PResult<bool> {
        if self.failed {
            return Err(Failure);
        }
        let cur = &self.doms[x.idx()];
        if cur.is_subset(d) {
            return Ok(false);
        }
        let m = cur.meet(d);
        self.note(x);
        self.doms[x.idx()] = m;
        self.settle(x, true)
    }

    /// Overwrites a domain without checking inclusion. A non-narrowing write is
    /// recorded as a contract violation that the engine reports.
    pub fn replace(&mut self, x: VarId, d: VarDomain) {
        if !d.is_subset(&self.doms[x.idx()]) && self.violation.is_none() {
            self.violation = Some(x);
        }
        self.note(x);
        if d.is_empty() {
            self.failed = true;
        }
        self.doms[x.idx()] = d;
    }

    /// Resets a domain outside of propagation: no change is logged and the
    /// failure flag is recomputed from scratch.
    pub fn reset_domain(&mut self, x: VarId, d: VarDomain) {
        assert_eq!(d.sort(), x.sort, "sort mismatch for {x}");
        self.doms[x.idx()] = d;
        self.failed = self.doms.iter().any(VarDomain::is_empty);
    }

    pub(crate) fn take_violation(&mut self) -> Option<VarId> {
        self.violation.take()
    }

    pub(crate) fn drain_changes_into(&mut self, out: &mut Vec<(VarId, Footprint)>) {
        for (x, _) in &self.changes {
            self.touched[x.idx()] = false;
        }
        out.append(&mut self.changes);
    }

    pub fn clear_changes(&mut self) {
        for (x, _) in &self.changes {
            self.touched[x.idx()] = false;
        }
        self.changes.clear();
        self.violation = None;
    }

    /// Total domain cells (space proxy).
    pub fn cells(&self) -> usize {
        self.doms.iter().map(VarDomain::cells).sum()
    }
}

fn check_same_vars(a: &DomainStore, b: &DomainStore) -> Result<()> {
    let same = a.doms.len() == b.doms.len()
        && a.doms.iter().zip(&b.doms).all(|(x, y)| x.sort() == y.sort());
    if same {
        Ok(())
    } else {
        Err(Error::Usage("stores range over different variables".into()))
    }
}

/// `d1 ⊆ d2` pointwise.
pub fn is_stronger(d1: &DomainStore, d2: &DomainStore) -> Result<bool> {
    d1.is_stronger(d2)
}

/// Pointwise intersection of two stores over the same variables.
pub fn meet(d1: &DomainStore, d2: &DomainStore) -> Result<DomainStore> {
    d1.meet(d2)
}

// ---------------------------------------------------------------------------
// Assignments and extensional constraints
// ---------------------------------------------------------------------------

/// A total map from a variable list to values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub vars: Vec<VarId>,
    pub values: Vec<Value>,
}

impl Assignment {
    pub fn get(&self, x: VarId) -> Option<&Value> {
        self.vars.iter().position(|&v| v == x).map(|i| &self.values[i])
    }

    /// The store `{a}` over `universe`'s variables: listed variables fixed.
    pub fn to_store(&self, universe: &DomainStore) -> Result<DomainStore> {
        let mut s = universe.clone();
        s.clear_changes();
        for (x, v) in self.vars.iter().zip(&self.values) {
            let d = VarDomain::fixed(x.sort, v)?;
            s.doms[x.idx()] = d;
        }
        Ok(s)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (x, v)) in self.vars.iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}↦{v}")?;
        }
        f.write_str(")")
    }
}

/// A constraint given in extension: the set of its solutions over `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionalConstraint {
    pub vars: Vec<VarId>,
    pub tuples: BTreeSet<Vec<Value>>,
}

impl ExtensionalConstraint {
    pub fn new(vars: Vec<VarId>) -> Self {
        ExtensionalConstraint {
            vars,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples(vars: Vec<VarId>, tuples: impl IntoIterator<Item = Vec<Value>>) -> Result<Self> {
        let tuples: BTreeSet<Vec<Value>> = tuples.into_iter().collect();
        for t in &tuples {
            if t.len() != vars.len() {
                return Err(Error::Usage(format!(
                    "tuple of length {} for {} variables",
                    t.len(),
                    vars.len()
                )));
            }
        }
        Ok(ExtensionalConstraint { vars, tuples })
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Value]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn intersect(&self, other: &ExtensionalConstraint) -> ExtensionalConstraint {
        debug_assert_eq!(self.vars, other.vars);
        ExtensionalConstraint {
            vars: self.vars.clone(),
            tuples: self.tuples.intersection(&other.tuples).cloned().collect(),
        }
    }

    /// Tuples lying inside store `d`.
    pub fn restrict_to(&self, d: &DomainStore) -> ExtensionalConstraint {
        ExtensionalConstraint {
            vars: self.vars.clone(),
            tuples: if d.is_failed() {
                BTreeSet::new()
            } else {
                self.tuples
                    .iter()
                    .filter(|t| self.vars.iter().zip(t.iter()).all(|(x, v)| d.get(*x).contains(v)))
                    .cloned()
                    .collect()
            },
        }
    }

    /// Projection of the tuples onto position `i`, as the strongest domain.
    pub fn projection(&self, i: usize) -> VarDomain {
        let vals: Vec<&Value> = self.tuples.iter().map(|t| &t[i]).collect();
        VarDomain::from_values(self.vars[i].sort, &vals)
    }
}

/// `dom(c)`: the strongest store containing every tuple of `c`. Variables not
/// mentioned by `c` keep their domain in `universe`.
pub fn dom_of(c: &ExtensionalConstraint, universe: &DomainStore) -> DomainStore {
    let mut out = universe.clone();
    out.clear_changes();
    if c.is_empty() {
        out.failed = true;
        return out;
    }
    for (i, x) in c.vars.iter().enumerate() {
        out.doms[x.idx()] = c.projection(i);
    }
    out
}

/// `conv(c)`: each listed numeric variable gets the interval hull of its
/// projection.
pub fn conv_of(c: &ExtensionalConstraint, universe: &DomainStore) -> Result<DomainStore> {
    if let Some(x) = c.vars.iter().find(|x| !x.sort.is_numeric()) {
        return Err(Error::Usage(format!("conv is undefined for set variable {x}")));
    }
    let mut out = universe.clone();
    out.clear_changes();
    if c.is_empty() {
        out.failed = true;
        return Ok(out);
    }
    for (i, x) in c.vars.iter().enumerate() {
        let p = c.projection(i).as_int_domain().expect("numeric").hull();
        out.doms[x.idx()] = VarDomain::numeric(x.sort, p);
    }
    Ok(out)
}

/// Iterator over the Cartesian product of variable domains.
pub struct Assignments {
    vars: Vec<VarId>,
    choices: Vec<Vec<Value>>,
    cursor: Option<Vec<usize>>,
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let cur = self.cursor.as_mut()?;
        let values = cur.iter().zip(&self.choices).map(|(&i, c)| c[i].clone()).collect();
        let out = Assignment {
            vars: self.vars.clone(),
            values,
        };
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.cursor = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < self.choices[k].len() {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    }
}

/// Enumerates every assignment of `vars` inside `d`, each exactly once, in
/// lexicographic order. Refuses when the product exceeds `cap`.
pub fn enumerate_assignments(d: &DomainStore, vars: &[VarId], cap: u64) -> Result<Assignments> {
    if d.is_failed() {
        return Ok(Assignments {
            vars: vars.to_vec(),
            choices: Vec::new(),
            cursor: None,
        });
    }
    let mut total: u64 = 1;
    for &x in vars {
        total = total.saturating_mul(d.get(x).size());
    }
    if total > cap {
        return Err(Error::CapExceeded { estimate: total, cap });
    }
    let choices: Vec<Vec<Value>> = vars.iter().map(|&x| d.get(x).values()).collect();
    Ok(Assignments {
        vars: vars.to_vec(),
        cursor: Some(vec![0; vars.len()]),
        choices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_store(doms: &[IntDomain]) -> DomainStore {
        let mut s = DomainStore::default();
        for d in doms {
            s.add_var(VarDomain::Int(d.clone())).unwrap();
        }
        s
    }

    fn iv(lo: i64, hi: i64) -> IntDomain {
        IntDomain::interval(lo, hi)
    }

    #[test]
    fn stronger_than_examples() {
        let a = int_store(&[IntDomain::from_values([1, 2])]);
        let b = int_store(&[iv(1, 3)]);
        assert!(a.is_stronger(&b).unwrap());
        assert!(a.is_stronger(&a).unwrap());
        let c = int_store(&[IntDomain::from_values([1, 4])]);
        assert!(!c.is_stronger(&b).unwrap());
        let two = int_store(&[iv(1, 3), iv(1, 3)]);
        assert!(matches!(a.is_stronger(&two), Err(Error::Usage(_))));
    }

    #[test]
    fn dom_of_examples() {
        let u = int_store(&[iv(0, 4), iv(0, 4)]);
        let (x, y) = (u.var(0), u.var(1));
        let c = ExtensionalConstraint::from_tuples(
            vec![x, y],
            [vec![Value::Int(0), Value::Int(1)], vec![Value::Int(1), Value::Int(2)]],
        )
        .unwrap();
        let d = dom_of(&c, &u);
        assert_eq!(d.get(x), &VarDomain::Int(iv(0, 1)));
        assert_eq!(d.get(y), &VarDomain::Int(iv(1, 2)));

        let empty = ExtensionalConstraint::new(vec![x, y]);
        assert!(dom_of(&empty, &u).is_failed());

        let full = ExtensionalConstraint::from_tuples(
            vec![x, y],
            (0..2).flat_map(|a| (0..2).map(move |b| vec![Value::Int(a), Value::Int(b)])),
        )
        .unwrap();
        let d = dom_of(&full, &u);
        assert_eq!(d.get(x), &VarDomain::Int(iv(0, 1)));
        assert_eq!(d.get(y), &VarDomain::Int(iv(0, 1)));
    }

    #[test]
    fn conv_of_examples() {
        let u = int_store(&[iv(0, 4)]);
        let x = u.var(0);
        let c = ExtensionalConstraint::from_tuples(vec![x], [vec![Value::Int(1)], vec![Value::Int(3)]]).unwrap();
        assert_eq!(conv_of(&c, &u).unwrap().get(x), &VarDomain::Int(iv(1, 3)));
        let c = ExtensionalConstraint::from_tuples(vec![x], [vec![Value::Int(2)]]).unwrap();
        assert_eq!(conv_of(&c, &u).unwrap().get(x), &VarDomain::Int(iv(2, 2)));
        assert!(conv_of(&ExtensionalConstraint::new(vec![x]), &u).unwrap().is_failed());

        let mut s = DomainStore::default();
        let set = s.add_set((0..3).collect());
        assert!(conv_of(&ExtensionalConstraint::new(vec![set]), &s).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let s = int_store(&[iv(0, 1), iv(2, 2)]);
        let vars: Vec<VarId> = s.vars().collect();
        let all: Vec<Vec<Value>> = enumerate_assignments(&s, &vars, 100).unwrap().map(|a| a.values).collect();
        assert_eq!(
            all,
            vec![vec![Value::Int(0), Value::Int(2)], vec![Value::Int(1), Value::Int(2)]]
        );

        let mut f = s.clone();
        f.fail();
        assert_eq!(enumerate_assignments(&f, &vars, 100).unwrap().count(), 0);

        let s = int_store(&[iv(1, 3), iv(1, 3)]);
        let vars: Vec<VarId> = s.vars().collect();
        assert_eq!(enumerate_assignments(&s, &vars, 100).unwrap().count(), 9);
        match enumerate_assignments(&s, &vars, 8) {
            Err(Error::CapExceeded { estimate, cap }) => assert_eq!((estimate, cap), (9, 8)),
            _ => panic!("expected refusal"),
        }
    }

    #[test]
    fn meet_examples() {
        let a = int_store(&[iv(1, 3)]);
        let b = int_store(&[iv(2, 4)]);
        assert_eq!(a.meet(&b).unwrap(), int_store(&[iv(2, 3)]));
        assert_eq!(a.meet(&a).unwrap(), a);

        let s1 = SetDomain::new([1].into(), [1, 2, 3].into());
        let s2 = SetDomain::new([2].into(), [1, 2].into());
        assert_eq!(s1.meet(&s2), SetDomain::new([1, 2].into(), [1, 2].into()));
    }

    #[test]
    fn int_domain_edits() {
        let mut d = IntDomain::from_values([1, 2, 3, 7, 8, 10]);
        assert_eq!(d.ranges(), &[(1, 3), (7, 8), (10, 10)]);
        assert!(d.remove(2));
        assert_eq!(d.ranges(), &[(1, 1), (3, 3), (7, 8), (10, 10)]);
        assert!(d.adjust_min(4));
        assert_eq!(d.ranges(), &[(7, 8), (10, 10)]);
        assert!(d.adjust_max(9));
        assert_eq!(d.ranges(), &[(7, 8)]);
        assert!(!d.adjust_max(9));
        assert!(d.adjust_min(9));
        assert!(d.is_empty());
    }

    #[test]
    fn affine_image_and_preimage() {
        let d = iv(1, 3);
        assert_eq!(d.map_affine(2, 0).unwrap(), IntDomain::from_values([2, 4, 6]));
        assert_eq!(d.map_affine(-1, 0).unwrap(), iv(-3, -1));
        assert_eq!(IntDomain::from_values([2, 3, 4]).preimage_affine(2, 0), iv(1, 2));
        assert_eq!(IntDomain::from_values([-4, -3, -2]).preimage_affine(-2, 0), iv(1, 2));
        assert_eq!(iv(0, 10).preimage_affine(3, 1), IntDomain::from_values([0, 1, 2, 3]));
        assert!(iv(0, i64::MAX).map_affine(2, 0).is_none());
    }

    #[test]
    fn store_failure_is_sticky() {
        let mut s = int_store(&[iv(0, 3), iv(0, 3)]);
        let (x, y) = (s.var(0), s.var(1));
        assert_eq!(s.adjust_min(x, 4), Err(Failure));
        assert!(s.is_failed());
        assert_eq!(s.adjust_min(y, 1), Err(Failure));
        assert_eq!(s.min(y), 0);
    }

    #[test]
    fn set_subdomains_count() {
        let d = SetDomain::new(IntSet::new(), [1, 2].into());
        // 3^2 convex sub-intervals plus the failed domain
        assert_eq!(d.subdomains().len(), 10);
        assert_eq!(d.members().len(), 4);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_domain() -> impl Strategy<Value = IntDomain> {
            proptest::collection::vec(-6i64..6, 0..8).prop_map(IntDomain::from_values)
        }

        proptest! {
            #[test]
            fn operations_keep_normal_form(a in small_domain(), b in small_domain(), v in -7i64..7) {
                prop_assert!(a.intersect(&b).is_normalized());
                prop_assert!(a.union(&b).is_normalized());
                let mut c = a.clone(); c.remove(v); prop_assert!(c.is_normalized());
                let mut c = a.clone(); c.adjust_min(v); prop_assert!(c.is_normalized());
                let mut c = a.clone(); c.adjust_max(v); prop_assert!(c.is_normalized());
                prop_assert!(a.map_affine(-3, 2).unwrap().is_normalized());
                prop_assert!(a.preimage_affine(2, 1).is_normalized());
                prop_assert_eq!(a.map_affine(-3, 2).unwrap().preimage_affine(-3, 2), a.clone());
            }

            #[test]
            fn meet_is_greatest_lower_bound(a in small_domain(), b in small_domain(), c in small_domain()) {
                let m = a.intersect(&b);
                prop_assert!(m.is_subset(&a) && m.is_subset(&b));
                if c.is_subset(&a) && c.is_subset(&b) {
                    prop_assert!(c.is_subset(&m));
                }
            }

            #[test]
            fn dom_is_least_and_below_conv(rows in proptest::collection::btree_set((0i64..4, 0i64..4), 0..10)) {
                let u = int_store(&[iv(0, 3), iv(0, 3)]);
                let (x, y) = (u.var(0), u.var(1));
                let c = ExtensionalConstraint::from_tuples(
                    vec![x, y],
                    rows.iter().map(|&(a, b)| vec![Value::Int(a), Value::Int(b)]),
                ).unwrap();
                let d = dom_of(&c, &u);
                let k = conv_of(&c, &u).unwrap();
                prop_assert!(d.is_stronger(&k).unwrap());
                // every tuple is inside dom(c)
                for t in &c.tuples {
                    prop_assert!(d.get(x).contains(&t[0]) && d.get(y).contains(&t[1]));
                }
                // removing any single value from dom(c) loses a tuple
                if !d.is_failed() {
                    for (i, var) in [x, y].into_iter().enumerate() {
                        for v in d.get(var).values() {
                            prop_assert!(c.tuples.iter().any(|t| t[i] == v));
                        }
                    }
                }
            }
        }
    }
}
