//! Integer arithmetic: max, unit-coefficient linear (in)equality,
//! positive multiplication, and equality.

use crate::derive::{Access, Base};
use crate::domains::{Failure, IntDomain, PResult, Sort};
use crate::kernel::{EventMask, Level};
use crate::relax::Relaxation;

fn clamp(v: i128) -> i64 {
    v.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

fn all_fixed(a: &mut Access<'_>) -> bool {
    (0..a.arity()).all(|i| a.is_fixed(i))
}

/// `max(x, y) = z` by bound rules.
#[derive(Debug)]
pub struct MaxTernary;

impl Base for MaxTernary {
    fn name(&self) -> String {
        "max".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; 3]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::BC; 3]
    }
    fn level(&self) -> Level {
        Level::BoundsZ
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        loop {
            let mut ch = false;
            let lo = a.min(0).max(a.min(1));
            let hi = a.max(0).max(a.max(1));
            ch |= a.adjust_min(2, lo)?;
            ch |= a.adjust_max(2, hi)?;
            let (zmin, zmax) = (a.min(2), a.max(2));
            ch |= a.adjust_max(0, zmax)?;
            ch |= a.adjust_max(1, zmax)?;
            if a.max(0) < zmin {
                ch |= a.adjust_min(1, zmin)?;
            }
            if a.max(1) < zmin {
                ch |= a.adjust_min(0, zmin)?;
            }
            if !ch {
                return Ok(all_fixed(a));
            }
        }
    }
}

/// `Σ xᵢ = c` by one pass of interval reasoning from the input bounds.
#[derive(Debug)]
pub struct LinearEqUnit {
    pub n: usize,
    pub c: i64,
}

impl Base for LinearEqUnit {
    fn name(&self) -> String {
        format!("lin_eq[{}]", self.c)
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; self.n]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::BC; self.n]
    }
    fn level(&self) -> Level {
        Level::BoundsZ
    }
    fn idempotent(&self) -> bool {
        false
    }
    fn relaxation(&self) -> Option<Relaxation> {
        Some(Relaxation::LinearEq { rhs: self.c })
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let mut mins = Vec::with_capacity(self.n);
        let mut maxs = Vec::with_capacity(self.n);
        for i in 0..self.n {
            mins.push(a.min(i) as i128);
            maxs.push(a.max(i) as i128);
        }
        let sl: i128 = mins.iter().sum();
        let su: i128 = maxs.iter().sum();
        let c = self.c as i128;
        if c < sl || c > su {
            return Err(Failure);
        }
        for i in 0..self.n {
            a.adjust_min(i, clamp(c - (su - maxs[i])))?;
            a.adjust_max(i, clamp(c - (sl - mins[i])))?;
        }
        if !all_fixed(a) {
            return Ok(false);
        }
        let sum: i128 = (0..self.n).map(|i| a.min(i) as i128).sum();
        if sum != c {
            return Err(Failure);
        }
        Ok(true)
    }
}

/// `Σ xᵢ = c` with full support checks, for at most three terms.
#[derive(Debug)]
pub struct LinearEqDom {
    pub n: usize,
    pub c: i64,
}

impl Base for LinearEqDom {
    fn name(&self) -> String {
        format!("lin_eq_dom[{}]", self.c)
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; self.n]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::DMC; self.n]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }
    fn relaxation(&self) -> Option<Relaxation> {
        Some(Relaxation::LinearEq { rhs: self.c })
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let doms: Vec<IntDomain> = (0..self.n).map(|i| a.dom(i)).collect();
        let mut keep: Vec<Vec<i64>> = vec![Vec::new(); self.n];
        match self.n {
            1 => {
                if doms[0].contains(self.c) {
                    keep[0].push(self.c);
                }
            }
            2 => {
                for v in doms[0].iter() {
                    if let Some(w) = self.c.checked_sub(v) {
                        if doms[1].contains(w) {
                            keep[0].push(v);
                            keep[1].push(w);
                        }
                    }
                }
            }
            _ => {
                for u in doms[0].iter() {
                    for v in doms[1].iter() {
                        let w = self.c as i128 - u as i128 - v as i128;
                        if w >= i64::MIN as i128 && w <= i64::MAX as i128 && doms[2].contains(w as i64) {
                            keep[0].push(u);
                            keep[1].push(v);
                            keep[2].push(w as i64);
                        }
                    }
                }
            }
        }
        for (i, k) in keep.into_iter().enumerate() {
            a.intersect(i, &IntDomain::from_values(k))?;
        }
        Ok(all_fixed(a))
    }
}

/// `Σ xᵢ ≠ c`.
#[derive(Debug)]
pub struct LinearNeqUnit {
    pub n: usize,
    pub c: i64,
}

impl Base for LinearNeqUnit {
    fn name(&self) -> String {
        format!("lin_neq[{}]", self.c)
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; self.n]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::FIX; self.n]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let mut free = None;
        let mut nfree = 0;
        let mut sum: i128 = 0;
        for i in 0..self.n {
            match a.value(i) {
                Some(v) => sum += v as i128,
                None => {
                    nfree += 1;
                    free = Some(i);
                    if nfree > 1 {
                        return Ok(false);
                    }
                }
            }
        }
        match free {
            None if sum == self.c as i128 => Err(Failure),
            None => Ok(true),
            Some(i) => {
                let v = self.c as i128 - sum;
                if v >= i64::MIN as i128 && v <= i64::MAX as i128 {
                    a.remove(i, v as i64)?;
                }
                Ok(true)
            }
        }
    }
}

/// `x · y = z` over strictly positive integers; bounds are tightened until
/// each has an integer support in the hull of the others.
#[derive(Debug)]
pub struct MultPpp;

fn div_ceil(a: i128, b: i128) -> i128 {
    num_integer::Integer::div_ceil(&a, &b)
}

fn div_floor(a: i128, b: i128) -> i128 {
    num_integer::Integer::div_floor(&a, &b)
}

impl MultPpp {
    /// Some `w ∈ [wl, wu]` with `v·w ∈ [zl, zu]`.
    fn factor_supported(v: i128, wl: i128, wu: i128, zl: i128, zu: i128) -> bool {
        div_ceil(zl, v).max(wl) <= div_floor(zu, v).min(wu)
    }

    /// Some `x ∈ [xl, xu]`, `y ∈ [yl, yu]` with `x·y = z`.
    fn product_supported(z: i128, xl: i128, xu: i128, yl: i128, yu: i128) -> bool {
        let (lo, hi) = (div_ceil(z, yu).max(xl), div_floor(z, yl).min(xu));
        let (lo2, hi2) = (div_ceil(z, xu).max(yl), div_floor(z, xl).min(yu));
        if hi - lo <= hi2 - lo2 {
            (lo..=hi).any(|x| z % x == 0)
        } else {
            (lo2..=hi2).any(|y| z % y == 0)
        }
    }
}

impl Base for MultPpp {
    fn name(&self) -> String {
        "mult".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; 3]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::BC; 3]
    }
    fn level(&self) -> Level {
        Level::BoundsZ
    }
    fn idempotent(&self) -> bool {
        true
    }
    fn relaxation(&self) -> Option<Relaxation> {
        Some(Relaxation::MultPositive)
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        for i in 0..3 {
            a.adjust_min(i, 1)?;
        }
        loop {
            let b: Vec<(i128, i128)> = (0..3).map(|i| (a.min(i) as i128, a.max(i) as i128)).collect();
            let (x, y, z) = (b[0], b[1], b[2]);
            let mut ch = false;
            ch |= a.adjust_min(2, clamp(x.0 * y.0))?;
            ch |= a.adjust_max(2, clamp(x.1 * y.1))?;
            ch |= a.adjust_min(0, clamp(div_ceil(z.0, y.1)))?;
            ch |= a.adjust_max(0, clamp(div_floor(z.1, y.0)))?;
            ch |= a.adjust_min(1, clamp(div_ceil(z.0, x.1)))?;
            ch |= a.adjust_max(1, clamp(div_floor(z.1, x.0)))?;
            if ch {
                continue;
            }
            // integer support of each bound within the hull of the others
            for i in 0..2 {
                let j = 1 - i;
                let (wl, wu) = b[j];
                if !Self::factor_supported(b[i].0, wl, wu, z.0, z.1) {
                    ch |= a.adjust_min(i, clamp(b[i].0 + 1))?;
                }
                if !Self::factor_supported(b[i].1, wl, wu, z.0, z.1) {
                    ch |= a.adjust_max(i, clamp(b[i].1 - 1))?;
                }
                if ch {
                    break;
                }
            }
            if ch {
                continue;
            }
            if !Self::product_supported(z.0, x.0, x.1, y.0, y.1) {
                a.adjust_min(2, clamp(z.0 + 1))?;
                continue;
            }
            if !Self::product_supported(z.1, x.0, x.1, y.0, y.1) {
                a.adjust_max(2, clamp(z.1 - 1))?;
                continue;
            }
            return Ok(all_fixed(a));
        }
    }
}

/// `x = y` with full domain intersection.
#[derive(Debug)]
pub struct IntEq;

impl Base for IntEq {
    fn name(&self) -> String {
        "eq".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; 2]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::DMC; 2]
    }
    fn level(&self) -> Level {
        Level::Domain
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let dy = a.dom(1);
        a.intersect(0, &dy)?;
        let dx = a.dom(0);
        a.intersect(1, &dx)?;
        Ok(a.is_fixed(0))
    }
}

/// `x = y` keeping only the bounds of the common values.
#[derive(Debug)]
pub struct IntEqBounds;

impl Base for IntEqBounds {
    fn name(&self) -> String {
        "eq_bnd".into()
    }
    fn sorts(&self) -> Vec<Sort> {
        vec![Sort::Int; 2]
    }
    fn events(&self) -> Vec<EventMask> {
        vec![EventMask::DMC; 2]
    }
    fn level(&self) -> Level {
        Level::BoundsD
    }
    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&self, a: &mut Access<'_>) -> PResult<bool> {
        let common = a.dom(0).intersect(&a.dom(1));
        let (Some(lo), Some(hi)) = (common.min(), common.max()) else {
            return Err(Failure);
        };
        for i in 0..2 {
            a.adjust_min(i, lo)?;
            a.adjust_max(i, hi)?;
        }
        Ok(a.is_fixed(0) && a.is_fixed(1))
    }
}
