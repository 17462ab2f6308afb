//! Real relaxations of arithmetic constraints, evaluated in exact arithmetic.
//!
//! The scalar is generic; the crate uses [`crate::Rational`].

use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact ordered field element with integer rounding.
pub trait Exact: Clone + Ord + Debug + Signed + Zero + One {
    fn from_int(v: i64) -> Self;
    fn floor_int(&self) -> i128;
    fn ceil_int(&self) -> i128;
}

macro_rules! impl_exact {
    ($t:ty) => {
        impl Exact for Ratio<$t> {
            fn from_int(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }
            fn floor_int(&self) -> i128 {
                Integer::div_floor(self.numer(), self.denom()) as i128
            }
            fn ceil_int(&self) -> i128 {
                Integer::div_ceil(self.numer(), self.denom()) as i128
            }
        }
    };
}

impl_exact!(i64);
impl_exact!(i128);

/// Constraint whose real relaxation can be projected exactly onto a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relaxation {
    /// `Σ tᵢ = rhs`.
    LinearEq { rhs: i64 },
    /// `t₀ · t₁ = t₂` with every `tᵢ ≥ 1`.
    MultPositive,
}

/// One position of a relaxed constraint seen from the source variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Position<T> {
    /// Source interval `[lo, hi]` mapped by `v ↦ a·v + o`.
    Affine { a: i64, o: i64, lo: T, hi: T },
    Const(T),
}

fn hull<T: Exact>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Relaxation {
    /// Projects the relaxation restricted to `boxes` onto each coordinate;
    /// `None` when the relaxation has no real point inside the box.
    pub fn project<T: Exact>(&self, boxes: &[(T, T)]) -> Option<Vec<(T, T)>> {
        if boxes.iter().any(|(l, u)| l > u) {
            return None;
        }
        match self {
            Relaxation::LinearEq { rhs } => {
                let c = T::from_int(*rhs);
                let sl = boxes.iter().fold(T::zero(), |s, b| s + b.0.clone());
                let su = boxes.iter().fold(T::zero(), |s, b| s + b.1.clone());
                if c < sl || c > su {
                    return None;
                }
                Some(
                    boxes
                        .iter()
                        .map(|(l, u)| {
                            let lo = (c.clone() - (su.clone() - u.clone())).max(l.clone());
                            let hi = (c.clone() - (sl.clone() - l.clone())).min(u.clone());
                            (lo, hi)
                        })
                        .collect(),
                )
            }
            Relaxation::MultPositive => {
                assert_eq!(boxes.len(), 3);
                let one = T::one();
                let b: Vec<(T, T)> = boxes.iter().map(|(l, u)| (l.clone().max(one.clone()), u.clone())).collect();
                if b.iter().any(|(l, u)| l > u) {
                    return None;
                }
                let (x, y, z) = (&b[0], &b[1], &b[2]);
                let px = (x.0.clone().max(z.0.clone() / y.1.clone()), x.1.clone().min(z.1.clone() / y.0.clone()));
                let py = (y.0.clone().max(z.0.clone() / x.1.clone()), y.1.clone().min(z.1.clone() / x.0.clone()));
                let pz = (
                    z.0.clone().max(x.0.clone() * y.0.clone()),
                    z.1.clone().min(x.1.clone() * y.1.clone()),
                );
                let out = vec![px, py, pz];
                if out.iter().any(|(l, u)| l > u) {
                    return None;
                }
                Some(out)
            }
        }
    }

    /// Integer bounds implied on each affine position's source variable by the
    /// relaxation; constant positions yield `None` entries.
    pub fn source_bounds<T: Exact>(&self, positions: &[Position<T>]) -> Option<Vec<Option<(i128, i128)>>> {
        let boxes: Vec<(T, T)> = positions
            .iter()
            .map(|p| match p {
                Position::Affine { a, o, lo, hi } => {
                    let (a, o) = (T::from_int(*a), T::from_int(*o));
                    hull(a.clone() * lo.clone() + o.clone(), a * hi.clone() + o)
                }
                Position::Const(k) => (k.clone(), k.clone()),
            })
            .collect();
        let proj = self.project(&boxes)?;
        let mut out = Vec::with_capacity(positions.len());
        for (p, (l, u)) in positions.iter().zip(proj) {
            out.push(match p {
                Position::Affine { a, o, .. } => {
                    let (ta, to) = (T::from_int(*a), T::from_int(*o));
                    let (sl, su) = hull((l - to.clone()) / ta.clone(), (u - to) / ta);
                    let (il, iu) = (sl.ceil_int(), su.floor_int());
                    if il > iu {
                        return None;
                    }
                    Some((il, iu))
                }
                Position::Const(_) => None,
            });
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn scaled_linear_relaxation_keeps_interior_integers() {
        // 2x + 2y = 5 over [0,2]²: x ∈ [1/2, 2] → {1, 2}
        let pos = vec![
            Position::Affine { a: 2, o: 0, lo: q(0), hi: q(2) },
            Position::Affine { a: 2, o: 0, lo: q(0), hi: q(2) },
        ];
        let b = Relaxation::LinearEq { rhs: 5 }.source_bounds(&pos).unwrap();
        assert_eq!(b, vec![Some((1, 2)), Some((1, 2))]);
    }

    #[test]
    fn mult_projection() {
        let b = Relaxation::MultPositive
            .project(&[(q(2), q(4)), (q(3), q(3)), (q(6), q(9))])
            .unwrap();
        assert_eq!(b[0], (q(2), q(3)));
        assert_eq!(b[2], (q(6), q(9)));
        assert!(Relaxation::MultPositive.project(&[(q(1), q(2)), (q(1), q(2)), (q(5), q(5))]).is_none());
    }

    #[test]
    fn generic_over_width() {
        let r = Relaxation::LinearEq { rhs: 3 };
        let a = r.project(&[(Ratio::<i64>::from_int(0), Ratio::from_int(5)), (Ratio::from_int(0), Ratio::from_int(1))]);
        let b = r.project(&[(q(0), q(5)), (q(0), q(1))]);
        assert_eq!(a.unwrap()[0].0, Ratio::from_int(2));
        assert_eq!(b.unwrap()[0].1, q(3));
    }
}
