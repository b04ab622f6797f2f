//! Normalized `U(1)`-valued cochains on a finite group, stored additively as
//! exact phases, with bar-complex coboundaries, cocycle tests, named cocycle
//! builders, pullbacks, and an exact solver deciding whether two cocycles
//! differ by a coboundary.
//!
//! Normalized means the value is zero whenever any argument is the identity;
//! every constructor and loader enforces this, and the coboundary of a
//! normalized cochain is normalized again, so the property never needs
//! rechecking downstream.

use crate::group::{same_group, FiniteGroup, GroupError, Homomorphism};
use crate::phase::Phase;
use crate::snf::solve_mod1;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CochainError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cochain is not normalized: nonzero value {value} at {location}")]
    NotNormalized { location: String, value: Phase },
    #[error("cochains live on different groups")]
    GroupMismatch,
    #[error("not a cocycle: coboundary is {value} at {location}")]
    NotACocycle { location: String, value: Phase },
    #[error("expected the group {expected}, got order {got}")]
    WrongGroup { expected: String, got: usize },
}

macro_rules! cochain_common {
    ($name:ident, $arity:expr) => {
        impl $name {
            pub fn group(&self) -> &Arc<FiniteGroup> {
                &self.group
            }

            pub fn zero(group: Arc<FiniteGroup>) -> $name {
                let len = group.order().pow($arity);
                $name { group, table: vec![Phase::ZERO; len] }
            }

            pub fn is_zero(&self) -> bool {
                self.table.iter().all(|p| p.is_zero())
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                same_group(&self.group, &other.group) && self.table == other.table
            }
        }
    };
}

/// A normalized 1-cochain `G -> Q/Z`.
#[derive(Clone, Debug)]
pub struct Cochain1 {
    group: Arc<FiniteGroup>,
    table: Vec<Phase>,
}
cochain_common!(Cochain1, 1);

/// A normalized 2-cochain `G x G -> Q/Z`.
#[derive(Clone, Debug)]
pub struct Cochain2 {
    group: Arc<FiniteGroup>,
    table: Vec<Phase>,
}
cochain_common!(Cochain2, 2);

/// A normalized 3-cochain `G x G x G -> Q/Z`.
#[derive(Clone, Debug)]
pub struct Cochain3 {
    group: Arc<FiniteGroup>,
    table: Vec<Phase>,
}
cochain_common!(Cochain3, 3);

impl Cochain1 {
    pub fn from_fn(group: Arc<FiniteGroup>, mut f: impl FnMut(usize) -> Phase) -> Result<Cochain1, CochainError> {
        let n = group.order();
        let table: Vec<Phase> = (0..n).map(&mut f).collect();
        if !table[0].is_zero() {
            return Err(CochainError::NotNormalized { location: "(e)".into(), value: table[0] });
        }
        Ok(Cochain1 { group, table })
    }

    #[inline]
    pub fn get(&self, g: usize) -> Phase {
        self.table[g]
    }

    pub fn set(&mut self, g: usize, value: Phase) -> Result<(), CochainError> {
        if g == 0 && !value.is_zero() {
            return Err(CochainError::NotNormalized { location: "(e)".into(), value });
        }
        self.table[g] = value;
        Ok(())
    }

    /// Bar coboundary: `(d b)(g1, g2) = b(g2) - b(g1 g2) + b(g1)`.
    pub fn coboundary(&self) -> Cochain2 {
        let g = &self.group;
        let n = g.order();
        let mut out = Cochain2::zero(g.clone());
        for g1 in 0..n {
            for g2 in 0..n {
                out.table[g1 * n + g2] =
                    self.get(g2) - self.get(g.mul(g1, g2)) + self.get(g1);
            }
        }
        out
    }
}

impl Cochain2 {
    pub fn from_fn(
        group: Arc<FiniteGroup>,
        mut f: impl FnMut(usize, usize) -> Phase,
    ) -> Result<Cochain2, CochainError> {
        let n = group.order();
        let mut table = vec![Phase::ZERO; n * n];
        for g1 in 0..n {
            for g2 in 0..n {
                let v = f(g1, g2);
                if (g1 == 0 || g2 == 0) && !v.is_zero() {
                    return Err(CochainError::NotNormalized {
                        location: format!("({}, {})", group.name_of(g1), group.name_of(g2)),
                        value: v,
                    });
                }
                table[g1 * n + g2] = v;
            }
        }
        Ok(Cochain2 { group, table })
    }

    #[inline]
    pub fn get(&self, g1: usize, g2: usize) -> Phase {
        self.table[g1 * self.group.order() + g2]
    }

    pub fn set(&mut self, g1: usize, g2: usize, value: Phase) -> Result<(), CochainError> {
        if (g1 == 0 || g2 == 0) && !value.is_zero() {
            return Err(CochainError::NotNormalized {
                location: format!("({}, {})", self.group.name_of(g1), self.group.name_of(g2)),
                value,
            });
        }
        let n = self.group.order();
        self.table[g1 * n + g2] = value;
        Ok(())
    }

    /// Bar coboundary:
    /// `(d c)(g1, g2, g3) = c(g2, g3) - c(g1 g2, g3) + c(g1, g2 g3) - c(g1, g2)`.
    pub fn coboundary(&self) -> Cochain3 {
        let g = &self.group;
        let n = g.order();
        let mut out = Cochain3::zero(g.clone());
        for g1 in 0..n {
            for g2 in 0..n {
                let g12 = g.mul(g1, g2);
                for g3 in 0..n {
                    out.table[(g1 * n + g2) * n + g3] = self.get(g2, g3) - self.get(g12, g3)
                        + self.get(g1, g.mul(g2, g3))
                        - self.get(g1, g2);
                }
            }
        }
        out
    }

    /// First triple (lexicographic) where the coboundary is nonzero.
    pub fn cocycle_violation(&self) -> Option<([usize; 3], Phase)> {
        let g = &self.group;
        let n = g.order();
        for g1 in 0..n {
            for g2 in 0..n {
                let g12 = g.mul(g1, g2);
                for g3 in 0..n {
                    let v = self.get(g2, g3) - self.get(g12, g3) + self.get(g1, g.mul(g2, g3))
                        - self.get(g1, g2);
                    if !v.is_zero() {
                        return Some(([g1, g2, g3], v));
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_violation().is_none()
    }

    /// Adds another cochain pointwise (same group required).
    pub fn add(&self, other: &Cochain2) -> Result<Cochain2, CochainError> {
        if !same_group(&self.group, &other.group) {
            return Err(CochainError::GroupMismatch);
        }
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| a + b).collect();
        Ok(Cochain2 { group: self.group.clone(), table })
    }

    /// Pulls back along `f`: `(f* c)(a, b) = c(f a, f b)`.
    pub fn pullback(&self, f: &Homomorphism) -> Result<Cochain2, CochainError> {
        if !same_group(&f.target, &self.group) {
            return Err(CochainError::GroupMismatch);
        }
        let n = f.source.order();
        let mut table = vec![Phase::ZERO; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.get(f.apply(a), f.apply(b));
            }
        }
        Ok(Cochain2 { group: f.source.clone(), table })
    }

    /// Decides whether `self - other` is a coboundary; returns a normalized
    /// 1-cochain `b` with `d b = self - other` when it is.
    ///
    /// The linear system over the identity-free tuples is solved exactly
    /// modulo 1 through an integer Smith normal form; the returned witness is
    /// re-verified against the input before being handed back.
    pub fn cohomologous_to(&self, other: &Cochain2) -> Result<Option<Cochain1>, CochainError> {
        if !same_group(&self.group, &other.group) {
            return Err(CochainError::GroupMismatch);
        }
        let g = &self.group;
        let n = g.order();
        if n == 1 {
            return Ok(Some(Cochain1::zero(g.clone())));
        }
        // Unknowns: b(x) for x != e. Rows: identity-free pairs.
        let cols = n - 1;
        let col = |x: usize| x - 1;
        let mut a_mat: Vec<Vec<BigInt>> = Vec::with_capacity((n - 1) * (n - 1));
        let mut rhs: Vec<BigRational> = Vec::with_capacity((n - 1) * (n - 1));
        for g1 in 1..n {
            for g2 in 1..n {
                let mut row = vec![BigInt::zero(); cols];
                row[col(g2)] += 1;
                row[col(g1)] += 1;
                let g12 = g.mul(g1, g2);
                if g12 != 0 {
                    row[col(g12)] -= 1;
                }
                a_mat.push(row);
                let delta = self.get(g1, g2) - other.get(g1, g2);
                rhs.push(BigRational::new(delta.numer().into(), delta.denom().into()));
            }
        }
        let Some(x) = solve_mod1(&a_mat, &rhs) else {
            return Ok(None);
        };
        let mut b = Cochain1::zero(g.clone());
        for v in 1..n {
            let p = Phase::try_from_big(&x[col(v)]).expect("witness phase fits machine range");
            b.set(v, p).expect("non-identity index");
        }
        // The solver is exact; re-verify anyway so a wrong witness can never
        // escape this function.
        let db = b.coboundary();
        for g1 in 0..n {
            for g2 in 0..n {
                assert_eq!(
                    db.get(g1, g2),
                    self.get(g1, g2) - other.get(g1, g2),
                    "coboundary witness failed re-verification"
                );
            }
        }
        Ok(Some(b))
    }
}

impl Cochain3 {
    pub fn from_fn(
        group: Arc<FiniteGroup>,
        mut f: impl FnMut(usize, usize, usize) -> Phase,
    ) -> Result<Cochain3, CochainError> {
        let n = group.order();
        let mut table = vec![Phase::ZERO; n * n * n];
        for g1 in 0..n {
            for g2 in 0..n {
                for g3 in 0..n {
                    let v = f(g1, g2, g3);
                    if (g1 == 0 || g2 == 0 || g3 == 0) && !v.is_zero() {
                        return Err(CochainError::NotNormalized {
                            location: format!(
                                "({}, {}, {})",
                                group.name_of(g1),
                                group.name_of(g2),
                                group.name_of(g3)
                            ),
                            value: v,
                        });
                    }
                    table[(g1 * n + g2) * n + g3] = v;
                }
            }
        }
        Ok(Cochain3 { group, table })
    }

    #[inline]
    pub fn get(&self, g1: usize, g2: usize, g3: usize) -> Phase {
        let n = self.group.order();
        self.table[(g1 * n + g2) * n + g3]
    }

    pub fn set(&mut self, g1: usize, g2: usize, g3: usize, value: Phase) -> Result<(), CochainError> {
        if (g1 == 0 || g2 == 0 || g3 == 0) && !value.is_zero() {
            return Err(CochainError::NotNormalized {
                location: format!(
                    "({}, {}, {})",
                    self.group.name_of(g1),
                    self.group.name_of(g2),
                    self.group.name_of(g3)
                ),
                value,
            });
        }
        let n = self.group.order();
        self.table[(g1 * n + g2) * n + g3] = value;
        Ok(())
    }

    /// The coboundary evaluated at one quadruple:
    /// `a(g2,g3,g4) - a(g1 g2,g3,g4) + a(g1,g2 g3,g4) - a(g1,g2,g3 g4) + a(g1,g2,g3)`.
    pub fn coboundary_at(&self, g1: usize, g2: usize, g3: usize, g4: usize) -> Phase {
        let g = &self.group;
        self.get(g2, g3, g4) - self.get(g.mul(g1, g2), g3, g4)
            + self.get(g1, g.mul(g2, g3), g4)
            - self.get(g1, g2, g.mul(g3, g4))
            + self.get(g1, g2, g3)
    }

    /// First quadruple (lexicographic) where the coboundary is nonzero.
    /// The quartic sweep is parallelized over the leading index.
    pub fn cocycle_violation(&self) -> Option<([usize; 4], Phase)> {
        let n = self.group.order();
        (0..n)
            .into_par_iter()
            .filter_map(|g1| {
                for g2 in 0..n {
                    for g3 in 0..n {
                        for g4 in 0..n {
                            let v = self.coboundary_at(g1, g2, g3, g4);
                            if !v.is_zero() {
                                return Some(([g1, g2, g3, g4], v));
                            }
                        }
                    }
                }
                None
            })
            .min_by_key(|(t, _)| *t)
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_violation().is_none()
    }

    pub fn add(&self, other: &Cochain3) -> Result<Cochain3, CochainError> {
        if !same_group(&self.group, &other.group) {
            return Err(CochainError::GroupMismatch);
        }
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| a + b).collect();
        Ok(Cochain3 { group: self.group.clone(), table })
    }

    /// Pulls back along `f`: `(f* a)(x, y, z) = a(f x, f y, f z)`.
    pub fn pullback(&self, f: &Homomorphism) -> Result<Cochain3, CochainError> {
        if !same_group(&f.target, &self.group) {
            return Err(CochainError::GroupMismatch);
        }
        let n = f.source.order();
        let mut table = vec![Phase::ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    table[(a * n + b) * n + c] = self.get(f.apply(a), f.apply(b), f.apply(c));
                }
            }
        }
        Ok(Cochain3 { group: f.source.clone(), table })
    }

    /// Decides whether `self - other` is a coboundary; returns a normalized
    /// 2-cochain witness when it is.
    pub fn cohomologous_to(&self, other: &Cochain3) -> Result<Option<Cochain2>, CochainError> {
        if !same_group(&self.group, &other.group) {
            return Err(CochainError::GroupMismatch);
        }
        let g = &self.group;
        let n = g.order();
        if n == 1 {
            return Ok(Some(Cochain2::zero(g.clone())));
        }
        // Unknowns: b(x, y) for x, y != e, flattened.
        let cols = (n - 1) * (n - 1);
        let col = |x: usize, y: usize| (x - 1) * (n - 1) + (y - 1);
        let mut a_mat: Vec<Vec<BigInt>> = Vec::with_capacity((n - 1).pow(3));
        let mut rhs: Vec<BigRational> = Vec::with_capacity((n - 1).pow(3));
        for g1 in 1..n {
            for g2 in 1..n {
                let g12 = g.mul(g1, g2);
                for g3 in 1..n {
                    let mut row = vec![BigInt::zero(); cols];
                    let g23 = g.mul(g2, g3);
                    row[col(g2, g3)] += 1;
                    if g12 != 0 {
                        row[col(g12, g3)] -= 1;
                    }
                    if g23 != 0 {
                        row[col(g1, g23)] += 1;
                    }
                    row[col(g1, g2)] -= 1;
                    a_mat.push(row);
                    let delta = self.get(g1, g2, g3) - other.get(g1, g2, g3);
                    rhs.push(BigRational::new(delta.numer().into(), delta.denom().into()));
                }
            }
        }
        let Some(x) = solve_mod1(&a_mat, &rhs) else {
            return Ok(None);
        };
        let mut b = Cochain2::zero(g.clone());
        for v in 1..n {
            for w in 1..n {
                let p = Phase::try_from_big(&x[col(v, w)]).expect("witness phase fits machine range");
                b.set(v, w, p).expect("non-identity indices");
            }
        }
        let db = b.coboundary();
        for g1 in 0..n {
            for g2 in 0..n {
                for g3 in 0..n {
                    assert_eq!(
                        db.get(g1, g2, g3),
                        self.get(g1, g2, g3) - other.get(g1, g2, g3),
                        "coboundary witness failed re-verification"
                    );
                }
            }
        }
        Ok(Some(b))
    }
}

/// The carry 3-cocycle on `Z/n`:
/// `a(x, y, z) = k * x * floor((y + z) / n) / n`.
pub fn cyclic_3cocycle(n: usize, k: i64) -> Result<Cochain3, CochainError> {
    let group = FiniteGroup::cyclic(n)?;
    Cochain3::from_fn(group, |x, y, z| {
        if y + z >= n {
            Phase::new(k * x as i64, n as i64)
        } else {
            Phase::ZERO
        }
    })
}

/// The pairing 2-cocycle on `Z/2 x Z/2`: `a((a1,a2), (b1,b2)) = a2 b1 / 2`.
pub fn klein_2cocycle() -> Cochain2 {
    bilinear_2cocycle(2).expect("order 4 is under every cap")
}

/// The pairing 2-cocycle on `Z/n x Z/n`: `a((a1,a2), (b1,b2)) = a2 b1 / n`.
/// For `n = 2` this is the Klein cocycle.
pub fn bilinear_2cocycle(n: usize) -> Result<Cochain2, CochainError> {
    let zn = FiniteGroup::cyclic(n)?;
    let group = FiniteGroup::product(&zn, &zn)?;
    Cochain2::from_fn(group, |a, b| {
        let a2 = (a / n) as i64;
        let b1 = (b % n) as i64;
        Phase::new(a2 * b1, n as i64)
    })
}

/// The product 3-cocycle on `(Z/n)^3`: `a(x, y, z) = x1 y2 z3 / n`.
/// Unlike the cyclic carry cocycle it produces commuting pairs whose
/// stabilizer character is nontrivial.
pub fn trilinear_3cocycle(n: usize) -> Result<Cochain3, CochainError> {
    let zn = FiniteGroup::cyclic(n)?;
    let g2 = FiniteGroup::product(&zn, &zn)?;
    let group = FiniteGroup::product(&g2, &zn)?;
    // Index digits: first factor least significant.
    let digit = |v: usize, i: u32| (v / n.pow(i)) % n;
    Cochain3::from_fn(group, move |x, y, z| {
        let x1 = digit(x, 0) as i64;
        let y2 = digit(y, 1) as i64;
        let z3 = digit(z, 2) as i64;
        Phase::new(x1 * y2 * z3, n as i64)
    })
}
