//! Symbolic scale-flow check for section weights.
//!
//! Sections of the weight bundles are spanned by monomials `r^a ⊗ (degree-i
//! symbol)` over the circle geometry and `vol^a · F ⊗ (degree-i symbol)`
//! over the lattice geometry, where `vol = b1*l2 - b2*l1` is the volume
//! function of a lattice basis `(l1, l2)` with conjugates `(b1, b2)`. A
//! monomial is scale-invariant exactly when the generating first-order
//! operator, corrected by half the form degree, annihilates it; this module
//! applies those operators by honest symbolic differentiation over Laurent
//! monomials with rational exponents on the scale variable.
//!
//! The two lattice operators are normalized so each acts on `vol^a` with
//! eigenvalue `+a` (the opposite sign on the second operator would
//! contradict the first on the very generators both are meant to fix).

use num_rational::Rational64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Which model geometry the weight check runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgGeometry {
    /// Circle geometry: one radial scale `r`, operator `r·d/dr - i/2`.
    Radial,
    /// Lattice geometry: basis `(l1, l2)`, volume `vol`, two operators.
    Lattice,
}

/// A Laurent term `coeff · l1^l1 l2^l2 b1^b1 b2^b2 · vol^vol`, with `vol`
/// kept as an opaque scale symbol of rational exponent. The differential
/// operators below only shift its power, so no relation between `vol` and
/// the basis variables is ever needed to decide vanishing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeTerm {
    pub coeff: Rational64,
    pub l1: i64,
    pub l2: i64,
    pub b1: i64,
    pub b2: i64,
    pub vol: Rational64,
}

impl LatticeTerm {
    fn vol_power(a: Rational64) -> LatticeTerm {
        LatticeTerm { coeff: Rational64::one(), l1: 0, l2: 0, b1: 0, b2: 0, vol: a }
    }
}

/// Combines like terms and drops zeros.
fn normalize(terms: Vec<LatticeTerm>) -> Vec<LatticeTerm> {
    let mut map: BTreeMap<(i64, i64, i64, i64, Rational64), Rational64> = BTreeMap::new();
    for t in terms {
        *map.entry((t.l1, t.l2, t.b1, t.b2, t.vol)).or_insert_with(Rational64::zero) += t.coeff;
    }
    map.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((l1, l2, b1, b2, vol), coeff)| LatticeTerm { coeff, l1, l2, b1, b2, vol })
        .collect()
}

/// Derivative in the first conjugate variable: `d/d b1` acts on `b1^k` and,
/// through `d vol / d b1 = l2`, on `vol^a`.
fn d_b1(terms: &[LatticeTerm]) -> Vec<LatticeTerm> {
    let mut out = Vec::new();
    for t in terms {
        if t.b1 != 0 {
            out.push(LatticeTerm {
                coeff: t.coeff * Rational64::from_integer(t.b1),
                b1: t.b1 - 1,
                ..*t
            });
        }
        if !t.vol.is_zero() {
            out.push(LatticeTerm {
                coeff: t.coeff * t.vol,
                l2: t.l2 + 1,
                vol: t.vol - Rational64::one(),
                ..*t
            });
        }
    }
    normalize(out)
}

/// Derivative in the second conjugate variable: `d vol / d b2 = -l1`.
fn d_b2(terms: &[LatticeTerm]) -> Vec<LatticeTerm> {
    let mut out = Vec::new();
    for t in terms {
        if t.b2 != 0 {
            out.push(LatticeTerm {
                coeff: t.coeff * Rational64::from_integer(t.b2),
                b2: t.b2 - 1,
                ..*t
            });
        }
        if !t.vol.is_zero() {
            out.push(LatticeTerm {
                coeff: -t.coeff * t.vol,
                l1: t.l1 + 1,
                vol: t.vol - Rational64::one(),
                ..*t
            });
        }
    }
    normalize(out)
}

/// Multiplies every term by `c · l1^dl1 l2^dl2 · vol^dvol`.
fn shift(terms: &[LatticeTerm], c: Rational64, dl1: i64, dl2: i64, dvol: Rational64) -> Vec<LatticeTerm> {
    normalize(
        terms
            .iter()
            .map(|t| LatticeTerm {
                coeff: t.coeff * c,
                l1: t.l1 + dl1,
                l2: t.l2 + dl2,
                vol: t.vol + dvol,
                ..*t
            })
            .collect(),
    )
}

/// First lattice flow operator `(vol / l2) · d/d b1` applied to a term list.
fn flow1(terms: &[LatticeTerm]) -> Vec<LatticeTerm> {
    shift(&d_b1(terms), Rational64::one(), 0, -1, Rational64::one())
}

/// Second lattice flow operator `-(vol / l1) · d/d b2`.
fn flow2(terms: &[LatticeTerm]) -> Vec<LatticeTerm> {
    shift(&d_b2(terms), -Rational64::one(), -1, 0, Rational64::one())
}

/// Residual of the lattice weight equation on `vol^a ⊗ (degree-i symbol)`
/// under the given flow operator; empty iff the monomial is invariant.
fn lattice_residual(
    flow: impl Fn(&[LatticeTerm]) -> Vec<LatticeTerm>,
    a: Rational64,
    i: i64,
) -> Vec<LatticeTerm> {
    let t = vec![LatticeTerm::vol_power(a)];
    let mut r = flow(&t);
    r.extend(shift(&t, -Rational64::new(i, 2), 0, 0, Rational64::zero()));
    normalize(r)
}

/// A radial term `coeff · r^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RadialTerm {
    coeff: Rational64,
    power: Rational64,
}

/// `r · d/dr` on a radial term list.
fn radial_euler(terms: &[RadialTerm]) -> Vec<RadialTerm> {
    terms
        .iter()
        .filter(|t| !t.power.is_zero())
        .map(|t| RadialTerm { coeff: t.coeff * t.power, power: t.power })
        .filter(|t| !t.coeff.is_zero())
        .collect()
}

fn radial_residual(a: Rational64, i: i64) -> Vec<RadialTerm> {
    let t = vec![RadialTerm { coeff: Rational64::one(), power: a }];
    let mut map: BTreeMap<Rational64, Rational64> = BTreeMap::new();
    for s in radial_euler(&t) {
        *map.entry(s.power).or_insert_with(Rational64::zero) += s.coeff;
    }
    for s in &t {
        *map.entry(s.power).or_insert_with(Rational64::zero) -= s.coeff * Rational64::new(i, 2);
    }
    map.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(power, coeff)| RadialTerm { coeff, power })
        .collect()
}

/// Returns true iff the scale monomial `scale^a ⊗ (degree-i symbol)` is
/// annihilated by the flow operator(s) of the chosen geometry — for the
/// lattice geometry, by both. Closed form: `a = i/2`.
pub fn rg_weight_check(geometry: RgGeometry, a: Rational64, i: i64) -> bool {
    match geometry {
        RgGeometry::Radial => radial_residual(a, i).is_empty(),
        RgGeometry::Lattice => {
            lattice_residual(flow1, a, i).is_empty() && lattice_residual(flow2, a, i).is_empty()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn derivative_engine_basics() {
        // d/d b1 (vol) = l2.
        let d = d_b1(&[LatticeTerm::vol_power(Rational64::one())]);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].coeff, d[0].l2, d[0].vol), (Rational64::one(), 1, Rational64::zero()));
        // d/d b1 (b1^2) = 2 b1.
        let sq = LatticeTerm { b1: 2, ..LatticeTerm::vol_power(Rational64::zero()) };
        let d = d_b1(&[sq]);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].coeff, d[0].b1), (r(2, 1), 1));
        // Product rule: d/d b1 (b1 · vol) = vol + b1 l2.
        let t = LatticeTerm { b1: 1, ..LatticeTerm::vol_power(Rational64::one()) };
        let d = d_b1(&[t]);
        assert_eq!(d.len(), 2);
        // d/d b2 (vol) = -l1.
        let d = d_b2(&[LatticeTerm::vol_power(Rational64::one())]);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].coeff, d[0].l1), (r(-1, 1), 1));
    }

    #[test]
    fn both_lattice_flows_scale_volume_powers_identically() {
        for num in 0..=8 {
            let a = r(num, 2);
            let t = vec![LatticeTerm::vol_power(a)];
            let f1 = flow1(&t);
            let f2 = flow2(&t);
            assert_eq!(f1, f2, "a = {a}");
            if a.is_zero() {
                assert!(f1.is_empty());
            } else {
                assert_eq!(f1.len(), 1);
                assert_eq!((f1[0].coeff, f1[0].vol), (a, a));
            }
        }
    }

    #[test]
    fn opposite_sign_on_second_flow_never_annihilates() {
        // With the second operator's sign flipped, vol^a picks up -a, so the
        // weight equation a = i/2 fails for every a > 0; this pins the
        // normalization used above.
        let bad_flow =
            |terms: &[LatticeTerm]| shift(&d_b2(terms), Rational64::one(), -1, 0, Rational64::one());
        for num in 1..=8 {
            // a = num/2, so the matching form degree is i = num.
            assert!(!lattice_residual(&bad_flow, r(num, 2), num).is_empty());
        }
    }

    #[test]
    fn weight_grid_matches_closed_form() {
        for num in 0..=8 {
            let a = r(num, 2);
            for i in 0..=8i64 {
                let expect = a == r(i, 2);
                assert_eq!(rg_weight_check(RgGeometry::Radial, a, i), expect, "radial {a} {i}");
                assert_eq!(rg_weight_check(RgGeometry::Lattice, a, i), expect, "lattice {a} {i}");
            }
        }
    }

    #[test]
    fn worked_examples() {
        assert!(rg_weight_check(RgGeometry::Radial, r(0, 1), 0));
        assert!(rg_weight_check(RgGeometry::Radial, r(1, 1), 2));
        assert!(!rg_weight_check(RgGeometry::Radial, r(1, 1), 1));
        assert!(rg_weight_check(RgGeometry::Lattice, r(1, 2), 1));
        assert!(!rg_weight_check(RgGeometry::Lattice, r(1, 2), 2));
    }
}
