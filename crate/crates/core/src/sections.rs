//! Invariant-section spaces of transgressed lines.
//!
//! A twist singles out the *regular* conjugacy classes (those whose
//! stabilizer character is trivial); invariant sections of the transgressed
//! line over a space are counted by an exact projector-trace formula
//! summed over classes (single loops) or commuting-pair orbits (double
//! loops). Dimensions are decided exactly in a cyclotomic field whenever the
//! coefficient data is given by phases; imported floating-point character
//! data falls back to double precision with an integrality tolerance of
//! `1e-6`.
//!
//! For double loops the output is reported as rank data per modular weight:
//! the weight-`j` function factor is an infinite-dimensional module, so only
//! the coefficient-system rank is a finite invariant.

use crate::cochain::{Cochain2, Cochain3};
use crate::cyclotomic::RootSum;
use crate::group::{same_group, CommutingPair, FiniteGroup, GSet, PairOrbit};
use crate::inertia::sl2z_orbits;
use crate::phase::Phase;
use crate::transgression::{chi_element, chi_pair, StabilizerCharacter, TransgressionError};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

pub use crate::rgflow::{rg_weight_check, RgGeometry};

const APPROX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SectionsError {
    #[error(transparent)]
    Transgression(#[from] TransgressionError),
    #[error("input is not a cocycle: violation at {location} with value {value}")]
    NotACocycle { location: String, value: Phase },
    #[error("cochain is defined over a different group than the requested computation")]
    GroupMismatch,
    #[error("cohomology data is missing conjugacy class [{label}]")]
    MissingClass { label: String },
    #[error("cohomology data is missing commuting-pair orbit [{a},{b}]")]
    MissingPairOrbit { a: String, b: String },
    #[error("character table for {label} has {got} columns but the stabilizer has {expected} elements")]
    CharacterLength { label: String, expected: usize, got: usize },
    #[error("projector trace for {label} is {value}, not a nonnegative integer")]
    NonIntegerDimension { label: String, value: String },
    #[error("regular pair orbits are not modular-stable: orbit ({ra},{rb}) is regular but ({na},{nb}) in the same modular block is not")]
    ModularInstability { ra: usize, rb: usize, na: usize, nb: usize },
}

impl SectionsError {
    pub fn kind(&self) -> crate::ErrorKind {
        match self {
            SectionsError::Transgression(e) => e.kind(),
            SectionsError::ModularInstability { .. } => crate::ErrorKind::Consistency,
            _ => crate::ErrorKind::Validation,
        }
    }
}

/// A graded invariant-section space: dimension, basis labels, and the
/// weight bookkeeping `degree + modular_weight = weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    pub dimension: usize,
    pub basis: Vec<String>,
    pub weight: i64,
    pub degree: i64,
    pub modular_weight: i64,
}

/// Rank data of the weight-`k` double-loop sections: total plus the
/// per-(degree, modular weight) breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllRank {
    pub weight: i64,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub breakdown: Vec<SectionSpace>,
}

/// Character data of one cohomological degree of a fixed-point space,
/// as seen by the stabilizer of the base class or pair.
#[derive(Clone, Debug)]
pub struct DegreePiece {
    pub degree: i64,
    pub dim: usize,
    /// Extra label (e.g. a fixed-point orbit) carried into basis output.
    pub label: Option<String>,
    pub values: CharacterValues,
}

/// Stabilizer traces, one entry per stabilizer element in ascending order.
#[derive(Clone, Debug)]
pub enum CharacterValues {
    /// Each trace given exactly as a multiset of phases summing to it.
    Exact(Vec<Vec<Phase>>),
    /// Each trace given as a double-precision complex number.
    Approx(Vec<Complex64>),
}

impl CharacterValues {
    fn len(&self) -> usize {
        match self {
            CharacterValues::Exact(v) => v.len(),
            CharacterValues::Approx(v) => v.len(),
        }
    }
}

/// Per-class and per-pair-orbit coefficient data for section counting.
///
/// Class keys are class representatives (smallest member); pair keys are the
/// lexicographically least pair of the orbit. Character tables are aligned
/// with the ascending centralizer (`FiniteGroup::centralizer`,
/// `centralizer_pair`) of that representative.
#[derive(Clone, Debug, Default)]
pub struct CohomologyData {
    class_pieces: BTreeMap<usize, Vec<DegreePiece>>,
    pair_pieces: BTreeMap<(usize, usize), Vec<DegreePiece>>,
}

impl CohomologyData {
    pub fn new() -> CohomologyData {
        CohomologyData::default()
    }

    /// Data of the one-point space: every fixed-point set is a point with
    /// the trivial stabilizer action in degree zero.
    pub fn point(group: &Arc<FiniteGroup>) -> CohomologyData {
        let mut data = CohomologyData::new();
        for class in group.conjugacy_classes() {
            let rep = class[0];
            let z = group.centralizer(rep);
            data.add_class_piece(rep, trivial_piece(z.len()));
        }
        for orbit in group.pair_orbits() {
            let rep = orbit.representative;
            data.add_pair_piece(rep, trivial_piece(orbit.stabilizer.len()));
        }
        data
    }

    /// Degree-zero data of a finite G-set: for each class or pair, one piece
    /// per stabilizer orbit on the joint fixed points, with permutation
    /// traces. A class with no fixed points is covered with zero pieces.
    pub fn from_gset(x: &GSet) -> CohomologyData {
        let group = x.group();
        let mut data = CohomologyData::new();
        for class in group.conjugacy_classes() {
            let rep = class[0];
            let z = group.centralizer(rep);
            data.cover_class(rep);
            for piece in gset_pieces(x, &[rep], &z) {
                data.add_class_piece(rep, piece);
            }
        }
        for orbit in group.pair_orbits() {
            let rep = orbit.representative;
            data.cover_pair(rep);
            for piece in gset_pieces(x, &[rep.g1, rep.g2], &orbit.stabilizer) {
                data.add_pair_piece(rep, piece);
            }
        }
        data
    }

    /// Marks a class as covered, possibly with no degree pieces (an empty
    /// fixed-point space).
    pub fn cover_class(&mut self, class_rep: usize) {
        self.class_pieces.entry(class_rep).or_default();
    }

    /// Marks a pair orbit as covered, possibly with no degree pieces.
    pub fn cover_pair(&mut self, pair: CommutingPair) {
        self.pair_pieces.entry((pair.g1, pair.g2)).or_default();
    }

    pub fn add_class_piece(&mut self, class_rep: usize, piece: DegreePiece) {
        self.class_pieces.entry(class_rep).or_default().push(piece);
    }

    pub fn add_pair_piece(&mut self, pair: CommutingPair, piece: DegreePiece) {
        self.pair_pieces.entry((pair.g1, pair.g2)).or_default().push(piece);
    }

    /// All class entries in ascending representative order.
    pub fn classes(&self) -> impl Iterator<Item = (usize, &[DegreePiece])> {
        self.class_pieces.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// All pair entries in ascending representative order.
    pub fn pairs(&self) -> impl Iterator<Item = (CommutingPair, &[DegreePiece])> {
        self.pair_pieces
            .iter()
            .map(|(&(g1, g2), v)| (CommutingPair { g1, g2 }, v.as_slice()))
    }

    pub fn class_pieces(&self, class_rep: usize) -> Option<&[DegreePiece]> {
        self.class_pieces.get(&class_rep).map(Vec::as_slice)
    }

    pub fn pair_pieces(&self, pair: CommutingPair) -> Option<&[DegreePiece]> {
        self.pair_pieces.get(&(pair.g1, pair.g2)).map(Vec::as_slice)
    }
}

fn trivial_piece(stabilizer_size: usize) -> DegreePiece {
    DegreePiece {
        degree: 0,
        dim: 1,
        label: None,
        values: CharacterValues::Exact(vec![vec![Phase::ZERO]; stabilizer_size]),
    }
}

/// Splits the joint fixed points of `fixing` into orbits of the stabilizer
/// and encodes each orbit's permutation traces exactly.
fn gset_pieces(x: &GSet, fixing: &[usize], stabilizer: &[usize]) -> Vec<DegreePiece> {
    let fixed = x.fixed_points(fixing);
    let mut seen = vec![false; x.size()];
    let mut pieces = Vec::new();
    for &start in &fixed {
        if seen[start] {
            continue;
        }
        let mut orbit: Vec<usize> = stabilizer.iter().map(|&h| x.act(h, start)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &p in &orbit {
            seen[p] = true;
        }
        let values = stabilizer
            .iter()
            .map(|&h| {
                let fixed_count = orbit.iter().filter(|&&p| x.act(h, p) == p).count();
                vec![Phase::ZERO; fixed_count]
            })
            .collect();
        pieces.push(DegreePiece {
            degree: 0,
            dim: orbit.len(),
            label: Some(format!("x{}", orbit[0])),
            values: CharacterValues::Exact(values),
        });
    }
    pieces
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

fn check_cocycle2(group: &Arc<FiniteGroup>, alpha: &Cochain2) -> Result<(), SectionsError> {
    if !same_group(alpha.group(), group) {
        return Err(SectionsError::GroupMismatch);
    }
    if let Some((t, v)) = alpha.cocycle_violation() {
        return Err(SectionsError::NotACocycle { location: format!("{t:?}"), value: v });
    }
    Ok(())
}

fn check_cocycle3(group: &Arc<FiniteGroup>, alpha: &Cochain3) -> Result<(), SectionsError> {
    if !same_group(alpha.group(), group) {
        return Err(SectionsError::GroupMismatch);
    }
    if let Some((t, v)) = alpha.cocycle_violation() {
        return Err(SectionsError::NotACocycle { location: format!("{t:?}"), value: v });
    }
    Ok(())
}

/// Conjugacy-class representatives whose stabilizer character is trivial.
pub fn regular_classes(
    group: &Arc<FiniteGroup>,
    alpha: &Cochain2,
) -> Result<Vec<usize>, SectionsError> {
    check_cocycle2(group, alpha)?;
    let mut regular = Vec::new();
    for class in group.conjugacy_classes() {
        let rep = class[0];
        if chi_element(alpha, rep)?.is_trivial() {
            regular.push(rep);
        }
    }
    Ok(regular)
}

/// Commuting-pair orbits whose stabilizer character is trivial.
pub fn regular_pair_orbits(
    group: &Arc<FiniteGroup>,
    alpha: &Cochain3,
) -> Result<Vec<PairOrbit>, SectionsError> {
    check_cocycle3(group, alpha)?;
    let mut regular = Vec::new();
    for orbit in group.pair_orbits() {
        if chi_pair(alpha, orbit.representative)?.is_trivial() {
            regular.push(orbit);
        }
    }
    Ok(regular)
}

/// Exact or tolerance-checked evaluation of the projector trace
/// `(1/|Z|) * sum_h trace(h) * e(chi(h))` for one degree piece.
fn piece_dimension(
    label: &str,
    piece: &DegreePiece,
    stabilizer: &[usize],
    chi: &StabilizerCharacter,
) -> Result<usize, SectionsError> {
    if piece.values.len() != stabilizer.len() {
        return Err(SectionsError::CharacterLength {
            label: label.to_string(),
            expected: stabilizer.len(),
            got: piece.values.len(),
        });
    }
    let z = stabilizer.len() as i64;
    match &piece.values {
        CharacterValues::Exact(traces) => {
            let mut modulus: i64 = 1;
            for (&h, eigenphases) in stabilizer.iter().zip(traces) {
                modulus = modulus.lcm(&chi.get(h)?.denom());
                for p in eigenphases {
                    modulus = modulus.lcm(&p.denom());
                }
            }
            let mut sum = RootSum::new(modulus as u64);
            for (&h, eigenphases) in stabilizer.iter().zip(traces) {
                let c = chi.get(h)?;
                for &p in eigenphases {
                    sum.add_one(p + c);
                }
            }
            let total = match sum.rational_value() {
                Some(v) => v,
                None => {
                    return Err(SectionsError::NonIntegerDimension {
                        label: label.to_string(),
                        value: "an irrational cyclotomic sum".to_string(),
                    })
                }
            };
            let dim = total / BigRational::from_integer(z.into());
            if !dim.is_integer() || dim.is_negative() {
                return Err(SectionsError::NonIntegerDimension {
                    label: label.to_string(),
                    value: dim.to_string(),
                });
            }
            Ok(dim.to_integer().to_usize().expect("small nonnegative dimension"))
        }
        CharacterValues::Approx(traces) => {
            let mut total = Complex64::new(0.0, 0.0);
            for (&h, trace) in stabilizer.iter().zip(traces) {
                total += trace * chi.get(h)?.as_complex();
            }
            total /= z as f64;
            let rounded = total.re.round();
            if total.im.abs() > APPROX_TOLERANCE
                || (total.re - rounded).abs() > APPROX_TOLERANCE
                || rounded < -0.5
            {
                return Err(SectionsError::NonIntegerDimension {
                    label: label.to_string(),
                    value: format!("{}+{}i", total.re, total.im),
                });
            }
            Ok(rounded as usize)
        }
    }
}

fn push_basis(basis: &mut Vec<String>, base: &str, piece: &DegreePiece, count: usize) {
    let label = match &piece.label {
        Some(l) => format!("{base}*{l}"),
        None => base.to_string(),
    };
    if count == 1 {
        basis.push(label);
    } else {
        for k in 1..=count {
            basis.push(format!("{label}#{k}"));
        }
    }
}

/// Dimension and basis of the invariant sections of the transgressed line in
/// the given parity: `sum over classes of the chi_g-isotypic multiplicity in
/// the even or odd coefficient data`.
pub fn ktheory_dim(
    group: &Arc<FiniteGroup>,
    data: &CohomologyData,
    alpha: &Cochain2,
    parity: Parity,
) -> Result<SectionSpace, SectionsError> {
    check_cocycle2(group, alpha)?;
    let want = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut dimension = 0usize;
    let mut basis = Vec::new();
    for class in group.conjugacy_classes() {
        let rep = class[0];
        let class_label = format!("[{}]", group.name_of(rep));
        let pieces = data
            .class_pieces(rep)
            .ok_or_else(|| SectionsError::MissingClass { label: class_label.clone() })?;
        let stabilizer = group.centralizer(rep);
        let chi = chi_element(alpha, rep)?;
        for piece in pieces {
            if piece.degree.rem_euclid(2) != want {
                continue;
            }
            let d = piece_dimension(&class_label, piece, &stabilizer, &chi)?;
            dimension += d;
            if d > 0 {
                push_basis(&mut basis, &class_label, piece, d);
            }
        }
    }
    Ok(SectionSpace { dimension, basis, weight: want, degree: want, modular_weight: 0 })
}

/// Weight-`k` rank data of double-loop sections: for each degree `i` present
/// in the data, the rank of the modular-weight `k - i` block.
pub fn ell_rank(
    group: &Arc<FiniteGroup>,
    data: &CohomologyData,
    alpha: &Cochain3,
    k: i64,
) -> Result<EllRank, SectionsError> {
    check_cocycle3(group, alpha)?;
    let mut by_degree: BTreeMap<i64, (usize, Vec<String>)> = BTreeMap::new();
    for orbit in group.pair_orbits() {
        let rep = orbit.representative;
        let pair_label = format!(
            "[{},{}]",
            group.name_of(rep.g1),
            group.name_of(rep.g2)
        );
        let pieces = data.pair_pieces(rep).ok_or_else(|| SectionsError::MissingPairOrbit {
            a: group.name_of(rep.g1).to_string(),
            b: group.name_of(rep.g2).to_string(),
        })?;
        let chi = chi_pair(alpha, rep)?;
        for piece in pieces {
            let d = piece_dimension(&pair_label, piece, &orbit.stabilizer, &chi)?;
            let slot = by_degree.entry(piece.degree).or_default();
            slot.0 += d;
            if d > 0 {
                push_basis(&mut slot.1, &pair_label, piece, d);
            }
        }
    }
    let mut dimension = 0usize;
    let mut basis = Vec::new();
    let mut breakdown = Vec::new();
    for (degree, (dim, labels)) in by_degree {
        dimension += dim;
        basis.extend(labels.iter().cloned());
        breakdown.push(SectionSpace {
            dimension: dim,
            basis: labels,
            weight: k,
            degree,
            modular_weight: k - degree,
        });
    }
    Ok(EllRank { weight: k, dimension, basis, breakdown })
}

/// Modular-orbit counts of regular pair orbits.
///
/// `regular_blocks` counts modular orbits consisting of regular pair orbits;
/// equating it with the rank of the modular-invariant block assumes the
/// modular arrows carry no extra phase on stabilizing matrices, so
/// `total_blocks` is reported alongside for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2zBlocks {
    pub regular_blocks: usize,
    pub total_blocks: usize,
}

/// Counts modular orbits of regular pair orbits, verifying along the way
/// that regularity is stable under the modular generators.
pub fn sl2z_block_count(
    group: &Arc<FiniteGroup>,
    alpha: &Cochain3,
) -> Result<Sl2zBlocks, SectionsError> {
    check_cocycle3(group, alpha)?;
    let orbits = group.pair_orbits();
    let mut regular = vec![false; orbits.len()];
    for (i, orbit) in orbits.iter().enumerate() {
        regular[i] = chi_pair(alpha, orbit.representative)?.is_trivial();
    }
    let blocks = sl2z_orbits(group, &orbits);
    let mut regular_blocks = 0;
    for block in &blocks {
        let inside = block.iter().filter(|&&i| regular[i]).count();
        if inside == block.len() {
            regular_blocks += 1;
        } else if inside > 0 {
            let good = block.iter().find(|&&i| regular[i]).unwrap();
            let bad = block.iter().find(|&&i| !regular[i]).unwrap();
            let (g, b) = (orbits[*good].representative, orbits[*bad].representative);
            return Err(SectionsError::ModularInstability {
                ra: g.g1,
                rb: g.g2,
                na: b.g1,
                nb: b.g2,
            });
        }
    }
    Ok(Sl2zBlocks { regular_blocks, total_blocks: blocks.len() })
}
