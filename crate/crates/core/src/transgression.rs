//! Transgression of 2- and 3-cocycles to action cocycles on the loop
//! groupoids, and the stabilizer characters cut out by restricting them.
//!
//! For a 2-cocycle `a` the transgressed phase of an arrow `h` at an object
//! `g` is `tau(h; g) = a(h g h^-1, h) - a(h, g)`; for a 3-cocycle the double
//! transgression `rho(h; (g1, g2))` is a six-term alternation. Constructors
//! verify the groupoid composition law on every composable arrow pair, so a
//! value that escapes this module is guaranteed coherent.
//!
//! Restricted to the stabilizer of an object, the transgressed cocycle
//! becomes a genuine character. Two sign conventions for that restriction
//! circulate; `ConventionReport` records both pointwise comparisons instead
//! of assuming one.

use crate::cochain::{Cochain2, Cochain3, CochainError};
use crate::group::{CommutingPair, FiniteGroup};
use crate::inertia::LoopGroupoid;
use crate::phase::Phase;
use rayon::prelude::*;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransgressionError {
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error("input is not a cocycle: violation at {location} with value {value}")]
    NotACocycle { location: String, value: Phase },
    #[error("transgressed phases violate the composition law at object {object}, arrows {h} then {h2}")]
    CompositionLaw { object: usize, h: usize, h2: usize },
    #[error("element {element} does not stabilize the base object")]
    NotInStabilizer { element: usize },
    #[error("restriction to the stabilizer is not a homomorphism at ({h1}, {h2})")]
    NotAHomomorphism { h1: usize, h2: usize },
    #[error("pair ({g1}, {g2}) does not commute")]
    NotCommuting { g1: usize, g2: usize },
}

impl TransgressionError {
    pub fn kind(&self) -> crate::ErrorKind {
        match self {
            TransgressionError::Cochain(_)
            | TransgressionError::NotACocycle { .. }
            | TransgressionError::NotInStabilizer { .. }
            | TransgressionError::NotCommuting { .. } => crate::ErrorKind::Validation,
            TransgressionError::CompositionLaw { .. }
            | TransgressionError::NotAHomomorphism { .. } => crate::ErrorKind::Consistency,
        }
    }
}

/// Exact phases attached to the arrows of a loop groupoid, satisfying
/// `phase(h2, h·x) + phase(h, x) = phase(h2 h, x)`.
#[derive(Clone, Debug)]
pub struct ActionCocycle {
    groupoid: LoopGroupoid,
    /// Object-major table: `phases[x * |G| + h]`.
    phases: Vec<Phase>,
}

impl ActionCocycle {
    pub fn groupoid(&self) -> &LoopGroupoid {
        &self.groupoid
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.groupoid.group
    }

    /// Phase of the arrow `h` based at object index `x`.
    #[inline]
    pub fn phase(&self, h: usize, x: usize) -> Phase {
        self.phases[x * self.groupoid.group.order() + h]
    }

    /// Phase of `h` at a pair object (double-loop groupoids only).
    pub fn phase_at_pair(&self, h: usize, pair: CommutingPair) -> Option<Phase> {
        self.groupoid.pair_index(pair).map(|x| self.phase(h, x))
    }

    fn verify_composition(&self) -> Result<(), TransgressionError> {
        let g = &self.groupoid.group;
        let n = g.order();
        let objects = self.groupoid.object_count();
        let check_object = |x: usize| -> Result<(), TransgressionError> {
            for h in 0..n {
                let hx = self.groupoid.conjugate_object(h, x);
                for h2 in 0..n {
                    let lhs = self.phase(h2, hx) + self.phase(h, x);
                    let rhs = self.phase(g.mul(h2, h), x);
                    if lhs != rhs {
                        return Err(TransgressionError::CompositionLaw { object: x, h, h2 });
                    }
                }
            }
            Ok(())
        };
        if objects * n * n > 1 << 20 {
            (0..objects)
                .into_par_iter()
                .map(check_object)
                .collect::<Result<Vec<()>, _>>()?;
            Ok(())
        } else {
            (0..objects).try_for_each(check_object)
        }
    }
}

/// Transgresses a 2-cocycle to the single-loop groupoid:
/// `tau(h; g) = a(h g h^-1, h) - a(h, g)`.
pub fn transgress2(alpha: &Cochain2) -> Result<ActionCocycle, TransgressionError> {
    if let Some((t, v)) = alpha.cocycle_violation() {
        return Err(TransgressionError::NotACocycle { location: format!("{t:?}"), value: v });
    }
    let g = alpha.group().clone();
    let n = g.order();
    let groupoid = LoopGroupoid::single(g.clone());
    let mut phases = vec![Phase::ZERO; n * n];
    for x in 0..n {
        for h in 0..n {
            phases[x * n + h] = alpha.get(g.conj(h, x), h) - alpha.get(h, x);
        }
    }
    let out = ActionCocycle { groupoid, phases };
    out.verify_composition()?;
    Ok(out)
}

/// Double-transgresses a 3-cocycle to the double-loop groupoid:
/// the phase of `h` at `(g1, g2)` is the six-term alternation
/// `a(h,g2,g1) + a(hg1h^-1,h,g2) + a(hg2h^-1,hg1h^-1,h)
///  - a(h,g1,g2) - a(hg2h^-1,h,g1) - a(hg1h^-1,hg2h^-1,h)`.
pub fn transgress3(alpha: &Cochain3) -> Result<ActionCocycle, TransgressionError> {
    if let Some((t, v)) = alpha.cocycle_violation() {
        return Err(TransgressionError::NotACocycle { location: format!("{t:?}"), value: v });
    }
    let g = alpha.group().clone();
    let n = g.order();
    let groupoid = LoopGroupoid::double(g.clone());
    let objects = groupoid.object_count();
    let phases: Vec<Phase> = (0..objects)
        .into_par_iter()
        .flat_map_iter(|x| {
            let pair = groupoid.pair_at(x).expect("double groupoid object");
            let g = &g;
            (0..n).map(move |h| {
                let c1 = g.conj(h, pair.g1);
                let c2 = g.conj(h, pair.g2);
                alpha.get(h, pair.g2, pair.g1) + alpha.get(c1, h, pair.g2)
                    + alpha.get(c2, c1, h)
                    - alpha.get(h, pair.g1, pair.g2)
                    - alpha.get(c2, h, pair.g1)
                    - alpha.get(c1, c2, h)
            })
        })
        .collect();
    let out = ActionCocycle { groupoid, phases };
    out.verify_composition()?;
    Ok(out)
}

/// Base object of a stabilizer character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterBase {
    Element(usize),
    Pair(CommutingPair),
}

/// An exact character of the stabilizer of a loop-groupoid object.
#[derive(Clone, Debug)]
pub struct StabilizerCharacter {
    group: Arc<FiniteGroup>,
    pub base: CharacterBase,
    /// Sorted stabilizer elements.
    subgroup: Vec<usize>,
    /// Phase per stabilizer element, aligned with `subgroup`.
    phases: Vec<Phase>,
}

impl StabilizerCharacter {
    fn new(
        group: Arc<FiniteGroup>,
        base: CharacterBase,
        subgroup: Vec<usize>,
        phases: Vec<Phase>,
    ) -> Result<StabilizerCharacter, TransgressionError> {
        let chi = StabilizerCharacter { group, base, subgroup, phases };
        // Being a character is a consequence of the cocycle condition on the
        // input; verify rather than trust.
        let pos = |g: usize| chi.subgroup.binary_search(&g).expect("product stays in stabilizer");
        for (i, &h1) in chi.subgroup.iter().enumerate() {
            for (j, &h2) in chi.subgroup.iter().enumerate() {
                let prod = chi.group.mul(h1, h2);
                if chi.phases[pos(prod)] != chi.phases[i] + chi.phases[j] {
                    return Err(TransgressionError::NotAHomomorphism { h1, h2 });
                }
            }
        }
        Ok(chi)
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    /// Value at `h`, which must lie in the stabilizer.
    pub fn get(&self, h: usize) -> Result<Phase, TransgressionError> {
        match self.subgroup.binary_search(&h) {
            Ok(i) => Ok(self.phases[i]),
            Err(_) => Err(TransgressionError::NotInStabilizer { element: h }),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.phases.iter().all(|p| p.is_zero())
    }

    /// Iterates `(element, phase)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Phase)> + '_ {
        self.subgroup.iter().copied().zip(self.phases.iter().copied())
    }
}

/// The character `h -> a(h, g) - a(g, h)` of the centralizer `Z(g)`.
pub fn chi_element(alpha: &Cochain2, g: usize) -> Result<StabilizerCharacter, TransgressionError> {
    let group = alpha.group().clone();
    let z = group.centralizer(g);
    let phases = z.iter().map(|&h| alpha.get(h, g) - alpha.get(g, h)).collect();
    StabilizerCharacter::new(group, CharacterBase::Element(g), z, phases)
}

/// The character of `Z(g1, g2)` given by the six-term alternation
/// `a(h,g1,g2) + a(g2,h,g1) + a(g1,g2,h) - a(g1,h,g2) - a(h,g2,g1) - a(g2,g1,h)`.
pub fn chi_pair(alpha: &Cochain3, pair: CommutingPair) -> Result<StabilizerCharacter, TransgressionError> {
    let group = alpha.group().clone();
    let (g1, g2) = (pair.g1, pair.g2);
    if group.mul(g1, g2) != group.mul(g2, g1) {
        return Err(TransgressionError::NotCommuting { g1, g2 });
    }
    let z = group.centralizer_pair(g1, g2);
    let phases = z
        .iter()
        .map(|&h| {
            alpha.get(h, g1, g2) + alpha.get(g2, h, g1) + alpha.get(g1, g2, h)
                - alpha.get(g1, h, g2)
                - alpha.get(h, g2, g1)
                - alpha.get(g2, g1, h)
        })
        .collect();
    StabilizerCharacter::new(group, CharacterBase::Pair(pair), z, phases)
}

/// Pointwise comparison of a transgressed cocycle, restricted to object
/// stabilizers, against the stabilizer character under both circulating sign
/// conventions. `matches_minus_char` is the identity the section-space
/// dimension counts rest on; `matches_plus_char` holds only when every
/// character value is 2-torsion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConventionReport {
    pub matches_minus_char: bool,
    pub matches_plus_char: bool,
}

/// Compares `tau` restricted to every centralizer against `chi_element`.
pub fn convention_report2(alpha: &Cochain2) -> Result<ConventionReport, TransgressionError> {
    let tau = transgress2(alpha)?;
    let group = alpha.group();
    let mut minus = true;
    let mut plus = true;
    for g in 0..group.order() {
        let chi = chi_element(alpha, g)?;
        for (h, value) in chi.iter() {
            let t = tau.phase(h, g);
            minus &= t == -value;
            plus &= t == value;
        }
    }
    Ok(ConventionReport { matches_minus_char: minus, matches_plus_char: plus })
}

/// Compares `rho` restricted to every joint centralizer against `chi_pair`.
pub fn convention_report3(alpha: &Cochain3) -> Result<ConventionReport, TransgressionError> {
    let rho = transgress3(alpha)?;
    let mut minus = true;
    let mut plus = true;
    for x in 0..rho.groupoid().object_count() {
        let pair = rho.groupoid().pair_at(x).expect("double groupoid object");
        let chi = chi_pair(alpha, pair)?;
        for (h, value) in chi.iter() {
            let r = rho.phase(h, x);
            minus &= r == -value;
            plus &= r == value;
        }
    }
    Ok(ConventionReport { matches_minus_char: minus, matches_plus_char: plus })
}
