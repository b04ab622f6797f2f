//! Restriction and induction of equivariant sections along a group
//! homomorphism `f: H -> G`, plus fiberwise section-space pushforwards.
//!
//! Sections live over the single or double loop groupoid of a group (with
//! an optional finite base space) and carry complex values; the twist stays
//! exact. Induction is implemented twice on purpose: the explicit sum
//! `f_!(s)(g) = (1/|H|) * sum over (h, k) with k f(h) k^-1 = g of
//! e(transg(k; f(h))) * s(h)` and the groupoid-measure sum over homotopy
//! fiber isomorphism classes weighted by `1/|Aut|`. The two agree by
//! orbit-stabilizer; tests hold them against each other rather than fusing
//! them.
//!
//! The transport phase `e(transg(k; f(h)))` attached to the conjugator is
//! the unique choice making the sum well-defined on equivariant inputs; it
//! reduces to the untwisted sums when the twist vanishes.

use crate::cochain::{Cochain2, Cochain3, CochainError};
use crate::group::{same_group, CommutingPair, FiniteGroup, GSet, GroupError, Homomorphism};
use crate::inertia::LoopGroupoid;
use crate::phase::Phase;
use crate::transgression::{transgress2, transgress3, ActionCocycle, TransgressionError};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum InductionError {
    #[error(transparent)]
    Transgression(#[from] TransgressionError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("section values have length {got}, expected {expected}")]
    ValueCount { expected: usize, got: usize },
    #[error("section value at object {object}, point {point} is nonzero off the fixed locus")]
    OffLocus { object: usize, point: usize },
    #[error("section is not equivariant at object {object} under arrow {arrow}")]
    NotEquivariant { object: usize, arrow: usize },
    #[error("section twist does not equal the pulled-back target twist")]
    TwistMismatch,
    #[error("section and twist have different loop geometries")]
    GeometryMismatch,
    #[error("groups do not match the homomorphism endpoints")]
    GroupMismatch,
    #[error("base space of the section does not restrict from the induction base")]
    BaseMismatch,
    #[error("fiber measure violation over base object {base}: orbit size {orbit_size} times automorphism order {aut_order} is not {order}")]
    FiberMeasure { base: usize, orbit_size: usize, aut_order: usize, order: usize },
}

impl InductionError {
    pub fn kind(&self) -> crate::ErrorKind {
        match self {
            InductionError::Transgression(e) => e.kind(),
            InductionError::FiberMeasure { .. } => crate::ErrorKind::Consistency,
            _ => crate::ErrorKind::Validation,
        }
    }
}

/// Whether sections sit over single loops (elements) or double loops
/// (commuting pairs).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionKind {
    Elements,
    Pairs,
}

/// The twist of a section space: a 2-cocycle for single loops, a 3-cocycle
/// for double loops.
#[derive(Clone, Debug, PartialEq)]
pub enum Twist {
    K(Cochain2),
    Ell(Cochain3),
}

impl Twist {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            Twist::K(a) => a.group(),
            Twist::Ell(a) => a.group(),
        }
    }

    pub fn kind(&self) -> SectionKind {
        match self {
            Twist::K(_) => SectionKind::Elements,
            Twist::Ell(_) => SectionKind::Pairs,
        }
    }

    /// Transgressed phases on the matching loop groupoid; fails if the
    /// underlying cochain is not a cocycle.
    pub fn transgress(&self) -> Result<ActionCocycle, TransgressionError> {
        match self {
            Twist::K(a) => transgress2(a),
            Twist::Ell(a) => transgress3(a),
        }
    }

    pub fn pullback(&self, f: &Homomorphism) -> Result<Twist, CochainError> {
        Ok(match self {
            Twist::K(a) => Twist::K(a.pullback(f)?),
            Twist::Ell(a) => Twist::Ell(a.pullback(f)?),
        })
    }
}

impl From<Cochain2> for Twist {
    fn from(a: Cochain2) -> Twist {
        Twist::K(a)
    }
}

impl From<Cochain3> for Twist {
    fn from(a: Cochain3) -> Twist {
        Twist::Ell(a)
    }
}

fn build_groupoid(group: &Arc<FiniteGroup>, kind: SectionKind) -> LoopGroupoid {
    match kind {
        SectionKind::Elements => LoopGroupoid::single(group.clone()),
        SectionKind::Pairs => LoopGroupoid::double(group.clone()),
    }
}

/// A complex-valued section of the transgressed line over the loop groupoid
/// of a group, optionally further indexed by a finite base space. Values off
/// the fixed locus must vanish, and the defining equivariance
/// `s(h . o, h . x) = e(phase(h, o)) * s(o, x)` is validated on
/// construction within `1e-9`.
#[derive(Clone, Debug)]
pub struct EquivariantSection {
    twist: Twist,
    cocycle: ActionCocycle,
    base: Option<GSet>,
    /// Flattened `[object * points + point]`; `points = 1` without a base.
    values: Vec<Complex64>,
}

impl EquivariantSection {
    pub fn new(
        twist: Twist,
        base: Option<GSet>,
        values: Vec<Complex64>,
    ) -> Result<EquivariantSection, InductionError> {
        let cocycle = twist.transgress()?;
        if let Some(x) = &base {
            if !same_group(x.group(), twist.group()) {
                return Err(InductionError::GroupMismatch);
            }
        }
        let objects = cocycle.groupoid().object_count();
        let points = base.as_ref().map_or(1, |x| x.size());
        if values.len() != objects * points {
            return Err(InductionError::ValueCount { expected: objects * points, got: values.len() });
        }
        let section = EquivariantSection { twist, cocycle, base, values };
        section.validate()?;
        Ok(section)
    }

    /// Elements of the group whose joint action cuts out the fixed locus of
    /// an object.
    fn fixing_elements(&self, object: usize) -> Vec<usize> {
        match self.cocycle.groupoid().pair_at(object) {
            Some(p) => vec![p.g1, p.g2],
            None => vec![object],
        }
    }

    fn validate(&self) -> Result<(), InductionError> {
        let group = self.twist.group().clone();
        let groupoid = self.cocycle.groupoid();
        let points = self.points();
        if let Some(x) = &self.base {
            for o in 0..groupoid.object_count() {
                let fixing = self.fixing_elements(o);
                for pt in 0..points {
                    let off = fixing.iter().any(|&g| x.act(g, pt) != pt);
                    if off && self.value(o, pt).norm() > TOLERANCE {
                        return Err(InductionError::OffLocus { object: o, point: pt });
                    }
                }
            }
        }
        for o in 0..groupoid.object_count() {
            for h in 0..group.order() {
                let target = groupoid.conjugate_object(h, o);
                let phase = self.cocycle.phase(h, o).as_complex();
                for pt in 0..points {
                    let moved = self.base.as_ref().map_or(pt, |x| x.act(h, pt));
                    let lhs = self.value(target, moved);
                    let rhs = phase * self.value(o, pt);
                    if (lhs - rhs).norm() > TOLERANCE {
                        return Err(InductionError::NotEquivariant { object: o, arrow: h });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.twist.group()
    }

    pub fn groupoid(&self) -> &LoopGroupoid {
        self.cocycle.groupoid()
    }

    pub fn base(&self) -> Option<&GSet> {
        self.base.as_ref()
    }

    pub fn kind(&self) -> SectionKind {
        self.twist.kind()
    }

    fn points(&self) -> usize {
        self.base.as_ref().map_or(1, |x| x.size())
    }

    #[inline]
    pub fn value(&self, object: usize, point: usize) -> Complex64 {
        self.values[object * self.points() + point]
    }

    /// Value at a group element for a base-free single-loop section.
    pub fn value_at(&self, g: usize) -> Complex64 {
        debug_assert!(self.base.is_none() && self.kind() == SectionKind::Elements);
        self.values[g]
    }

    /// Value at a commuting pair for a base-free double-loop section.
    pub fn value_at_pair(&self, pair: CommutingPair) -> Option<Complex64> {
        self.groupoid().pair_index(pair).map(|o| self.values[o * self.points()])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Convenience constructor: a base-free single-loop section from a function
/// on group elements.
pub fn section_over_elements(
    alpha: &Cochain2,
    f: impl Fn(usize) -> Complex64,
) -> Result<EquivariantSection, InductionError> {
    let n = alpha.group().order();
    EquivariantSection::new(Twist::K(alpha.clone()), None, (0..n).map(f).collect())
}

/// Convenience constructor: a base-free double-loop section from a function
/// on commuting pairs.
pub fn section_over_pairs(
    alpha: &Cochain3,
    f: impl Fn(CommutingPair) -> Complex64,
) -> Result<EquivariantSection, InductionError> {
    let groupoid = LoopGroupoid::double(alpha.group().clone());
    let values = (0..groupoid.object_count())
        .map(|o| f(groupoid.pair_at(o).expect("double groupoid object")))
        .collect();
    EquivariantSection::new(Twist::Ell(alpha.clone()), None, values)
}

/// Transported indicator supported on the orbit of `start`: value 1 there,
/// transported along arrows elsewhere in the orbit, zero outside. Returns
/// `None` when the transport is inconsistent, i.e. the object is not
/// regular.
fn transported_indicator(cocycle: &ActionCocycle, start: usize) -> Option<Vec<Complex64>> {
    let groupoid = cocycle.groupoid();
    let n = groupoid.group.order();
    let mut phases: Vec<Option<Phase>> = vec![None; groupoid.object_count()];
    phases[start] = Some(Phase::ZERO);
    let mut stack = vec![start];
    while let Some(o) = stack.pop() {
        let po = phases[o].expect("stacked objects carry phases");
        for h in 0..n {
            let t = groupoid.conjugate_object(h, o);
            let pt = po + cocycle.phase(h, o);
            match phases[t] {
                None => {
                    phases[t] = Some(pt);
                    stack.push(t);
                }
                Some(existing) => {
                    if existing != pt {
                        return None;
                    }
                }
            }
        }
    }
    Some(
        phases
            .into_iter()
            .map(|p| p.map_or(Complex64::new(0.0, 0.0), |q| q.as_complex()))
            .collect(),
    )
}

/// One exactly-transported basis section per regular conjugacy class.
pub fn basis_sections(alpha: &Cochain2) -> Result<Vec<EquivariantSection>, InductionError> {
    let cocycle = transgress2(alpha)?;
    let group = alpha.group().clone();
    let mut out = Vec::new();
    for class in group.conjugacy_classes() {
        if let Some(values) = transported_indicator(&cocycle, class[0]) {
            out.push(EquivariantSection::new(Twist::K(alpha.clone()), None, values)?);
        }
    }
    Ok(out)
}

/// One exactly-transported basis section per regular commuting-pair orbit.
pub fn basis_sections_ell(alpha: &Cochain3) -> Result<Vec<EquivariantSection>, InductionError> {
    let cocycle = transgress3(alpha)?;
    let groupoid = cocycle.groupoid().clone();
    let group = alpha.group().clone();
    let mut out = Vec::new();
    for orbit in group.pair_orbits() {
        let start = groupoid.pair_index(orbit.representative).expect("orbit representative");
        if let Some(values) = transported_indicator(&cocycle, start) {
            out.push(EquivariantSection::new(Twist::Ell(alpha.clone()), None, values)?);
        }
    }
    Ok(out)
}

/// Image of an `H`-side loop-groupoid object in the `G`-side groupoid.
fn image_object(
    f: &Homomorphism,
    h_groupoid: &LoopGroupoid,
    g_groupoid: &LoopGroupoid,
    o: usize,
) -> usize {
    match h_groupoid.pair_at(o) {
        None => f.apply(o),
        Some(p) => g_groupoid
            .pair_index(CommutingPair { g1: f.apply(p.g1), g2: f.apply(p.g2) })
            .expect("homomorphic image of a commuting pair commutes"),
    }
}

/// Restriction along `f`: value at an `H`-object is the value at its image,
/// with the twist pulled back and the base restricted.
pub fn restrict(
    f: &Homomorphism,
    s: &EquivariantSection,
) -> Result<EquivariantSection, InductionError> {
    if !same_group(&f.target, s.group()) {
        return Err(InductionError::GroupMismatch);
    }
    let twist_h = s.twist().pullback(f)?;
    let base_h = s.base().map(|x| x.restrict_along(f)).transpose()?;
    let h_groupoid = build_groupoid(&f.source, twist_h.kind());
    let g_groupoid = s.groupoid();
    let points = s.points();
    let mut values = Vec::with_capacity(h_groupoid.object_count() * points);
    for o in 0..h_groupoid.object_count() {
        let io = image_object(f, &h_groupoid, g_groupoid, o);
        for pt in 0..points {
            values.push(s.value(io, pt));
        }
    }
    EquivariantSection::new(twist_h, base_h, values)
}

fn same_gset(a: &GSet, b: &GSet) -> bool {
    if !same_group(a.group(), b.group()) || a.size() != b.size() {
        return false;
    }
    (0..a.group().order()).all(|g| (0..a.size()).all(|x| a.act(g, x) == b.act(g, x)))
}

/// Shared preamble of both induction routes: validates the wiring and
/// returns the target groupoid data.
struct InductionSetup {
    cocycle_g: ActionCocycle,
    points: usize,
}

fn induction_setup(
    f: &Homomorphism,
    twist_g: &Twist,
    s: &EquivariantSection,
    base: Option<&GSet>,
) -> Result<InductionSetup, InductionError> {
    if !same_group(twist_g.group(), &f.target) || !same_group(s.group(), &f.source) {
        return Err(InductionError::GroupMismatch);
    }
    if twist_g.kind() != s.kind() {
        return Err(InductionError::GeometryMismatch);
    }
    if *s.twist() != twist_g.pullback(f)? {
        return Err(InductionError::TwistMismatch);
    }
    let points = match (base, s.base()) {
        (None, None) => 1,
        (Some(xg), Some(xh)) => {
            if !same_gset(&xg.restrict_along(f)?, xh) {
                return Err(InductionError::BaseMismatch);
            }
            xg.size()
        }
        _ => return Err(InductionError::BaseMismatch),
    };
    let cocycle_g = twist_g.transgress()?;
    Ok(InductionSetup { cocycle_g, points })
}

/// Induction by the explicit double sum over `(h, conjugator)`.
fn induce_by_formula(
    f: &Homomorphism,
    twist_g: &Twist,
    s: &EquivariantSection,
    base: Option<GSet>,
) -> Result<EquivariantSection, InductionError> {
    let setup = induction_setup(f, twist_g, s, base.as_ref())?;
    let g_group = f.target.clone();
    let g_groupoid = setup.cocycle_g.groupoid();
    let h_groupoid = s.groupoid();
    let points = setup.points;
    let mut values = vec![Complex64::new(0.0, 0.0); g_groupoid.object_count() * points];
    for o in 0..h_groupoid.object_count() {
        let io = image_object(f, h_groupoid, g_groupoid, o);
        for kappa in 0..g_group.order() {
            let target = g_groupoid.conjugate_object(kappa, io);
            let transport = setup.cocycle_g.phase(kappa, io).as_complex();
            let kappa_inv = g_group.inv(kappa);
            for pt in 0..points {
                let src = base.as_ref().map_or(pt, |x| x.act(kappa_inv, pt));
                values[target * points + pt] += transport * s.value(o, src);
            }
        }
    }
    let scale = 1.0 / f.source.order() as f64;
    for v in &mut values {
        *v *= scale;
    }
    EquivariantSection::new(twist_g.clone(), base, values)
}

/// One isomorphism class of homotopy-fiber objects `(h-object, conjugator)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberClass {
    /// Index into the `H`-side loop groupoid's objects.
    pub object: usize,
    /// The conjugator carrying the image of `object` onto the base object.
    pub conjugator: usize,
    pub orbit_size: usize,
    pub aut_order: usize,
}

/// The homotopy fiber of the induced loop-groupoid functor over one base
/// object, reduced to isomorphism classes with their automorphism counts.
/// Every class satisfies `orbit_size * aut_order = |H|` (verified).
#[derive(Clone, Debug)]
pub struct HomotopyFiberGroupoid {
    pub base_object: usize,
    pub total_objects: usize,
    pub classes: Vec<FiberClass>,
}

/// Enumerates the homotopy fiber over `base_object` of the `G`-side
/// groupoid: objects `(o, kappa)` with `kappa . image(o) = base`, up to the
/// `H`-action `eta: (o, kappa) -> (eta . o, kappa * f(eta)^-1)`.
pub fn homotopy_fiber(
    f: &Homomorphism,
    kind: SectionKind,
    base_object: usize,
) -> Result<HomotopyFiberGroupoid, InductionError> {
    let h_groupoid = build_groupoid(&f.source, kind);
    let g_groupoid = build_groupoid(&f.target, kind);
    let g_group = &f.target;
    let h_order = f.source.order();
    let mut objects: Vec<(usize, usize)> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for o in 0..h_groupoid.object_count() {
        let io = image_object(f, &h_groupoid, &g_groupoid, o);
        for kappa in 0..g_group.order() {
            if g_groupoid.conjugate_object(kappa, io) == base_object {
                index.insert((o, kappa), objects.len());
                objects.push((o, kappa));
            }
        }
    }
    let act = |eta: usize, (o, kappa): (usize, usize)| {
        (
            h_groupoid.conjugate_object(eta, o),
            g_group.mul(kappa, g_group.inv(f.apply(eta))),
        )
    };
    let mut seen = vec![false; objects.len()];
    let mut classes = Vec::new();
    for start in 0..objects.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for eta in 0..h_order {
                let j = index[&act(eta, objects[i])];
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    stack.push(j);
                }
            }
        }
        let rep = objects[start];
        let aut_order = (0..h_order).filter(|&eta| act(eta, rep) == rep).count();
        if orbit.len() * aut_order != h_order {
            return Err(InductionError::FiberMeasure {
                base: base_object,
                orbit_size: orbit.len(),
                aut_order,
                order: h_order,
            });
        }
        classes.push(FiberClass {
            object: rep.0,
            conjugator: rep.1,
            orbit_size: orbit.len(),
            aut_order,
        });
    }
    Ok(HomotopyFiberGroupoid { base_object, total_objects: objects.len(), classes })
}

/// Induction as the homotopy-fiber measure sum
/// `sum over classes of e(transport) * s * (1 / aut_order)`.
fn induce_by_fibers(
    f: &Homomorphism,
    twist_g: &Twist,
    s: &EquivariantSection,
    base: Option<GSet>,
) -> Result<EquivariantSection, InductionError> {
    let setup = induction_setup(f, twist_g, s, base.as_ref())?;
    let g_group = f.target.clone();
    let g_groupoid = setup.cocycle_g.groupoid();
    let h_groupoid = s.groupoid();
    let points = setup.points;
    let mut values = vec![Complex64::new(0.0, 0.0); g_groupoid.object_count() * points];
    for b in 0..g_groupoid.object_count() {
        let fiber = homotopy_fiber(f, s.kind(), b)?;
        for class in &fiber.classes {
            let io = image_object(f, h_groupoid, g_groupoid, class.object);
            let transport = setup.cocycle_g.phase(class.conjugator, io).as_complex();
            let weight = 1.0 / class.aut_order as f64;
            let kappa_inv = g_group.inv(class.conjugator);
            for pt in 0..points {
                let src = base.as_ref().map_or(pt, |x| x.act(kappa_inv, pt));
                values[b * points + pt] += transport * s.value(class.object, src) * weight;
            }
        }
    }
    EquivariantSection::new(twist_g.clone(), base, values)
}

/// Single-loop induction by the explicit sum formula.
pub fn induce_k(
    f: &Homomorphism,
    alpha: &Cochain2,
    s: &EquivariantSection,
    base: Option<GSet>,
) -> Result<EquivariantSection, InductionError> {
    induce_by_formula(f, &Twist::K(alpha.clone()), s, base)
}

/// Single-loop induction by the homotopy-fiber measure.
pub fn induce_k_via_fibers(
    f: &Homomorphism,
    alpha: &Cochain2,
    s: &EquivariantSection,
    base: Option<GSet>,
) -> Result<EquivariantSection, InductionError> {
    induce_by_fibers(f, &Twist::K(alpha.clone()), s, base)
}

/// Double-loop induction by the explicit sum formula.
pub fn induce_ell(
    f: &Homomorphism,
    alpha: &Cochain3,
    s: &EquivariantSection,
    base: Option<GSet>,
) -> Result<EquivariantSection, InductionError> {
    induce_by_formula(f, &Twist::Ell(alpha.clone()), s, base)
}

/// Double-loop induction by the homotopy-fiber measure.
pub fn induce_ell_via_fibers(
    f: &Homomorphism,
    alpha: &Cochain3,
    s: &EquivariantSection,
    base: Option<GSet>,
) -> Result<EquivariantSection, InductionError> {
    induce_by_fibers(f, &Twist::Ell(alpha.clone()), s, base)
}

/// Per-base-object dimension of invariant sections over a homotopy fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDimension {
    /// Index of the base object in the `G`-side loop groupoid.
    pub base_object: usize,
    pub base_label: String,
    pub dimension: usize,
}

/// For each base-object representative on the `G` side, the dimension of
/// invariant sections of the line transgressed from a twist on `H` over the
/// homotopy fiber, invariantly under the residual action of the base
/// object's automorphisms.
///
/// Orbits of the combined `(eta, k)`-action
/// `(o, kappa) -> (eta . o, k * kappa * f(eta)^-1)` contribute one dimension
/// when the transgressed phase of the stabilizer is trivial.
pub fn pushforward_fiberwise(
    f: &Homomorphism,
    twist: &Twist,
) -> Result<Vec<FiberDimension>, InductionError> {
    if !same_group(twist.group(), &f.source) {
        return Err(InductionError::GroupMismatch);
    }
    let cocycle_h = twist.transgress()?;
    let kind = twist.kind();
    let h_groupoid = build_groupoid(&f.source, kind);
    let g_groupoid = build_groupoid(&f.target, kind);
    let g_group = &f.target;
    let h_order = f.source.order();
    let bases: Vec<(usize, String)> = match kind {
        SectionKind::Elements => f
            .target
            .conjugacy_classes()
            .into_iter()
            .map(|class| (class[0], format!("[{}]", g_group.name_of(class[0]))))
            .collect(),
        SectionKind::Pairs => f
            .target
            .pair_orbits()
            .into_iter()
            .map(|orbit| {
                let r = orbit.representative;
                let idx = g_groupoid.pair_index(r).expect("orbit representative");
                (idx, format!("[{},{}]", g_group.name_of(r.g1), g_group.name_of(r.g2)))
            })
            .collect(),
    };
    let mut out = Vec::new();
    for (base_object, base_label) in bases {
        let residual = g_groupoid.automorphisms(base_object);
        let mut objects: Vec<(usize, usize)> = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for o in 0..h_groupoid.object_count() {
            let io = image_object(f, &h_groupoid, &g_groupoid, o);
            for kappa in 0..g_group.order() {
                if g_groupoid.conjugate_object(kappa, io) == base_object {
                    index.insert((o, kappa), objects.len());
                    objects.push((o, kappa));
                }
            }
        }
        let act = |eta: usize, k: usize, (o, kappa): (usize, usize)| {
            (
                h_groupoid.conjugate_object(eta, o),
                g_group.mul(k, g_group.mul(kappa, g_group.inv(f.apply(eta)))),
            )
        };
        let mut seen = vec![false; objects.len()];
        let mut dimension = 0;
        for start in 0..objects.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for eta in 0..h_order {
                    for &k in &residual {
                        let j = index[&act(eta, k, objects[i])];
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
            let rep = objects[start];
            let trivial = (0..h_order).all(|eta| {
                residual.iter().all(|&k| {
                    act(eta, k, rep) != rep || cocycle_h.phase(eta, rep.0).is_zero()
                })
            });
            if trivial {
                dimension += 1;
            }
        }
        out.push(FiberDimension { base_object, base_label, dimension });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::klein_2cocycle;

    fn s3() -> Arc<FiniteGroup> {
        FiniteGroup::symmetric(3).unwrap()
    }

    fn embed_z2_in_s3() -> Homomorphism {
        let g = s3();
        let h = FiniteGroup::cyclic(2).unwrap();
        let t = g.find_permutation(&[1, 0, 2]).unwrap();
        Homomorphism::new(h, g, vec![0, t]).unwrap()
    }

    #[test]
    fn regular_character_from_trivial_subgroup() {
        let g = s3();
        let h = FiniteGroup::cyclic(1).unwrap();
        let f = Homomorphism::new(h.clone(), g.clone(), vec![0]).unwrap();
        let alpha = Cochain2::zero(g.clone());
        let s = section_over_elements(&alpha.pullback(&f).unwrap(), |_| Complex64::new(1.0, 0.0))
            .unwrap();
        let induced = induce_k(&f, &alpha, &s, None).unwrap();
        assert!((induced.value_at(0).re - 6.0).abs() < 1e-12);
        for g_el in 1..6 {
            assert!(induced.value_at(g_el).norm() < 1e-12);
        }
        // Double-loop analogue: |G| at (e,e), zero elsewhere.
        let alpha3 = Cochain3::zero(g.clone());
        let s = section_over_pairs(&alpha3.pullback(&f).unwrap(), |_| Complex64::new(1.0, 0.0))
            .unwrap();
        let induced = induce_ell(&f, &alpha3, &s, None).unwrap();
        let ee = induced.value_at_pair(CommutingPair { g1: 0, g2: 0 }).unwrap();
        assert!((ee.re - 6.0).abs() < 1e-12);
        let total: f64 = induced.values().iter().map(|v| v.norm()).sum();
        assert!((total - 6.0).abs() < 1e-12, "all other pair values vanish");
    }

    #[test]
    fn classical_induced_character_z2_in_s3() {
        let f = embed_z2_in_s3();
        let g = f.target.clone();
        let alpha = Cochain2::zero(g.clone());
        let s = section_over_elements(&alpha.pullback(&f).unwrap(), |_| Complex64::new(1.0, 0.0))
            .unwrap();
        let induced = induce_k(&f, &alpha, &s, None).unwrap();
        // Values by class: 3 at e, 1 at transpositions, 0 at 3-cycles.
        assert!((induced.value_at(0).re - 3.0).abs() < 1e-12);
        let t = g.find_permutation(&[1, 0, 2]).unwrap();
        assert!((induced.value_at(t).re - 1.0).abs() < 1e-12);
        let c = g.find_permutation(&[1, 2, 0]).unwrap();
        assert!(induced.value_at(c).norm() < 1e-12);
    }

    #[test]
    fn identity_induction_is_identity() {
        let g = s3();
        let f = Homomorphism::identity(g.clone());
        let alpha = Cochain2::zero(g.clone());
        // Indicator of the transposition class is a class function.
        let t = g.find_permutation(&[1, 0, 2]).unwrap();
        let class = g.conjugacy_classes().into_iter().find(|c| c.contains(&t)).unwrap();
        let s = section_over_elements(&alpha, |x| {
            Complex64::new(if class.contains(&x) { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let induced = induce_k(&f, &alpha, &s, None).unwrap();
        for x in 0..6 {
            assert!((induced.value_at(x) - s.value_at(x)).norm() < 1e-12);
        }
        // Twisted case on the Klein group.
        let alpha = klein_2cocycle();
        let k = alpha.group().clone();
        let f = Homomorphism::identity(k);
        for s in basis_sections(&alpha).unwrap() {
            let induced = induce_k(&f, &alpha, &s, None).unwrap();
            for (a, b) in induced.values().iter().zip(s.values()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn formula_and_fiber_measure_agree() {
        let f = embed_z2_in_s3();
        let g = f.target.clone();
        let alpha3 = Cochain3::zero(g.clone());
        // Indicator of the pair orbit [(x, x)], x the transposition image.
        let pulled = alpha3.pullback(&f).unwrap();
        let s = section_over_pairs(&pulled, |p| {
            Complex64::new(if p.g1 == 1 && p.g2 == 1 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let a = induce_ell(&f, &alpha3, &s, None).unwrap();
        let b = induce_ell_via_fibers(&f, &alpha3, &s, None).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-12);
        }
        // Same for single loops with the trivial character.
        let alpha2 = Cochain2::zero(g);
        let s = section_over_elements(&alpha2.pullback(&f).unwrap(), |_| Complex64::new(1.0, 0.0))
            .unwrap();
        let a = induce_k(&f, &alpha2, &s, None).unwrap();
        let b = induce_k_via_fibers(&f, &alpha2, &s, None).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn restriction_basics() {
        let g = s3();
        let alpha = Cochain2::zero(g.clone());
        let t = g.find_permutation(&[1, 0, 2]).unwrap();
        let class = g.conjugacy_classes().into_iter().find(|c| c.contains(&t)).unwrap();
        let s = section_over_elements(&alpha, |x| {
            Complex64::new(if class.contains(&x) { 2.5 } else { 0.0 }, 0.0)
        })
        .unwrap();
        // f = id leaves the section unchanged.
        let id = Homomorphism::identity(g.clone());
        let r = restrict(&id, &s).unwrap();
        for (a, b) in r.values().iter().zip(s.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        // Restriction along Z/2 picks out the values at e and t.
        let f = embed_z2_in_s3();
        let r = restrict(&f, &s).unwrap();
        assert!((r.value_at(0).re - 0.0).abs() < 1e-12);
        assert!((r.value_at(1).re - 2.5).abs() < 1e-12);
        // Trivial subgroup: single value s(e).
        let f = Homomorphism::new(FiniteGroup::cyclic(1).unwrap(), g, vec![0]).unwrap();
        let r = restrict(&f, &s).unwrap();
        assert_eq!(r.values().len(), 1);
    }

    #[test]
    fn non_equivariant_values_are_rejected() {
        let g = s3();
        let alpha = Cochain2::zero(g.clone());
        let t = g.find_permutation(&[1, 0, 2]).unwrap();
        // Indicator of a single transposition is not a class function.
        let r = section_over_elements(&alpha, |x| {
            Complex64::new(if x == t { 1.0 } else { 0.0 }, 0.0)
        });
        assert!(matches!(r, Err(InductionError::NotEquivariant { .. })));
    }

    #[test]
    fn basis_sections_count_regular_classes() {
        let alpha = klein_2cocycle();
        let sections = basis_sections(&alpha).unwrap();
        assert_eq!(sections.len(), 1, "only the identity class is regular");
        assert!((sections[0].value_at(0).re - 1.0).abs() < 1e-12);

        let g = s3();
        let sections = basis_sections(&Cochain2::zero(g)).unwrap();
        assert_eq!(sections.len(), 3);
    }

    #[test]
    fn fiber_measure_identity() {
        let f = embed_z2_in_s3();
        for b in 0..6 {
            let fiber = homotopy_fiber(&f, SectionKind::Elements, b).unwrap();
            for class in &fiber.classes {
                assert_eq!(class.orbit_size * class.aut_order, 2);
            }
        }
    }

    #[test]
    fn pushforward_to_a_point_matches_center() {
        let triv = FiniteGroup::cyclic(1).unwrap();
        // Untwisted: counts conjugacy classes of the source.
        let g = s3();
        let f = Homomorphism::trivial(g.clone(), triv.clone());
        let dims = pushforward_fiberwise(&f, &Twist::K(Cochain2::zero(g))).unwrap();
        assert_eq!(dims.len(), 1);
        assert_eq!(dims[0].dimension, 3);
        // Klein twist: one-dimensional center.
        let alpha = klein_2cocycle();
        let k = alpha.group().clone();
        let f = Homomorphism::trivial(k, triv.clone());
        let dims = pushforward_fiberwise(&f, &Twist::K(alpha)).unwrap();
        assert_eq!(dims[0].dimension, 1);
        // Double loops: counts regular pair orbits.
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let f = Homomorphism::trivial(z2.clone(), triv);
        let dims = pushforward_fiberwise(&f, &Twist::Ell(Cochain3::zero(z2))).unwrap();
        assert_eq!(dims[0].dimension, 4);
    }

    #[test]
    fn identity_pushforward_is_regularity_indicator() {
        let alpha = klein_2cocycle();
        let k = alpha.group().clone();
        let f = Homomorphism::identity(k);
        let dims = pushforward_fiberwise(&f, &Twist::K(alpha)).unwrap();
        for d in &dims {
            let expected = if d.base_object == 0 { 1 } else { 0 };
            assert_eq!(d.dimension, expected, "{}", d.base_label);
        }
    }

    #[test]
    fn gset_sections_validate_and_induce() {
        let g = s3();
        let x = GSet::natural(g.clone()).unwrap();
        let alpha = Cochain2::zero(g.clone());
        // s(g, p) = 1 when g fixes p: manifestly equivariant, off-locus zero.
        let mut values = Vec::new();
        for el in 0..6 {
            for p in 0..3 {
                values.push(Complex64::new(if x.act(el, p) == p { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let s = EquivariantSection::new(Twist::K(alpha.clone()), Some(x.clone()), values).unwrap();
        let f = Homomorphism::identity(g);
        let induced = induce_k(&f, &alpha, &s, Some(x)).unwrap();
        for (a, b) in induced.values().iter().zip(s.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
