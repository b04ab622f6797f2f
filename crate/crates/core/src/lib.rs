//! Exact character data for twisted equivariant situations over finite groups.
//!
//! The library works with a finite group `G`, a `U(1)`-valued 2- or 3-cocycle
//! stored additively as exact rationals in `Q/Z`, and the groupoids of
//! commuting tuples in `G`. On top of that it computes:
//!
//! * transgressed action cocycles on the inertia groupoid `G//G` and the
//!   double-inertia groupoid of commuting pairs, together with the stabilizer
//!   characters that control which classes support sections;
//! * dimensions and bases of section spaces (degree-0 twisted K-type data and
//!   weight-`k` elliptic-type data), with all integrality decided in exact
//!   cyclotomic arithmetic;
//! * the center of the twisted group algebra by exact linear algebra, kept as
//!   an independent route from the character-theoretic count;
//! * wrong-way (induction) maps along group homomorphisms, both as a direct
//!   averaged formula and as a sum over the homotopy fiber groupoid with its
//!   groupoid measure;
//! * symbolic checks: scaling-flow weights on lattice functions, and the
//!   axioms of the 1|1- and 2|1-dimensional super group laws in a Grassmann
//!   algebra over `Q(i)`.
//!
//! Everything that feeds a pass/fail decision is exact; floating point only
//! appears where section values are genuinely complex data.

pub mod algebra;
pub mod cochain;
pub mod cyclotomic;
pub mod group;
pub mod induction;
pub mod inertia;
pub mod io;
pub mod phase;
pub mod rgflow;
pub mod sections;
pub mod snf;
pub mod supergeom;
pub mod transgression;

pub use cochain::{Cochain1, Cochain2, Cochain3};
pub use group::{CommutingPair, FiniteGroup, GSet, Homomorphism, PairOrbit};
pub use phase::Phase;

/// Error kind used by the command line layer to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: malformed files, failed preconditions, invalid arguments.
    Validation,
    /// Internal cross-check failed: two routes to the same number disagree.
    Consistency,
}

/// Crate-wide error type. Variants carry their module-specific payloads.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] group::GroupError),
    #[error(transparent)]
    Cochain(#[from] cochain::CochainError),
    #[error(transparent)]
    Transgression(#[from] transgression::TransgressionError),
    #[error(transparent)]
    Sections(#[from] sections::SectionsError),
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Induction(#[from] induction::InductionError),
    #[error(transparent)]
    Supergeom(#[from] supergeom::SupergeomError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Group(_) | Error::Cochain(_) | Error::Io(_) => ErrorKind::Validation,
            Error::Transgression(e) => e.kind(),
            Error::Sections(e) => e.kind(),
            Error::Algebra(e) => e.kind(),
            Error::Induction(e) => e.kind(),
            Error::Supergeom(e) => e.kind(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
