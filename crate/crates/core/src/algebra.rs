//! The twisted group algebra, its center, and projective representations.
//!
//! The algebra has basis `e_g` with `e_g e_h = e(alpha(g,h)) e_{gh}`;
//! associativity is equivalent to the cocycle identity on `alpha`, and both
//! directions of that equivalence are kept testable by not validating the
//! twist at construction time.
//!
//! The center dimension is found by honest linear algebra: the centrality
//! constraints split into blocks indexed by conjugacy classes, and each
//! block is solved exactly over the cyclotomic field generated by the twist
//! phases. The count must agree with the number of regular classes — the
//! two routes are computed independently and a mismatch is reported as an
//! internal consistency failure, never papered over.

use crate::cochain::Cochain2;
use crate::cyclotomic::{CycField, CycNum};
use crate::group::FiniteGroup;
use crate::phase::Phase;
use crate::sections::{regular_classes, SectionsError};
use crate::transgression::TransgressionError;
use ndarray::Array2;
use num_complex::Complex64;
use num_integer::Integer;
use std::collections::VecDeque;
use std::sync::Arc;
use thiserror::Error;

const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("twist is not associative: associator fails at ({g}, {h}, {k})")]
    NotAssociative { g: usize, h: usize, k: usize },
    #[error(transparent)]
    Sections(#[from] SectionsError),
    #[error(transparent)]
    Transgression(#[from] TransgressionError),
    #[error("center dimension {computed} from linear algebra disagrees with {regular} regular classes")]
    CenterMismatch { computed: usize, regular: usize },
    #[error("center block for class [{rep}] solved to dimension {nullity}, but no transported basis vector exists")]
    CenterTransport { rep: usize, nullity: usize },
    #[error("representation matrices have size {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrices do not form a projective representation for this twist at pair ({g}, {h})")]
    NotAProjectiveRep { g: usize, h: usize },
}

impl AlgebraError {
    pub fn kind(&self) -> crate::ErrorKind {
        match self {
            AlgebraError::Sections(e) => e.kind(),
            AlgebraError::Transgression(e) => e.kind(),
            AlgebraError::CenterMismatch { .. } | AlgebraError::CenterTransport { .. } => {
                crate::ErrorKind::Consistency
            }
            _ => crate::ErrorKind::Validation,
        }
    }
}

/// The algebra with basis `e_g` and product `e_g e_h = e(alpha(g,h)) e_{gh}`.
///
/// The twist is stored as given; use [`TwistedGroupAlgebra::is_associative`]
/// to test associativity (it holds exactly when the twist is a cocycle).
#[derive(Clone, Debug)]
pub struct TwistedGroupAlgebra {
    group: Arc<FiniteGroup>,
    alpha: Cochain2,
}

/// One exact basis vector of the center: the sum over a conjugacy class of
/// phase-corrected basis elements `sum_g e(phase_g) e_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterBasisVector {
    pub class_rep: usize,
    pub label: String,
    /// `(element, phase)` pairs over the whole class, ascending by element.
    pub support: Vec<(usize, Phase)>,
}

/// Exact center data: dimension plus one labelled basis vector per
/// contributing conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterData {
    pub dimension: usize,
    pub basis: Vec<CenterBasisVector>,
}

/// Finite-dimensional matrices satisfying
/// `rho(g) rho(h) = e(alpha(g,h)) rho(gh)` and `rho(e) = 1`.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub dimension: usize,
    pub matrices: Vec<Array2<Complex64>>,
}

impl TwistedGroupAlgebra {
    pub fn new(alpha: Cochain2) -> TwistedGroupAlgebra {
        let group = alpha.group().clone();
        TwistedGroupAlgebra { group, alpha }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn alpha(&self) -> &Cochain2 {
        &self.alpha
    }

    /// Product of two basis elements: the phase and the product element.
    pub fn basis_product(&self, g: usize, h: usize) -> (Phase, usize) {
        (self.alpha.get(g, h), self.group.mul(g, h))
    }

    /// First failure of `e_g (e_h e_k) = (e_g e_h) e_k`, if any, found by
    /// multiplying basis elements through the structure constants.
    pub fn associator_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.group.order();
        for g in 0..n {
            for h in 0..n {
                let (p_gh, gh) = self.basis_product(g, h);
                for k in 0..n {
                    let (p_hk, hk) = self.basis_product(h, k);
                    let left = p_hk + self.basis_product(g, hk).0;
                    let right = p_gh + self.basis_product(gh, k).0;
                    if left != right {
                        return Some((g, h, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associator_violation().is_none()
    }

    /// Exact center: dimension and a phase-corrected class-sum basis.
    ///
    /// An element `x = sum c_g e_g` is central iff
    /// `c_g * e(alpha(g,h)) = c_{h^-1 g h} * e(alpha(h, h^-1 g h))` for all
    /// `g, h`; the system is block-diagonal over conjugacy classes and each
    /// block is solved by Gaussian elimination over the cyclotomic field of
    /// the twist. The result is checked against the independent
    /// regular-class count.
    pub fn center_dim(&self) -> Result<CenterData, AlgebraError> {
        if let Some((g, h, k)) = self.associator_violation() {
            return Err(AlgebraError::NotAssociative { g, h, k });
        }
        let n = self.group.order();
        let mut modulus: i64 = 1;
        for g in 0..n {
            for h in 0..n {
                modulus = modulus.lcm(&self.alpha.get(g, h).denom());
            }
        }
        let field = CycField::new(modulus as u64);
        let mut dimension = 0;
        let mut basis = Vec::new();
        for class in self.group.conjugacy_classes() {
            let nullity = self.class_block_nullity(&field, &class);
            dimension += nullity;
            if nullity == 1 {
                basis.push(self.transported_class_vector(&class)?);
            } else if nullity > 1 {
                // Impossible when the constraints connect the class, which
                // conjugation always does; defend anyway.
                return Err(AlgebraError::CenterTransport { rep: class[0], nullity });
            }
        }
        let regular = regular_classes(&self.group, &self.alpha)?.len();
        if dimension != regular {
            return Err(AlgebraError::CenterMismatch { computed: dimension, regular });
        }
        Ok(CenterData { dimension, basis })
    }

    /// Rank-nullity of one conjugacy-class block of the centrality system,
    /// by exact Gaussian elimination.
    fn class_block_nullity(&self, field: &CycField, class: &[usize]) -> usize {
        let position = |g: usize| class.binary_search(&g).expect("conjugate stays in class");
        let vars = class.len();
        let mut rows: Vec<Vec<CycNum>> = Vec::new();
        for &g in class {
            for h in 0..self.group.order() {
                let t = self.group.conj(self.group.inv(h), g);
                let mut row = vec![field.zero(); vars];
                let lhs = field.root(self.alpha.get(g, h));
                let rhs = field.root(self.alpha.get(h, t));
                let (pg, pt) = (position(g), position(t));
                row[pg] = field.add(&row[pg], &lhs);
                row[pt] = field.sub(&row[pt], &rhs);
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let mut rank = 0;
        for col in 0..vars {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = field.inv(&rows[rank][col]);
            for c in col..vars {
                rows[rank][c] = field.mul(&rows[rank][c], &inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for c in col..vars {
                        let scaled = field.mul(&pivot_row[c], &factor);
                        row[c] = field.sub(&row[c], &scaled);
                    }
                }
            }
            rank += 1;
        }
        vars - rank
    }

    /// Builds the phase-corrected class sum by transporting the coefficient
    /// of the representative along conjugation, then re-verifies every
    /// centrality constraint exactly.
    fn transported_class_vector(&self, class: &[usize]) -> Result<CenterBasisVector, AlgebraError> {
        let rep = class[0];
        let n = self.group.order();
        let mut coeff: Vec<Option<Phase>> = vec![None; n];
        coeff[rep] = Some(Phase::ZERO);
        let mut queue = VecDeque::from([rep]);
        while let Some(g) = queue.pop_front() {
            let cg = coeff[g].expect("queued elements have coefficients");
            for h in 0..n {
                let t = self.group.conj(self.group.inv(h), g);
                let ct = cg + self.alpha.get(g, h) - self.alpha.get(h, t);
                match coeff[t] {
                    None => {
                        coeff[t] = Some(ct);
                        queue.push_back(t);
                    }
                    Some(existing) => {
                        if existing != ct {
                            return Err(AlgebraError::CenterTransport {
                                rep,
                                nullity: 1,
                            });
                        }
                    }
                }
            }
        }
        let support: Vec<(usize, Phase)> = class
            .iter()
            .map(|&g| (g, coeff[g].expect("class is one conjugation orbit")))
            .collect();
        Ok(CenterBasisVector {
            class_rep: rep,
            label: format!("[{}]", self.group.name_of(rep)),
            support,
        })
    }

    /// Left multiplication on the algebra itself: `|G|`-dimensional
    /// matrices `L_g` with entry `e(alpha(g,h))` at position `(gh, h)`.
    pub fn regular_rep(&self) -> ProjectiveRep {
        let n = self.group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = Array2::zeros((n, n));
                for h in 0..n {
                    m[(self.group.mul(g, h), h)] = self.alpha.get(g, h).as_complex();
                }
                m
            })
            .collect();
        ProjectiveRep { dimension: n, matrices }
    }
}

impl ProjectiveRep {
    /// Checks the defining identities against a twist:
    /// `rho(e) = 1` and `rho(g) rho(h) = e(alpha(g,h)) rho(gh)`, entrywise
    /// within `1e-9`.
    pub fn validate(&self, alpha: &Cochain2) -> Result<(), AlgebraError> {
        let group = alpha.group();
        let n = group.order();
        if self.matrices.len() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, got: self.matrices.len() });
        }
        for m in &self.matrices {
            if m.nrows() != self.dimension || m.ncols() != self.dimension {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dimension,
                    got: m.nrows(),
                });
            }
        }
        let id = Array2::<Complex64>::eye(self.dimension);
        if !close(&self.matrices[0], &id) {
            return Err(AlgebraError::NotAProjectiveRep { g: 0, h: 0 });
        }
        for g in 0..n {
            for h in 0..n {
                let lhs = self.matrices[g].dot(&self.matrices[h]);
                let rhs = self.matrices[group.mul(g, h)].mapv(|z| z * alpha.get(g, h).as_complex());
                if !close(&lhs, &rhs) {
                    return Err(AlgebraError::NotAProjectiveRep { g, h });
                }
            }
        }
        Ok(())
    }

    pub fn trace(&self, g: usize) -> Complex64 {
        self.matrices[g].diag().sum()
    }
}

fn close(a: &Array2<Complex64>, b: &Array2<Complex64>) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= TOLERANCE)
}

/// Checks the trace-transformation law
/// `Tr rho(h g h^-1) = e(alpha(hgh^-1, h) - alpha(h, g)) * Tr rho(g)`
/// for every pair, within `1e-9`.
pub fn character_transform_check(rep: &ProjectiveRep, alpha: &Cochain2) -> bool {
    let group = alpha.group();
    let n = group.order();
    for g in 0..n {
        for h in 0..n {
            let c = group.conj(h, g);
            let tau = alpha.get(c, h) - alpha.get(h, g);
            let lhs = rep.trace(c);
            let rhs = tau.as_complex() * rep.trace(g);
            if (lhs - rhs).norm() > TOLERANCE {
                return false;
            }
        }
    }
    true
}
