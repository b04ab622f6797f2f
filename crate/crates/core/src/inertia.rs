//! The loop groupoids attached to a finite group: objects are group elements
//! (single loops) or commuting pairs (double loops), with the group acting by
//! conjugation. Also the right action of integer `SL2` matrices on commuting
//! pairs and the induced coarsening of conjugation orbits.

use crate::group::{CommutingPair, FiniteGroup, PairOrbit};
use std::collections::HashMap;
use std::sync::Arc;

/// Objects of a loop groupoid: either all group elements or an explicit list
/// of commuting pairs.
#[derive(Clone, Debug)]
pub enum ObjectSet {
    /// One object per group element.
    Elements,
    /// One object per listed commuting pair.
    Pairs(Arc<Vec<CommutingPair>>),
}

/// An action groupoid `objects // G` with `G` acting by (simultaneous)
/// conjugation.
#[derive(Clone, Debug)]
pub struct LoopGroupoid {
    pub group: Arc<FiniteGroup>,
    pub objects: ObjectSet,
    /// For pair objects, position of each pair in the object list.
    index: Option<HashMap<(usize, usize), usize>>,
}

impl LoopGroupoid {
    /// The single-loop groupoid `G // G`.
    pub fn single(group: Arc<FiniteGroup>) -> LoopGroupoid {
        LoopGroupoid { group, objects: ObjectSet::Elements, index: None }
    }

    /// The double-loop groupoid on all commuting pairs.
    pub fn double(group: Arc<FiniteGroup>) -> LoopGroupoid {
        let pairs = Arc::new(group.commuting_pairs());
        let index = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.g1, p.g2), i))
            .collect();
        LoopGroupoid { group, objects: ObjectSet::Pairs(pairs), index: Some(index) }
    }

    pub fn object_count(&self) -> usize {
        match &self.objects {
            ObjectSet::Elements => self.group.order(),
            ObjectSet::Pairs(p) => p.len(),
        }
    }

    /// The object `h · x · h^-1` for object index `x`.
    pub fn conjugate_object(&self, h: usize, x: usize) -> usize {
        match &self.objects {
            ObjectSet::Elements => self.group.conj(h, x),
            ObjectSet::Pairs(p) => {
                let pair = p[x];
                let img = (self.group.conj(h, pair.g1), self.group.conj(h, pair.g2));
                self.index.as_ref().expect("pair groupoid has an index")[&img]
            }
        }
    }

    /// Automorphisms of an object: its (simultaneous) centralizer.
    pub fn automorphisms(&self, x: usize) -> Vec<usize> {
        match &self.objects {
            ObjectSet::Elements => self.group.centralizer(x),
            ObjectSet::Pairs(p) => self.group.centralizer_pair(p[x].g1, p[x].g2),
        }
    }

    pub fn pair_index(&self, pair: CommutingPair) -> Option<usize> {
        self.index.as_ref().and_then(|m| m.get(&(pair.g1, pair.g2)).copied())
    }

    pub fn pair_at(&self, x: usize) -> Option<CommutingPair> {
        match &self.objects {
            ObjectSet::Pairs(p) => Some(p[x]),
            ObjectSet::Elements => None,
        }
    }
}

/// An integer matrix of determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SL2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

#[derive(Debug, thiserror::Error)]
#[error("matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected 1")]
pub struct NotUnimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub det: i64,
}

impl SL2Z {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<SL2Z, NotUnimodular> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(NotUnimodular { a, b, c, d, det });
        }
        Ok(SL2Z { a, b, c, d })
    }

    pub fn identity() -> SL2Z {
        SL2Z { a: 1, b: 0, c: 0, d: 1 }
    }

    /// `S = [[0, -1], [1, 0]]`.
    pub fn s() -> SL2Z {
        SL2Z { a: 0, b: -1, c: 1, d: 0 }
    }

    /// `T = [[1, 1], [0, 1]]`.
    pub fn t() -> SL2Z {
        SL2Z { a: 1, b: 1, c: 0, d: 1 }
    }

    pub fn mul(self, other: SL2Z) -> SL2Z {
        SL2Z {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(self) -> SL2Z {
        SL2Z { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

/// Right action on commuting pairs:
/// `(g1, g2) · [[a, b], [c, d]] = (g1^d g2^-b, g1^-c g2^a)`.
pub fn sl2z_act(group: &FiniteGroup, pair: CommutingPair, m: SL2Z) -> CommutingPair {
    let x = group.mul(group.pow(pair.g1, m.d), group.pow(pair.g2, -m.b));
    let y = group.mul(group.pow(pair.g1, -m.c), group.pow(pair.g2, m.a));
    debug_assert_eq!(group.mul(x, y), group.mul(y, x), "powers of a commuting pair commute");
    CommutingPair { g1: x, g2: y }
}

/// Partitions conjugation orbits of commuting pairs into `SL2` orbits, by
/// closing under the generators `S` and `T`. Returns sorted index sets into
/// `orbits`, ordered by smallest member.
pub fn sl2z_orbits(group: &FiniteGroup, orbits: &[PairOrbit]) -> Vec<Vec<usize>> {
    let mut orbit_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, orbit) in orbits.iter().enumerate() {
        for m in &orbit.members {
            orbit_of.insert((m.g1, m.g2), i);
        }
    }
    let lookup = |p: CommutingPair| orbit_of[&(p.g1, p.g2)];
    let mut seen = vec![false; orbits.len()];
    let mut blocks = Vec::new();
    for start in 0..orbits.len() {
        if seen[start] {
            continue;
        }
        let mut block = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let rep = orbits[i].representative;
            for m in [SL2Z::s(), SL2Z::t()] {
                let j = lookup(sl2z_act(group, rep, m));
                if !seen[j] {
                    seen[j] = true;
                    block.push(j);
                    stack.push(j);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}
