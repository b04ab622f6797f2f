//! Finite groups as validated multiplication tables, plus the combinatorial
//! data everything downstream consumes: conjugacy classes, centralizers,
//! commuting pairs and their conjugation orbits, G-sets, and homomorphisms.
//!
//! Elements are dense indices `0..order` with the identity at index `0`.
//! Groups are immutable after construction and are shared via `Arc`.

use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Default ceiling on group orders built by closure or by name.
pub const DEFAULT_MAX_ORDER: usize = 1024;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("multiplication table is not square: row {row} has length {len}, expected {order}")]
    BadTableShape { row: usize, len: usize, order: usize },
    #[error("table entry out of range at ({i}, {j}): {value} (order {order})")]
    EntryOutOfRange { i: usize, j: usize, value: usize, order: usize },
    #[error("element 0 is not a two-sided identity (fails at element {witness})")]
    BadIdentity { witness: usize },
    #[error("element {element} has no inverse")]
    MissingInverse { element: usize },
    #[error("multiplication is not associative: ({i}*{j})*{k} != {i}*({j}*{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderExceedsCap { order: usize, cap: usize },
    #[error("generator closure exceeded the configured cap {cap}")]
    ClosureExceedsCap { cap: usize },
    #[error("unknown group name `{0}`")]
    UnknownName(String),
    #[error("permutation generator {index} is not a permutation of 0..{degree}")]
    BadPermutation { index: usize, degree: usize },
    #[error("element index {element} out of range for group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("map is not a homomorphism: sends identity to {0}")]
    HomomorphismIdentity(usize),
    #[error("map is not a homomorphism: f({a}*{b}) = {lhs} but f({a})*f({b}) = {rhs}")]
    HomomorphismMul { a: usize, b: usize, lhs: usize, rhs: usize },
    #[error("homomorphism map has length {len}, expected source order {order}")]
    HomomorphismLength { len: usize, order: usize },
    #[error("subset is not a subgroup: not closed under {op} at element index {witness}")]
    NotASubgroup { op: &'static str, witness: usize },
    #[error("G-set action row for element {element} is not a permutation of 0..{size}")]
    BadAction { element: usize, size: usize },
    #[error("G-set action is not compatible: ({g}*{h})·{x} != {g}·({h}·{x})")]
    ActionIncompatible { g: usize, h: usize, x: usize },
    #[error("G-set identity row must be the identity permutation (fails at point {x})")]
    ActionIdentity { x: usize },
    #[error("natural G-set requested for a group without stored permutations")]
    NoNaturalAction,
    #[error("elements {g1} and {g2} do not commute")]
    NotCommuting { g1: usize, g2: usize },
}

/// A finite group given by its full multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    names: Vec<String>,
    /// Present when the group was built from permutations; images of each
    /// element as a permutation of `0..degree`.
    perms: Option<Vec<Vec<u16>>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}
impl Eq for FiniteGroup {}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

/// True when the two handles denote the same group (same allocation or
/// identical multiplication tables).
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FiniteGroup {
    /// Validates a full table: shape, identity at index 0, inverses,
    /// associativity. The associativity sweep is cubic and runs in parallel
    /// for larger tables.
    pub fn from_table(mul: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Arc<Self>, GroupError> {
        let order = mul.len();
        if order == 0 {
            return Err(GroupError::BadTableShape { row: 0, len: 0, order: 1 });
        }
        if order > u16::MAX as usize {
            return Err(GroupError::OrderExceedsCap { order, cap: u16::MAX as usize });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in mul.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::BadTableShape { row: i, len: row.len(), order });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::EntryOutOfRange { i, j, value: v, order });
                }
                flat.push(v as u16);
            }
        }
        let names = names.unwrap_or_else(|| (0..order).map(|i| i.to_string()).collect());
        Self::finish(order, flat, names, None, true)
    }

    /// Shared tail of all constructors. `check_assoc` is false for tables
    /// built by composing actual maps, which are associative by construction.
    fn finish(
        order: usize,
        mul: Vec<u16>,
        names: Vec<String>,
        perms: Option<Vec<Vec<u16>>>,
        check_assoc: bool,
    ) -> Result<Arc<Self>, GroupError> {
        debug_assert_eq!(mul.len(), order * order);
        debug_assert_eq!(names.len(), order);
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(GroupError::BadIdentity { witness: g });
            }
        }
        let mut inv = vec![u16::MAX; order];
        for g in 0..order {
            match (0..order).find(|&h| at(g, h) == 0 && at(h, g) == 0) {
                Some(h) => inv[g] = h as u16,
                None => return Err(GroupError::MissingInverse { element: g }),
            }
        }
        if check_assoc {
            let bad = (0..order)
                .into_par_iter()
                .flat_map_iter(|i| (0..order).map(move |j| (i, j)))
                .filter_map(|(i, j)| {
                    let ij = at(i, j);
                    (0..order)
                        .find(|&k| at(ij, k) != at(i, at(j, k)))
                        .map(|k| (i, j, k))
                })
                .min();
            if let Some((i, j, k)) = bad {
                return Err(GroupError::NotAssociative { i, j, k });
            }
        }
        Ok(Arc::new(FiniteGroup { order, mul, inv, names, perms }))
    }

    /// Closure of permutation generators under composition, breadth-first
    /// from the identity with lexicographic tie-break inside each level, so
    /// element indexing is deterministic.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        max_order: usize,
    ) -> Result<Arc<Self>, GroupError> {
        let mut gens: Vec<Vec<u16>> = Vec::new();
        for (index, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(GroupError::BadPermutation { index, degree });
            }
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(GroupError::BadPermutation { index, degree });
                }
                seen[img] = true;
            }
            gens.push(g.iter().map(|&x| x as u16).collect());
        }
        let id: Vec<u16> = (0..degree as u16).collect();
        let mut elems: Vec<Vec<u16>> = vec![id.clone()];
        let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut frontier: Vec<usize> = vec![0];
        while !frontier.is_empty() {
            let mut next: Vec<Vec<u16>> = Vec::new();
            for &x in &frontier {
                for g in &gens {
                    let prod = compose(&elems[x], g);
                    if !index.contains_key(&prod) {
                        next.push(prod);
                    }
                }
            }
            next.sort();
            next.dedup();
            frontier = Vec::new();
            for p in next {
                if index.contains_key(&p) {
                    continue;
                }
                if elems.len() >= max_order {
                    return Err(GroupError::ClosureExceedsCap { cap: max_order });
                }
                index.insert(p.clone(), elems.len());
                frontier.push(elems.len());
                elems.push(p);
            }
        }
        let order = elems.len();
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = compose(&elems[a], &elems[b]);
                mul[a * order + b] = index[&prod] as u16;
            }
        }
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        Self::finish(order, mul, names, Some(elems), false)
    }

    /// Cyclic group of order `n`; element `i` is the residue `i`.
    pub fn cyclic(n: usize) -> Result<Arc<Self>, GroupError> {
        Self::cyclic_with_cap(n, DEFAULT_MAX_ORDER)
    }

    pub fn cyclic_with_cap(n: usize, cap: usize) -> Result<Arc<Self>, GroupError> {
        if n == 0 || n > cap {
            return Err(GroupError::OrderExceedsCap { order: n, cap });
        }
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u16;
            }
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::finish(n, mul, names, None, false)
    }

    /// Dihedral group of order `2n`: indices `0..n` are rotations `r^i`,
    /// indices `n..2n` are reflections `s r^i`.
    pub fn dihedral(n: usize) -> Result<Arc<Self>, GroupError> {
        if n == 0 || 2 * n > DEFAULT_MAX_ORDER {
            return Err(GroupError::OrderExceedsCap { order: 2 * n, cap: DEFAULT_MAX_ORDER });
        }
        let order = 2 * n;
        let idx = |eps: usize, a: usize| eps * n + a % n;
        let mut mul = vec![0u16; order * order];
        for e1 in 0..2 {
            for a1 in 0..n {
                for e2 in 0..2 {
                    for a2 in 0..n {
                        // s^e1 r^a1 s^e2 r^a2 = s^(e1+e2) r^((-1)^e2 a1 + a2)
                        let a = if e2 == 1 { (n - a1) % n + a2 } else { a1 + a2 } % n;
                        mul[idx(e1, a1) * order + idx(e2, a2)] = idx((e1 + e2) % 2, a) as u16;
                    }
                }
            }
        }
        let mut names = Vec::with_capacity(order);
        for eps in 0..2 {
            for a in 0..n {
                names.push(match (eps, a) {
                    (0, 0) => "e".to_string(),
                    (0, 1) => "r".to_string(),
                    (0, _) => format!("r{a}"),
                    (1, 0) => "s".to_string(),
                    (1, 1) => "sr".to_string(),
                    (_, _) => format!("sr{a}"),
                });
            }
        }
        Self::finish(order, mul, names, None, false)
    }

    /// Symmetric group on `n` points from the transposition `(0 1)` and the
    /// long cycle, as a permutation group.
    pub fn symmetric(n: usize) -> Result<Arc<Self>, GroupError> {
        if n == 0 || n > 5 {
            // 6! = 720 would still fit the cap, but the named families stop
            // at the sizes the rest of the tooling is tested against.
            return Err(GroupError::UnknownName(format!("S{n}")));
        }
        if n == 1 {
            return Self::cyclic(1);
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(n, &[swap, cycle], DEFAULT_MAX_ORDER)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`; indices `0..8` are
    /// `1, i, j, k, -1, -i, -j, -k`.
    pub fn quaternion() -> Result<Arc<Self>, GroupError> {
        // Products of the units e, i, j, k as (sign flip, unit index).
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let order = 8;
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let (sa, ua) = (a / 4, a % 4);
                let (sb, ub) = (b / 4, b % 4);
                let (sf, u) = UNIT[ua][ub];
                let s = (sa + sb + sf) % 2;
                mul[a * order + b] = (s * 4 + u) as u16;
            }
        }
        let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::finish(order, mul, names, None, false)
    }

    /// Direct product; the first factor is the least significant index digit,
    /// so element `(a, b)` gets index `a + |A| * b`.
    pub fn product(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<Arc<Self>, GroupError> {
        let (na, nb) = (a.order, b.order);
        let order = na * nb;
        if order > u16::MAX as usize {
            return Err(GroupError::OrderExceedsCap { order, cap: u16::MAX as usize });
        }
        let mut mul = vec![0u16; order * order];
        for xa in 0..na {
            for xb in 0..nb {
                for ya in 0..na {
                    for yb in 0..nb {
                        let x = xa + na * xb;
                        let y = ya + na * yb;
                        let za = a.mul(xa, ya);
                        let zb = b.mul(xb, yb);
                        mul[x * order + y] = (za + na * zb) as u16;
                    }
                }
            }
        }
        let mut names = Vec::with_capacity(order);
        for idx in 0..order {
            let (xa, xb) = (idx % na, idx / na);
            names.push(format!("({},{})", a.names[xa], b.names[xb]));
        }
        Self::finish(order, mul, names, None, false)
    }

    /// Looks up a group by name: `Z/n` (or `Zn`), `Sn` for n <= 5, `Dn`
    /// (dihedral, order 2n), `Q8`, and `x`-separated direct products such as
    /// `Z2xZ2`.
    pub fn named(name: &str) -> Result<Arc<Self>, GroupError> {
        let name = name.trim();
        if let Some((first, rest)) = split_product(name) {
            let a = Self::named(first)?;
            let b = Self::named(rest)?;
            return Self::product(&a, &b);
        }
        let lower = name.to_ascii_lowercase();
        if let Some(n) = lower.strip_prefix("z/").or_else(|| lower.strip_prefix("z")) {
            let n: usize = n
                .parse()
                .map_err(|_| GroupError::UnknownName(name.to_string()))?;
            return Self::cyclic(n);
        }
        if let Some(n) = lower.strip_prefix("s") {
            if let Ok(n) = n.parse::<usize>() {
                return Self::symmetric(n);
            }
        }
        if let Some(n) = lower.strip_prefix("d") {
            if let Ok(n) = n.parse::<usize>() {
                return Self::dihedral(n);
            }
        }
        if lower == "q8" {
            return Self::quaternion();
        }
        if lower == "klein" {
            return Self::named("Z2xZ2");
        }
        Err(GroupError::UnknownName(name.to_string()))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn conj(&self, h: usize, g: usize) -> usize {
        // h g h^-1
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let n = self.element_order(g) as i64;
        let mut k = k.rem_euclid(n) as usize;
        let mut acc = 0;
        let mut base = g;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn name_of(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Stored permutation images when the group was built as a permutation
    /// group.
    pub fn permutation(&self, g: usize) -> Option<&[u16]> {
        self.perms.as_ref().map(|p| p[g].as_slice())
    }

    pub fn permutation_degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p[0].len())
    }

    pub fn find_permutation(&self, images: &[usize]) -> Option<usize> {
        let target: Vec<u16> = images.iter().map(|&x| x as u16).collect();
        self.perms
            .as_ref()
            .and_then(|ps| ps.iter().position(|p| *p == target))
    }

    /// Conjugacy classes, each sorted ascending, ordered by smallest member;
    /// the class of the identity comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|h| self.conj(h, g)).collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Index of each element's conjugacy class in `conjugacy_classes()` order.
    pub fn class_map(&self) -> Vec<usize> {
        let classes = self.conjugacy_classes();
        let mut map = vec![0; self.order];
        for (i, class) in classes.iter().enumerate() {
            for &g in class {
                map[g] = i;
            }
        }
        map
    }

    /// Elements commuting with `g`, ascending.
    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&h| self.mul(h, g) == self.mul(g, h))
            .collect()
    }

    /// Elements commuting with both members of a pair, ascending.
    pub fn centralizer_pair(&self, g1: usize, g2: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&h| self.mul(h, g1) == self.mul(g1, h) && self.mul(h, g2) == self.mul(g2, h))
            .collect()
    }

    /// All ordered commuting pairs, lexicographically sorted.
    pub fn commuting_pairs(&self) -> Vec<CommutingPair> {
        let mut pairs = Vec::new();
        for g1 in 0..self.order {
            for g2 in 0..self.order {
                if self.mul(g1, g2) == self.mul(g2, g1) {
                    pairs.push(CommutingPair { g1, g2 });
                }
            }
        }
        pairs
    }

    /// Orbits of simultaneous conjugation on commuting pairs. Orbits are
    /// ordered by their lexicographically smallest member, which is also the
    /// stored representative.
    pub fn pair_orbits(&self) -> Vec<PairOrbit> {
        let mut seen: HashMap<(usize, usize), bool> = HashMap::new();
        let mut orbits = Vec::new();
        for g1 in 0..self.order {
            for g2 in 0..self.order {
                if self.mul(g1, g2) != self.mul(g2, g1) || seen.contains_key(&(g1, g2)) {
                    continue;
                }
                let mut members: Vec<(usize, usize)> = (0..self.order)
                    .map(|h| (self.conj(h, g1), self.conj(h, g2)))
                    .collect();
                members.sort_unstable();
                members.dedup();
                for &m in &members {
                    seen.insert(m, true);
                }
                let rep = members[0];
                debug_assert_eq!(rep, (g1, g2));
                orbits.push(PairOrbit {
                    representative: CommutingPair { g1: rep.0, g2: rep.1 },
                    members: members
                        .into_iter()
                        .map(|(a, b)| CommutingPair { g1: a, g2: b })
                        .collect(),
                    stabilizer: self.centralizer_pair(rep.0, rep.1),
                });
            }
        }
        orbits
    }

    /// Extracts a subgroup from a closed subset containing the identity.
    /// Returns the subgroup with its own dense indexing plus the embedding
    /// into this group.
    pub fn subgroup(&self, elements: &[usize]) -> Result<(Arc<FiniteGroup>, Vec<usize>), GroupError> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(GroupError::NotASubgroup { op: "identity", witness: 0 });
        }
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        for (i, &g) in elems.iter().enumerate() {
            if !pos.contains_key(&self.inv(g)) {
                return Err(GroupError::NotASubgroup { op: "inverse", witness: i });
            }
        }
        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        for (i, &g) in elems.iter().enumerate() {
            for (j, &h) in elems.iter().enumerate() {
                match pos.get(&self.mul(g, h)) {
                    Some(&k) => mul[i * n + j] = k as u16,
                    None => return Err(GroupError::NotASubgroup { op: "product", witness: i }),
                }
            }
        }
        let names = elems.iter().map(|&g| self.names[g].clone()).collect();
        let sub = FiniteGroup::finish(n, mul, names, None, false)?;
        Ok((sub, elems))
    }
}

/// `(p . q)(x) = p(q(x))`: apply `q` first.
fn compose(p: &[u16], q: &[u16]) -> Vec<u16> {
    q.iter().map(|&x| p[x as usize]).collect()
}

/// Cycle notation on points `0..degree`; the identity prints as `e`.
pub fn cycle_notation(p: &[u16]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start] as usize;
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

fn split_product(name: &str) -> Option<(&str, &str)> {
    // Split at a top-level 'x' between factor names, e.g. "Z2xZ2" or
    // "Z/2xS3". The character before 'x' must be a digit so names like
    // "x" alone never match.
    let bytes = name.as_bytes();
    for i in 1..bytes.len().saturating_sub(1) {
        if (bytes[i] == b'x' || bytes[i] == b'X') && bytes[i - 1].is_ascii_digit() {
            return Some((&name[..i], &name[i + 1..]));
        }
    }
    None
}

/// An ordered pair of commuting elements.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CommutingPair {
    pub g1: usize,
    pub g2: usize,
}

/// One orbit of simultaneous conjugation on commuting pairs.
#[derive(Clone, Debug)]
pub struct PairOrbit {
    pub representative: CommutingPair,
    /// All pairs in the orbit, lexicographically sorted.
    pub members: Vec<CommutingPair>,
    /// Simultaneous centralizer of the representative.
    pub stabilizer: Vec<usize>,
}

/// A finite left G-set given by the full action table.
#[derive(Clone, Debug)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    size: usize,
    /// `action[g * size + x]` is `g · x`.
    action: Vec<u16>,
}

impl GSet {
    /// Validates that rows are permutations, the identity acts trivially, and
    /// the action is compatible with multiplication.
    pub fn from_table(group: Arc<FiniteGroup>, size: usize, rows: Vec<Vec<usize>>) -> Result<GSet, GroupError> {
        let order = group.order();
        if rows.len() != order {
            return Err(GroupError::BadAction { element: rows.len(), size });
        }
        let mut action = vec![0u16; order * size];
        for (g, row) in rows.iter().enumerate() {
            let mut seen = vec![false; size];
            if row.len() != size {
                return Err(GroupError::BadAction { element: g, size });
            }
            for &img in row {
                if img >= size || seen[img] {
                    return Err(GroupError::BadAction { element: g, size });
                }
                seen[img] = true;
            }
            for (x, &img) in row.iter().enumerate() {
                action[g * size + x] = img as u16;
            }
        }
        for x in 0..size {
            if action[x] as usize != x {
                return Err(GroupError::ActionIdentity { x });
            }
        }
        let gset = GSet { group: group.clone(), size, action };
        for g in 0..order {
            for h in 0..order {
                for x in 0..size {
                    if gset.act(group.mul(g, h), x) != gset.act(g, gset.act(h, x)) {
                        return Err(GroupError::ActionIncompatible { g, h, x });
                    }
                }
            }
        }
        Ok(gset)
    }

    /// The one-point G-set.
    pub fn point(group: Arc<FiniteGroup>) -> GSet {
        GSet::trivial(group, 1)
    }

    /// `n` points, all fixed.
    pub fn trivial(group: Arc<FiniteGroup>, n: usize) -> GSet {
        let order = group.order();
        let mut action = vec![0u16; order * n];
        for g in 0..order {
            for x in 0..n {
                action[g * n + x] = x as u16;
            }
        }
        GSet { group, size: n, action }
    }

    /// The group acting on itself by left translation.
    pub fn regular(group: Arc<FiniteGroup>) -> GSet {
        let order = group.order();
        let mut action = vec![0u16; order * order];
        for g in 0..order {
            for x in 0..order {
                action[g * order + x] = group.mul(g, x) as u16;
            }
        }
        GSet { group, size: order, action }
    }

    /// The defining action of a permutation group on its points.
    pub fn natural(group: Arc<FiniteGroup>) -> Result<GSet, GroupError> {
        let degree = group.permutation_degree().ok_or(GroupError::NoNaturalAction)?;
        let order = group.order();
        let mut action = vec![0u16; order * degree];
        for g in 0..order {
            let p = group.permutation(g).unwrap();
            for x in 0..degree {
                action[g * degree + x] = p[x];
            }
        }
        Ok(GSet { group, size: degree, action })
    }

    /// Left cosets of the subgroup generated by a closed subset, with G
    /// acting by translation.
    pub fn cosets(group: Arc<FiniteGroup>, subgroup: &[usize]) -> Result<GSet, GroupError> {
        let (_, elems) = group.subgroup(subgroup)?;
        let order = group.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut reps = Vec::new();
        for g in 0..order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            for &h in &elems {
                coset_of[group.mul(g, h)] = c;
            }
            reps.push(g);
        }
        let size = reps.len();
        let mut action = vec![0u16; order * size];
        for g in 0..order {
            for (x, &rep) in reps.iter().enumerate() {
                action[g * size + x] = coset_of[group.mul(g, rep)] as u16;
            }
        }
        Ok(GSet { group, size, action })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x] as usize
    }

    /// Points fixed by every listed element.
    pub fn fixed_points(&self, elements: &[usize]) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| elements.iter().all(|&g| self.act(g, x) == x))
            .collect()
    }

    /// Orbits, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut orbits = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect()
    }

    /// Restricts the action along a homomorphism into this G-set's group.
    pub fn restrict_along(&self, f: &Homomorphism) -> Result<GSet, GroupError> {
        if !same_group(&f.target, &self.group) {
            return Err(GroupError::ActionIncompatible { g: 0, h: 0, x: 0 });
        }
        let order = f.source.order();
        let mut action = vec![0u16; order * self.size];
        for h in 0..order {
            let g = f.apply(h);
            for x in 0..self.size {
                action[h * self.size + x] = self.act(g, x) as u16;
            }
        }
        Ok(GSet { group: f.source.clone(), size: self.size, action })
    }
}

/// A group homomorphism stored as the image of every source element;
/// validated on construction.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    map: Vec<u16>,
}

impl Homomorphism {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Homomorphism, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::HomomorphismLength { len: map.len(), order: source.order() });
        }
        for &v in &map {
            if v >= target.order() {
                return Err(GroupError::ElementOutOfRange { element: v, order: target.order() });
            }
        }
        if map[0] != 0 {
            return Err(GroupError::HomomorphismIdentity(map[0]));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                let lhs = map[source.mul(a, b)];
                let rhs = target.mul(map[a], map[b]);
                if lhs != rhs {
                    return Err(GroupError::HomomorphismMul { a, b, lhs, rhs });
                }
            }
        }
        Ok(Homomorphism {
            source,
            target,
            map: map.into_iter().map(|v| v as u16).collect(),
        })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Homomorphism {
        let map = (0..group.order() as u16).collect();
        Homomorphism { source: group.clone(), target: group, map }
    }

    /// The constant map to the identity of `target`.
    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Homomorphism {
        let map = vec![0u16; source.order()];
        Homomorphism { source, target, map }
    }

    #[inline]
    pub fn apply(&self, h: usize) -> usize {
        self.map[h] as usize
    }

    pub fn map(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v as usize).collect()
    }

    /// `self . other`, requiring `other.target == self.source`.
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism, GroupError> {
        if !same_group(&other.target, &self.source) {
            return Err(GroupError::HomomorphismLength { len: other.target.order(), order: self.source.order() });
        }
        let map = (0..other.source.order())
            .map(|h| self.map[other.apply(h)])
            .collect();
        Ok(Homomorphism { source: other.source.clone(), target: self.target.clone(), map })
    }
}

/// The named groups of order at most 24 used by test batteries.
pub fn builtin_groups() -> Vec<(String, Arc<FiniteGroup>)> {
    [
        "Z1", "Z2", "Z3", "Z4", "Z6", "Z8", "Z12", "Z24", "Z2xZ2", "Z2xZ4", "Z3xZ3", "S3", "S4",
        "D4", "D6", "Q8",
    ]
    .iter()
    .map(|name| (name.to_string(), FiniteGroup::named(name).expect("valid built-in name")))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.conjugacy_classes().len(), 1);
        assert_eq!(g.commuting_pairs().len(), 1);
        assert_eq!(g.pair_orbits().len(), 1);
    }

    #[test]
    fn s3_structure() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        let classes = g.conjugacy_classes();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(classes[0], vec![0]);
        // Sum of centralizer orders counts commuting pairs: 18 for S3.
        let total: usize = (0..6).map(|x| g.centralizer(x).len()).sum();
        assert_eq!(total, 18);
        assert_eq!(g.commuting_pairs().len(), 18);
        assert_eq!(g.pair_orbits().len(), 8);
    }

    #[test]
    fn q8_structure() {
        let g = FiniteGroup::quaternion().unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.conjugacy_classes().len(), 5);
        assert_eq!(g.commuting_pairs().len(), 40);
        // i * j = k, j * i = -k
        let (i, j, k) = (1, 2, 3);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), 4 + k);
        assert_eq!(g.element_order(i), 4);
        assert_eq!(g.element_order(4), 2);
    }

    #[test]
    fn dihedral_structure() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.conjugacy_classes().len(), 5);
        let d3 = FiniteGroup::dihedral(3).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(d3.conjugacy_classes().len(), s3.conjugacy_classes().len());
    }

    #[test]
    fn class_count_times_order_counts_commuting_pairs() {
        for (name, g) in builtin_groups() {
            let classes = g.conjugacy_classes().len();
            let pairs = g.commuting_pairs().len();
            assert_eq!(pairs, classes * g.order(), "Burnside count failed for {name}");
        }
    }

    #[test]
    fn orbit_stabilizer_for_pair_orbits() {
        for (name, g) in builtin_groups() {
            for orbit in g.pair_orbits() {
                assert_eq!(
                    orbit.members.len() * orbit.stabilizer.len(),
                    g.order(),
                    "orbit-stabilizer failed for {name}"
                );
                let rep = orbit.representative;
                assert_eq!(rep, orbit.members[0]);
                assert_eq!(g.mul(rep.g1, rep.g2), g.mul(rep.g2, rep.g1));
            }
        }
    }

    #[test]
    fn pair_orbit_count_matches_class_sum() {
        // Number of pair orbits = sum over classes [g] of the class count of
        // Z(g), computed here through the subgroup route.
        for (name, g) in builtin_groups() {
            let lhs = g.pair_orbits().len();
            let mut rhs = 0;
            for class in g.conjugacy_classes() {
                let z = g.centralizer(class[0]);
                let (zg, _) = g.subgroup(&z).unwrap();
                rhs += zg.conjugacy_classes().len();
            }
            assert_eq!(lhs, rhs, "pair orbit count mismatch for {name}");
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.pair_orbits().len(), 8);
    }

    #[test]
    fn pow_and_element_order() {
        let g = FiniteGroup::cyclic(12).unwrap();
        assert_eq!(g.pow(5, 0), 0);
        assert_eq!(g.pow(5, 2), 10);
        assert_eq!(g.pow(5, -1), 7);
        assert_eq!(g.pow(1, -5), 7);
        assert_eq!(g.element_order(4), 3);
    }

    #[test]
    fn from_table_validation() {
        // Z/2 as explicit table works.
        let z2 = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(z2.order(), 2);
        // Non-associative magma is rejected with a witness.
        let bad = FiniteGroup::from_table(
            vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]],
            None,
        );
        assert!(matches!(bad, Err(GroupError::NotAssociative { .. })));
        // Broken identity row.
        let bad = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None);
        assert!(matches!(bad, Err(GroupError::BadIdentity { .. })));
    }

    #[test]
    fn closure_cap_is_enforced() {
        let err = FiniteGroup::from_permutations(5, &[vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]], 20);
        assert!(matches!(err, Err(GroupError::ClosureExceedsCap { cap: 20 })));
    }

    #[test]
    fn named_lookup() {
        assert_eq!(FiniteGroup::named("Z/6").unwrap().order(), 6);
        assert_eq!(FiniteGroup::named("Z6").unwrap().order(), 6);
        assert_eq!(FiniteGroup::named("S4").unwrap().order(), 24);
        assert_eq!(FiniteGroup::named("D6").unwrap().order(), 12);
        assert_eq!(FiniteGroup::named("Z2xZ2").unwrap().order(), 4);
        assert_eq!(FiniteGroup::named("Z2xZ2xZ2").unwrap().order(), 8);
        assert!(FiniteGroup::named("E8").is_err());
        // Klein group indexing: (a1, a2) at index a1 + 2*a2.
        let k = FiniteGroup::named("Z2xZ2").unwrap();
        assert_eq!(k.mul(1, 2), 3);
        assert_eq!(k.mul(3, 3), 0);
    }

    #[test]
    fn gset_builders_and_invariants() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let nat = GSet::natural(s3.clone()).unwrap();
        assert_eq!(nat.size(), 3);
        assert_eq!(nat.orbits().len(), 1);
        // A transposition fixes exactly one of three points.
        let t = s3.find_permutation(&[1, 0, 2]).unwrap();
        assert_eq!(nat.fixed_points(&[t]).len(), 1);
        let reg = GSet::regular(s3.clone());
        assert_eq!(reg.orbits().len(), 1);
        assert_eq!(reg.stabilizer(0), vec![0]);
        assert_eq!(reg.fixed_points(&[t]).len(), 0);
        // Orbit-stabilizer on the coset space S3 / <t>.
        let cosets = GSet::cosets(s3.clone(), &[0, t]).unwrap();
        assert_eq!(cosets.size(), 3);
        assert_eq!(cosets.stabilizer(0).len(), 2);
        // Identity-fixed points are everything.
        assert_eq!(nat.fixed_points(&[0]).len(), 3);
    }

    #[test]
    fn gset_table_validation() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let ok = GSet::from_table(z2.clone(), 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(ok.orbits().len(), 1);
        let bad = GSet::from_table(z2.clone(), 2, vec![vec![0, 1], vec![0, 0]]);
        assert!(matches!(bad, Err(GroupError::BadAction { .. })));
        let bad = GSet::from_table(z2, 2, vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(bad, Err(GroupError::ActionIdentity { .. })));
    }

    #[test]
    fn homomorphism_validation() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        // Z/2 -> S3 sending 1 to a transposition.
        let t = s3.find_permutation(&[1, 0, 2]).unwrap();
        let f = Homomorphism::new(z2.clone(), s3.clone(), vec![0, t]).unwrap();
        assert_eq!(f.apply(1), t);
        // Z/2 -> Z/3 sending 1 to 1 is not a homomorphism.
        let bad = Homomorphism::new(z2.clone(), z3.clone(), vec![0, 1]);
        assert!(matches!(bad, Err(GroupError::HomomorphismMul { .. })));
        // Identity must go to identity.
        let bad = Homomorphism::new(z2.clone(), z3.clone(), vec![1, 0]);
        assert!(matches!(bad, Err(GroupError::HomomorphismIdentity(1))));
        // Composition Z/2 -> S3 -> S3.
        let id = Homomorphism::identity(s3.clone());
        let c = id.compose(&f).unwrap();
        assert_eq!(c.apply(1), t);
        let tr = Homomorphism::trivial(s3.clone(), z2.clone());
        assert!((0..6).all(|g| tr.apply(g) == 0));
    }

    #[test]
    fn subgroup_extraction() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let rot = s3.centralizer(s3.find_permutation(&[1, 2, 0]).unwrap());
        let (z3, embed) = s3.subgroup(&rot).unwrap();
        assert_eq!(z3.order(), 3);
        assert!(z3.is_abelian());
        assert_eq!(embed.len(), 3);
        let t = s3.find_permutation(&[1, 0, 2]).unwrap();
        let c = s3.find_permutation(&[1, 2, 0]).unwrap();
        let not_closed = s3.subgroup(&[0, t, c]);
        assert!(not_closed.is_err());
    }

    #[test]
    fn cycle_names() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.name_of(0), "e");
        let t = s3.find_permutation(&[1, 0, 2]).unwrap();
        assert_eq!(s3.name_of(t), "(0 1)");
        assert_eq!(s3.element_by_name("(0 1)"), Some(t));
    }
}
