//! Symbolic verification of the model super group laws.
//!
//! Everything happens in a free supercommutative algebra over the Gaussian
//! rationals: even symbols are central Laurent variables, odd symbols
//! anticommute and square to zero, and a canonical ordering of odd words
//! gives unique normal forms. Group points carry symbolic coordinates, so an
//! identity checked here holds for all points of all parameter families at
//! once — the laws are polynomial and the symbols are generic.
//!
//! The two model laws are `(t, o) * (t', o') = (t + t' + i o o', o + o')` on
//! the 1|1-dimensional group and `(z, w, o) * (z', w', o') =
//! (z + z', w + w' + o o', o + o')` on the 2|1-dimensional one, where `w`
//! denotes the second even coordinate (independent from `z`, not its complex
//! conjugate), together with the reflection `(t, o) -> (t, -o)` and the
//! scaling action `(z, w, o) -> (m^2 z, n^2 w, n o)` for an invertible even
//! pair `(m, n)`.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SupergeomError {
    #[error("coordinate `{component}` must be {expected}")]
    ParityMismatch { component: String, expected: &'static str },
    #[error("reflection sign must be 1 or -1, got {0}")]
    InvalidSign(i64),
}

impl SupergeomError {
    pub fn kind(&self) -> crate::ErrorKind {
        crate::ErrorKind::Validation
    }
}

/// A Gaussian rational `re + im * i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gaussian {
    pub re: Rational64,
    pub im: Rational64,
}

impl Gaussian {
    pub const fn new(re: Rational64, im: Rational64) -> Gaussian {
        Gaussian { re, im }
    }

    pub fn zero() -> Gaussian {
        Gaussian::new(Rational64::new_raw(0, 1), Rational64::new_raw(0, 1))
    }

    pub fn one() -> Gaussian {
        Gaussian::new(Rational64::new_raw(1, 1), Rational64::new_raw(0, 1))
    }

    pub fn i() -> Gaussian {
        Gaussian::new(Rational64::new_raw(0, 1), Rational64::new_raw(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(self, other: Gaussian) -> Gaussian {
        Gaussian::new(self.re + other.re, self.im + other.im)
    }

    fn mul(self, other: Gaussian) -> Gaussian {
        Gaussian::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }

    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Registry of symbol names; even symbols are unbounded, odd symbols are
/// capped at 64 (bitmask words).
#[derive(Clone, Debug, Default)]
pub struct SuperCtx {
    even_names: Vec<String>,
    odd_names: Vec<String>,
}

impl SuperCtx {
    pub fn new() -> SuperCtx {
        SuperCtx::default()
    }

    /// The generator for a named even (central, invertible) symbol.
    pub fn even_symbol(&mut self, name: &str) -> SuperElement {
        let id = match self.even_names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.even_names.push(name.to_string());
                self.even_names.len() - 1
            }
        } as u32;
        let mono: EvenMono = vec![(id, 1)];
        SuperElement::from_term(mono, 0, Gaussian::one())
    }

    /// The generator for a named odd (anticommuting, square-zero) symbol.
    pub fn odd_symbol(&mut self, name: &str) -> SuperElement {
        let id = match self.odd_names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                assert!(self.odd_names.len() < 64, "at most 64 odd symbols");
                self.odd_names.push(name.to_string());
                self.odd_names.len() - 1
            }
        };
        SuperElement::from_term(Vec::new(), 1u64 << id, Gaussian::one())
    }

    pub fn render(&self, e: &SuperElement) -> String {
        if e.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((mono, word), c) in &e.terms {
            let mut factors = Vec::new();
            for &(id, exp) in mono {
                let name = &self.even_names[id as usize];
                if exp == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{exp}"));
                }
            }
            for b in 0..64 {
                if word & (1u64 << b) != 0 {
                    factors.push(self.odd_names[b].clone());
                }
            }
            if factors.is_empty() {
                parts.push(format!("{c}"));
            } else if *c == Gaussian::one() {
                parts.push(factors.join("*"));
            } else {
                parts.push(format!("({c})*{}", factors.join("*")));
            }
        }
        parts.join(" + ")
    }
}

/// Sorted `(symbol, exponent)` pairs with nonzero exponents.
type EvenMono = Vec<(u32, i64)>;

/// An element of the free supercommutative algebra: a finite sum of terms
/// `coefficient * (even Laurent monomial) * (square-free odd word)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SuperElement {
    terms: BTreeMap<(EvenMono, u64), Gaussian>,
}

/// Number of pairs `(a, b)` with `a` in `left`, `b` in `right`, `a > b` —
/// the inversions created by concatenating two sorted odd words.
fn inversions(left: u64, right: u64) -> u32 {
    let mut count = 0;
    let mut r = right;
    while r != 0 {
        let b = r.trailing_zeros();
        count += (left >> (b + 1)).count_ones();
        r &= r - 1;
    }
    count
}

fn merge_even(a: &EvenMono, b: &EvenMono) -> EvenMono {
    let mut out: EvenMono = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            let exp = a[i].1 + b[j].1;
            if exp != 0 {
                out.push((a[i].0, exp));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl SuperElement {
    pub fn zero() -> SuperElement {
        SuperElement::default()
    }

    pub fn from_gaussian(c: Gaussian) -> SuperElement {
        SuperElement::from_term(Vec::new(), 0, c)
    }

    pub fn one() -> SuperElement {
        SuperElement::from_gaussian(Gaussian::one())
    }

    /// The Gaussian unit `i` as an algebra element.
    pub fn i_unit() -> SuperElement {
        SuperElement::from_gaussian(Gaussian::i())
    }

    fn from_term(mono: EvenMono, word: u64, c: Gaussian) -> SuperElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((mono, word), c);
        }
        SuperElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SuperElement) -> SuperElement {
        let mut terms = self.terms.clone();
        for (key, c) in &other.terms {
            let entry = terms.entry(key.clone()).or_insert_with(Gaussian::zero);
            *entry = entry.add(*c);
            if entry.is_zero() {
                terms.remove(key);
            }
        }
        SuperElement { terms }
    }

    pub fn neg(&self) -> SuperElement {
        SuperElement { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &SuperElement) -> SuperElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero();
        for ((mono_a, word_a), ca) in &self.terms {
            for ((mono_b, word_b), cb) in &other.terms {
                if word_a & word_b != 0 {
                    continue; // repeated odd symbol squares to zero
                }
                let sign = if inversions(*word_a, *word_b) % 2 == 0 {
                    Gaussian::one()
                } else {
                    Gaussian::one().neg()
                };
                let c = ca.mul(*cb).mul(sign);
                let term =
                    SuperElement::from_term(merge_even(mono_a, mono_b), word_a | word_b, c);
                out = out.add(&term);
            }
        }
        out
    }

    /// Even iff every odd word has even length; odd iff every word has odd
    /// length; `None` for mixed or zero-parity ambiguity (zero is even).
    pub fn parity(&self) -> Option<Parity> {
        if self.terms.is_empty() {
            return Some(Parity::Even);
        }
        let mut even = true;
        let mut odd = true;
        for (_, word) in self.terms.keys() {
            if word.count_ones() % 2 == 0 {
                odd = false;
            } else {
                even = false;
            }
        }
        match (even, odd) {
            (true, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A point `(t, theta)` of the 1|1-dimensional model group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPoint11 {
    pub t: SuperElement,
    pub theta: SuperElement,
}

impl SuperPoint11 {
    pub fn new(t: SuperElement, theta: SuperElement) -> Result<SuperPoint11, SupergeomError> {
        if t.parity() != Some(Parity::Even) {
            return Err(SupergeomError::ParityMismatch { component: "t".into(), expected: "even" });
        }
        if theta.parity() != Some(Parity::Odd) && !theta.is_zero() {
            return Err(SupergeomError::ParityMismatch {
                component: "theta".into(),
                expected: "odd",
            });
        }
        Ok(SuperPoint11 { t, theta })
    }

    pub fn identity() -> SuperPoint11 {
        SuperPoint11 { t: SuperElement::zero(), theta: SuperElement::zero() }
    }

    pub fn inverse(&self) -> SuperPoint11 {
        SuperPoint11 { t: self.t.neg(), theta: self.theta.neg() }
    }
}

/// A point `(z, zbar, theta)` of the 2|1-dimensional model group; `zbar` is
/// an independent even coordinate, not a complex conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPoint21 {
    pub z: SuperElement,
    pub zbar: SuperElement,
    pub theta: SuperElement,
}

impl SuperPoint21 {
    pub fn new(
        z: SuperElement,
        zbar: SuperElement,
        theta: SuperElement,
    ) -> Result<SuperPoint21, SupergeomError> {
        for (name, c) in [("z", &z), ("zbar", &zbar)] {
            if c.parity() != Some(Parity::Even) {
                return Err(SupergeomError::ParityMismatch {
                    component: name.into(),
                    expected: "even",
                });
            }
        }
        if theta.parity() != Some(Parity::Odd) && !theta.is_zero() {
            return Err(SupergeomError::ParityMismatch {
                component: "theta".into(),
                expected: "odd",
            });
        }
        Ok(SuperPoint21 { z, zbar, theta })
    }

    pub fn identity() -> SuperPoint21 {
        SuperPoint21 {
            z: SuperElement::zero(),
            zbar: SuperElement::zero(),
            theta: SuperElement::zero(),
        }
    }

    pub fn inverse(&self) -> SuperPoint21 {
        SuperPoint21 { z: self.z.neg(), zbar: self.zbar.neg(), theta: self.theta.neg() }
    }
}

/// `(t, o) * (t', o') = (t + t' + i o o', o + o')`.
pub fn mul11(p: &SuperPoint11, q: &SuperPoint11) -> SuperPoint11 {
    let cross = SuperElement::i_unit().mul(&p.theta.mul(&q.theta));
    SuperPoint11 {
        t: p.t.add(&q.t).add(&cross),
        theta: p.theta.add(&q.theta),
    }
}

/// `(z, w, o) * (z', w', o') = (z + z', w + w' + o o', o + o')`.
pub fn mul21(p: &SuperPoint21, q: &SuperPoint21) -> SuperPoint21 {
    SuperPoint21 {
        z: p.z.add(&q.z),
        zbar: p.zbar.add(&q.zbar).add(&p.theta.mul(&q.theta)),
        theta: p.theta.add(&q.theta),
    }
}

/// `(t, o) -> (t, sign * o)` for `sign` in `{1, -1}`.
pub fn reflect(p: &SuperPoint11, sign: i64) -> Result<SuperPoint11, SupergeomError> {
    match sign {
        1 => Ok(p.clone()),
        -1 => Ok(SuperPoint11 { t: p.t.clone(), theta: p.theta.neg() }),
        other => Err(SupergeomError::InvalidSign(other)),
    }
}

/// The scaling action `(z, w, o) -> (m^2 z, n^2 w, n o)` of an invertible
/// even pair `(m, n)`.
pub fn cx_act(
    mu: &SuperElement,
    mu_bar: &SuperElement,
    p: &SuperPoint21,
) -> Result<SuperPoint21, SupergeomError> {
    for (name, c) in [("mu", mu), ("mu_bar", mu_bar)] {
        if c.parity() != Some(Parity::Even) || c.is_zero() {
            return Err(SupergeomError::ParityMismatch {
                component: name.into(),
                expected: "even and invertible",
            });
        }
    }
    Ok(SuperPoint21 {
        z: mu.mul(mu).mul(&p.z),
        zbar: mu_bar.mul(mu_bar).mul(&p.zbar),
        theta: mu_bar.mul(&p.theta),
    })
}

/// One verified identity in the axiom report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
}

/// Result of [`check_model_axioms`]: the axioms the group laws must satisfy,
/// plus informational facts about which coordinate projections happen to be
/// homomorphisms (reported as computed, with no expectation attached).
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub facts: Vec<(String, bool)>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: &str, passed: bool) {
        self.checks.push(AxiomCheck { name: name.to_string(), passed });
    }
}

/// Verifies the model group laws on generic symbolic points: associativity,
/// two-sided identity and inverses, the reflection and scaling
/// automorphisms, action composition, and the algebra's own sign rules.
/// Projection multiplicativity is reported factually in `facts`.
pub fn check_model_axioms() -> AxiomReport {
    let mut ctx = SuperCtx::new();
    let mut report = AxiomReport::default();

    // Generic 1|1 points.
    let p11: Vec<SuperPoint11> = (1..=3)
        .map(|k| {
            SuperPoint11::new(ctx.even_symbol(&format!("t{k}")), ctx.odd_symbol(&format!("o{k}")))
                .expect("generic point parities")
        })
        .collect();
    // Generic 2|1 points (independent even coordinates z, w).
    let p21: Vec<SuperPoint21> = (1..=3)
        .map(|k| {
            SuperPoint21::new(
                ctx.even_symbol(&format!("z{k}")),
                ctx.even_symbol(&format!("w{k}")),
                ctx.odd_symbol(&format!("e{k}")),
            )
            .expect("generic point parities")
        })
        .collect();

    // Algebra sign rules on generic odd symbols.
    let a = ctx.odd_symbol("a");
    let b = ctx.odd_symbol("b");
    report.check("odd symbols square to zero", a.mul(&a).is_zero() && b.mul(&b).is_zero());
    report.check("odd symbols anticommute", a.mul(&b).add(&b.mul(&a)).is_zero());

    // 1|1 group law.
    let assoc11 = mul11(&mul11(&p11[0], &p11[1]), &p11[2])
        == mul11(&p11[0], &mul11(&p11[1], &p11[2]));
    report.check("1|1 law is associative", assoc11);
    let e11 = SuperPoint11::identity();
    report.check(
        "1|1 identity is two-sided",
        mul11(&e11, &p11[0]) == p11[0] && mul11(&p11[0], &e11) == p11[0],
    );
    report.check(
        "1|1 inverse (-t, -theta) is two-sided",
        mul11(&p11[0], &p11[0].inverse()) == e11 && mul11(&p11[0].inverse(), &p11[0]) == e11,
    );

    // 2|1 group law.
    let assoc21 = mul21(&mul21(&p21[0], &p21[1]), &p21[2])
        == mul21(&p21[0], &mul21(&p21[1], &p21[2]));
    report.check("2|1 law is associative", assoc21);
    let e21 = SuperPoint21::identity();
    report.check(
        "2|1 identity is two-sided",
        mul21(&e21, &p21[0]) == p21[0] && mul21(&p21[0], &e21) == p21[0],
    );
    report.check(
        "2|1 inverse (-z, -zbar, -theta) is two-sided",
        mul21(&p21[0], &p21[0].inverse()) == e21 && mul21(&p21[0].inverse(), &p21[0]) == e21,
    );

    // Reflection.
    let refl = |p: &SuperPoint11| reflect(p, -1).expect("valid sign");
    report.check(
        "reflection is an automorphism",
        refl(&mul11(&p11[0], &p11[1])) == mul11(&refl(&p11[0]), &refl(&p11[1])),
    );
    report.check("reflection is an involution", refl(&refl(&p11[0])) == p11[0]);
    report.check("reflection fixes the identity", refl(&e11) == e11);

    // Scaling action.
    let mu = ctx.even_symbol("m");
    let mu_bar = ctx.even_symbol("n");
    let nu = ctx.even_symbol("m'");
    let nu_bar = ctx.even_symbol("n'");
    let act = |m: &SuperElement, mb: &SuperElement, p: &SuperPoint21| {
        cx_act(m, mb, p).expect("even invertible scalars")
    };
    report.check(
        "scaling acts by automorphisms",
        act(&mu, &mu_bar, &mul21(&p21[0], &p21[1]))
            == mul21(&act(&mu, &mu_bar, &p21[0]), &act(&mu, &mu_bar, &p21[1])),
    );
    report.check(
        "scaling composes multiplicatively",
        act(&mu, &mu_bar, &act(&nu, &nu_bar, &p21[0]))
            == act(&mu.mul(&nu), &mu_bar.mul(&nu_bar), &p21[0]),
    );
    let one = SuperElement::one();
    report.check("unit scalars act trivially", act(&one, &one, &p21[0]) == p21[0]);

    // Projection facts, computed from the laws themselves. The odd
    // projection drops every even coordinate; the even projection drops the
    // odd one.
    let prod11 = mul11(&p11[0], &p11[1]);
    let prod21 = mul21(&p21[0], &p21[1]);
    report.facts.push((
        "odd projection of the 1|1 law is a homomorphism".into(),
        prod11.theta == p11[0].theta.add(&p11[1].theta),
    ));
    report.facts.push((
        "odd projection of the 2|1 law is a homomorphism".into(),
        prod21.theta == p21[0].theta.add(&p21[1].theta),
    ));
    report.facts.push((
        "even projection of the 1|1 law is a homomorphism".into(),
        prod11.t == p11[0].t.add(&p11[1].t),
    ));
    report.facts.push((
        "even projection of the 2|1 law is a homomorphism".into(),
        prod21.z == p21[0].z.add(&p21[1].z)
            && prod21.zbar == p21[0].zbar.add(&p21[1].zbar),
    ));

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Instant;

    #[test]
    fn grassmann_sign_rules() {
        let mut ctx = SuperCtx::new();
        let a = ctx.odd_symbol("a");
        let b = ctx.odd_symbol("b");
        let c = ctx.odd_symbol("c");
        assert!(a.mul(&a).is_zero());
        assert_eq!(a.mul(&b), b.mul(&a).neg());
        // (a b) c = a (b c) with consistent signs.
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        // A three-letter word reversed picks up (-1)^{3 choose 2} = -1.
        assert_eq!(c.mul(&b).mul(&a), a.mul(&b).mul(&c).neg());
    }

    #[test]
    fn even_symbols_are_central() {
        let mut ctx = SuperCtx::new();
        let x = ctx.even_symbol("x");
        let a = ctx.odd_symbol("a");
        assert_eq!(x.mul(&a), a.mul(&x));
        assert!(!x.mul(&x).is_zero());
    }

    #[test]
    fn worked_product_with_pure_odd_points() {
        let mut ctx = SuperCtx::new();
        let o1 = ctx.odd_symbol("o1");
        let o2 = ctx.odd_symbol("o2");
        let p = SuperPoint11::new(SuperElement::zero(), o1.clone()).unwrap();
        let q = SuperPoint11::new(SuperElement::zero(), o2.clone()).unwrap();
        let r = mul11(&p, &q);
        assert_eq!(r.t, SuperElement::i_unit().mul(&o1.mul(&o2)));
        assert_eq!(r.theta, o1.add(&o2));
        // 2|1: cross term without the Gaussian unit.
        let p = SuperPoint21::new(SuperElement::zero(), SuperElement::zero(), o1.clone()).unwrap();
        let q = SuperPoint21::new(SuperElement::zero(), SuperElement::zero(), o2.clone()).unwrap();
        let r = mul21(&p, &q);
        assert!(r.z.is_zero());
        assert_eq!(r.zbar, o1.mul(&o2));
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        let mut ctx = SuperCtx::new();
        let x = ctx.even_symbol("x");
        let a = ctx.odd_symbol("a");
        assert!(matches!(
            SuperPoint11::new(a.clone(), x.clone()),
            Err(SupergeomError::ParityMismatch { .. })
        ));
        assert!(matches!(
            SuperPoint21::new(x.clone(), x.clone(), x),
            Err(SupergeomError::ParityMismatch { .. })
        ));
        let p = SuperPoint11::identity();
        assert!(matches!(reflect(&p, 2), Err(SupergeomError::InvalidSign(2))));
    }

    #[test]
    fn axiom_report_passes_quickly() {
        let start = Instant::now();
        let report = check_model_axioms();
        assert!(report.all_passed(), "failed: {:?}", report.checks);
        assert!(start.elapsed().as_secs() < 1, "axiom check must run in under a second");
        // Projection facts, as the laws dictate: both odd projections are
        // homomorphisms, neither even projection is.
        let lookup = |name: &str| {
            report
                .facts
                .iter()
                .find(|(n, _)| n.contains(name))
                .map(|&(_, v)| v)
                .expect("fact present")
        };
        assert!(lookup("odd projection of the 1|1"));
        assert!(lookup("odd projection of the 2|1"));
        assert!(!lookup("even projection of the 1|1"));
        assert!(!lookup("even projection of the 2|1"));
    }

    #[test]
    fn rendering_is_readable() {
        let mut ctx = SuperCtx::new();
        let t = ctx.even_symbol("t");
        let a = ctx.odd_symbol("a");
        let b = ctx.odd_symbol("b");
        let e = t.add(&SuperElement::i_unit().mul(&a.mul(&b)));
        let s = ctx.render(&e);
        assert!(s.contains('t') && s.contains('a') && s.contains('b'), "{s}");
    }
}
