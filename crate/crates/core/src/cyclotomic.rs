//! Exact arithmetic with sums of roots of unity and with the cyclotomic
//! field `Q(zeta_N)`.
//!
//! Dimension formulas here are averages of roots of unity that must come out
//! as nonnegative integers. Rather than trusting floating point, sums are
//! accumulated as formal combinations of `zeta_N^e` and reduced modulo the
//! cyclotomic polynomial `Phi_N`; a value is an integer precisely when the
//! reduced form is a constant. The same polynomials give field arithmetic for
//! the exact linear algebra in the twisted group algebra center.

use crate::phase::Phase;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Ascending coefficients of the cyclotomic polynomial `Phi_n`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut cache: HashMap<u64, Vec<BigInt>> = HashMap::new();
    phi_cached(n, &mut cache)
}

fn phi_cached(n: u64, cache: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut result = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = phi_cached(d, cache);
            result = poly_div_exact(&result, &phi_d);
        }
    }
    cache.insert(n, result.clone());
    result
}

/// Exact division of integer polynomials (panics on nonzero remainder,
/// which cannot happen for the cyclotomic recursion).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = degree(num);
    let dd = degree(den);
    assert!(dd <= dn, "division by higher-degree polynomial");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    let lead = den[dd].clone();
    for k in (0..=dn - dd).rev() {
        let c = &rem[k + dd] / &lead;
        if !(&rem[k + dd] % &lead).is_zero() {
            panic!("non-exact polynomial division");
        }
        quot[k] = c.clone();
        for i in 0..=dd {
            let d = &c * &den[i];
            rem[k + i] -= d;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

fn degree(p: &[BigInt]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// A formal rational combination of `N`-th roots of unity.
#[derive(Clone, Debug)]
pub struct RootSum {
    n: u64,
    /// Coefficient of `zeta_N^e` at index `e`.
    coeffs: Vec<BigRational>,
}

impl RootSum {
    pub fn new(n: u64) -> RootSum {
        assert!(n >= 1);
        RootSum { n, coeffs: vec![BigRational::zero(); n as usize] }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Adds `w * e(phase)`. The phase order must divide `N`.
    pub fn add(&mut self, phase: Phase, w: BigRational) {
        let den = phase.denom() as u64;
        assert!(self.n % den == 0, "phase order {den} does not divide modulus {}", self.n);
        let e = (phase.numer() as u64 * (self.n / den)) % self.n;
        self.coeffs[e as usize] += w;
    }

    pub fn add_one(&mut self, phase: Phase) {
        self.add(phase, BigRational::one());
    }

    /// Canonical coefficients modulo `Phi_N`, length `deg Phi_N`.
    pub fn reduced(&self) -> Vec<BigRational> {
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.n)
            .into_iter()
            .map(BigRational::from)
            .collect();
        let d = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() < d {
            rem.resize(d, BigRational::zero());
        }
        for k in (d..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = rem[k].clone(); // Phi is monic
            for i in 0..=d {
                let t = &c * &phi[i];
                rem[k - d + i] -= t;
            }
        }
        rem.truncate(d);
        rem.resize(d, BigRational::zero());
        rem
    }

    /// The exact rational value if this sum is rational, i.e. reduces to a
    /// constant modulo `Phi_N`.
    pub fn rational_value(&self) -> Option<BigRational> {
        let red = self.reduced();
        if red.iter().skip(1).all(|c| c.is_zero()) {
            Some(red[0].clone())
        } else {
            None
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * (e as f64) / (self.n as f64);
            let w = c.numer().to_string().parse::<f64>().unwrap()
                / c.denom().to_string().parse::<f64>().unwrap();
            z += Complex64::new(theta.cos(), theta.sin()) * w;
        }
        z
    }
}

/// An element of `Q(zeta_N)` in the power basis `1, zeta, ..., zeta^(phi(N)-1)`.
///
/// Field operations reduce modulo `Phi_N`; inversion runs the extended
/// Euclidean algorithm in `Q[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CycNum {
    n: u64,
    coeffs: Vec<BigRational>,
}

/// Shared modulus data for `CycNum` arithmetic.
#[derive(Clone, Debug)]
pub struct CycField {
    n: u64,
    phi: Vec<BigRational>,
}

impl CycField {
    pub fn new(n: u64) -> CycField {
        let phi = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from)
            .collect();
        CycField { n, phi }
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(&self) -> CycNum {
        CycNum { n: self.n, coeffs: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycNum {
        let mut x = self.zero();
        if self.degree() > 0 {
            x.coeffs[0] = BigRational::one();
        }
        x
    }

    /// `e(phase)` as a field element; the phase order must divide `N`.
    pub fn root(&self, phase: Phase) -> CycNum {
        let den = phase.denom() as u64;
        assert!(self.n % den == 0, "phase order {den} does not divide modulus {}", self.n);
        let e = (phase.numer() as u64 * (self.n / den)) % self.n;
        let mut raw = vec![BigRational::zero(); e as usize + 1];
        raw[e as usize] = BigRational::one();
        CycNum { n: self.n, coeffs: self.reduce(raw) }
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        if raw.len() < d {
            raw.resize(d, BigRational::zero());
        }
        for k in (d..raw.len()).rev() {
            if raw[k].is_zero() {
                continue;
            }
            let c = raw[k].clone();
            for i in 0..=d {
                let t = &c * &self.phi[i];
                raw[k - d + i] -= t;
            }
        }
        raw.truncate(d);
        raw.resize(d, BigRational::zero());
        raw
    }

    pub fn add(&self, a: &CycNum, b: &CycNum) -> CycNum {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycNum { n: self.n, coeffs }
    }

    pub fn sub(&self, a: &CycNum, b: &CycNum) -> CycNum {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CycNum { n: self.n, coeffs }
    }

    pub fn mul(&self, a: &CycNum, b: &CycNum) -> CycNum {
        let d = self.degree();
        let mut raw = vec![BigRational::zero(); 2 * d.max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                raw[i + j] += t;
            }
        }
        CycNum { n: self.n, coeffs: self.reduce(raw) }
    }

    pub fn neg(&self, a: &CycNum) -> CycNum {
        CycNum { n: self.n, coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    /// Multiplicative inverse via extended Euclid on `(a, Phi_N)`.
    /// Panics on zero.
    pub fn inv(&self, a: &CycNum) -> CycNum {
        assert!(!a.is_zero(), "inverse of zero in Q(zeta)");
        // Invariants: r0 = s0 * a (mod Phi), r1 = s1 * a (mod Phi).
        let mut r0: Vec<BigRational> = self.phi.clone();
        let mut r1: Vec<BigRational> = a.coeffs.clone();
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        trim(&mut r1);
        while !r1.is_empty() && poly_deg(&r1) > 0 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s;
            trim(&mut r1);
        }
        assert!(!r1.is_empty() && !r1[0].is_zero(), "element is not invertible");
        let c = r1[0].clone();
        let coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        CycNum { n: self.n, coeffs: self.reduce(coeffs) }
    }
}

impl CycNum {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * (e as f64) / (self.n as f64);
            let w = c.numer().to_string().parse::<f64>().unwrap()
                / c.denom().to_string().parse::<f64>().unwrap();
            z += Complex64::new(theta.cos(), theta.sin()) * w;
        }
        z
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.len() == 1 && p[0].is_zero() {
        p.clear();
    }
}

fn poly_deg(p: &[BigRational]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = poly_deg(den);
    let mut rem = num.to_vec();
    let dn = poly_deg(&rem);
    if dn < dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); dn - dd + 1];
    let lead = den[dd].clone();
    for k in (0..=dn - dd).rev() {
        let c = &rem[k + dd] / &lead;
        quot[k] = c.clone();
        for i in 0..=dd {
            let t = &c * &den[i];
            rem[k + i] -= t;
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] += t;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}
