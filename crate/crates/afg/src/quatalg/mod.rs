//! Quaternion algebras `(a, b / k)` over totally real fields: arithmetic in
//! the basis `1, i, j, ij`, local Hilbert symbols and ramification sets.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::ideals::local::{Digit0, Elem, LocalRing};
use crate::ideals::{factor_prime, residue, residue_is_square, unit_part, valuation, PrimeIdeal};
use crate::numfield::{FieldElement, NumberField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("quaternion algebra needs nonzero a and b")]
    ZeroEntry,
    #[error("odd number of ramified places: {real} real, {finite} finite")]
    ParityViolation { real: usize, finite: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionElement {
    pub x: FieldElement,
    pub y: FieldElement,
    pub u: FieldElement,
    pub v: FieldElement,
}

impl QuaternionElement {
    pub fn coords(&self) -> [&FieldElement; 4] {
        [&self.x, &self.y, &self.u, &self.v]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        QuaternionElement { x: &self.x + &o.x, y: &self.y + &o.y, u: &self.u + &o.u, v: &self.v + &o.v }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuaternionElement { x: &self.x - &o.x, y: &self.y - &o.y, u: &self.u - &o.u, v: &self.v - &o.v }
    }

    pub fn neg(&self) -> Self {
        QuaternionElement { x: -&self.x, y: -&self.y, u: -&self.u, v: -&self.v }
    }

    /// Multiply by a central scalar.
    pub fn scale(&self, c: &FieldElement) -> Self {
        QuaternionElement { x: &self.x * c, y: &self.y * c, u: &self.u * c, v: &self.v * c }
    }

    pub fn conj(&self) -> Self {
        QuaternionElement { x: self.x.clone(), y: -&self.y, u: -&self.u, v: -&self.v }
    }

    /// Reduced trace `2x`.
    pub fn trace(&self) -> FieldElement {
        self.x.scale_int(2)
    }
}

impl fmt::Display for QuaternionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})ij", self.x, self.y, self.u, self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub field: NumberField,
    pub a: FieldElement,
    pub b: FieldElement,
}

impl QuaternionAlgebra {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroEntry);
        }
        Ok(QuaternionAlgebra { field: a.field().clone(), a, b })
    }

    pub fn elem(&self, x: FieldElement, y: FieldElement, u: FieldElement, v: FieldElement) -> QuaternionElement {
        QuaternionElement { x, y, u, v }
    }

    pub fn scalar(&self, c: FieldElement) -> QuaternionElement {
        let z = self.field.zero();
        QuaternionElement { x: c, y: z.clone(), u: z.clone(), v: z }
    }

    pub fn zero(&self) -> QuaternionElement {
        self.scalar(self.field.zero())
    }

    pub fn one(&self) -> QuaternionElement {
        self.scalar(self.field.one())
    }

    /// Basis element `e_k` of `1, i, j, ij`.
    pub fn basis(&self, k: usize) -> QuaternionElement {
        let mut c = [self.field.zero(), self.field.zero(), self.field.zero(), self.field.zero()];
        c[k] = self.field.one();
        let [x, y, u, v] = c;
        QuaternionElement { x, y, u, v }
    }

    pub fn i(&self) -> QuaternionElement {
        self.basis(1)
    }

    pub fn j(&self) -> QuaternionElement {
        self.basis(2)
    }

    pub fn mul(&self, p: &QuaternionElement, q: &QuaternionElement) -> QuaternionElement {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        let (x1, y1, u1, v1) = (&p.x, &p.y, &p.u, &p.v);
        let (x2, y2, u2, v2) = (&q.x, &q.y, &q.u, &q.v);
        let x = &(&(x1 * x2) + &(a * &(y1 * y2))) + &(&(b * &(u1 * u2)) - &(&ab * &(v1 * v2)));
        let y = &(&(x1 * y2) + &(y1 * x2)) + &(b * &(&(v1 * u2) - &(u1 * v2)));
        let u = &(&(x1 * u2) + &(u1 * x2)) + &(a * &(&(y1 * v2) - &(v1 * y2)));
        let v = &(&(x1 * v2) + &(v1 * x2)) + &(&(y1 * u2) - &(u1 * y2));
        QuaternionElement { x, y, u, v }
    }

    /// Reduced norm `x² − a y² − b u² + ab v²`.
    pub fn norm(&self, p: &QuaternionElement) -> FieldElement {
        let ab = &self.a * &self.b;
        &(&(&p.x * &p.x) - &(&self.a * &(&p.y * &p.y))) - &(&(&self.b * &(&p.u * &p.u)) - &(&ab * &(&p.v * &p.v)))
    }

    pub fn trace(&self, p: &QuaternionElement) -> FieldElement {
        p.trace()
    }

    /// Inverse of an element of nonzero norm.
    pub fn inv(&self, p: &QuaternionElement) -> Option<QuaternionElement> {
        let n = self.norm(p);
        let ni = n.inv().ok()?;
        Some(p.conj().scale(&ni))
    }

    pub fn pow(&self, p: &QuaternionElement, e: u32) -> QuaternionElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, p))
    }

    pub fn ramified_at_real_place(&self, place: usize) -> bool {
        self.a.embed_f64(place) < 0.0 && self.b.embed_f64(place) < 0.0 && {
            // certify the sign decision
            self.a.sign_at(place).unwrap() < 0 && self.b.sign_at(place).unwrap() < 0
        }
    }

    pub fn ramified_real_places(&self) -> Vec<usize> {
        (0..self.field.degree()).filter(|&i| self.ramified_at_real_place(i)).collect()
    }

    pub fn unramified_real_places(&self) -> Vec<usize> {
        (0..self.field.degree()).filter(|&i| !self.ramified_at_real_place(i)).collect()
    }

    /// Local Hilbert symbol `(a, b)_P`.
    pub fn hilbert_symbol_finite(&self, pr: &PrimeIdeal) -> i8 {
        hilbert_symbol(&self.field, pr, &self.a, &self.b)
    }

    pub fn ramification_set(&self) -> Result<RamificationData, QuatError> {
        let real_places = self.ramified_real_places();
        let mut finite_primes = Vec::new();
        for pr in candidate_primes(&self.field, &self.a, &self.b) {
            if self.hilbert_symbol_finite(&pr) == -1 {
                finite_primes.push(pr);
            }
        }
        if (real_places.len() + finite_primes.len()) % 2 == 1 {
            return Err(QuatError::ParityViolation { real: real_places.len(), finite: finite_primes.len() });
        }
        Ok(RamificationData { real_places, finite_primes })
    }

    /// Generator of the discriminant ideal: product of uniformizers is not
    /// principal in general, so this returns the prime list instead.
    pub fn discriminant_primes(&self) -> Result<Vec<PrimeIdeal>, QuatError> {
        Ok(self.ramification_set()?.finite_primes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationData {
    pub real_places: Vec<usize>,
    pub finite_primes: Vec<PrimeIdeal>,
}

impl RamificationData {
    pub fn labels(&self) -> Vec<String> {
        self.finite_primes.iter().map(|p| p.label()).collect()
    }
}

/// Two algebras over the same field are isomorphic iff their ramification
/// sets agree.
pub fn algebras_isomorphic(a: &QuaternionAlgebra, b: &QuaternionAlgebra) -> Result<bool, QuatError> {
    Ok(a.field == b.field && a.ramification_set()? == b.ramification_set()?)
}

// Multiply by the square of the denominator.
fn integralize(x: &FieldElement) -> FieldElement {
    let d = x.denominator();
    x.scale(&BigRational::from_integer(&d * &d))
}

fn rational_prime_divisors(mut n: BigInt) -> Vec<u64> {
    n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let db = BigInt::from(d);
        if n.is_multiple_of(&db) {
            out.push(d);
            while n.is_multiple_of(&db) {
                n /= &db;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime divisor fits in u64"));
    }
    out
}

/// Primes dividing `2ab` (after clearing square denominators).
pub fn candidate_primes(field: &NumberField, a: &FieldElement, b: &FieldElement) -> Vec<PrimeIdeal> {
    let ai = integralize(a);
    let bi = integralize(b);
    let prod = &(&ai * &bi).scale_int(2);
    let norm = prod.norm().to_integer();
    let mut out = Vec::new();
    for p in rational_prime_divisors(norm) {
        for pr in factor_prime(field, p) {
            if p == 2 || valuation(&pr, &ai) > 0 || valuation(&pr, &bi) > 0 {
                out.push(pr);
            }
        }
    }
    out
}

// (γ/p)^k for the prime's anti-uniformizer ratio.
fn gamma_ratio_pow(pr: &PrimeIdeal, k: i64) -> FieldElement {
    let t = pr.gamma.scale(&BigRational::new(BigInt::one(), BigInt::from(pr.p)));
    t.pow(k as u32)
}

/// Integral representative of the square class of `x` at `P` with
/// valuation 0 or 1.
fn normalize_at(pr: &PrimeIdeal, x: &FieldElement) -> (i64, FieldElement) {
    let x = integralize(x);
    let v = valuation(pr, &x);
    let even = v - v.rem_euclid(2);
    (v.rem_euclid(2), &x * &gamma_ratio_pow(pr, even))
}

/// `(a, b)_P`; residue-character formula at odd primes, bounded lifting at
/// dyadic primes.
pub fn hilbert_symbol(field: &NumberField, pr: &PrimeIdeal, a: &FieldElement, b: &FieldElement) -> i8 {
    if pr.p == 2 {
        hilbert_symbol_hensel(field, pr, a, b)
    } else {
        hilbert_symbol_odd(pr, a, b)
    }
}

pub fn hilbert_symbol_odd(pr: &PrimeIdeal, a: &FieldElement, b: &FieldElement) -> i8 {
    assert!(pr.p != 2);
    let (va, ua) = unit_part(pr, &integralize(a));
    let (vb, ub) = unit_part(pr, &integralize(b));
    let q = pr.norm_u64();
    let mut s = 1i8;
    if va % 2 == 1 && vb % 2 == 1 && ((q - 1) / 2) % 2 == 1 {
        s = -s;
    }
    if vb % 2 == 1 && !residue_is_square(pr, &residue(pr, &ua)) {
        s = -s;
    }
    if va % 2 == 1 && !residue_is_square(pr, &residue(pr, &ub)) {
        s = -s;
    }
    s
}

/// Decide solvability of `z² = a x² + b y²` over the completion by searching
/// primitive solutions modulo `P^N`, `N = 2·v_P(2) + 3`. With `v(a), v(b) ≤ 1`
/// the partial derivative along the unit coordinate has valuation at most
/// `v_P(2) + 1`, so any such solution lifts.
pub fn hilbert_symbol_hensel(field: &NumberField, pr: &PrimeIdeal, a: &FieldElement, b: &FieldElement) -> i8 {
    let (_, a1) = normalize_at(pr, a);
    let (_, b1) = normalize_at(pr, b);
    let e2 = if pr.p == 2 { pr.ramification_index } else { 0 };
    let n = 2 * e2 + 3;
    let ring = LocalRing::new(field, pr, n);
    let ae = ring.from_field(&a1);
    let be = ring.from_field(&b1);
    let form = |r: &LocalRing, xs: &[Elem]| {
        let (z, x, y) = (&xs[0], &xs[1], &xs[2]);
        let rhs = r.add(&r.mul(&ae, &r.mul(x, x)), &r.mul(&be, &r.mul(y, y)));
        r.sub(&r.mul(z, z), &rhs)
    };
    use Digit0::*;
    let cases = [[One, Any, Any], [Zero, One, Any], [Zero, Zero, One]];
    if cases.iter().any(|c| ring.solve(c, n, &form).is_some()) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::primes_of_norm_up_to;

    fn k7() -> NumberField {
        NumberField::new(&[1, -2, -1, 1], &BigInt::from(49)).unwrap()
    }

    fn k7_algebra() -> QuaternionAlgebra {
        let k = k7();
        QuaternionAlgebra::new(k.elem(&[-6, 4]), k.from_int(-1)).unwrap()
    }

    #[test]
    fn multiplication_table() {
        let a = k7_algebra();
        let (i, j) = (a.i(), a.j());
        assert_eq!(a.mul(&i, &i), a.scalar(a.a.clone()));
        assert_eq!(a.mul(&j, &j), a.scalar(a.b.clone()));
        assert_eq!(a.mul(&i, &j), a.mul(&j, &i).neg());
        assert_eq!(a.norm(&i), -&a.a);
        assert_eq!(a.norm(&a.one()), a.field.one());
        assert_eq!(a.trace(&a.one()), a.field.from_int(2));
    }

    #[test]
    fn k7_beta() {
        let a = k7_algebra();
        let k = &a.field;
        let h = k.from_rational(BigRational::new(1.into(), 2.into()));
        let beta = a.elem(h.clone(), h.clone(), h, k.zero());
        assert_eq!(a.trace(&beta), k.one());
        assert_eq!(a.norm(&beta), k.elem(&[2, -1]));
    }

    #[test]
    fn k7_ramification() {
        let a = k7_algebra();
        let r = a.ramification_set().unwrap();
        assert_eq!(r.real_places.len(), 2);
        let ps: Vec<u64> = r.finite_primes.iter().map(|p| p.p).collect();
        assert_eq!(ps, vec![2, 7]);
    }

    #[test]
    fn split_algebra() {
        let q = NumberField::rationals();
        let a = QuaternionAlgebra::new(q.one(), q.one()).unwrap();
        let r = a.ramification_set().unwrap();
        assert!(r.real_places.is_empty() && r.finite_primes.is_empty());
        let h = QuaternionAlgebra::new(q.from_int(-1), q.from_int(-1)).unwrap();
        let r = h.ramification_set().unwrap();
        assert_eq!(r.real_places, vec![0]);
        assert_eq!(r.finite_primes.len(), 1);
    }

    #[test]
    fn odd_symbol_matches_lifting() {
        let k = k7();
        let vals: Vec<FieldElement> =
            [[-6, 4, 0], [3, 0, 0], [0, 1, 0], [5, -1, 2], [-1, 0, 0], [7, 0, 0]].iter().map(|c| k.elem(c)).collect();
        for pr in primes_of_norm_up_to(&k, 30).into_iter().filter(|p| p.p != 2) {
            for a in &vals {
                for b in &vals {
                    assert_eq!(
                        hilbert_symbol_odd(&pr, a, b),
                        hilbert_symbol_hensel(&k, &pr, a, b),
                        "{} {a} {b}",
                        pr.label()
                    );
                }
            }
        }
    }

    #[test]
    fn square_rescaling_invariance() {
        let a = k7_algebra();
        let k = &a.field;
        let s = k.elem(&[1, 1, 1]);
        let a2 = QuaternionAlgebra::new(&a.a * &(&s * &s), a.b.clone()).unwrap();
        assert!(algebras_isomorphic(&a, &a2).unwrap());
        let split = QuaternionAlgebra::new(k.one(), k.from_int(-1)).unwrap();
        assert!(!algebras_isomorphic(&a, &split).unwrap());
    }

    #[test]
    fn zero_entries_rejected() {
        let q = NumberField::rationals();
        assert_eq!(QuaternionAlgebra::new(q.zero(), q.one()).unwrap_err(), QuatError::ZeroEntry);
    }

    #[test]
    fn norm_from_zero_is_zero() {
        let a = k7_algebra();
        assert!(a.norm(&a.zero()).is_zero());
    }
}
