//! Prime ideals of `Z[α]` via Dedekind's criterion, valuations, residue
//! characters and splitting in the CM extensions `k(ζ_2m) | k`.

pub mod fp;
pub mod local;

use crate::numfield::{poly, FieldElement, NumberField};
use fp::FpPoly;
use local::LocalRing;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("period {0} is not supported for this field")]
    PeriodNotSupported(u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub residue_degree: usize,
    pub ramification_index: usize,
    /// Monic irreducible factor of `f mod p` with `P = (p, g(α))`.
    pub factor_poly: FpPoly,
    pub norm: BigInt,
    /// Position among the primes above `p` (sorted by degree, then coefficients).
    pub index: usize,
    // γ = lift(f̄/ḡ)(α): v_P(γ) = e − 1 and v_Q(γ) ≥ e_Q for the other Q | p.
    pub(crate) gamma: FieldElement,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.factor_poly == o.factor_poly
    }
}
impl Eq for PrimeIdeal {}

impl PrimeIdeal {
    pub fn norm_u64(&self) -> u64 {
        self.norm.to_u64().expect("prime norm fits in u64")
    }

    /// Table-style label: P3, P3', P3'' ...
    pub fn label(&self) -> String {
        format!("P{}{}", self.p, "'".repeat(self.index))
    }

    pub fn generator_poly(&self, field: &NumberField) -> FieldElement {
        let c: Vec<i64> = self.factor_poly.iter().map(|&x| x as i64).collect();
        field.elem_q(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// A uniformizer in `R`: `g(α)` or `g(α) + p`.
    pub fn uniformizer(&self, field: &NumberField) -> FieldElement {
        let g = self.generator_poly(field);
        if !g.is_zero() && valuation(self, &g) == 1 {
            g
        } else {
            g + field.from_int(self.p as i64)
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.is_zero() || valuation(self, x) >= 1
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(N={}, e={}, f={})", self.label(), self.norm, self.ramification_index, self.residue_degree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplittingBehavior {
    Split,
    Inert,
    Ramified,
}

impl SplittingBehavior {
    /// The Artin symbol value 1, −1 or 0.
    pub fn artin(self) -> i64 {
        match self {
            SplittingBehavior::Split => 1,
            SplittingBehavior::Inert => -1,
            SplittingBehavior::Ramified => 0,
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Rational primes up to `bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let b = bound as usize;
    let mut sieve = vec![true; b + 1];
    let mut out = Vec::new();
    for i in 2..=b {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn poly_mod_p(field: &NumberField, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = field.poly().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp::trim(&mut out);
    out
}

/// Primes above `p` by factoring the minimal polynomial modulo `p`.
pub fn factor_prime(field: &NumberField, p: u64) -> Vec<PrimeIdeal> {
    factor_prime_seeded(field, p, DEFAULT_SEED)
}

pub fn factor_prime_seeded(field: &NumberField, p: u64, seed: u64) -> Vec<PrimeIdeal> {
    assert!(is_prime_u64(p), "{p} is not prime");
    let fbar = poly_mod_p(field, p);
    let factors = fp::factor(&fbar, p, seed);
    factors
        .iter()
        .enumerate()
        .map(|(index, (g, e))| {
            let h = fp::divrem(&fbar, g, p).0;
            let gamma = field.elem_q(h.iter().map(|&c| BigRational::from_integer(c.into())).collect());
            let f = fp::deg(g).unwrap();
            PrimeIdeal {
                p,
                residue_degree: f,
                ramification_index: *e,
                factor_poly: g.clone(),
                norm: BigInt::from(p).pow(f as u32),
                index,
                gamma,
            }
        })
        .collect()
}

/// All primes of norm at most `bound`, ascending by norm.
pub fn primes_of_norm_up_to(field: &NumberField, bound: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = primes_up_to(bound)
        .into_iter()
        .flat_map(|p| factor_prime(field, p))
        .filter(|q| q.norm <= BigInt::from(bound))
        .collect();
    out.sort_by(|a, b| a.norm.cmp(&b.norm).then(a.p.cmp(&b.p)).then(a.index.cmp(&b.index)));
    out
}

fn divide_coords(x: &FieldElement, p: &BigInt) -> Option<FieldElement> {
    let pq = BigRational::from_integer(p.clone());
    if x.coords.iter().all(|c| c.is_integer() && c.to_integer().is_multiple_of(p)) {
        Some(x.scale(&(BigRational::one() / pq)))
    } else {
        None
    }
}

/// Valuation of an integral nonzero element.
fn valuation_integral(pr: &PrimeIdeal, x: &FieldElement) -> i64 {
    let pb = BigInt::from(pr.p);
    let mut y = x.clone();
    let mut k = 0;
    loop {
        match divide_coords(&(&y * &pr.gamma), &pb) {
            Some(z) => {
                y = z;
                k += 1;
            }
            None => return k,
        }
    }
}

/// `v_P(x)` for nonzero `x`.
pub fn valuation(pr: &PrimeIdeal, x: &FieldElement) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let d = x.denominator();
    let pb = BigInt::from(pr.p);
    let mut vd = 0i64;
    let mut dd = d.clone();
    while dd.is_multiple_of(&pb) {
        dd /= &pb;
        vd += 1;
    }
    let y = x.scale(&BigRational::from_integer(d));
    valuation_integral(pr, &y) - pr.ramification_index as i64 * vd
}

/// Writes integral `x ≠ 0` as `v, u` with `u = x·(γ/p)^v` integral and a `P`-unit.
/// Multiplying by `(γ/p)^2` preserves square classes at `P`.
pub fn unit_part(pr: &PrimeIdeal, x: &FieldElement) -> (i64, FieldElement) {
    let pb = BigInt::from(pr.p);
    let mut u = x.clone();
    let mut v = 0;
    while let Some(z) = divide_coords(&(&u * &pr.gamma), &pb) {
        u = z;
        v += 1;
    }
    (v, u)
}

/// Residue of an integral element in `F_q = F_p[x]/(g)`.
pub fn residue(pr: &PrimeIdeal, x: &FieldElement) -> FpPoly {
    let pb = BigInt::from(pr.p);
    let c: FpPoly = x
        .coords
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "residue of non-integral element");
            c.to_integer().mod_floor(&pb).to_u64().unwrap()
        })
        .collect();
    let mut c = c;
    fp::trim(&mut c);
    fp::rem(&c, &pr.factor_poly, pr.p)
}

/// Quadratic character of a nonzero residue in `F_q`, q odd.
pub fn residue_is_square(pr: &PrimeIdeal, r: &FpPoly) -> bool {
    assert!(pr.p != 2);
    let e = (pr.norm.to_biguint().unwrap() - 1u32) >> 1;
    let v = fp::powmod_poly(r, &e, &pr.factor_poly, pr.p);
    fp::is_one(&v)
}

/// Whether the integral `P`-unit `u` is a square in the completion.
pub fn is_local_square_unit(field: &NumberField, pr: &PrimeIdeal, u: &FieldElement) -> bool {
    if pr.p != 2 {
        return residue_is_square(pr, &residue(pr, u));
    }
    let n = 2 * pr.ramification_index + 1;
    LocalRing::new(field, pr, n).is_square(u, n)
}

/// Behaviour of `P` in `k(√d) | k` for integral `d ≠ 0`.
pub fn quadratic_behavior(field: &NumberField, pr: &PrimeIdeal, d: &FieldElement) -> SplittingBehavior {
    let (v, u) = unit_part(pr, d);
    if v % 2 == 1 {
        return SplittingBehavior::Ramified;
    }
    if pr.p != 2 {
        return if residue_is_square(pr, &residue(pr, &u)) {
            SplittingBehavior::Split
        } else {
            SplittingBehavior::Inert
        };
    }
    let e = pr.ramification_index;
    let ring = LocalRing::new(field, pr, 2 * e + 1);
    if ring.is_square(&u, 2 * e + 1) {
        SplittingBehavior::Split
    } else if ring.is_square(&u, 2 * e) {
        SplittingBehavior::Inert
    } else {
        SplittingBehavior::Ramified
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Minimal polynomial of `2cos(π/m)` over Q (ascending integer coefficients).
pub fn psi(m: u32) -> Vec<BigInt> {
    let roots: Vec<f64> = (1..m)
        .filter(|&j| gcd_u32(j, 2 * m) == 1)
        .map(|j| 2.0 * (std::f64::consts::PI * j as f64 / m as f64).cos())
        .collect();
    let mut c = vec![1.0f64];
    for r in &roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c.iter().map(|x| BigInt::from(x.round() as i64)).collect()
}

/// `2cos(π/m)` as an element of `field`, if it lies there.
pub fn lambda(field: &NumberField, m: u32) -> Option<FieldElement> {
    let ps = psi(m);
    let d = ps.len() - 1;
    let n = field.degree();
    if n % d != 0 {
        return None;
    }
    if d == 1 {
        return Some(field.from_rational(BigRational::from_integer(-ps[0].clone())));
    }
    let pq = poly::to_q(&ps);
    let roots: Vec<f64> = (1..m)
        .filter(|&j| gcd_u32(j, 2 * m) == 1)
        .map(|j| 2.0 * (std::f64::consts::PI * j as f64 / m as f64).cos())
        .collect();
    let vinv = vandermonde_inverse(field.roots_f64());
    let per = n / d;
    let mut assign = vec![0usize; n];
    let mut used = vec![0usize; d];
    lambda_search(field, &pq, &roots, &vinv, per, 0, &mut assign, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn lambda_search(
    field: &NumberField,
    pq: &[BigRational],
    roots: &[f64],
    vinv: &[Vec<f64>],
    per: usize,
    place: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<usize>,
) -> Option<FieldElement> {
    let n = assign.len();
    if place == n {
        let target: Vec<f64> = assign.iter().map(|&i| roots[i]).collect();
        let coords: Vec<f64> = vinv.iter().map(|row| row.iter().zip(&target).map(|(a, b)| a * b).sum()).collect();
        if coords.iter().any(|c| (c - c.round()).abs() > 1e-6) {
            return None;
        }
        let x = field.elem(&coords.iter().map(|c| c.round() as i64).collect::<Vec<_>>());
        let mut acc = field.zero();
        for c in pq.iter().rev() {
            acc = &acc * &x + field.from_rational(c.clone());
        }
        return if acc.is_zero() { Some(x) } else { None };
    }
    for r in 0..roots.len() {
        if used[r] == per {
            continue;
        }
        used[r] += 1;
        assign[place] = r;
        if let Some(x) = lambda_search(field, pq, roots, vinv, per, place + 1, assign, used) {
            return Some(x);
        }
        used[r] -= 1;
    }
    None
}

fn vandermonde_inverse(r: &[f64]) -> Vec<Vec<f64>> {
    let n = r.len();
    // rows: σ_i(α^k) = r_i^k; we solve V c = t, so return V^{-1}
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|k| r[i].powi(k as i32)).collect();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap()).unwrap();
        a.swap(p, c);
        let pv = a[c][c];
        for v in a[c].iter_mut() {
            *v /= pv;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                if f != 0.0 {
                    for k in 0..2 * n {
                        a[i][k] -= f * a[c][k];
                    }
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// The periods `m ≥ 2` with `2cos(π/m) ∈ k`, i.e. `k_m ⊂ k`.
pub fn admissible_periods(field: &NumberField) -> Vec<u32> {
    let n = field.degree();
    let mut out = Vec::new();
    for m in 2..=60u32 {
        let ps = psi(m);
        let d = ps.len() - 1;
        if n % d != 0 {
            continue;
        }
        if d > 1 {
            let dm = poly::discriminant(&ps).abs().pow((n / d) as u32);
            if !field.disc().abs().is_multiple_of(&dm) {
                continue;
            }
        }
        if lambda(field, m).is_some() {
            out.push(m);
        }
    }
    out
}

/// Behaviour of `P` in `k(ζ_2m) = k(√(λ_m² − 4))`.
pub fn splitting_in_cm_extension(
    field: &NumberField,
    pr: &PrimeIdeal,
    m: u32,
) -> Result<SplittingBehavior, IdealError> {
    let l = lambda(field, m).ok_or(IdealError::PeriodNotSupported(m))?;
    let d = &(&l * &l) - &field.from_int(4);
    Ok(quadratic_behavior(field, pr, &d))
}

/// Hilbert-symbol style local solvability helpers shared with `quatalg`.
pub fn local_ring(field: &NumberField, pr: &PrimeIdeal, precision: usize) -> LocalRing {
    LocalRing::new(field, pr, precision)
}

/// Exhaustive check: does `x^2 + 1` (or any monic quadratic given by `c`) have a root in `F_q`?
pub fn residue_has_root_of(pr: &PrimeIdeal, c0: i64, c1: i64) -> bool {
    let q = pr.norm_u64();
    let p = pr.p;
    let f = pr.residue_degree;
    let g = &pr.factor_poly;
    let reduce = |x: i64| x.rem_euclid(p as i64) as u64;
    for idx in 0..q {
        let mut t = idx;
        let mut elt: FpPoly = Vec::with_capacity(f);
        for _ in 0..f {
            elt.push(t % p);
            t /= p;
        }
        fp::trim(&mut elt);
        let sq = fp::mulmod_poly(&elt, &elt, g, p);
        let lin = fp::mul(&elt, &[reduce(c1)], p);
        let val = fp::add(&fp::add(&sq, &lin, p), &[reduce(c0)], p);
        if fp::rem(&val, g, p).is_empty() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k7() -> NumberField {
        NumberField::new(&[1, -2, -1, 1], &BigInt::from(49)).unwrap()
    }

    #[test]
    fn k7_primes() {
        let k = k7();
        let p2 = factor_prime(&k, 2);
        assert_eq!(p2.len(), 1);
        assert_eq!((p2[0].ramification_index, p2[0].residue_degree), (1, 3));
        let p7 = factor_prime(&k, 7);
        assert_eq!(p7.len(), 1);
        assert_eq!((p7[0].ramification_index, p7[0].norm.clone()), (3, BigInt::from(7)));
        let a = k.gen();
        let t = &(&a + &a) - &k.from_int(3);
        // 2(2α − 3) has valuation 1 at P2 and P7
        let x = t.scale_int(2);
        assert_eq!(valuation(&p2[0], &x), 1);
        assert_eq!(valuation(&p7[0], &x), 1);
    }

    #[test]
    fn k7_periods_and_splitting() {
        let k = k7();
        assert_eq!(admissible_periods(&k), vec![2, 3, 7]);
        let p2 = &factor_prime(&k, 2)[0];
        let p7 = &factor_prime(&k, 7)[0];
        assert_eq!(splitting_in_cm_extension(&k, p2, 2).unwrap(), SplittingBehavior::Ramified);
        assert_eq!(splitting_in_cm_extension(&k, p7, 2).unwrap(), SplittingBehavior::Inert);
        assert_eq!(splitting_in_cm_extension(&k, p7, 3).unwrap(), SplittingBehavior::Split);
    }

    #[test]
    fn psi_polys() {
        let to = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(psi(2), to(&[0, 1]));
        assert_eq!(psi(3), to(&[-1, 1]));
        assert_eq!(psi(7), to(&[1, -2, -1, 1]));
    }
}
