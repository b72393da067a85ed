//! Polynomials over F_p (p < 2^63), ascending coefficients, and their
//! factorization: squarefree decomposition, distinct-degree and
//! Cantor–Zassenhaus equal-degree splitting.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type FpPoly = Vec<u64>;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    powmod(a, p - 2, p)
}

pub fn trim(f: &mut FpPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn reduce(f: &[i64], p: u64) -> FpPoly {
    let mut out: FpPoly = f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    trim(&mut out);
    out
}

pub fn deg(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn is_one(f: &[u64]) -> bool {
    deg(f) == Some(0) && f[0] == 1
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let p128 = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p128;
        }
    }
    let mut out: FpPoly = out.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = deg(b).expect("division by zero polynomial");
    let lead_inv = inv(b[db], p);
    let mut r = a.to_vec();
    trim(&mut r);
    let mut q = vec![0; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let c = mulmod(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = c;
        for i in 0..=db {
            r[i + shift] = (r[i + shift] + p - mulmod(c, b[i], p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(f: &[u64], p: u64) -> FpPoly {
    match deg(f) {
        None => Vec::new(),
        Some(d) => {
            let li = inv(f[d], p);
            f[..=d].iter().map(|&c| mulmod(c, li, p)).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(f: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = f.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
    trim(&mut out);
    out
}

pub fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod_poly(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = mulmod_poly(&acc, &acc, m, p);
        if e.bit(i) {
            acc = mulmod_poly(&acc, &b, m, p);
        }
    }
    acc
}

fn x_poly() -> FpPoly {
    vec![0, 1]
}

/// Evaluate at an element of F_p.
pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, p) + c) % p)
}

// p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &[u64], p: u64) -> FpPoly {
    f.iter().step_by(p as usize).copied().collect()
}

/// Squarefree decomposition of a monic polynomial: pairs (g, multiplicity).
pub fn squarefree_decomposition(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let f = monic(f, p);
    let mut out = Vec::new();
    if deg(&f).unwrap_or(0) == 0 {
        return out;
    }
    let df = derivative(&f, p);
    if df.is_empty() {
        for (g, m) in squarefree_decomposition(&pth_root(&f, p), p) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = gcd(&f, &df, p);
    let mut w = divrem(&f, &c, p).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(&w, &c, p);
        let fac = divrem(&w, &y, p).0;
        if deg(&fac).unwrap_or(0) > 0 {
            out.push((monic(&fac, p), i));
        }
        w = y;
        c = divrem(&c, &w, p).0;
        i += 1;
    }
    if deg(&c).unwrap_or(0) > 0 {
        for (g, m) in squarefree_decomposition(&pth_root(&c, p), p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs (product of all irreducible factors of degree d, d).
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let pe = BigUint::from(p);
    let mut h = rem(&x_poly(), &f, p);
    let mut d = 0;
    while let Some(df) = deg(&f) {
        if df == 0 {
            break;
        }
        d += 1;
        if 2 * d > df {
            out.push((f.clone(), df));
            break;
        }
        h = powmod_poly(&h, &pe, &f, p);
        let g = gcd(&sub(&h, &x_poly(), p), &f, p);
        if !is_one(&g) {
            out.push((g.clone(), d));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    out
}

/// Degrees of the irreducible factors of a squarefree polynomial.
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        let k = deg(&g).unwrap() / d;
        out.extend(std::iter::repeat_n(d, k));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, len: usize, p: u64) -> FpPoly {
    let mut r: FpPoly = (0..len).map(|_| rng.gen_range(0..p)).collect();
    trim(&mut r);
    r
}

/// Split a squarefree product of irreducibles of common degree `d`.
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![monic(f, p)];
    }
    loop {
        let a = random_poly(rng, n, p);
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g = gcd(&a, f, p);
        let cand = if !is_one(&g) {
            g
        } else if p == 2 {
            // absolute trace a + a^2 + ... + a^{2^{d-1}} into F_2
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                s = mulmod_poly(&s, &s, f, p);
                t = add(&t, &s, p);
            }
            gcd(&t, f, p)
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
            let b = powmod_poly(&a, &e, f, p);
            gcd(&sub(&b, &[1], p), f, p)
        };
        let dc = deg(&cand).unwrap_or(0);
        if dc > 0 && dc < n {
            let other = divrem(f, &cand, p).0;
            let mut out = equal_degree(&cand, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

/// Complete factorization of a nonzero polynomial into monic irreducibles
/// with multiplicities, sorted by degree then coefficients.
pub fn factor(f: &[u64], p: u64, seed: u64) -> Vec<(FpPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by_key(|(g, _)| (g.len(), g.iter().rev().copied().collect::<Vec<u64>>()));
    out
}

/// Irreducibility test by distinct-degree factorization.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(n) = deg(f) else { return false };
    if n == 0 {
        return false;
    }
    let sf = squarefree_decomposition(f, p);
    sf.len() == 1 && sf[0].1 == 1 && distinct_degree(f, p).len() == 1 && distinct_degree(f, p)[0].1 == n
}

pub fn is_zero_poly(f: &[u64]) -> bool {
    f.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        let f = factor(&[1, 0, 1], 5, 1);
        assert_eq!(f, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        assert_eq!(factor(&[1, 0, 1], 3, 1), vec![(vec![1, 0, 1], 1)]);
        assert_eq!(factor(&[0, 1], 7, 1), vec![(vec![0, 1], 1)]);
        // (x+1)^2 over F_2
        assert_eq!(factor(&[1, 0, 1], 2, 1), vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn pth_powers() {
        // x^6 + 1 = (x^2+1)^3 = (x+1)^6 over F_3? no: (x^2+1)^3
        let f = factor(&[1, 0, 0, 0, 0, 0, 1], 3, 9);
        assert_eq!(f, vec![(vec![1, 0, 1], 3)]);
    }
}
