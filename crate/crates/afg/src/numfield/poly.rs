//! Dense univariate polynomials over Z and Q, ascending coefficient order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub type QPoly = Vec<BigRational>;

pub fn to_q(f: &[BigInt]) -> QPoly {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, with the zero polynomial reported as `None`.
pub fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Remainder of `a` modulo `b` over Q. `b` must be nonzero.
pub fn rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let q = &r[dr] / &lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &q * c;
        }
        trim(&mut r);
    }
    r
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Exact quotient `a / b`, or `None` if the division leaves a remainder.
pub fn div_exact(a: &[BigRational], b: &[BigRational]) -> Option<QPoly> {
    let db = degree(b)?;
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let da = match degree(&r) {
        None => return Some(Vec::new()),
        Some(d) => d,
    };
    if da < db {
        return None;
    }
    let mut q = vec![BigRational::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            return None;
        }
        let c = &r[dr] / &b[db];
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    Some(q)
}

/// Sturm sequence f, f', -rem(f, f'), ...
pub fn sturm_sequence(f: &[BigRational]) -> Vec<QPoly> {
    let mut seq = vec![f.to_vec(), derivative(f)];
    trim(&mut seq[1]);
    loop {
        let n = seq.len();
        if degree(&seq[n - 1]).is_none() {
            seq.pop();
            break;
        }
        let r: QPoly = rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if degree(&r).is_none() {
            break;
        }
        seq.push(normalize_content(r));
    }
    seq
}

// Scaling by a positive constant keeps Sturm signs and tames coefficient growth.
fn normalize_content(p: QPoly) -> QPoly {
    let lead = p.iter().rev().find(|c| !c.is_zero()).cloned();
    match lead {
        Some(l) => {
            let s = l.abs();
            p.into_iter().map(|c| c / &s).collect()
        }
        None => p,
    }
}

fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = eval(p, x);
        let s = match v.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Greater => 1,
            Ordering::Equal => 0,
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_roots(seq: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// Cauchy bound: every root has absolute value below it.
pub fn cauchy_bound(f: &[BigRational]) -> BigRational {
    let d = degree(f).expect("zero polynomial");
    let lead = f[d].abs();
    let mut m = BigRational::zero();
    for c in &f[..d] {
        let q = c.abs() / &lead;
        if q > m {
            m = q;
        }
    }
    m + BigRational::one()
}

/// Isolating intervals `(lo, hi]` for the real roots of a squarefree `f`,
/// sorted ascending. Interior split points are never roots.
pub fn isolate_real_roots(f: &[BigRational]) -> Vec<(BigRational, BigRational)> {
    let seq = sturm_sequence(f);
    let b = cauchy_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let k = count_roots(&seq, &lo, &hi);
        if k == 0 {
            continue;
        }
        if k == 1 {
            out.push((lo, hi));
            continue;
        }
        // split off-centre if the midpoint happens to be a root
        let mut mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let mut k = 3u32;
        while eval(f, &mid).is_zero() {
            mid = &lo + (&hi - &lo) * BigRational::new(BigInt::one(), BigInt::from(2))
                + (&hi - &lo) * BigRational::new(BigInt::one(), BigInt::one() << k);
            k += 1;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Halve an isolating interval of a root of `f` until its width is below `2^-bits`.
pub fn refine_root(
    f: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
    bits: u32,
) -> (BigRational, BigRational) {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    if lo == hi {
        return (lo, hi);
    }
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let two = BigRational::from_integer(BigInt::from(2));
    let s_hi = eval(f, &hi).signum();
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let v = eval(f, &mid);
        if v.is_zero() {
            return (mid.clone(), mid);
        }
        if v.signum() == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Determinant over Q by fraction-carrying Gaussian elimination.
pub fn det_q(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Resultant of `f` and `g` via the Sylvester matrix.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let df = degree(f).unwrap_or(0);
    let dg = degree(g).unwrap_or(0);
    let size = df + dg;
    if size == 0 {
        return BigRational::one();
    }
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for r in 0..dg {
        for i in 0..=df {
            m[r][r + df - i] = f[i].clone();
        }
    }
    for r in 0..df {
        for i in 0..=dg {
            m[dg + r][r + dg - i] = g[i].clone();
        }
    }
    det_q(m)
}

/// Discriminant of a monic polynomial: (-1)^{n(n-1)/2} Res(f, f').
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let fq = to_q(f);
    let n = degree(&fq).unwrap_or(0);
    if n <= 1 {
        return BigInt::one();
    }
    let r = resultant(&fq, &derivative(&fq));
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    (r * BigRational::from_integer(BigInt::from(sign))).to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> QPoly {
        c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn discriminants() {
        let k7: Vec<BigInt> = [1, -2, -1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(discriminant(&k7), BigInt::from(49));
        let q2: Vec<BigInt> = [-2, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(discriminant(&q2), BigInt::from(8));
    }

    #[test]
    fn sturm_counts_roots() {
        // (x-1)(x-2)(x+3)
        let f = qp(&[6, -7, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn exact_rational_roots_are_kept() {
        let f = qp(&[0, -1, 0, 1]); // x^3 - x
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
    }
}
