//! Short vectors of a positive definite form on `Z^d`: LLL on the real
//! embedding of the basis, then Fincke–Pohst.

/// Row-vector lattice basis in `R^m`.
pub struct RealLattice {
    pub basis: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL with δ = 0.99; returns the unimodular transform `U` (rows are the
/// new basis vectors in old coordinates).
pub fn lll(basis: &mut [Vec<f64>]) -> Vec<Vec<i64>> {
    let d = basis.len();
    let mut u: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    if d == 0 {
        return u;
    }
    let gso = |b: &[Vec<f64>]| {
        let mut bs: Vec<Vec<f64>> = Vec::with_capacity(d);
        let mut mu = vec![vec![0.0; d]; d];
        let mut nrm = vec![0.0; d];
        for i in 0..d {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = dot(&b[i], &bs[j]) / nrm[j];
                for (x, y) in v.iter_mut().zip(&bs[j]) {
                    *x -= mu[i][j] * y;
                }
            }
            nrm[i] = dot(&v, &v);
            bs.push(v);
        }
        (mu, nrm)
    };
    let (mut mu, _) = gso(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < d {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let (bj, uj) = (basis[j].clone(), u[j].clone());
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                for (x, y) in u[k].iter_mut().zip(&uj) {
                    *x -= q as i64 * y;
                }
                let (m, _) = gso(basis);
                mu = m;
            }
        }
        let (m, nrm) = gso(basis);
        mu = m;
        if nrm[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * nrm[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            u.swap(k, k - 1);
            mu = gso(basis).0;
            k = (k - 1).max(1);
        }
    }
    u
}

/// All nonzero `w ∈ Z^d` with `|Σ w_k b_k|² ≤ bound`, one of each `±w`.
pub fn short_vectors(lat: &RealLattice, bound: f64) -> Vec<Vec<i64>> {
    let d = lat.basis.len();
    let mut red = lat.basis.clone();
    let u = lll(&mut red);
    // Gram matrix of the reduced basis and its Cholesky-type decomposition
    let g: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| dot(&red[i], &red[j])).collect()).collect();
    let mut q = g.clone();
    for i in 0..d {
        for j in i + 1..d {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..d {
            for l in k..d {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; d];
    let mut tail = vec![0.0f64; d + 1];
    fp_rec(&q, d, d, bound, &mut x, &mut tail, &mut out);
    // map back to the original coordinates and keep one sign
    let mut res: Vec<Vec<i64>> = out
        .into_iter()
        .filter(|v: &Vec<i64>| v.iter().any(|&c| c != 0))
        .map(|v| {
            let mut w = vec![0i64; d];
            for (k, &c) in v.iter().enumerate() {
                if c != 0 {
                    for (wi, ui) in w.iter_mut().zip(&u[k]) {
                        *wi += c * ui;
                    }
                }
            }
            if w.iter().find(|&&c| c != 0).map_or(false, |&c| c < 0) {
                w.iter_mut().for_each(|c| *c = -*c);
            }
            w
        })
        .collect();
    res.sort();
    res.dedup();
    res
}

// q holds the Cholesky factors: q[i][i] diagonal, q[i][j] (j > i) the mu's.
fn fp_rec(
    q: &[Vec<f64>],
    d: usize,
    level: usize,
    bound: f64,
    x: &mut Vec<i64>,
    tail: &mut Vec<f64>,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let c: f64 = -(i + 1..d).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let rem = bound - tail[level];
    if rem < -1e-12 {
        return;
    }
    let r = (rem.max(0.0) / q[i][i]).sqrt();
    let lo = (c - r - 1e-9).ceil() as i64;
    let hi = (c + r + 1e-9).floor() as i64;
    // top level: only half the range, the sign is restored later
    let lo = if (i + 1..d).all(|j| x[j] == 0) { lo.max(0) } else { lo };
    for v in lo..=hi {
        x[i] = v;
        let t = v as f64 - c;
        tail[i] = tail[level] + q[i][i] * t * t;
        if tail[i] <= bound + 1e-9 {
            fp_rec(q, d, i, bound, x, tail, out);
        }
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_in_z2() {
        let lat = RealLattice { basis: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        // |v|² ≤ 2: (1,0),(0,1),(1,1),(1,-1) up to sign
        assert_eq!(short_vectors(&lat, 2.0).len(), 4);
    }

    #[test]
    fn skewed_basis_matches_brute_force() {
        let b = vec![vec![1.0, 0.0, 0.0], vec![7.3, 1.0, 0.0], vec![-3.1, 5.2, 0.7]];
        let lat = RealLattice { basis: b.clone() };
        let found = short_vectors(&lat, 4.0);
        let mut brute = Vec::new();
        for a in -150i64..=150 {
            for c in -20i64..=20 {
                for e in -4i64..=4 {
                    let w = [a, c, e];
                    if w == [0, 0, 0] {
                        continue;
                    }
                    let v: Vec<f64> = (0..3).map(|k| (0..3).map(|i| w[i] as f64 * b[i][k]).sum()).collect();
                    if dot(&v, &v) <= 4.0 {
                        let mut w = w.to_vec();
                        if w.iter().find(|&&x| x != 0).unwrap() < &0 {
                            w.iter_mut().for_each(|x| *x = -*x);
                        }
                        brute.push(w);
                    }
                }
            }
        }
        brute.sort();
        brute.dedup();
        assert_eq!(found, brute);
    }
}
