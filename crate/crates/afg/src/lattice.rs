//! Integer lattices: Hermite and Smith normal forms, membership, congruences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMatrix = Vec<Vec<BigInt>>;

fn sub_mul_row(a: &mut IMatrix, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Result rows are echelon with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`; zero rows are dropped.
pub fn hnf(mut a: IMatrix) -> IMatrix {
    a.retain(|r| r.iter().any(|x| !x.is_zero()));
    if a.is_empty() {
        return a;
    }
    let ncols = a[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        loop {
            let piv = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(piv) = piv else { break };
            a.swap(r, piv);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                sub_mul_row(&mut a, i, r, &q);
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                sub_mul_row(&mut a, i, r, &q);
            }
            r += 1;
        }
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Column index of the pivot of each HNF row.
pub fn pivots(h: &IMatrix) -> Vec<usize> {
    h.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
}

/// Membership of `v` in the lattice with HNF basis `h`.
pub fn contains(h: &IMatrix, v: &[BigInt]) -> bool {
    let mut w = v.to_vec();
    for row in h {
        let c = row.iter().position(|x| !x.is_zero()).unwrap();
        if w[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = w[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in w.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    w.iter().all(|x| x.is_zero())
}

/// Absolute determinant of a full-rank square HNF.
pub fn hnf_det(h: &IMatrix) -> BigInt {
    h.iter().enumerate().map(|(i, r)| r[i].clone()).product()
}

/// Smith normal form `S = U·A·V`; returns the diagonal and `V`.
pub fn smith(mut a: IMatrix) -> (Vec<BigInt>, IMatrix) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut v: IMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (diag, v);
            };
            a.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                for row in v.iter_mut() {
                    row.swap(t, bj);
                }
            }
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_floor(&a[t][t]);
                sub_mul_row(&mut a, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&a[t][t]);
                if q.is_zero() {
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                    continue;
                }
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            if let Some(i) = bad {
                let row_i = a[i].clone();
                for (x, y) in a[t].iter_mut().zip(row_i) {
                    *x += y;
                }
                continue;
            }
            break;
        }
        diag.push(a[t][t].abs());
    }
    (diag, v)
}

/// A system of congruences `form_k · w ≡ 0 (mod modulus_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruences {
    pub moduli: Vec<BigInt>,
    pub forms: IMatrix,
}

impl Congruences {
    pub fn satisfied(&self, w: &[BigInt]) -> bool {
        self.forms.iter().zip(&self.moduli).all(|(f, m)| {
            let s: BigInt = f.iter().zip(w).map(|(a, b)| a * b).sum();
            s.is_multiple_of(m)
        })
    }

    /// HNF basis of the solution lattice inside `Z^dim`.
    pub fn solution_lattice(&self, dim: usize) -> IMatrix {
        let k = self.forms.len();
        let mut rows = Vec::with_capacity(dim + k);
        for i in 0..dim {
            let mut r: Vec<BigInt> = self.forms.iter().map(|f| f[i].clone()).collect();
            r.extend((0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            rows.push(r);
        }
        for (c, m) in self.moduli.iter().enumerate() {
            let mut r = vec![BigInt::zero(); k + dim];
            r[c] = m.clone();
            rows.push(r);
        }
        let h = hnf(rows);
        let tail: IMatrix = h
            .into_iter()
            .filter(|r| r[..k].iter().all(|x| x.is_zero()))
            .map(|r| r[k..].to_vec())
            .collect();
        hnf(tail)
    }
}

/// Congruences cutting out a full-rank lattice `L ⊂ Z^n` (given by any basis).
pub fn congruences_of(basis: &IMatrix) -> Congruences {
    let n = basis[0].len();
    let (d, v) = smith(basis.clone());
    let mut moduli = Vec::new();
    let mut forms = Vec::new();
    for (i, di) in d.iter().enumerate() {
        if di.is_one() {
            continue;
        }
        moduli.push(di.clone());
        forms.push((0..n).map(|r| v[r][i].mod_floor(di)).collect());
    }
    Congruences { moduli, forms }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_and_membership() {
        let h = hnf(m(&[&[2, 4], &[3, 5], &[1, 1]]));
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
        let h = hnf(m(&[&[2, 0], &[1, 3]]));
        assert_eq!(hnf_det(&h), BigInt::from(6));
        assert!(contains(&h, &[BigInt::from(3), BigInt::from(3)]));
        assert!(!contains(&h, &[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn smith_congruences_round_trip() {
        let basis = m(&[&[2, 0, 0], &[1, 3, 0], &[0, 1, 4]]);
        let c = congruences_of(&basis);
        let h = hnf(basis);
        assert_eq!(c.solution_lattice(3), h);
        for x in -5..5i64 {
            for y in -5..5i64 {
                let w = [BigInt::from(x), BigInt::from(y), BigInt::from(3)];
                assert_eq!(c.satisfied(&w), contains(&h, &w));
            }
        }
    }
}
