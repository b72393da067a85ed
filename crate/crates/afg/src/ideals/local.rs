//! Arithmetic in `R / p^M R` with membership tests for `P^k`, used for
//! digit-by-digit lifting of solutions modulo `P^N`.

use super::{fp, PrimeIdeal};
use crate::lattice;
use crate::numfield::{FieldElement, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Constraint on the first (`P^0`) digit of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Digit0 {
    /// The variable is exactly 1.
    One,
    /// The variable lies in `P`.
    Zero,
    /// The variable is a `P`-unit.
    Unit,
    Any,
}

pub type Elem = Vec<u64>;

pub struct LocalRing {
    pub p: u64,
    pub precision: usize,
    n: usize,
    modulus: u64,
    fpoly: Vec<u64>,
    // hnf[k]: upper triangular basis of P^k reduced mod `modulus`
    hnf: Vec<Vec<Vec<u64>>>,
    digits: Vec<Elem>,
    pi_pows: Vec<Elem>,
}

impl LocalRing {
    /// Ring able to decide membership in `P^k` for `k ≤ precision`.
    pub fn new(field: &NumberField, pr: &PrimeIdeal, precision: usize) -> Self {
        let n = field.degree();
        let p = pr.p;
        let e = pr.ramification_index;
        let m_exp = precision.div_ceil(e).max(1) as u32;
        let modulus = p.checked_pow(m_exp).expect("local modulus overflow");
        let mb = BigInt::from(modulus);
        let fpoly: Vec<u64> = field.poly().iter().map(|c| c.mod_floor(&mb).to_u64().unwrap()).collect();
        let g = pr.generator_poly(field);
        let mut hnf = Vec::with_capacity(precision + 1);
        for k in 0..=precision {
            let mut gens: Vec<Vec<BigInt>> = Vec::new();
            let mut gj = field.one();
            for j in 0..=k {
                let scale = BigInt::from(p).pow((k - j) as u32);
                let mut t = gj.clone();
                for _ in 0..n {
                    gens.push(t.coords.iter().map(|c| c.to_integer() * &scale).collect());
                    t = &t * &field.gen();
                }
                gj = &gj * &g;
            }
            for i in 0..n {
                let mut r = vec![BigInt::zero(); n];
                r[i] = mb.clone();
                gens.push(r);
            }
            let h = lattice::hnf(gens);
            assert_eq!(h.len(), n);
            // diagonal entries may equal the modulus itself, so they stay unreduced
            hnf.push(
                h.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.iter()
                            .enumerate()
                            .map(|(j, c)| if i == j { c.to_u64().unwrap() } else { c.mod_floor(&mb).to_u64().unwrap() })
                            .collect()
                    })
                    .collect(),
            );
        }
        let f = pr.residue_degree;
        let q = pr.norm_u64();
        let digits: Vec<Elem> = (0..q)
            .map(|mut idx| {
                let mut d = vec![0u64; n];
                for slot in d.iter_mut().take(f) {
                    *slot = idx % p;
                    idx /= p;
                }
                d
            })
            .collect();
        let mut ring = LocalRing { p, precision, n, modulus, fpoly, hnf, digits, pi_pows: Vec::new() };
        let pi = ring.from_field(&pr.uniformizer(field));
        let mut pows = vec![ring.one()];
        for k in 1..=precision {
            let next = ring.mul(&pows[k - 1], &pi);
            pows.push(next);
        }
        ring.pi_pows = pows;
        ring
    }

    pub fn one(&self) -> Elem {
        let mut v = vec![0; self.n];
        v[0] = 1 % self.modulus;
        v
    }

    pub fn from_field(&self, x: &FieldElement) -> Elem {
        let mb = BigInt::from(self.modulus);
        x.coords
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "local ring element must be integral");
                c.to_integer().mod_floor(&mb).to_u64().unwrap()
            })
            .collect()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + self.modulus - y) % self.modulus).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.n;
        let m = self.modulus;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + fp::mulmod(x, y, m)) % m;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let t = fp::mulmod(top, self.fpoly[i], m);
                prod[k - n + i] = (prod[k - n + i] + m - t) % m;
            }
        }
        prod.truncate(n);
        prod
    }

    pub fn in_power(&self, x: &Elem, k: usize) -> bool {
        let m = self.modulus;
        let mut w = x.clone();
        for (i, row) in self.hnf[k].iter().enumerate() {
            let d = row[i];
            if w[i] % d != 0 {
                return false;
            }
            let q = w[i] / d;
            for (c, r) in w.iter_mut().zip(row) {
                *c = (*c + m - fp::mulmod(q, *r, m)) % m;
            }
        }
        true
    }

    /// Whether the element is a square modulo `P^k` with a unit root.
    pub fn is_square(&self, u: &FieldElement, k: usize) -> bool {
        let ue = self.from_field(u);
        self.solve(&[Digit0::Unit], k, &|r, xs| r.sub(&r.mul(&xs[0], &xs[0]), &ue)).is_some()
    }

    /// Depth-first digit lifting: find values for the variables, subject to
    /// the first-digit constraints, with `form(values) ∈ P^target`.
    pub fn solve(
        &self,
        level0: &[Digit0],
        target: usize,
        form: &dyn Fn(&LocalRing, &[Elem]) -> Elem,
    ) -> Option<Vec<Elem>> {
        assert!(target <= self.precision);
        let mut xs: Vec<Elem> = vec![vec![0; self.n]; level0.len()];
        if self.dfs(level0, target, form, 0, &mut xs) {
            Some(xs)
        } else {
            None
        }
    }

    fn dfs(
        &self,
        level0: &[Digit0],
        target: usize,
        form: &dyn Fn(&LocalRing, &[Elem]) -> Elem,
        level: usize,
        xs: &mut Vec<Elem>,
    ) -> bool {
        if level == target {
            return true;
        }
        let options: Vec<Vec<usize>> = level0
            .iter()
            .map(|c| match (c, level) {
                (Digit0::One, 0) => vec![1],
                (Digit0::One, _) => vec![0],
                (Digit0::Zero, 0) => vec![0],
                (Digit0::Unit, 0) => (1..self.digits.len()).collect(),
                _ => (0..self.digits.len()).collect(),
            })
            .collect();
        let saved = xs.clone();
        let mut choice = vec![0usize; level0.len()];
        loop {
            for (v, &c) in choice.iter().enumerate() {
                let d = &self.digits[options[v][c]];
                let term = self.mul(d, &self.pi_pows[level]);
                xs[v] = self.add(&saved[v], &term);
            }
            if self.in_power(&form(self, xs), level + 1) && self.dfs(level0, target, form, level + 1, xs) {
                return true;
            }
            // odometer over digit choices
            let mut v = 0;
            loop {
                if v == choice.len() {
                    *xs = saved;
                    return false;
                }
                choice[v] += 1;
                if choice[v] < options[v].len() {
                    break;
                }
                choice[v] = 0;
                v += 1;
            }
        }
    }
}
