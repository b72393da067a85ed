//! Orders in quaternion algebras over class-number-one fields: free
//! `R`-bases, their `Z`-lattices in HNF, discriminants, maximality and the
//! maximal-order constructions (the `½(x + yi + j)` route and the bounded
//! denominator search).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::ideals::{factor_prime, valuation, PrimeIdeal};
use crate::lattice::{self, Congruences, IMatrix};
use crate::numfield::{FieldElement, NumberField};
use crate::quatalg::{candidate_primes, QuatError, QuaternionAlgebra, QuaternionElement, RamificationData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("a and b must be integral")]
    NotIntegral,
    #[error("basis does not span a rank-4 lattice")]
    Degenerate,
    #[error("basis is not closed under multiplication")]
    NotClosed,
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("constructed order is not maximal")]
    MaximalityCheckFailed,
    #[error("search exhausted after {tried} candidates")]
    SearchExhausted { tried: usize },
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// Rational coordinates `[x(n), y(n), u(n), v(n)]` in the power basis.
pub fn z_coords(q: &QuaternionElement) -> Vec<BigRational> {
    q.coords().iter().flat_map(|c| c.coords.iter().cloned()).collect()
}

pub fn from_z_coords(alg: &QuaternionAlgebra, w: &[BigRational]) -> QuaternionElement {
    let n = alg.field.degree();
    let c: Vec<FieldElement> = (0..4).map(|k| alg.field.elem_q(w[k * n..(k + 1) * n].to_vec())).collect();
    alg.elem(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())
}

pub fn from_int_coords(alg: &QuaternionAlgebra, w: &[i64], denominator: &FieldElement) -> QuaternionElement {
    let wq: Vec<BigRational> = w.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    let q = from_z_coords(alg, &wq);
    q.scale(&denominator.inv().expect("nonzero denominator"))
}

#[derive(Clone, Debug)]
pub struct QuaternionOrder {
    pub algebra: QuaternionAlgebra,
    pub r_basis: Vec<QuaternionElement>,
    /// Common denominator of the `Z`-basis.
    pub denominator: BigInt,
    /// HNF of `denominator · O` inside `Z^{4n}`.
    pub hnf: IMatrix,
}

impl PartialEq for QuaternionOrder {
    fn eq(&self, o: &Self) -> bool {
        self.algebra == o.algebra && self.denominator == o.denominator && self.hnf == o.hnf
    }
}

impl fmt::Display for QuaternionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "denominator {}", self.denominator)?;
        for row in &self.hnf {
            let r: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", r.join(" "))?;
        }
        Ok(())
    }
}

fn lcm_denominators(vs: &[Vec<BigRational>]) -> BigInt {
    vs.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn scaled_int(v: &[BigRational], d: &BigInt) -> Vec<BigInt> {
    v.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect()
}

impl QuaternionOrder {
    /// The `R`-span of a basis; checks rank, that `1` lies in it and closure
    /// under multiplication.
    pub fn from_r_basis(algebra: &QuaternionAlgebra, r_basis: Vec<QuaternionElement>) -> Result<Self, OrderError> {
        let lat = Self::lattice_only(algebra, r_basis)?;
        if !lat.contains(&algebra.one()) {
            return Err(OrderError::NotClosed);
        }
        for e in &lat.r_basis {
            for f in &lat.r_basis {
                if !lat.contains(&algebra.mul(e, f)) {
                    return Err(OrderError::NotClosed);
                }
            }
        }
        Ok(lat)
    }

    // R-lattice without the ring checks.
    fn lattice_only(algebra: &QuaternionAlgebra, r_basis: Vec<QuaternionElement>) -> Result<Self, OrderError> {
        let n = algebra.field.degree();
        let alpha = algebra.field.gen();
        let mut vecs = Vec::with_capacity(4 * n);
        for e in &r_basis {
            let mut t = algebra.field.one();
            for _ in 0..n {
                vecs.push(z_coords(&e.scale(&t)));
                t = &t * &alpha;
            }
        }
        let d = lcm_denominators(&vecs);
        let rows: IMatrix = vecs.iter().map(|v| scaled_int(v, &d)).collect();
        let hnf = lattice::hnf(rows);
        if hnf.len() != 4 * n {
            return Err(OrderError::Degenerate);
        }
        Ok(QuaternionOrder { algebra: algebra.clone(), r_basis, denominator: d, hnf })
    }

    pub fn contains(&self, q: &QuaternionElement) -> bool {
        let w: Vec<BigRational> = z_coords(q).iter().map(|c| c * BigRational::from_integer(self.denominator.clone())).collect();
        if w.iter().any(|c| !c.is_integer()) {
            return false;
        }
        let w: Vec<BigInt> = w.iter().map(|c| c.to_integer()).collect();
        lattice::contains(&self.hnf, &w)
    }

    pub fn contains_order(&self, o: &QuaternionOrder) -> bool {
        o.z_basis().iter().all(|q| self.contains(q))
    }

    /// `Z`-basis elements (rows of the HNF divided by the denominator).
    pub fn z_basis(&self) -> Vec<QuaternionElement> {
        let d = BigRational::from_integer(self.denominator.clone());
        self.hnf
            .iter()
            .map(|row| {
                let w: Vec<BigRational> = row.iter().map(|c| BigRational::from_integer(c.clone()) / &d).collect();
                from_z_coords(&self.algebra, &w)
            })
            .collect()
    }

    /// `det(tr(e_i e_j))` for the `R`-basis.
    pub fn discriminant(&self) -> FieldElement {
        let m: Vec<Vec<FieldElement>> = self
            .r_basis
            .iter()
            .map(|e| self.r_basis.iter().map(|f| self.algebra.mul(e, f).trace()).collect())
            .collect();
        det_field(&m, &self.algebra.field)
    }

    pub fn is_maximal(&self, ram: &RamificationData) -> bool {
        let d = self.discriminant();
        let target: Vec<(PrimeIdeal, i64)> = ram.finite_primes.iter().map(|p| (p.clone(), 2)).collect();
        ideal_equals(&d, &target)
    }

    /// Congruences on integer vectors `w` describing `{w : w/δ ∈ O}` where the
    /// ambient element is `(1/δ)(Σ w)` in the power-basis layout.
    pub fn membership_congruences(&self, delta: &FieldElement) -> Congruences {
        lattice::congruences_of(&self.ambient_lattice(delta))
    }

    /// HNF of `{coords(δ q) : q ∈ O}`; requires `δ O ⊂ R[1,i,j,ij]`.
    pub fn ambient_lattice(&self, delta: &FieldElement) -> IMatrix {
        let rows: IMatrix = self
            .z_basis()
            .iter()
            .map(|q| {
                let w = z_coords(&q.scale(delta));
                assert!(w.iter().all(|c| c.is_integer()), "order not inside (1/δ)R[1,i,j,ij]");
                w.iter().map(|c| c.to_integer()).collect()
            })
            .collect();
        lattice::hnf(rows)
    }
}

fn det_field(m: &[Vec<FieldElement>], field: &NumberField) -> FieldElement {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = field.zero();
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<FieldElement>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = entry * &det_field(&minor, field);
        acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Is the principal ideal `xR` equal to `Π P^e`?
pub fn ideal_equals(x: &FieldElement, factors: &[(PrimeIdeal, i64)]) -> bool {
    if x.is_zero() || !x.is_integral() {
        return false;
    }
    let target: BigInt = factors.iter().map(|(p, e)| p.norm.pow(*e as u32)).product();
    if x.norm().abs().to_integer() != target {
        return false;
    }
    factors.iter().all(|(p, e)| valuation(p, x) == *e)
}

/// `R[1, i, j, ij]`; its discriminant is `16a²b²R`.
pub fn standard_order(alg: &QuaternionAlgebra) -> Result<QuaternionOrder, OrderError> {
    if !alg.a.is_integral() || !alg.b.is_integral() {
        return Err(OrderError::NotIntegral);
    }
    let basis = (0..4).map(|k| alg.basis(k)).collect();
    QuaternionOrder::from_r_basis(alg, basis)
}

/// `R[1, i, β, iβ]`.
pub fn order_i_beta(alg: &QuaternionAlgebra, beta: &QuaternionElement) -> Result<QuaternionOrder, OrderError> {
    let i = alg.i();
    QuaternionOrder::from_r_basis(alg, vec![alg.one(), i.clone(), beta.clone(), alg.mul(&i, beta)])
}

/// `R[1, j, β, jβ]`.
pub fn order_j_beta(alg: &QuaternionAlgebra, beta: &QuaternionElement) -> Result<QuaternionOrder, OrderError> {
    let j = alg.j();
    QuaternionOrder::from_r_basis(alg, vec![alg.one(), j.clone(), beta.clone(), alg.mul(&j, beta)])
}

fn half(field: &NumberField) -> BigRational {
    let _ = field;
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `β = ½(x + y i + j)`.
pub fn half_beta(alg: &QuaternionAlgebra, x: &FieldElement, y: &FieldElement) -> QuaternionElement {
    let h = half(&alg.field);
    alg.elem(x.scale(&h), y.scale(&h), alg.field.one().scale(&h), alg.field.zero())
}

/// Elements of `R` with coordinates in `{0, 1}`, ordered by support size then
/// lexicographically: representatives of `R/2R`.
pub fn residues_mod2(field: &NumberField) -> Vec<FieldElement> {
    let n = field.degree();
    let mut v: Vec<Vec<i64>> = (0..1u32 << n).map(|m| (0..n).map(|k| ((m >> k) & 1) as i64).collect()).collect();
    v.sort_by_key(|c| (c.iter().sum::<i64>(), c.iter().rev().copied().collect::<Vec<_>>()));
    v.iter().map(|c| field.elem(c)).collect()
}

fn in_ideal_int(x: &FieldElement, m: i64) -> bool {
    x.coords.iter().all(|c| c.is_integer() && c.to_integer().is_multiple_of(&BigInt::from(m)))
}

/// Some `(x, y)` with `x² − a y² − b ∈ 4R`. The condition depends only on
/// `x, y mod 2R`, so the search over `(R/2R)²` is complete.
pub fn solve_quadratic_mod4(field: &NumberField, a: &FieldElement, b: &FieldElement) -> Option<(FieldElement, FieldElement)> {
    let reps = residues_mod2(field);
    for y in &reps {
        let ay2 = a * &(y * y);
        for x in &reps {
            if in_ideal_int(&(&(&(x * x) - &ay2) - b), 4) {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// Which hypotheses of the mod-4 solvability lemma hold: `(a, b)` coprime,
/// both squares mod 4, or `b = −1` with `a` a square mod 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolmodHypotheses {
    pub coprime: bool,
    pub a_square_mod4: bool,
    pub b_square_mod4: bool,
    pub b_minus_one: bool,
}

impl SolmodHypotheses {
    pub fn hold(&self) -> bool {
        self.coprime && self.a_square_mod4 && (self.b_square_mod4 || self.b_minus_one)
    }
}

fn is_square_mod4(field: &NumberField, a: &FieldElement) -> bool {
    let n = field.degree();
    (0..4u64.pow(n as u32)).any(|mut m| {
        let c: Vec<i64> = (0..n)
            .map(|_| {
                let d = (m % 4) as i64;
                m /= 4;
                d
            })
            .collect();
        let t = field.elem(&c);
        in_ideal_int(&(&(&t * &t) - a), 4)
    })
}

pub fn solmod_hypotheses(alg: &QuaternionAlgebra) -> SolmodHypotheses {
    let f = &alg.field;
    let coprime = candidate_primes(f, &alg.a, &alg.b)
        .iter()
        .all(|p| valuation(p, &alg.a) == 0 || valuation(p, &alg.b) == 0);
    SolmodHypotheses {
        coprime,
        a_square_mod4: is_square_mod4(f, &alg.a),
        b_square_mod4: is_square_mod4(f, &alg.b),
        b_minus_one: alg.b == f.from_int(-1),
    }
}

/// Whether `abR` is exactly the product of the ramified primes.
pub fn delta_equals_ab(alg: &QuaternionAlgebra, ram: &RamificationData) -> bool {
    let ab = &alg.a * &alg.b;
    let target: Vec<(PrimeIdeal, i64)> = ram.finite_primes.iter().map(|p| (p.clone(), 1)).collect();
    ideal_equals(&ab, &target)
}

/// Maximal order `R[1, i, β, iβ]` with `β = ½(x + yi + j)`, valid when
/// `Δ(A) = abR` and `x² − a y² − b ∈ 4R` is solvable. A caller-supplied
/// `(x, y)` is used when it satisfies the congruence.
pub fn build_maximal_order_nice(
    alg: &QuaternionAlgebra,
    ram: &RamificationData,
    hint: Option<(FieldElement, FieldElement)>,
) -> Result<QuaternionOrder, OrderError> {
    if !alg.a.is_integral() || !alg.b.is_integral() {
        return Err(OrderError::NotIntegral);
    }
    if !delta_equals_ab(alg, ram) {
        return Err(OrderError::HypothesisFails("Δ(A) ≠ abR".into()));
    }
    let (x, y) = nice_pair(alg, hint).ok_or_else(|| OrderError::HypothesisFails("x² − ay² − b ∉ 4R for all x, y".into()))?;
    let beta = half_beta(alg, &x, &y);
    // integrality of β is the congruence itself; the rest follows
    debug_assert!(alg.norm(&beta).is_integral() && alg.trace(&beta).is_integral());
    let o = order_i_beta(alg, &beta)?;
    if !o.is_maximal(ram) {
        return Err(OrderError::MaximalityCheckFailed);
    }
    Ok(o)
}

fn nice_pair(alg: &QuaternionAlgebra, hint: Option<(FieldElement, FieldElement)>) -> Option<(FieldElement, FieldElement)> {
    if let Some((x, y)) = hint {
        if in_ideal_int(&(&(&(&x * &x) - &(&alg.a * &(&y * &y))) - &alg.b), 4) {
            return Some((x, y));
        }
    }
    solve_quadratic_mod4(&alg.field, &alg.a, &alg.b)
}

/// Small generator of a principal prime: `x ∈ P` with `|N(x)| = N(P)`.
pub fn prime_generator(field: &NumberField, pr: &PrimeIdeal) -> Option<FieldElement> {
    let n = field.degree();
    for bound in 1..=4i64 {
        let width = (2 * bound + 1) as u64;
        let total = width.pow(n as u32);
        let mut cands: Vec<Vec<i64>> = (0..total)
            .map(|mut m| {
                (0..n)
                    .map(|_| {
                        let d = (m % width) as i64 - bound;
                        m /= width;
                        d
                    })
                    .collect()
            })
            .filter(|c: &Vec<i64>| c.iter().any(|&x| x.abs() == bound))
            .collect();
        cands.sort_by_key(|c| (c.iter().map(|x| x.abs()).sum::<i64>(), c.clone()));
        for c in cands {
            let x = field.elem(&c);
            if x.norm().abs() == BigRational::from_integer(pr.norm.clone()) && valuation(pr, &x) == 1 {
                return Some(x);
            }
        }
    }
    None
}

/// `r` with `β ∈ (1/2r)R[1,i,j,ij]` for any maximal `R[1,i,j,ij][β]`:
/// the product of generators of primes dividing `abR` but not `Δ(A)`.
pub fn denominator_bound(alg: &QuaternionAlgebra, ram: &RamificationData) -> Result<FieldElement, OrderError> {
    let f = &alg.field;
    let ab = &alg.a * &alg.b;
    if !ab.is_integral() {
        return Err(OrderError::NotIntegral);
    }
    let mut r = f.one();
    let norm = ab.norm().abs().to_integer();
    let mut primes: Vec<PrimeIdeal> = Vec::new();
    for p in small_prime_factors(&norm) {
        primes.extend(factor_prime(f, p));
    }
    for pr in primes {
        let v = valuation(&pr, &ab);
        if v == 0 {
            continue;
        }
        if v > 1 {
            return Err(OrderError::HypothesisFails(format!("ab is not square-free at {}", pr.label())));
        }
        if ram.finite_primes.contains(&pr) {
            continue;
        }
        let g = prime_generator(f, &pr)
            .ok_or_else(|| OrderError::HypothesisFails(format!("no small generator for {}", pr.label())))?;
        r = &r * &g;
    }
    for pr in &ram.finite_primes {
        if valuation(pr, &ab) == 0 {
            return Err(OrderError::HypothesisFails(format!("{} divides Δ(A) but not ab", pr.label())));
        }
    }
    Ok(r)
}

fn small_prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d * d) <= n {
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
        out.push(n.to_u64().unwrap());
    }
    out
}

/// Representatives of `R/rR` as coordinate vectors, centred around 0.
fn residues_mod(field: &NumberField, r: &FieldElement) -> Vec<FieldElement> {
    let n = field.degree();
    let alpha = field.gen();
    let mut rows = Vec::new();
    let mut t = r.clone();
    for _ in 0..n {
        rows.push(t.to_int_coords().expect("integral modulus"));
        t = &t * &alpha;
    }
    let h = lattice::hnf(rows);
    let diag: Vec<i64> = (0..n).map(|i| h[i][i].to_i64().unwrap()).collect();
    let total: i64 = diag.iter().product();
    let mut out = Vec::new();
    for mut m in 0..total {
        let mut c = vec![0i64; n];
        for (k, d) in diag.iter().enumerate() {
            c[k] = m % d;
            m /= d;
        }
        // reduce the box representative into a centred one, coordinate by coordinate
        let mut v: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        for (i, row) in h.iter().enumerate() {
            let d = &row[i];
            let twice = &v[i] * 2;
            if &twice > d {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= y;
                }
            }
        }
        out.push(field.elem_big(&v));
    }
    out
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub order: QuaternionOrder,
    pub beta: QuaternionElement,
    /// Coefficients of `rβ` in the basis of the starting order.
    pub coefficients: Vec<FieldElement>,
    pub uses_j: bool,
    pub tried: usize,
}

/// The intermediate order: `R[1,i,γ,iγ]` with `γ = ½(x + yi + j)` when the
/// mod-4 equation is solvable, else the standard order.
pub fn intermediate_order(
    alg: &QuaternionAlgebra,
    hint: Option<(FieldElement, FieldElement)>,
) -> Result<QuaternionOrder, OrderError> {
    match nice_pair(alg, hint) {
        Some((x, y)) => order_i_beta(alg, &half_beta(alg, &x, &y)),
        None => standard_order(alg),
    }
}

/// Search for `β ∈ (1/r)O″` integral with `R[1,i,β,iβ]` or `R[1,j,β,jβ]`
/// maximal, `O″` the intermediate order. Candidates `rβ = Σ c_k e_k` run over
/// centred residues `c_k ∈ R/rR`, ordered by largest coordinate and then
/// lexicographically.
pub fn build_maximal_order_search(
    alg: &QuaternionAlgebra,
    ram: &RamificationData,
    r: &FieldElement,
    start: &QuaternionOrder,
) -> Result<SearchResult, OrderError> {
    if start.is_maximal(ram) {
        return Ok(SearchResult {
            order: start.clone(),
            beta: start.r_basis[2].clone(),
            coefficients: Vec::new(),
            uses_j: false,
            tried: 0,
        });
    }
    let f = &alg.field;
    let reps = residues_mod(f, r);
    let rinv = r.inv().map_err(|_| OrderError::HypothesisFails("r = 0".into()))?;
    let mut cands: Vec<Vec<usize>> = Vec::new();
    let m = reps.len();
    for idx in 0..m.pow(4) {
        let mut t = idx;
        let c: Vec<usize> = (0..4)
            .map(|_| {
                let d = t % m;
                t /= m;
                d
            })
            .collect();
        if c.iter().all(|&k| reps[k].is_zero()) {
            continue;
        }
        cands.push(c);
    }
    let key = |c: &Vec<usize>| {
        let coords: Vec<i64> = c.iter().flat_map(|&k| reps[k].to_int_coords().unwrap()).map(|x| x.to_i64().unwrap()).collect();
        let maxabs = coords.iter().map(|x| x.abs()).max().unwrap();
        (maxabs, coords)
    };
    cands.sort_by_cached_key(key);
    let mut tried = 0;
    for c in cands {
        tried += 1;
        let mut t = alg.zero();
        for (k, &ci) in c.iter().enumerate() {
            t = t.add(&start.r_basis[k].scale(&reps[ci]));
        }
        let beta = t.scale(&rinv);
        if !alg.trace(&beta).is_integral() || !alg.norm(&beta).is_integral() {
            continue;
        }
        for uses_j in [false, true] {
            let o = if uses_j { order_j_beta(alg, &beta) } else { order_i_beta(alg, &beta) };
            if let Ok(o) = o {
                if o.is_maximal(ram) {
                    return Ok(SearchResult {
                        order: o,
                        beta,
                        coefficients: c.iter().map(|&k| reps[k].clone()).collect(),
                        uses_j,
                        tried,
                    });
                }
            }
        }
    }
    Err(OrderError::SearchExhausted { tried })
}

/// Lattice `{w ∈ Z^{4n}}` cut out by a congruence system, compared with the
/// order's ambient lattice.
pub fn congruences_match(o: &QuaternionOrder, delta: &FieldElement, c: &Congruences) -> bool {
    let dim = 4 * o.algebra.field.degree();
    c.solution_lattice(dim) == o.ambient_lattice(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k7_algebra() -> QuaternionAlgebra {
        let k = NumberField::new(&[1, -2, -1, 1], &BigInt::from(49)).unwrap();
        QuaternionAlgebra::new(k.elem(&[-6, 4]), k.from_int(-1)).unwrap()
    }

    #[test]
    fn lipschitz_discriminant() {
        let q = NumberField::rationals();
        let h = QuaternionAlgebra::new(q.from_int(-1), q.from_int(-1)).unwrap();
        let o = standard_order(&h).unwrap();
        // det diag(2, 2a, 2b, -2ab) = -16a²b²
        assert_eq!(o.discriminant(), q.from_int(-16));
        let ram = h.ramification_set().unwrap();
        assert!(!o.is_maximal(&ram));
    }

    #[test]
    fn k7_nice_order() {
        let alg = k7_algebra();
        let ram = alg.ramification_set().unwrap();
        let (x, y) = solve_quadratic_mod4(&alg.field, &alg.a, &alg.b).unwrap();
        assert!(in_ideal_int(&(&(&(&x * &x) - &(&alg.a * &(&y * &y))) - &alg.b), 4));
        let o = build_maximal_order_nice(&alg, &ram, None).unwrap();
        assert!(o.is_maximal(&ram));
        let std = standard_order(&alg).unwrap();
        assert!(o.contains_order(&std));
        let ab = &alg.a * &alg.b;
        let d16 = (&ab * &ab).scale_int(-16);
        assert_eq!(std.discriminant(), d16);
        assert_eq!(denominator_bound(&alg, &ram).unwrap(), alg.field.one());
    }

    #[test]
    fn k7_search_agrees_with_nice() {
        let alg = k7_algebra();
        let ram = alg.ramification_set().unwrap();
        let nice = build_maximal_order_nice(&alg, &ram, None).unwrap();
        let std = standard_order(&alg).unwrap();
        let found = build_maximal_order_search(&alg, &ram, &alg.field.from_int(2), &std).unwrap();
        assert!(found.order.is_maximal(&ram));
        // short-circuit on an already maximal start
        let again = build_maximal_order_search(&alg, &ram, &alg.field.from_int(2), &nice).unwrap();
        assert_eq!(again.order, nice);
        assert_eq!(again.tried, 0);
    }

    #[test]
    fn trivial_mod4_solution() {
        let k = NumberField::rationals();
        let (x, y) = solve_quadratic_mod4(&k, &k.from_int(3), &k.one()).unwrap();
        assert_eq!((x, y), (k.one(), k.zero()));
    }
}
