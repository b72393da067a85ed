//! Ford fundamental domains for `ρ(O¹)` in the unit disk, side-pairing
//! generators, signatures and genus-two subgroups.
//!
//! Group logic is exact (quaternions over `k`); the disk picture is `f64`.

pub mod domain;
pub mod enumerate;
pub mod svg;
pub mod words;

use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::{AlgebraEntry, CatalogError};
use crate::ideals::lambda;
use crate::numfield::FieldElement;
use crate::orders::{z_coords, OrderError, QuaternionOrder};
use crate::quatalg::{QuatError, QuaternionAlgebra, QuaternionElement};
use crate::volume::{rh_area, Signature};

use domain::{interior_angle, polygon_area, split_arc, Arc, Circle, GeometryOutcome, VERTEX_TOL};
use enumerate::{short_vectors, RealLattice};
use words::{
    canonicalize, eval, homs_to_z2, inverse, kernel_torsion_free, reidemeister_schreier, Canonical, GroupOps,
    Letter, Presentation, Word, WordError,
};

pub const DEFAULT_EPSILON: f64 = 0.15;
pub const EPSILON_FLOOR: f64 = 0.05;
/// Base-point offset used when the origin is fixed by a nontrivial element.
pub const RECENTER_SHIFT: Complex64 = Complex64 { re: 0.0123, im: 0.0071 };

#[derive(Debug, Error)]
pub enum FordError {
    #[error("a is not positive at place {0}")]
    WrongPlace(usize),
    #[error("b1·b2 ≠ b")]
    BadSplit,
    #[error("only ±1 found; ε too large")]
    EmptyEnumeration,
    #[error("refine ε: {0}")]
    RefineEpsilon(String),
    #[error("domain still open at the ε floor {eps}: {reason}")]
    EpsilonFloor { eps: f64, reason: String },
    #[error("a nontrivial element fixes the base point")]
    OriginFixed,
    #[error("side pairing: {0}")]
    Pairing(String),
    #[error("vertex cycle: {0}")]
    UnclosedCycle(String),
    #[error("area {domain} does not match the signature area {expected}")]
    AreaMismatch { domain: f64, expected: f64 },
    #[error("genus-two subgroups need index {0}, only 1 and 2 are supported")]
    NotSupportedIndex(f64),
    #[error("word: {0}")]
    Word(#[from] WordError),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `[[a, b], [b̄, ā]]` in `SU(1,1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskMatrix {
    pub a: Complex64,
    pub b: Complex64,
}

impl DiskMatrix {
    /// `φ g φ⁻¹` with `φ = [[i, 1], [1, i]]`.
    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        DiskMatrix { a: Complex64::new(a + d, b - c) * 0.5, b: Complex64::new(b + c, a - d) * 0.5 }
    }

    pub fn identity() -> Self {
        DiskMatrix { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        DiskMatrix { a: self.a * o.a + self.b * o.b.conj(), b: self.a * o.b + self.b * o.a.conj() }
    }

    pub fn inv(&self) -> Self {
        DiskMatrix { a: self.a.conj(), b: -self.b }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// `|g'(z)|`-defining quantity: `z` is inside `C_g` iff this is below 1.
    pub fn denominator(&self, z: Complex64) -> f64 {
        (self.b.conj() * z + self.a.conj()).norm()
    }

    pub fn isometric_circle(&self) -> Option<Circle> {
        if self.b.norm() < 1e-12 {
            return None;
        }
        Some(Circle { center: -self.a.conj() / self.b.conj(), radius: 1.0 / self.b.norm() })
    }

    /// Conjugate by the disk automorphism moving `p` to the origin.
    pub fn recenter(&self, p: Complex64) -> Self {
        if p == Complex64::new(0.0, 0.0) {
            return *self;
        }
        let s = (1.0 - p.norm_sqr()).sqrt();
        let t = DiskMatrix { a: Complex64::new(1.0 / s, 0.0), b: -p / s };
        t.mul(self).mul(&t.inv())
    }

    /// Fixed point inside the disk of an elliptic element.
    pub fn fixed_point(&self) -> Option<Complex64> {
        // b̄ z² + (ā − a) z − b = 0
        let (qa, qb, qc) = (self.b.conj(), self.a.conj() - self.a, -self.b);
        if qa.norm() < 1e-14 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let disc = (qb * qb - qa * qc * 4.0).sqrt();
        [(-qb + disc) / (qa * 2.0), (-qb - disc) / (qa * 2.0)].into_iter().find(|z| z.norm() < 1.0)
    }
}

/// Radius of the isometric circle of `φ g φ⁻¹` for `g ∈ SL2(R)`.
pub fn isometric_radius(g: [[f64; 2]; 2]) -> Option<f64> {
    let [[a, b], [c, d]] = g;
    let s = (a - d) * (a - d) + (b + c) * (b + c);
    if s < 1e-20 {
        None
    } else {
        Some(2.0 / s.sqrt())
    }
}

/// Radius of `U_ε`: isometric circles of radius at most `ε` are orthogonal to
/// the unit circle, so none of them reaches inside `√(1+ε²) − ε`.
pub fn safe_radius(eps: f64) -> f64 {
    (1.0 + eps * eps).sqrt() - eps
}

/// How `b` is split as `b1·b2` in the matrix model.
#[derive(Clone, Debug)]
pub enum Split {
    Exact(FieldElement, FieldElement),
    /// `b1 = √|σ(b)|`, `b2 = sign(σ(b))·√|σ(b)|`, numerically.
    Symmetric,
}

/// `ρ: A → M2(R)` at an unramified place, followed by the disk model.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub place: usize,
    pub sqrt_a: f64,
    pub b1: f64,
    pub b2: f64,
    pub shift: Complex64,
}

impl Embedding {
    pub fn new(alg: &QuaternionAlgebra, place: usize, split: &Split) -> Result<Self, FordError> {
        if alg.a.sign_at(place).map_or(true, |s| s <= 0) {
            return Err(FordError::WrongPlace(place));
        }
        let sqrt_a = alg.a.embed_f64(place).sqrt();
        let (b1, b2) = match split {
            Split::Exact(b1, b2) => {
                if &(b1 * b2) != &alg.b {
                    return Err(FordError::BadSplit);
                }
                (b1.embed_f64(place), b2.embed_f64(place))
            }
            Split::Symmetric => {
                let sb = alg.b.embed_f64(place);
                let r = sb.abs().sqrt();
                (r, sb.signum() * r)
            }
        };
        Ok(Embedding { place, sqrt_a, b1, b2, shift: Complex64::new(0.0, 0.0) })
    }

    /// Catalog choice: an explicit split, the symmetric one, or `(b, 1)`.
    pub fn for_entry(e: &AlgebraEntry, alg: &QuaternionAlgebra) -> Result<Self, FordError> {
        let split = match (e.b_split(&alg.field)?, e.split.as_deref()) {
            (Some((b1, b2)), _) => Split::Exact(b1, b2),
            (None, Some("symmetric")) => Split::Symmetric,
            _ => Split::Exact(alg.b.clone(), alg.field.one()),
        };
        Embedding::new(alg, e.unramified_place, &split)
    }

    pub fn matrix(&self, q: &QuaternionElement) -> [[f64; 2]; 2] {
        let p = self.place;
        let (x, y, u, v) = (q.x.embed_f64(p), q.y.embed_f64(p), q.u.embed_f64(p), q.v.embed_f64(p));
        let s = self.sqrt_a;
        [[x + y * s, self.b1 * (u + v * s)], [self.b2 * (u - v * s), x - y * s]]
    }

    pub fn disk(&self, q: &QuaternionElement) -> DiskMatrix {
        DiskMatrix::from_real(self.matrix(q)).recenter(self.shift)
    }
}

/// `[[x+y√a, b1(u+v√a)], [b2(u−v√a), x−y√a]]` at `place`.
pub fn matrix_embedding(
    alg: &QuaternionAlgebra,
    q: &QuaternionElement,
    b1: &FieldElement,
    b2: &FieldElement,
    place: usize,
) -> Result<[[f64; 2]; 2], FordError> {
    Ok(Embedding::new(alg, place, &Split::Exact(b1.clone(), b2.clone()))?.matrix(q))
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub quat: QuaternionElement,
    /// Numerators over the ambient denominator, layout `x(n) y(n) u(n) v(n)`.
    pub vector: Vec<BigRational>,
    pub matrix: [[f64; 2]; 2],
    pub disk: DiskMatrix,
    pub iso_circle: Option<Circle>,
}

impl GroupElement {
    pub fn new(q: QuaternionElement, delta: &FieldElement, emb: &Embedding) -> Self {
        let mut q = q;
        let mut vector = z_coords(&q.scale(delta));
        if vector.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative()) {
            q = q.neg();
            vector.iter_mut().for_each(|c| *c = -c.clone());
        }
        let matrix = emb.matrix(&q);
        let disk = emb.disk(&q);
        GroupElement { iso_circle: disk.isometric_circle(), quat: q, vector, matrix, disk }
    }

    pub fn radius(&self) -> Option<f64> {
        self.iso_circle.as_ref().map(|c| c.radius)
    }

    pub fn is_pm_one(&self) -> bool {
        is_pm_one(&self.quat)
    }

    /// Integer vector, when the numerators are integral.
    pub fn int_vector(&self) -> Option<Vec<i64>> {
        self.vector.iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
    }
}

pub fn is_pm_one(q: &QuaternionElement) -> bool {
    (q.x.is_one() || (-&q.x).is_one()) && q.y.is_zero() && q.u.is_zero() && q.v.is_zero()
}

/// `Some(±1)` when `q = ±1`.
pub fn sign_of_identity(q: &QuaternionElement) -> Option<i8> {
    if !(q.y.is_zero() && q.u.is_zero() && q.v.is_zero()) {
        None
    } else if q.x.is_one() {
        Some(1)
    } else if (-&q.x).is_one() {
        Some(-1)
    } else {
        None
    }
}

/// Norm-one quaternions under multiplication.
pub struct QuatGroup<'a>(pub &'a QuaternionAlgebra);

impl GroupOps for QuatGroup<'_> {
    type E = QuaternionElement;
    fn one(&self) -> QuaternionElement {
        self.0.one()
    }
    fn mul(&self, a: &QuaternionElement, b: &QuaternionElement) -> QuaternionElement {
        self.0.mul(a, b)
    }
    fn inv(&self, a: &QuaternionElement) -> QuaternionElement {
        a.conj()
    }
}

/// Norm-one elements of `O` with isometric radius above `ε` (and those
/// fixing the base point), one per `±` pair.
pub fn enumerate_bounded_elements(
    order: &QuaternionOrder,
    delta: &FieldElement,
    emb: &Embedding,
    eps: f64,
) -> Result<Vec<GroupElement>, FordError> {
    let alg = &order.algebra;
    let k = &alg.field;
    let n = k.degree();
    let ram = alg.ramified_real_places();
    let m_eps = 2.0 + 4.0 / (eps * eps);
    let zb = order.z_basis();
    let places: Vec<usize> = std::iter::once(emb.place).chain(ram.iter().copied()).collect();
    // floating coordinates of every basis element at every place
    let fc: Vec<Vec<[f64; 4]>> = zb
        .iter()
        .map(|q| places.iter().map(|&p| [q.x.embed_f64(p), q.y.embed_f64(p), q.u.embed_f64(p), q.v.embed_f64(p)]).collect())
        .collect();
    let ab: Vec<(f64, f64)> = places.iter().map(|&p| (alg.a.embed_f64(p), alg.b.embed_f64(p))).collect();
    let basis: Vec<Vec<f64>> = zb
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let mut row = Vec::with_capacity(4 * n);
            let m = emb.matrix(q);
            let s = m_eps.sqrt();
            row.extend_from_slice(&[m[0][0] / s, m[0][1] / s, m[1][0] / s, m[1][1] / s]);
            for (pi, _) in ram.iter().enumerate() {
                let [x, y, u, v] = fc[i][pi + 1];
                let (a, b) = ab[pi + 1];
                row.extend_from_slice(&[x, (-a).sqrt() * y, (-b).sqrt() * u, (a * b).sqrt() * v]);
            }
            row
        })
        .collect();
    let cands = short_vectors(&RealLattice { basis }, n as f64 + 1e-6);

    let mut out = Vec::new();
    for w in cands {
        // cheap floating norm test at every place first
        let mut ok = true;
        for (pi, &(a, b)) in ab.iter().enumerate() {
            let mut c = [0.0f64; 4];
            for (k2, &wk) in w.iter().enumerate() {
                if wk != 0 {
                    for t in 0..4 {
                        c[t] += wk as f64 * fc[k2][pi][t];
                    }
                }
            }
            let nr = c[0] * c[0] - a * c[1] * c[1] - b * c[2] * c[2] + a * b * c[3] * c[3];
            if (nr - 1.0).abs() > 1e-6 {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let mut q = alg.zero();
        for (k2, &wk) in w.iter().enumerate() {
            if wk != 0 {
                q = q.add(&zb[k2].scale(&k.from_int(wk)));
            }
        }
        if !alg.norm(&q).is_one() {
            continue;
        }
        let g = GroupElement::new(q, delta, emb);
        let keep = match g.radius() {
            Some(r) => r > eps,
            None => true,
        };
        if keep {
            out.push(g);
        }
    }
    if out.iter().all(|g| g.is_pm_one()) {
        return Err(FordError::EmptyEnumeration);
    }
    out.sort_by(|a, b| a.vector.cmp(&b.vector));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Side {
    pub arc: Arc,
    /// Index into `FordDomain::elements` of the pairing element.
    pub element: usize,
    pub partner: usize,
}

#[derive(Clone, Debug)]
pub struct VertexCycle {
    /// Vertex `k` sits between sides `k` and `k+1`.
    pub vertices: Vec<usize>,
    /// Sides whose pairings are applied, in order.
    pub sides: Vec<usize>,
    pub angle_sum: f64,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct FordDomain {
    pub epsilon: f64,
    pub shift: Complex64,
    pub elements: Vec<GroupElement>,
    pub sides: Vec<Side>,
    pub vertices: Vec<Complex64>,
    pub angles: Vec<f64>,
    pub cycles: Vec<VertexCycle>,
    pub area: f64,
    pub signature: Signature,
    /// Side-pairing presentation: generator `k` pairs side `generator_sides[k]`.
    pub presentation: Presentation<QuaternionElement>,
    pub generator_sides: Vec<usize>,
}

fn vector_key(q: &QuaternionElement) -> Vec<BigRational> {
    let mut v = z_coords(q);
    if v.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative()) {
        v.iter_mut().for_each(|c| *c = -c.clone());
    }
    v
}

/// `F_ε` from the enumerated elements, with pairings, cycles and signature.
pub fn build_ford_domain(
    alg: &QuaternionAlgebra,
    elements: Vec<GroupElement>,
    eps: f64,
    shift: Complex64,
) -> Result<FordDomain, FordError> {
    let field = &alg.field;
    if elements.iter().any(|g| !g.is_pm_one() && g.iso_circle.is_none()) {
        return Err(FordError::OriginFixed);
    }
    let active: Vec<usize> = (0..elements.len()).filter(|&i| elements[i].iso_circle.is_some()).collect();
    let disks: Vec<DiskMatrix> = active.iter().map(|&i| elements[i].disk).collect();
    let (arcs, _) = domain::boundary(&disks, safe_radius(eps)).map_err(|GeometryOutcome::Refine(s)| FordError::RefineEpsilon(s))?;

    let index: HashMap<Vec<BigRational>, usize> =
        elements.iter().enumerate().map(|(i, g)| (vector_key(&g.quat), i)).collect();
    let inverse_of = |i: usize| index.get(&vector_key(&elements[i].quat.conj())).copied();

    // sides, with order-2 arcs split at their fixed points
    let mut sides: Vec<Side> = Vec::new();
    for arc in arcs {
        let e = active[arc.element];
        let g = &elements[e];
        if g.quat.x.is_zero() {
            let z = g.disk.fixed_point().ok_or_else(|| FordError::Pairing("order-2 element without fixed point".into()))?;
            let (s1, s2) = split_arc(&arc, z)
                .ok_or_else(|| FordError::Pairing(format!("fixed point {z:.4} not inside its side")))?;
            sides.push(Side { arc: s1, element: e, partner: usize::MAX });
            sides.push(Side { arc: s2, element: e, partner: usize::MAX });
        } else {
            sides.push(Side { arc, element: e, partner: usize::MAX });
        }
    }
    let n = sides.len();
    for s in 0..n {
        let e = sides[s].element;
        let ie = inverse_of(e).ok_or_else(|| FordError::Pairing("inverse not enumerated".into()))?;
        let g = &elements[e].disk;
        let (zs, ze) = (g.apply(sides[s].arc.start), g.apply(sides[s].arc.end));
        let partner = (0..n).find(|&t| {
            sides[t].element == ie && (sides[t].arc.end - zs).norm() < VERTEX_TOL && (sides[t].arc.start - ze).norm() < VERTEX_TOL
        });
        sides[s].partner = partner.ok_or_else(|| FordError::RefineEpsilon(format!("side {s} has no partner")))?;
    }
    for s in 0..n {
        if sides[sides[s].partner].partner != s {
            return Err(FordError::Pairing(format!("pairing of side {s} is not an involution")));
        }
    }

    let vertices: Vec<Complex64> = (0..n).map(|k| sides[k].arc.end).collect();
    let angles: Vec<f64> =
        (0..n).map(|k| interior_angle(vertices[k], &sides[k].arc.circle, &sides[(k + 1) % n].arc.circle)).collect();

    // generators: one per side pair, represented by the lower index
    let mut gen_of = vec![usize::MAX; n];
    let mut generator_sides = Vec::new();
    for s in 0..n {
        let p = sides[s].partner;
        if s <= p {
            gen_of[s] = generator_sides.len();
            gen_of[p] = generator_sides.len();
            generator_sides.push(s);
        }
    }
    let letter = |s: usize| -> Letter { (gen_of[s], if generator_sides[gen_of[s]] == s { 1 } else { -1 }) };
    let gens: Vec<QuaternionElement> = generator_sides.iter().map(|&s| elements[sides[s].element].quat.clone()).collect();
    let names: Vec<String> = (1..=gens.len()).map(|i| format!("G{i}")).collect();

    let grp = QuatGroup(alg);
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut relators = Vec::new();
    for k in 0..n {
        if seen[k] {
            continue;
        }
        let (mut v, mut vs, mut ss, mut sum) = (k, Vec::new(), Vec::new(), 0.0);
        loop {
            seen[v] = true;
            vs.push(v);
            sum += angles[v];
            let t = (v + 1) % n;
            ss.push(t);
            v = sides[t].partner;
            if v == k {
                break;
            }
            if vs.len() > n {
                return Err(FordError::UnclosedCycle(format!("cycle from vertex {k} does not return")));
            }
        }
        let m = (2.0 * PI / sum).round();
        if m < 1.0 || (m * sum - 2.0 * PI).abs() > 1e-5 {
            return Err(FordError::UnclosedCycle(format!("angle sum {sum:.8} at vertex {k}")));
        }
        let m = m as u32;
        let word: Word = ss.iter().rev().map(|&t| letter(t)).collect();
        let prod = eval(&grp, &gens, &word);
        // exact torsion: tr = ±2cos(π/m), and the cycle element is ±1 when m = 1
        if m == 1 {
            if !is_pm_one(&prod) {
                return Err(FordError::UnclosedCycle(format!("accidental cycle at vertex {k} is not ±1")));
            }
        } else {
            let lam = lambda(field, m).ok_or_else(|| FordError::UnclosedCycle(format!("2cos(π/{m}) is not in k")))?;
            let tr = alg.trace(&prod);
            if is_pm_one(&prod) || (tr != lam && tr != -&lam) {
                return Err(FordError::UnclosedCycle(format!("cycle at vertex {k} has trace {tr}, expected ±2cos(π/{m})")));
            }
        }
        relators.push((word, m));
        cycles.push(VertexCycle { vertices: vs, sides: ss, angle_sum: sum, order: m });
    }

    let area = polygon_area(&angles);
    let twice_genus = 1 + n as i64 / 2 - cycles.len() as i64;
    if n % 2 != 0 || twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(FordError::UnclosedCycle(format!("Euler characteristic is inconsistent: {n} sides, {} cycles", cycles.len())));
    }
    let signature = Signature::new((twice_genus / 2) as u32, cycles.iter().map(|c| c.order).filter(|&m| m > 1).collect());
    let expected = rh_area(&signature).map(|a| a.to_f64().unwrap() * PI).unwrap_or(0.0);
    if (expected - area).abs() > 1e-6 {
        return Err(FordError::AreaMismatch { domain: area, expected });
    }
    Ok(FordDomain {
        epsilon: eps,
        shift,
        elements,
        sides,
        vertices,
        angles,
        cycles,
        area,
        signature,
        presentation: Presentation { gens, names, relators },
        generator_sides,
    })
}

impl FordDomain {
    pub fn side_disk(&self, s: usize) -> &DiskMatrix {
        &self.elements[self.sides[s].element].disk
    }

    /// Letter of the side-pairing presentation attached to side `s`.
    pub fn letter(&self, s: usize) -> Letter {
        let g = self.generator_sides.iter().position(|&t| t == s || self.sides[t].partner == s).unwrap();
        (g, if self.generator_sides[g] == s { 1 } else { -1 })
    }

    /// Is `z` in the closed domain, up to `tol`?
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        z.norm() < 1.0 && (0..self.sides.len()).all(|s| self.side_disk(s).denominator(z) >= 1.0 - tol)
    }

    /// Push `z` into the closed domain by side pairings; returns the sides used.
    pub fn reduce_point(&self, mut z: Complex64, max_steps: usize) -> (Vec<usize>, Complex64) {
        let mut used = Vec::new();
        while used.len() < max_steps {
            let best = (0..self.sides.len())
                .map(|s| (s, self.side_disk(s).denominator(z)))
                .filter(|&(_, d)| d < 1.0 - 1e-12)
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match best {
                Some((s, _)) => {
                    z = self.side_disk(s).apply(z);
                    used.push(s);
                }
                None => break,
            }
        }
        (used, z)
    }

    /// Word `w` in the side-pairing generators with `q = ±w`.
    pub fn express(&self, alg: &QuaternionAlgebra, emb: &Embedding, q: &QuaternionElement) -> Option<Word> {
        let z = emb.disk(q).apply(Complex64::new(0.0, 0.0));
        let (used, _) = self.reduce_point(z, 10_000);
        let w: Word = used.iter().rev().map(|&s| self.letter(s)).collect();
        // g_k ⋯ g_1 q = ±1, so q = ±(g_k ⋯ g_1)⁻¹
        let w = inverse(&w);
        let val = eval(&QuatGroup(alg), &self.presentation.gens, &w);
        let check = alg.mul(&val, &q.conj());
        if is_pm_one(&check) {
            Some(w)
        } else {
            None
        }
    }

    /// Random points of the disk are pushed into the domain; returns the
    /// number that landed inside and the longest word needed.
    pub fn tiling_spot_check(&self, samples: usize, seed: u64, max_steps: usize) -> (usize, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut ok, mut longest) = (0, 0);
        for _ in 0..samples {
            let r = 0.9 * rng.gen::<f64>().sqrt();
            let t = 2.0 * PI * rng.gen::<f64>();
            let (used, z) = self.reduce_point(Complex64::from_polar(r, t), max_steps);
            longest = longest.max(used.len());
            if self.contains(z, 1e-9) {
                ok += 1;
            }
        }
        (ok, longest)
    }

    pub fn canonical(&self, alg: &QuaternionAlgebra) -> Result<Canonical<QuaternionElement>, FordError> {
        Ok(canonicalize(&QuatGroup(alg), &self.presentation)?)
    }
}

/// Evaluate each relation exactly; `Some(±1)` when it is `±1`.
pub fn relation_values(alg: &QuaternionAlgebra, gens: &[QuaternionElement], relations: &[Word]) -> Vec<Option<i8>> {
    relations.iter().map(|w| sign_of_identity(&eval(&QuatGroup(alg), gens, w))).collect()
}

pub fn verify_presentation(alg: &QuaternionAlgebra, gens: &[QuaternionElement], relations: &[Word]) -> bool {
    relation_values(alg, gens, relations).iter().all(|v| v.is_some())
}

/// Parse `(A1 B1 A1^-1 B1^-1 X1)^2`-style words over `names`.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word, FordError> {
    fn item(chars: &[char], pos: &mut usize, names: &[String]) -> Result<Word, FordError> {
        let skip = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let mut out = Vec::new();
        loop {
            skip(pos);
            if *pos >= chars.len() || chars[*pos] == ')' {
                return Ok(out);
            }
            let base: Word = if chars[*pos] == '(' {
                *pos += 1;
                let w = item(chars, pos, names)?;
                if *pos >= chars.len() || chars[*pos] != ')' {
                    return Err(FordError::Parse("unbalanced parenthesis".into()));
                }
                *pos += 1;
                w
            } else {
                let st = *pos;
                while *pos < chars.len() && (chars[*pos].is_alphanumeric() || chars[*pos] == '_') {
                    *pos += 1;
                }
                let name: String = chars[st..*pos].iter().collect();
                let g = names.iter().position(|n| *n == name).ok_or_else(|| FordError::Parse(format!("unknown generator {name:?}")))?;
                vec![(g, 1)]
            };
            let mut e: i64 = 1;
            if *pos < chars.len() && chars[*pos] == '^' {
                *pos += 1;
                let st = *pos;
                if *pos < chars.len() && chars[*pos] == '-' {
                    *pos += 1;
                }
                while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let t: String = chars[st..*pos].iter().collect();
                e = t.parse().map_err(|_| FordError::Parse(format!("bad exponent {t:?}")))?;
            }
            let unit = if e < 0 { inverse(&base) } else { base };
            for _ in 0..e.unsigned_abs() {
                out.extend_from_slice(&unit);
            }
        }
    }
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let w = item(&chars, &mut pos, names)?;
    if pos != chars.len() {
        return Err(FordError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(w)
}

/// A published presentation evaluated on exact generators.
#[derive(Clone, Debug)]
pub struct CatalogPresentation {
    pub names: Vec<String>,
    pub values: Vec<QuaternionElement>,
    pub relations: Vec<Word>,
    /// `(lhs, rhs)` pairs claimed equal up to sign.
    pub identities: Vec<(Word, Word)>,
}

impl CatalogPresentation {
    pub fn from_entry(e: &AlgebraEntry, alg: &QuaternionAlgebra) -> Result<Self, FordError> {
        let grp = QuatGroup(alg);
        let mut names = Vec::new();
        let mut values = Vec::new();
        for (n, q) in e.named_elements(alg) {
            names.push(n);
            values.push(q);
        }
        let split = |s: &str| -> Result<(String, String), FordError> {
            let (l, r) = s.split_once('=').ok_or_else(|| FordError::Parse(format!("missing '=' in {s:?}")))?;
            Ok((l.trim().to_string(), r.trim().to_string()))
        };
        for d in &e.presentation.define {
            let (lhs, rhs) = split(d)?;
            let v = eval(&grp, &values, &parse_word(&rhs, &names)?);
            names.push(lhs);
            values.push(v);
        }
        let relations = e.presentation.relations.iter().map(|r| parse_word(r, &names)).collect::<Result<_, _>>()?;
        let identities = e
            .presentation
            .identities
            .iter()
            .map(|s| {
                let (l, r) = split(s)?;
                Ok((parse_word(&l, &names)?, parse_word(&r, &names)?))
            })
            .collect::<Result<_, FordError>>()?;
        Ok(CatalogPresentation { names, values, relations, identities })
    }

    pub fn relation_values(&self, alg: &QuaternionAlgebra) -> Vec<Option<i8>> {
        relation_values(alg, &self.values, &self.relations)
    }

    pub fn identities_hold(&self, alg: &QuaternionAlgebra) -> bool {
        let grp = QuatGroup(alg);
        self.identities.iter().all(|(l, r)| {
            let q = alg.mul(&eval(&grp, &self.values, l), &eval(&grp, &self.values, r).conj());
            is_pm_one(&q)
        })
    }
}

/// A torsion-free subgroup of genus two with standard generators.
#[derive(Clone, Debug)]
pub struct Genus2Subgroup {
    /// Images of the side-pairing generators in `Z/2` (empty for index 1).
    pub hom: Vec<u8>,
    pub generators: Vec<QuaternionElement>,
}

/// Genus-two subgroups of index at most two, each in the form
/// `⟨a,b,c,d | [a,b][c,d]⟩`.
pub fn genus2_subgroups(alg: &QuaternionAlgebra, dom: &FordDomain) -> Result<Vec<Genus2Subgroup>, FordError> {
    let grp = QuatGroup(alg);
    let index = 4.0 * PI / dom.area;
    let to_sub = |c: Canonical<QuaternionElement>, hom: Vec<u8>| -> Result<Genus2Subgroup, FordError> {
        if c.genus() != 2 || !c.cones.is_empty() {
            return Err(FordError::Word(WordError::NotSurfaceWord(format!(
                "subgroup normalised to genus {} with {} cone points",
                c.genus(),
                c.cones.len()
            ))));
        }
        Ok(Genus2Subgroup { hom, generators: c.generators() })
    };
    if (index - 1.0).abs() < 1e-6 {
        return Ok(vec![to_sub(canonicalize(&grp, &dom.presentation)?, Vec::new())?]);
    }
    if (index - 2.0).abs() > 1e-6 {
        return Err(FordError::NotSupportedIndex(index));
    }
    let mut out = Vec::new();
    for h in homs_to_z2(&dom.presentation) {
        if !kernel_torsion_free(&dom.presentation, &h) {
            continue;
        }
        let k = reidemeister_schreier(&grp, &dom.presentation, &h);
        out.push(to_sub(canonicalize(&grp, &k)?, h)?);
    }
    Ok(out)
}

/// Image of `q` under a homomorphism given on side-pairing generators.
pub fn hom_image(dom: &FordDomain, alg: &QuaternionAlgebra, emb: &Embedding, hom: &[u8], q: &QuaternionElement) -> Option<u8> {
    let w = dom.express(alg, emb, q)?;
    Some(words::image(hom, &w) as u8)
}

/// Everything the pipeline produces for one algebra.
#[derive(Clone, Debug)]
pub struct FordReport {
    pub embedding: Embedding,
    pub delta: FieldElement,
    pub domain: FordDomain,
    pub canonical: Canonical<QuaternionElement>,
    pub subgroups: Vec<Genus2Subgroup>,
    pub epsilons_tried: Vec<f64>,
}

/// Enumerate, build and, on `RefineEpsilon`, halve `ε` down to the floor.
pub fn ford_domain_with_refinement(
    order: &QuaternionOrder,
    delta: &FieldElement,
    emb: &mut Embedding,
    eps0: f64,
) -> Result<(FordDomain, Vec<f64>), FordError> {
    let alg = &order.algebra;
    let mut eps = eps0;
    let mut tried = Vec::new();
    loop {
        tried.push(eps);
        let els = enumerate_bounded_elements(order, delta, emb, eps)?;
        match build_ford_domain(alg, els, eps, emb.shift) {
            Ok(d) => return Ok((d, tried)),
            Err(FordError::OriginFixed) if emb.shift == Complex64::new(0.0, 0.0) => {
                emb.shift = RECENTER_SHIFT;
                tried.clear();
                eps = eps0;
            }
            Err(FordError::RefineEpsilon(reason)) => {
                if eps <= EPSILON_FLOOR {
                    return Err(FordError::EpsilonFloor { eps, reason });
                }
                eps = (eps / 2.0).max(EPSILON_FLOOR);
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn run_entry(e: &AlgebraEntry, alg: &QuaternionAlgebra, eps: Option<f64>) -> Result<FordReport, FordError> {
    let order = e.maximal_order(alg)?;
    let delta = e.ambient(&alg.field);
    let mut emb = Embedding::for_entry(e, alg)?;
    let (domain, epsilons_tried) = ford_domain_with_refinement(&order, &delta, &mut emb, eps.unwrap_or(e.epsilon))?;
    let canonical = domain.canonical(alg)?;
    let subgroups = genus2_subgroups(alg, &domain)?;
    Ok(FordReport { embedding: emb, delta, domain, canonical, subgroups, epsilons_tried })
}

/// Integer vector of `q` over `delta` in the table layout, if integral.
pub fn table_vector(q: &QuaternionElement, delta: &FieldElement) -> Option<Vec<BigInt>> {
    z_coords(&q.scale(delta)).into_iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
}
