//! Monogenic totally real number fields `Q[x]/(f)` with exact arithmetic and
//! certified real embeddings.

pub mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumfieldError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has {real} real roots out of {degree}")]
    NotTotallyReal { real: usize, degree: usize },
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("discriminant {computed} differs from expected {expected}")]
    DiscriminantMismatch { computed: BigInt, expected: BigInt },
    #[error("division by zero")]
    DivisionByZero,
    #[error("sign of zero requested")]
    PrecisionExhausted,
    #[error("unit system invalid: {0}")]
    BadUnits(String),
}

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealInterval {
    pub fn point(x: BigRational) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        (self.width() / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    fn add(&self, o: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &RealInterval) -> RealInterval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval { lo, hi }
    }
}

#[derive(Debug)]
pub struct FieldData {
    pub poly: Vec<BigInt>,
    pub degree: usize,
    pub disc: BigInt,
    poly_q: Vec<BigRational>,
    roots: Vec<RealInterval>,
    roots_f64: Vec<f64>,
}

/// A totally real number field given by a monic irreducible integer polynomial
/// whose power basis is an integral basis.
#[derive(Clone, Debug)]
pub struct NumberField(Arc<FieldData>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.poly == other.0.poly
    }
}
impl Eq for NumberField {}

const STORED_ROOT_BITS: u32 = 96;

impl NumberField {
    /// Validate `coeffs` (ascending, monic) and certify its real roots.
    pub fn new(coeffs: &[i64], expected_disc: &BigInt) -> Result<Self, NumfieldError> {
        let poly: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_bigint(poly, expected_disc)
    }

    pub fn from_bigint(mut poly: Vec<BigInt>, expected_disc: &BigInt) -> Result<Self, NumfieldError> {
        while poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        if poly.last().map(|c| c.is_one()) != Some(true) || poly.len() < 2 {
            return Err(NumfieldError::NotMonic);
        }
        let degree = poly.len() - 1;
        let poly_q = poly::to_q(&poly);
        let isolated = poly::isolate_real_roots(&poly_q);
        if isolated.len() != degree {
            return Err(NumfieldError::NotTotallyReal { real: isolated.len(), degree });
        }
        let roots: Vec<RealInterval> = isolated
            .iter()
            .map(|(lo, hi)| {
                let (lo, hi) = poly::refine_root(&poly_q, lo, hi, STORED_ROOT_BITS);
                RealInterval { lo, hi }
            })
            .collect();
        let roots_f64: Vec<f64> = roots.iter().map(|r| r.mid_f64()).collect();
        if degree > 1 && has_factor(&poly_q, &roots_f64) {
            return Err(NumfieldError::Reducible);
        }
        let disc = poly::discriminant(&poly);
        if &disc != expected_disc {
            return Err(NumfieldError::DiscriminantMismatch {
                computed: disc,
                expected: expected_disc.clone(),
            });
        }
        Ok(NumberField(Arc::new(FieldData { poly, degree, disc, poly_q, roots, roots_f64 })))
    }

    /// The rationals, presented as `Q[x]/(x)`.
    pub fn rationals() -> Self {
        Self::new(&[0, 1], &BigInt::one()).expect("x defines Q")
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn disc(&self) -> &BigInt {
        &self.0.disc
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.0.poly
    }

    pub fn roots_f64(&self) -> &[f64] {
        &self.0.roots_f64
    }

    /// Certified enclosure of the root for `place`, at least `bits` bits wide.
    pub fn root_interval(&self, place: usize, bits: u32) -> RealInterval {
        let r = &self.0.roots[place];
        if bits <= STORED_ROOT_BITS {
            return r.clone();
        }
        let (lo, hi) = poly::refine_root(&self.0.poly_q, &r.lo, &r.hi, bits);
        RealInterval { lo, hi }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_rational(&self, c: BigRational) -> FieldElement {
        let mut e = self.zero();
        e.coords[0] = c;
        e
    }

    /// The generator α (for degree 1 this is the root of `f`, a rational).
    pub fn gen(&self) -> FieldElement {
        if self.degree() == 1 {
            return self.from_rational(BigRational::from_integer(-self.0.poly[0].clone()));
        }
        let mut e = self.zero();
        e.coords[1] = BigRational::one();
        e
    }

    pub fn elem(&self, coords: &[i64]) -> FieldElement {
        self.elem_big(&coords.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    pub fn elem_big(&self, coords: &[BigInt]) -> FieldElement {
        self.elem_q(coords.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Element from power-basis coordinates; longer inputs are reduced mod `f`.
    pub fn elem_q(&self, mut coords: Vec<BigRational>) -> FieldElement {
        reduce_mod(&mut coords, &self.0.poly);
        coords.resize(self.degree(), BigRational::zero());
        FieldElement { field: self.clone(), coords }
    }
}

// A monic integer factor would be a product of (x - r) over a subset of the
// roots with integral elementary symmetric functions. Candidates are checked
// numerically, then confirmed by exact division.
fn has_factor(f: &[BigRational], roots: &[f64]) -> bool {
    let n = roots.len();
    (1..=n / 2).any(|d| {
        combinations(n, d).into_iter().any(|idx| {
            let mut c = vec![1.0f64];
            for &i in &idx {
                let mut next = vec![0.0; c.len() + 1];
                for (k, &ck) in c.iter().enumerate() {
                    next[k + 1] += ck;
                    next[k] -= ck * roots[i];
                }
                c = next;
            }
            if !c.iter().all(|x| (x - x.round()).abs() < 1e-6) {
                return false;
            }
            let g: Vec<BigRational> =
                c.iter().map(|x| BigRational::from_integer(BigInt::from(x.round() as i64))).collect();
            poly::div_exact(f, &g).is_some()
        })
    })
}

pub(crate) fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    if n < d {
        return Vec::new();
    }
    let mut out = combinations(n - 1, d);
    for mut c in combinations(n - 1, d - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn reduce_mod(c: &mut Vec<BigRational>, f: &[BigInt]) {
    let n = f.len() - 1;
    while c.len() > n {
        let top = c.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = c.len() - n;
        for i in 0..n {
            if !f[i].is_zero() {
                c[shift + i] -= &top * BigRational::from_integer(f[i].clone());
            }
        }
    }
}

/// Element of a number field in power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: NumberField,
    pub coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Integral in `Z[α]`, which is the ring of integers for catalog fields.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_int_coords(&self) -> Option<Vec<BigInt>> {
        if self.is_integral() {
            Some(self.coords.iter().map(|c| c.to_integer()).collect())
        } else {
            None
        }
    }

    /// Least positive integer `d` with `d·x` integral.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn scale(&self, s: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn scale_int(&self, s: i64) -> FieldElement {
        self.scale(&BigRational::from_integer(BigInt::from(s)))
    }

    /// Matrix of multiplication by `self` on the power basis; column j is `self·α^j`.
    pub fn mul_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.field.degree();
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let alpha = self.field.gen();
        for _ in 0..n {
            cols.push(cur.coords.clone());
            cur = &cur * &alpha;
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mul_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    pub fn norm(&self) -> BigRational {
        poly::det_q(self.mul_matrix())
    }

    pub fn trace_norm(&self) -> (BigRational, BigRational) {
        (self.trace(), self.norm())
    }

    pub fn inv(&self) -> Result<FieldElement, NumfieldError> {
        if self.is_zero() {
            return Err(NumfieldError::DivisionByZero);
        }
        let n = self.field.degree();
        let mut m = self.mul_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(NumfieldError::DivisionByZero)?;
            m.swap(piv, col);
            let p = m[col][col].clone();
            for c in col..=n {
                m[col][c] = &m[col][c] / &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let fct = m[r][col].clone();
                    for c in col..=n {
                        let t = &fct * &m[col][c];
                        m[r][c] -= t;
                    }
                }
            }
        }
        Ok(self.field.elem_q(m.into_iter().map(|mut r| r.pop().unwrap()).collect()))
    }

    pub fn div(&self, o: &FieldElement) -> Result<FieldElement, NumfieldError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Floating approximation of `σ_place(self)`.
    pub fn embed_f64(&self, place: usize) -> f64 {
        let r = self.field.0.roots_f64[place];
        self.coords.iter().rev().fold(0.0, |acc, c| acc * r + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Interval of width below `2^-bits` containing `σ_place(self)`.
    pub fn embed(&self, place: usize, bits: u32) -> RealInterval {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            return RealInterval::point(self.coords[0].clone());
        }
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let mut root_bits = bits + 16;
        loop {
            let iv = self.eval_interval(&self.field.root_interval(place, root_bits));
            if iv.width() < target {
                return iv;
            }
            root_bits += 32;
        }
    }

    fn eval_interval(&self, x: &RealInterval) -> RealInterval {
        let mut acc = RealInterval::point(BigRational::zero());
        for c in self.coords.iter().rev() {
            acc = acc.mul(x).add(&RealInterval::point(c.clone()));
        }
        acc
    }

    /// Certified sign at one place. Fails only for zero.
    pub fn sign_at(&self, place: usize) -> Result<i8, NumfieldError> {
        if self.is_zero() {
            return Err(NumfieldError::PrecisionExhausted);
        }
        let r = self.field.0.roots_f64[place];
        let mut v = 0.0f64;
        let mut mag = 0.0f64;
        for c in self.coords.iter().rev() {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            v = v * r + cf;
            mag = mag * r.abs() + cf.abs();
        }
        if v.is_finite() && v.abs() > 1e-9 * mag.max(1e-300) {
            return Ok(if v > 0.0 { 1 } else { -1 });
        }
        let mut bits = 64;
        loop {
            let iv = self.eval_interval(&self.field.root_interval(place, bits));
            if iv.lo.is_positive() {
                return Ok(1);
            }
            if iv.hi.is_negative() {
                return Ok(-1);
            }
            if bits > 1 << 14 {
                return Err(NumfieldError::PrecisionExhausted);
            }
            bits *= 2;
        }
    }

    pub fn signs_at_places(&self) -> Result<Vec<i8>, NumfieldError> {
        (0..self.field.degree()).map(|i| self.sign_at(i)).collect()
    }

    pub fn is_totally_positive(&self) -> bool {
        self.signs_at_places().is_ok_and(|s| s.iter().all(|&x| x > 0))
    }
}

fn add_coords(a: &FieldElement, b: &FieldElement, neg: bool) -> FieldElement {
    debug_assert!(a.field == b.field);
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| if neg { x - y } else { x + y })
        .collect();
    FieldElement { field: a.field.clone(), coords }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        add_coords(self, o, false)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        add_coords(self, o, true)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.field == o.field);
        let n = self.coords.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.field.elem_q(prod)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", a)?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}a", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}a^{}", if show_coeff { "*" } else { "" }, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Fundamental units of `Z[α]`, validated for norm ±1 and independence.
#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub fundamental_units: Vec<FieldElement>,
    pub includes_minus_one: bool,
}

impl UnitSystem {
    pub fn new(field: &NumberField, units: Vec<FieldElement>) -> Result<Self, NumfieldError> {
        let n = field.degree();
        if units.len() + 1 != n {
            return Err(NumfieldError::BadUnits(format!("expected {} units, got {}", n - 1, units.len())));
        }
        for u in &units {
            if !u.is_integral() || u.norm().abs() != BigRational::one() {
                return Err(NumfieldError::BadUnits(format!("{u} is not a unit")));
            }
        }
        // log embedding regulator, dropping the last place
        if n > 1 {
            let m: Vec<Vec<f64>> =
                (0..n - 1).map(|i| units.iter().map(|u| u.embed_f64(i).abs().ln()).collect()).collect();
            let reg = det_f64(m).abs();
            if reg < 1e-6 {
                return Err(NumfieldError::BadUnits("units are dependent".into()));
            }
        }
        Ok(UnitSystem { fundamental_units: units, includes_minus_one: true })
    }

    /// Sign vectors of −1 and the fundamental units.
    pub fn sign_vectors(&self, field: &NumberField) -> Vec<Vec<i8>> {
        let mut out = vec![vec![-1; field.degree()]];
        for u in &self.fundamental_units {
            out.push(u.signs_at_places().expect("units are nonzero"));
        }
        out
    }

    pub fn regulator(&self) -> f64 {
        let n = self.fundamental_units.len();
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| self.fundamental_units.iter().map(|u| u.embed_f64(i).abs().ln()).collect())
            .collect();
        det_f64(m).abs()
    }
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}
