//! Verification of the genus-two classification rows: coarea, admissible
//! ramification sets, signatures from torsion data, and conjugacy classes
//! through the restricted class number.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::catalog::{resolve_primes, Catalog, CatalogError, FieldEntry, RowEntry};
use crate::ideals::{admissible_periods, primes_of_norm_up_to, PrimeIdeal};
use crate::numfield::{NumberField, NumfieldError, UnitSystem};
use crate::volume::{
    check_basis_hypothesis, coarea, dedekind_zeta2, genus2_index, minimal_torsionfree_index,
    recognize_pi_multiple, rh_area, solve_signature_with, torsion_count_for, torsion_periods, Approx, Signature,
    SignatureConstraints, VolumeError,
};

/// Largest denominator tried when reading a coarea as a rational multiple of π.
pub const MAX_PI_DENOMINATOR: u64 = 420;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("{row}: {diff}")]
    RowMismatch { row: String, diff: String },
    #[error("type-number simplification does not apply: {0}")]
    SimplificationInapplicable(String),
    #[error("no elimination argument applies to {0}")]
    ScreenInconclusive(String),
    #[error("coarea {0} is not recognisably a rational multiple of π")]
    Unrecognised(f64),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Numfield(#[from] NumfieldError),
}

/// `h_∞ = h·2^{n−1} / |R* : R* ∩ k*_∞|` where the index is the size of the
/// image of the units in the sign group of the ramified real places.
pub fn restricted_class_number(h: i64, n: usize, field: &NumberField, units: &UnitSystem, ram_real: &[usize]) -> i64 {
    let vectors: Vec<Vec<u8>> = units
        .sign_vectors(field)
        .into_iter()
        .map(|s| ram_real.iter().map(|&p| (s[p] < 0) as u8).collect())
        .collect();
    let rank = f2_rank(vectors);
    h * (1i64 << (n - 1)) / (1i64 << rank)
}

fn f2_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] == 1) else { continue };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] == 1 {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Galois,
    SignTable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyReport {
    /// `(unramified place, h_∞)` for every admissible choice of place.
    pub h_infinity: Vec<(usize, i64)>,
    pub count: u64,
    pub method: CountMethod,
}

/// Number of conjugacy classes of `Γ_O¹` for a row, when one of the two
/// type-number simplifications applies.
pub fn conjugacy_class_count(entry: &FieldEntry, ram_finite: &[PrimeIdeal]) -> Result<ConjugacyReport, ClassifyError> {
    let k = entry.field()?;
    let n = k.degree();
    let units = entry.unit_system(&k)?;
    let h_infinity: Vec<(usize, i64)> = (0..n)
        .map(|place| {
            let ram: Vec<usize> = (0..n).filter(|&p| p != place).collect();
            (place, restricted_class_number(entry.class_number, n, &k, &units, &ram))
        })
        .collect();
    if entry.galois && entry.automorphisms as usize == n {
        // a single orbit needs every ramified prime to be Galois stable
        if let Some(p) = ram_finite.iter().find(|p| crate::ideals::factor_prime(&k, p.p).len() > 1) {
            return Err(ClassifyError::SimplificationInapplicable(format!(
                "{}: {} has Galois conjugates",
                entry.id,
                p.label()
            )));
        }
        return Ok(ConjugacyReport { h_infinity, count: 1, method: CountMethod::Galois });
    }
    if entry.proper_subfields || entry.galois {
        return Err(ClassifyError::SimplificationInapplicable(format!("{}: field has proper subfields", entry.id)));
    }
    let mut count = 0u64;
    for &(place, h_inf) in &h_infinity {
        let t = if h_inf == 1 {
            1
        } else if ram_finite.is_empty() && entry.class_number == 1 {
            h_inf as u64
        } else {
            return Err(ClassifyError::SimplificationInapplicable(format!(
                "{}: h_inf = {h_inf} at place {place} with Ram_f nonempty",
                entry.id
            )));
        };
        count += t;
    }
    Ok(ConjugacyReport { h_infinity, count, method: CountMethod::SignTable })
}

/// Coarea with no finite ramification, as `(value, recognised multiple of π)`.
pub fn field_coarea(k: &NumberField, zeta_bound: u64) -> Result<(Approx, BigRational), ClassifyError> {
    let mu = coarea(k, &[], &dedekind_zeta2(k, zeta_bound));
    let q = recognize_pi_multiple(mu, MAX_PI_DENOMINATOR)?.ok_or(ClassifyError::Unrecognised(mu.value))?;
    Ok((mu, q))
}

/// One admissible `(M, Ram_f)` with `M · μ · Π(N(P) − 1) = 4π`.
#[derive(Clone, Debug)]
pub struct RamificationSolution {
    pub ram: Vec<PrimeIdeal>,
    pub index: u64,
    /// Area of `Γ_O¹` as a multiple of π.
    pub area: BigRational,
    pub signature: SignatureOutcome,
}

impl RamificationSolution {
    pub fn label(&self) -> String {
        if self.ram.is_empty() {
            "∅".into()
        } else {
            self.ram.iter().map(|p| p.label()).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureOutcome {
    Unique(Signature),
    /// Several signatures fit the torsion data.
    Ambiguous(Vec<Signature>),
    /// No signature with a genus-two torsion-free subgroup of this index.
    None,
}

/// Torsion constraints for `Γ_O¹` with the given finite ramification.
pub fn torsion_constraints(entry: &FieldEntry, k: &NumberField, ram: &[PrimeIdeal]) -> Result<SignatureConstraints, ClassifyError> {
    let periods = torsion_periods(k, ram)?;
    let forbidden: Vec<u32> = admissible_periods(k).into_iter().filter(|m| !periods.contains(m)).collect();
    let mut fixed = Vec::new();
    for m in [2u32, 3] {
        // a_m counts maximal cyclic subgroups; only pin it when no larger
        // period absorbs the order-m elements
        if !periods.contains(&m) || periods.iter().any(|&p| p > m && p % m == 0) {
            continue;
        }
        if check_basis_hypothesis(k, m).is_err() {
            continue;
        }
        if let Some(cm) = entry.cm_data(m) {
            let a = torsion_count_for(k, ram, m, cm.h_minus, cm.unit_index)?;
            fixed.push((m, a as usize));
        }
    }
    Ok(SignatureConstraints { admissible: periods.clone(), forced_nonzero: periods, forced_zero: forbidden, fixed_counts: fixed })
}

/// Signature of `Γ_O¹` from its area and torsion, restricted to those with a
/// torsion-free subgroup of index `index`.
pub fn derive_signature(area: &BigRational, index: u64, c: &SignatureConstraints) -> SignatureOutcome {
    let mut sigs: Vec<Signature> =
        solve_signature_with(area, c).into_iter().filter(|s| index % minimal_torsionfree_index(s) == 0).collect();
    match sigs.len() {
        0 => SignatureOutcome::None,
        1 => SignatureOutcome::Unique(sigs.remove(0)),
        _ => SignatureOutcome::Ambiguous(sigs),
    }
}

/// All `(M, Ram_f)` over `k` with an integral index, in ascending order of
/// the prime norms.
pub fn ramification_solutions(
    entry: &FieldEntry,
    k: &NumberField,
    mu: &BigRational,
) -> Result<Vec<RamificationSolution>, ClassifyError> {
    let n = k.degree();
    let four = BigRational::from_integer(BigInt::from(4));
    let budget = &four / mu;
    // a ramified prime multiplies the area by N(P) − 1 ≤ 4π/μ
    let bound = budget.floor().to_integer().to_u64().unwrap_or(0) + 1;
    let primes = if bound >= 2 { primes_of_norm_up_to(k, bound) } else { Vec::new() };
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    subsets(&primes, 0, &BigRational::one(), &budget, &mut cur, &mut |set: &[usize], prod: &BigRational| {
        // |Ram_∞| + |Ram_f| = (n − 1) + |Ram_f| is even
        if (n - 1 + set.len()) % 2 != 0 {
            return;
        }
        let area = mu * prod;
        if let Some(m) = genus2_index(&area) {
            out.push((set.to_vec(), m, area));
        }
    });
    let mut sols = Vec::new();
    for (set, m, area) in out {
        let ram: Vec<PrimeIdeal> = set.iter().map(|&i| primes[i].clone()).collect();
        let c = torsion_constraints(entry, k, &ram)?;
        let signature = derive_signature(&area, m, &c);
        sols.push(RamificationSolution { ram, index: m, area, signature });
    }
    Ok(sols)
}

fn subsets(
    primes: &[PrimeIdeal],
    start: usize,
    prod: &BigRational,
    budget: &BigRational,
    cur: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], &BigRational),
) {
    emit(cur, prod);
    for i in start..primes.len() {
        let f = BigRational::from_integer(BigInt::from(primes[i].norm_u64() - 1));
        let next = prod * &f;
        if &next > budget {
            // norms ascend
            break;
        }
        cur.push(i);
        subsets(primes, i + 1, &next, budget, cur, emit);
        cur.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountCheck {
    /// Computed by a type-number simplification and equal to the table.
    Verified(ConjugacyReport),
    /// Needs type-number data beyond the simplifications; the table value is
    /// taken as given.
    Flagged { reason: String, table: u64 },
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub field: String,
    pub ram: String,
    pub index: u64,
    pub signature: Signature,
    /// Coarea of the field as a multiple of π (degrees ≥ 3 only).
    pub coarea: Option<BigRational>,
    pub solutions: Vec<RamificationSolution>,
    pub count: CountCheck,
    /// Only index × area was checked (rows of degree 1 and 2).
    pub arithmetic_only: bool,
}

impl fmt::Display for RowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let count = match &self.count {
            CountCheck::Verified(r) => format!("{}", r.count),
            CountCheck::Flagged { table, .. } => format!("{table}*"),
        };
        write!(f, "{:<8} {:<10} {:>3} {:<18} {}", self.field, self.ram, self.index, self.signature.to_string(), count)
    }
}

fn mismatch(row: &RowEntry, diff: String) -> ClassifyError {
    ClassifyError::RowMismatch { row: format!("{} {}", row.field, row.ram_label()), diff }
}

/// Recompute a classification row and compare it with the table.
pub fn verify_row(cat: &Catalog, row: &RowEntry, zeta_bound: u64) -> Result<RowReport, ClassifyError> {
    let entry = cat.field(&row.field)?;
    let k = entry.field()?;
    let sig = row.signature()?;
    let area = rh_area(&sig)?;
    if &area * BigRational::from_integer(BigInt::from(row.index)) != BigRational::from_integer(BigInt::from(4)) {
        return Err(mismatch(row, format!("index {} × area {}π ≠ 4π", row.index, area)));
    }
    let ram = resolve_primes(&k, &row.ram)?;
    let count = match conjugacy_class_count(entry, &ram) {
        Ok(r) if row.count_source != "table" => {
            if r.count != row.count {
                return Err(mismatch(row, format!("conjugacy count {} ≠ table {}", r.count, row.count)));
            }
            CountCheck::Verified(r)
        }
        Ok(r) => CountCheck::Flagged { reason: format!("simplified rule gives {}", r.count), table: row.count },
        Err(ClassifyError::SimplificationInapplicable(reason)) => CountCheck::Flagged { reason, table: row.count },
        Err(e) => return Err(e),
    };
    let mut report = RowReport {
        field: row.field.clone(),
        ram: row.ram_label(),
        index: row.index,
        signature: sig.clone(),
        coarea: None,
        solutions: Vec::new(),
        count,
        arithmetic_only: row.degree < 3,
    };
    if row.degree < 3 {
        return Ok(report);
    }
    let (_, mu) = field_coarea(&k, zeta_bound)?;
    if let Some(c) = cat.coareas.iter().find(|c| c.field == row.field) {
        if c.value()? != mu {
            return Err(mismatch(row, format!("coarea {mu}π, catalog {}π", c.value()?)));
        }
    }
    let sols = ramification_solutions(entry, &k, &mu)?;
    let want: BTreeSet<String> = ram.iter().map(|p| p.label()).collect();
    let hit = sols
        .iter()
        .find(|s| s.ram.iter().map(|p| p.label()).collect::<BTreeSet<_>>() == want)
        .ok_or_else(|| mismatch(row, format!("Ram_f = {} gives no integral index", row.ram_label())))?;
    if hit.index != row.index {
        return Err(mismatch(row, format!("index {} ≠ table {}", hit.index, row.index)));
    }
    match &hit.signature {
        SignatureOutcome::Unique(s) if *s == sig => {}
        other => return Err(mismatch(row, format!("derived signature {other:?} ≠ table {sig}"))),
    }
    report.coarea = Some(mu);
    report.solutions = sols;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elimination {
    /// Smallest admissible area already exceeds 4π.
    AreaTooLarge { min_area: f64 },
    /// No ramification set gives an integral index.
    NoSolution,
    /// Every solution is blocked by torsion.
    ForcedTorsion { solutions: Vec<(String, u64, Vec<u32>)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScreenReport {
    pub field: String,
    pub coarea: f64,
    pub elimination: Elimination,
}

/// Least area of `Γ_O¹` over `k`: `μ` when `Ram_f = ∅` is allowed by
/// parity, otherwise `μ (N(P) − 1)` for the prime of least norm.
pub fn minimal_admissible_area(k: &NumberField, mu: f64) -> f64 {
    let n = k.degree();
    if (n - 1) % 2 == 0 {
        return mu;
    }
    let mut bound = 16;
    loop {
        if let Some(p) = primes_of_norm_up_to(k, bound).first() {
            return mu * (p.norm_u64() - 1) as f64;
        }
        bound *= 4;
    }
}

/// Show that a field carries no genus-two arithmetic group.
pub fn negative_screen(cat: &Catalog, field: &str, zeta_bound: u64) -> Result<ScreenReport, ClassifyError> {
    let entry = cat.field(field)?;
    let k = entry.field()?;
    let mu = coarea(&k, &[], &dedekind_zeta2(&k, zeta_bound));
    let four_pi = 4.0 * std::f64::consts::PI;
    let least = minimal_admissible_area(&k, mu.value - mu.error);
    if least > four_pi {
        let min_area = minimal_admissible_area(&k, mu.value);
        return Ok(ScreenReport { field: field.into(), coarea: mu.value, elimination: Elimination::AreaTooLarge { min_area } });
    }
    let q = recognize_pi_multiple(mu, MAX_PI_DENOMINATOR)?.ok_or(ClassifyError::Unrecognised(mu.value))?;
    let sols = ramification_solutions(entry, &k, &q)?;
    if sols.is_empty() {
        return Ok(ScreenReport { field: field.into(), coarea: mu.value, elimination: Elimination::NoSolution });
    }
    if sols.iter().all(|s| s.signature == SignatureOutcome::None) {
        let mut blocked = Vec::new();
        for s in &sols {
            blocked.push((s.label(), s.index, torsion_periods(&k, &s.ram)?));
        }
        return Ok(ScreenReport {
            field: field.into(),
            coarea: mu.value,
            elimination: Elimination::ForcedTorsion { solutions: blocked },
        });
    }
    Err(ClassifyError::ScreenInconclusive(field.into()))
}

/// Rows of the table at a given degree (all rows for `None`).
pub fn rows_of_degree(cat: &Catalog, degree: Option<usize>) -> Vec<&RowEntry> {
    cat.rows.iter().filter(|r| degree.map_or(true, |d| r.degree == d)).collect()
}

/// `index × rh_area = 4π` for every row, the check that needs no field data.
pub fn table_is_consistent(cat: &Catalog) -> bool {
    cat.rows.iter().all(|r| {
        r.signature()
            .ok()
            .and_then(|s| rh_area(&s).ok())
            .map_or(false, |a| a * BigRational::from_integer(BigInt::from(r.index)) == BigRational::from_integer(4.into()))
    })
}
