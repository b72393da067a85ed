//! Areas of arithmetic Fuchsian groups, torsion counts, signatures and the
//! degree bounds that restrict where genus-two groups can live.

pub mod signature;
pub mod zeta;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ideals::{admissible_periods, splitting_in_cm_extension, IdealError, PrimeIdeal, SplittingBehavior};
use crate::numfield::NumberField;

pub use signature::{
    enumerate_genus2_supersignatures, minimal_torsionfree_index, reduced_area, rh_area, solve_signature,
    solve_signature_with, Signature, SignatureConstraints,
};
pub use zeta::{dedekind_zeta2, ZetaValue, DEFAULT_ZETA_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error("signature {0} is not hyperbolic")]
    NonHyperbolic(String),
    #[error("several multiples of π fit: {0:?}")]
    AmbiguousRecognition(Vec<BigRational>),
    #[error("relative integral basis hypothesis fails for m = {m} (d_k divisible by {p})")]
    BasisHypothesisFails { m: u32, p: u32 },
    #[error("unit index {0} is not 1 or a power of 2")]
    BadUnitIndex(i64),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// A real number with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

impl Approx {
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.error
    }
}

/// Coarea of the norm-one group of a maximal order:
/// `8π d^{3/2} ζ_k(2) Π (N(P) − 1) / (4π²)^n`.
pub fn coarea(field: &NumberField, ram_finite: &[PrimeIdeal], zeta: &ZetaValue) -> Approx {
    let n = field.degree() as i32;
    let d = field.disc().to_f64().unwrap().abs();
    let ram: f64 = ram_finite.iter().map(|p| p.norm_u64() as f64 - 1.0).product();
    let scale = 8.0 * PI * d.powf(1.5) * ram / (4.0 * PI * PI).powi(n);
    let value = scale * zeta.value;
    Approx { value, error: scale * zeta.error_bound + value * 1e-13 }
}

/// Recognise `x ≈ qπ` with `q` of denominator at most `max_denominator`.
pub fn recognize_pi_multiple(x: Approx, max_denominator: u64) -> Result<Option<BigRational>, VolumeError> {
    let t = x.value / PI;
    let tol = x.error / PI;
    let mut found: Vec<BigRational> = Vec::new();
    for q in 1..=max_denominator.max(1) {
        let qf = q as f64;
        let lo = ((t - tol) * qf).ceil() as i64;
        let hi = ((t + tol) * qf).floor() as i64;
        for p in lo..=hi {
            let r = BigRational::new(BigInt::from(p), BigInt::from(q));
            if !found.contains(&r) {
                found.push(r);
            }
        }
        if found.len() > 1 {
            return Err(VolumeError::AmbiguousRecognition(found));
        }
    }
    Ok(found.pop())
}

/// `a_m = (h⁻ / unit_index) · Π (1 − artin(P))` over the finite ramified primes.
pub fn torsion_count(h_minus: i64, unit_index: i64, behaviors: &[SplittingBehavior]) -> Result<i64, VolumeError> {
    if unit_index < 1 || (unit_index as u64).count_ones() != 1 {
        return Err(VolumeError::BadUnitIndex(unit_index));
    }
    let prod: i64 = behaviors.iter().map(|b| 1 - b.artin()).product();
    Ok(h_minus * prod / unit_index)
}

/// The relative integral basis `{1, ζ_2m}` needed by [`torsion_count`] is
/// available for m = 2 when 2 ∤ d_k and for m = 3 when 3 ∤ d_k.
pub fn check_basis_hypothesis(field: &NumberField, m: u32) -> Result<(), VolumeError> {
    let p = match m {
        2 => 2,
        3 => 3,
        _ => return Err(VolumeError::BasisHypothesisFails { m, p: m }),
    };
    if field.disc().is_multiple_of(&BigInt::from(p)) {
        Err(VolumeError::BasisHypothesisFails { m, p })
    } else {
        Ok(())
    }
}

/// Unit index forced to 1 by the discriminant, when the field permits it.
pub fn trivial_unit_index(field: &NumberField, m: u32) -> Option<i64> {
    check_basis_hypothesis(field, m).ok().map(|_| 1)
}

/// `torsion_count` with the splitting behaviours computed and the basis
/// hypothesis enforced.
pub fn torsion_count_for(
    field: &NumberField,
    ram_finite: &[PrimeIdeal],
    m: u32,
    h_minus: i64,
    unit_index: i64,
) -> Result<i64, VolumeError> {
    check_basis_hypothesis(field, m)?;
    let behaviors = ram_finite
        .iter()
        .map(|p| splitting_in_cm_extension(field, p, m))
        .collect::<Result<Vec<_>, _>>()?;
    torsion_count(h_minus, unit_index, &behaviors)
}

/// Elements of order m exist iff k_m ⊂ k and no finite ramified prime splits
/// in k(ζ_2m) | k.
pub fn has_order_m_elements(field: &NumberField, ram_finite: &[PrimeIdeal], m: u32) -> Result<bool, VolumeError> {
    if !admissible_periods(field).contains(&m) {
        return Ok(false);
    }
    for p in ram_finite {
        if splitting_in_cm_extension(field, p, m)? == SplittingBehavior::Split {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Periods that actually occur as element orders.
pub fn torsion_periods(field: &NumberField, ram_finite: &[PrimeIdeal]) -> Result<Vec<u32>, VolumeError> {
    let mut out = Vec::new();
    for m in admissible_periods(field) {
        if has_order_m_elements(field, ram_finite, m)? {
            out.push(m);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorsionProfile {
    pub counts: BTreeMap<u32, i64>,
}

/// Numbers of the degree-bound argument for genus-two arithmetic groups.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeBoundReport {
    /// Largest n with the Odlyzko lower bound compatible with area ≤ 4π.
    pub odlyzko_max_degree: u32,
    /// Area lower bounds 8π d^{3/2}/(4π²)^n at the smallest totally real
    /// discriminants of degrees 7 and 8.
    pub degree7_value: f64,
    pub degree8_value: f64,
    /// ((3(4π²)^6)/8)^{2/3} and its integer floor.
    pub degree6_ceiling: f64,
    pub degree6_floor: u64,
    /// Least integer strictly above the ceiling.
    pub degree6_strict_bound: u64,
}

pub const MIN_DISC_DEGREE7: u64 = 20_134_393;
pub const MIN_DISC_DEGREE8: u64 = 282_300_416;
const ODLYZKO_A: f64 = 2.439e-4;
const ODLYZKO_B: f64 = 29.099;

/// `8π d^{3/2} / (4π²)^n`, the smallest possible coarea over a field of
/// degree n and discriminant d.
pub fn area_lower_bound(d: f64, n: i32) -> f64 {
    8.0 * PI * d.powf(1.5) / (4.0 * PI * PI).powi(n)
}

pub fn degree_bound_report() -> DegreeBoundReport {
    let mut odlyzko_max_degree = 1;
    for n in 1..=40 {
        let d = ODLYZKO_A * ODLYZKO_B.powi(n);
        if area_lower_bound(d, n) <= 4.0 * PI {
            odlyzko_max_degree = n as u32;
        }
    }
    let ceiling = (3.0 * (4.0 * PI * PI).powi(6) / 8.0).powf(2.0 / 3.0);
    let floor = ceiling.floor() as u64;
    DegreeBoundReport {
        odlyzko_max_degree,
        degree7_value: area_lower_bound(MIN_DISC_DEGREE7 as f64, 7),
        degree8_value: area_lower_bound(MIN_DISC_DEGREE8 as f64, 8),
        degree6_ceiling: ceiling,
        degree6_floor: floor,
        degree6_strict_bound: floor + 1,
    }
}

/// Index `M = 4π / μ` when it is a positive integer.
pub fn genus2_index(area: &BigRational) -> Option<u64> {
    if !area.is_positive() {
        return None;
    }
    let m = BigRational::from_integer(BigInt::from(4)) / area;
    if m.is_integer() && !m.is_zero() {
        m.to_integer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::factor_prime;

    fn k7() -> NumberField {
        NumberField::new(&[1, -2, -1, 1], &BigInt::from(49)).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn recognition() {
        let one = recognize_pi_multiple(Approx { value: 3.14159265, error: 1e-8 }, 100).unwrap();
        assert_eq!(one, Some(q(1, 1)));
        let r = recognize_pi_multiple(Approx { value: 0.14959965, error: 1e-6 }, 100).unwrap();
        assert_eq!(r, Some(q(1, 21)));
        assert!(matches!(
            recognize_pi_multiple(Approx { value: 1.047, error: 0.2 }, 100),
            Err(VolumeError::AmbiguousRecognition(_))
        ));
    }

    #[test]
    fn torsion_counts() {
        use SplittingBehavior::*;
        assert_eq!(torsion_count(3, 1, &[Inert]).unwrap(), 6);
        assert_eq!(torsion_count(1, 1, &[Ramified, Inert]).unwrap(), 2);
        assert_eq!(torsion_count(5, 2, &[Split, Inert]).unwrap(), 0);
        assert!(torsion_count(1, 3, &[]).is_err());
    }

    #[test]
    fn k7_torsion() {
        let k = k7();
        let ram: Vec<PrimeIdeal> = factor_prime(&k, 2).into_iter().chain(factor_prime(&k, 7)).collect();
        assert!(has_order_m_elements(&k, &ram, 2).unwrap());
        assert!(!has_order_m_elements(&k, &ram, 3).unwrap());
        assert!(has_order_m_elements(&k, &[], 3).unwrap());
        // 2 ∤ 49 so the m = 2 formula applies
        assert_eq!(torsion_count_for(&k, &ram, 2, 1, 1).unwrap(), 2);
    }

    #[test]
    fn k7_coarea_is_pi_over_21() {
        let k = k7();
        let z = dedekind_zeta2(&k, 200_000);
        let mu = coarea(&k, &[], &z);
        // the maximal order with Ram_f = ∅ gives the (2,3,7) triangle group
        assert!(mu.contains(PI / 21.0), "{mu:?}");
        assert_eq!(recognize_pi_multiple(mu, 100).unwrap(), Some(q(1, 21)));
    }

    #[test]
    fn degree_bounds() {
        let r = degree_bound_report();
        assert_eq!(r.odlyzko_max_degree, 8);
        assert!((r.degree7_value - 15.1925).abs() < 5e-4);
        assert!((r.degree8_value - 20.2036).abs() < 5e-4);
        assert_eq!(r.degree6_floor, 1_263_164);
        assert_eq!(r.degree6_strict_bound, 1_263_165);
    }

    #[test]
    fn genus2_indices() {
        assert_eq!(genus2_index(&q(1, 21)), Some(84));
        assert_eq!(genus2_index(&q(3, 1)), None);
    }
}
