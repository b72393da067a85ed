//! ζ_k(2) by a truncated Euler product with an explicit tail bound.

use crate::ideals::{factor_prime, fp, poly_mod_p, primes_up_to};
use crate::numfield::NumberField;
use num_integer::Integer;
use num_bigint::BigInt;

pub const DEFAULT_ZETA_BOUND: u64 = 1_000_000;

// π(x) < 1.25506 x / ln x for x > 1 (Rosser–Schoenfeld), hence
// Σ_{p>B} p^{-2} < 2·1.25506 / (B ln B).
const PRIME_TAIL_CONSTANT: f64 = 2.51012;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaValue {
    pub value: f64,
    pub error_bound: f64,
    pub truncation: u64,
}

impl ZetaValue {
    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// Norms of the primes above `p`.
pub fn prime_norms(field: &NumberField, p: u64) -> Vec<f64> {
    let d = field.disc();
    if d.is_multiple_of(&BigInt::from(p)) {
        return factor_prime(field, p).iter().map(|pr| pr.norm_u64() as f64).collect();
    }
    // p ∤ disc(f): f mod p is squarefree and factor degrees are the residue degrees
    fp::factor_degrees(&poly_mod_p(field, p), p).into_iter().map(|deg| (p as f64).powi(deg as i32)).collect()
}

/// Euler product over primes `p ≤ bound`. The true value lies in
/// `[ζ_B, ζ_B·e^T]` where `T` bounds the logarithm of the tail; the
/// midpoint is returned with half the width plus a rounding allowance.
pub fn dedekind_zeta2(field: &NumberField, bound: u64) -> ZetaValue {
    let bound = bound.max(2);
    let n = field.degree() as f64;
    let mut log_sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut terms = 0usize;
    for p in primes_up_to(bound) {
        for norm in prime_norms(field, p) {
            // Kahan summation of -ln(1 - N^-2)
            let t = -(-(norm * norm).recip()).ln_1p() - comp;
            let s = log_sum + t;
            comp = (s - log_sum) - t;
            log_sum = s;
            terms += 1;
        }
    }
    let b = bound as f64;
    let tail = n * PRIME_TAIL_CONSTANT / (b * b.ln()) / (1.0 - b.powi(-2));
    let base = log_sum.exp();
    let rounding = base * (terms as f64 + 10.0) * 4.0 * f64::EPSILON;
    let half = base * tail.exp_m1() / 2.0;
    ZetaValue { value: base + half, error_bound: half + rounding, truncation: bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_zeta_two() {
        let z = dedekind_zeta2(&NumberField::rationals(), 100_000);
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((z.value - exact).abs() <= z.error_bound);
        assert!(z.error_bound < 1e-5);
    }

    #[test]
    fn truncations_agree() {
        let k = NumberField::new(&[1, -2, -1, 1], &BigInt::from(49)).unwrap();
        let a = dedekind_zeta2(&k, 10_000);
        let b = dedekind_zeta2(&k, 100_000);
        assert!((a.value - b.value).abs() <= a.error_bound);
        assert!(b.error_bound < a.error_bound);
    }
}
