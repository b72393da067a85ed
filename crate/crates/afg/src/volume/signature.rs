//! Fuchsian signatures (cocompact): areas, torsion-free indices, solving for
//! signatures of prescribed area, and the genus-two supersignature list.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

use super::VolumeError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub genus: u32,
    /// Elliptic periods, sorted ascending.
    pub periods: Vec<u32>,
}

impl Signature {
    pub fn new(genus: u32, mut periods: Vec<u32>) -> Self {
        periods.sort_unstable();
        Signature { genus, periods }
    }

    pub fn count(&self, m: u32) -> usize {
        self.periods.iter().filter(|&&x| x == m).count()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.periods.is_empty()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.periods.is_empty() {
            return write!(f, "({};-)", self.genus);
        }
        let p: Vec<String> = self.periods.iter().map(|m| m.to_string()).collect();
        write!(f, "({};{})", self.genus, p.join(","))
    }
}

impl FromStr for Signature {
    type Err = String;

    /// Accepts `(g;m1,m2,...)`, `(g;-)` and powers such as `(0;2^6)`.
    fn from_str(s: &str) -> Result<Self, String> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (g, rest) = body.split_once(';').ok_or_else(|| format!("bad signature {s}"))?;
        let genus = g.trim().parse().map_err(|_| format!("bad genus in {s}"))?;
        let mut periods = Vec::new();
        let rest = rest.trim();
        if rest != "-" && rest != "−" && !rest.is_empty() {
            for tok in rest.split(',') {
                let tok = tok.trim();
                if let Some((m, k)) = tok.split_once('^') {
                    let m: u32 = m.parse().map_err(|_| format!("bad period {tok}"))?;
                    let k: usize = k.parse().map_err(|_| format!("bad power {tok}"))?;
                    periods.extend(std::iter::repeat_n(m, k));
                } else {
                    periods.push(tok.parse().map_err(|_| format!("bad period {tok}"))?);
                }
            }
        }
        Ok(Signature::new(genus, periods))
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Area divided by 2π: 2g − 2 + Σ (1 − 1/m_i).
pub fn reduced_area(sig: &Signature) -> BigRational {
    let mut a = BigRational::from_integer(BigInt::from(2 * sig.genus as i64 - 2));
    for &m in &sig.periods {
        a += q(m as i64 - 1, m as i64);
    }
    a
}

/// Hyperbolic area as a rational multiple of π.
pub fn rh_area(sig: &Signature) -> Result<BigRational, VolumeError> {
    let a = reduced_area(sig) * BigRational::from_integer(BigInt::from(2));
    if a.is_positive() {
        Ok(a)
    } else {
        Err(VolumeError::NonHyperbolic(sig.to_string()))
    }
}

fn lcm_all(ms: &[u32]) -> u64 {
    ms.iter().fold(1u64, |acc, &m| acc.lcm(&(m as u64)))
}

/// Least index of a torsion-free subgroup: 2^ε · lcm(periods).
pub fn minimal_torsionfree_index(sig: &Signature) -> u64 {
    if sig.periods.is_empty() {
        return 1;
    }
    let l = lcm_all(&sig.periods);
    let odd_quotients = sig.periods.iter().filter(|&&m| (l / m as u64) % 2 == 1).count();
    let odd_type = l % 2 == 0 && odd_quotients % 2 == 1;
    if odd_type {
        2 * l
    } else {
        l
    }
}

/// Constraints for [`solve_signature_with`].
#[derive(Clone, Debug, Default)]
pub struct SignatureConstraints {
    /// Allowed periods.
    pub admissible: Vec<u32>,
    /// Orders m that must divide some period.
    pub forced_nonzero: Vec<u32>,
    /// Orders m that may divide no period.
    pub forced_zero: Vec<u32>,
    /// Exact multiplicities of given periods.
    pub fixed_counts: Vec<(u32, usize)>,
}

/// All signatures with area `area·π` whose periods are admissible, contain
/// every forced period and avoid every forbidden one.
pub fn solve_signature(
    area: &BigRational,
    admissible: &[u32],
    forced_nonzero: &[u32],
    forced_zero: &[u32],
) -> Vec<Signature> {
    solve_signature_with(
        area,
        &SignatureConstraints {
            admissible: admissible.to_vec(),
            forced_nonzero: forced_nonzero.to_vec(),
            forced_zero: forced_zero.to_vec(),
            fixed_counts: Vec::new(),
        },
    )
}

pub fn solve_signature_with(area: &BigRational, c: &SignatureConstraints) -> Vec<Signature> {
    let target = area / BigRational::from_integer(BigInt::from(2));
    let mut allowed: Vec<u32> = c
        .admissible
        .iter()
        .copied()
        .filter(|m| *m >= 2 && !c.forced_zero.iter().any(|z| m % z == 0))
        .collect();
    allowed.sort_unstable();
    allowed.dedup();
    let mut out = Vec::new();
    let max_g = (&target + BigRational::from_integer(BigInt::from(2))) / BigRational::from_integer(BigInt::from(2));
    let max_g = max_g.floor().to_integer().to_u32().unwrap_or(0);
    for g in 0..=max_g {
        let rest = &target - BigRational::from_integer(BigInt::from(2 * g as i64 - 2));
        if rest.is_negative() {
            continue;
        }
        let mut cur = Vec::new();
        periods_summing(&allowed, 0, &rest, &mut cur, &mut |ps| {
            let sig = Signature::new(g, ps.to_vec());
            if c.forced_nonzero.iter().all(|m| sig.periods.iter().any(|p| p % m == 0))
                && c.fixed_counts.iter().all(|&(m, k)| sig.count(m) == k)
            {
                out.push(sig);
            }
        });
    }
    out.sort();
    out
}

// Non-decreasing period lists (from allowed[start..]) with Σ(1 − 1/m) = rest.
fn periods_summing(
    allowed: &[u32],
    start: usize,
    rest: &BigRational,
    cur: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32]),
) {
    if rest.is_zero() {
        emit(cur);
        return;
    }
    for i in start..allowed.len() {
        let m = allowed[i];
        let t = q(m as i64 - 1, m as i64);
        if &t > rest {
            // terms increase with m
            break;
        }
        cur.push(m);
        periods_summing(allowed, i, &(rest - &t), cur, emit);
        cur.pop();
    }
}

/// Cocompact signatures that contain a torsion-free genus-two surface group
/// as a subgroup of index M ≥ 2: area 4π/M with the minimal torsion-free
/// index dividing M.
pub fn enumerate_genus2_supersignatures() -> Vec<Signature> {
    let mut out = Vec::new();
    for g in 0..=1u32 {
        let mut cur = Vec::new();
        supersig_rec(g, 2, &BigRational::zero(), 1, &mut cur, &mut out);
    }
    out.sort();
    out
}

const HURWITZ_MAX_INDEX: u64 = 84;

fn supersig_rec(
    g: u32,
    min_m: u32,
    sum: &BigRational,
    lcm: u64,
    cur: &mut Vec<u32>,
    out: &mut Vec<Signature>,
) {
    // reduced area A = 2g − 2 + sum must satisfy 0 < A ≤ 1 with 2/A an integer
    let a = BigRational::from_integer(BigInt::from(2 * g as i64 - 2)) + sum;
    if a.is_positive() && a <= BigRational::one() {
        let m = BigRational::from_integer(BigInt::from(2)) / &a;
        if m.is_integer() {
            let m = m.to_integer().to_u64().unwrap();
            let sig = Signature::new(g, cur.clone());
            if m >= 2 && m % minimal_torsionfree_index(&sig) == 0 {
                out.push(sig);
            }
        }
    }
    if a >= BigRational::one() {
        return;
    }
    for m in min_m..=HURWITZ_MAX_INDEX as u32 {
        let l = lcm.lcm(&(m as u64));
        if l > HURWITZ_MAX_INDEX {
            continue;
        }
        let s = sum + q(m as i64 - 1, m as i64);
        if BigRational::from_integer(BigInt::from(2 * g as i64 - 2)) + &s > BigRational::one() {
            break;
        }
        cur.push(m);
        supersig_rec(g, m, &s, l, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Signature {
        x.parse().unwrap()
    }

    #[test]
    fn areas() {
        assert_eq!(rh_area(&s("(2;-)")).unwrap(), q(4, 1));
        assert_eq!(rh_area(&s("(0;2,3,7)")).unwrap(), q(1, 21));
        assert_eq!(rh_area(&s("(1;2,2)")).unwrap(), q(2, 1));
        assert!(rh_area(&s("(0;2,2,2,2)")).is_err());
    }

    #[test]
    fn torsion_free_indices() {
        assert_eq!(minimal_torsionfree_index(&s("(0;2,3,7)")), 84);
        assert_eq!(minimal_torsionfree_index(&s("(0;2,2,3,3)")), 6);
        assert_eq!(minimal_torsionfree_index(&s("(2;-)")), 1);
        assert_eq!(minimal_torsionfree_index(&s("(1;2)")), 4);
    }

    #[test]
    fn solving() {
        assert_eq!(solve_signature(&q(2, 3), &[2, 3], &[2, 3], &[]), vec![s("(0;2,2,3,3)")]);
        assert_eq!(solve_signature(&q(1, 21), &[2, 3, 7], &[2, 3, 7], &[]), vec![s("(0;2,3,7)")]);
        let c = SignatureConstraints {
            admissible: vec![2],
            forced_nonzero: vec![2],
            forced_zero: vec![],
            fixed_counts: vec![(2, 2)],
        };
        assert_eq!(solve_signature_with(&q(2, 1), &c), vec![s("(1;2,2)")]);
    }

    #[test]
    fn display_round_trip() {
        assert_eq!(s("(0;2^6)").to_string(), "(0;2,2,2,2,2,2)");
        assert_eq!(s("(2;-)").to_string(), "(2;-)");
    }

    #[test]
    fn genus_two_list() {
        let all = enumerate_genus2_supersignatures();
        assert_eq!(all.len(), 33);
        for x in ["(0;2,3,7)", "(1;2,2)", "(0;2,2,2,2,2,2)"] {
            assert!(all.contains(&s(x)), "{x}");
        }
        assert!(!all.contains(&s("(0;2,3,11)")));
    }
}
