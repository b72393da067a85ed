use afg::catalog::{resolve_primes, Catalog};
use afg::classify::*;
use afg::ideals::{factor_prime, splitting_in_cm_extension, SplittingBehavior};
use afg::volume::{torsion_count_for, Signature};
use num_bigint::BigInt;
use num_rational::BigRational;

const ZETA_BOUND: u64 = 200_000;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sig(s: &str) -> Signature {
    s.parse().unwrap()
}

#[test]
fn restricted_class_numbers() {
    let cat = Catalog::builtin();
    for (f, want) in [("d3981", vec![1, 1, 1, 1]), ("d1957", vec![1, 1, 1, 1]), ("d229", vec![2, 1, 1])] {
        let e = cat.field(f).unwrap();
        let k = e.field().unwrap();
        let u = e.unit_system(&k).unwrap();
        let n = k.degree();
        let got: Vec<i64> = (0..n)
            .map(|p| {
                let ram: Vec<usize> = (0..n).filter(|&r| r != p).collect();
                restricted_class_number(e.class_number, n, &k, &u, &ram)
            })
            .collect();
        assert_eq!(got, want, "{f}");
        for h in got {
            assert_eq!((e.class_number << (n - 1)) % h, 0);
        }
    }
}

#[test]
fn conjugacy_counts() {
    let cat = Catalog::builtin();
    let count = |f: &str, ram: &[&str]| {
        let e = cat.field(f).unwrap();
        let k = e.field().unwrap();
        let labels: Vec<String> = ram.iter().map(|s| s.to_string()).collect();
        conjugacy_class_count(e, &resolve_primes(&k, &labels).unwrap())
    };
    let k7 = count("k7", &["P2", "P7"]).unwrap();
    assert_eq!((k7.count, k7.method), (1, CountMethod::Galois));
    let d3981 = count("d3981", &["P3"]).unwrap();
    assert_eq!((d3981.count, d3981.method), (4, CountMethod::SignTable));
    assert_eq!(count("d2304", &["P3"]).unwrap().count, 1);
    // t = h_inf when Ram_f is empty and h = 1
    assert_eq!(count("d229", &[]).unwrap().count, 4);
    assert!(matches!(count("d229", &["P2", "P2'"]), Err(ClassifyError::SimplificationInapplicable(_))));
    assert!(matches!(count("d4752", &["P2"]), Err(ClassifyError::SimplificationInapplicable(_))));
}

#[test]
fn worked_rows() {
    let cat = Catalog::builtin();
    let row = |f: &str, ram: &[&str]| {
        cat.rows.iter().find(|r| r.field == f && r.ram == ram.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap()
    };
    let r = verify_row(&cat, row("d38569", &[]), ZETA_BOUND).unwrap();
    assert_eq!((r.index, r.signature.clone()), (6, sig("(0;2,2,3,3)")));
    assert_eq!(r.coarea, Some(q(2, 3)));
    let r = verify_row(&cat, row("d1957", &["P7"]), ZETA_BOUND).unwrap();
    assert_eq!((r.index, r.signature.clone()), (2, sig("(1;2,2)")));
    let r = verify_row(&cat, row("k7", &[]), ZETA_BOUND).unwrap();
    assert_eq!(r.signature, sig("(0;2,3,7)"));
    assert_eq!(r.coarea, Some(q(1, 21)));
}

#[test]
fn mismatched_row_is_reported() {
    let cat = Catalog::builtin();
    let mut r = cat.rows.iter().find(|r| r.field == "d3981").unwrap().clone();
    r.signature = "(1;2,2)".into();
    assert!(matches!(verify_row(&cat, &r, ZETA_BOUND), Err(ClassifyError::RowMismatch { .. })));
}

#[test]
fn no_solution_for_5744() {
    let cat = Catalog::builtin();
    let e = cat.field("d5744").unwrap();
    let k = e.field().unwrap();
    let (_, mu) = field_coarea(&k, ZETA_BOUND).unwrap();
    assert_eq!(mu, q(5, 3));
    assert!(ramification_solutions(e, &k, &mu).unwrap().is_empty());
}

#[test]
fn eliminated_fields() {
    let cat = Catalog::builtin();
    let s = negative_screen(&cat, "d106069", ZETA_BOUND).unwrap();
    match s.elimination {
        Elimination::ForcedTorsion { solutions } => assert_eq!(solutions, vec![("∅".to_string(), 1, vec![2, 3])]),
        other => panic!("{other:?}"),
    }
    let s = negative_screen(&cat, "d722000", ZETA_BOUND).unwrap();
    match s.elimination {
        Elimination::AreaTooLarge { min_area } => {
            // μ = 7π/5 times N(P2) − 1 = 3, up to the truncation of ζ_k(2)
            assert!((min_area / std::f64::consts::PI - 4.2).abs() < 1e-3, "{min_area}")
        }
        other => panic!("{other:?}"),
    }
    // 2, 3 and 5 are inert, so only Ram_f = ∅ fits and its torsion blocks it
    let k = cat.field("d361").unwrap().field().unwrap();
    for p in [2, 3, 5] {
        assert_eq!(factor_prime(&k, p).len(), 1);
    }
    assert!(matches!(negative_screen(&cat, "d361", ZETA_BOUND).unwrap().elimination, Elimination::ForcedTorsion { .. }));
    assert!(matches!(negative_screen(&cat, "d5744", ZETA_BOUND).unwrap().elimination, Elimination::AreaTooLarge { .. }));
    // a field that does carry a row is not screened out
    assert!(matches!(negative_screen(&cat, "d3981", ZETA_BOUND), Err(ClassifyError::ScreenInconclusive(_))));
}

#[test]
fn solutions_respect_parity() {
    let cat = Catalog::builtin();
    for e in cat.fields.iter().filter(|e| (3..=5).contains(&e.degree())) {
        let k = e.field().unwrap();
        let Ok((_, mu)) = field_coarea(&k, ZETA_BOUND) else { continue };
        for s in ramification_solutions(e, &k, &mu).unwrap() {
            assert_eq!((k.degree() - 1 + s.ram.len()) % 2, 0, "{}", e.id);
            if k.degree() % 2 == 0 {
                assert!(!s.ram.is_empty());
            }
            assert_eq!(&s.area * BigRational::from_integer(BigInt::from(s.index)), q(4, 1));
        }
    }
}

#[test]
fn torsion_counts_from_splitting() {
    let cat = Catalog::builtin();
    let a = |f: &str, ram: &[&str], m: u32| {
        let e = cat.field(f).unwrap();
        let k = e.field().unwrap();
        let labels: Vec<String> = ram.iter().map(|s| s.to_string()).collect();
        let cm = e.cm_data(m).unwrap();
        torsion_count_for(&k, &resolve_primes(&k, &labels).unwrap(), m, cm.h_minus, cm.unit_index).unwrap()
    };
    assert_eq!(a("d3981", &["P3"], 2), 6);
    assert_eq!(a("k7", &["P2", "P7"], 2), 2);
    // a ramified prime split in k(ω) kills order 3
    let e = cat.field("d1957").unwrap();
    let k = e.field().unwrap();
    let p7 = resolve_primes(&k, &["P7".to_string()]).unwrap();
    assert_eq!(splitting_in_cm_extension(&k, &p7[0], 3).unwrap(), SplittingBehavior::Split);
    assert_eq!(a("d1957", &["P7"], 3), 0);
}

#[test]
fn small_degree_rows_are_arithmetic_only() {
    let cat = Catalog::builtin();
    assert!(table_is_consistent(&cat));
    for r in rows_of_degree(&cat, Some(1)).into_iter().chain(rows_of_degree(&cat, Some(2))) {
        let rep = verify_row(&cat, r, ZETA_BOUND).unwrap();
        assert!(rep.arithmetic_only);
    }
}
