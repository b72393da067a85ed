//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines show up in plain `cargo test` output.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use afg::catalog::{resolve_primes, AlgebraEntry, Catalog};
use afg::classify::{rows_of_degree, verify_row, CountCheck};
use afg::ford::words::{eval, power};
use afg::ford::{run_entry, sign_of_identity, verify_presentation, CatalogPresentation, FordReport, QuatGroup};
use afg::ideals::{splitting_in_cm_extension, SplittingBehavior};
use afg::numfield::NumberField;
use afg::orders::congruences_match;
use afg::quatalg::{QuaternionAlgebra, QuaternionElement};
use afg::volume::{
    coarea, dedekind_zeta2, degree_bound_report, enumerate_genus2_supersignatures, has_order_m_elements,
    minimal_torsionfree_index, rh_area, torsion_count_for, Signature, DEFAULT_ZETA_BOUND,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COAREA_REL_TOL: f64 = 1e-5;
const COAREA_TIME: Duration = Duration::from_secs(60);
const LIST_TIME: Duration = Duration::from_secs(5);
const DEGREE_BOUND_TOL: f64 = 1e-3;
const TABLE_TIME: Duration = Duration::from_secs(600);
const AREA_TOL: f64 = 1e-4;
const FORD_TIME: Duration = Duration::from_secs(900);
const RANDOM_QUATERNIONS: usize = 10_000;
const TILING_SAMPLES: usize = 100;
const TILING_SEED: u64 = 2024;

/// Criteria known not to hold as literally stated, with the reason; each is
/// still required to fail in exactly the documented way.
const DOCUMENTED: &[(u32, &str)] = &[(
    2,
    "the printed list has (0;2,5,6) where the enumeration finds (0;2,3,18); \
     (0;2,5,6) needs a torsion-free index divisible by 30 but M = 15",
)];

enum Outcome {
    Pass(String),
    Fail(String),
}

fn pass_if(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn sig(s: &str) -> Signature {
    s.parse().unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn criterion_1(cat: &Catalog) -> Outcome {
    let cases = [("k7", 1, 21), ("d38569", 2, 3), ("d3981", 1, 1), ("d2304", 1, 2), ("d1957", 1, 3), ("d5744", 5, 3), ("d106069", 4, 1)];
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut bad = Vec::new();
    for (f, n, d) in cases {
        let k = cat.field(f).unwrap().field().unwrap();
        let t = Instant::now();
        let c = coarea(&k, &[], &dedekind_zeta2(&k, DEFAULT_ZETA_BOUND));
        let dt = t.elapsed();
        let want = PI * n as f64 / d as f64;
        let rel = (c.value - want).abs() / want;
        worst = worst.max(rel);
        slowest = slowest.max(dt);
        if rel >= COAREA_REL_TOL || dt >= COAREA_TIME {
            bad.push(format!("{f}: {} vs {want} ({rel:.1e}, {dt:?})", c.value));
        }
    }
    pass_if(
        bad.is_empty(),
        format!("7 coareas at B=10^6, worst relative error {worst:.1e}, slowest {:.1}s {}", slowest.as_secs_f64(), bad.join("; ")),
    )
}

const PRINTED_LIST: &str = "(0;2,3,7) (0;2,3,8) (0;2,3,9) (0;2,3,10) (0;2,3,12) (0;2,4,5) (0;2,4,6) (0;2,4,8) \
    (0;2,4,12) (0;2,5,5) (0;2,5,6) (0;2,5,10) (0;2,6,6) (0;2,8,8) (0;3,3,4) (0;3,3,5) (0;3,3,6) (0;3,3,9) \
    (0;3,4,4) (0;3,6,6) (0;4,4,4) (0;5,5,5) (0;2,2,2,3) (0;2,2,2,4) (0;2,2,2,6) (0;2,2,3,3) (0;2,2,4,4) \
    (0;3,3,3,3) (0;2,2,2,2,2) (0;2,2,2,2,2,2) (1;2) (1;3) (1;2,2)";

/// `4π / area` for a signature.
fn index_of(s: &Signature) -> BigRational {
    q(4, 1) / rh_area(s).unwrap()
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let got: BTreeSet<Signature> = enumerate_genus2_supersignatures().into_iter().collect();
    let dt = t.elapsed();
    let printed: BTreeSet<Signature> = PRINTED_LIST.split_whitespace().map(sig).collect();
    let missing: Vec<String> = printed.difference(&got).map(|s| s.to_string()).collect();
    let extra: Vec<String> = got.difference(&printed).map(|s| s.to_string()).collect();
    let detail = format!(
        "{} signatures in {:.2}s, missing [{}], extra [{}]",
        got.len(),
        dt.as_secs_f64(),
        missing.join(" "),
        extra.join(" ")
    );
    if missing.is_empty() && extra.is_empty() && dt < LIST_TIME {
        return Outcome::Pass(detail);
    }
    // The documented case: check the torsion-free index theorem decides it.
    let a = sig("(0;2,5,6)");
    let b = sig("(0;2,3,18)");
    let documented = missing == ["(0;2,5,6)"]
        && extra == ["(0;2,3,18)"]
        && index_of(&a) == q(15, 1)
        && minimal_torsionfree_index(&a) == 30
        && index_of(&b) == q(18, 1)
        && minimal_torsionfree_index(&b) == 18
        && dt < LIST_TIME;
    Outcome::Fail(format!("{detail}{}", if documented { "" } else { " (not the documented discrepancy)" }))
}

fn criterion_3() -> Outcome {
    let r = degree_bound_report();
    let ok = (r.degree7_value - 15.1925).abs() <= DEGREE_BOUND_TOL
        && (r.degree8_value - 20.2036).abs() <= DEGREE_BOUND_TOL
        && r.degree6_strict_bound == 1_263_165
        && r.degree6_floor == 1_263_164;
    pass_if(
        ok,
        format!("degree 7 {:.4}, degree 8 {:.4}, degree-6 discriminant < {}", r.degree7_value, r.degree8_value, r.degree6_strict_bound),
    )
}

fn criterion_4(cat: &Catalog) -> Outcome {
    let count = |f: &str, ram: &[&str], m: u32| -> Option<i64> {
        let e = cat.field(f).ok()?;
        let k = e.field().ok()?;
        let labels: Vec<String> = ram.iter().map(|s| s.to_string()).collect();
        let cm = e.cm_data(m)?;
        torsion_count_for(&k, &resolve_primes(&k, &labels).ok()?, m, cm.h_minus, cm.unit_index).ok()
    };
    let a2_3981 = count("d3981", &["P3"], 2);
    let a2_k7 = count("k7", &["P2", "P7"], 2);
    // every table row with a ramified prime split in k(ω) has no order-3 torsion
    let mut split_cases = 0;
    let mut bad = Vec::new();
    for row in cat.rows.iter().filter(|r| r.degree >= 3 && !r.ram.is_empty()) {
        let e = cat.field(&row.field).unwrap();
        let k = e.field().unwrap();
        let ram = resolve_primes(&k, &row.ram).unwrap();
        let splits = ram.iter().any(|p| splitting_in_cm_extension(&k, p, 3).unwrap() == SplittingBehavior::Split);
        if !splits {
            continue;
        }
        split_cases += 1;
        let by_lemma = has_order_m_elements(&k, &ram, 3).unwrap();
        // the class-number formula needs the basis hypothesis; the lemma does not
        let by_formula = e.cm_data(3).and_then(|cm| torsion_count_for(&k, &ram, 3, cm.h_minus, cm.unit_index).ok());
        if by_lemma || by_formula.is_some_and(|a| a != 0) || row.signature().unwrap().count(3) != 0 {
            bad.push(format!("{} {}", row.field, row.ram_label()));
        }
    }
    pass_if(
        a2_3981 == Some(6) && a2_k7 == Some(2) && split_cases > 0 && bad.is_empty(),
        format!("a2(3981,P3)={a2_3981:?}, a2(k7,P2P7)={a2_k7:?}, a3=0 on {split_cases} split rows {}", bad.join("; ")),
    )
}

fn criterion_5(cat: &Catalog) -> Outcome {
    let t = Instant::now();
    let mut rows = 0;
    let mut bad = Vec::new();
    let mut flagged = Vec::new();
    let mut rule_fields = BTreeSet::new();
    for d in 3..=5 {
        for row in rows_of_degree(cat, Some(d)) {
            rows += 1;
            match verify_row(cat, row, DEFAULT_ZETA_BOUND) {
                Ok(r) => match r.count {
                    CountCheck::Verified(_) => {
                        rule_fields.insert(row.field.clone());
                    }
                    CountCheck::Flagged { .. } => flagged.push(format!("{} {}", row.field, row.ram_label())),
                },
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    let dt = t.elapsed();
    // the rows the h_∞ simplifications must cover
    let covered = ["k7", "d1957", "d2304", "d3981"].iter().all(|f| rule_fields.contains(*f));
    pass_if(
        bad.is_empty() && covered && dt < TABLE_TIME,
        format!(
            "{rows} rows of degree 3-5 in {:.0}s, counts computed for {} fields, flagged [{}] {}",
            dt.as_secs_f64(),
            rule_fields.len(),
            flagged.join(", "),
            bad.join("; ")
        ),
    )
}

fn setup(cat: &Catalog, field: &str, id: &str) -> (AlgebraEntry, NumberField, QuaternionAlgebra) {
    let e = cat.algebra(field, id).unwrap().clone();
    let k = cat.field(field).unwrap().field().unwrap();
    let alg = e.algebra(&k).unwrap();
    (e, k, alg)
}

const EXAMPLES: [(&str, &str, usize); 3] = [("k7", "ram-2-7", 6), ("d3981", "ram-3", 8), ("d4752", "ram-2", 0)];

fn criterion_6(cat: &Catalog) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (f, id, n_rel) in EXAMPLES {
        let (e, k, alg) = setup(cat, f, id);
        let ram = alg.ramification_set().unwrap();
        let o = e.maximal_order(&alg).unwrap();
        let sys = e.congruence_system(k.degree()).unwrap();
        let shape = n_rel == 0 || sys.moduli.len() == n_rel;
        let good = o.is_maximal(&ram) && shape && congruences_match(&o, &e.ambient(&k), &sys);
        ok &= good;
        let mut moduli: Vec<String> = sys.moduli.iter().map(|m| m.to_string()).collect();
        moduli.dedup();
        notes.push(format!("{f} {} relations mod {{{}}}{}", sys.moduli.len(), moduli.join(","), if good { "" } else { " MISMATCH" }));
    }
    pass_if(ok, format!("disc = Δ² and lattices equal: {}", notes.join("; ")))
}

fn genus_two_relator(alg: &QuaternionAlgebra, g: &[QuaternionElement]) -> Option<i8> {
    let w = vec![(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1), (2, -1), (3, -1)];
    sign_of_identity(&eval(&QuatGroup(alg), g, &w))
}

fn index_weighted_coarea(k: &NumberField, alg: &QuaternionAlgebra) -> f64 {
    let ram = alg.ramification_set().unwrap();
    coarea(k, &ram.finite_primes, &dedekind_zeta2(k, DEFAULT_ZETA_BOUND)).value
}

fn criterion_7(cat: &Catalog, reports: &mut Vec<FordReport>) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (f, id, _) in EXAMPLES {
        let (e, k, alg) = setup(cat, f, id);
        let t = Instant::now();
        let r = match run_entry(&e, &alg, None) {
            Ok(r) => r,
            Err(err) => {
                ok = false;
                notes.push(format!("{f}: {err}"));
                continue;
            }
        };
        let dt = t.elapsed();
        let d = &r.domain;
        let area_ok = (d.area - index_weighted_coarea(&k, &alg)).abs() < AREA_TOL;
        let subs_genus_two = r.subgroups.iter().all(|s| s.generators.len() == 4 && genus_two_relator(&alg, &s.generators).is_some());
        let specific = match f {
            "k7" => {
                let cp = CatalogPresentation::from_entry(&e, &alg).unwrap();
                d.signature == sig("(1;2,2)") && cp.relation_values(&alg) == vec![Some(-1), Some(-1)] && r.subgroups.len() == 4
            }
            "d3981" => {
                d.signature == sig("(0;2,2,2,2,2,2)")
                    && d.cycles.iter().filter(|c| c.order == 2).count() == 6
                    && r.subgroups.len() == 1
            }
            _ => {
                let p = r.canonical.presentation();
                let rels: Vec<_> = p.relators.iter().map(|(w, m)| power(w, *m)).collect();
                d.signature == sig("(2;-)") && p.gens.len() == 4 && rels.len() == 1 && verify_presentation(&alg, &p.gens, &rels)
            }
        };
        let good = area_ok && subs_genus_two && specific && dt < FORD_TIME;
        ok &= good;
        notes.push(format!(
            "{f} {} area {:.6} {} subgroup(s) {:.1}s{}",
            d.signature,
            d.area,
            r.subgroups.len(),
            dt.as_secs_f64(),
            if good { "" } else { " MISMATCH" }
        ));
        reports.push(r);
    }
    pass_if(ok, notes.join("; "))
}

fn criterion_8(cat: &Catalog, reports: &[FordReport]) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    // orders: closure, and the published generator tables as members of norm 1
    let mut closure = true;
    for (f, id, _) in EXAMPLES {
        let (e, _, alg) = setup(cat, f, id);
        let o = e.maximal_order(&alg).unwrap();
        let b = o.z_basis();
        closure &= b.iter().all(|x| b.iter().all(|y| o.contains(&alg.mul(x, y))));
        for (_, g) in e.named_elements(&alg) {
            closure &= o.contains(&g) && alg.norm(&g) == alg.field.one();
        }
        for (_, gs) in e.subgroup_elements(&alg) {
            closure &= gs.iter().all(|g| o.contains(g) && alg.norm(g) == alg.field.one());
        }
    }
    ok &= closure;
    notes.push(format!("closure {}", if closure { "ok" } else { "FAILED" }));

    // norm multiplicativity and conjugation on random quaternions
    let mut rng = ChaCha8Rng::seed_from_u64(TILING_SEED);
    let mut norms = true;
    for t in 0..RANDOM_QUATERNIONS {
        let (_, k, alg) = setup_cached(cat, t % 3);
        let mut rq = || {
            let mut c = || k.elem(&(0..k.degree()).map(|_| rng.gen_range(-5..=5)).collect::<Vec<i64>>());
            alg.elem(c(), c(), c(), c())
        };
        let (x, y) = (rq(), rq());
        let xy = alg.mul(&x, &y);
        norms &= alg.norm(&xy) == alg.norm(&x) * alg.norm(&y) && xy.conj() == alg.mul(&y.conj(), &x.conj());
    }
    ok &= norms;
    notes.push(format!("{RANDOM_QUATERNIONS} norm checks {}", if norms { "ok" } else { "FAILED" }));

    // ramification parity on every catalog algebra
    let mut parity = true;
    for (f, id, _) in EXAMPLES {
        let (_, _, alg) = setup(cat, f, id);
        let r = alg.ramification_set().unwrap();
        parity &= (r.real_places.len() + r.finite_primes.len()) % 2 == 0;
    }
    ok &= parity;
    notes.push(format!("parity {}", if parity { "ok" } else { "FAILED" }));

    // truncation at B and 10B agree within the coarser bound, every field
    let mut zeta = true;
    for e in &cat.fields {
        let k = e.field().unwrap();
        let lo = dedekind_zeta2(&k, 10_000);
        let hi = dedekind_zeta2(&k, 100_000);
        zeta &= (lo.value - hi.value).abs() <= lo.error_bound;
    }
    ok &= zeta;
    notes.push(format!("zeta B/10B on {} fields {}", cat.fields.len(), if zeta { "ok" } else { "FAILED" }));

    let mut tiles = Vec::new();
    for r in reports {
        let (inside, longest) = r.domain.tiling_spot_check(TILING_SAMPLES, TILING_SEED, 50);
        ok &= inside == TILING_SAMPLES;
        tiles.push(format!("{inside}/{TILING_SAMPLES} ≤{longest}"));
    }
    ok &= reports.len() == EXAMPLES.len();
    notes.push(format!("tiling {}", tiles.join(" ")));
    pass_if(ok, notes.join(", "))
}

fn setup_cached(cat: &Catalog, i: usize) -> &'static (AlgebraEntry, NumberField, QuaternionAlgebra) {
    use std::sync::OnceLock;
    static S: OnceLock<Vec<(AlgebraEntry, NumberField, QuaternionAlgebra)>> = OnceLock::new();
    &S.get_or_init(|| EXAMPLES.iter().map(|(f, id, _)| setup(cat, f, id)).collect())[i]
}

fn main() -> ExitCode {
    let cat = Catalog::builtin();
    let mut reports = Vec::new();
    let results = vec![
        criterion_1(&cat),
        criterion_2(),
        criterion_3(),
        criterion_4(&cat),
        criterion_5(&cat),
        criterion_6(&cat),
        criterion_7(&cat, &mut reports),
        criterion_8(&cat, &reports),
    ];
    let mut unexpected = 0;
    for (i, r) in results.iter().enumerate() {
        let n = i as u32 + 1;
        match r {
            Outcome::Pass(d) => println!("criterion {n}: PASS  {d}"),
            Outcome::Fail(d) => {
                let known = DOCUMENTED.iter().find(|(c, _)| *c == n);
                match known {
                    Some((_, why)) if !d.contains("not the documented") => {
                        println!("criterion {n}: FAIL  {d}  [documented: {why}]")
                    }
                    _ => {
                        println!("criterion {n}: FAIL  {d}");
                        unexpected += 1;
                    }
                }
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
