use std::f64::consts::PI;

use afg::catalog::{AlgebraEntry, Catalog};
use afg::ford::svg::svg_string;
use afg::ford::words::eval;
use afg::ford::*;
use afg::numfield::NumberField;
use afg::quatalg::{QuaternionAlgebra, QuaternionElement};
use afg::volume::{coarea, dedekind_zeta2, rh_area};
use num_complex::Complex64;
use num_traits::ToPrimitive;

fn setup(field: &str, id: &str) -> (AlgebraEntry, NumberField, QuaternionAlgebra) {
    let cat = Catalog::builtin();
    let e = cat.algebra(field, id).unwrap().clone();
    let k = cat.field(field).unwrap().field().unwrap();
    let alg = e.algebra(&k).unwrap();
    (e, k, alg)
}

fn same_up_to_sign(alg: &QuaternionAlgebra, p: &QuaternionElement, q: &QuaternionElement) -> bool {
    is_pm_one(&alg.mul(p, &q.conj()))
}

/// `[a,b][c,d]` on four elements.
fn genus_two_relator(alg: &QuaternionAlgebra, g: &[QuaternionElement]) -> Option<i8> {
    let w = vec![(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1), (2, -1), (3, -1)];
    sign_of_identity(&eval(&QuatGroup(alg), g, &w))
}

/// Every catalog side pairing occurs among the domain's generators.
fn catalog_pairings_found(e: &AlgebraEntry, alg: &QuaternionAlgebra, dom: &FordDomain, names: &[&str]) {
    let named = e.named_elements(alg);
    for n in names {
        let q = &named[*n];
        assert!(
            dom.presentation.gens.iter().any(|g| same_up_to_sign(alg, g, q) || same_up_to_sign(alg, g, &q.conj())),
            "{n} is not a side pairing"
        );
    }
}

fn coarea_check(field: &str, id: &str, area: f64) {
    let (_, k, alg) = setup(field, id);
    let ram = alg.ramification_set().unwrap();
    let z = dedekind_zeta2(&k, 200_000);
    let c = coarea(&k, &ram.finite_primes, &z);
    assert!((c.value - area).abs() < 1e-4 + c.error, "{field}: coarea {} vs domain {area}", c.value);
}

#[test]
fn k7_domain_signature_and_relations() {
    let (e, _, alg) = setup("k7", "ram-2-7");
    let r = run_entry(&e, &alg, None).unwrap();
    let d = &r.domain;
    assert_eq!(r.epsilons_tried, vec![0.15]);
    assert_eq!(d.signature.to_string(), "(1;2,2)");
    assert_eq!(d.sides.len(), 10);
    assert_eq!(d.cycles.iter().filter(|c| c.order == 2).count(), 2);
    assert!((d.area - 2.0 * PI).abs() < 1e-6);
    coarea_check("k7", "ram-2-7", d.area);
    catalog_pairings_found(&e, &alg, d, &["h1", "h2", "h3", "h4", "g1"]);

    // published presentation: ([A1,B1]X1)^2 = -1, X1^2 = -1
    let cp = CatalogPresentation::from_entry(&e, &alg).unwrap();
    assert_eq!(cp.relation_values(&alg), vec![Some(-1), Some(-1)]);
    assert!(cp.identities_hold(&alg));

    // our own canonical form has the same shape
    let c = &r.canonical;
    assert_eq!((c.genus(), c.periods()), (1, vec![2, 2]));
    let p = c.presentation();
    let rels: Vec<_> = p.relators.iter().map(|(w, m)| words::power(w, *m)).collect();
    assert!(verify_presentation(&alg, &p.gens, &rels));
}

#[test]
fn k7_x1_is_an_order_two_matrix() {
    let (e, _, alg) = setup("k7", "ram-2-7");
    let emb = Embedding::for_entry(&e, &alg).unwrap();
    let x = &e.named_elements(&alg)["g1"];
    let m = emb.matrix(x);
    let sq = [
        [m[0][0] * m[0][0] + m[0][1] * m[1][0], m[0][0] * m[0][1] + m[0][1] * m[1][1]],
        [m[1][0] * m[0][0] + m[1][1] * m[1][0], m[1][0] * m[0][1] + m[1][1] * m[1][1]],
    ];
    for (i, row) in sq.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { -1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-9);
        }
    }
}

#[test]
fn k7_four_subgroups_match_published_ones() {
    let (e, _, alg) = setup("k7", "ram-2-7");
    let r = run_entry(&e, &alg, None).unwrap();
    assert_eq!(r.subgroups.len(), 4);
    for s in &r.subgroups {
        assert_eq!(genus_two_relator(&alg, &s.generators), Some(1));
        for g in &s.generators {
            assert_eq!(hom_image(&r.domain, &alg, &r.embedding, &s.hom, g), Some(0));
        }
    }
    // each published Gamma_i lies in exactly one of the kernels, all different
    let mut kernels = Vec::new();
    for (name, gens) in e.subgroup_elements(&alg) {
        assert!(genus_two_relator(&alg, &gens).is_some(), "{name}");
        let hits: Vec<usize> = (0..r.subgroups.len())
            .filter(|&i| {
                gens.iter().all(|g| hom_image(&r.domain, &alg, &r.embedding, &r.subgroups[i].hom, g) == Some(0))
            })
            .collect();
        assert_eq!(hits.len(), 1, "{name}");
        kernels.push(hits[0]);
    }
    kernels.sort_unstable();
    assert_eq!(kernels, vec![0, 1, 2, 3]);
}

#[test]
fn d3981_domain_and_unique_subgroup() {
    let (e, _, alg) = setup("d3981", "ram-3");
    let r = run_entry(&e, &alg, None).unwrap();
    let d = &r.domain;
    assert_eq!(d.signature.to_string(), "(0;2,2,2,2,2,2)");
    assert_eq!(d.cycles.iter().filter(|c| c.order == 2).count(), 6);
    assert!((d.area - 2.0 * PI).abs() < 1e-6);
    coarea_check("d3981", "ram-3", d.area);
    catalog_pairings_found(&e, &alg, d, &["g1", "g2", "g3", "g4", "g5", "g6", "h1"]);

    let cp = CatalogPresentation::from_entry(&e, &alg).unwrap();
    assert_eq!(cp.relation_values(&alg), vec![Some(-1); 6]);

    assert_eq!(r.subgroups.len(), 1);
    let ours = &r.subgroups[0];
    assert_eq!(genus_two_relator(&alg, &ours.generators), Some(1));
    let published = &e.subgroup_elements(&alg)[0].1;
    assert!(genus_two_relator(&alg, published).is_some());
    for g in published {
        assert_eq!(hom_image(d, &alg, &r.embedding, &ours.hom, g), Some(0));
    }
}

#[test]
fn d4752_is_torsion_free_genus_two() {
    let (e, _, alg) = setup("d4752", "ram-2");
    let r = run_entry(&e, &alg, None).unwrap();
    let d = &r.domain;
    assert_eq!(r.epsilons_tried, vec![0.1]);
    assert_eq!(d.signature.to_string(), "(2;-)");
    assert_eq!(d.sides.len(), 18);
    assert!((d.area - 4.0 * PI).abs() < 1e-6);
    coarea_check("d4752", "ram-2", d.area);
    let names: Vec<String> = (1..=9).map(|i| format!("h{i}")).collect();
    let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    catalog_pairings_found(&e, &alg, d, &names);
    assert_eq!(r.subgroups.len(), 1);
    assert!(r.subgroups[0].hom.is_empty());
    assert_eq!(genus_two_relator(&alg, &r.subgroups[0].generators), Some(1));
}

#[test]
fn tiling_spot_check_all_examples() {
    for (f, id) in [("k7", "ram-2-7"), ("d3981", "ram-3"), ("d4752", "ram-2")] {
        let (e, _, alg) = setup(f, id);
        let r = run_entry(&e, &alg, None).unwrap();
        let (inside, longest) = r.domain.tiling_spot_check(100, 2024, 50);
        assert_eq!(inside, 100, "{f}");
        assert!(longest <= 4, "{f}: needed {longest} generators");
    }
}

#[test]
fn enumeration_grows_and_area_is_stable() {
    let (e, k, alg) = setup("k7", "ram-2-7");
    let o = e.maximal_order(&alg).unwrap();
    let delta = e.ambient(&k);
    let emb = Embedding::for_entry(&e, &alg).unwrap();
    let big = enumerate_bounded_elements(&o, &delta, &emb, 0.15).unwrap();
    let small = enumerate_bounded_elements(&o, &delta, &emb, 0.075).unwrap();
    assert!(big.iter().any(|g| g.is_pm_one()));
    for g in &big {
        assert!(small.iter().any(|h| h.vector == g.vector));
    }
    // the published pairings already appear at 0.15
    for (_, q) in e.named_elements(&alg) {
        assert!(big.iter().any(|g| same_up_to_sign(&alg, &g.quat, &q)), "missing at ε = 0.15");
    }
    let a1 = build_ford_domain(&alg, big, 0.15, emb.shift).unwrap().area;
    let a2 = build_ford_domain(&alg, small, 0.075, emb.shift).unwrap().area;
    assert!((a1 - a2).abs() < 1e-6);
}

#[test]
fn pairing_is_an_involution() {
    let (e, _, alg) = setup("d4752", "ram-2");
    let d = run_entry(&e, &alg, None).unwrap().domain;
    for (s, side) in d.sides.iter().enumerate() {
        let t = side.partner;
        assert_eq!(d.sides[t].partner, s);
        let g = &d.elements[side.element].quat;
        let h = &d.elements[d.sides[t].element].quat;
        assert!(is_pm_one(&alg.mul(g, h)));
        // g maps its side onto the partner, endpoints swapped
        let dg = d.side_disk(s);
        assert!((dg.apply(side.arc.start) - d.sides[t].arc.end).norm() < 1e-7);
    }
}

#[test]
fn elliptic_orders_agree_with_traces() {
    let (e, _, alg) = setup("d3981", "ram-3");
    let d = run_entry(&e, &alg, None).unwrap().domain;
    let lam = afg::ideals::lambda(&alg.field, 2).unwrap();
    assert!(lam.is_zero());
    for c in d.cycles.iter().filter(|c| c.order == 2) {
        // the single pairing fixing the vertex is an involution up to sign
        let s = c.sides[0];
        let q = &d.elements[d.sides[s].element].quat;
        assert_eq!(alg.trace(q), lam);
        assert!((c.angle_sum - PI).abs() < 1e-6);
    }
}

#[test]
fn lone_hyperbolic_pair_asks_for_refinement() {
    let k = NumberField::rationals();
    let alg = QuaternionAlgebra::new(k.from_int(2), k.from_int(3)).unwrap();
    let emb = Embedding::new(&alg, 0, &Split::Exact(k.from_int(3), k.one())).unwrap();
    // 3 + 2i has norm 9 - 8 = 1
    let g = alg.elem(k.from_int(3), k.from_int(2), k.zero(), k.zero());
    let delta = k.one();
    let els = vec![GroupElement::new(alg.one(), &delta, &emb), GroupElement::new(g.clone(), &delta, &emb), GroupElement::new(g.conj(), &delta, &emb)];
    assert!(matches!(build_ford_domain(&alg, els, 0.15, Complex64::new(0.0, 0.0)), Err(FordError::RefineEpsilon(_))));
}

#[test]
fn svg_is_deterministic() {
    let (e, _, alg) = setup("k7", "ram-2-7");
    let d1 = run_entry(&e, &alg, None).unwrap().domain;
    let d2 = run_entry(&e, &alg, None).unwrap().domain;
    let (s1, s2) = (svg_string(&d1), svg_string(&d2));
    assert_eq!(s1, s2);
    assert_eq!(s1.matches("class=\"arc\"").count(), d1.sides.len());
    assert_eq!(s1.matches("class=\"elliptic\"").count(), 2);
    let dir = std::env::temp_dir().join("afg-svg-test.svg");
    svg::render_svg(&d1, &dir).unwrap();
    assert_eq!(std::fs::read_to_string(&dir).unwrap(), s1);
}

#[test]
fn signature_area_matches_domain() {
    for (f, id) in [("k7", "ram-2-7"), ("d3981", "ram-3"), ("d4752", "ram-2")] {
        let (e, _, alg) = setup(f, id);
        let d = run_entry(&e, &alg, None).unwrap().domain;
        let want = rh_area(&d.signature).unwrap().to_f64().unwrap() * PI;
        assert!((want - d.area).abs() < 1e-6, "{f}");
        assert_eq!(d.signature, e.expected_signature().unwrap(), "{f}");
    }
}
