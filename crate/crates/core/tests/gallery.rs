use num_bigint::BigInt;
use supcheck::arith::valuation;
use supcheck::gallery::*;
use supcheck::gallery::cases::{planted_independent_instances, torus_lsp_instances};
use supcheck::conditions::{check_lsp, ProductPoint, ScanConfig, Verdict};
use supcheck::gm::gm_find_relation;

fn assert_pass(c: &CaseResult) {
    assert_eq!(c.status, Status::Pass, "{}", serde_json::to_string_pretty(c).unwrap());
}

#[test]
fn radnobound_examples() {
    for (h, c) in [(0u32, "1"), (3, "8"), (5, "32")] {
        let case = ex_radnobound_s(h, 500).unwrap();
        assert_pass(&case);
        let minimal = case.claims.iter().find(|x| x.description == "minimal c").unwrap();
        assert_eq!(minimal.observed, c);
    }
    assert!(ex_radnobound_s(13, 100).is_err());
}

#[test]
fn finite_s_and_nobar1() {
    assert_pass(&ex_finite_s(3000).unwrap());
    assert_pass(&ex_nobar1(3000, 100).unwrap());
}

#[test]
fn notrelated_default_instance() {
    let case = run_case("notrelated", &GalleryOptions { hi: Some(500), ..Default::default() }).unwrap();
    assert_pass(&case);
    // the corrupted control must not be silently accepted
    assert_eq!(case.data["control_corrupted"]["verdict"], "VIOLATED");
}

#[test]
fn notrelated_rejects_torsion() {
    let e = supcheck::ec::CurveQ::new(0, 1).unwrap();
    let t = supcheck::ec::PointQ::from_i64(2, 3);
    assert!(ex_notrelated(&e, &t, &t, 2, 3, 100, 5).is_err());
}

#[test]
fn cm_annihilator_small_primes() {
    let case = ex_cm_annihilator(5, 200).unwrap();
    assert_pass(&case);
    let per: Vec<serde_json::Value> = serde_json::from_value(case.data["per_prime"].clone()).unwrap();
    assert_eq!(per[0]["p"], 5);
    assert_eq!(per[0]["group_order"], 4);
    assert_eq!(per[0]["sylow_points"], 1);
    let p13 = per.iter().find(|x| x["p"] == 13).unwrap();
    assert_eq!(p13["exhaustive"], true);
    assert!(case.data["nontrivial_sylow"].as_u64().unwrap() > 0);
}

#[test]
fn dichotomy_small() {
    let s = verify_main_theorem_dichotomy(20, 7, 300, 2000).unwrap();
    assert_eq!(s.related_passed, 20, "{:?}", s.related_failures);
    assert!(s.sp_found_ratio() >= 0.9);
    let again = verify_main_theorem_dichotomy(20, 7, 300, 2000).unwrap();
    assert_eq!(s, again);
    assert_ne!(s.fixed_examples[0].1, "");
}

#[test]
fn cases_are_deterministic() {
    let opts = GalleryOptions { hi: Some(400), trials: 5, ..Default::default() };
    for name in CASE_NAMES {
        let a = run_case(name, &opts).unwrap();
        let b = run_case(name, &opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
    assert!(run_case("nope", &opts).is_err());
    let table = summary_table(&run_all(&opts).unwrap());
    assert!(table.contains("nobar1"));
}

#[test]
fn independent_points_need_no_constant() {
    for (p, q) in planted_independent_instances(40, 3).unwrap() {
        let rel = gm_find_relation(&p, &q).unwrap().expect("planted");
        assert_eq!(rel.c, BigInt::from(1), "P = {p}, Q = {q}");
    }
}

#[test]
fn torus_lsp_instances_have_constant_prime_to_ell() {
    for ell in [2u64, 3] {
        for (p, q) in torus_lsp_instances(25, 11, ell).unwrap() {
            let lsp = check_lsp(&ProductPoint::gm(p.clone()), &ProductPoint::gm(q.clone()), ell, &ScanConfig::range(2, 400)).unwrap();
            assert_eq!(lsp.verdict, Verdict::Holds, "P = {p}, Q = {q}");
            let rel = gm_find_relation(&p, &q).unwrap().expect("k Q = M(P)");
            assert_eq!(valuation(&rel.c, ell).unwrap(), 0, "P = {p}, Q = {q}, c = {}", rel.c);
        }
    }
}
