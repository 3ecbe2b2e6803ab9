//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `--nocapture` to see them. Criteria run one at a time so that the
//! runtime limits measure a single workload.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supcheck::arith::primes::pow_mod;
use supcheck::arith::{primes_in_range, smith_normal_form, IntMatrix};
use supcheck::ec::count::count_points_exhaustive;
use supcheck::ec::{ec_good_reduction, ec_group_order, CurveQ};
use supcheck::gallery::cases::{notrelated_default, planted_independent_instances};
use supcheck::gallery::random::{random_matrix, random_smooth_point};
use supcheck::gallery::{ex_cm_annihilator, ex_finite_s, ex_nobar1, ex_radnobound_s, verify_main_theorem_dichotomy, CaseResult, Status};
use supcheck::gm::{
    component_count, decompose_independent, gm_find_relation, gm_good_reduction, gm_point_order, isogeny_kernel_exponent,
    mult_order, GmPoint,
};

static SERIAL: Mutex<()> = Mutex::new(());

/// Run one criterion: `check` returns a short summary or the reason it failed.
fn criterion(id: u32, name: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|s| {
        if elapsed <= limit {
            Ok(s)
        } else {
            Err(format!("{s}; took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
        }
    });
    match &outcome {
        Ok(s) => println!("criterion {id:>2} PASS  {name}: {s} ({:.2} s)", elapsed.as_secs_f64()),
        Err(s) => println!("criterion {id:>2} FAIL  {name}: {s} ({:.2} s)", elapsed.as_secs_f64()),
    }
    if let Err(s) = outcome {
        panic!("criterion {id} ({name}) failed: {s}");
    }
}

fn require_pass(case: &CaseResult) -> Result<(), String> {
    if case.status == Status::Pass {
        return Ok(());
    }
    let failed: Vec<String> = case
        .claims
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: expected {}, observed {}", c.description, c.expected, c.observed))
        .collect();
    Err(format!("{} is {}: {}", case.name, case.status, failed.join("; ")))
}

fn observed<'a>(case: &'a CaseResult, description: &str) -> Result<&'a str, String> {
    case.claims
        .iter()
        .find(|c| c.description == description)
        .map(|c| c.observed.as_str())
        .ok_or_else(|| format!("claim {description:?} missing"))
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_01_radnobound() {
    criterion(1, "radnoboundS minimal c = 2^h for h = 0..6", secs(7), || {
        let mut seen = Vec::new();
        for h in 0..=6u32 {
            let start = Instant::now();
            let p = GmPoint::new(vec![
                num_rational::BigRational::from_integer(BigInt::one() << (1u32 << h)),
                num_rational::BigRational::from_integer(BigInt::from(-1)),
            ])
            .map_err(|e| e.to_string())?;
            let q = GmPoint::from_i64(&[2, 1]).map_err(|e| e.to_string())?;
            let rel = gm_find_relation(&p, &q).map_err(|e| e.to_string())?.ok_or(format!("h = {h}: no relation"))?;
            let expected = BigInt::one() << h;
            if rel.c != expected || !rel.verify(&p, &q).map_err(|e| e.to_string())? {
                return Err(format!("h = {h}: c = {}, expected {expected}", rel.c));
            }
            let case = ex_radnobound_s(h, 1000).map_err(|e| e.to_string())?;
            require_pass(&case)?;
            if start.elapsed() > secs(1) {
                return Err(format!("h = {h} took {:.2} s", start.elapsed().as_secs_f64()));
            }
            seen.push(rel.c.to_string());
        }
        Ok(format!("c = {}", seen.join(", ")))
    });
}

#[test]
fn criterion_02_finite_s() {
    criterion(2, "finite_S: RSP with S = {2} over p < 10^4, no relation", secs(5), || {
        let case = ex_finite_s(10_000).map_err(|e| e.to_string())?;
        require_pass(&case)?;
        Ok(format!("violations = {}, relation = {}", observed(&case, "violations")?, observed(&case, "no relation phi(P) = c Q")?))
    });
}

#[test]
fn criterion_03_nobar1() {
    criterion(3, "nobar1: WMSP over p < 10^4 with m <= 100, P2 and Q2 unrelated", secs(10), || {
        let case = ex_nobar1(10_000, 100).map_err(|e| e.to_string())?;
        require_pass(&case)?;
        Ok(format!("{} claims hold", case.claims.len()))
    });
}

#[test]
fn criterion_04_notrelated() {
    criterion(4, "notrelated: MSP on y^2 = x^3 - 2, box B = 20, p < 2000", secs(60), || {
        let case = notrelated_default(2000).map_err(|e| e.to_string())?;
        require_pass(&case)?;
        Ok(format!("{} claims hold", case.claims.len()))
    });
}

#[test]
fn criterion_05_cm_annihilator() {
    criterion(5, "CM annihilator exhaustive for p = 1 mod 4, p < 1000", secs(60), || {
        let case = ex_cm_annihilator(5, 1000).map_err(|e| e.to_string())?;
        require_pass(&case)?;
        let primes = case.data.get("per_prime").and_then(|v| v.as_array()).map_or(0, |a| a.len());
        Ok(format!("{primes} primes, zero counterexamples"))
    });
}

#[test]
fn criterion_06_dichotomy() {
    criterion(6, "dichotomy: 200 related and 200 unrelated torus instances", secs(300), || {
        let s = verify_main_theorem_dichotomy(200, 1, 1000, 10_000).map_err(|e| e.to_string())?;
        if s.related_passed != s.trials {
            return Err(format!("related failures: {:?}", s.related_failures));
        }
        let ratio = s.sp_found_ratio();
        if ratio < 0.95 {
            return Err(format!("SP violation found for {:.1}% of unrelated instances", 100.0 * ratio));
        }
        Ok(format!(
            "related {}/{}, unrelated with SP violation {}/{}, inconclusive {}",
            s.related_passed,
            s.trials,
            s.unrelated_sp_found,
            s.trials,
            s.inconclusive.len()
        ))
    });
}

#[test]
fn criterion_07_independent_c_one() {
    criterion(7, "independent P with planted relation: minimal c = 1", secs(60), || {
        let instances = planted_independent_instances(100, 7).map_err(|e| e.to_string())?;
        for (p, q) in &instances {
            match gm_find_relation(p, q).map_err(|e| e.to_string())? {
                Some(r) if r.c.is_one() => {}
                other => return Err(format!("P = {p}, Q = {q}: c = {:?}", other.map(|r| r.c))),
            }
        }
        Ok(format!("{} instances", instances.len()))
    });
}

#[test]
fn criterion_08_component_bound() {
    criterion(8, "component count of smooth P in {1, 2}, of P^2 equal to 1", secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut twos = 0;
        for _ in 0..500 {
            let n = rng.gen_range(1..=4);
            let p = random_smooth_point(&mut rng, n, 3);
            let c = component_count(&p).map_err(|e| e.to_string())?;
            let c2 = component_count(&p.pow(&BigInt::from(2))).map_err(|e| e.to_string())?;
            if !(c == BigInt::from(1) || c == BigInt::from(2)) || !c2.is_one() {
                return Err(format!("P = {p}: count {c}, count of P^2 {c2}"));
            }
            if c == BigInt::from(2) {
                twos += 1;
            }
        }
        Ok(format!("500 points, {twos} with two components"))
    });
}

#[test]
fn criterion_09_oracles() {
    criterion(9, "oracles: EC group order, multiplicative order, SNF", secs(120), || {
        let curves = [(0, -2), (0, 1), (-1, 0), (1, 0), (-7, 10)];
        let mut ec_checked = 0;
        for (a, b) in curves {
            let e = CurveQ::new(a, b).map_err(|e| e.to_string())?;
            for p in primes_in_range(2, 999).unwrap() {
                if !ec_good_reduction(&e, &[], p) {
                    continue;
                }
                let fast = ec_group_order(&e, p).map_err(|e| e.to_string())?;
                let slow = count_points_exhaustive(&e.reduce_mod(p).map_err(|e| e.to_string())?);
                if fast != slow {
                    return Err(format!("y^2 = x^3 + {a}x + {b} at p = {p}: {fast} != {slow}"));
                }
                ec_checked += 1;
            }
        }

        let mut mult_checked = 0;
        for p in primes_in_range(2, 499).unwrap() {
            for a in 1..p {
                let mut k = 1;
                let mut x = a;
                while x != 1 {
                    x = x * a % p;
                    k += 1;
                }
                let fast = mult_order(a, p).map_err(|e| e.to_string())?;
                if fast != k || pow_mod(a, k, p) != 1 {
                    return Err(format!("ord of {a} mod {p}: {fast} != {k}"));
                }
                mult_checked += 1;
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-20..=20)).collect()).collect();
            let m = IntMatrix::from_i64(&rows);
            let snf = smith_normal_form(&m);
            let product = snf.u.mul(&m).and_then(|x| x.mul(&snf.v)).map_err(|e| e.to_string())?;
            let diag = snf.diagonal();
            let divides = diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
            let unimodular = snf.u.determinant().map_err(|e| e.to_string())?.magnitude().is_one()
                && snf.v.determinant().map_err(|e| e.to_string())?.magnitude().is_one();
            if product != snf.d || !divides || !unimodular {
                return Err(format!("SNF check failed for {rows:?}"));
            }
        }
        Ok(format!("{ec_checked} curve/prime pairs, {mult_checked} residues, 1000 matrices"))
    });
}

#[test]
fn criterion_10_isogeny_and_decomposition() {
    criterion(10, "isogeny order divisibility and decomposition guarantee", secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let primes = primes_in_range(2, 999).unwrap();
        let mut checks = 0;
        let mut instances = 0;
        while instances < 100 {
            let n = rng.gen_range(1..=4);
            let m = random_matrix(&mut rng, n, n, 4);
            let Ok(d) = isogeny_kernel_exponent(&m) else { continue };
            let r = random_smooth_point(&mut rng, n, 3);
            let image = m.apply(&r).map_err(|e| e.to_string())?;
            let rd = r.pow(&d);
            for &p in &primes {
                if !gm_good_reduction(&r, p) || !gm_good_reduction(&image, p) {
                    continue;
                }
                let lhs = gm_point_order(&rd, p, &[]).map_err(|e| e.to_string())?.order;
                let rhs = gm_point_order(&image, p, &[]).map_err(|e| e.to_string())?.order;
                if rhs % lhs != 0 {
                    return Err(format!("M = {:?}, R = {r}, p = {p}: {lhs} does not divide {rhs}", m.matrix().to_rows()));
                }
                checks += 1;
            }
            instances += 1;
        }

        let mut dec_checks = 0;
        let mut dec_instances = 0;
        while dec_instances < 100 {
            let n = rng.gen_range(1..=4);
            let p = random_smooth_point(&mut rng, n, 3);
            if p.is_torsion() {
                continue;
            }
            let dec = decompose_independent(&p).map_err(|e| e.to_string())?;
            let d = u64::try_from(&dec.d).map_err(|_| format!("d = {} too large", dec.d))?;
            for &q in &primes {
                if !gm_good_reduction(&p, q) {
                    continue;
                }
                let full = gm_point_order(&p, q, &[]).map_err(|e| e.to_string())?.order;
                let sub = gm_point_order(&dec.sub_point, q, &[]).map_err(|e| e.to_string())?.order;
                if (d * sub) % full != 0 {
                    return Err(format!("P = {p}, p = {q}: {full} does not divide {d} * {sub}"));
                }
                dec_checks += 1;
            }
            dec_instances += 1;
        }
        Ok(format!("{checks} isogeny checks, {dec_checks} decomposition checks, zero violations"))
    });
}
