//! Bounded search for `sum a_i P_i = c Q` on one elliptic curve.
//!
//! Candidates are screened modulo two auxiliary primes of good reduction
//! and only survivors are checked exactly over Q. For `n >= 2` points the
//! last coefficient is recovered from a hash table, so each `c` costs
//! `(2B + 1)^(n - 1)` group operations.

use std::collections::HashMap;

use serde::Serialize;

use super::curve::{CurveQ, PointQ};
use super::fp::{ec_good_reduction, ec_reduce, CurveFp, PointFp};
use crate::arith::primes::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EcRelation {
    pub coefficients: Vec<i64>,
    pub c: u64,
}

impl EcRelation {
    pub fn verify(&self, curve: &CurveQ, points: &[PointQ], q: &PointQ) -> Result<bool> {
        let lhs = curve.combination(&self.coefficients, points)?;
        Ok(lhs == curve.mul(self.c as i64, q)?)
    }
}

struct Screen {
    curve: CurveFp,
    /// `tables[i][a + B] = a * P_i mod p`
    tables: Vec<Vec<PointFp>>,
    q: PointFp,
}

impl Screen {
    fn new(curve: &CurveQ, points: &[PointQ], q: &PointQ, bound: i64, p: u64) -> Result<Self> {
        let fp = curve.reduce_mod(p)?;
        let tables = points
            .iter()
            .map(|r| {
                let base = ec_reduce(curve, r, p)?;
                Ok((-bound..=bound).map(|a| fp.mul_signed(a, &base)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Screen { curve: fp, tables, q: ec_reduce(curve, q, p)? })
    }

    fn sum(&self, coeffs: &[i64], bound: i64) -> PointFp {
        coeffs
            .iter()
            .enumerate()
            .fold(PointFp::Infinity, |acc, (i, &a)| self.curve.add(&acc, &self.tables[i][(a + bound) as usize]))
    }
}

fn screening_primes(curve: &CurveQ) -> Vec<u64> {
    (10_007u64..)
        .filter(|&p| is_prime(p) && ec_good_reduction(curve, &[], p))
        .take(2)
        .collect()
}

/// Search `|a_i| <= bound`, `1 <= c <= bound` for `sum a_i P_i = c Q`,
/// returning the solution with the least `c`. `None` means no relation
/// within the bound, not that none exists.
pub fn ec_find_relation(curve: &CurveQ, points: &[PointQ], q: &PointQ, bound: u64) -> Result<Option<EcRelation>> {
    if bound == 0 {
        return Err(Error::InvalidArgument("search bound must be at least 1".into()));
    }
    for r in points.iter().chain(std::iter::once(q)) {
        curve.check(r)?;
    }
    let bound = i64::try_from(bound).map_err(|_| Error::InvalidArgument("bound too large".into()))?;
    let screens = screening_primes(curve)
        .into_iter()
        .map(|p| Screen::new(curve, points, q, bound, p))
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let width = (2 * bound + 1) as usize;

    // last coefficient lookup: a_n P_n mod p1 -> all a_n with that image
    let mut last: HashMap<PointFp, Vec<i64>> = HashMap::new();
    if n > 0 {
        for (idx, pt) in screens[0].tables[n - 1].iter().enumerate() {
            last.entry(*pt).or_default().push(idx as i64 - bound);
        }
    }

    for c in 1..=bound {
        let targets: Vec<PointFp> = screens.iter().map(|s| s.curve.mul(c as u64, &s.q)).collect();
        if n == 0 {
            if targets.iter().all(PointFp::is_infinity) && curve.mul(c, q)?.is_infinity() {
                return Ok(Some(EcRelation { coefficients: Vec::new(), c: c as u64 }));
            }
            continue;
        }
        let head = n - 1;
        let total = width.pow(head as u32);
        for index in 0..total {
            let mut coeffs = Vec::with_capacity(n);
            let mut rest = index;
            for _ in 0..head {
                coeffs.push((rest % width) as i64 - bound);
                rest /= width;
            }
            let s0 = &screens[0];
            let partial = s0.sum(&coeffs, bound);
            let need = s0.curve.add(&targets[0], &s0.curve.neg(&partial));
            let Some(cands) = last.get(&need) else { continue };
            for &an in cands {
                let mut full = coeffs.clone();
                full.push(an);
                let survives = screens[1..].iter().zip(&targets[1..]).all(|(s, t)| s.sum(&full, bound) == *t);
                if !survives {
                    continue;
                }
                let rel = EcRelation { coefficients: full, c: c as u64 };
                if rel.verify(curve, points, q)? {
                    return Ok(Some(rel));
                }
            }
        }
    }
    Ok(None)
}

/// Order of a rational point if it is at most 16, else `None` (infinite order).
pub fn ec_torsion_order(curve: &CurveQ, r: &PointQ) -> Result<Option<u64>> {
    curve.check(r)?;
    let mut acc = r.clone();
    for k in 1..=16u64 {
        if acc.is_infinity() {
            return Ok(Some(k));
        }
        acc = curve.add(&acc, r)?;
    }
    Ok(None)
}
