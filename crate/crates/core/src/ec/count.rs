//! Group orders of E(F_p) and orders of points.
//!
//! Below [`EXHAUSTIVE_LIMIT`] the group is counted with Legendre symbols.
//! Above it, orders of deterministic sample points are found by
//! baby-step giant-step inside the Hasse interval and combined by lcm until
//! exactly one multiple of the lcm is left in the interval. If that does
//! not happen after [`MAX_SAMPLES`] points the count falls back to the
//! exhaustive sum, which is still cheap up to [`SCAN_LIMIT`].

use std::collections::HashMap;

use super::curve::CurveQ;
use super::fp::{CurveFp, PointFp};
use crate::arith::factor::factor_u64;
use crate::arith::primes::{isqrt, lcm, legendre, sqrt_mod};
use crate::error::{Error, Result};

pub const EXHAUSTIVE_LIMIT: u64 = 1_000;
pub const SCAN_LIMIT: u64 = 1_000_000;
const MAX_SAMPLES: usize = 40;

/// `[p + 1 - t, p + 1 + t]` with `t = floor(2 sqrt p)`.
pub fn hasse_interval(p: u64) -> (u64, u64) {
    let t = isqrt(4 * p);
    (p + 1 - t, p + 1 + t)
}

/// `1 + sum_x (1 + (rhs(x) / p))`.
pub fn count_points_exhaustive(curve: &CurveFp) -> u64 {
    let mut n = 1u64;
    for x in 0..curve.p {
        n += (1 + legendre(curve.rhs(x), curve.p)) as u64;
    }
    n
}

/// `|E(F_p)|` for a prime of good reduction below [`SCAN_LIMIT`].
pub fn ec_group_order(curve: &CurveQ, p: u64) -> Result<u64> {
    if p > SCAN_LIMIT {
        return Err(Error::PrimeTooLarge { p, limit: SCAN_LIMIT });
    }
    let fp = curve.reduce_mod(p)?;
    Ok(group_order_fp(&fp))
}

pub fn group_order_fp(curve: &CurveFp) -> u64 {
    if curve.p < EXHAUSTIVE_LIMIT {
        return count_points_exhaustive(curve);
    }
    group_order_bsgs(curve).unwrap_or_else(|| count_points_exhaustive(curve))
}

/// Determine `|E(F_p)|` from point orders alone, if the samples pin it down.
pub fn group_order_bsgs(curve: &CurveFp) -> Option<u64> {
    let (lo, hi) = hasse_interval(curve.p);
    let mut l = 1u64;
    let mut samples = 0;
    for x in 0..curve.p {
        let Some(y) = sqrt_mod(curve.rhs(x), curve.p) else { continue };
        let r = PointFp::Affine { x, y };
        let k = multiple_in_interval(curve, &r, lo, hi)?;
        l = lcm(l, point_order(curve, &r, k))?;
        let first = lo.div_ceil(l) * l;
        if first <= hi && first + l > hi {
            return Some(first);
        }
        samples += 1;
        if samples >= MAX_SAMPLES {
            return None;
        }
    }
    None
}

/// Some `k` in `[lo, hi]` with `k R = O`, by baby-step giant-step.
fn multiple_in_interval(curve: &CurveFp, r: &PointFp, lo: u64, hi: u64) -> Option<u64> {
    let m = isqrt(hi - lo) + 1;
    let mut baby: HashMap<PointFp, u64> = HashMap::with_capacity(m as usize);
    let mut cur = PointFp::Infinity;
    for j in 0..m {
        if j > 0 && cur.is_infinity() {
            // small order: its first multiple in range
            let k = lo.div_ceil(j) * j;
            return (k <= hi).then_some(k);
        }
        baby.entry(cur).or_insert(j);
        cur = curve.add(&cur, r);
    }
    let giant = curve.mul(m, r);
    let mut acc = curve.mul(lo, r);
    let mut base = lo;
    while base <= hi {
        if let Some(&j) = baby.get(&curve.neg(&acc)) {
            let k = base + j;
            if k <= hi {
                return Some(k);
            }
        }
        acc = curve.add(&acc, &giant);
        base += m;
    }
    None
}

/// Order of `r` given any multiple `n` of it.
fn point_order(curve: &CurveFp, r: &PointFp, n: u64) -> u64 {
    let mut order = n;
    for (q, _) in factor_u64(n) {
        while order % q == 0 && curve.mul(order / q, r).is_infinity() {
            order /= q;
        }
    }
    order
}

/// Order of `r` in E(F_p), given the group order `n`.
pub fn ec_point_order(curve: &CurveFp, r: &PointFp, n: u64) -> Result<u64> {
    curve.check(r)?;
    if n == 0 || !curve.mul(n, r).is_infinity() {
        return Err(Error::InvalidArgument(format!("{n} does not annihilate the point")));
    }
    Ok(point_order(curve, r, n))
}
