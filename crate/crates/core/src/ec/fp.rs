//! Curves and points over prime fields, and reduction from Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::curve::{CurveQ, PointQ};
use crate::arith::primes::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointFp {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl PointFp {
    pub fn is_infinity(&self) -> bool {
        matches!(self, PointFp::Infinity)
    }
}

/// `y^2 = x^3 + a x + b` over F_p with `p` odd and of good reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveFp {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

fn residue(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue")
}

impl CurveFp {
    pub fn new(a: u64, b: u64, p: u64) -> Self {
        CurveFp { a: a % p, b: b % p, p }
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mul_mod(x, x, p);
        add_mod(add_mod(mul_mod(x2, x, p), mul_mod(self.a, x, p), p), self.b, p)
    }

    pub fn contains(&self, r: &PointFp) -> bool {
        match *r {
            PointFp::Infinity => true,
            PointFp::Affine { x, y } => x < self.p && y < self.p && mul_mod(y, y, self.p) == self.rhs(x),
        }
    }

    pub fn check(&self, r: &PointFp) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn neg(&self, r: &PointFp) -> PointFp {
        match *r {
            PointFp::Infinity => PointFp::Infinity,
            PointFp::Affine { x, y } => PointFp::Affine { x, y: sub_mod(0, y, self.p) },
        }
    }

    pub fn add(&self, r: &PointFp, s: &PointFp) -> PointFp {
        let p = self.p;
        let (x1, y1, x2, y2) = match (*r, *s) {
            (PointFp::Infinity, _) => return *s,
            (_, PointFp::Infinity) => return *r,
            (PointFp::Affine { x: x1, y: y1 }, PointFp::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if add_mod(y1, y2, p) == 0 {
                return PointFp::Infinity;
            }
            let num = add_mod(mul_mod(3, mul_mod(x1, x1, p), p), self.a, p);
            mul_mod(num, inv_mod(add_mod(y1, y1, p), p).expect("2y invertible"), p)
        } else {
            mul_mod(sub_mod(y2, y1, p), inv_mod(sub_mod(x2, x1, p), p).expect("dx invertible"), p)
        };
        let x3 = sub_mod(sub_mod(mul_mod(lambda, lambda, p), x1, p), x2, p);
        let y3 = sub_mod(mul_mod(lambda, sub_mod(x1, x3, p), p), y1, p);
        PointFp::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, r: &PointFp) -> PointFp {
        self.add(r, r)
    }

    /// `k R` for unsigned `k`.
    pub fn mul(&self, mut k: u64, r: &PointFp) -> PointFp {
        let mut base = *r;
        let mut acc = PointFp::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// `k R` for signed `k`.
    pub fn mul_signed(&self, k: i64, r: &PointFp) -> PointFp {
        let m = self.mul(k.unsigned_abs(), r);
        if k < 0 {
            self.neg(&m)
        } else {
            m
        }
    }

    /// Every point of E(F_p), infinity first, then by `x` and `y`.
    pub fn points(&self) -> Vec<PointFp> {
        let mut out = vec![PointFp::Infinity];
        for x in 0..self.p {
            let r = self.rhs(x);
            if r == 0 {
                out.push(PointFp::Affine { x, y: 0 });
                continue;
            }
            if let Some(y) = crate::arith::primes::sqrt_mod(r, self.p) {
                let (y1, y2) = if y < self.p - y { (y, self.p - y) } else { (self.p - y, y) };
                out.push(PointFp::Affine { x, y: y1 });
                out.push(PointFp::Affine { x, y: y2 });
            }
        }
        out
    }
}

/// `p` does not divide `2 * disc(E)`. Point denominators never exclude a prime.
pub fn ec_good_reduction(curve: &CurveQ, _points: &[PointQ], p: u64) -> bool {
    p != 2 && !(curve.discriminant() % BigInt::from(p)).is_zero()
}

impl CurveQ {
    pub fn reduce_mod(&self, p: u64) -> Result<CurveFp> {
        if !ec_good_reduction(self, &[], p) {
            return Err(Error::BadReduction { p });
        }
        Ok(CurveFp::new(residue(&BigInt::from(self.a()), p), residue(&BigInt::from(self.b()), p), p))
    }
}

/// Reduce the primitive projective representative of `r` modulo `p`.
pub fn ec_reduce(curve: &CurveQ, r: &PointQ, p: u64) -> Result<PointFp> {
    let fp = curve.reduce_mod(p)?;
    curve.check(r)?;
    let (x, y, z) = r.projective();
    let z = residue(&z, p);
    if z == 0 {
        return Ok(PointFp::Infinity);
    }
    let zinv = inv_mod(z, p).expect("unit");
    let pt = PointFp::Affine { x: mul_mod(residue(&x, p), zinv, p), y: mul_mod(residue(&y, p), zinv, p) };
    debug_assert!(fp.contains(&pt));
    Ok(pt)
}
