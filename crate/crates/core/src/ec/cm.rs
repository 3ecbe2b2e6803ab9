//! The automorphism `i : (x, y) -> (-x, s y)` of `y^2 = x^3 + x` over F_p,
//! `p = 1 (mod 4)`, with `s` the smaller square root of `-1`.

use super::fp::{CurveFp, PointFp};
use crate::arith::primes::{mul_mod, sqrt_mod, sub_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmAction {
    curve: CurveFp,
    s: u64,
}

impl CmAction {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_root_choice(p, false)
    }

    /// `larger = true` selects the other root, giving `-i`.
    pub fn with_root_choice(p: u64, larger: bool) -> Result<Self> {
        if p % 4 != 1 {
            return Err(Error::NoSquareRootOfMinusOne { p });
        }
        let r = sqrt_mod(p - 1, p).ok_or(Error::NoSquareRootOfMinusOne { p })?;
        let (small, big) = if r < p - r { (r, p - r) } else { (p - r, r) };
        Ok(CmAction { curve: CurveFp::new(1, 0, p), s: if larger { big } else { small } })
    }

    pub fn curve(&self) -> &CurveFp {
        &self.curve
    }

    pub fn root(&self) -> u64 {
        self.s
    }

    pub fn apply(&self, r: &PointFp) -> Result<PointFp> {
        self.curve.check(r)?;
        Ok(self.apply_unchecked(r))
    }

    fn apply_unchecked(&self, r: &PointFp) -> PointFp {
        let p = self.curve.p;
        match *r {
            PointFp::Infinity => PointFp::Infinity,
            PointFp::Affine { x, y } => PointFp::Affine { x: sub_mod(0, x, p), y: mul_mod(self.s, y, p) },
        }
    }

    /// `(a + b i) R = a R + b i(R)`.
    pub fn gaussian(&self, a: i64, b: i64, r: &PointFp) -> Result<PointFp> {
        let ir = self.apply(r)?;
        Ok(self.curve.add(&self.curve.mul_signed(a, r), &self.curve.mul_signed(b, &ir)))
    }
}

/// `cm_iota` on the curve `curve`; errors unless it is `y^2 = x^3 + x`.
pub fn cm_iota(curve: &CurveFp, r: &PointFp) -> Result<PointFp> {
    if curve.a != 1 || curve.b != 0 {
        return Err(Error::WrongCurve);
    }
    CmAction::new(curve.p)?.apply(r)
}
