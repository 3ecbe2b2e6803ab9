use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gm::point::parse_rational;

/// `y^2 = x^3 + a x + b` with integer coefficients and non-zero discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveQ {
    a: i64,
    b: i64,
}

impl CurveQ {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let c = CurveQ { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `-16 (4 a^3 + 27 b^2)`.
    pub fn discriminant(&self) -> BigInt {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        BigInt::from(-16) * (BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b)
    }

    pub fn contains(&self, p: &PointQ) -> bool {
        match p {
            PointQ::Infinity => true,
            PointQ::Affine { x, y } => {
                let a = BigRational::from_integer(self.a.into());
                let b = BigRational::from_integer(self.b.into());
                y * y == x * x * x + a * x + b
            }
        }
    }

    pub fn check(&self, p: &PointQ) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn add(&self, p: &PointQ, q: &PointQ) -> Result<PointQ> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &PointQ, q: &PointQ) -> PointQ {
        let (x1, y1, x2, y2) = match (p, q) {
            (PointQ::Infinity, _) => return q.clone(),
            (_, PointQ::Infinity) => return p.clone(),
            (PointQ::Affine { x: x1, y: y1 }, PointQ::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return PointQ::Infinity;
            }
            let three = BigRational::from_integer(3.into());
            let a = BigRational::from_integer(self.a.into());
            (three * x1 * x1 + a) / (y1 + y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        PointQ::Affine { x: x3, y: y3 }
    }

    /// `m R` by double-and-add; negative `m` negates.
    pub fn mul(&self, m: i64, r: &PointQ) -> Result<PointQ> {
        self.check(r)?;
        Ok(self.mul_unchecked(m, r))
    }

    pub(crate) fn mul_unchecked(&self, m: i64, r: &PointQ) -> PointQ {
        let mut base = if m < 0 { r.neg() } else { r.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = PointQ::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        acc
    }

    /// `sum m_i R_i`.
    pub fn combination(&self, coeffs: &[i64], points: &[PointQ]) -> Result<PointQ> {
        if coeffs.len() != points.len() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {} points", coeffs.len(), points.len())));
        }
        let mut acc = PointQ::Infinity;
        for (&m, r) in coeffs.iter().zip(points) {
            acc = self.add_unchecked(&acc, &self.mul(m, r)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for CurveQ {
    type Err = Error;

    /// `a,b`
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("curve {s:?} is not of the form a,b")))?;
        let a = a.trim().parse().map_err(|_| Error::Parse(format!("invalid coefficient {a:?}")))?;
        let b = b.trim().parse().map_err(|_| Error::Parse(format!("invalid coefficient {b:?}")))?;
        CurveQ::new(a, b)
    }
}

/// A rational point: the point at infinity or an affine pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointQ {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl PointQ {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        PointQ::Affine { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        PointQ::Affine { x: BigRational::from_integer(x.into()), y: BigRational::from_integer(y.into()) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointQ::Infinity)
    }

    pub fn neg(&self) -> PointQ {
        match self {
            PointQ::Infinity => PointQ::Infinity,
            PointQ::Affine { x, y } => PointQ::Affine { x: x.clone(), y: -y },
        }
    }

    /// Primitive projective representative `(X : Y : Z)` with `gcd = 1`.
    pub fn projective(&self) -> (BigInt, BigInt, BigInt) {
        match self {
            PointQ::Infinity => (BigInt::zero(), BigInt::one(), BigInt::zero()),
            PointQ::Affine { x, y } => {
                let z = num_integer::Integer::lcm(x.denom(), y.denom());
                let xx = x.numer() * (&z / x.denom());
                let yy = y.numer() * (&z / y.denom());
                let g = num_integer::Integer::gcd(&num_integer::Integer::gcd(&xx, &yy), &z);
                (xx / &g, yy / &g, z / g)
            }
        }
    }
}

impl fmt::Display for PointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointQ::Infinity => f.write_str("inf"),
            PointQ::Affine { x, y } => write!(f, "{x};{y}"),
        }
    }
}

impl FromStr for PointQ {
    type Err = Error;

    /// `inf`, `x;y`, or `x,y` with rational coordinates.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "O" {
            return Ok(PointQ::Infinity);
        }
        let (x, y) = s
            .split_once(';')
            .or_else(|| s.split_once(','))
            .ok_or_else(|| Error::Parse(format!("point {s:?} is not of the form x;y or inf")))?;
        Ok(PointQ::Affine { x: parse_rational(x.trim())?, y: parse_rational(y.trim())? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn group_law_over_q() {
        let e = CurveQ::new(0, -2).unwrap();
        let r = PointQ::from_i64(3, 5);
        assert!(e.contains(&r));
        assert_eq!(e.add(&r, &PointQ::Infinity).unwrap(), r);
        assert_eq!(e.add(&r, &r.neg()).unwrap(), PointQ::Infinity);
        // tangent at (3, 5): lambda = 27/10, x = 729/100 - 6, y = lambda (3 - x) - 5
        let lambda = q(27, 10);
        let x2 = &lambda * &lambda - q(6, 1);
        let y2 = &lambda * (q(3, 1) - &x2) - q(5, 1);
        assert_eq!((x2.clone(), y2.clone()), (q(129, 100), q(-383, 1000)));
        assert_eq!(e.mul(2, &r).unwrap(), PointQ::affine(x2, y2));
        assert_eq!(e.mul(-1, &r).unwrap(), r.neg());
        assert_eq!(e.mul(0, &r).unwrap(), PointQ::Infinity);
        let three = e.mul(3, &r).unwrap();
        assert_eq!(three, e.add(&e.mul(2, &r).unwrap(), &r).unwrap());
        assert!(e.contains(&three));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(CurveQ::new(0, 0), Err(Error::SingularCurve));
        assert_eq!(CurveQ::new(-3, 2), Err(Error::SingularCurve));
        let e = CurveQ::new(0, -2).unwrap();
        assert_eq!(e.mul(2, &PointQ::from_i64(1, 1)), Err(Error::PointNotOnCurve));
    }

    #[test]
    fn parsing() {
        assert_eq!("0,-2".parse::<CurveQ>().unwrap(), CurveQ::new(0, -2).unwrap());
        assert_eq!("3;5".parse::<PointQ>().unwrap(), PointQ::from_i64(3, 5));
        assert_eq!("inf".parse::<PointQ>().unwrap(), PointQ::Infinity);
        assert_eq!("129/100,-383/1000".parse::<PointQ>().unwrap(), PointQ::affine(q(129, 100), q(-383, 1000)));
        assert_eq!(PointQ::affine(q(129, 100), q(-383, 1000)).to_string(), "129/100;-383/1000");
        assert!("3".parse::<PointQ>().is_err());
    }

    #[test]
    fn projective_representative() {
        let p = PointQ::affine(q(129, 100), q(-383, 1000));
        assert_eq!(p.projective(), (BigInt::from(1290), BigInt::from(-383), BigInt::from(1000)));
        assert_eq!(PointQ::Infinity.projective().2, BigInt::zero());
    }
}
