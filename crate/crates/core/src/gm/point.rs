use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// A rational point on the split torus G_m^n: a vector of non-zero rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GmPoint {
    coords: Vec<BigRational>,
}

impl GmPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("G_m point of dimension 0".into()));
        }
        if coords.iter().any(Zero::is_zero) {
            return Err(Error::ZeroInput);
        }
        Ok(GmPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Result<Self> {
        if coords.iter().any(|&(_, d)| d == 0) {
            return Err(Error::ZeroInput);
        }
        Self::new(coords.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    pub fn identity(dim: usize) -> Self {
        GmPoint { coords: vec![BigRational::one(); dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(One::is_one)
    }

    /// Finite order iff every coordinate is `1` or `-1`.
    pub fn is_torsion(&self) -> bool {
        self.coords.iter().all(|c| c.abs().is_one())
    }

    /// The sub-point made of the coordinates at `indices`.
    pub fn select(&self, indices: &[usize]) -> Result<GmPoint> {
        let coords = indices
            .iter()
            .map(|&i| {
                self.coords.get(i).cloned().ok_or_else(|| {
                    Error::DimensionMismatch(format!("index {i} in a point of dimension {}", self.dim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GmPoint::new(coords)
    }

    /// Concatenation `(self, other)` as a point on G_m^(n+m).
    pub fn concat(&self, other: &GmPoint) -> GmPoint {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        GmPoint { coords }
    }

    /// `m`-th power, written additively `m * P` elsewhere.
    pub fn pow(&self, m: &BigInt) -> GmPoint {
        GmPoint { coords: self.coords.iter().map(|c| rational_pow(c, m)).collect() }
    }

    pub fn mul(&self, other: &GmPoint) -> Result<GmPoint> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(GmPoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).collect() })
    }
}

/// `q^e` for a non-zero rational and any integer exponent.
pub fn rational_pow(q: &BigRational, e: &BigInt) -> BigRational {
    let mag = e.abs().to_usize().expect("exponent too large");
    let num = num_traits::pow(q.numer().clone(), mag);
    let den = num_traits::pow(q.denom().clone(), mag);
    if e.is_negative() {
        BigRational::new(den, num)
    } else {
        BigRational::new(num, den)
    }
}

impl fmt::Display for GmPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for GmPoint {
    type Err = Error;

    /// Comma-separated rationals, e.g. `2,-1,4/9`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        GmPoint::new(coords)
    }
}

pub fn parse_rational(t: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {t:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// An endomorphism of G_m^n -> G_m^k: `(M x)_i = prod_j x_j^(M_ij)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoMatrix {
    matrix: IntMatrix,
}

impl EndoMatrix {
    pub fn new(matrix: IntMatrix) -> Self {
        EndoMatrix { matrix }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        EndoMatrix { matrix: IntMatrix::from_i64(rows) }
    }

    pub fn identity(n: usize) -> Self {
        EndoMatrix { matrix: IntMatrix::identity(n) }
    }

    /// Multiplication by `m` on G_m^n.
    pub fn scalar(n: usize, m: i64) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { m } else { 0 }).collect()).collect::<Vec<_>>();
        Self::from_i64(&rows)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Target dimension k.
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    /// Source dimension n.
    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, p: &GmPoint) -> Result<GmPoint> {
        if p.dim() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} endomorphism on a point of dimension {}",
                self.rows(),
                self.cols(),
                p.dim()
            )));
        }
        let coords = (0..self.rows())
            .map(|i| {
                p.coords()
                    .iter()
                    .enumerate()
                    .fold(BigRational::one(), |acc, (j, x)| acc * rational_pow(x, &self.matrix[(i, j)]))
            })
            .collect();
        GmPoint::new(coords)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EndoMatrix) -> Result<EndoMatrix> {
        Ok(EndoMatrix { matrix: self.matrix.mul(&other.matrix)? })
    }

    /// Apply to residues in F_p^*.
    pub fn apply_mod(&self, residues: &[u64], p: u64) -> Result<Vec<u64>> {
        use crate::arith::primes::{mul_mod, pow_mod};
        if residues.len() != self.cols() {
            return Err(Error::DimensionMismatch("residue vector".into()));
        }
        let order = BigInt::from(p - 1);
        (0..self.rows())
            .map(|i| {
                residues.iter().enumerate().try_fold(1u64, |acc, (j, &x)| {
                    if x % p == 0 {
                        return Err(Error::ZeroElement { p });
                    }
                    // exponents act through Z/(p-1)
                    let e = num_integer::Integer::mod_floor(&self.matrix[(i, j)], &order);
                    let e = e.to_u64().expect("reduced exponent");
                    Ok(mul_mod(acc, pow_mod(x, e, p), p))
                })
            })
            .collect()
    }
}
