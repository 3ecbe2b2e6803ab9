//! Sublattices of Z^n given by a row basis kept in Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{hermite_normal_form, left_kernel, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: IntMatrix,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    /// The lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(ambient_dim: usize, gens: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = IntMatrix::from_rows(ambient_dim, gens)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_i64(ambient_dim: usize, gens: &[Vec<i64>]) -> Result<Self> {
        Self::from_generators(
            ambient_dim,
            gens.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    /// Row span of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let hnf = hermite_normal_form(m);
        let rows = (0..hnf.rank).map(|i| hnf.h.row(i).to_vec()).collect();
        LatticeBasis {
            rows: IntMatrix::from_rows(m.ncols(), rows).expect("hnf rows"),
            pivots: hnf.pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        LatticeBasis { rows: IntMatrix::zeros(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_matrix(&IntMatrix::identity(ambient_dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn rank(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Basis rows, in Hermite normal form.
    pub fn basis(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows.to_rows()
    }

    /// Exact membership test by reduction against the echelon basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let mut rest = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            let pivot = &self.rows[(r, c)];
            let (q, rem) = rest[c].div_rem(pivot);
            if !rem.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for (j, x) in rest.iter_mut().enumerate() {
                    *x -= &q * &self.rows[(r, j)];
                }
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.ambient_dim() == self.ambient_dim()
            && (0..other.rank()).all(|i| self.contains(other.rows.row(i)))
    }

    /// `{a in Z^n : k a in L for some k >= 1}`.
    pub fn saturation(&self) -> LatticeBasis {
        let n = self.ambient_dim();
        if self.rank() == 0 || self.rank() == n {
            return if self.rank() == 0 { self.clone() } else { Self::full(n) };
        }
        // Z^n-vectors orthogonal to the orthogonal complement.
        let complement = left_kernel(&self.rows.transpose());
        Self::from_matrix(&left_kernel(&complement.transpose()))
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation_index().is_one()
    }

    /// `[sat(L) : L]`, the product of the non-zero elementary divisors of the basis.
    pub fn saturation_index(&self) -> BigInt {
        smith_normal_form(&self.rows)
            .elementary_divisors()
            .into_iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }
}

/// `[sup : sub]` for `sub` contained in `sup` with equal rank.
pub fn lattice_index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<BigInt> {
    if sub.ambient_dim() != sup.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "lattices in Z^{} and Z^{}",
            sub.ambient_dim(),
            sup.ambient_dim()
        )));
    }
    if !sup.contains_lattice(sub) {
        return Err(Error::NotSublattice);
    }
    if sub.rank() != sup.rank() {
        return Err(Error::RankMismatch);
    }
    // Both share a saturation, so the index is a ratio of saturation indices.
    Ok(sub.saturation_index() / sup.saturation_index())
}

/// `{m in Z^n : m * rows = 0 (mod modulus)}` for an `n x k` matrix `rows`.
///
/// Left kernel of `rows` stacked on `modulus * I_k`, projected to the first
/// `n` coordinates. The projection is injective since the auxiliary block
/// is non-singular.
pub fn kernel_mod(rows: &IntMatrix, modulus: &BigInt) -> LatticeBasis {
    let (n, k) = (rows.nrows(), rows.ncols());
    let mut stacked = rows.to_rows();
    for j in 0..k {
        let mut r = vec![BigInt::zero(); k];
        r[j] = modulus.clone();
        stacked.push(r);
    }
    let system = IntMatrix::from_rows(k, stacked).expect("stacked rows");
    let kernel = left_kernel(&system);
    let projected = kernel
        .to_rows()
        .into_iter()
        .map(|mut r| {
            r.truncate(n);
            r
        })
        .collect();
    LatticeBasis::from_generators(n, projected).expect("projected rows")
}
