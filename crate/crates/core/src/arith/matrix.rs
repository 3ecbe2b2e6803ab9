//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Textbook elimination with explicit unimodular transforms. The matrices
//! handled here are small, so entries are arbitrary precision and nothing
//! is done modularly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix { nrows, ncols, data: vec![BigInt::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from rows; every row must have length `ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {ncols} columns",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(IntMatrix { nrows, ncols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_rows(ncols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("ragged rows")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{}",
                v.len(),
                self.nrows,
                self.ncols
            )));
        }
        let mut out = vec![BigInt::zero(); self.ncols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * &self[(i, j)];
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.nrows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.ncols {
            let v = k * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.nrows {
            let v = k * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.ncols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.nrows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.ncols + j]
    }
}

/// Row-style Hermite normal form `u * m = h`.
///
/// `h` is in row echelon form with positive pivots; entries above a pivot
/// lie in `[0, pivot)`. Non-zero rows of `h` come first, followed by zero
/// rows. `rank` is the number of non-zero rows.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite_normal_form(m: &IntMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.nrows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..h.ncols() {
        if r == h.nrows() {
            break;
        }
        loop {
            // smallest non-zero entry in column c at or below row r
            let best = (r..h.nrows())
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(r, best);
            u.swap_rows(r, best);
            let mut done = true;
            for i in r + 1..h.nrows() {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row(i, r, &q);
            u.add_row(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, rank: r, pivots }
}

/// Basis (as rows) of the integer left kernel `{x : x * m = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(m);
    let rows = (hnf.rank..m.nrows()).map(|i| hnf.u.row(i).to_vec()).collect();
    IntMatrix::from_rows(m.nrows(), rows).expect("kernel rows")
}

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// The non-zero elementary divisors.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(nr);
    let mut v = IntMatrix::identity(nc);
    for t in 0..nr.min(nc) {
        loop {
            // move the smallest non-zero entry of the trailing block to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_snf(u, d, v);
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..nr {
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..nc {
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender = (t + 1..nr)
                .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_snf(u, d, v)
}

fn finish_snf(u: IntMatrix, mut d: IntMatrix, mut v: IntMatrix) -> Snf {
    for t in 0..d.nrows().min(d.ncols()) {
        if d[(t, t)].is_negative() {
            d.negate_col(t);
            v.negate_col(t);
        }
    }
    Snf { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_snf(a: &IntMatrix) -> Snf {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    // 2x2 oracle: d1 = gcd of entries, d1*d2 = |det|.
    fn snf_2x2_oracle(a: [[i64; 2]; 2]) -> (i64, i64) {
        let g = [a[0][0], a[0][1], a[1][0], a[1][1]].iter().fold(0i64, |g, &x| g.gcd(&x));
        let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
        if g == 0 {
            (0, 0)
        } else {
            (g, det / g)
        }
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IntMatrix::identity(2));
        assert_eq!(s.diagonal(), vec![BigInt::one(), BigInt::one()]);
        let s = check_snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(snf_2x2_oracle([[2, 0], [0, 3]]), (1, 6));
        let s = check_snf(&m(&[&[2, 4], &[0, 0]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn snf_rectangular_and_degenerate() {
        check_snf(&IntMatrix::zeros(3, 2));
        check_snf(&IntMatrix::zeros(0, 3));
        let s = check_snf(&m(&[&[6, 10, 15]]));
        assert_eq!(s.diagonal(), vec![BigInt::one()]);
        let s = check_snf(&m(&[&[4], &[6]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn hnf_and_kernel() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let hnf = hermite_normal_form(&a);
        assert_eq!(hnf.u.mul(&a).unwrap(), hnf.h);
        assert_eq!(hnf.u.determinant().unwrap().abs(), BigInt::one());
        for (r, &c) in hnf.pivots.iter().enumerate() {
            assert!(hnf.h[(r, c)].is_positive());
            for i in 0..r {
                assert!(!hnf.h[(i, c)].is_negative() && hnf.h[(i, c)] < hnf.h[(r, c)]);
            }
        }
        let k = left_kernel(&m(&[&[1], &[2]]));
        assert_eq!(k.nrows(), 1);
        let v = m(&[&[1], &[2]]).transpose();
        let x = k.row(0);
        assert!((&x[0] * &v[(0, 0)] + &x[1] * &v[(0, 1)]).is_zero());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(&[&[2, -3, 1], &[2, 0, -1], &[1, 4, 5]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(49));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), BigInt::zero());
    }

    proptest! {
        #[test]
        fn snf_2x2_agrees_with_gcd_oracle(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let s = check_snf(&m(&[&[a, b], &[c, d]]));
            let (d1, d2) = snf_2x2_oracle([[a, b], [c, d]]);
            prop_assert_eq!(s.diagonal(), vec![BigInt::from(d1), BigInt::from(d2)]);
        }

        #[test]
        fn snf_random_3x4(entries in prop::collection::vec(-9i64..10, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            check_snf(&IntMatrix::from_i64(&rows));
        }
    }
}
