//! Exact multiplicative relations among rational points on G_m^n.
//!
//! A non-zero rational is `sign * prod p^e`. A product `prod x_i^(a_i)`
//! equals one exactly when the exponent vectors cancel and the signs
//! multiply to `+1`, so relations form the integer lattice
//!
//! ```text
//!     { a : sum a_i e_i = 0,  sum a_i s_i = 0 (mod 2) }
//! ```
//!
//! where `s_i` is 1 for negative coordinates. It is computed as the
//! projection of a left kernel with one auxiliary row carrying the
//! modulus 2.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::point::{EndoMatrix, GmPoint};
use crate::arith::{exponent_vector, left_kernel, smith_normal_form, IntMatrix, LatticeBasis};
use crate::error::{Error, Result};

/// The lattice `{a in Z^n : prod x_i^(a_i) = 1}` for arbitrary non-zero rationals.
pub fn multiplicative_relations(coords: &[BigRational]) -> Result<LatticeBasis> {
    let n = coords.len();
    let facs = coords.iter().map(exponent_vector).collect::<Result<Vec<_>>>()?;
    let primes: Vec<u64> = facs
        .iter()
        .flat_map(|f| f.exponents.keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = primes.len();
    let mut rows = Vec::with_capacity(n + 1);
    for f in &facs {
        let mut row: Vec<BigInt> = primes.iter().map(|&p| BigInt::from(f.exponent(p))).collect();
        row.push(BigInt::from(if f.sign < 0 { 1 } else { 0 }));
        rows.push(row);
    }
    let mut parity = vec![BigInt::zero(); k + 1];
    parity[k] = BigInt::from(2);
    rows.push(parity);
    let system = IntMatrix::from_rows(k + 1, rows)?;
    let kernel = left_kernel(&system);
    let projected = kernel.to_rows().into_iter().map(|mut r| {
        r.truncate(n);
        r
    });
    LatticeBasis::from_generators(n, projected.collect())
}

/// Character-lattice relations of `point`.
pub fn relation_lattice(point: &GmPoint) -> Result<LatticeBasis> {
    multiplicative_relations(point.coords())
}

/// Number of connected components of the smallest algebraic subgroup
/// containing `point`: the saturation index of its relation lattice.
pub fn component_count(point: &GmPoint) -> Result<BigInt> {
    let lattice = relation_lattice(point)?;
    Ok(lattice.saturation_index())
}

/// Non-zero with multiplicatively independent coordinates.
pub fn gm_is_independent(point: &GmPoint) -> Result<bool> {
    if point.is_identity() {
        return Ok(false);
    }
    Ok(relation_lattice(point)?.is_zero())
}

/// Independent sub-point controlling the order of a point of infinite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Retained coordinates, 0-based and ascending.
    pub indices: Vec<usize>,
    /// For every prime of good reduction `ord(P) | d * ord(P')`.
    pub d: BigInt,
    pub sub_point: GmPoint,
}

/// Smallest `r >= 1` with `x^r` in the group generated by `basis`, or `None`.
fn saturation_exponent(x: &BigRational, basis: &[BigRational]) -> Result<Option<BigInt>> {
    let mut coords = Vec::with_capacity(basis.len() + 1);
    coords.push(x.clone());
    coords.extend(basis.iter().cloned());
    let lattice = multiplicative_relations(&coords)?;
    // Hermite basis: the first coordinate ideal is generated by the leading pivot.
    let rows = lattice.basis_rows();
    Ok(rows.first().filter(|r| !r[0].is_zero()).map(|r| r[0].abs()))
}

/// Greedy left-to-right maximal independent subset `J` with the
/// multiplier `d` relating `ord(P mod p)` and `ord(P_J mod p)`.
pub fn decompose_independent(point: &GmPoint) -> Result<Decomposition> {
    let coords = point.coords();
    let mut indices: Vec<usize> = Vec::new();
    for i in 0..coords.len() {
        let mut trial: Vec<BigRational> = indices.iter().map(|&j| coords[j].clone()).collect();
        trial.push(coords[i].clone());
        if multiplicative_relations(&trial)?.is_zero() {
            indices.push(i);
        }
    }
    if indices.is_empty() {
        return Err(Error::TorsionPoint);
    }
    let kept: Vec<BigRational> = indices.iter().map(|&j| coords[j].clone()).collect();
    let mut d = BigInt::one();
    for i in (0..coords.len()).filter(|i| !indices.contains(i)) {
        let r = saturation_exponent(&coords[i], &kept)?
            .expect("maximal independent subset spans every coordinate up to torsion");
        d = d.lcm(&r);
    }
    Ok(Decomposition { sub_point: point.select(&indices)?, indices, d })
}

/// Exponent of the kernel of the isogeny of G_m^n given by a square
/// non-singular matrix: its largest elementary divisor.
pub fn isogeny_kernel_exponent(m: &EndoMatrix) -> Result<BigInt> {
    let mat = m.matrix();
    if !mat.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", mat.nrows(), mat.ncols())));
    }
    if mat.determinant()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(smith_normal_form(mat).elementary_divisors().pop().unwrap_or_else(BigInt::one))
}

/// Degree `|det M|` of the isogeny.
pub fn isogeny_degree(m: &EndoMatrix) -> Result<BigInt> {
    Ok(m.matrix().determinant()?.abs())
}

/// `phi(P) = c Q` with `phi` a k x n integer matrix and `c` minimal positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmRelation {
    pub matrix: EndoMatrix,
    pub c: BigInt,
    /// Minimal constant of each target coordinate; `c` is their lcm.
    pub row_constants: Vec<BigInt>,
}

impl GmRelation {
    /// Exact check of `M(P) = Q^c` over Q.
    pub fn verify(&self, p: &GmPoint, q: &GmPoint) -> Result<bool> {
        Ok(self.matrix.apply(p)? == q.pow(&self.c))
    }
}

/// Find `(M, c)` with `prod_j P_j^(M_ij) = Q_i^c` for all `i` and `c >= 1`
/// minimal, or `None` if no non-zero `c` works.
///
/// For each target coordinate the admissible `c` form an ideal `c_i Z`,
/// read off the Hermite basis of the relations among `(Q_i, P_1, ..., P_n)`.
/// The admissible `c` for the whole point form `lcm(c_i) Z`.
pub fn gm_find_relation(p: &GmPoint, q: &GmPoint) -> Result<Option<GmRelation>> {
    let n = p.dim();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(q.dim());
    let mut constants = Vec::with_capacity(q.dim());
    for qi in q.coords() {
        let mut coords = Vec::with_capacity(n + 1);
        coords.push(qi.clone());
        coords.extend(p.coords().iter().cloned());
        let lattice = multiplicative_relations(&coords)?;
        let basis = lattice.basis_rows();
        let Some(lead) = basis.into_iter().next().filter(|r| !r[0].is_zero()) else {
            return Ok(None);
        };
        // Q_i^g * prod P_j^(a_j) = 1 with g > 0, so prod P_j^(-a_j) = Q_i^g.
        constants.push(lead[0].clone());
        rows.push(lead[1..].iter().map(|a| -a).collect());
    }
    let c = constants.iter().fold(BigInt::one(), |acc, ci| acc.lcm(ci));
    for (row, ci) in rows.iter_mut().zip(&constants) {
        let scale = &c / ci;
        for a in row.iter_mut() {
            *a *= &scale;
        }
    }
    let matrix = EndoMatrix::new(IntMatrix::from_rows(n, rows)?);
    Ok(Some(GmRelation { matrix, c, row_constants: constants }))
}

/// Serializable view of a relation, with big entries as decimal strings
/// only when they overflow `i64`.
#[derive(Debug, Clone, Serialize)]
pub struct GmRelationView {
    pub matrix: Vec<Vec<serde_json::Value>>,
    pub c: serde_json::Value,
}

pub fn bigint_json(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(x.to_string()),
    }
}

impl From<&GmRelation> for GmRelationView {
    fn from(r: &GmRelation) -> Self {
        GmRelationView {
            matrix: r.matrix.matrix().to_rows().iter().map(|row| row.iter().map(bigint_json).collect()).collect(),
            c: bigint_json(&r.c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::LatticeBasis;
    use crate::gm::order::gm_point_order;
    use crate::gm::order::gm_good_reduction;
    use crate::arith::primes_in_range;

    fn pt(c: &[i64]) -> GmPoint {
        GmPoint::from_i64(c).unwrap()
    }

    fn lat(dim: usize, gens: &[Vec<i64>]) -> LatticeBasis {
        LatticeBasis::from_i64(dim, gens).unwrap()
    }

    #[test]
    fn relation_lattice_examples() {
        assert_eq!(relation_lattice(&pt(&[2])).unwrap(), LatticeBasis::zero(1));
        assert_eq!(relation_lattice(&pt(&[-1])).unwrap(), lat(1, &[vec![2]]));
        // 2^a (-2)^b = 1  <=>  a + b = 0 and b even
        assert_eq!(relation_lattice(&pt(&[2, -2])).unwrap(), lat(2, &[vec![-2, 2]]));
        assert_eq!(relation_lattice(&pt(&[1, 3])).unwrap(), lat(2, &[vec![1, 0]]));
        let q = GmPoint::from_ratios(&[(4, 9), (2, 3)]).unwrap();
        assert_eq!(relation_lattice(&q).unwrap(), lat(2, &[vec![1, -2]]));
    }

    #[test]
    fn component_count_examples() {
        assert_eq!(component_count(&pt(&[4])).unwrap(), BigInt::one());
        assert_eq!(component_count(&pt(&[-1])).unwrap(), BigInt::from(2));
        assert_eq!(component_count(&pt(&[2, -2])).unwrap(), BigInt::from(2));
        assert_eq!(component_count(&pt(&[1, 1])).unwrap(), BigInt::one());
        assert_eq!(component_count(&pt(&[4, -2])).unwrap(), BigInt::one());
    }

    #[test]
    fn independence_examples() {
        assert!(gm_is_independent(&pt(&[2, 3])).unwrap());
        assert!(!gm_is_independent(&pt(&[2, 4])).unwrap());
        assert!(!gm_is_independent(&pt(&[1])).unwrap());
        assert!(!gm_is_independent(&pt(&[-1])).unwrap());
        assert!(gm_is_independent(&GmPoint::from_ratios(&[(2, 3), (6, 1)]).unwrap()).unwrap());
    }

    fn check_decomposition(p: &GmPoint, dec: &Decomposition) {
        for prime in primes_in_range(2, 1000).unwrap() {
            if !gm_good_reduction(p, prime) {
                continue;
            }
            let full = gm_point_order(p, prime, &[]).unwrap().order;
            let sub = gm_point_order(&dec.sub_point, prime, &[]).unwrap().order;
            assert!((&dec.d * BigInt::from(sub)).is_multiple_of(&BigInt::from(full)), "p = {prime}");
        }
        assert!(gm_is_independent(&dec.sub_point).unwrap());
    }

    #[test]
    fn decompose_examples() {
        let p = pt(&[2, 4]);
        let dec = decompose_independent(&p).unwrap();
        assert_eq!(dec.indices, vec![0]);
        // 4 = 2^2 already lies in the group generated by 2
        assert_eq!(dec.d, BigInt::one());
        check_decomposition(&p, &dec);

        let p = pt(&[2, 3]);
        let dec = decompose_independent(&p).unwrap();
        assert_eq!((dec.indices.clone(), dec.d.clone()), (vec![0, 1], BigInt::one()));
        assert_eq!(dec.sub_point, p);

        let p = pt(&[2, -1]);
        let dec = decompose_independent(&p).unwrap();
        assert_eq!((dec.indices.clone(), dec.d.clone()), (vec![0], BigInt::from(2)));
        check_decomposition(&p, &dec);

        let p = GmPoint::from_ratios(&[(8, 1), (-4, 1), (3, 1), (1, 9)]).unwrap();
        let dec = decompose_independent(&p).unwrap();
        assert_eq!(dec.indices, vec![0, 2]);
        // (-4)^3 = -(8^2): r = 6 after the sign; 1/9 = 3^-2: r = 1
        assert_eq!(dec.d, BigInt::from(6));
        check_decomposition(&p, &dec);

        assert_eq!(decompose_independent(&pt(&[-1, 1])), Err(Error::TorsionPoint));
    }

    #[test]
    fn kernel_exponent_examples() {
        let two = EndoMatrix::scalar(2, 2);
        assert_eq!(isogeny_kernel_exponent(&two).unwrap(), BigInt::from(2));
        assert_eq!(isogeny_degree(&two).unwrap(), BigInt::from(4));
        assert_eq!(isogeny_kernel_exponent(&EndoMatrix::from_i64(&[vec![2, 0], vec![0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(isogeny_kernel_exponent(&EndoMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(
            isogeny_kernel_exponent(&EndoMatrix::from_i64(&[vec![1, 2], vec![2, 4]])),
            Err(Error::SingularMatrix)
        );
        assert!(matches!(
            isogeny_kernel_exponent(&EndoMatrix::from_i64(&[vec![1, 2]])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn find_relation_examples() {
        let r = gm_find_relation(&pt(&[2]), &pt(&[4])).unwrap().unwrap();
        assert_eq!(r.c, BigInt::one());
        assert_eq!(r.matrix, EndoMatrix::from_i64(&[vec![2]]));

        let r = gm_find_relation(&pt(&[4]), &pt(&[2])).unwrap().unwrap();
        assert_eq!(r.c, BigInt::from(2));
        assert_eq!(r.matrix, EndoMatrix::from_i64(&[vec![1]]));

        let p = GmPoint::new(vec![BigRational::from_integer(BigInt::from(256)), BigRational::from_integer((-1).into())]).unwrap();
        let q = pt(&[2, 1]);
        let r = gm_find_relation(&p, &q).unwrap().unwrap();
        assert_eq!(r.c, BigInt::from(8));
        assert!(r.verify(&p, &q).unwrap());

        assert_eq!(gm_find_relation(&pt(&[2, -1]), &pt(&[3, 1])).unwrap(), None);
    }

    #[test]
    fn find_relation_with_torsion_targets() {
        // Q = -1 needs c = 2 unless -1 is reachable from P
        let r = gm_find_relation(&pt(&[2]), &pt(&[-1])).unwrap().unwrap();
        assert_eq!(r.c, BigInt::from(2));
        let r = gm_find_relation(&pt(&[-2]), &pt(&[2])).unwrap().unwrap();
        assert_eq!(r.c, BigInt::from(2));
        let r = gm_find_relation(&pt(&[-2, 2]), &pt(&[-1])).unwrap().unwrap();
        assert_eq!(r.c, BigInt::one());
        assert!(r.verify(&pt(&[-2, 2]), &pt(&[-1])).unwrap());
    }
}
