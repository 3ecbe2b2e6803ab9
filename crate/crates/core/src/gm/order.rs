//! Reduction of torus points modulo primes and orders in F_p^*.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::point::GmPoint;
use crate::arith::factor::{factor_u64, valuation_u64};
use crate::arith::primes::{inv_mod, isqrt, lcm, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest prime for which discrete logarithms are computed.
pub const DLOG_LIMIT: u64 = 1_000_000;

/// Order of a point modulo one prime, with the requested valuations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmOrderRecord {
    pub p: u64,
    pub order: u64,
    pub valuations: Vec<(u64, u32)>,
}

fn residue(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// True iff `p` divides no numerator and no denominator of `point`.
pub fn gm_good_reduction(point: &GmPoint, p: u64) -> bool {
    point.coords().iter().all(|c| reduce_rational(c, p).is_some())
}

/// Coordinatewise image in F_p^*.
pub fn gm_reduce(point: &GmPoint, p: u64) -> Result<Vec<u64>> {
    point
        .coords()
        .iter()
        .map(|c| reduce_rational(c, p).ok_or(Error::BadReduction { p }))
        .collect()
}

/// Multiplicative order of `a` in F_p^*, given the factorization of `p - 1`.
pub fn mult_order_with(a: u64, p: u64, group_factors: &[(u64, u32)]) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::ZeroElement { p });
    }
    let mut order = p - 1;
    for &(q, _) in group_factors {
        while order % q == 0 && pow_mod(a, order / q, p) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn mult_order(a: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return if a % 2 == 0 { Err(Error::ZeroElement { p }) } else { Ok(1) };
    }
    mult_order_with(a, p, &factor_u64(p - 1))
}

/// Order of `(point mod p)`: the lcm of its coordinate orders.
pub fn gm_point_order(point: &GmPoint, p: u64, ells: &[u64]) -> Result<GmOrderRecord> {
    let residues = gm_reduce(point, p)?;
    let order = residue_vector_order(&residues, p)?;
    Ok(GmOrderRecord {
        p,
        order,
        valuations: ells.iter().map(|&l| (l, valuation_u64(order, l))).collect(),
    })
}

/// Order of a vector of units modulo `p`.
pub fn residue_vector_order(residues: &[u64], p: u64) -> Result<u64> {
    if p == 2 {
        return if residues.iter().any(|r| r % 2 == 0) { Err(Error::ZeroElement { p }) } else { Ok(1) };
    }
    let factors = factor_u64(p - 1);
    residues.iter().try_fold(1u64, |acc, &r| {
        let o = mult_order_with(r, p, &factors)?;
        Ok(lcm(acc, o).expect("orders divide p - 1"))
    })
}

/// The least primitive root modulo `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = factor_u64(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primitive root exists")
}

/// Baby-step giant-step discrete logarithms to a fixed primitive root.
#[derive(Debug, Clone)]
pub struct DlogTable {
    p: u64,
    generator: u64,
    step: u64,
    giant: u64,
    baby: HashMap<u64, u64>,
}

impl DlogTable {
    pub fn new(p: u64) -> Result<Self> {
        if p > DLOG_LIMIT {
            return Err(Error::DiscreteLogLimitExceeded { p });
        }
        let generator = primitive_root(p);
        let n = p - 1;
        let step = isqrt(n) + 1;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = 1u64;
        for j in 0..step {
            baby.entry(cur).or_insert(j);
            cur = mul_mod(cur, generator, p);
        }
        let giant = inv_mod(pow_mod(generator, step, p), p).expect("unit");
        Ok(DlogTable { p, generator, step, giant, baby })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `k` in `[0, p-1)` with `g^k = a`.
    pub fn log(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroElement { p: self.p });
        }
        let mut gamma = a;
        for i in 0..=self.step {
            if let Some(&j) = self.baby.get(&gamma) {
                return Ok((i * self.step + j) % (self.p - 1));
            }
            gamma = mul_mod(gamma, self.giant, self.p);
        }
        unreachable!("every unit is a power of a primitive root")
    }
}

/// Reduced residue of a rational modulo `p`, if `p` divides neither part.
pub fn reduce_rational(q: &num_rational::BigRational, p: u64) -> Option<u64> {
    let num = residue(q.numer(), p);
    let den = residue(q.denom(), p);
    if num.is_zero() || den.is_zero() {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p)?, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in_range;
    use proptest::prelude::*;

    fn brute_order(a: u64, p: u64) -> u64 {
        let mut x = a % p;
        let mut k = 1;
        while x != 1 {
            x = x * a % p;
            k += 1;
        }
        k
    }

    #[test]
    fn reduction_examples() {
        let p = GmPoint::from_ratios(&[(4, 9)]).unwrap();
        assert!(gm_good_reduction(&p, 5));
        assert!(!gm_good_reduction(&p, 3));
        assert!(!gm_good_reduction(&GmPoint::from_i64(&[2, -1]).unwrap(), 2));
        assert_eq!(gm_reduce(&p, 5).unwrap(), vec![1]);
        assert_eq!(gm_reduce(&GmPoint::from_i64(&[-1]).unwrap(), 7).unwrap(), vec![6]);
        assert_eq!(gm_reduce(&GmPoint::from_i64(&[2, 3]).unwrap(), 5).unwrap(), vec![2, 3]);
        assert_eq!(gm_reduce(&p, 3), Err(Error::BadReduction { p: 3 }));
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(2, 7).unwrap(), brute_order(2, 7));
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(2, 5).unwrap(), 4);
        assert_eq!(mult_order(4, 5).unwrap(), 2);
        assert_eq!(mult_order(1, 101).unwrap(), 1);
        assert_eq!(mult_order(0, 7), Err(Error::ZeroElement { p: 7 }));
        assert_eq!(mult_order(14, 7), Err(Error::ZeroElement { p: 7 }));

        let rec = gm_point_order(&GmPoint::from_i64(&[2, -1]).unwrap(), 5, &[2]).unwrap();
        assert_eq!(rec.order, 4);
        assert_eq!(rec.valuations, vec![(2, 2)]);
        assert_eq!(gm_point_order(&GmPoint::from_i64(&[1, 1]).unwrap(), 13, &[]).unwrap().order, 1);
        assert_eq!(gm_point_order(&GmPoint::from_i64(&[2]).unwrap(), 7, &[]).unwrap().order, 3);
    }

    #[test]
    fn mult_order_matches_brute_force_small() {
        for p in primes_in_range(3, 200).unwrap() {
            for a in 1..p {
                assert_eq!(mult_order(a, p).unwrap(), brute_order(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn dlog_round_trip() {
        for p in [3u64, 5, 7, 101, 7919, 999_983] {
            let t = DlogTable::new(p).unwrap();
            for a in [1u64, 2, 3, p - 1, p / 2 + 1].into_iter().filter(|a| a % p != 0) {
                let k = t.log(a).unwrap();
                assert_eq!(pow_mod(t.generator(), k, p), a % p);
            }
        }
        assert_eq!(DlogTable::new(1_000_003).unwrap_err(), Error::DiscreteLogLimitExceeded { p: 1_000_003 });
    }

    proptest! {
        #[test]
        fn mult_order_characterization(idx in 0usize..1229, a in 1u64..1_000_000) {
            let primes = primes_in_range(2, 10_000).unwrap();
            let p = primes[idx];
            prop_assume!(a % p != 0);
            let o = mult_order(a, p).unwrap();
            prop_assert_eq!((p - 1) % o, 0);
            prop_assert_eq!(pow_mod(a, o, p), 1);
            for (q, _) in factor_u64(o) {
                prop_assert_ne!(pow_mod(a, o / q, p), 1);
            }
        }
    }
}
