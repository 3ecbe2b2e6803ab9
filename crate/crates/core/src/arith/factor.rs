//! Exact factorization of integers and rationals.
//!
//! Trial division by every prime below [`TRIAL_BOUND`], then Pollard rho
//! (Brent's variant) on whatever cofactor remains. The rho stage runs on
//! machine words, so inputs whose cofactor after trial division exceeds
//! 64 bits are rejected with [`Error::FactorizationLimitExceeded`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::{gcd, is_prime, mul_mod, sieve};
use crate::error::{Error, Result};

pub const TRIAL_BOUND: u64 = 1 << 16;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_BOUND))
}

/// Sign and prime exponents of a non-zero rational.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub sign: i8,
    pub exponents: BTreeMap<u64, i64>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { sign: 1, exponents: BTreeMap::new() }
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.exponents.get(&p).copied().unwrap_or(0)
    }

    /// `sign * prod p^e` as an exact rational.
    pub fn evaluate(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, &e) in &self.exponents {
            let pp = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pp;
            } else {
                den *= pp;
            }
        }
        if self.sign < 0 {
            num = -num;
        }
        BigRational::new(num, den)
    }
}

fn pollard_brent(n: u64, seed: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + seed) % n;
    let mut y = seed.wrapping_mul(0x9e37_79b9) % n;
    let m = 128u64;
    let mut g = 1;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_u64(n: u64, out: &mut BTreeMap<u64, i64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    for seed in 1..64 {
        if let Some(d) = pollard_brent(n, seed) {
            split_u64(d, out)?;
            split_u64(n / d, out)?;
            return Ok(());
        }
    }
    Err(Error::FactorizationLimitExceeded(format!(
        "Pollard rho failed on cofactor {n}"
    )))
}

/// Prime factorization of a positive machine word, as `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor_u64 of zero");
    let mut map = BTreeMap::new();
    let mut rest = n;
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        while rest % p == 0 {
            rest /= p;
            *map.entry(p).or_insert(0) += 1;
        }
    }
    if rest > 1 {
        // Cofactors of a 64-bit word always yield to rho.
        split_u64(rest, &mut map).expect("rho on 64-bit cofactor");
    }
    map.into_iter().map(|(p, e)| (p, e as u32)).collect()
}

/// Factor a non-zero integer: `n = sign * prod p^e` with `e > 0`.
pub fn factor_integer(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut rest = n.abs();
    let mut exponents = BTreeMap::new();
    if let Some(word) = rest.to_u64() {
        for (p, e) in factor_u64(word) {
            exponents.insert(p, e as i64);
        }
        return Ok(Factorization { sign, exponents });
    }
    for &p in small_primes() {
        let bp = BigInt::from(p);
        let mut e = 0i64;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&rest, &bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            exponents.insert(p, e);
            if let Some(word) = rest.to_u64() {
                for (q, f) in factor_u64(word) {
                    *exponents.entry(q).or_insert(0) += f as i64;
                }
                return Ok(Factorization { sign, exponents });
            }
        }
    }
    if let Some(word) = rest.to_u64() {
        split_u64(word, &mut exponents)?;
        return Ok(Factorization { sign, exponents });
    }
    Err(Error::FactorizationLimitExceeded(format!(
        "cofactor {rest} has no prime factor below {TRIAL_BOUND} and exceeds 64 bits"
    )))
}

/// Exponent vector of a non-zero rational: `q = sign * prod p^e`, `e` in Z.
pub fn exponent_vector(q: &BigRational) -> Result<Factorization> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let num = factor_integer(q.numer())?;
    let den = factor_integer(q.denom())?;
    let mut exponents = num.exponents;
    for (p, e) in den.exponents {
        *exponents.entry(p).or_insert(0) -= e;
    }
    exponents.retain(|_, e| *e != 0);
    Ok(Factorization { sign: num.sign * den.sign, exponents })
}

/// The exponent of `ell` in `n`.
pub fn valuation(n: &BigInt, ell: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if ell < 2 {
        return Err(Error::InvalidArgument(format!("valuation base {ell}")));
    }
    let bl = BigInt::from(ell);
    let mut rest = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &bl);
        if !r.is_zero() {
            return Ok(v);
        }
        rest = q;
        v += 1;
    }
}

/// [`valuation`] on machine words; `n` must be non-zero.
pub fn valuation_u64(mut n: u64, ell: u64) -> u32 {
    debug_assert!(n != 0 && ell >= 2);
    let mut v = 0;
    while n % ell == 0 {
        n /= ell;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(mut n: u64) -> BTreeMap<u64, i64> {
        let mut out = BTreeMap::new();
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                *out.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            *out.entry(n).or_insert(0) += 1;
        }
        out
    }

    fn fac(pairs: &[(u64, i64)], sign: i8) -> Factorization {
        Factorization { sign, exponents: pairs.iter().copied().collect() }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_integer(&BigInt::from(1)).unwrap(), fac(&[], 1));
        assert_eq!(factor_integer(&BigInt::from(-12)).unwrap(), fac(&[(2, 2), (3, 1)], -1));
        assert_eq!(trial_division(9991), [(97, 1), (103, 1)].into_iter().collect());
        assert_eq!(factor_integer(&BigInt::from(9991)).unwrap(), fac(&[(97, 1), (103, 1)], 1));
        assert_eq!(factor_integer(&BigInt::zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn exponent_vector_examples() {
        let q = BigRational::new(4.into(), 9.into());
        assert_eq!(exponent_vector(&q).unwrap(), fac(&[(2, 2), (3, -2)], 1));
        assert_eq!(exponent_vector(&BigRational::from_integer((-1).into())).unwrap(), fac(&[], -1));
        assert_eq!(exponent_vector(&BigRational::from_integer(2.into())).unwrap(), fac(&[(2, 1)], 1));
        assert_eq!(exponent_vector(&BigRational::zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&BigInt::from(24), 2).unwrap(), 3);
        assert_eq!(valuation(&BigInt::from(24), 5).unwrap(), 0);
        assert_eq!(valuation(&BigInt::from(2187 * 11), 3).unwrap(), 7);
        assert_eq!(valuation(&BigInt::zero(), 3), Err(Error::ZeroInput));
    }

    #[test]
    fn large_inputs() {
        let big = num_traits::pow(BigInt::from(2), 4096) * BigInt::from(3);
        let f = factor_integer(&big).unwrap();
        assert_eq!(f, fac(&[(2, 4096), (3, 1)], 1));
        // product of two primes above the trial bound, still within 64 bits
        let n = BigInt::from(4_294_967_291u64) * BigInt::from(4_294_967_279u64);
        let f = factor_integer(&n).unwrap();
        assert_eq!(f, fac(&[(4_294_967_279, 1), (4_294_967_291, 1)], 1));
        // a cofactor beyond 64 bits with no small factor is refused
        let n = BigInt::from(18_446_744_073_709_551_557u64) * BigInt::from(18_446_744_073_709_551_533u64);
        assert!(matches!(factor_integer(&n), Err(Error::FactorizationLimitExceeded(_))));
    }

    #[test]
    fn factor_u64_matches_trial_division() {
        for n in 1..3000u64 {
            let got: BTreeMap<u64, i64> = factor_u64(n).into_iter().map(|(p, e)| (p, e as i64)).collect();
            assert_eq!(got, trial_division(n), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn round_trip(num in -1_000_000_000_000i64..1_000_000_000_000, den in 1i64..1_000_000_000_000) {
            prop_assume!(num != 0);
            let q = BigRational::new(num.into(), den.into());
            let f = exponent_vector(&q).unwrap();
            prop_assert!(f.exponents.values().all(|&e| e != 0));
            prop_assert!(f.exponents.keys().all(|&p| is_prime(p)));
            prop_assert_eq!(f.evaluate(), q);
        }

        #[test]
        fn valuation_is_additive(a in 1i64..10_000_000, b in 1i64..10_000_000, ell in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
            let va = valuation(&BigInt::from(a), ell).unwrap();
            let vb = valuation(&BigInt::from(b), ell).unwrap();
            let vab = valuation(&(BigInt::from(a) * BigInt::from(b)), ell).unwrap();
            prop_assert_eq!(vab, va + vb);
        }
    }
}
