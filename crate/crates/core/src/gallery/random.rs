//! Seeded generators for random torus instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::gm::{EndoMatrix, GmPoint};

/// Primes from which random smooth coordinates are built.
pub const SMOOTH_PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];

/// `+-prod p^e` over [`SMOOTH_PRIMES`] with `|e| <= max_exp`, never `+-1`.
pub fn random_smooth_rational<R: Rng>(rng: &mut R, max_exp: i32) -> BigRational {
    loop {
        let mut num = BigInt::from(1);
        let mut den = BigInt::from(1);
        for &p in &SMOOTH_PRIMES {
            // sparse supports make dependent and independent points both common
            if rng.gen_bool(0.6) {
                continue;
            }
            let e = rng.gen_range(-max_exp..=max_exp);
            let pe = BigInt::from(p).pow(e.unsigned_abs());
            if e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        if num == den {
            continue;
        }
        let sign = if rng.gen_bool(0.25) { -1 } else { 1 };
        return BigRational::new(num * sign, den);
    }
}

pub fn random_smooth_point<R: Rng>(rng: &mut R, dim: usize, max_exp: i32) -> GmPoint {
    GmPoint::new((0..dim).map(|_| random_smooth_rational(rng, max_exp)).collect()).expect("non-zero coordinates")
}

/// `rows x cols` integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> EndoMatrix {
    let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    EndoMatrix::from_i64(&m)
}
