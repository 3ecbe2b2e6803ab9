//! Exact integer and rational arithmetic: factorization, valuations,
//! normal forms and integer lattices.

pub mod factor;
pub mod lattice;
pub mod matrix;
pub mod primes;

pub use factor::{exponent_vector, factor_integer, factor_u64, valuation, valuation_u64, Factorization};
pub use lattice::{kernel_mod, lattice_index, LatticeBasis};
pub use matrix::{hermite_normal_form, left_kernel, smith_normal_form, Hnf, IntMatrix, Snf};
pub use primes::{is_prime, primes_in_range};

/// The saturation of `l`.
pub fn lattice_saturation(l: &LatticeBasis) -> LatticeBasis {
    l.saturation()
}
