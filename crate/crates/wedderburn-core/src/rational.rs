//! Exact rational scalars and small helpers shared across the crate.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number used for all scalar arithmetic.
pub type Rational = BigRational;

/// Builds `n / d` exactly. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of `values`.
pub fn denominator_lcm<'a, I: Iterator<Item = &'a Rational>>(values: I) -> BigInt {
    let mut acc = BigInt::one();
    for v in values {
        acc = num_integer::lcm(acc, v.denom().clone());
    }
    acc
}

/// Converts `values` to integers after scaling by the common denominator.
///
/// Returns the scaled integers together with the common denominator.
pub fn clear_denominators(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = denominator_lcm(values.iter());
    let scaled = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    (scaled, den)
}

/// Maximum absolute value of the numerators, as a `BigInt`.
pub fn max_abs(values: &[BigInt]) -> BigInt {
    let mut m = BigInt::zero();
    for v in values {
        let a = v.abs();
        if a > m {
            m = a;
        }
    }
    m
}
