//! Exact number types and the binomial / power primitives.
//!
//! `Natural`, `Integer` and `Rational` are the `num` arbitrary-precision
//! types. `Rational` reduces to lowest terms with a positive denominator on
//! every construction, so structural equality is value equality.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Natural = BigUint;
pub type Integer = BigInt;
pub type Rational = BigRational;

/// Binomial coefficient `C(a, b)`, zero when `b > a`.
///
/// Uses the multiplicative formula with an exact division after each step,
/// so intermediates never exceed `C(a, b) * b`.
pub fn binom(a: u64, b: u64) -> Natural {
    if b > a {
        return Natural::zero();
    }
    let b = b.min(a - b);
    let mut acc = Natural::one();
    for i in 1..=b {
        // acc = C(a - b + i - 1, i - 1) here; the product is divisible by i.
        acc *= a - b + i;
        acc /= i;
    }
    acc
}

/// `r^m` with `0^0 = 1`.
pub fn ipow(r: u64, m: u32) -> Natural {
    num_traits::pow(Natural::from(r), m as usize)
}

/// `a!` as a `Natural`.
pub fn factorial(a: u64) -> Natural {
    (1..=a).fold(Natural::one(), |acc, i| acc * i)
}

pub fn to_integer(n: &Natural) -> Integer {
    Integer::from(n.clone())
}

/// Converts back to `Natural`, or `None` for negative values.
pub fn to_natural(i: &Integer) -> Option<Natural> {
    i.to_biguint()
}

pub fn to_rational(n: &Natural) -> Rational {
    Rational::from_integer(to_integer(n))
}
