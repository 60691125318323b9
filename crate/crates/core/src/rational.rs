//! Exact rational scalars.
//!
//! Every exact quantity in the crate (invariants, polynomial coefficients,
//! reduction prefactors) is a [`Rational`]. `BigRational` keeps the value in
//! lowest terms with a positive denominator, which is the canonical form the
//! rest of the crate relies on for equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `base^exp` for a possibly negative exponent. Panics on `0^negative`.
pub fn pow_signed(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        assert!(!base.is_zero(), "zero raised to a negative power");
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// `∏_{i=1}^{n} (i - 1 + s)`, the rising factorial `(s)_n`.
///
/// This is `Γ(n + s) / Γ(s)` kept in exact arithmetic.
pub fn rising_factorial(s: &Rational, n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * (s + int(i as i64 - 1)))
}

/// Text form used in every serialized output: `p/q`, or `p` when `q = 1`.
pub fn render(q: &Rational) -> String {
    q.to_string()
}

/// Parses `p` or `p/q` (optional leading sign).
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub(crate) fn is_one_abs(q: &Rational) -> bool {
    q.abs().is_one()
}
