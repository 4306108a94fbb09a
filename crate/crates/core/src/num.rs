//! Coefficient traits and small exact-integer helpers shared by the exact
//! and floating-point code paths.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

/// Field elements usable as polynomial coefficients.
///
/// Implemented for exact rationals and for `f32`/`f64`, so the same
/// recurrence code produces both exact and floating-point polynomials.
pub trait Coefficient: Clone + PartialEq + Debug + Num + Neg<Output = Self> {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Coefficient for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Coefficient for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
}

impl Coefficient for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q) as f32
    }
}

/// Shorthand constructor for `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Converts a rational to the nearest `f64`, also for operands whose
/// numerator and denominator overflow `f64` on their own.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits().max(d.bits()) as i64 - 60;
    let (n, d) = if shift > 0 { (n >> shift as usize, d >> shift as usize) } else { (n.clone(), d.clone()) };
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n!!`, with the convention `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn factorial_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn double_factorial_q(n: i64) -> Rational {
    Rational::from_integer(double_factorial(n))
}

/// Integer binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Generalized binomial `C(z, m) = z (z-1) ... (z-m+1) / m!` for any
/// coefficient type, computed as a falling-factorial product.
pub fn binomial_general<T: Coefficient>(z: &T, m: u64) -> T {
    let mut acc = T::one();
    for j in 0..m {
        acc = acc * (z.clone() - T::from_int(j as i64)) / T::from_int(j as i64 + 1);
    }
    acc
}

/// `q^e` for an integer exponent; `q` must be nonzero when `e < 0`.
pub fn rational_pow(q: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= q;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// `Some(n)` when `q` is an integer that fits in `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn is_half_integer_or_integer(q: &Rational) -> bool {
    (q * int(2)).is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_conventions() {
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(double_factorial(0), BigInt::one());
        assert_eq!(double_factorial(7), BigInt::from(105));
        assert_eq!(double_factorial(8), BigInt::from(384));
    }

    #[test]
    fn general_binomial_half_integer() {
        // C(5/2, 2) = (5/2)(3/2)/2 = 15/8
        assert_eq!(binomial_general(&rat(5, 2), 2), rat(15, 8));
        assert_eq!(binomial_general(&int(6), 2), int(15));
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }

    #[test]
    fn huge_rational_to_f64() {
        let q = Rational::new(factorial(200), factorial(199));
        assert_eq!(rational_to_f64(&q), 200.0);
    }
}
