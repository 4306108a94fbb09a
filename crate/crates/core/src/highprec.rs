//! Arbitrary-precision evaluation of [`Scalar`] values.
//!
//! Everything is fixed-point big-integer arithmetic: pi from Machin's formula,
//! square roots by integer square root. Intermediate quantities are kept
//! `>= 1` so the fixed-point error stays relative.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{rational_to_f64, Rational};
use crate::scalar::Scalar;

const GUARD_BITS: u32 = 64;

/// Complex value approximated by two rationals to a stated binary precision.
#[derive(Clone, Debug, PartialEq)]
pub struct HighPrecisionComplex {
    pub re: Rational,
    pub im: Rational,
    pub bits: u32,
}

impl HighPrecisionComplex {
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Decimal digits carried by the requested binary precision.
    pub fn significant_digits(&self) -> usize {
        ((self.bits as f64) * std::f64::consts::LOG10_2).floor() as usize
    }

    pub fn re_decimal(&self) -> String {
        format_decimal(&self.re, self.significant_digits())
    }

    pub fn im_decimal(&self) -> String {
        format_decimal(&self.im, self.significant_digits())
    }
}

/// Evaluates `s` with relative error at most `2^(1 - bits)`.
pub fn scalar_to_float(s: &Scalar, bits: u32) -> Result<HighPrecisionComplex> {
    if bits < 53 {
        return Err(Error::Precision(bits));
    }
    if s.is_zero() {
        return Ok(HighPrecisionComplex { re: Rational::zero(), im: Rational::zero(), bits });
    }
    let f = bits + GUARD_BITS;
    let one = BigInt::one() << f as usize;
    let sqrt_r = fixed_sqrt(&(s.radicand().clone() << f as usize), f);
    let pi_part = if s.pi4() == 0 {
        one.clone()
    } else {
        let quarter = fixed_sqrt(&fixed_sqrt(&fixed_pi(f), f), f);
        let mut acc = one.clone();
        for _ in 0..s.pi4().unsigned_abs() {
            acc = (acc * &quarter) >> f as usize;
        }
        acc
    };
    let magnitude =
        if s.pi4() >= 0 { Rational::new(sqrt_r * pi_part, one.clone() * one) } else { Rational::new(sqrt_r, pi_part) };
    Ok(HighPrecisionComplex { re: s.re() * &magnitude, im: s.im() * &magnitude, bits })
}

/// `floor(sqrt(a / 2^f) * 2^f)` for a fixed-point `a`.
fn fixed_sqrt(a: &BigInt, f: u32) -> BigInt {
    (a << f as usize).sqrt()
}

/// pi in fixed point with `f` fractional bits.
fn fixed_pi(f: u32) -> BigInt {
    let work = f + 16;
    let pi = BigInt::from(16) * atan_inv(5, work) - BigInt::from(4) * atan_inv(239, work);
    pi >> 16usize
}

/// `atan(1/x)` in fixed point.
fn atan_inv(x: u32, f: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << f as usize) / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// Rounds `q` to `digits` places after the decimal point.
pub fn format_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled =
        (q.abs() * Rational::from_integer(scale.clone()) + Rational::new(BigInt::one(), BigInt::from(2))).floor();
    let n = scaled.to_integer();
    let int_part = &n / &scale;
    let frac = (&n % &scale).to_string();
    let sign = if q.is_negative() && !n.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{frac:0>digits$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    // 60-digit references computed independently with mpmath.
    const PI_M_QUARTER: &str = "0.751125544464942482858703004776227693052365066756054295766390";
    const SQRT2: &str = "1.414213562373095048801688724209698078569671875376948073176680";

    fn decimal(s: &str) -> Rational {
        let (int_part, frac) = s.split_once('.').unwrap();
        let den = num_traits::pow(BigInt::from(10), frac.len());
        Rational::new(format!("{int_part}{frac}").parse().unwrap(), den)
    }

    fn close(a: &Rational, reference: &str, bits: usize) -> bool {
        let r = decimal(reference);
        (a - &r).abs() <= r.abs() * Rational::new(BigInt::one(), BigInt::one() << (bits - 1))
    }

    #[test]
    fn pi_minus_quarter() {
        let v = scalar_to_float(&Scalar::pi_pow(-1), 192).unwrap();
        assert!(close(&v.re, PI_M_QUARTER, 192));
        assert_eq!(format_decimal(&v.re, 12), "0.751125544465");
        assert!(v.im.is_zero());
    }

    #[test]
    fn imaginary_sqrt_two() {
        let v = scalar_to_float(&Scalar::sqrt(&int(-2)), 128).unwrap();
        assert!(v.re.is_zero());
        assert!(close(&v.im, SQRT2, 128));
    }

    #[test]
    fn exact_half() {
        let v = scalar_to_float(&Scalar::rational(rat(1, 2)), 53).unwrap();
        assert_eq!(v.to_c64().re, 0.5);
    }

    #[test]
    fn relative_error_bound_holds_for_large_pi_powers() {
        // pi^(-5) pi^(5) = 1 exactly; check each side to the stated precision
        let bits = 80;
        let a = scalar_to_float(&Scalar::pi_pow(-20), bits).unwrap().re;
        let b = scalar_to_float(&Scalar::pi_pow(20), bits).unwrap().re;
        let err = (a * b - Rational::one()).abs();
        let bound = Rational::new(BigInt::one(), BigInt::one() << (bits as usize - 2));
        assert!(err < bound);
    }

    #[test]
    fn rejects_low_precision() {
        assert_eq!(scalar_to_float(&Scalar::one(), 52), Err(Error::Precision(52)));
    }
}
