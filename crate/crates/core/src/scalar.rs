//! Exact coefficients of the form `(re + i im) * sqrt(r) * pi^(q/4)`.
//!
//! `r` is kept as a square-free positive integer, so two scalars with equal
//! value have identical fields. Products stay inside the type; sums are only
//! defined when both operands live in the same `(r, q)` stratum.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::{int, rational_to_f64, Rational};

/// Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Gaussian { re: Rational::zero(), im: Rational::one() }
    }

    /// `(-i)^k`
    pub fn neg_i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Gaussian::one(),
            1 => -Gaussian::i(),
            2 => -Gaussian::one(),
            _ => Gaussian::i(),
        }
    }

    pub fn one() -> Self {
        Gaussian::real(Rational::one())
    }

    pub fn zero() -> Self {
        Gaussian::real(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Gaussian { re: &self.re * q, im: &self.im * q }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(self.conj().scale(&n.recip()))
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Gaussian {
    type Output = Gaussian;
    fn sub(self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -self.re, im: -self.im }
    }
}

/// The one-dimensional stratum `sqrt(radicand) * pi^(pi4/4)` a scalar lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum {
    pub radicand: BigInt,
    pub pi4: i32,
}

impl Stratum {
    pub fn unit() -> Self {
        Stratum { radicand: BigInt::one(), pi4: 0 }
    }

    pub fn is_unit(&self) -> bool {
        self.radicand.is_one() && self.pi4 == 0
    }

    /// Product of two strata: returns the rational factor that migrates out
    /// of the radical together with the resulting stratum.
    pub fn mul(&self, other: &Stratum) -> (BigInt, Stratum) {
        let (g, r) = merge_square_free(&self.radicand, &other.radicand);
        (g, Stratum { radicand: r, pi4: self.pi4 + other.pi4 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: Gaussian,
    stratum: Stratum,
}

/// Returned by [`Scalar::try_add`] when the operands live in different strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incompatible;

impl fmt::Display for Incompatible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("scalars live in different sqrt/pi strata")
    }
}

impl std::error::Error for Incompatible {}

impl Scalar {
    /// Builds a scalar and brings it to canonical form. `radicand` may be any
    /// positive rational.
    pub fn new(value: Gaussian, radicand: &Rational, pi4: i32) -> Self {
        assert!(radicand.is_positive(), "radicand must be positive");
        let (outside, r) = sqrt_rational_parts(radicand);
        Scalar::from_parts(value.scale(&outside), Stratum { radicand: r, pi4 })
    }

    pub(crate) fn from_parts(value: Gaussian, stratum: Stratum) -> Self {
        if value.is_zero() {
            Scalar::zero()
        } else {
            Scalar { value, stratum }
        }
    }

    pub fn zero() -> Self {
        Scalar { value: Gaussian::zero(), stratum: Stratum::unit() }
    }

    pub fn one() -> Self {
        Scalar::rational(Rational::one())
    }

    pub fn i() -> Self {
        Scalar::gaussian(Gaussian::i())
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::gaussian(Gaussian::real(q))
    }

    pub fn integer(n: i64) -> Self {
        Scalar::rational(int(n))
    }

    pub fn gaussian(g: Gaussian) -> Self {
        Scalar::from_parts(g, Stratum::unit())
    }

    /// `sqrt(q)`; negative arguments give `i sqrt(|q|)`.
    pub fn sqrt(q: &Rational) -> Self {
        if q.is_zero() {
            return Scalar::zero();
        }
        if q.is_negative() {
            return Scalar::new(Gaussian::i(), &-q.clone(), 0);
        }
        Scalar::new(Gaussian::one(), q, 0)
    }

    /// `pi^(pi4/4)`
    pub fn pi_pow(pi4: i32) -> Self {
        Scalar { value: Gaussian::one(), stratum: Stratum { radicand: BigInt::one(), pi4 } }
    }

    /// `(-i)^k`
    pub fn neg_i_pow(k: u32) -> Self {
        Scalar::gaussian(Gaussian::neg_i_pow(k))
    }

    pub fn value(&self) -> &Gaussian {
        &self.value
    }

    pub fn re(&self) -> &Rational {
        &self.value.re
    }

    pub fn im(&self) -> &Rational {
        &self.value.im
    }

    pub fn radicand(&self) -> &BigInt {
        &self.stratum.radicand
    }

    pub fn pi4(&self) -> i32 {
        self.stratum.pi4
    }

    pub fn stratum(&self) -> &Stratum {
        &self.stratum
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.stratum.is_unit() && self.value == Gaussian::one()
    }

    /// Pure Gaussian rational (no radical, no pi).
    pub fn is_gaussian(&self) -> bool {
        self.stratum.is_unit()
    }

    /// Rational value if the scalar is a plain real rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.stratum.is_unit() && self.value.im.is_zero() {
            Some(&self.value.re)
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.value.im.is_zero()
    }

    pub fn is_positive_real(&self) -> bool {
        self.value.im.is_zero() && self.value.re.is_positive()
    }

    pub fn conj(&self) -> Self {
        Scalar { value: self.value.conj(), stratum: self.stratum.clone() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Scalar::from_parts(self.value.scale(q), self.stratum.clone())
    }

    pub fn mul_gaussian(&self, g: &Gaussian) -> Self {
        Scalar::from_parts(&self.value * g, self.stratum.clone())
    }

    /// Exact sum; fails with [`Incompatible`] when the strata differ.
    pub fn try_add(&self, other: &Scalar) -> std::result::Result<Scalar, Incompatible> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.stratum != other.stratum {
            return Err(Incompatible);
        }
        Ok(Scalar::from_parts(&self.value + &other.value, self.stratum.clone()))
    }

    pub fn inv(&self) -> Option<Scalar> {
        let g = self.value.inv()?;
        // 1/sqrt(r) = sqrt(r)/r
        let r = Rational::from_integer(self.stratum.radicand.clone());
        Some(Scalar::from_parts(
            g.scale(&r.recip()),
            Stratum { radicand: self.stratum.radicand.clone(), pi4: -self.stratum.pi4 },
        ))
    }

    pub fn pow(&self, e: i32) -> Option<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    /// Square root of a positive real scalar without radical and with an
    /// even pi exponent, i.e. `sqrt(q pi^(2j/4)) = sqrt(q) pi^(j/4)`.
    pub fn sqrt_positive(&self) -> Option<Scalar> {
        if !self.is_positive_real() || !self.stratum.radicand.is_one() || self.stratum.pi4 % 2 != 0 {
            return None;
        }
        Some(&Scalar::sqrt(&self.value.re) * &Scalar::pi_pow(self.stratum.pi4 / 2))
    }

    /// Complex value in any floating-point type.
    pub fn to_complex<T: Float>(&self) -> Complex<T> {
        let cast = |x: f64| T::from(x).unwrap_or_else(T::nan);
        let r = rational_to_f64(&Rational::from_integer(self.stratum.radicand.clone()));
        let mag = r.sqrt() * std::f64::consts::PI.powf(self.stratum.pi4 as f64 / 4.0);
        Complex::new(cast(rational_to_f64(&self.value.re) * mag), cast(rational_to_f64(&self.value.im) * mag))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "re": rational_json(&self.value.re),
            "im": rational_json(&self.value.im),
            "sqrt": [bigint_json(&self.stratum.radicand), 1],
            "pi4": self.stratum.pi4,
        })
    }

    pub fn from_json(v: &Value) -> Result<Scalar> {
        let re = rational_from_json(&v["re"])?;
        let im = rational_from_json(&v["im"])?;
        let r = rational_from_json(&v["sqrt"])?;
        let pi4 = v["pi4"].as_i64().ok_or_else(|| Error::Json("pi4 must be an integer".into()))?;
        if !r.is_positive() {
            return Err(Error::Json("sqrt must be positive".into()));
        }
        Ok(Scalar::new(Gaussian::new(re, im), &r, pi4 as i32))
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let (g, stratum) = self.stratum.mul(&o.stratum);
        let v = (&self.value * &o.value).scale(&Rational::from_integer(g));
        Scalar::from_parts(v, stratum)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { value: -self.value, stratum: self.stratum }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::algebra::render::scalar_text(self))
    }
}

pub(crate) fn rational_json(q: &Rational) -> Value {
    json!([bigint_json(q.numer()), bigint_json(q.denom())])
}

pub(crate) fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => serde_json::from_str(&n.to_string()).unwrap_or(Value::Null),
    }
}

pub(crate) fn rational_from_json(v: &Value) -> Result<Rational> {
    let arr =
        v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Json(format!("expected [num, den], got {v}")))?;
    let parse = |x: &Value| -> Result<BigInt> {
        let s = match x {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            _ => return Err(Error::Json(format!("not an integer: {x}"))),
        };
        s.parse::<BigInt>().map_err(|_| Error::Json(format!("not an integer: {s}")))
    };
    let den = parse(&arr[1])?;
    if den.is_zero() {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(Rational::new(parse(&arr[0])?, den))
}

/// Splits a positive integer as `n = s^2 t` with `t` square-free.
///
/// Trial division runs up to 2^16; a leftover cofactor is tested for being a
/// perfect square. Cofactors of the form `p^2 q` with both primes above the
/// trial bound are not detected; the radicands arising here are products of
/// small factorials and never reach that range.
pub fn square_free_parts(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive());
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(1u32 << 16);
    while &d * &d <= rest && d <= limit {
        let mut count = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            count += 1;
        }
        for _ in 0..count / 2 {
            outside *= &d;
        }
        if count % 2 == 1 {
            inside *= &d;
        }
        d += if d == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        let root = rest.sqrt();
        if &root * &root == rest {
            outside *= root;
        } else {
            inside *= rest;
        }
    }
    (outside, inside)
}

/// Product of two square-free integers: `a b = g^2 (a/g)(b/g)`.
fn merge_square_free(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let g = a.gcd(b);
    let r = (a / &g) * (b / &g);
    (g, r)
}

/// `sqrt(q) = outside * sqrt(r)` with `r` a square-free integer.
fn sqrt_rational_parts(q: &Rational) -> (Rational, BigInt) {
    let (sn, tn) = square_free_parts(q.numer());
    let (sd, td) = square_free_parts(q.denom());
    // sqrt(n/d) = sqrt(n d)/d
    let (g, r) = merge_square_free(&tn, &td);
    let outside = Rational::new(sn * sd * g, q.denom().clone());
    (outside, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn sqrt_products_collapse() {
        let a = Scalar::sqrt(&int(2));
        let b = Scalar::sqrt(&int(8));
        assert_eq!(&a * &b, Scalar::integer(4));
        let h = Scalar::sqrt(&rat(1, 2));
        assert_eq!(&h * &h, Scalar::rational(rat(1, 2)));
    }

    #[test]
    fn pi_exponents_add() {
        let a = Scalar::pi_pow(-1);
        assert_eq!(&a * &a, Scalar::pi_pow(-2));
    }

    #[test]
    fn addition_within_stratum() {
        let s2 = Scalar::sqrt(&int(2));
        let a = s2.mul_gaussian(&Gaussian::new(int(1), int(1)));
        let b = s2.mul_gaussian(&Gaussian::new(int(2), int(-1)));
        assert_eq!(a.try_add(&b).unwrap(), s2.scale(&int(3)));
        assert_eq!(Scalar::one().try_add(&s2), Err(Incompatible));
        assert_eq!(s2.try_add(&Scalar::zero()).unwrap(), s2);
    }

    #[test]
    fn canonical_zero() {
        let z = Scalar::sqrt(&int(3)).scale(&int(0));
        assert_eq!(z, Scalar::zero());
        assert!(z.radicand().is_one());
        assert_eq!(z.pi4(), 0);
    }

    #[test]
    fn radicand_is_square_free() {
        let s = Scalar::sqrt(&rat(72, 50));
        // sqrt(36/25) = 6/5
        assert_eq!(s, Scalar::rational(rat(6, 5)));
        let t = Scalar::sqrt(&rat(12, 7));
        assert_eq!(t.radicand(), &BigInt::from(21));
        assert_eq!(t.re(), &rat(2, 7));
    }

    #[test]
    fn inverse_and_sqrt_positive() {
        let s = Scalar::sqrt(&int(6)).mul_gaussian(&Gaussian::new(int(1), int(2)));
        assert!((&s * &s.inv().unwrap()).is_one());
        let q = &Scalar::rational(rat(9, 4)) * &Scalar::pi_pow(2);
        assert_eq!(q.sqrt_positive().unwrap(), &Scalar::rational(rat(3, 2)) * &Scalar::pi_pow(1));
    }

    #[test]
    fn negative_sqrt_is_imaginary() {
        let s = Scalar::sqrt(&int(-2));
        assert_eq!(s.im(), &int(1));
        assert_eq!(s.radicand(), &BigInt::from(2));
        let c = s.to_complex::<f64>();
        assert!((c.im - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let s = &Scalar::sqrt(&int(2)) * &Scalar::pi_pow(-1);
        let v = s.to_json();
        assert_eq!(v.to_string(), r#"{"re":[1,1],"im":[0,1],"sqrt":[2,1],"pi4":-1}"#);
        assert_eq!(Scalar::from_json(&v).unwrap(), s);
    }
}
