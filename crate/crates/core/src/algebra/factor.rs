use num_traits::{Float, One, Zero};
use serde_json::{json, Value};

use crate::error::Result;
use crate::num::{rational_to_f64, Rational};
use crate::scalar::{rational_from_json, rational_json};

/// Coordinate function `x^power * exp(gauss x^2 + linear x)`.
///
/// Field order matters: the derived `Ord` is the canonical term order
/// (power, then gauss, then linear).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionFactor {
    pub power: Rational,
    pub gauss: Rational,
    pub linear: Rational,
}

impl FunctionFactor {
    pub fn new(power: Rational, gauss: Rational, linear: Rational) -> Self {
        FunctionFactor { power, gauss, linear }
    }

    pub fn one() -> Self {
        FunctionFactor::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `x^power`
    pub fn monomial(power: Rational) -> Self {
        FunctionFactor::new(power, Rational::zero(), Rational::zero())
    }

    pub fn coord() -> Self {
        FunctionFactor::monomial(Rational::one())
    }

    /// `exp(gauss x^2 + linear x)`
    pub fn exponential(gauss: Rational, linear: Rational) -> Self {
        FunctionFactor::new(Rational::zero(), gauss, linear)
    }

    pub fn is_one(&self) -> bool {
        self.power.is_zero() && self.gauss.is_zero() && self.linear.is_zero()
    }

    pub fn has_exponential(&self) -> bool {
        !(self.gauss.is_zero() && self.linear.is_zero())
    }

    pub fn mul(&self, o: &FunctionFactor) -> FunctionFactor {
        FunctionFactor::new(&self.power + &o.power, &self.gauss + &o.gauss, &self.linear + &o.linear)
    }

    pub fn inv(&self) -> FunctionFactor {
        FunctionFactor::new(-self.power.clone(), -self.gauss.clone(), -self.linear.clone())
    }

    /// `self^e` for a rational exponent.
    pub fn pow(&self, e: &Rational) -> FunctionFactor {
        FunctionFactor::new(&self.power * e, &self.gauss * e, &self.linear * e)
    }

    /// Multiplies by `x^shift`.
    pub fn shifted(&self, shift: &Rational) -> FunctionFactor {
        FunctionFactor::new(&self.power + shift, self.gauss.clone(), self.linear.clone())
    }

    /// Derivative as at most three rational multiples of factors of the same
    /// exponential class.
    pub fn derivative(&self) -> Vec<(Rational, FunctionFactor)> {
        let mut out = Vec::with_capacity(3);
        let one = Rational::one();
        if !self.power.is_zero() {
            out.push((self.power.clone(), self.shifted(&-one.clone())));
        }
        if !self.linear.is_zero() {
            out.push((self.linear.clone(), self.clone()));
        }
        if !self.gauss.is_zero() {
            out.push((&self.gauss * Rational::from_integer(2.into()), self.shifted(&one)));
        }
        out
    }

    /// Pointwise value; the caller keeps `t` inside the domain of the power.
    pub fn eval<T: Float>(&self, t: T) -> T {
        let c = |q: &Rational| T::from(rational_to_f64(q)).unwrap_or_else(T::nan);
        let base = if self.power.is_zero() { T::one() } else { t.powf(c(&self.power)) };
        if self.has_exponential() {
            base * (c(&self.gauss) * t * t + c(&self.linear) * t).exp()
        } else {
            base
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "power": rational_json(&self.power),
            "gauss": rational_json(&self.gauss),
            "linear": rational_json(&self.linear),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(FunctionFactor::new(
            rational_from_json(&v["power"])?,
            rational_from_json(&v["gauss"])?,
            rational_from_json(&v["linear"])?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    #[test]
    fn derivative_of_sqrt_times_exp() {
        let f = FunctionFactor::new(rat(1, 2), int(0), int(-1));
        let d = f.derivative();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], (rat(1, 2), FunctionFactor::new(rat(-1, 2), int(0), int(-1))));
        assert_eq!(d[1], (int(-1), f.clone()));
    }

    #[test]
    fn derivative_of_constant_is_empty() {
        assert!(FunctionFactor::one().derivative().is_empty());
    }

    #[test]
    fn eval_matches_closed_form() {
        let f = FunctionFactor::new(int(2), int(-1), int(1));
        let t = 0.7f64;
        assert!((f.eval(t) - t * t * (-t * t + t).exp()).abs() < 1e-15);
        assert!((f.eval(0.7f32) - 0.7f32 * 0.7 * (-0.49f32 + 0.7).exp()).abs() < 1e-6);
    }
}
