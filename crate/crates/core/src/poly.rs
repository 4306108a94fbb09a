//! Dense univariate polynomials over any [`Coefficient`] type, plus the
//! tagged exact polynomial used for wavefunctions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::{int, rational_pow, rational_to_f64, Coefficient, Rational};
use crate::scalar::Scalar;

/// Coefficients in ascending degree; never has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c u^deg`
    pub fn monomial(c: T, deg: usize) -> Self {
        let mut v = vec![T::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, u: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * u.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul_var(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(T::zero());
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) + o.coeff(j)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) - o.coeff(j)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.clone() * T::from_int(j as i64)).collect())
    }

    /// Polynomial long division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().unwrap().clone() / lead.clone();
            for (j, b) in d.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].clone() - c.clone() * b.clone();
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn convert<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Rational> {
    pub fn to_float<T: Float + Coefficient>(&self) -> Poly<T> {
        self.convert(|q| T::from_rational(q))
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Poly<Rational>> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.scale(&int(-1)));
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in `(lo, hi]`; `None` means infinite.
    pub fn count_real_roots(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        let changes = |at: Option<&Rational>, sign_at_inf: i32| -> usize {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| match at {
                    Some(x) => sign(&p.eval(x)),
                    None => {
                        let d = p.degree().unwrap_or(0) as i32;
                        let s = sign(p.leading().unwrap());
                        if sign_at_inf < 0 && d % 2 == 1 {
                            -s
                        } else {
                            s
                        }
                    }
                })
                .filter(|s| *s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(lo, -1) - changes(hi, 1)
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// The variable a wavefunction polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Argument {
    /// `u = x`
    X,
    /// `u = x^2`
    XSquared,
    /// `u = 2x/n`
    Coulomb3d { n: u32 },
    /// `u = 2x/(n - 1/2)`
    Coulomb2d { n: u32 },
}

impl Argument {
    pub fn tag(self) -> &'static str {
        match self {
            Argument::X => "x",
            Argument::XSquared => "x2",
            Argument::Coulomb3d { .. } => "2x/n",
            Argument::Coulomb2d { .. } => "2x/(n-1/2)",
        }
    }

    /// `u = scale * x^degree`
    pub fn scale(self) -> Rational {
        match self {
            Argument::X | Argument::XSquared => Rational::one(),
            Argument::Coulomb3d { n } => Rational::new(BigInt::from(2), BigInt::from(n)),
            Argument::Coulomb2d { n } => int(2) / (int(n as i64) - Rational::new(1.into(), 2.into())),
        }
    }

    pub fn degree(self) -> u32 {
        if self == Argument::XSquared {
            2
        } else {
            1
        }
    }

    pub fn principal(self) -> Option<u32> {
        match self {
            Argument::Coulomb3d { n } | Argument::Coulomb2d { n } => Some(n),
            _ => None,
        }
    }

    pub fn eval<T: Float>(self, t: T) -> T {
        let s = T::from(rational_to_f64(&self.scale())).unwrap_or_else(T::nan);
        if self.degree() == 2 {
            s * t * t
        } else {
            s * t
        }
    }

    /// Text for `u` in coordinate terms.
    pub fn describe(self) -> String {
        match self {
            Argument::X => "x".into(),
            Argument::XSquared => "x^2".into(),
            arg => {
                let s = arg.scale();
                let num = if s.numer().is_one() { String::new() } else { s.numer().to_string() };
                if s.denom().is_one() {
                    format!("{num}x")
                } else {
                    format!("{num}x/{}", s.denom())
                }
            }
        }
    }
}

/// Exact polynomial in a tagged argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub arg: Argument,
    pub poly: Poly<Rational>,
}

impl Polynomial {
    pub fn new(arg: Argument, poly: Poly<Rational>) -> Self {
        Polynomial { arg, poly }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    /// Value at coordinate `t`.
    pub fn eval_at<T: Float + Coefficient>(&self, t: T) -> T {
        self.poly.to_float::<T>().eval(&self.arg.eval(t))
    }

    /// Upper bound for `|p(u(t))|` at `t >= 0`, increasing in `t`.
    pub fn abs_bound(&self, t: f64) -> f64 {
        let u = self.arg.eval(t.abs());
        self.poly.coeffs().iter().rev().fold(0.0, |acc, c| acc * u + rational_to_f64(c).abs())
    }

    /// Coordinate expansion: `(coefficient, power of x)` pairs.
    pub fn in_coordinate(&self) -> Vec<(Rational, i64)> {
        let s = self.arg.scale();
        let d = self.arg.degree() as i64;
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (c * rational_pow(&s, j as i64), d * j as i64))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.poly.coeffs().iter().map(|c| Scalar::rational(c.clone()).to_json()).collect();
        match self.arg.principal() {
            Some(n) => json!({"arg": self.arg.tag(), "n": n, "coeffs": coeffs}),
            None => json!({"arg": self.arg.tag(), "coeffs": coeffs}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = || {
            v["n"]
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Json("Coulomb arguments need an integer n".into()))
        };
        let arg = match v["arg"].as_str() {
            Some("x") => Argument::X,
            Some("x2") => Argument::XSquared,
            Some("2x/n") => Argument::Coulomb3d { n: n()? },
            Some("2x/(n-1/2)") => Argument::Coulomb2d { n: n()? },
            _ => return Err(Error::Json(format!("unknown argument tag {}", v["arg"]))),
        };
        let arr = v["coeffs"].as_array().ok_or_else(|| Error::Json("coeffs must be an array".into()))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for c in arr {
            let s = Scalar::from_json(c)?;
            let q = s.as_rational().ok_or_else(|| Error::Json("polynomial coefficients are rational".into()))?;
            coeffs.push(q.clone());
        }
        Ok(Polynomial::new(arg, Poly::new(coeffs)))
    }
}

impl Polynomial {
    /// LaTeX in the variable `u`, highest power first.
    pub fn latex(&self) -> String {
        if self.poly.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (j, c) in self.poly.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            out.push_str(match (out.is_empty(), c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            let coef = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
            };
            let var = match j {
                0 => String::new(),
                1 => "u".into(),
                _ => format!("u^{{{j}}}"),
            };
            if j == 0 {
                out.push_str(&coef);
            } else if mag.is_one() {
                out.push_str(&var);
            } else {
                out.push_str(&format!("{coef} {var}"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.poly.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            let coef =
                if mag.is_integer() { mag.numer().to_string() } else { format!("({}/{})", mag.numer(), mag.denom()) };
            let body = match (j, mag.is_one()) {
                (0, _) => coef,
                (1, true) => "u".into(),
                (1, false) => format!("{coef}*u"),
                (_, true) => format!("u^{j}"),
                (_, false) => format!("{coef}*u^{j}"),
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn p(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn arithmetic_and_trim() {
        let a = p(&[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(a.mul(&a), p(&[1, 4, 4]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(p(&[1, 1, 1]).derivative(), p(&[1, 2]));
    }

    #[test]
    fn division() {
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[1, 0, 1]).div_rem(&p(&[0, 2]));
        assert_eq!(q, Poly::new(vec![int(0), rat(1, 2)]));
        assert_eq!(r, p(&[1]));
    }

    #[test]
    fn sturm_counts() {
        // (u - 1)(u - 2)(u + 3)
        let q = p(&[1, -1]).scale(&int(-1)).mul(&p(&[-2, 1])).mul(&p(&[3, 1]));
        assert_eq!(q.count_real_roots(None, None), 3);
        assert_eq!(q.count_real_roots(Some(&int(0)), None), 2);
        assert_eq!(p(&[1, 0, 1]).count_real_roots(None, None), 0);
    }

    #[test]
    fn generic_over_float() {
        let q = Poly::<f64>::new(vec![1.0, -3.0, 2.0]);
        assert_eq!(q.eval(&2.0), 3.0);
        let f = Poly::<f32>::new(vec![0.5, 1.0]);
        assert_eq!(f.eval(&1.5), 2.0);
    }

    #[test]
    fn coordinate_expansion() {
        let l = Polynomial::new(Argument::Coulomb3d { n: 2 }, p(&[2, -1]));
        assert_eq!(l.in_coordinate(), vec![(int(2), 0), (int(-1), 1)]);
        let o = Polynomial::new(Argument::XSquared, p(&[3, 0, 1]));
        assert_eq!(o.in_coordinate(), vec![(int(3), 0), (int(1), 4)]);
        let c = Polynomial::new(Argument::Coulomb2d { n: 2 }, p(&[1, -1]));
        assert_eq!(c.in_coordinate()[1], (rat(-4, 3), 1));
        assert_eq!(c.to_string(), "-u + 1");
    }

    #[test]
    fn json_round_trip() {
        let l = Polynomial::new(Argument::Coulomb2d { n: 3 }, Poly::new(vec![rat(5, 2), int(-1)]));
        let v = l.to_json();
        assert_eq!(v["arg"], "2x/(n-1/2)");
        assert_eq!(Polynomial::from_json(&v).unwrap(), l);
    }
}
