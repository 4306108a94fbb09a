//! Normal-ordered operator expressions.
//!
//! Every term is `coeff * f(x) * p^mom` with the momentum to the right.
//! Products are brought back to this form with the closed Leibniz expansion
//! `p^m f = sum_j C(m, j) (-i)^j f^(j) p^(m-j)`, which is the fixpoint of the
//! single rewrite `p f -> f p - i f'`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::factor::FunctionFactor;
use crate::error::{Error, Result};
use crate::num::{binomial, Rational};
use crate::scalar::{Gaussian, Scalar, Stratum};

/// Merge key of a term. Field order gives the canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub mom: u32,
    pub factor: FunctionFactor,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Scalar,
    pub factor: FunctionFactor,
    pub mom: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpExpr {
    terms: BTreeMap<TermKey, Gaussian>,
}

impl OpExpr {
    pub fn zero() -> Self {
        OpExpr::default()
    }

    pub fn one() -> Self {
        OpExpr::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        OpExpr::term(s, FunctionFactor::one(), 0)
    }

    pub fn coord() -> Self {
        OpExpr::factor(FunctionFactor::coord())
    }

    pub fn momentum() -> Self {
        OpExpr::momentum_pow(1)
    }

    pub fn momentum_pow(m: u32) -> Self {
        OpExpr::term(Scalar::one(), FunctionFactor::one(), m)
    }

    pub fn factor(f: FunctionFactor) -> Self {
        OpExpr::term(Scalar::one(), f, 0)
    }

    pub fn term(coeff: Scalar, factor: FunctionFactor, mom: u32) -> Self {
        let mut e = OpExpr::zero();
        e.add_term(&coeff, factor, mom);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        let mut e = OpExpr::zero();
        for t in terms {
            e.add_term(&t.coeff, t.factor, t.mom);
        }
        e
    }

    /// Adds `coeff * factor * p^mom`, merging with an existing term of the
    /// same key and dropping cancellations.
    pub fn add_term(&mut self, coeff: &Scalar, factor: FunctionFactor, mom: u32) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { mom, factor, stratum: coeff.stratum().clone() };
        let merged = match self.terms.get(&key) {
            Some(g) => g + coeff.value(),
            None => coeff.value().clone(),
        };
        if merged.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(k, g)| Term {
            coeff: Scalar::from_parts(g.clone(), k.stratum.clone()),
            factor: k.factor.clone(),
            mom: k.mom,
        })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_momentum_free(&self) -> bool {
        self.terms.keys().all(|k| k.mom == 0)
    }

    pub fn max_momentum(&self) -> u32 {
        self.terms.keys().map(|k| k.mom).max().unwrap_or(0)
    }

    /// The only term, if there is exactly one.
    pub fn single_term(&self) -> Option<Term> {
        if self.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// Coefficient of `factor * p^mom` if all contributions share one stratum.
    pub fn coefficient(&self, factor: &FunctionFactor, mom: u32) -> Option<Scalar> {
        let mut found: Option<Scalar> = None;
        for t in self.terms().filter(|t| t.mom == mom && &t.factor == factor) {
            if found.is_some() {
                return None;
            }
            found = Some(t.coeff);
        }
        Some(found.unwrap_or_else(Scalar::zero))
    }

    pub fn scale(&self, s: &Scalar) -> OpExpr {
        let mut out = OpExpr::zero();
        for t in self.terms() {
            out.add_term(&(&t.coeff * s), t.factor, t.mom);
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> OpExpr {
        self.scale(&Scalar::rational(q.clone()))
    }

    /// Multiplies every term on the left by a coordinate function.
    pub fn mul_factor_left(&self, f: &FunctionFactor) -> OpExpr {
        let mut out = OpExpr::zero();
        for t in self.terms() {
            out.add_term(&t.coeff, f.mul(&t.factor), t.mom);
        }
        out
    }

    pub fn mul(&self, o: &OpExpr) -> OpExpr {
        let max_mom = self.max_momentum() as usize;
        let mut cache: HashMap<&FunctionFactor, Vec<Vec<(Rational, FunctionFactor)>>> = HashMap::new();
        let mut out = OpExpr::zero();
        for (k2, g2) in &o.terms {
            let derivs = cache.entry(&k2.factor).or_insert_with(|| derivative_tower(&k2.factor, max_mom));
            let c2 = Scalar::from_parts(g2.clone(), k2.stratum.clone());
            for (k1, g1) in &self.terms {
                let c12 = &Scalar::from_parts(g1.clone(), k1.stratum.clone()) * &c2;
                let m = k1.mom;
                for j in 0..=m {
                    let weight = Scalar::neg_i_pow(j).scale(&Rational::from_integer(binomial(m as u64, j as u64)));
                    let base = &c12 * &weight;
                    for (r, f) in &derivs[j as usize] {
                        out.add_term(&base.scale(r), k1.factor.mul(f), m - j + k2.mom);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> OpExpr {
        let mut acc = OpExpr::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[self, o] = self o - o self`
    pub fn commutator(&self, o: &OpExpr) -> OpExpr {
        &self.mul(o) - &o.mul(self)
    }

    /// Hermitian adjoint: reverse factor order and conjugate coefficients.
    /// Coordinate functions are real, so `(c f p^m)^+ = conj(c) p^m f`.
    pub fn adjoint(&self) -> OpExpr {
        let mut out = OpExpr::zero();
        for t in self.terms() {
            let piece = OpExpr::momentum_pow(t.mom).mul(&OpExpr::factor(t.factor));
            out = &out + &piece.scale(&t.coeff.conj());
        }
        out
    }

    /// Coordinate derivative of a momentum-free expression.
    pub fn derivative(&self) -> OpExpr {
        debug_assert!(self.is_momentum_free());
        let mut out = OpExpr::zero();
        for t in self.terms() {
            for (r, f) in t.factor.derivative() {
                out.add_term(&t.coeff.scale(&r), f, t.mom);
            }
        }
        out
    }

    /// Inverse of a single momentum-free term.
    pub fn monomial_inverse(&self) -> Option<OpExpr> {
        let t = self.single_term()?;
        if t.mom != 0 {
            return None;
        }
        Some(OpExpr::term(t.coeff.inv()?, t.factor.inv(), 0))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|t| json!({"coeff": t.coeff.to_json(), "factor": t.factor.to_json(), "mom": t.mom}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<OpExpr> {
        let arr = v.as_array().ok_or_else(|| Error::Json("expected a term array".into()))?;
        let mut out = OpExpr::zero();
        for t in arr {
            let mom = t["mom"]
                .as_u64()
                .and_then(|m| u32::try_from(m).ok())
                .ok_or_else(|| Error::Json("mom must be a non-negative integer".into()))?;
            out.add_term(&Scalar::from_json(&t["coeff"])?, FunctionFactor::from_json(&t["factor"])?, mom);
        }
        Ok(out)
    }
}

/// `f, f', f'', ...` up to order `m`, each as a rational combination of factors.
fn derivative_tower(f: &FunctionFactor, m: usize) -> Vec<Vec<(Rational, FunctionFactor)>> {
    let mut tower = vec![vec![(Rational::one(), f.clone())]];
    for _ in 0..m {
        let mut next: BTreeMap<FunctionFactor, Rational> = BTreeMap::new();
        for (r, g) in tower.last().unwrap() {
            for (s, h) in g.derivative() {
                *next.entry(h).or_insert_with(Rational::zero) += r * s;
            }
        }
        tower.push(next.into_iter().filter(|(_, r)| !r.is_zero()).map(|(h, r)| (r, h)).collect());
    }
    tower
}

/// Derivative of a single coordinate function as an expression.
pub fn fn_derivative(f: &FunctionFactor) -> OpExpr {
    OpExpr::factor(f.clone()).derivative()
}

/// `x^n` with an integer exponent.
pub fn coord_pow(n: i64) -> OpExpr {
    OpExpr::factor(FunctionFactor::monomial(Rational::from_integer(BigInt::from(n))))
}

impl Add for &OpExpr {
    type Output = OpExpr;
    fn add(self, o: &OpExpr) -> OpExpr {
        let mut out = self.clone();
        for t in o.terms() {
            out.add_term(&t.coeff, t.factor, t.mom);
        }
        out
    }
}

impl Sub for &OpExpr {
    type Output = OpExpr;
    fn sub(self, o: &OpExpr) -> OpExpr {
        let mut out = self.clone();
        for t in o.terms() {
            out.add_term(&-t.coeff, t.factor, t.mom);
        }
        out
    }
}

impl Neg for &OpExpr {
    type Output = OpExpr;
    fn neg(self) -> OpExpr {
        OpExpr { terms: self.terms.iter().map(|(k, g)| (k.clone(), -g.clone())).collect() }
    }
}

impl Mul for &OpExpr {
    type Output = OpExpr;
    fn mul(self, o: &OpExpr) -> OpExpr {
        OpExpr::mul(self, o)
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::algebra::render::text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn gauss(g: i64) -> OpExpr {
        OpExpr::factor(FunctionFactor::exponential(int(g), int(0)))
    }

    #[test]
    fn canonical_commutator_x_p() {
        let c = OpExpr::coord().commutator(&OpExpr::momentum());
        assert_eq!(c, OpExpr::scalar(Scalar::i()));
    }

    #[test]
    fn p_commutator_with_gaussian() {
        let c = OpExpr::momentum().commutator(&gauss(-1));
        let expected = OpExpr::term(Scalar::i().scale(&int(2)), FunctionFactor::new(int(1), int(-1), int(0)), 0);
        assert_eq!(c, expected);
    }

    #[test]
    fn p_squared_times_x() {
        let e = OpExpr::momentum_pow(2).mul(&OpExpr::coord());
        let expected = &OpExpr::term(Scalar::one(), FunctionFactor::coord(), 2)
            + &OpExpr::term(Scalar::i().scale(&int(-2)), FunctionFactor::one(), 1);
        assert_eq!(e, expected);
    }

    #[test]
    fn p_with_constant_and_square() {
        assert!(OpExpr::momentum().commutator(&OpExpr::one()).is_zero());
        let c = OpExpr::momentum().commutator(&coord_pow(2));
        assert_eq!(c, OpExpr::term(Scalar::i().scale(&int(-2)), FunctionFactor::coord(), 0));
    }

    #[test]
    fn inverse_power_commutator_three_terms() {
        // [(1/x) p, x^5 e^{-x^2}] at l = k = 1
        let b = coord_pow(-1).mul(&OpExpr::momentum());
        let f = OpExpr::factor(FunctionFactor::new(int(5), int(-1), int(0)));
        let c = b.commutator(&f);
        // (1/x)(-i)(5 x^4 - 2 x^6) e^{-x^2}
        let expected = &OpExpr::term(Scalar::i().scale(&int(-5)), FunctionFactor::new(int(3), int(-1), int(0)), 0)
            + &OpExpr::term(Scalar::i().scale(&int(2)), FunctionFactor::new(int(5), int(-1), int(0)), 0);
        assert_eq!(c, expected);
        assert_eq!(c.len(), 2);
        // with a linear exponent the class gains the third piece
        let g = OpExpr::factor(FunctionFactor::new(int(5), int(-1), rat(1, 2)));
        assert_eq!(b.commutator(&g).len(), 3);
    }

    #[test]
    fn adjoint_of_lowering() {
        let s = Scalar::sqrt(&rat(1, 2));
        let a = &OpExpr::momentum().scale(&s) - &OpExpr::coord().scale(&(&Scalar::i() * &s));
        let ad = a.adjoint();
        let expected = &OpExpr::momentum().scale(&s) + &OpExpr::coord().scale(&(&Scalar::i() * &s));
        assert_eq!(ad, expected);
        assert_eq!(ad.adjoint(), a);
    }

    #[test]
    fn mixed_strata_stay_separate() {
        let e = &OpExpr::one() + &OpExpr::scalar(Scalar::sqrt(&int(2)));
        assert_eq!(e.len(), 2);
        assert!((&e - &e).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let e = &OpExpr::momentum_pow(2).mul(&gauss(-1)) + &OpExpr::scalar(Scalar::pi_pow(-1));
        assert_eq!(OpExpr::from_json(&e.to_json()).unwrap(), e);
    }
}
