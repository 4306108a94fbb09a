use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::expr::OpExpr;
use crate::algebra::factor::FunctionFactor;
use crate::num::Rational;
use crate::scalar::Scalar;

/// `g(x) K` where the kernel `K` is annihilated by `p + i c / x`.
///
/// On such states the momentum acts as `D_c(h) = -i (h' + c h / x)`, which is
/// the radial momentum `-i (d/dr + 1/r)` for `c = 1` and
/// `-i (d/drho + 1/(2 rho))` for `c = 1/2`. The kernel's own coordinate
/// representation is `1`, so `parts` is the wavefunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnState {
    parts: OpExpr,
    shift: Rational,
}

impl FnState {
    /// Panics if `parts` carries momentum.
    pub fn new(parts: OpExpr, shift: Rational) -> Self {
        assert!(parts.is_momentum_free(), "state parts must be momentum-free");
        FnState { parts, shift }
    }

    /// The bare kernel.
    pub fn kernel(shift: Rational) -> Self {
        FnState::new(OpExpr::one(), shift)
    }

    pub fn from_factor(coeff: Scalar, f: FunctionFactor, shift: Rational) -> Self {
        FnState::new(OpExpr::term(coeff, f, 0), shift)
    }

    pub fn parts(&self) -> &OpExpr {
        &self.parts
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Scalar, FunctionFactor)> + '_ {
        self.parts.terms().map(|t| (t.coeff, t.factor))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_zero()
    }

    pub fn scale(&self, s: &Scalar) -> FnState {
        FnState::new(self.parts.scale(s), self.shift.clone())
    }

    pub fn sub(&self, o: &FnState) -> FnState {
        assert_eq!(self.shift, o.shift, "states use different kernels");
        FnState::new(&self.parts - &o.parts, self.shift.clone())
    }

    /// One application of the momentum.
    pub fn momentum(&self) -> FnState {
        let mut inner = self.parts.derivative();
        if !self.shift.is_zero() {
            let over_x = FunctionFactor::monomial(-Rational::one());
            inner = &inner + &self.parts.mul_factor_left(&over_x).scale_rational(&self.shift);
        }
        FnState::new(inner.scale(&-Scalar::i()), self.shift.clone())
    }
}

/// Applies a normal-ordered operator to a state: momentum powers act first
/// through `D_c`, then the coordinate function and coefficient multiply.
pub fn apply_to_state(a: &OpExpr, s: &FnState) -> FnState {
    let top = a.max_momentum() as usize;
    let mut powers = Vec::with_capacity(top + 1);
    powers.push(s.clone());
    for j in 0..top {
        let next = powers[j].momentum();
        powers.push(next);
    }
    let mut out = OpExpr::zero();
    for t in a.terms() {
        let piece = powers[t.mom as usize].parts.mul_factor_left(&t.factor).scale(&t.coeff);
        out = &out + &piece;
    }
    FnState::new(out, s.shift.clone())
}

impl fmt::Display for FnState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{half, int, rat};

    #[test]
    fn momentum_on_gaussian() {
        let s = FnState::from_factor(Scalar::one(), FunctionFactor::exponential(rat(-1, 2), int(0)), int(0));
        let out = apply_to_state(&OpExpr::momentum(), &s);
        let expected = OpExpr::term(Scalar::i(), FunctionFactor::new(int(1), rat(-1, 2), int(0)), 0);
        assert_eq!(out.parts(), &expected);
    }

    #[test]
    fn kernel_is_annihilated() {
        let op = &OpExpr::momentum() + &OpExpr::term(Scalar::i(), FunctionFactor::monomial(int(-1)), 0);
        assert!(apply_to_state(&op, &FnState::kernel(int(1))).is_zero());
        let op2 = &OpExpr::momentum() + &OpExpr::term(Scalar::i().scale(&half()), FunctionFactor::monomial(int(-1)), 0);
        assert!(apply_to_state(&op2, &FnState::kernel(half())).is_zero());
    }

    #[test]
    fn raising_twice_gives_second_hermite() {
        // a+ = (x - i p)/sqrt(2)
        let s = Scalar::sqrt(&half());
        let raise = (&OpExpr::coord() - &OpExpr::momentum().scale(&Scalar::i())).scale(&s);
        let ground = FnState::from_factor(Scalar::one(), FunctionFactor::exponential(rat(-1, 2), int(0)), int(0));
        let out = apply_to_state(&raise, &apply_to_state(&raise, &ground));
        // (a+)^2 e^{-x^2/2} = (2x^2 - 1) e^{-x^2/2} = H_2(x) e^{-x^2/2} / 2
        let e2 = FunctionFactor::new(int(2), rat(-1, 2), int(0));
        let e0 = FunctionFactor::exponential(rat(-1, 2), int(0));
        let c2 = out.parts().coefficient(&e2, 0).unwrap();
        let c0 = out.parts().coefficient(&e0, 0).unwrap();
        assert_eq!(out.parts().len(), 2);
        assert_eq!(c2, Scalar::integer(2));
        assert_eq!(c0, Scalar::integer(-1));
    }
}
