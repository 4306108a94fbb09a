use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::parser::{MacroKind, SourceAst};
use super::DslError;
use crate::algebra::{normal_order_bounded, Budget, FunctionFactor, OpAst, OpExpr};
use crate::num::{int, Rational};
use crate::scalar::Scalar;
use crate::systems::{hamiltonian, lowering_op, raising_op, SystemKind, DEFAULT_MAX_LEVEL};

/// Natural powers of multi-term operands are capped here.
const MAX_SUM_POWER: u32 = 64;
/// Natural powers of single terms (coefficient growth is the limit).
const MAX_TERM_POWER: u64 = 1024;

#[derive(Clone, Copy, Debug)]
pub struct LowerOptions {
    pub max_level: u32,
    pub budget: Budget,
}

impl Default for LowerOptions {
    fn default() -> Self {
        LowerOptions { max_level: DEFAULT_MAX_LEVEL, budget: Budget::default() }
    }
}

struct Lowerer {
    opts: LowerOptions,
}

impl Lowerer {
    fn eval(&self, ast: &SourceAst) -> Result<OpExpr, DslError> {
        let op = self.lower(ast)?;
        normal_order_bounded(&op, self.opts.budget).map_err(|_| DslError::TooLarge)
    }

    fn lower(&self, ast: &SourceAst) -> Result<OpAst, DslError> {
        Ok(match ast {
            SourceAst::Integer(n) => OpAst::Scalar(Scalar::rational(Rational::from_integer(n.clone()))),
            SourceAst::Coord => OpAst::Coord,
            SourceAst::Momentum => OpAst::Momentum,
            SourceAst::Imag => OpAst::Scalar(Scalar::i()),
            SourceAst::Pi => OpAst::Scalar(Scalar::pi_pow(4)),
            SourceAst::Sqrt(q) => OpAst::Scalar(Scalar::sqrt(q)),
            SourceAst::Exp(arg) => OpAst::Factor(self.exponential(arg)?),
            SourceAst::Macro { kind, system, level } => OpAst::Expr(self.system_macro(*kind, system, level)?),
            SourceAst::Sum(items) => OpAst::Sum(items.iter().map(|a| self.lower(a)).collect::<Result<_, _>>()?),
            SourceAst::Product(items) => OpAst::Product(items.iter().map(|a| self.lower(a)).collect::<Result<_, _>>()?),
            SourceAst::Neg(a) => OpAst::neg(self.lower(a)?),
            SourceAst::Div(a, b) => {
                let den = self.eval(b)?;
                let inv = den.monomial_inverse().ok_or_else(|| DslError::NonMonomialDivisor(den.to_string()))?;
                OpAst::Product(vec![self.lower(a)?, OpAst::Expr(inv)])
            }
            SourceAst::Power(base, e) => self.power(base, e)?,
            SourceAst::Commutator(a, b) => OpAst::commutator(self.lower(a)?, self.lower(b)?),
        })
    }

    /// `g x^2 + l x` with rational `g`, `l`; constants have no exact value.
    fn exponential(&self, arg: &SourceAst) -> Result<FunctionFactor, DslError> {
        let e = self.eval(arg)?;
        let bad = |why: &str| DslError::ExpArgument(format!("{why} in `{e}`"));
        let (mut g, mut l) = (Rational::zero(), Rational::zero());
        for t in e.terms() {
            if t.mom != 0 {
                return Err(bad("momentum"));
            }
            let c = t.coeff.as_rational().ok_or_else(|| bad("non-rational coefficient"))?.clone();
            if t.factor.has_exponential() {
                return Err(bad("nested exponential"));
            }
            let pw = &t.factor.power;
            if *pw == int(2) {
                g = c;
            } else if pw.is_one() {
                l = c;
            } else if pw.is_zero() {
                return Err(bad("constant term"));
            } else {
                return Err(bad("power other than x or x^2"));
            }
        }
        Ok(FunctionFactor::exponential(g, l))
    }

    fn system_macro(&self, kind: MacroKind, system: &str, level: &BigInt) -> Result<OpExpr, DslError> {
        let sys: SystemKind = system.parse().map_err(|_| DslError::UnknownSystem(system.to_string()))?;
        let max = if sys == SystemKind::Sho1d { 0 } else { self.opts.max_level };
        let lv = level
            .to_u32()
            .filter(|&v| v <= max)
            .ok_or_else(|| DslError::LevelOutOfRange { level: level.to_string(), max })?;
        Ok(match kind {
            MacroKind::Lower => lowering_op(sys, lv),
            MacroKind::Raise => raising_op(sys, lv),
            MacroKind::Hamiltonian => hamiltonian(sys, lv),
        })
    }

    fn power(&self, base: &SourceAst, e: &Rational) -> Result<OpAst, DslError> {
        let b = self.eval(base)?;
        let unsupported = |why: &str| DslError::UnsupportedPower(format!("`({b})^({e})`: {why}"));
        if b.is_zero() {
            return if e.is_positive() { Ok(OpAst::Expr(b)) } else { Err(unsupported("power of zero")) };
        }
        if e.is_integer() {
            let (b, n) = if e.is_negative() {
                let inv = b.monomial_inverse().ok_or_else(|| unsupported("negative power of a non-monomial"))?;
                (inv, -e.numer())
            } else {
                (b.clone(), e.numer().clone())
            };
            if let Some(t) = b.single_term().filter(|t| t.mom == 0) {
                let n = n.to_u64().filter(|&n| n <= MAX_TERM_POWER).ok_or(DslError::TooLarge)?;
                let coeff = t.coeff.pow(n as i32).expect("nonzero coefficient");
                return Ok(OpAst::Expr(OpExpr::term(coeff, t.factor.pow(&int(n as i64)), 0)));
            }
            let n = n.to_u32().filter(|&n| n <= MAX_SUM_POWER).ok_or(DslError::TooLarge)?;
            return Ok(OpAst::pow(OpAst::Expr(b), n));
        }
        // fractional powers: single momentum-free terms only
        let t =
            b.single_term().filter(|t| t.mom == 0).ok_or_else(|| unsupported("base is not a single function term"))?;
        let den = e.denom().to_u32().unwrap_or(u32::MAX);
        let pure_pi =
            t.factor.is_one() && t.coeff.radicand().is_one() && t.coeff.value().im.is_zero() && t.coeff.re().is_one();
        if pure_pi {
            let pi4 = Rational::from_integer(BigInt::from(t.coeff.pi4())) * e;
            let p = pi4
                .to_integer()
                .to_i32()
                .filter(|_| pi4.is_integer())
                .ok_or_else(|| unsupported("pi exponent must be a multiple of 1/4"))?;
            return Ok(OpAst::Scalar(Scalar::pi_pow(p)));
        }
        if den != 2 {
            return Err(unsupported("exponent denominator must be 1 or 2"));
        }
        let power = &t.factor.power * e;
        if !(&power * int(2)).is_integer() {
            return Err(unsupported("coordinate power leaves half-integers"));
        }
        let root = t.coeff.sqrt_positive().ok_or_else(|| unsupported("coefficient has no exact square root"))?;
        let k = e.numer().to_i32().filter(|k| k.unsigned_abs() as u64 <= MAX_TERM_POWER).ok_or(DslError::TooLarge)?;
        let coeff = root.pow(k).expect("nonzero root");
        let factor = FunctionFactor::new(power, &t.factor.gauss * e, &t.factor.linear * e);
        Ok(OpAst::Expr(OpExpr::term(coeff, factor, 0)))
    }
}

pub fn lower(ast: &SourceAst) -> Result<OpAst, DslError> {
    lower_with(ast, LowerOptions::default())
}

pub fn lower_with(ast: &SourceAst, opts: LowerOptions) -> Result<OpAst, DslError> {
    Lowerer { opts }.lower(ast)
}

/// Lowers and normal-orders under the option's budget.
pub fn evaluate_ast(ast: &SourceAst, opts: LowerOptions) -> Result<OpExpr, DslError> {
    Lowerer { opts }.eval(ast)
}
