use crate::algebra::expr::OpExpr;
use crate::algebra::factor::FunctionFactor;
use crate::scalar::Scalar;

/// Pre-canonical operator tree, as produced by the DSL or by hand.
#[derive(Clone, Debug, PartialEq)]
pub enum OpAst {
    Coord,
    Momentum,
    Factor(FunctionFactor),
    Scalar(Scalar),
    /// An already normal-ordered subexpression.
    Expr(OpExpr),
    Sum(Vec<OpAst>),
    Product(Vec<OpAst>),
    Neg(Box<OpAst>),
    Pow(Box<OpAst>, u32),
    Commutator(Box<OpAst>, Box<OpAst>),
}

/// Size limits for normal ordering untrusted input.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_terms: usize,
    pub max_momentum: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_terms: 4_000, max_momentum: 32 }
    }
}

/// Raised when an intermediate result exceeds the [`Budget`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverBudget;

impl OpAst {
    pub fn sum(items: Vec<OpAst>) -> OpAst {
        OpAst::Sum(items)
    }

    pub fn product(items: Vec<OpAst>) -> OpAst {
        OpAst::Product(items)
    }

    pub fn commutator(a: OpAst, b: OpAst) -> OpAst {
        OpAst::Commutator(Box::new(a), Box::new(b))
    }

    pub fn pow(a: OpAst, e: u32) -> OpAst {
        OpAst::Pow(Box::new(a), e)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: OpAst) -> OpAst {
        OpAst::Neg(Box::new(a))
    }

    pub fn depth(&self) -> usize {
        match self {
            OpAst::Sum(v) | OpAst::Product(v) => 1 + v.iter().map(OpAst::depth).max().unwrap_or(0),
            OpAst::Neg(a) | OpAst::Pow(a, _) => 1 + a.depth(),
            OpAst::Commutator(a, b) => 1 + a.depth().max(b.depth()),
            _ => 1,
        }
    }
}

pub fn normal_order(ast: &OpAst) -> OpExpr {
    let unbounded = Budget { max_terms: usize::MAX, max_momentum: u32::MAX };
    normal_order_bounded(ast, unbounded).expect("unbounded normal ordering cannot exceed its budget")
}

/// Normal ordering that gives up once any intermediate grows past `budget`.
pub fn normal_order_bounded(ast: &OpAst, budget: Budget) -> Result<OpExpr, OverBudget> {
    let check = |e: OpExpr| {
        if e.len() > budget.max_terms || e.max_momentum() > budget.max_momentum {
            Err(OverBudget)
        } else {
            Ok(e)
        }
    };
    let go = |a: &OpAst| normal_order_bounded(a, budget);
    match ast {
        OpAst::Coord => Ok(OpExpr::coord()),
        OpAst::Momentum => Ok(OpExpr::momentum()),
        OpAst::Factor(f) => Ok(OpExpr::factor(f.clone())),
        OpAst::Scalar(s) => Ok(OpExpr::scalar(s.clone())),
        OpAst::Expr(e) => check(e.clone()),
        OpAst::Sum(items) => {
            let mut acc = OpExpr::zero();
            for it in items {
                acc = check(&acc + &go(it)?)?;
            }
            Ok(acc)
        }
        OpAst::Product(items) => {
            let mut acc = OpExpr::one();
            for it in items {
                let rhs = go(it)?;
                guard_product(&acc, &rhs, budget)?;
                acc = check(acc.mul(&rhs))?;
            }
            Ok(acc)
        }
        OpAst::Neg(a) => Ok(-&go(a)?),
        OpAst::Pow(a, e) => {
            let base = go(a)?;
            let mut acc = OpExpr::one();
            for _ in 0..*e {
                guard_product(&acc, &base, budget)?;
                acc = check(acc.mul(&base))?;
            }
            Ok(acc)
        }
        OpAst::Commutator(a, b) => {
            let (x, y) = (go(a)?, go(b)?);
            guard_product(&x, &y, budget)?;
            check(x.commutator(&y))
        }
    }
}

/// Rejects products whose momentum degree or naive expansion size is already
/// out of range, before doing the work.
fn guard_product(a: &OpExpr, b: &OpExpr, budget: Budget) -> Result<(), OverBudget> {
    let mom = a.max_momentum() as u64 + b.max_momentum() as u64;
    let size = (a.len() as u64).saturating_mul(b.len() as u64).saturating_mul(a.max_momentum() as u64 + 1);
    if mom > budget.max_momentum as u64 || size > (budget.max_terms as u64).saturating_mul(4) {
        Err(OverBudget)
    } else {
        Ok(())
    }
}
