//! Text front end for operator expressions.
//!
//! Grammar, from lowest to highest binding:
//!
//! ```text
//! sum      := product (("+" | "-") product)*
//! product  := unary (("*" | "/") unary | juxtaposed)*
//! juxtaposed := unary starting with "(" or "["
//! unary    := "-"* power
//! power    := atom ("^" exponent)*          right-associative
//! exponent := ["-"] INT | "(" ["-"] INT ["/" INT] ")"
//! atom     := INT | "x" | "r" | "rho" | "p" | "i" | "pi"
//!           | "sqrt" "(" ["-"] INT ["/" INT] ")"
//!           | "exp" "(" sum ")"
//!           | ("A" | "Adag" | "H") "(" IDENT "," ["-"] INT ")"
//!           | "(" sum ")" | "[" sum "," sum "]"
//! ```

mod lexer;
mod lower;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::algebra::OpExpr;

pub use lexer::{lex, Token, TokenKind};
pub use lower::{evaluate_ast, lower, lower_with, LowerOptions};
pub use parser::{parse, MacroKind, SourceAst, MAX_DEPTH};

/// Positioned syntax error; `offset` is a byte offset, equal to the input
/// length when the input ended early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl ParseError {
    /// The source line with a caret under the offending byte.
    pub fn caret(&self, src: &str) -> String {
        let line_start = src[..self.offset.min(src.len())].rfind('\n').map_or(0, |i| i + 1);
        let line_end = src[line_start..].find('\n').map_or(src.len(), |i| line_start + i);
        let col = src[line_start..self.offset.min(src.len())].chars().count();
        format!("{}\n{}^", &src[line_start..line_end], " ".repeat(col))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: expected {}, found {}", self.offset, self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("level {level} out of range (allowed 0..={max})")]
    LevelOutOfRange { level: String, max: u32 },
    #[error("unsupported power {0}")]
    UnsupportedPower(String),
    #[error("divisor `{0}` is not a single invertible term")]
    NonMonomialDivisor(String),
    #[error("exp argument must be g*x^2 + l*x: {0}")]
    ExpArgument(String),
    #[error("expression exceeds the normal-ordering budget")]
    TooLarge,
}

/// Parses, lowers and normal-orders with default options.
pub fn evaluate(src: &str) -> Result<OpExpr, DslError> {
    evaluate_ast(&parse(src)?, LowerOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::render::render;
    use crate::algebra::Format;
    use crate::systems::{hamiltonian, lowering_op, raising_op, SystemKind};

    fn text(s: &str) -> String {
        render(&evaluate(s).unwrap(), Format::Text)
    }

    #[test]
    fn commutator_of_gaussian() {
        assert_eq!(text("[p, exp(-x^2)]"), "2*i*x*exp(-x^2)");
        assert_eq!(text("0*x"), "0");
    }

    #[test]
    fn macros() {
        assert_eq!(evaluate("A(sho1d, 0)").unwrap(), lowering_op(SystemKind::Sho1d, 0));
        assert_eq!(evaluate("sqrt(1/2)*(p - i*x)").unwrap(), lowering_op(SystemKind::Sho1d, 0));
        assert_eq!(evaluate("Adag(coul3d, 1)").unwrap(), raising_op(SystemKind::Coul3d, 1));
        assert_eq!(evaluate("H(osc3d, 2)").unwrap(), hamiltonian(SystemKind::Osc3d, 2));
        assert_eq!(evaluate("H(osc3d, 2)").unwrap(), evaluate("p^2/2 + 3/x^2 + x^2/2").unwrap());
        assert!(matches!(evaluate("A(sho9d, 0)"), Err(DslError::UnknownSystem(_))));
        assert!(matches!(evaluate("A(osc3d, 13)"), Err(DslError::LevelOutOfRange { .. })));
        assert!(matches!(evaluate("A(osc3d, -1)"), Err(DslError::LevelOutOfRange { .. })));
    }

    #[test]
    fn powers_and_division() {
        assert_eq!(text("x^(3/2)*x^(1/2)"), "x^2");
        assert_eq!(text("(4*x^2)^(1/2)"), "2*x");
        assert_eq!(text("pi^(-1/4)"), "pi^(-1/4)");
        assert_eq!(text("1/x"), "x^(-1)");
        assert_eq!(text("exp(-x^2/2)^2"), "exp(-x^2)");
        assert_eq!(text("(x + 1)^2"), "1 + 2*x + x^2");
        assert!(matches!(evaluate("1/(x + 1)"), Err(DslError::NonMonomialDivisor(_))));
        assert!(matches!(evaluate("(x + 1)^(1/2)"), Err(DslError::UnsupportedPower(_))));
        assert!(matches!(evaluate("x^(1/3)"), Err(DslError::UnsupportedPower(_))));
        assert!(matches!(evaluate("exp(x + 1)"), Err(DslError::ExpArgument(_))));
        assert!(matches!(evaluate("exp(p)"), Err(DslError::ExpArgument(_))));
        assert!(matches!(evaluate("p^100"), Err(DslError::TooLarge)));
        assert!(matches!(evaluate("(x+1)^1000"), Err(DslError::TooLarge)));
    }

    #[test]
    fn caret_points_at_offset() {
        let e = parse("p +").unwrap_err();
        assert_eq!(e.caret("p +"), "p +\n   ^");
    }
}
