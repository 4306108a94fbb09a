use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lexer::{lex, Token, TokenKind};
use super::ParseError;
use crate::num::{rational_pow, Rational};

/// Groups, brackets and calls nested deeper than this are rejected.
pub const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacroKind {
    Lower,
    Raise,
    Hamiltonian,
}

impl MacroKind {
    pub fn name(self) -> &'static str {
        match self {
            MacroKind::Lower => "A",
            MacroKind::Raise => "Adag",
            MacroKind::Hamiltonian => "H",
        }
    }
}

/// Parsed expression before lowering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceAst {
    Integer(BigInt),
    Coord,
    Momentum,
    Imag,
    Pi,
    Sqrt(Rational),
    Exp(Box<SourceAst>),
    Macro { kind: MacroKind, system: String, level: BigInt },
    Sum(Vec<SourceAst>),
    Product(Vec<SourceAst>),
    Div(Box<SourceAst>, Box<SourceAst>),
    Neg(Box<SourceAst>),
    Power(Box<SourceAst>, Rational),
    Commutator(Box<SourceAst>, Box<SourceAst>),
}

fn exp_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// S-expression form, used by the golden precedence tests.
impl fmt::Display for SourceAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, items: &[&SourceAst]| {
            write!(f, "({head}")?;
            for it in items {
                write!(f, " {it}")?;
            }
            write!(f, ")")
        };
        match self {
            SourceAst::Integer(n) => write!(f, "{n}"),
            SourceAst::Coord => f.write_str("x"),
            SourceAst::Momentum => f.write_str("p"),
            SourceAst::Imag => f.write_str("i"),
            SourceAst::Pi => f.write_str("pi"),
            SourceAst::Sqrt(q) => write!(f, "(sqrt {})", exp_text(q)),
            SourceAst::Exp(a) => list(f, "exp", &[a]),
            SourceAst::Macro { kind, system, level } => write!(f, "({} {system} {level})", kind.name()),
            SourceAst::Sum(v) => list(f, "sum", &v.iter().collect::<Vec<_>>()),
            SourceAst::Product(v) => list(f, "prod", &v.iter().collect::<Vec<_>>()),
            SourceAst::Div(a, b) => list(f, "div", &[a, b]),
            SourceAst::Neg(a) => list(f, "neg", &[a]),
            SourceAst::Power(a, e) => write!(f, "(pow {a} {})", exp_text(e)),
            SourceAst::Commutator(a, b) => list(f, "comm", &[a, b]),
        }
    }
}

struct Parser<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    end: usize,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

/// Largest exponent magnitude accepted inside a `^` chain.
const MAX_CHAIN_EXPONENT: u32 = 64;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let found = self.peek().map_or_else(|| "end of input".to_string(), |t| format!("`{}`", t.lexeme));
        ParseError { offset: self.offset(), expected, found }
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &'static str) -> PResult<Token<'a>> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(vec![what])),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(self.error(vec!["shallower nesting"]))
        } else {
            Ok(())
        }
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn sum(&mut self) -> PResult<SourceAst> {
        self.enter()?;
        let mut items = vec![self.product()?];
        loop {
            if self.eat(TokenKind::Plus) {
                items.push(self.product()?);
            } else if self.eat(TokenKind::Minus) {
                items.push(SourceAst::Neg(Box::new(self.product()?)));
            } else {
                break;
            }
        }
        self.leave();
        Ok(if items.len() == 1 { items.pop().unwrap() } else { SourceAst::Sum(items) })
    }

    fn product(&mut self) -> PResult<SourceAst> {
        let mut items = vec![self.unary()?];
        loop {
            if self.eat(TokenKind::Star) {
                items.push(self.unary()?);
            } else if self.eat(TokenKind::Slash) {
                let den = self.unary()?;
                let num = if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    SourceAst::Product(std::mem::take(&mut items))
                };
                items = vec![SourceAst::Div(Box::new(num), Box::new(den))];
            } else if matches!(self.peek_kind(), Some(TokenKind::LParen | TokenKind::LBracket)) {
                items.push(self.unary()?);
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { SourceAst::Product(items) })
    }

    fn unary(&mut self) -> PResult<SourceAst> {
        let mut negs = 0usize;
        while self.eat(TokenKind::Minus) {
            negs += 1;
        }
        let p = self.power()?;
        Ok(if negs % 2 == 1 { SourceAst::Neg(Box::new(p)) } else { p })
    }

    fn power(&mut self) -> PResult<SourceAst> {
        let base = self.atom()?;
        let mut chain = Vec::new();
        while self.eat(TokenKind::Caret) {
            let at = self.offset();
            chain.push((at, self.exponent()?));
        }
        let Some((_, mut e)) = chain.pop() else { return Ok(base) };
        // right-associative: a^b^c = a^(b^c)
        while let Some((at, b)) = chain.pop() {
            e = chain_power(&b, &e).ok_or(ParseError {
                offset: at,
                expected: vec!["exponent chain with a small rational value"],
                found: format!("`{}^{}`", exp_text(&b), exp_text(&e)),
            })?;
        }
        Ok(SourceAst::Power(Box::new(base), e))
    }

    fn integer(&mut self) -> PResult<BigInt> {
        let t = self.expect(TokenKind::Integer, "integer")?;
        Ok(t.lexeme.parse().expect("lexer only yields digits"))
    }

    fn signed_integer(&mut self) -> PResult<BigInt> {
        let neg = self.eat(TokenKind::Minus);
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    /// `[-]INT [/ INT]`
    fn signed_rational(&mut self) -> PResult<Rational> {
        let num = self.signed_integer()?;
        let den = if self.eat(TokenKind::Slash) {
            let at = self.offset();
            let d = self.integer()?;
            if d.is_zero() {
                return Err(ParseError { offset: at, expected: vec!["nonzero denominator"], found: "`0`".into() });
            }
            d
        } else {
            BigInt::one()
        };
        Ok(Rational::new(num, den))
    }

    /// `[-]INT` or `( [-]INT [/ INT] )`
    fn exponent(&mut self) -> PResult<Rational> {
        match self.peek_kind() {
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let q = self.signed_rational()?;
                self.expect(TokenKind::RParen, ")")?;
                Ok(q)
            }
            Some(TokenKind::Integer | TokenKind::Minus) => Ok(Rational::from_integer(self.signed_integer()?)),
            _ => Err(self.error(vec!["integer", "("])),
        }
    }

    fn call_args_open(&mut self) -> PResult<()> {
        self.expect(TokenKind::LParen, "(")?;
        Ok(())
    }

    fn atom(&mut self) -> PResult<SourceAst> {
        let Some(tok) = self.peek().cloned() else { return Err(self.error(vec!["operand"])) };
        match tok.kind {
            TokenKind::Integer => Ok(SourceAst::Integer(self.integer()?)),
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(TokenKind::RParen, ")")?;
                Ok(inner)
            }
            TokenKind::LBracket => {
                self.pos += 1;
                self.enter()?;
                let a = self.sum()?;
                self.expect(TokenKind::Comma, ",")?;
                let b = self.sum()?;
                self.expect(TokenKind::RBracket, "]")?;
                self.leave();
                Ok(SourceAst::Commutator(Box::new(a), Box::new(b)))
            }
            TokenKind::Ident => {
                self.pos += 1;
                match tok.lexeme {
                    "x" | "r" | "rho" => Ok(SourceAst::Coord),
                    "p" => Ok(SourceAst::Momentum),
                    "i" => Ok(SourceAst::Imag),
                    "pi" => Ok(SourceAst::Pi),
                    "sqrt" => {
                        self.call_args_open()?;
                        let q = self.signed_rational()?;
                        self.expect(TokenKind::RParen, ")")?;
                        Ok(SourceAst::Sqrt(q))
                    }
                    "exp" => {
                        self.call_args_open()?;
                        let a = self.sum()?;
                        self.expect(TokenKind::RParen, ")")?;
                        Ok(SourceAst::Exp(Box::new(a)))
                    }
                    "A" | "Adag" | "H" => {
                        let kind = match tok.lexeme {
                            "A" => MacroKind::Lower,
                            "Adag" => MacroKind::Raise,
                            _ => MacroKind::Hamiltonian,
                        };
                        self.call_args_open()?;
                        let system = self.expect(TokenKind::Ident, "system name")?.lexeme.to_string();
                        self.expect(TokenKind::Comma, ",")?;
                        let level = self.signed_integer()?;
                        self.expect(TokenKind::RParen, ")")?;
                        Ok(SourceAst::Macro { kind, system, level })
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.error(vec!["x", "r", "rho", "p", "i", "pi", "sqrt", "exp", "A", "Adag", "H"]))
                    }
                }
            }
            _ => Err(self.error(vec!["operand"])),
        }
    }
}

/// `b^e` for a small integer `e`, when the result stays small.
fn chain_power(b: &Rational, e: &Rational) -> Option<Rational> {
    if !e.is_integer() || e.abs() > Rational::from_integer(MAX_CHAIN_EXPONENT.into()) {
        return None;
    }
    let n = e.numer().to_i64()?;
    if b.is_zero() && n < 0 {
        return None;
    }
    let r = rational_pow(b, n);
    (r.numer().bits() <= 256 && r.denom().bits() <= 256).then_some(r)
}

/// Parses one expression; the whole input must be consumed.
pub fn parse(src: &str) -> Result<SourceAst, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), depth: 0 };
    let ast = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(p.error(vec!["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(ast)
}
